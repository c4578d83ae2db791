use std::sync::Arc;

use serde::Serialize;

use super::qc::{derived_in, require_valid};
use super::{context, Limits};
use crate::cellsheaf::{sheaf_cohomology_all, CellularSheaf};
use crate::error::{Error, Result};
use crate::exactalg::{FpModule, RingSpec};
use crate::groupcoh::{bar_cohomology, multiplication_table};
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Entry {
    pub p: usize,
    pub q: usize,
    pub module: FpModule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollapseReason {
    /// Rows `q ≥ 1` vanish, so `E_2^{n,0} = H^n(X, F)`.
    Aspherical,
    /// The group is trivial, so `E_2^{0,n} = H^n(X, F)`.
    TrivialGroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Collapse {
    pub reason: CollapseReason,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    /// Sum of `dim E_2^{p,q}` over `p + q = degree` inside the window.
    pub e2_dimension: usize,
    pub abutment_dimension: usize,
    pub inequality: bool,
    /// Every possibly nonzero term of the antidiagonal lies in the window.
    pub window_complete: bool,
    pub collapse: Option<Collapse>,
    /// The page is strictly bigger than the abutment, so some later
    /// differential out of or into this antidiagonal is nonzero.
    pub differentials_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Page {
    pub ring: RingSpec,
    pub pmax: usize,
    pub qmax: usize,
    pub group_order: usize,
    pub entries: Vec<E2Entry>,
    /// `H^n(X, F)` for `n ≤ pmax + qmax`.
    pub abutment: Vec<FpModule>,
    pub checks: Vec<DegreeCheck>,
}

impl E2Page {
    pub fn entry(&self, p: usize, q: usize) -> Option<&FpModule> {
        self.entries.iter().find(|e| e.p == p && e.q == q).map(|e| &e.module)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("page serializes")
    }
}

/// The window `0 ≤ p ≤ pmax`, `0 ≤ q ≤ qmax` of
/// `E_2^{p,q} = H^p(G, H^q(X̃, φ^{-1}F)) ⇒ H^{p+q}(X, F)`, field coefficients
/// only, with per-degree checks for `n ≤ pmax`.
pub fn e2_page(x: &Arc<SimplicialComplex>, f: &CellularSheaf, pmax: usize, qmax: usize, limits: &Limits) -> Result<E2Page> {
    let ring = f.ring();
    if !ring.is_field() {
        return Err(Error::NonFieldRing(ring));
    }
    require_valid(f)?;
    let ctx = context(x, limits.budget)?;
    let u = ctx.universal.as_ref().ok_or(Error::InfiniteOrUnknownGroup)?;
    let table = multiplication_table(&u.table)?;

    let mut entries = Vec::new();
    for q in 0..=qmax {
        let coefficients = derived_in(&ctx, f, q)?.action.expect("field coefficients carry an action");
        for p in 0..=pmax {
            let module = bar_cohomology(&table, &coefficients, p as i64, limits.size_cap)?;
            entries.push(E2Entry { p, q, module });
        }
    }
    entries.sort_by_key(|e| (e.p, e.q));

    let mut abutment = sheaf_cohomology_all(f)?;
    abutment.resize(pmax + qmax + 1, FpModule::zero(ring));
    abutment.truncate(pmax + qmax + 1);

    let dim = |m: &FpModule| m.rank();
    let rows_vanish = qmax >= x.dimension() && entries.iter().all(|e| e.q == 0 || e.module.is_zero());
    let trivial_group = table.order() == 1;
    let mut checks = Vec::new();
    for n in 0..=pmax {
        let e2_dimension = entries.iter().filter(|e| e.p + e.q == n).map(|e| dim(&e.module)).sum();
        let abutment_dimension = dim(&abutment[n]);
        let window_complete = n <= qmax || qmax >= x.dimension();
        let collapse = if rows_vanish {
            let h = entries.iter().find(|e| e.p == n && e.q == 0).map_or(0, |e| dim(&e.module));
            Some(Collapse { reason: CollapseReason::Aspherical, holds: h == abutment_dimension })
        } else if trivial_group && n <= qmax {
            let h = entries.iter().find(|e| e.p == 0 && e.q == n).map_or(0, |e| dim(&e.module));
            Some(Collapse { reason: CollapseReason::TrivialGroup, holds: h == abutment_dimension })
        } else {
            None
        };
        checks.push(DegreeCheck {
            degree: n,
            e2_dimension,
            abutment_dimension,
            inequality: e2_dimension >= abutment_dimension,
            window_complete,
            collapse,
            differentials_nonzero: window_complete && e2_dimension > abutment_dimension,
        });
    }
    Ok(E2Page { ring, pmax, qmax, group_order: table.order(), entries, abutment, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellsheaf::constant_sheaf;
    use crate::fixtures;

    fn arc(name: &str) -> Arc<SimplicialComplex> {
        Arc::new(fixtures::by_name(name).unwrap())
    }

    #[test]
    fn rp2_mod_two() {
        let x = arc("rp2");
        let f2 = RingSpec::prime_field(2).unwrap();
        let page = e2_page(&x, &constant_sheaf(&x, f2, 1), 4, 2, &Limits::default()).unwrap();
        assert_eq!(page.group_order, 2);
        for p in 0..=4 {
            assert_eq!(page.entry(p, 0).unwrap(), &FpModule::free(f2, 1));
            assert!(page.entry(p, 1).unwrap().is_zero());
            assert_eq!(page.entry(p, 2).unwrap(), &FpModule::free(f2, 1));
        }
        let dims: Vec<usize> = page.checks.iter().map(|c| c.abutment_dimension).collect();
        assert_eq!(dims, vec![1, 1, 1, 0, 0]);
        assert!(page.checks.iter().all(|c| c.inequality && c.window_complete && c.collapse.is_none()));
        let flagged: Vec<usize> = page.checks.iter().filter(|c| c.differentials_nonzero).map(|c| c.degree).collect();
        assert_eq!(flagged, vec![2, 3, 4]);
    }

    #[test]
    fn collapse_cases() {
        let q = RingSpec::Rationals;
        let s = arc("sphere");
        let page = e2_page(&s, &constant_sheaf(&s, q, 1), 2, 2, &Limits::default()).unwrap();
        assert!(page.checks.iter().all(|c| c.collapse == Some(Collapse { reason: CollapseReason::TrivialGroup, holds: true })));
        assert!((1..=2).all(|p| page.entry(p, 0).unwrap().is_zero()));

        let cone = arc("cone");
        let page = e2_page(&cone, &constant_sheaf(&cone, q, 2), 3, 2, &Limits::default()).unwrap();
        assert!(page.checks.iter().all(|c| c.collapse.is_some_and(|c| c.holds) && !c.differentials_nonzero));
    }

    #[test]
    fn errors() {
        let x = arc("rp2");
        let z = RingSpec::Integers;
        assert_eq!(e2_page(&x, &constant_sheaf(&x, z, 1), 1, 1, &Limits::default()).unwrap_err(), Error::NonFieldRing(z));
        let t = arc("torus");
        let q = RingSpec::Rationals;
        let limits = Limits { budget: 200, ..Limits::default() };
        assert_eq!(e2_page(&t, &constant_sheaf(&t, q, 1), 1, 1, &limits).unwrap_err(), Error::InfiniteOrUnknownGroup);
    }
}
