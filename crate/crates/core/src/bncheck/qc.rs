use std::sync::Arc;

use super::{context, Context, Universal};
use crate::cellsheaf::{cochain_complex_unchecked, pullback, validate_sheaf, CellularSheaf};
use crate::covers::{pullback_sheaf, tree_ball};
use crate::error::{Error, Result};
use crate::exactalg::{kernel, FpModule, Matrix, QuotientBasis};
use crate::localsys::{GModule, Representation};
use crate::simplicial::SimplicialComplex;

/// Radius of the tree ball used for graphs with infinite `π_1`.
const TREE_BALL_RADIUS: usize = 2;

pub(crate) fn require_valid(f: &CellularSheaf) -> Result<()> {
    match validate_sheaf(f).first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidSheaf(format!("restrictions into {:?} from {:?} do not commute", v.coface, v.face))),
    }
}

/// Permutation of `C^d` of the pulled-back sheaf induced by a deck map.
fn deck_cochain_map(up: &CellularSheaf, vertex_map: &[usize], d: usize) -> Matrix {
    let x = up.complex();
    let offsets = up.offsets(d);
    let n = up.cochain_rank(d);
    let mut m = Matrix::zeros(up.ring(), n, n);
    for (s, simplex) in x.simplices(d).iter().enumerate() {
        let mut image: Vec<usize> = simplex.iter().map(|&v| vertex_map[v]).collect();
        image.sort_unstable();
        let t = x.index_of(&image).expect("deck maps are simplicial");
        m.set_block(offsets[t], offsets[s], &Matrix::identity(up.ring(), up.stalk_rank(d, s)));
    }
    m
}

fn finite(ctx: &Context) -> Result<&Universal> {
    ctx.universal.as_ref().ok_or(Error::InfiniteOrUnknownGroup)
}

/// `Qc(F) = Γ(X̃, φ^{-1}F)` with the deck action on a basis of global
/// sections.
pub fn quasicoherator(x: &Arc<SimplicialComplex>, f: &CellularSheaf, budget: usize) -> Result<GModule> {
    require_valid(f)?;
    let ctx = context(x, budget)?;
    qc_in(&ctx, f)
}

pub(crate) fn qc_in(ctx: &Context, f: &CellularSheaf) -> Result<GModule> {
    let u = finite(ctx)?;
    let up = pullback_sheaf(&u.cover, f)?;
    let ring = f.ring();
    let (basis, coords) = match up.complex().dimension() {
        0 => {
            let n = up.cochain_rank(0);
            (Matrix::identity(ring, n), Matrix::identity(ring, n))
        }
        _ => kernel(&crate::cellsheaf::coboundary(&up, 0)),
    };
    let h = basis.cols();
    let matrices = (0..u.deck.generator_count())
        .map(|g| coords.try_mul(&deck_cochain_map(&up, u.deck.generator_map(g), 0))?.try_mul(&basis))
        .collect::<Result<Vec<_>>>()?;
    let action = Representation::checked(ring, h, ctx.presentation.clone(), matrices)?;
    Ok(GModule { module: FpModule::free(ring, h), action: Some(action) })
}

/// `R^i Qc(F) = H^i(X̃, φ^{-1}F)`. Over fields the deck action on a chosen
/// cohomology basis is included; over `Z` only the isomorphism class.
///
/// For graphs whose group is not finite within budget, positive degrees are
/// computed on a finite ball of the universal cover (a tree).
pub fn derived_quasicoherator(x: &Arc<SimplicialComplex>, f: &CellularSheaf, i: i64, budget: usize) -> Result<GModule> {
    if i < 0 {
        return Err(Error::DegreeNegative(i));
    }
    require_valid(f)?;
    let ctx = context(x, budget)?;
    derived_in(&ctx, f, i as usize)
}

pub(crate) fn derived_in(ctx: &Context, f: &CellularSheaf, i: usize) -> Result<GModule> {
    if i == 0 && ctx.universal.is_some() {
        return qc_in(ctx, f);
    }
    let ring = f.ring();
    let Some(u) = &ctx.universal else {
        let x = ctx.labeling.complex();
        if i == 0 || x.dimension() > 1 {
            return Err(Error::InfiniteOrUnknownGroup);
        }
        let ball = tree_ball(&ctx.labeling, TREE_BALL_RADIUS)?;
        let up = pullback(&ball, f)?;
        let c = cochain_complex_unchecked(&up);
        let module = if i as i64 > c.end() { FpModule::zero(ring) } else { c.cohomology_at(i as i64)? };
        return Ok(GModule { module, action: None });
    };
    let up = pullback_sheaf(&u.cover, f)?;
    let c = cochain_complex_unchecked(&up);
    if i as i64 > c.end() {
        let action = Representation::trivial(&ctx.presentation, ring, 0);
        return Ok(GModule { module: FpModule::zero(ring), action: Some(action) });
    }
    let n = i as i64;
    let module = c.cohomology_at(n)?;
    if !ring.is_field() {
        return Ok(GModule { module, action: None });
    }
    let qb = QuotientBasis::compute(c.dim(n), c.differential(n - 1), c.differential(n), ring)?;
    let matrices = (0..u.deck.generator_count())
        .map(|g| qb.projection.try_mul(&deck_cochain_map(&up, u.deck.generator_map(g), i))?.try_mul(&qb.representatives))
        .collect::<Result<Vec<_>>>()?;
    let action = Representation::checked(ring, qb.dimension(), ctx.presentation.clone(), matrices)?;
    Ok(GModule { module, action: Some(action) })
}

/// `H^i(X̃, φ^{-1}F)` for all `i ≤ dim X` as modules only, over any ring.
pub(crate) fn cover_cohomology(ctx: &Context, f: &CellularSheaf) -> Result<Vec<FpModule>> {
    let up = match &ctx.universal {
        Some(u) => pullback_sheaf(&u.cover, f)?,
        None => pullback(&tree_ball(&ctx.labeling, TREE_BALL_RADIUS)?, f)?,
    };
    let c = cochain_complex_unchecked(&up);
    (0..=c.end()).map(|n| c.cohomology_at(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellsheaf::constant_sheaf;
    use crate::exactalg::RingSpec;
    use crate::fixtures;
    use crate::fundgroup::{presentation, todd_coxeter};
    use crate::localsys::{rep_to_sheaf, sheaf_to_rep};

    const Z: RingSpec = RingSpec::Integers;
    const Q: RingSpec = RingSpec::Rationals;

    fn arc(name: &str) -> Arc<SimplicialComplex> {
        Arc::new(fixtures::by_name(name).unwrap())
    }

    #[test]
    fn constant_sheaf_on_rp2() {
        let x = arc("rp2");
        let g = quasicoherator(&x, &constant_sheaf(&x, Z, 1), 100).unwrap();
        assert_eq!(g.module, FpModule::free(Z, 1));
        assert!(g.action.unwrap().is_trivial());
    }

    #[test]
    fn identity_on_local_systems() {
        let x = arc("rp2");
        let (p, l) = presentation(&x, 0).unwrap();
        let t = todd_coxeter(&p, &[], 100);
        for rho in [Representation::sign(&t, Q).unwrap(), Representation::permutation(&t, Q).unwrap(), Representation::sign(&t, Z).unwrap()]
        {
            let f = rep_to_sheaf(&x, &l, &rho).unwrap();
            let back = quasicoherator(&x, &f, 100).unwrap().action.unwrap();
            // both are one- or two-dimensional; compare up to conjugation via characters
            assert_eq!(back.dimension(), rho.dimension());
            for g in 0..p.generator_count() {
                assert_eq!(trace(back.matrix(g)), trace(rho.matrix(g)));
            }
            assert_eq!(sheaf_to_rep(&x, &l, &f).unwrap(), rho);
        }
    }

    fn trace(m: &Matrix) -> crate::exactalg::Scalar {
        (0..m.rows()).map(|i| m.get(i, i).clone()).sum()
    }

    /// Stalk `ring` on the simplices containing vertex 0, zero elsewhere.
    fn open_star_sheaf(x: &Arc<SimplicialComplex>, ring: RingSpec) -> CellularSheaf {
        let rank = |s: &[usize]| usize::from(s.contains(&0));
        let stalks = (0..=x.dimension()).map(|d| x.simplices(d).iter().map(|s| rank(s)).collect()).collect();
        let mut restrictions = vec![Vec::new()];
        for d in 1..=x.dimension() {
            let level = x
                .simplices(d)
                .iter()
                .map(|s| {
                    (0..=d)
                        .map(|i| {
                            let mut face = s.clone();
                            face.remove(i);
                            Matrix::identity(ring, 1).submatrix(0, rank(s), 0, rank(&face))
                        })
                        .collect()
                })
                .collect();
            restrictions.push(level);
        }
        CellularSheaf::new(x.clone(), ring, stalks, restrictions).unwrap()
    }

    #[test]
    fn non_locally_constant_sections_shrink() {
        let x = arc("rp2");
        let f = open_star_sheaf(&x, Q);
        assert!(validate_sheaf(&f).is_empty());
        assert!(!crate::cellsheaf::is_locally_constant(&f).unwrap());
        let g = quasicoherator(&x, &f, 100).unwrap();
        assert!(g.module.rank() < 1);
        assert_eq!(g.module, FpModule::zero(Q));
    }

    #[test]
    fn derived_values() {
        let x = arc("rp2");
        let c = constant_sheaf(&x, Z, 1);
        assert!(derived_quasicoherator(&x, &c, 1, 100).unwrap().module.is_zero());
        assert_eq!(derived_quasicoherator(&x, &c, 2, 100).unwrap().module, FpModule::free(Z, 1));
        assert!(derived_quasicoherator(&x, &c, 2, 100).unwrap().action.is_none());
        let f2 = RingSpec::prime_field(2).unwrap();
        let g = derived_quasicoherator(&x, &constant_sheaf(&x, f2, 1), 2, 100).unwrap();
        assert!(g.action.unwrap().is_trivial());
        let g = derived_quasicoherator(&x, &constant_sheaf(&x, Q, 1), 2, 100).unwrap();
        // the antipodal map reverses orientation
        assert_eq!(g.action.unwrap().matrices().iter().filter(|m| !m.is_identity()).count() > 0, true);
        let s = arc("sphere");
        let cs = constant_sheaf(&s, Q, 1);
        assert!(derived_quasicoherator(&s, &cs, 1, 100).unwrap().module.is_zero());
        assert_eq!(derived_quasicoherator(&s, &cs, 2, 100).unwrap().module, FpModule::free(Q, 1));
        assert_eq!(derived_quasicoherator(&s, &cs, -1, 100).unwrap_err(), Error::DegreeNegative(-1));
    }

    #[test]
    fn infinite_groups() {
        let t = arc("torus");
        assert_eq!(quasicoherator(&t, &constant_sheaf(&t, Q, 1), 50).unwrap_err(), Error::InfiniteOrUnknownGroup);
        let c = arc("circle");
        let f = constant_sheaf(&c, Z, 1);
        assert!(derived_quasicoherator(&c, &f, 1, 50).unwrap().module.is_zero());
        assert_eq!(derived_quasicoherator(&c, &f, 0, 50).unwrap_err(), Error::InfiniteOrUnknownGroup);
    }
}
