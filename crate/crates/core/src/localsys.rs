//! Representations of the edge-path group and the locally constant sheaves
//! they correspond to.
//!
//! Convention: along an edge `u -> v` with edge word `w`, sections transport
//! by `ρ(w)^{-1}`, so the holonomy of a loop `γ` is `ρ(γ)^{-1}` and `ρ` is a
//! homomorphism with words evaluated left to right.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::cellsheaf::{is_locally_constant, sheaf_cohomology, CellularSheaf};
use crate::error::{Error, Result};
use crate::exactalg::{rank, FpModule, Matrix, RingSpec};
use crate::fundgroup::{letter_generator, CosetTable, EdgeLabeling, GroupPresentation, Word};
use crate::json::{matrix_from_value, matrix_to_value, parse_err};
use crate::simplicial::SimplicialComplex;

/// Invertible matrices for the generators of a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    ring: RingSpec,
    dimension: usize,
    presentation: GroupPresentation,
    matrices: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl Representation {
    /// Checks shapes and invertibility; relators are checked by
    /// [`validate_representation`] (or use [`Representation::checked`]).
    pub fn new(ring: RingSpec, dimension: usize, presentation: GroupPresentation, matrices: Vec<Matrix>) -> Result<Self> {
        if matrices.len() != presentation.generator_count() {
            return Err(Error::DimensionMismatch(format!("{} generators but {} matrices", presentation.generator_count(), matrices.len())));
        }
        let mut inverses = Vec::with_capacity(matrices.len());
        for m in &matrices {
            if m.ring() != ring {
                return Err(Error::RingMismatch(ring, m.ring()));
            }
            if m.rows() != dimension || m.cols() != dimension {
                return Err(Error::DimensionMismatch(format!("generator matrix must be {dimension}x{dimension}")));
            }
            inverses.push(m.inverse()?);
        }
        Ok(Representation { ring, dimension, presentation, matrices, inverses })
    }

    /// [`Representation::new`] plus the relator check.
    pub fn checked(ring: RingSpec, dimension: usize, presentation: GroupPresentation, matrices: Vec<Matrix>) -> Result<Self> {
        let rho = Representation::new(ring, dimension, presentation, matrices)?;
        let bad = validate_representation(&rho);
        if bad.is_empty() {
            Ok(rho)
        } else {
            Err(Error::InvalidRepresentation(bad))
        }
    }

    pub fn trivial(presentation: &GroupPresentation, ring: RingSpec, dimension: usize) -> Self {
        let id = Matrix::identity(ring, dimension);
        Representation::new(ring, dimension, presentation.clone(), vec![id; presentation.generator_count()]).expect("identity")
    }

    /// One-dimensional representation sending generator `i` to `scalars[i]`.
    pub fn from_scalars(presentation: &GroupPresentation, ring: RingSpec, scalars: &[i64]) -> Result<Self> {
        let ms = scalars.iter().map(|&s| Matrix::from_i64(ring, 1, 1, &[s])).collect();
        Representation::checked(ring, 1, presentation.clone(), ms)
    }

    /// `g ↦ -1` exactly when `g` is nontrivial in a group of order two.
    pub fn sign(table: &CosetTable, ring: RingSpec) -> Result<Self> {
        if !table.is_complete() || table.coset_count() != 2 || !table.is_trivial_subgroup() {
            return Err(Error::InvalidRepresentation(Vec::new()));
        }
        let p = table.presentation();
        let scalars: Vec<i64> = (0..p.generator_count()).map(|g| if table.generator_permutation(g)[0] == 1 { -1 } else { 1 }).collect();
        Representation::from_scalars(p, ring, &scalars)
    }

    /// Permutation representation on the cosets of a complete table:
    /// `g` sends basis vector `e_c` to `e_{c·g^{-1}}`.
    pub fn permutation(table: &CosetTable, ring: RingSpec) -> Result<Self> {
        if !table.is_complete() {
            return Err(Error::IncompleteTable);
        }
        let n = table.coset_count();
        let p = table.presentation();
        let ms = (0..p.generator_count())
            .map(|g| {
                let mut m = Matrix::zeros(ring, n, n);
                for c in 0..n {
                    m.set(table.act_letter(c, -(g as i32 + 1)), c, ring.one());
                }
                m
            })
            .collect();
        Representation::checked(ring, n, p.clone(), ms)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn letter(&self, l: i32) -> &Matrix {
        let g = letter_generator(l);
        if l > 0 {
            &self.matrices[g]
        } else {
            &self.inverses[g]
        }
    }

    /// `ρ(l_1)ρ(l_2)...ρ(l_k)`.
    pub fn evaluate(&self, w: &Word) -> Matrix {
        w.letters().iter().fold(Matrix::identity(self.ring, self.dimension), |acc, &l| &acc * self.letter(l))
    }

    pub fn is_trivial(&self) -> bool {
        self.matrices.iter().all(Matrix::is_identity)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_string(),
            "dimension": self.dimension,
            "matrices": self.matrices.iter().map(matrix_to_value).collect::<Vec<_>>(),
        })
    }

    /// Reads `{"ring", "dimension", "matrices"}`, ordered by generator index
    /// of `presentation`, and validates relators.
    pub fn from_json(presentation: &GroupPresentation, v: &Value) -> Result<Self> {
        let ring: RingSpec =
            v.get("ring").and_then(Value::as_str).ok_or_else(|| Error::Parse("representation needs \"ring\"".into()))?.parse()?;
        let d =
            v.get("dimension").and_then(Value::as_u64).ok_or_else(|| Error::Parse("representation needs \"dimension\"".into()))? as usize;
        let ms = v.get("matrices").and_then(Value::as_array).ok_or_else(|| Error::Parse("representation needs \"matrices\"".into()))?;
        let ms = ms.iter().map(|m| matrix_from_value(ring, m, Some((d, d)))).collect::<Result<_>>()?;
        Representation::checked(ring, d, presentation.clone(), ms)
    }

    pub fn parse_json(presentation: &GroupPresentation, text: &str) -> Result<Self> {
        Representation::from_json(presentation, &serde_json::from_str(text).map_err(parse_err)?)
    }
}

/// Indices of relators that do not evaluate to the identity.
pub fn validate_representation(rho: &Representation) -> Vec<usize> {
    rho.presentation.relators().iter().enumerate().filter(|(_, r)| !rho.evaluate(r).is_identity()).map(|(i, _)| i).collect()
}

/// A module over the group ring, with the generator action when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    pub module: FpModule,
    /// Generator matrices on a basis of `module` (free modules only).
    pub action: Option<Representation>,
}

impl GModule {
    pub fn ring(&self) -> RingSpec {
        self.module.ring()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "module": self.module,
            "action": self.action.as_ref().map(Representation::to_json),
        })
    }
}

fn check_labeling(x: &SimplicialComplex, l: &EdgeLabeling) -> Result<()> {
    if **l.complex() != *x {
        return Err(Error::PresentationMismatch);
    }
    Ok(())
}

/// The locally constant sheaf `ℒ_ρ`: every stalk is `ring^d`, and the map
/// into `σ` from the face `τ` is `ρ` of the edge word from the first vertex
/// of `σ` to the first vertex of `τ`.
pub fn rep_to_sheaf(x: &Arc<SimplicialComplex>, l: &EdgeLabeling, rho: &Representation) -> Result<CellularSheaf> {
    check_labeling(x, l)?;
    if rho.presentation != l.presentation() {
        return Err(Error::PresentationMismatch);
    }
    let bad = validate_representation(rho);
    if !bad.is_empty() {
        return Err(Error::InvalidRepresentation(bad));
    }
    let (ring, d) = (rho.ring, rho.dimension);
    let dims = x.dimension() + 1;
    let stalks = (0..dims).map(|k| vec![d; x.count(k)]).collect();
    let id = Matrix::identity(ring, d);
    let mut restrictions = vec![Vec::new()];
    for k in 1..dims {
        let level = x
            .simplices(k)
            .iter()
            .map(|s| {
                // only dropping the first vertex moves the minimum
                let mut maps = vec![rho.evaluate(&l.edge_word(s[0], s[1]).expect("edge of a simplex"))];
                maps.extend(std::iter::repeat_n(id.clone(), k));
                maps
            })
            .collect();
        restrictions.push(level);
    }
    CellularSheaf::new(x.clone(), ring, stalks, restrictions)
}

/// Holonomy of a locally constant sheaf, trivialized along the spanning tree.
pub fn sheaf_to_rep(x: &Arc<SimplicialComplex>, l: &EdgeLabeling, f: &CellularSheaf) -> Result<Representation> {
    check_labeling(x, l)?;
    if **f.complex() != **x {
        return Err(Error::ComplexMismatch);
    }
    if !is_locally_constant(f)? {
        return Err(Error::NotLocallyConstant);
    }
    let ring = f.ring();
    let bp = l.basepoint();
    let d = f.stalk_rank(0, bp);
    // transport a -> b across the edge {a, b}
    let transport = |a: usize, b: usize| -> Result<Matrix> {
        let e = x.index_of(&[a.min(b), a.max(b)]).ok_or(Error::NotAnEdge(a, b))?;
        // position 1 drops the larger vertex, so it is the map from the smaller one
        let (from_small, from_large) = (f.restriction(1, e, 1), f.restriction(1, e, 0));
        let (ra, rb) = if a < b { (from_small, from_large) } else { (from_large, from_small) };
        rb.inverse()?.try_mul(ra)
    };
    // frames φ_v : F(bp) -> F(v) along tree paths
    let mut frame: Vec<Option<Matrix>> = vec![None; x.vertex_count()];
    frame[bp] = Some(Matrix::identity(ring, d));
    for v in 0..x.vertex_count() {
        let path = l.tree_path(v);
        for w in path.windows(2) {
            if frame[w[1]].is_none() {
                let prev = frame[w[0]].clone().expect("tree paths start at the basepoint");
                frame[w[1]] = Some(transport(w[0], w[1])?.try_mul(&prev)?);
            }
        }
    }
    let frame: Vec<Matrix> = frame.into_iter().map(|m| m.expect("connected")).collect();
    let matrices = (0..l.generator_count())
        .map(|g| {
            let (u, v) = l.generator_edge(g);
            frame[u].inverse()?.try_mul(&transport(v, u)?)?.try_mul(&frame[v])
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::checked(ring, d, l.presentation(), matrices)
}

/// `E^G` against `H^0(X, ℒ_E)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InvariantsReport {
    pub invariants: FpModule,
    pub global_sections: FpModule,
    pub equal: bool,
}

/// Kernel of the stacked `ρ(g_i) - I` (a free module).
pub fn invariants(rho: &Representation) -> FpModule {
    let (ring, d) = (rho.ring, rho.dimension);
    let blocks: Vec<Matrix> = rho.matrices.iter().map(|m| m - &Matrix::identity(ring, d)).collect();
    let stacked = Matrix::vstack(ring, d, &blocks.iter().collect::<Vec<_>>());
    FpModule::free(ring, d - rank(&stacked))
}

pub fn invariants_match(x: &Arc<SimplicialComplex>, l: &EdgeLabeling, rho: &Representation) -> Result<InvariantsReport> {
    let invariants = invariants(rho);
    let global_sections = sheaf_cohomology(&rep_to_sheaf(x, l, rho)?, 0)?;
    let equal = invariants == global_sections;
    Ok(InvariantsReport { invariants, global_sections, equal })
}

/// `ρ ∘ h` for a homomorphism given by generator images, checked on the
/// source relators.
pub fn pullback_rep(h: &[Word], source: &GroupPresentation, rho: &Representation) -> Result<Representation> {
    if h.len() != source.generator_count() {
        return Err(Error::DimensionMismatch(format!("{} generator images for {} generators", h.len(), source.generator_count())));
    }
    for (i, r) in source.relators().iter().enumerate() {
        if !rho.evaluate(&r.substitute(h)).is_identity() {
            return Err(Error::RelatorViolation(i));
        }
    }
    Representation::new(rho.ring, rho.dimension, source.clone(), h.iter().map(|w| rho.evaluate(w)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellsheaf::{constant_sheaf, sheaf_cohomology_all, validate_sheaf};
    use crate::fixtures;
    use crate::fundgroup::{presentation, todd_coxeter};

    const Z: RingSpec = RingSpec::Integers;
    const Q: RingSpec = RingSpec::Rationals;

    fn setup(name: &str) -> (Arc<SimplicialComplex>, GroupPresentation, EdgeLabeling) {
        let x = Arc::new(fixtures::by_name(name).unwrap());
        let (p, l) = presentation(&x, 0).unwrap();
        (x, p, l)
    }

    #[test]
    fn relator_validation() {
        let z2 = GroupPresentation::new(1, vec![Word::generator(0).pow(2)]).unwrap();
        assert!(Representation::from_scalars(&z2, Z, &[-1]).is_ok());
        assert_eq!(Representation::from_scalars(&z2, Q, &[2]), Err(Error::InvalidRepresentation(vec![0])));
        let free = GroupPresentation::new(2, vec![]).unwrap();
        assert!(Representation::from_scalars(&free, Q, &[3, 5]).is_ok());
        assert_eq!(Representation::from_scalars(&free, Z, &[3, 1]), Err(Error::NotInvertible(Z)));
    }

    #[test]
    fn trivial_representation_gives_constant_sheaf() {
        for name in fixtures::names() {
            let (x, p, l) = setup(name);
            let f = rep_to_sheaf(&x, &l, &Representation::trivial(&p, Z, 2)).unwrap();
            assert_eq!(f, constant_sheaf(&x, Z, 2), "{name}");
            assert!(sheaf_to_rep(&x, &l, &f).unwrap().is_trivial());
        }
    }

    #[test]
    fn circle_monodromy() {
        let (x, p, l) = setup("circle");
        let f = rep_to_sheaf(&x, &l, &Representation::from_scalars(&p, Q, &[2]).unwrap()).unwrap();
        assert!(sheaf_cohomology_all(&f).unwrap().iter().all(FpModule::is_zero));
        let rho = Representation::from_scalars(&p, Z, &[-1]).unwrap();
        let g = rep_to_sheaf(&x, &l, &rho).unwrap();
        assert_eq!(sheaf_cohomology_all(&g).unwrap(), vec![FpModule::zero(Z), FpModule::cyclic(Z, 2).unwrap()]);
        assert_eq!(sheaf_to_rep(&x, &l, &g).unwrap(), rho);
    }

    #[test]
    fn sign_representation_of_rp2() {
        let (x, p, l) = setup("rp2");
        let t = todd_coxeter(&p, &[], 100);
        let rho = Representation::sign(&t, Z).unwrap();
        let f = rep_to_sheaf(&x, &l, &rho).unwrap();
        assert!(validate_sheaf(&f).is_empty());
        assert!(is_locally_constant(&f).unwrap());
        // twisted coefficients: H^i(RP^2; Z~) = H_{2-i}(RP^2; Z)
        assert_eq!(sheaf_cohomology_all(&f).unwrap(), vec![FpModule::zero(Z), FpModule::cyclic(Z, 2).unwrap(), FpModule::free(Z, 1)]);
        assert_eq!(sheaf_to_rep(&x, &l, &f).unwrap(), rho);
        let r = invariants_match(&x, &l, &rho).unwrap();
        assert!(r.equal && r.invariants.is_zero());
    }

    #[test]
    fn permutation_representation_round_trip() {
        let (x, p, l) = setup("rp2");
        let t = todd_coxeter(&p, &[], 100);
        let rho = Representation::permutation(&t, Q).unwrap();
        assert_eq!(rho.dimension(), 2);
        let f = rep_to_sheaf(&x, &l, &rho).unwrap();
        assert_eq!(sheaf_to_rep(&x, &l, &f).unwrap(), rho);
        assert_eq!(invariants(&rho), FpModule::free(Q, 1));
    }

    #[test]
    fn not_locally_constant_is_rejected() {
        let (x, _, l) = setup("circle");
        let mut j = constant_sheaf(&x, Z, 1).to_json();
        j["restrictions"]["0->0-1"] = json!([[0]]);
        let f = CellularSheaf::from_json(x.clone(), &j).unwrap();
        assert_eq!(sheaf_to_rep(&x, &l, &f), Err(Error::NotLocallyConstant));
    }

    #[test]
    fn pullback_of_representations() {
        let circle = GroupPresentation::new(1, vec![]).unwrap();
        let rho = Representation::from_scalars(&circle, Q, &[3]).unwrap();
        let double = pullback_rep(&[Word::generator(0).pow(2)], &circle, &rho).unwrap();
        assert_eq!(double.matrix(0), &Matrix::from_i64(Q, 1, 1, &[9]));
        assert_eq!(pullback_rep(&[Word::generator(0)], &circle, &rho).unwrap(), rho);
        let wedge = GroupPresentation::new(2, vec![]).unwrap();
        let collapsed = pullback_rep(&[Word::generator(0), Word::empty()], &wedge, &rho).unwrap();
        assert!(collapsed.matrix(1).is_identity());
        let z2 = GroupPresentation::new(1, vec![Word::generator(0).pow(2)]).unwrap();
        assert_eq!(pullback_rep(&[Word::generator(0)], &z2, &rho), Err(Error::RelatorViolation(0)));
    }

    #[test]
    fn json_round_trip() {
        let (_, p, _) = setup("wedge");
        let rho = Representation::from_scalars(&p, Q, &[2, -1]).unwrap();
        assert_eq!(Representation::from_json(&p, &rho.to_json()).unwrap(), rho);
        let bad = json!({"ring": "Q", "dimension": 1, "matrices": [[[1]]]});
        assert!(Representation::from_json(&p, &bad).is_err());
    }
}
