//! Cellular sheaves on the face poset of a simplicial complex.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{CochainComplex, FpModule, Matrix, RingSpec};
use crate::json::{matrix_from_value, matrix_to_value, parse_err, parse_simplex_key, simplex_key};
use crate::simplicial::{Simplex, SimplicialComplex, SimplicialMap};

/// Free stalks on every simplex and a restriction map `F(τ) -> F(σ)` for
/// every codimension-one face `τ < σ`.
///
/// `restrictions[d][s][i]` is the map into `simplices(d)[s]` from its face
/// omitting vertex `i`; `restrictions[0]` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularSheaf {
    complex: Arc<SimplicialComplex>,
    ring: RingSpec,
    stalks: Vec<Vec<usize>>,
    restrictions: Vec<Vec<Vec<Matrix>>>,
}

/// A codimension-two pair whose two composites disagree.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub face: Simplex,
    pub coface: Simplex,
}

impl CellularSheaf {
    /// Checks shapes and rings; functoriality is checked by [`validate_sheaf`].
    pub fn new(
        complex: Arc<SimplicialComplex>,
        ring: RingSpec,
        stalks: Vec<Vec<usize>>,
        restrictions: Vec<Vec<Vec<Matrix>>>,
    ) -> Result<Self> {
        let dims = complex.dimension() + 1;
        if stalks.len() != dims || restrictions.len() != dims {
            return Err(Error::InvalidSheaf("stalk or restriction table does not match the complex dimension".into()));
        }
        for d in 0..dims {
            if stalks[d].len() != complex.count(d) {
                return Err(Error::InvalidSheaf(format!("expected {} stalks in dimension {d}", complex.count(d))));
            }
            let expected = if d == 0 { 0 } else { complex.count(d) };
            if restrictions[d].len() != expected {
                return Err(Error::InvalidSheaf(format!("expected {expected} restriction lists in dimension {d}")));
            }
            for (s, maps) in restrictions[d].iter().enumerate() {
                if maps.len() != d + 1 {
                    return Err(Error::InvalidSheaf(format!("simplex {:?} needs {} restrictions", complex.simplices(d)[s], d + 1)));
                }
                for (i, m) in maps.iter().enumerate() {
                    let face = complex.face_index(d, s, i);
                    if m.ring() != ring {
                        return Err(Error::RingMismatch(ring, m.ring()));
                    }
                    if m.rows() != stalks[d][s] || m.cols() != stalks[d - 1][face] {
                        let simplex = &complex.simplices(d)[s];
                        return Err(Error::InvalidSheaf(format!(
                            "restriction {} -> {} is {}x{}, stalks need {}x{}",
                            simplex_key(&complex.simplices(d - 1)[face]),
                            simplex_key(simplex),
                            m.rows(),
                            m.cols(),
                            stalks[d][s],
                            stalks[d - 1][face]
                        )));
                    }
                }
            }
        }
        Ok(CellularSheaf { complex, ring, stalks, restrictions })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn stalk_rank(&self, d: usize, s: usize) -> usize {
        self.stalks[d][s]
    }

    pub fn stalk_rank_of(&self, simplex: &[usize]) -> Option<usize> {
        let d = simplex.len().checked_sub(1)?;
        self.complex.index_of(simplex).map(|s| self.stalks[d][s])
    }

    /// Restriction into `simplices(d)[s]` from the face omitting vertex `i`.
    pub fn restriction(&self, d: usize, s: usize, i: usize) -> &Matrix {
        &self.restrictions[d][s][i]
    }

    /// Composite restriction `F(τ) -> F(σ)` for any face `τ ⊆ σ`, adding the
    /// missing vertices in increasing order.
    pub fn restriction_between(&self, face: &[usize], coface: &[usize]) -> Result<Matrix> {
        let bad = || Error::InvalidSheaf(format!("{} is not a face of {}", simplex_key(face), simplex_key(coface)));
        let mut cur: Vec<usize> = face.to_vec();
        let cur_rank = self.stalk_rank_of(&cur).ok_or_else(bad)?;
        if !self.complex.contains(coface) || !face.iter().all(|v| coface.contains(v)) {
            return Err(bad());
        }
        let mut acc = Matrix::identity(self.ring, cur_rank);
        for &v in coface.iter().filter(|v| !face.contains(v)) {
            let pos = cur.partition_point(|&x| x < v);
            cur.insert(pos, v);
            let d = cur.len() - 1;
            let s = self.complex.index_of(&cur).expect("faces of a simplex are present");
            acc = self.restrictions[d][s][pos].try_mul(&acc)?;
        }
        Ok(acc)
    }

    /// Total rank of the stalks over `d`-simplices.
    pub fn cochain_rank(&self, d: usize) -> usize {
        self.stalks.get(d).map_or(0, |v| v.iter().sum())
    }

    /// Offsets of each `d`-simplex block inside `C^d`.
    pub fn offsets(&self, d: usize) -> Vec<usize> {
        let mut acc = 0;
        self.stalks[d]
            .iter()
            .map(|&r| {
                let o = acc;
                acc += r;
                o
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut stalks = BTreeMap::new();
        let mut restrictions = BTreeMap::new();
        for d in 0..=self.complex.dimension() {
            for (s, simplex) in self.complex.simplices(d).iter().enumerate() {
                stalks.insert(simplex_key(simplex), Value::from(self.stalks[d][s]));
                if d == 0 {
                    continue;
                }
                for i in 0..=d {
                    let face = &self.complex.simplices(d - 1)[self.complex.face_index(d, s, i)];
                    let key = format!("{}->{}", simplex_key(face), simplex_key(simplex));
                    restrictions.insert(key, matrix_to_value(&self.restrictions[d][s][i]));
                }
            }
        }
        json!({"ring": self.ring.to_string(), "stalks": stalks, "restrictions": restrictions})
    }

    /// Reads `{"ring", "stalks": {key: rank}, "restrictions": {"f->c": rows}}`.
    /// Missing stalks are errors; missing restrictions are allowed only when
    /// one side has rank zero.
    pub fn from_json(complex: Arc<SimplicialComplex>, v: &Value) -> Result<Self> {
        let ring: RingSpec =
            v.get("ring").and_then(Value::as_str).ok_or_else(|| Error::Parse("sheaf needs a \"ring\" string".into()))?.parse()?;
        let stalk_obj = v.get("stalks").and_then(Value::as_object).ok_or_else(|| Error::Parse("sheaf needs \"stalks\"".into()))?;
        let empty = serde_json::Map::new();
        let res_obj = v.get("restrictions").and_then(Value::as_object).unwrap_or(&empty);
        let dims = complex.dimension() + 1;
        let mut stalks: Vec<Vec<Option<usize>>> = (0..dims).map(|d| vec![None; complex.count(d)]).collect();
        for (key, rank) in stalk_obj {
            let s = parse_simplex_key(key)?;
            let idx = complex.index_of(&s).ok_or_else(|| Error::InvalidSheaf(format!("{key} is not a simplex")))?;
            let rank = rank.as_u64().ok_or_else(|| Error::Parse(format!("stalk rank of {key} must be a count")))?;
            stalks[s.len() - 1][idx] = Some(rank as usize);
        }
        let stalks: Vec<Vec<usize>> = stalks
            .into_iter()
            .enumerate()
            .map(|(d, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(s, r)| {
                        r.ok_or_else(|| Error::InvalidSheaf(format!("missing stalk for {}", simplex_key(&complex.simplices(d)[s]))))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut given: BTreeMap<(Simplex, Simplex), &Value> = BTreeMap::new();
        for (key, m) in res_obj {
            let (f, c) = key.split_once("->").ok_or_else(|| Error::Parse(format!("bad restriction key {key:?}")))?;
            given.insert((parse_simplex_key(f)?, parse_simplex_key(c)?), m);
        }
        let mut restrictions = vec![Vec::new()];
        for d in 1..dims {
            let mut level = Vec::with_capacity(complex.count(d));
            for (s, simplex) in complex.simplices(d).iter().enumerate() {
                let mut maps = Vec::with_capacity(d + 1);
                for i in 0..=d {
                    let fi = complex.face_index(d, s, i);
                    let face = complex.simplices(d - 1)[fi].clone();
                    let shape = (stalks[d][s], stalks[d - 1][fi]);
                    let m = match given.remove(&(face.clone(), simplex.clone())) {
                        Some(v) => matrix_from_value(ring, v, Some(shape))?,
                        None if shape.0 == 0 || shape.1 == 0 => Matrix::zeros(ring, shape.0, shape.1),
                        None => {
                            return Err(Error::InvalidSheaf(format!(
                                "missing restriction {}->{}",
                                simplex_key(&face),
                                simplex_key(simplex)
                            )))
                        }
                    };
                    maps.push(m);
                }
                level.push(maps);
            }
            restrictions.push(level);
        }
        if let Some(((f, c), _)) = given.into_iter().next() {
            return Err(Error::InvalidSheaf(format!("{}->{} is not a codimension-one incidence", simplex_key(&f), simplex_key(&c))));
        }
        CellularSheaf::new(complex, ring, stalks, restrictions)
    }

    pub fn parse_json(complex: Arc<SimplicialComplex>, text: &str) -> Result<Self> {
        CellularSheaf::from_json(complex, &serde_json::from_str(text).map_err(parse_err)?)
    }
}

/// Every stalk `ring^rank`, every restriction the identity.
pub fn constant_sheaf(x: &Arc<SimplicialComplex>, ring: RingSpec, rank: usize) -> CellularSheaf {
    let dims = x.dimension() + 1;
    let stalks = (0..dims).map(|d| vec![rank; x.count(d)]).collect();
    let id = Matrix::identity(ring, rank);
    let restrictions = (0..dims).map(|d| if d == 0 { Vec::new() } else { vec![vec![id.clone(); d + 1]; x.count(d)] }).collect();
    CellularSheaf { complex: x.clone(), ring, stalks, restrictions }
}

/// Codimension-two pairs where the two composites differ (equivalently, the
/// nonzero blocks of `δδ`).
pub fn validate_sheaf(f: &CellularSheaf) -> Vec<Violation> {
    let x = &f.complex;
    let mut out = Vec::new();
    for d in 2..=x.dimension() {
        for (r, rho) in x.simplices(d).iter().enumerate() {
            for j in 1..=d {
                for i in 0..j {
                    // via ρ∖v_i then drop v_j (now at j-1), and via ρ∖v_j then drop v_i
                    let a = x.face_index(d, r, i);
                    let b = x.face_index(d, r, j);
                    let via_a = &f.restrictions[d][r][i] * &f.restrictions[d - 1][a][j - 1];
                    let via_b = &f.restrictions[d][r][j] * &f.restrictions[d - 1][b][i];
                    if via_a != via_b {
                        let mut face = rho.clone();
                        face.remove(j);
                        face.remove(i);
                        out.push(Violation { face, coface: rho.clone() });
                    }
                }
            }
        }
    }
    out
}

fn require_valid(f: &CellularSheaf) -> Result<()> {
    match validate_sheaf(f).first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidSheaf(format!("restrictions {} -> {} do not commute", simplex_key(&v.face), simplex_key(&v.coface)))),
    }
}

/// Invertible restrictions everywhere (hence constant rank on components).
pub fn is_locally_constant(f: &CellularSheaf) -> Result<bool> {
    require_valid(f)?;
    Ok(f.restrictions.iter().flatten().flatten().all(|m| m.is_square() && m.is_invertible()))
}

/// The coboundary of `δ^d` over all `d`-simplices without validity checks.
pub(crate) fn coboundary(f: &CellularSheaf, d: usize) -> Matrix {
    let x = &f.complex;
    let (src, dst) = (f.offsets(d), f.offsets(d + 1));
    let mut m = Matrix::zeros(f.ring, f.cochain_rank(d + 1), f.cochain_rank(d));
    for s in 0..x.count(d + 1) {
        for i in 0..=d + 1 {
            let face = x.face_index(d + 1, s, i);
            let block = &f.restrictions[d + 1][s][i];
            let block = if i % 2 == 0 { block.clone() } else { -block };
            m.set_block(dst[s], src[face], &block);
        }
    }
    m
}

/// `C^n = ⊕ F(σ)` over `n`-simplices, `δ` with alternating face signs.
pub fn sheaf_cochain_complex(f: &CellularSheaf) -> Result<CochainComplex> {
    require_valid(f)?;
    Ok(cochain_complex_unchecked(f))
}

pub(crate) fn cochain_complex_unchecked(f: &CellularSheaf) -> CochainComplex {
    let dim = f.complex.dimension();
    let dims = (0..=dim).map(|d| f.cochain_rank(d)).collect();
    let differentials = (0..dim).map(|d| coboundary(f, d)).collect();
    CochainComplex::new(f.ring, 0, dims, differentials).expect("shapes follow the stalks")
}

pub fn sheaf_cohomology(f: &CellularSheaf, n: i64) -> Result<FpModule> {
    if n < 0 {
        return Err(Error::DegreeNegative(n));
    }
    let c = sheaf_cochain_complex(f)?;
    if n > c.end() {
        return Ok(FpModule::zero(f.ring));
    }
    c.cohomology_at(n)
}

/// `H^0, ..., H^dim` in one pass.
pub fn sheaf_cohomology_all(f: &CellularSheaf) -> Result<Vec<FpModule>> {
    let c = sheaf_cochain_complex(f)?;
    (0..=c.end()).map(|n| c.cohomology_at(n)).collect()
}

pub fn direct_sum(f: &CellularSheaf, g: &CellularSheaf) -> Result<CellularSheaf> {
    if f.complex != g.complex {
        return Err(Error::ComplexMismatch);
    }
    if f.ring != g.ring {
        return Err(Error::RingMismatch(f.ring, g.ring));
    }
    let stalks = f.stalks.iter().zip(&g.stalks).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
    let restrictions = f
        .restrictions
        .iter()
        .zip(&g.restrictions)
        .map(|(a, b)| {
            a.iter().zip(b).map(|(ma, mb)| ma.iter().zip(mb).map(|(p, q)| Matrix::block_diagonal(f.ring, &[p, q])).collect()).collect()
        })
        .collect();
    Ok(CellularSheaf { complex: f.complex.clone(), ring: f.ring, stalks, restrictions })
}

/// `f^{-1}F`: the stalk at `σ` is the stalk at `f(σ)`; restrictions are the
/// composite restrictions between images (identity where the images agree).
pub fn pullback(map: &SimplicialMap, f: &CellularSheaf) -> Result<CellularSheaf> {
    if map.target() != &f.complex {
        return Err(Error::ComplexMismatch);
    }
    let x = map.source();
    let dims = x.dimension() + 1;
    let mut stalks = Vec::with_capacity(dims);
    let mut restrictions = vec![Vec::new()];
    for d in 0..dims {
        stalks.push(x.simplices(d).iter().map(|s| f.stalk_rank_of(&map.image(s)).expect("image is a simplex")).collect());
    }
    for d in 1..dims {
        let level = x
            .simplices(d)
            .iter()
            .map(|s| {
                let img = map.image(s);
                (0..=d)
                    .map(|i| {
                        let mut face = s.clone();
                        face.remove(i);
                        f.restriction_between(&map.image(&face), &img)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        restrictions.push(level);
    }
    Ok(CellularSheaf { complex: x.clone(), ring: f.ring, stalks, restrictions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const Z: RingSpec = RingSpec::Integers;

    fn arc(x: SimplicialComplex) -> Arc<SimplicialComplex> {
        Arc::new(x)
    }

    /// Triangle circle sheaf with monodromy `lambda` on the edge 1-2.
    fn twisted_circle(ring: RingSpec, lambda: i64) -> CellularSheaf {
        let c = arc(fixtures::circle());
        let mut f = constant_sheaf(&c, ring, 1);
        let e = c.index_of(&[1, 2]).unwrap();
        // face omitting vertex 0 of [1,2] is {2}
        f.restrictions[1][e][0] = Matrix::from_rows(ring, &[vec![lambda]]);
        f
    }

    #[test]
    fn constant_sheaf_cohomology() {
        let circle = arc(fixtures::circle());
        let f = constant_sheaf(&circle, Z, 1);
        assert!(validate_sheaf(&f).is_empty());
        assert_eq!(sheaf_cohomology_all(&f).unwrap(), vec![FpModule::free(Z, 1), FpModule::free(Z, 1)]);
        assert_eq!(sheaf_cohomology(&f, 5).unwrap(), FpModule::zero(Z));
        assert_eq!(sheaf_cohomology(&f, -1), Err(Error::DegreeNegative(-1)));
        let sphere = constant_sheaf(&arc(fixtures::sphere()), Z, 1);
        assert_eq!(sheaf_cohomology(&sphere, 2).unwrap(), FpModule::free(Z, 1));
        let rp2 = sheaf_cohomology_all(&constant_sheaf(&arc(fixtures::rp2()), Z, 1)).unwrap();
        assert_eq!(rp2, vec![FpModule::free(Z, 1), FpModule::zero(Z), FpModule::cyclic(Z, 2).unwrap()]);
        let zero = constant_sheaf(&circle, Z, 0);
        assert!(sheaf_cohomology_all(&zero).unwrap().iter().all(FpModule::is_zero));
    }

    #[test]
    fn constant_cochains_are_simplicial_coboundaries() {
        let x = arc(fixtures::rp2());
        let c = sheaf_cochain_complex(&constant_sheaf(&x, Z, 1)).unwrap();
        for d in 0..2 {
            assert_eq!(c.differential(d as i64).unwrap(), &x.boundary_matrix(d + 1, Z).unwrap().transpose());
        }
    }

    #[test]
    fn monodromy_on_the_circle() {
        let q = RingSpec::Rationals;
        let f = twisted_circle(q, 2);
        assert!(is_locally_constant(&f).unwrap());
        assert!(sheaf_cohomology_all(&f).unwrap().iter().all(FpModule::is_zero));
        let g = twisted_circle(Z, -1);
        assert_eq!(sheaf_cohomology(&g, 0).unwrap(), FpModule::zero(Z));
        assert_eq!(sheaf_cohomology(&g, 1).unwrap(), FpModule::cyclic(Z, 2).unwrap());
        // over Z, 2 is not a unit
        assert!(!is_locally_constant(&twisted_circle(Z, 2)).unwrap());
    }

    #[test]
    fn broken_square_is_reported() {
        let x = arc(fixtures::cone());
        let mut f = constant_sheaf(&x, Z, 1);
        let t = x.index_of(&[0, 1, 3]).unwrap();
        f.restrictions[2][t][0] = Matrix::from_rows(Z, &[vec![2]]);
        let v = validate_sheaf(&f);
        assert!(!v.is_empty());
        assert!(v.iter().all(|v| v.coface == vec![0, 1, 3]));
        assert!(matches!(sheaf_cohomology(&f, 0), Err(Error::InvalidSheaf(_))));
        assert!(matches!(is_locally_constant(&f), Err(Error::InvalidSheaf(_))));
    }

    #[test]
    fn zero_restriction_is_not_locally_constant() {
        let x = arc(fixtures::circle());
        let mut f = constant_sheaf(&x, Z, 1);
        f.restrictions[1][0][1] = Matrix::zeros(Z, 1, 1);
        assert!(!is_locally_constant(&f).unwrap());
    }

    #[test]
    fn direct_sums_add_cohomology() {
        let x = arc(fixtures::circle());
        let f = twisted_circle(Z, -1);
        let g = constant_sheaf(&x, Z, 1);
        let s = direct_sum(&f, &g).unwrap();
        assert!(is_locally_constant(&s).unwrap());
        for n in 0..2 {
            let expect = sheaf_cohomology(&f, n).unwrap().direct_sum(&sheaf_cohomology(&g, n).unwrap()).unwrap();
            assert_eq!(sheaf_cohomology(&s, n).unwrap(), expect);
        }
        assert_eq!(direct_sum(&f, &constant_sheaf(&x, Z, 0)).unwrap(), f);
        let other = constant_sheaf(&arc(fixtures::sphere()), Z, 1);
        assert_eq!(direct_sum(&f, &other), Err(Error::ComplexMismatch));
    }

    #[test]
    fn json_round_trip() {
        let f = twisted_circle(RingSpec::Rationals, 2);
        let back = CellularSheaf::from_json(f.complex.clone(), &f.to_json()).unwrap();
        assert_eq!(back, f);
        let text = r#"{"ring":"Z","stalks":{"0":1,"1":1,"2":0,"0-1":1,"0-2":0,"1-2":0},"restrictions":{"0->0-1":[[1]],"1->0-1":[[-1]]}}"#;
        let g = CellularSheaf::parse_json(f.complex.clone(), text).unwrap();
        assert_eq!(g.restriction_between(&[1], &[0, 1]).unwrap(), Matrix::from_rows(Z, &[vec![-1]]));
        let missing = r#"{"ring":"Z","stalks":{"0":1,"1":1,"2":1,"0-1":1,"0-2":1,"1-2":1},"restrictions":{}}"#;
        assert!(CellularSheaf::parse_json(f.complex.clone(), missing).is_err());
    }

    #[test]
    fn pullback_along_collapse() {
        let map = fixtures::map_by_name("cylinder_to_circle").unwrap();
        let g = CellularSheaf { complex: map.target().clone(), ..twisted_circle(Z, -1) };
        let f = pullback(&map, &g).unwrap();
        assert!(validate_sheaf(&f).is_empty());
        assert!(is_locally_constant(&f).unwrap());
        for n in 0..3 {
            assert_eq!(sheaf_cohomology(&f, n).unwrap(), sheaf_cohomology(&g, n).unwrap(), "degree {n}");
        }
    }
}
