//! Finite covers built from coset tables, their deck groups, and sheaf
//! transfer along the projection.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::cellsheaf::{pullback, CellularSheaf};
use crate::error::{Error, Result};
use crate::exactalg::Matrix;
use crate::fundgroup::{CosetTable, EdgeLabeling, Word};
use crate::simplicial::{Simplex, SimplicialComplex, SimplicialMap};

/// The cover attached to a complete coset table. Total vertex `v·n + c` is
/// the base vertex `v` on sheet `c` (`n` = number of cosets).
#[derive(Clone, Debug)]
pub struct Covering {
    base: Arc<SimplicialComplex>,
    total: Arc<SimplicialComplex>,
    labeling: EdgeLabeling,
    table: CosetTable,
    projection: SimplicialMap,
}

/// Builds the cover: the lift of a base simplex with first vertex `m` at
/// sheet `s` has vertices `(x, s·w(m -> x))`.
pub fn build_cover(x: &Arc<SimplicialComplex>, l: &EdgeLabeling, t: &CosetTable) -> Result<Covering> {
    if !t.is_complete() {
        return Err(Error::IncompleteTable);
    }
    if **l.complex() != **x || *t.presentation() != l.presentation() {
        return Err(Error::PresentationMismatch);
    }
    let n = t.coset_count();
    let mut lifts = Vec::new();
    for simplex in x.maximal_simplices() {
        for s in 0..n {
            lifts.push(lift(l, t, &simplex, s));
        }
    }
    let total = Arc::new(SimplicialComplex::with_vertex_count(x.vertex_count() * n, &lifts)?);
    let images = (0..total.vertex_count()).map(|v| v / n).collect();
    let projection = SimplicialMap::new(total.clone(), x.clone(), images)?;
    Ok(Covering { base: x.clone(), total, labeling: l.clone(), table: t.clone(), projection })
}

fn lift(l: &EdgeLabeling, t: &CosetTable, simplex: &[usize], sheet: usize) -> Simplex {
    let n = t.coset_count();
    let m = simplex[0];
    simplex
        .iter()
        .map(|&v| {
            let c = if v == m { sheet } else { t.act(sheet, &l.edge_word(m, v).expect("edge of a simplex")) };
            v * n + c
        })
        .collect()
}

impl Covering {
    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn total(&self) -> &Arc<SimplicialComplex> {
        &self.total
    }

    pub fn labeling(&self) -> &EdgeLabeling {
        &self.labeling
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn projection(&self) -> &SimplicialMap {
        &self.projection
    }

    pub fn sheet_count(&self) -> usize {
        self.table.coset_count()
    }

    /// `(base vertex, sheet)` of a total vertex.
    pub fn sheet_of_vertex(&self, v: usize) -> (usize, usize) {
        (v / self.sheet_count(), v % self.sheet_count())
    }

    pub fn total_vertex(&self, base_vertex: usize, sheet: usize) -> usize {
        base_vertex * self.sheet_count() + sheet
    }

    /// Lift of a base simplex whose first vertex sits on `sheet`.
    pub fn lift(&self, simplex: &[usize], sheet: usize) -> Simplex {
        lift(&self.labeling, &self.table, simplex, sheet)
    }

    /// Total complex plus the vertex-sheet table, for inspection.
    pub fn to_json(&self) -> Value {
        let sheets: Vec<Value> = (0..self.total.vertex_count())
            .map(|v| {
                let (b, s) = self.sheet_of_vertex(v);
                json!([b, s])
            })
            .collect();
        json!({
            "sheets": self.sheet_count(),
            "total": self.total.to_json(),
            "vertex_sheets": sheets,
        })
    }
}

/// Deck transformations of a regular cover, one vertex permutation of the
/// total complex per generator.
///
/// Sheets of the universal cover are group elements (coset `c` has
/// representative `r_c`), and the generator `g` acts by left multiplication,
/// `(v, c) -> (v, g·r_c)`. This commutes with every lift, which acts on
/// sheets from the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckAction {
    sheet_maps: Vec<Vec<usize>>,
    generator_maps: Vec<Vec<usize>>,
}

pub fn deck_generators(c: &Covering) -> Result<DeckAction> {
    if !c.table.is_trivial_subgroup() {
        return Err(Error::NotRegularCover);
    }
    let t = &c.table;
    let n = t.coset_count();
    let sheet_maps: Vec<Vec<usize>> = (0..t.presentation().generator_count())
        .map(|g| {
            let e = t.act(0, &Word::generator(g));
            (0..n).map(|s| t.act(e, &t.representatives()[s])).collect()
        })
        .collect();
    let generator_maps = sheet_maps.iter().map(|sm| (0..c.total.vertex_count()).map(|v| (v / n) * n + sm[v % n]).collect()).collect();
    Ok(DeckAction { sheet_maps, generator_maps })
}

impl DeckAction {
    pub fn generator_count(&self) -> usize {
        self.generator_maps.len()
    }

    /// Vertex permutation of generator `g`.
    pub fn generator_map(&self, g: usize) -> &[usize] {
        &self.generator_maps[g]
    }

    /// Sheet permutation of generator `g`.
    pub fn sheet_map(&self, g: usize) -> &[usize] {
        &self.sheet_maps[g]
    }

    /// Vertex permutation of a word (left action: the last letter acts first).
    pub fn word_map(&self, w: &Word) -> Vec<usize> {
        let n = self.generator_maps.first().map_or(0, Vec::len);
        let mut perm: Vec<usize> = (0..n).collect();
        for &l in w.letters().iter().rev() {
            let g = &self.generator_maps[crate::fundgroup::letter_generator(l)];
            perm = if l > 0 {
                perm.iter().map(|&v| g[v]).collect()
            } else {
                let mut inv = vec![0; n];
                for (a, &b) in g.iter().enumerate() {
                    inv[b] = a;
                }
                perm.iter().map(|&v| inv[v]).collect()
            };
        }
        perm
    }
}

/// Pulls a base sheaf back to the total complex.
pub fn pullback_sheaf(c: &Covering, f: &CellularSheaf) -> Result<CellularSheaf> {
    if **f.complex() != *c.base {
        return Err(Error::BaseMismatch);
    }
    pullback(&c.projection, f)
}

/// Pushes a total-space sheaf down: the stalk over `σ` is the direct sum of
/// the stalks over its lifts, ordered by the sheet of their first vertex.
pub fn pushforward_sheaf(c: &Covering, f: &CellularSheaf) -> Result<CellularSheaf> {
    if **f.complex() != *c.total {
        return Err(Error::TotalMismatch);
    }
    let x = &c.base;
    let n = c.sheet_count();
    let ring = f.ring();
    let total = f.complex();
    let dims = x.dimension() + 1;
    let lift_index = |simplex: &[usize], s: usize| -> usize { total.index_of(&c.lift(simplex, s)).expect("lift is a simplex") };
    let mut block_offsets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dims);
    let mut stalks = Vec::with_capacity(dims);
    for d in 0..dims {
        let mut offs = Vec::with_capacity(x.count(d));
        let mut ranks = Vec::with_capacity(x.count(d));
        for simplex in x.simplices(d) {
            let mut acc = 0;
            let mut o = Vec::with_capacity(n);
            for s in 0..n {
                o.push(acc);
                acc += f.stalk_rank(d, lift_index(simplex, s));
            }
            offs.push(o);
            ranks.push(acc);
        }
        block_offsets.push(offs);
        stalks.push(ranks);
    }
    let mut restrictions = vec![Vec::new()];
    for d in 1..dims {
        let mut level = Vec::with_capacity(x.count(d));
        for (si, simplex) in x.simplices(d).iter().enumerate() {
            let mut maps = Vec::with_capacity(d + 1);
            for i in 0..=d {
                let fi = x.face_index(d, si, i);
                let mut m = Matrix::zeros(ring, stalks[d][si], stalks[d - 1][fi]);
                for s in 0..n {
                    let up = lift_index(simplex, s);
                    let mut face = c.lift(simplex, s);
                    face.remove(i);
                    let face_sheet = face[0] % n;
                    m.set_block(block_offsets[d][si][s], block_offsets[d - 1][fi][face_sheet], f.restriction(d, up, i));
                }
                maps.push(m);
            }
            level.push(maps);
        }
        restrictions.push(level);
    }
    CellularSheaf::new(x.clone(), ring, stalks, restrictions)
}

/// Ball of radius `radius` around `(basepoint, 1)` in the universal cover of
/// a graph, which is a finite subtree. Vertices are pairs `(v, g)` with `g`
/// a reduced word of length at most `radius` in the free fundamental group.
pub fn tree_ball(l: &EdgeLabeling, radius: usize) -> Result<SimplicialMap> {
    let x = l.complex();
    if x.dimension() > 1 {
        return Err(Error::InfiniteOrUnknownGroup);
    }
    let m = l.generator_count() as i32;
    let mut words = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for letter in (1..=m).flat_map(|g| [g, -g]) {
                let longer = w.concat(&Word::new(vec![letter]).expect("nonzero"));
                if longer.len() > w.len() {
                    next.push(longer);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut index: HashMap<(usize, Word), usize> = HashMap::new();
    let mut images = Vec::new();
    for v in 0..x.vertex_count() {
        for w in &words {
            index.insert((v, w.clone()), images.len());
            images.push(v);
        }
    }
    let mut simplices: Vec<Simplex> = Vec::new();
    if x.dimension() == 0 {
        simplices.push(vec![0]);
    }
    for e in x.edges() {
        let step = l.edge_word(e[0], e[1])?;
        for w in &words {
            if let Some(&b) = index.get(&(e[1], w.concat(&step))) {
                let a = index[&(e[0], w.clone())];
                simplices.push(vec![a.min(b), a.max(b)]);
            }
        }
    }
    let total = Arc::new(SimplicialComplex::with_vertex_count(images.len(), &simplices)?);
    SimplicialMap::new(total, x.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellsheaf::{constant_sheaf, is_locally_constant, sheaf_cohomology_all, validate_sheaf};
    use crate::exactalg::{FpModule, RingSpec};
    use crate::fixtures;
    use crate::fundgroup::{presentation, todd_coxeter};
    use crate::localsys::{rep_to_sheaf, sheaf_to_rep, Representation};

    const Z: RingSpec = RingSpec::Integers;

    fn universal(name: &str) -> Covering {
        let x = Arc::new(fixtures::by_name(name).unwrap());
        let (p, l) = presentation(&x, 0).unwrap();
        let t = todd_coxeter(&p, &[], 1000);
        build_cover(&x, &l, &t).unwrap()
    }

    #[test]
    fn rp2_double_cover_is_a_sphere() {
        let c = universal("rp2");
        let t = c.total();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (12, 30, 20));
        assert_eq!(t.euler_characteristic(), 2);
        assert!(t.is_connected());
        assert_eq!(t.homology(2, Z).unwrap(), FpModule::free(Z, 1));
        assert_eq!(t.homology(1, Z).unwrap(), FpModule::zero(Z));
    }

    #[test]
    fn trivial_group_cover_is_the_base() {
        let c = universal("sphere");
        assert_eq!(**c.total(), **c.base());
        let deck = deck_generators(&c).unwrap();
        for g in 0..deck.generator_count() {
            assert!(deck.generator_map(g).iter().enumerate().all(|(a, &b)| a == b));
        }
    }

    #[test]
    fn index_three_cover_of_the_circle() {
        let x = Arc::new(fixtures::circle());
        let (p, l) = presentation(&x, 0).unwrap();
        let t = todd_coxeter(&p, &[Word::generator(0).pow(3)], 100);
        let c = build_cover(&x, &l, &t).unwrap();
        assert_eq!((c.total().count(0), c.total().count(1)), (9, 9));
        assert!(c.total().is_connected());
        assert_eq!(c.total().euler_characteristic(), 0);
        assert_eq!(deck_generators(&c).unwrap_err(), Error::NotRegularCover);
    }

    #[test]
    fn deck_transformations_of_rp2() {
        let c = universal("rp2");
        let deck = deck_generators(&c).unwrap();
        let p = c.table().presentation().clone();
        for g in 0..deck.generator_count() {
            let map = deck.generator_map(g);
            let f = SimplicialMap::new(c.total().clone(), c.total().clone(), map.to_vec());
            assert!(f.is_ok(), "generator {g} is not simplicial");
            assert!((0..map.len()).all(|v| map[v] / 2 == v / 2), "commutes with projection");
            let sq = deck.word_map(&Word::generator(g).pow(2));
            assert!(sq.iter().enumerate().all(|(a, &b)| a == b));
            if deck.sheet_map(g)[0] == 1 {
                assert!((0..map.len()).all(|v| map[v] != v), "sheet swap is fixed-point free");
            }
        }
        for r in p.relators() {
            assert!(deck.word_map(r).iter().enumerate().all(|(a, &b)| a == b));
        }
    }

    #[test]
    fn euler_characteristic_multiplies() {
        for name in ["sphere", "rp2", "cone", "point"] {
            let c = universal(name);
            assert_eq!(c.total().euler_characteristic(), c.sheet_count() as i64 * c.base().euler_characteristic());
        }
    }

    #[test]
    fn pullback_of_sign_sheaf_is_constant() {
        let c = universal("rp2");
        let rho = Representation::sign(c.table(), Z).unwrap();
        let f = rep_to_sheaf(c.base(), c.labeling(), &rho).unwrap();
        let up = pullback_sheaf(&c, &f).unwrap();
        assert!(validate_sheaf(&up).is_empty());
        assert!(is_locally_constant(&up).unwrap());
        // the double cover is simply connected, so the pullback has trivial holonomy
        let (_, lt) = presentation(c.total(), 0).unwrap();
        assert!(sheaf_to_rep(c.total(), &lt, &up).unwrap().is_trivial());
        assert_eq!(sheaf_cohomology_all(&up).unwrap(), sheaf_cohomology_all(&constant_sheaf(c.total(), Z, 1)).unwrap());
    }

    #[test]
    fn pushforward_gives_the_permutation_representation() {
        let c = universal("rp2");
        let up = constant_sheaf(c.total(), Z, 1);
        let down = pushforward_sheaf(&c, &up).unwrap();
        assert!(validate_sheaf(&down).is_empty());
        assert!(is_locally_constant(&down).unwrap());
        let rho = sheaf_to_rep(c.base(), c.labeling(), &down).unwrap();
        assert_eq!(rho, Representation::permutation(c.table(), Z).unwrap());
        assert_eq!(sheaf_cohomology_all(&down).unwrap(), sheaf_cohomology_all(&up).unwrap());
    }

    #[test]
    fn transfer_on_fixtures() {
        for name in ["sphere", "rp2", "cone", "point"] {
            let c = universal(name);
            for ring in [Z, RingSpec::Rationals, RingSpec::prime_field(2).unwrap()] {
                let base = constant_sheaf(c.base(), ring, 2);
                let up = pullback_sheaf(&c, &base).unwrap();
                assert_eq!(up.stalk_rank(0, 0), 2);
                let down = pushforward_sheaf(&c, &up).unwrap();
                assert_eq!(down.stalk_rank(0, 0), 2 * c.sheet_count());
                assert_eq!(sheaf_cohomology_all(&up).unwrap(), sheaf_cohomology_all(&down).unwrap(), "{name} {ring}");
            }
        }
    }

    #[test]
    fn mismatched_sheaves() {
        let c = universal("rp2");
        let wrong = constant_sheaf(&Arc::new(fixtures::sphere()), Z, 1);
        assert_eq!(pullback_sheaf(&c, &wrong).unwrap_err(), Error::BaseMismatch);
        assert_eq!(pushforward_sheaf(&c, &wrong).unwrap_err(), Error::TotalMismatch);
    }

    #[test]
    fn tree_balls_are_trees() {
        for name in ["circle", "wedge"] {
            let x = Arc::new(fixtures::by_name(name).unwrap());
            let (_, l) = presentation(&x, 0).unwrap();
            let ball = tree_ball(&l, 2).unwrap();
            let t = ball.source();
            assert!(t.is_connected());
            assert_eq!(t.euler_characteristic(), 1, "{name}");
        }
        let x = Arc::new(fixtures::torus());
        let (_, l) = presentation(&x, 0).unwrap();
        assert!(tree_ball(&l, 1).is_err());
    }
}
