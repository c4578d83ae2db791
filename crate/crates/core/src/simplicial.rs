//! Finite abstract simplicial complexes, oriented by the global vertex order.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{subquotient, FpModule, Matrix, RingSpec};

/// A simplex as its strictly increasing vertex list.
pub type Simplex = Vec<usize>;

/// Downward-closed family of simplices on vertices `0..vertex_count`.
///
/// Simplices of each dimension are stored sorted lexicographically, and every
/// simplex is oriented by its increasing vertex order.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

/// On-disk form: `{"vertices": n, "maximal_simplices": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub vertices: usize,
    pub maximal_simplices: Vec<Vec<usize>>,
}

/// Closure of the given simplices; the vertex count is inferred as
/// `max index + 1`.
pub fn build_complex(maximal_simplices: &[Vec<usize>]) -> Result<SimplicialComplex> {
    let n = maximal_simplices.iter().flatten().max().map_or(0, |m| m + 1);
    SimplicialComplex::with_vertex_count(n, maximal_simplices)
}

impl SimplicialComplex {
    pub fn with_vertex_count(vertex_count: usize, maximal_simplices: &[Vec<usize>]) -> Result<Self> {
        if maximal_simplices.iter().all(Vec::is_empty) {
            return Err(Error::EmptyInput);
        }
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        for raw in maximal_simplices.iter().filter(|s| !s.is_empty()) {
            if let Some(&v) = raw.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidVertexIndex(v));
            }
            let mut s = raw.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DegenerateSimplex(raw.clone()));
            }
            // all nonempty subsets
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let face: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, BTreeSet::new);
                }
                by_dim[d].insert(face);
            }
        }
        if let Some(v) = (0..vertex_count).find(|v| !by_dim[0].contains(&vec![*v])) {
            return Err(Error::UnusedVertex(v));
        }
        let simplices: Vec<Vec<Simplex>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(Self::from_sorted(vertex_count, simplices))
    }

    fn from_sorted(vertex_count: usize, simplices: Vec<Vec<Simplex>>) -> Self {
        let index = simplices.iter().map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { vertex_count, simplices, index }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        Self::with_vertex_count(json.vertices, &json.maximal_simplices)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let json: ComplexJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson { vertices: self.vertex_count, maximal_simplices: self.maximal_simplices() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Simplices of dimension `d` (empty above the dimension).
    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn total_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let d = simplex.len().checked_sub(1)?;
        self.index.get(d)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.index_of(simplex).is_some()
    }

    /// Index of the face of `simplices(d)[s]` that omits its `i`-th vertex.
    pub fn face_index(&self, d: usize, s: usize, i: usize) -> usize {
        let mut face = self.simplices[d][s].clone();
        face.remove(i);
        self.index[d - 1][&face]
    }

    pub fn edges(&self) -> &[Simplex] {
        self.simplices(1)
    }

    /// Neighbors of `v` in the 1-skeleton, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges()
            .iter()
            .filter_map(|e| match (e[0] == v, e[1] == v) {
                (true, _) => Some(e[1]),
                (_, true) => Some(e[0]),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for d in 0..=self.dimension() {
            for s in self.simplices(d) {
                let covered = self.simplices(d + 1).iter().any(|t| s.iter().all(|v| t.binary_search(v).is_ok()));
                if !covered {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension()).map(|d| if d % 2 == 0 { self.count(d) as i64 } else { -(self.count(d) as i64) }).sum()
    }

    /// `∂_d: C_d -> C_{d-1}` with `∂[v_0..v_d] = Σ (-1)^i [.. v̂_i ..]`.
    pub fn boundary_matrix(&self, d: usize, ring: RingSpec) -> Result<Matrix> {
        if d == 0 || d > self.dimension() {
            return Err(Error::DegreeOutOfRange(d as i64));
        }
        let mut m = Matrix::zeros(ring, self.count(d - 1), self.count(d));
        for s in 0..self.count(d) {
            for i in 0..=d {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m.set(self.face_index(d, s, i), s, ring.from_i64(sign));
            }
        }
        Ok(m)
    }

    /// `H_n(X; ring)`.
    pub fn homology(&self, n: usize, ring: RingSpec) -> Result<FpModule> {
        if n > self.dimension() {
            return Err(Error::DegreeOutOfRange(n as i64));
        }
        let incoming = if n < self.dimension() { Some(self.boundary_matrix(n + 1, ring)?) } else { None };
        let outgoing = if n > 0 { Some(self.boundary_matrix(n, ring)?) } else { None };
        Ok(subquotient(ring, self.count(n), incoming.as_ref(), outgoing.as_ref()))
    }

    /// Connected components as vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.edges() {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for v in 0..self.vertex_count {
            let r = find(&mut parent, v);
            let k = *slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(v);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::NotConnected)
        }
    }
}

pub fn is_connected(x: &SimplicialComplex) -> bool {
    x.is_connected()
}

/// Vertex map whose image of every simplex spans a simplex of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    vertex_images: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: Arc<SimplicialComplex>, target: Arc<SimplicialComplex>, vertex_images: Vec<usize>) -> Result<Self> {
        if vertex_images.len() != source.vertex_count() {
            return Err(Error::InvalidMap(format!("{} images for {} vertices", vertex_images.len(), source.vertex_count())));
        }
        if let Some(&v) = vertex_images.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::InvalidVertexIndex(v));
        }
        let map = SimplicialMap { source, target, vertex_images };
        for d in 0..=map.source.dimension() {
            for s in map.source.simplices(d) {
                if !map.target.contains(&map.image(s)) {
                    return Err(Error::InvalidMap(format!("{s:?} maps onto a non-simplex")));
                }
            }
        }
        Ok(map)
    }

    pub fn identity(x: Arc<SimplicialComplex>) -> Self {
        let images = (0..x.vertex_count()).collect();
        SimplicialMap { source: x.clone(), target: x, vertex_images: images }
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_images[v]
    }

    pub fn vertex_images(&self) -> &[usize] {
        &self.vertex_images
    }

    /// Image simplex with repeated vertices removed, sorted.
    pub fn image(&self, simplex: &[usize]) -> Simplex {
        let mut img: Simplex = simplex.iter().map(|&v| self.vertex_images[v]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }
}
