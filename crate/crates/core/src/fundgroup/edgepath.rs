use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use super::word::{GroupPresentation, Word};
use crate::error::{Error, Result};
use crate::simplicial::{SimplicialComplex, SimplicialMap};

/// Edge-path data for a connected complex: a BFS spanning tree from the
/// basepoint and one generator per non-tree edge.
///
/// Walking an edge `u -> v` with `u < v` reads the edge word; walking it
/// backwards reads the inverse. Tree edges read the empty word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    complex: Arc<SimplicialComplex>,
    basepoint: usize,
    parent: Vec<Option<usize>>,
    tree: BTreeSet<(usize, usize)>,
    /// Generator of each edge (indexed like `complex.edges()`), `None` on the tree.
    edge_generator: Vec<Option<usize>>,
    generator_edges: Vec<(usize, usize)>,
}

/// Edge-path presentation of `π_1(X, basepoint)`.
///
/// The tree is grown breadth-first, visiting neighbors in increasing order.
/// Generators follow the sorted edge list; relators follow the sorted
/// triangle list, one per triangle `[a,b,c]`, reading `a -> b -> c -> a`.
pub fn presentation(x: &Arc<SimplicialComplex>, basepoint: usize) -> Result<(GroupPresentation, EdgeLabeling)> {
    let labeling = EdgeLabeling::new(x.clone(), basepoint)?;
    Ok((labeling.presentation(), labeling))
}

impl EdgeLabeling {
    pub fn new(complex: Arc<SimplicialComplex>, basepoint: usize) -> Result<Self> {
        if basepoint >= complex.vertex_count() {
            return Err(Error::InvalidVertexIndex(basepoint));
        }
        if !complex.is_connected() {
            return Err(Error::NotConnected);
        }
        let n = complex.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut tree = BTreeSet::new();
        let mut queue = VecDeque::from([basepoint]);
        seen[basepoint] = true;
        while let Some(u) = queue.pop_front() {
            for v in complex.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    tree.insert((u.min(v), u.max(v)));
                    queue.push_back(v);
                }
            }
        }
        let mut edge_generator = Vec::with_capacity(complex.count(1));
        let mut generator_edges = Vec::new();
        for e in complex.edges() {
            if tree.contains(&(e[0], e[1])) {
                edge_generator.push(None);
            } else {
                edge_generator.push(Some(generator_edges.len()));
                generator_edges.push((e[0], e[1]));
            }
        }
        Ok(EdgeLabeling { complex, basepoint, parent, tree, edge_generator, generator_edges })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn tree_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.tree
    }

    pub fn generator_count(&self) -> usize {
        self.generator_edges.len()
    }

    /// The non-tree edge `(u, v)`, `u < v`, that defines generator `g`.
    pub fn generator_edge(&self, g: usize) -> (usize, usize) {
        self.generator_edges[g]
    }

    /// Generator carried by the edge `{u, v}` (`None` for tree edges).
    pub fn edge_generator(&self, u: usize, v: usize) -> Result<Option<usize>> {
        let idx = self.complex.index_of(&[u.min(v), u.max(v)]).filter(|_| u != v).ok_or(Error::NotAnEdge(u, v))?;
        Ok(self.edge_generator[idx])
    }

    /// Word read when walking the edge from `from` to `to`.
    pub fn edge_word(&self, from: usize, to: usize) -> Result<Word> {
        Ok(match self.edge_generator(from, to)? {
            None => Word::empty(),
            Some(g) if from < to => Word::generator(g),
            Some(g) => Word::generator(g).inverse(),
        })
    }

    /// Word of a vertex path; consecutive repeats are treated as constant steps.
    pub fn path_word(&self, path: &[usize]) -> Result<Word> {
        let mut w = Word::empty();
        for step in path.windows(2) {
            if step[0] != step[1] {
                w = w.concat(&self.edge_word(step[0], step[1])?);
            }
        }
        Ok(w)
    }

    /// Tree path from the basepoint to `v`, both ends included.
    pub fn tree_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Word of the loop `u -> v -> w -> u` around a triangle.
    pub fn triangle_word(&self, t: &[usize]) -> Word {
        self.path_word(&[t[0], t[1], t[2], t[0]]).expect("triangle edges exist")
    }

    pub fn presentation(&self) -> GroupPresentation {
        let relators = self.complex.simplices(2).iter().map(|t| self.triangle_word(t)).collect();
        GroupPresentation::new(self.generator_count(), relators).expect("generators in range")
    }
}

pub fn edge_word(labeling: &EdgeLabeling, from: usize, to: usize) -> Result<Word> {
    labeling.edge_word(from, to)
}

/// Images of the source generators under `π_1(f)`: the generator loop
/// (tree path, non-tree edge, tree path back) is pushed forward and read in
/// the target labeling.
pub fn induced_homomorphism(f: &SimplicialMap, source: &EdgeLabeling, target: &EdgeLabeling) -> Result<Vec<Word>> {
    if f.source() != source.complex() || f.target() != target.complex() {
        return Err(Error::InvalidMap("labelings do not belong to the map's complexes".into()));
    }
    if f.vertex_image(source.basepoint()) != target.basepoint() {
        return Err(Error::BasepointMismatch);
    }
    (0..source.generator_count())
        .map(|g| {
            let (u, v) = source.generator_edge(g);
            let mut path = source.tree_path(u);
            path.extend(source.tree_path(v).into_iter().rev());
            let image: Vec<usize> = path.iter().map(|&x| f.vertex_image(x)).collect();
            target.path_word(&image)
        })
        .collect()
}
