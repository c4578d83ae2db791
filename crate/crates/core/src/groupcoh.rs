//! Group cohomology `H^n(G, E)`: the normalized bar complex for finite
//! groups and the Fox-calculus complex of a presentation in low degrees.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{subquotient, CochainComplex, FpModule, Matrix};
use crate::fundgroup::{letter_generator, CosetTable, GroupPresentation, Word};
use crate::localsys::Representation;

/// Default cap on the rank of any single cochain group.
pub const DEFAULT_SIZE_CAP: usize = 20_000;

/// A finite group as an explicit multiplication table; element 0 is the
/// identity and element `c` is the coset of the same index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationTable {
    product: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generator_elements: Vec<usize>,
    representatives: Vec<Word>,
}

pub fn multiplication_table(t: &CosetTable) -> Result<MultiplicationTable> {
    if !t.is_complete() {
        return Err(Error::IncompleteTable);
    }
    if !t.is_trivial_subgroup() {
        return Err(Error::NotTrivialSubgroupTable);
    }
    let n = t.coset_count();
    let reps = t.representatives().to_vec();
    let product: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| t.act(a, &reps[b])).collect()).collect();
    let inverse = (0..n).map(|a| (0..n).find(|&b| product[a][b] == 0).expect("group")).collect();
    let generator_elements = (0..t.presentation().generator_count()).map(|g| t.act(0, &Word::generator(g))).collect();
    Ok(MultiplicationTable { product, inverse, generator_elements, representatives: reps })
}

impl MultiplicationTable {
    pub fn order(&self) -> usize {
        self.product.len()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.product[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generator_elements(&self) -> &[usize] {
        &self.generator_elements
    }

    /// Shortest word for each element, as recorded by the enumeration.
    pub fn representatives(&self) -> &[Word] {
        &self.representatives
    }

    /// Full associativity and identity check (cubic in the order).
    pub fn is_group(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| self.product[0][a] == a && self.product[a][0] == a && self.product[a][self.inverse[a]] == 0)
            && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.product[self.product[a][b]][c] == self.product[a][self.product[b][c]])))
    }

    /// `ρ(g)` for every element, via the representative words.
    pub fn element_matrices(&self, rho: &Representation) -> Vec<Matrix> {
        self.representatives.iter().map(|w| rho.evaluate(w)).collect()
    }
}

/// Normalized bar cochains in degree `k` have rank `(|G|-1)^k · dim E`.
fn bar_rank(order: usize, k: u32, dim: usize, cap: usize) -> Result<usize> {
    let size = (order - 1).checked_pow(k).and_then(|v| v.checked_mul(dim)).unwrap_or(usize::MAX);
    if size > cap {
        return Err(Error::SizeCapExceeded { size, cap });
    }
    Ok(size)
}

/// Tuples of non-identity elements in lexicographic order, encoded in
/// base `|G|-1` with digit `x` meaning element `x+1`.
fn tuple_index(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * base + (g - 1))
}

/// `δ^k : C^k -> C^{k+1}` of the normalized inhomogeneous bar complex,
/// `(δf)(g_1..g_{k+1}) = g_1 f(g_2..) + Σ (-1)^i f(..g_i g_{i+1}..) + (-1)^{k+1} f(g_1..g_k)`.
fn bar_differential(m: &MultiplicationTable, elems: &[Matrix], k: u32, dim: usize, cap: usize) -> Result<Matrix> {
    let ring = elems[0].ring();
    let base = m.order() - 1;
    let rows = bar_rank(m.order(), k + 1, dim, cap)?;
    let cols = bar_rank(m.order(), k, dim, cap)?;
    let mut d = Matrix::zeros(ring, rows, cols);
    let id = Matrix::identity(ring, dim);
    let neg = -&id;
    let mut tuple = vec![1usize; k as usize + 1];
    for row in 0..rows / dim.max(1) {
        // decode row index into a tuple
        let mut r = row;
        for slot in tuple.iter_mut().rev() {
            *slot = r % base + 1;
            r /= base;
        }
        let add = |d: &mut Matrix, col: usize, block: &Matrix| {
            for i in 0..dim {
                for j in 0..dim {
                    let v = ring.add(d.get(row * dim + i, col * dim + j), block.get(i, j));
                    d.set(row * dim + i, col * dim + j, v);
                }
            }
        };
        add(&mut d, tuple_index(&tuple[1..], base), &elems[tuple[0]]);
        for i in 1..=k as usize {
            let g = m.product(tuple[i - 1], tuple[i]);
            if g == 0 {
                continue;
            }
            let mut merged = tuple[..i - 1].to_vec();
            merged.push(g);
            merged.extend_from_slice(&tuple[i + 1..]);
            add(&mut d, tuple_index(&merged, base), if i % 2 == 0 { &id } else { &neg });
        }
        add(&mut d, tuple_index(&tuple[..k as usize], base), if (k + 1) % 2 == 0 { &id } else { &neg });
    }
    Ok(d)
}

/// `H^n(G, E)` from the normalized bar complex.
pub fn bar_cohomology(m: &MultiplicationTable, rho: &Representation, n: i64, size_cap: usize) -> Result<FpModule> {
    if n < 0 {
        return Err(Error::DegreeNegative(n));
    }
    let ring = rho.ring();
    let dim = rho.dimension();
    if dim == 0 {
        return Ok(FpModule::zero(ring));
    }
    if m.order() == 1 {
        return Ok(if n == 0 { FpModule::free(ring, dim) } else { FpModule::zero(ring) });
    }
    let k = n as u32;
    let here = bar_rank(m.order(), k, dim, size_cap)?;
    let elems = m.element_matrices(rho);
    let outgoing = bar_differential(m, &elems, k, dim, size_cap)?;
    let incoming = if k == 0 { None } else { Some(bar_differential(m, &elems, k - 1, dim, size_cap)?) };
    Ok(subquotient(ring, here, incoming.as_ref(), Some(&outgoing)))
}

/// The bar complex itself in degrees `0..=top`, for inspection.
pub fn bar_complex(m: &MultiplicationTable, rho: &Representation, top: u32, size_cap: usize) -> Result<CochainComplex> {
    let dim = rho.dimension();
    let elems = m.element_matrices(rho);
    let dims = (0..=top).map(|k| bar_rank(m.order(), k, dim, size_cap)).collect::<Result<Vec<_>>>()?;
    let ds = (0..top).map(|k| bar_differential(m, &elems, k, dim, size_cap)).collect::<Result<Vec<_>>>()?;
    CochainComplex::new(rho.ring(), 0, dims, ds)
}

/// Fox derivative `∂w/∂g` evaluated through `ρ`:
/// `Σ_j ρ(prefix_j) · (1 if l_j = g, -ρ(g)^{-1} if l_j = g^{-1})`.
fn fox_derivative(rho: &Representation, w: &Word, g: usize) -> Matrix {
    let ring = rho.ring();
    let d = rho.dimension();
    let mut prefix = Matrix::identity(ring, d);
    let mut acc = Matrix::zeros(ring, d, d);
    for &l in w.letters() {
        if letter_generator(l) == g {
            if l > 0 {
                acc = &acc + &prefix;
            } else {
                acc = &acc - &(&prefix * rho.letter(l));
            }
        }
        prefix = &prefix * rho.letter(l);
    }
    acc
}

/// `E -> E^{generators} -> E^{relators}` with `δ^0 e = (ρ(g_i)e - e)_i` and
/// `δ^1` given by the Fox derivatives of the relators.
pub fn fox_complex(p: &GroupPresentation, rho: &Representation) -> Result<CochainComplex> {
    if rho.presentation() != p {
        return Err(Error::PresentationMismatch);
    }
    let bad = crate::localsys::validate_representation(rho);
    if !bad.is_empty() {
        return Err(Error::InvalidRepresentation(bad));
    }
    let ring = rho.ring();
    let d = rho.dimension();
    let (m, r) = (p.generator_count(), p.relators().len());
    let id = Matrix::identity(ring, d);
    let mut d0 = Matrix::zeros(ring, m * d, d);
    for g in 0..m {
        d0.set_block(g * d, 0, &(rho.matrix(g) - &id));
    }
    let mut d1 = Matrix::zeros(ring, r * d, m * d);
    for (j, rel) in p.relators().iter().enumerate() {
        for g in 0..m {
            d1.set_block(j * d, g * d, &fox_derivative(rho, rel, g));
        }
    }
    CochainComplex::new(ring, 0, vec![d, m * d, r * d], vec![d0, d1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    /// Equals `H^n(G, E)`.
    Exact,
    /// Cohomology of the presentation complex; equals `H^n(G, E)` only when
    /// that complex is aspherical.
    PresentationComplexOnly,
}

pub fn fox_cohomology(p: &GroupPresentation, rho: &Representation, n: i64) -> Result<(FpModule, Exactness)> {
    if n < 0 {
        return Err(Error::DegreeNegative(n));
    }
    if n > 2 {
        return Err(Error::DegreeOutOfRange(n));
    }
    let c = fox_complex(p, rho)?;
    let flag = if n <= 1 { Exactness::Exact } else { Exactness::PresentationComplexOnly };
    Ok((c.cohomology_at(n)?, flag))
}
