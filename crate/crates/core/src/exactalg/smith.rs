//! Smith normal form and rank.
//!
//! Two routes are provided. [`SmithForm::compute`] tracks the unimodular
//! transforms (and their inverses) and works over every supported ring; it is
//! what kernels, sections and cohomology bases are built from.
//! [`invariant_factors`] and [`rank`] skip the bookkeeping and run on plain
//! big integers (or machine residues over `Z/p`); they are the hot path for
//! cohomology ranks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::ring::{RingSpec, Scalar};

/// `u * m * v = s`, with `u_inv`, `v_inv` the inverses of the transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub s: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub rank: usize,
}

/// Working state: the matrix being reduced plus the four transforms.
struct Reducer {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    a: Vec<Scalar>,
    u: Vec<Scalar>,
    u_inv: Vec<Scalar>,
    v: Vec<Scalar>,
    v_inv: Vec<Scalar>,
}

impl Reducer {
    fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.a[i * self.cols + j]
    }

    /// `row_i += q * row_t` (and the matching updates of `u`, `u_inv`).
    fn add_row(&mut self, i: usize, t: usize, q: &Scalar) {
        let (ring, n, r) = (self.ring, self.cols, self.rows);
        for j in 0..n {
            let d = ring.mul(q, &self.a[t * n + j]);
            if !d.is_zero() {
                self.a[i * n + j] = ring.add(&self.a[i * n + j], &d);
            }
        }
        for j in 0..r {
            let d = ring.mul(q, &self.u[t * r + j]);
            if !d.is_zero() {
                self.u[i * r + j] = ring.add(&self.u[i * r + j], &d);
            }
        }
        // u_inv <- u_inv * E^{-1}: col_t -= q * col_i
        for k in 0..r {
            let d = ring.mul(q, &self.u_inv[k * r + i]);
            if !d.is_zero() {
                self.u_inv[k * r + t] = ring.sub(&self.u_inv[k * r + t], &d);
            }
        }
    }

    /// `col_j += q * col_t`.
    fn add_col(&mut self, j: usize, t: usize, q: &Scalar) {
        let (ring, n, r) = (self.ring, self.cols, self.rows);
        for i in 0..r {
            let d = ring.mul(q, &self.a[i * n + t]);
            if !d.is_zero() {
                self.a[i * n + j] = ring.add(&self.a[i * n + j], &d);
            }
        }
        for i in 0..n {
            let d = ring.mul(q, &self.v[i * n + t]);
            if !d.is_zero() {
                self.v[i * n + j] = ring.add(&self.v[i * n + j], &d);
            }
        }
        // v_inv <- F^{-1} * v_inv: row_t -= q * row_j
        for k in 0..n {
            let d = ring.mul(q, &self.v_inv[j * n + k]);
            if !d.is_zero() {
                self.v_inv[t * n + k] = ring.sub(&self.v_inv[t * n + k], &d);
            }
        }
    }

    fn swap_rows(&mut self, i: usize, t: usize) {
        if i == t {
            return;
        }
        let (n, r) = (self.cols, self.rows);
        for j in 0..n {
            self.a.swap(i * n + j, t * n + j);
        }
        for j in 0..r {
            self.u.swap(i * r + j, t * r + j);
            self.u_inv.swap(j * r + i, j * r + t);
        }
    }

    fn swap_cols(&mut self, j: usize, t: usize) {
        if j == t {
            return;
        }
        let (n, r) = (self.cols, self.rows);
        for i in 0..r {
            self.a.swap(i * n + j, i * n + t);
        }
        for i in 0..n {
            self.v.swap(i * n + j, i * n + t);
            self.v_inv.swap(j * n + i, t * n + i);
        }
    }

    /// Multiplies row `t` by the unit `c`.
    fn scale_row(&mut self, t: usize, c: &Scalar) {
        let ring = self.ring;
        let cinv = ring.inv(c).expect("unit");
        let (n, r) = (self.cols, self.rows);
        for j in 0..n {
            self.a[t * n + j] = ring.mul(&self.a[t * n + j], c);
        }
        for j in 0..r {
            self.u[t * r + j] = ring.mul(&self.u[t * r + j], c);
            self.u_inv[j * r + t] = ring.mul(&self.u_inv[j * r + t], &cinv);
        }
    }

    /// Smallest nonzero entry (by ring size) of the trailing block, ties broken
    /// by position so that results are reproducible.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let e = self.at(i, j);
                if e.is_zero() {
                    continue;
                }
                let s = self.ring.size(e);
                if best.as_ref().is_none_or(|(b, _, _)| s < *b) {
                    let one = s.is_one();
                    best = Some((s, i, j));
                    if one {
                        return best.map(|(_, i, j)| (i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (self.ring.size(self.at(t, t)), t, t);
        if best.0.is_zero() {
            best.0 = BigInt::from(-1);
        }
        let mut consider = |s: BigInt, i: usize, j: usize| {
            if !s.is_zero() && (best.0.is_negative() || s < best.0) {
                best = (s, i, j);
            }
        };
        for i in t + 1..self.rows {
            consider(self.ring.size(self.at(i, t)), i, t);
        }
        for j in t + 1..self.cols {
            consider(self.ring.size(self.at(t, j)), t, j);
        }
        (best.1, best.2)
    }

    fn run(&mut self) -> usize {
        let ring = self.ring;
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.swap_rows(pi, t);
            self.swap_cols(pj, t);
            loop {
                let pivot = self.at(t, t).clone();
                let mut clean = true;
                for i in t + 1..self.rows {
                    if self.at(i, t).is_zero() {
                        continue;
                    }
                    let q = ring.neg(&ring.quotient(self.at(i, t), &pivot));
                    self.add_row(i, t, &q);
                    clean &= self.at(i, t).is_zero();
                }
                for j in t + 1..self.cols {
                    if self.at(t, j).is_zero() {
                        continue;
                    }
                    let q = ring.neg(&ring.quotient(self.at(t, j), &pivot));
                    self.add_col(j, t, &q);
                    clean &= self.at(t, j).is_zero();
                }
                if !clean {
                    let (i, j) = self.min_in_cross(t);
                    self.swap_rows(i, t);
                    self.swap_cols(j, t);
                    continue;
                }
                if ring.is_field() {
                    break;
                }
                // Enforce the divisibility chain: the pivot must divide the
                // whole trailing block, otherwise fold an offending row in.
                let bad = (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !ring.divides(&pivot, self.at(i, j))));
                match bad {
                    Some(i) => self.add_row(t, i, &ring.one()),
                    None => break,
                }
            }
            let pivot = self.at(t, t).clone();
            let unit = if ring.is_field() {
                ring.inv(&pivot).expect("nonzero pivot")
            } else if pivot.is_negative() {
                ring.from_i64(-1)
            } else {
                ring.one()
            };
            if !unit.is_one() {
                self.scale_row(t, &unit);
            }
            t += 1;
        }
        t
    }
}

impl SmithForm {
    pub fn compute(m: &Matrix) -> SmithForm {
        let ring = m.ring();
        let (rows, cols) = (m.rows(), m.cols());
        let eye = |n| Matrix::identity(ring, n).entries().to_vec();
        let mut red = Reducer { ring, rows, cols, a: m.entries().to_vec(), u: eye(rows), u_inv: eye(rows), v: eye(cols), v_inv: eye(cols) };
        let rank = red.run();
        let build = |r, c, data: Vec<Scalar>| Matrix::from_entries(ring, r, c, data).expect("ring-valid entries");
        SmithForm {
            u: build(rows, rows, red.u),
            u_inv: build(rows, rows, red.u_inv),
            s: build(rows, cols, red.a),
            v: build(cols, cols, red.v),
            v_inv: build(cols, cols, red.v_inv),
            rank,
        }
    }

    /// Nonzero diagonal entries of `s`, in order.
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// Columns of `v` past the rank: a basis of the kernel (saturated over `Z`).
    pub fn kernel_basis(&self) -> Matrix {
        self.v.submatrix(0, self.v.rows(), self.rank, self.v.cols())
    }

    /// Left inverse of [`kernel_basis`](Self::kernel_basis): maps a kernel
    /// vector to its coordinates.
    pub fn kernel_coordinates(&self) -> Matrix {
        self.v_inv.submatrix(self.rank, self.v_inv.rows(), 0, self.v_inv.cols())
    }
}

/// `(U, S, V)` with `U·M·V = S` diagonal, `U`, `V` invertible over the ring.
/// Over `Z` the diagonal is non-negative with `s_i | s_{i+1}`; over a field
/// it consists of ones followed by zeros.
pub fn smith_normal_form(m: &Matrix) -> (Matrix, Matrix, Matrix) {
    let f = SmithForm::compute(m);
    (f.u, f.s, f.v)
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
            row.iter().map(|e| (e * Scalar::from_integer(lcm.clone())).to_integer()).collect()
        })
        .collect()
}

/// Nonzero invariant factors of an integer matrix (including any leading
/// ones), normalized into a divisibility chain. Matrices over a field give a
/// list of `rank` ones.
pub fn invariant_factors(m: &Matrix) -> Vec<BigInt> {
    if m.ring().is_field() {
        return vec![BigInt::one(); rank(m)];
    }
    let mut a: Vec<Vec<BigInt>> = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut diag = Vec::new();
    let mut live_rows: Vec<usize> = (0..rows).collect();
    let mut live_cols: Vec<usize> = (0..cols).collect();
    loop {
        // pivot: minimal absolute value among live entries
        let mut best: Option<(BigInt, usize, usize)> = None;
        'scan: for (ri, &i) in live_rows.iter().enumerate() {
            for (ci, &j) in live_cols.iter().enumerate() {
                let e = &a[i][j];
                if e.is_zero() {
                    continue;
                }
                let s = e.abs();
                if best.as_ref().is_none_or(|(b, _, _)| s < *b) {
                    let one = s.is_one();
                    best = Some((s, ri, ci));
                    if one {
                        break 'scan;
                    }
                }
            }
        }
        let Some((_, mut ri, mut ci)) = best else { break };
        loop {
            let (pi, pj) = (live_rows[ri], live_cols[ci]);
            let p = a[pi][pj].clone();
            let mut next: Option<(BigInt, usize, usize)> = None;
            for (rk, &i) in live_rows.iter().enumerate() {
                if i == pi || a[i][pj].is_zero() {
                    continue;
                }
                let q = a[i][pj].div_floor(&p);
                let (src, dst) = if i < pi { a.split_at_mut(pi) } else { a.split_at_mut(i) };
                let (prow, irow) = if i < pi { (&dst[0], &mut src[i]) } else { (&src[pi], &mut dst[0]) };
                for &j in &live_cols {
                    if !prow[j].is_zero() {
                        irow[j] -= &q * &prow[j];
                    }
                }
                let r = irow[pj].abs();
                if !r.is_zero() && next.as_ref().is_none_or(|(b, _, _)| r < *b) {
                    next = Some((r, rk, ci));
                }
            }
            for (ck, &j) in live_cols.iter().enumerate() {
                if j == pj || a[pi][j].is_zero() {
                    continue;
                }
                let q = a[pi][j].div_floor(&p);
                for &i in &live_rows {
                    if !a[i][pj].is_zero() {
                        let d = &q * &a[i][pj];
                        a[i][j] -= d;
                    }
                }
                let r = a[pi][j].abs();
                if !r.is_zero() && next.as_ref().is_none_or(|(b, _, _)| r < *b) {
                    next = Some((r, ri, ck));
                }
            }
            match next {
                Some((_, r, c)) => {
                    ri = r;
                    ci = c;
                }
                None => break,
            }
        }
        diag.push(a[live_rows[ri]][live_cols[ci]].abs());
        live_rows.remove(ri);
        live_cols.remove(ci);
    }
    normalize_chain(diag)
}

/// Replaces a list of nonzero cyclic orders by the equivalent divisibility
/// chain `d_1 | d_2 | ...`.
pub(crate) fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for x in &mut d {
        *x = x.abs();
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g.is_zero() {
                continue;
            }
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Rank over the fraction field of the ring (or over `Z/p`).
pub fn rank(m: &Matrix) -> usize {
    match m.ring() {
        RingSpec::PrimeField(p) => rank_mod_p(m, p),
        _ => rank_integral(integer_rows(m), m.cols()),
    }
}

fn rank_integral(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(p, rank);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            let mut g = BigInt::zero();
            for j in c..cols {
                let v = &row[j] * &pv - &f * &pivot_row[j];
                g = g.gcd(&v);
                row[j] = v;
            }
            if g > BigInt::one() {
                for v in row.iter_mut().skip(c) {
                    *v /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_mod_p(m: &Matrix, p: u64) -> usize {
    let to_u64 = |e: &Scalar| -> u64 {
        let r = e.numer().mod_floor(&BigInt::from(p));
        u64::try_from(r).expect("residue fits")
    };
    let cols = m.cols();
    let mut a: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row(i).iter().map(to_u64).collect()).collect();
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let inv = |x: u64| {
        let (mut b, mut e, mut acc) = (x, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulm(acc, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(piv, rank);
        let pinv = inv(a[rank][c]);
        let (head, tail) = a.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mulm(row[c], pinv);
            for j in c..cols {
                row[j] = (row[j] + p - mulm(f, prow[j])) % p;
            }
        }
        rank += 1;
    }
    rank
}
