use num_traits::Zero;

use super::matrix::Matrix;
use super::smith::SmithForm;
use crate::error::{Error, Result};

/// Kernel basis (as columns) and a left inverse giving coordinates of kernel
/// vectors in that basis. Over `Z` the basis spans the saturated kernel.
pub fn kernel(m: &Matrix) -> (Matrix, Matrix) {
    let f = SmithForm::compute(m);
    (f.kernel_basis(), f.kernel_coordinates())
}

/// Indices of the pivot columns of the row echelon form, i.e. the greedy
/// choice of linearly independent columns from left to right. Field rings only.
pub fn pivot_columns(m: &Matrix) -> Result<Vec<usize>> {
    let ring = m.ring();
    if !ring.is_field() {
        return Err(Error::NonFieldRing(ring));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<_>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        let pinv = ring.inv(&a[r][c]).expect("nonzero");
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = ring.mul(&a[i][c], &pinv);
            for j in c..cols {
                let v = ring.sub(&a[i][j], &ring.mul(&f, &a[r][j]));
                a[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    Ok(pivots)
}

/// A basis of `ker(outgoing) / im(incoming)` over a field, with cocycle
/// representatives and a projection from cocycles to class coordinates.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    /// Representatives of the basis classes, as columns.
    pub representatives: Matrix,
    /// Maps a cocycle to the coordinates of its class.
    pub projection: Matrix,
}

impl QuotientBasis {
    pub fn compute(dim: usize, incoming: Option<&Matrix>, outgoing: Option<&Matrix>, ring: super::RingSpec) -> Result<Self> {
        if !ring.is_field() {
            return Err(Error::NonFieldRing(ring));
        }
        let kernel_basis = match outgoing {
            Some(d) => kernel(d).0,
            None => Matrix::identity(ring, dim),
        };
        let image = match incoming {
            Some(d) => {
                let cols = pivot_columns(d)?;
                d.select_columns(&cols)
            }
            None => Matrix::zeros(ring, dim, 0),
        };
        let joined = Matrix::hstack(ring, dim, &[&image, &kernel_basis]);
        let chosen: Vec<usize> = pivot_columns(&joined)?.into_iter().filter(|&c| c >= image.cols()).collect();
        let representatives = joined.select_columns(&chosen);
        let frame = Matrix::hstack(ring, dim, &[&image, &representatives]);
        // frame has full column rank; its left inverse is V * S^+ * U
        let f = SmithForm::compute(&frame);
        let mut pseudo = Matrix::zeros(ring, frame.cols(), frame.rows());
        for i in 0..f.rank {
            pseudo.set(i, i, ring.inv(f.s.get(i, i)).expect("field pivot"));
        }
        let left_inverse = &(&f.v * &pseudo) * &f.u;
        let projection = left_inverse.submatrix(image.cols(), frame.cols(), 0, dim);
        Ok(QuotientBasis { representatives, projection })
    }

    pub fn dimension(&self) -> usize {
        self.representatives.cols()
    }
}
