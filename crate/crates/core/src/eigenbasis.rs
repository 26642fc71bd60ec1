//! Orthonormal eigenbasis of the symmetric random matrix `Q`.
//!
//! Every transform family is built on the same basis, so ordering and sign are
//! fixed here once: columns sorted by descending eigenvalue of `Q` (stable on
//! the solver's column order) and each column's largest-magnitude entry made
//! positive (first such entry on ties).

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::randmat::{random_matrix, symmetrize, SymmetricMatrixQ};

/// Jacobi sweeps stop once the off-diagonal Frobenius norm falls to this
/// fraction of `‖Q‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Written into exported basis headers.
pub const SOLVER_VERSION: &str = "cyclic-jacobi-1";

/// How the columns of a basis were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assembly {
    /// Eigenvectors of `Q` straight from the solver.
    Plain,
    /// `2N` interleaved even/odd columns built from an `N`-point basis.
    RedfrntEven,
    /// `2N+1` columns: the even assembly with a middle row inserted, plus the
    /// middle unit vector.
    RedfrntOdd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    vectors: RealMatrix,
    q_eigenvalues: Vec<f64>,
    seed: Option<u64>,
    assembly: Assembly,
}

impl SpectralBasis {
    /// `P` from `seed`, symmetrized, then diagonalized.
    pub fn from_seed(seed: u64, n: usize) -> Result<Self> {
        eigendecompose(&symmetrize(&random_matrix(seed, n)?))
    }

    /// Rebuilds a plain basis from stored columns, e.g. after a CSV import.
    /// The columns must be orthonormal to within `1e-10`.
    pub fn from_parts(
        vectors: RealMatrix,
        q_eigenvalues: Vec<f64>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if !vectors.is_square() || vectors.rows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "basis must be square and non-empty, got {}x{}",
                vectors.rows(),
                vectors.cols()
            )));
        }
        if q_eigenvalues.len() != vectors.cols() {
            return Err(Error::InvalidDimension(format!(
                "{} eigenvalues for {} columns",
                q_eigenvalues.len(),
                vectors.cols()
            )));
        }
        let basis = Self {
            vectors,
            q_eigenvalues,
            seed,
            assembly: Assembly::Plain,
        };
        let defect = orthogonality_defect(&basis);
        if defect.is_nan() || defect > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "basis columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(basis)
    }

    pub(crate) fn assembled(
        vectors: RealMatrix,
        q_eigenvalues: Vec<f64>,
        seed: Option<u64>,
        assembly: Assembly,
    ) -> Self {
        Self {
            vectors,
            q_eigenvalues,
            seed,
            assembly,
        }
    }

    /// Number of columns (and rows).
    pub fn n(&self) -> usize {
        self.vectors.cols()
    }

    /// Columns are the eigenvectors.
    pub fn vectors(&self) -> &RealMatrix {
        &self.vectors
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// Eigenvalues of `Q`, one per column. For assembled bases each source
    /// value appears twice (cosine and sine column) and the extra middle column
    /// of the odd assembly carries `0.0`.
    pub fn q_eigenvalues(&self) -> &[f64] {
        &self.q_eigenvalues
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn assembly(&self) -> Assembly {
        self.assembly
    }
}

/// Cyclic Jacobi diagonalization of `Q`.
///
/// Rotations visit `(p, q)` pairs in row order `p < q` each sweep. Fails with
/// [`Error::Convergence`] if the off-diagonal norm is still above tolerance
/// after [`JACOBI_MAX_SWEEPS`] sweeps.
pub fn eigendecompose(q: &SymmetricMatrixQ) -> Result<SpectralBasis> {
    let n = q.n();
    let mut a = q.entries().clone();
    let mut v = RealMatrix::identity(n);
    let threshold = JACOBI_TOLERANCE * a.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Convergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for r in p + 1..n {
                rotate(&mut a, &mut v, p, r);
            }
        }
        sweeps += 1;
    }

    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // sort_by is stable, which fixes the tie order
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));

    let mut vectors = RealMatrix::zeros(n, n);
    let mut q_eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        normalize_sign(&mut col);
        vectors.set_column(dst, &col);
        q_eigenvalues.push(raw[src]);
    }

    Ok(SpectralBasis {
        vectors,
        q_eigenvalues,
        seed: q.seed(),
        assembly: Assembly::Plain,
    })
}

fn off_diagonal_norm(a: &RealMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing `a[p][r]`, accumulated into `v`.
fn rotate(a: &mut RealMatrix, v: &mut RealMatrix, p: usize, r: usize) {
    let apr = a[(p, r)];
    if apr == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(r, r)] - a[(p, p)]) / (2.0 * apr);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    a[(p, p)] -= t * apr;
    a[(r, r)] += t * apr;
    a[(p, r)] = 0.0;
    a[(r, p)] = 0.0;
    for k in 0..n {
        if k != p && k != r {
            let akp = a[(k, p)];
            let akr = a[(k, r)];
            let new_p = c * akp - s * akr;
            let new_r = s * akp + c * akr;
            a[(k, p)] = new_p;
            a[(p, k)] = new_p;
            a[(k, r)] = new_r;
            a[(r, k)] = new_r;
        }
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkr = v[(k, r)];
        v[(k, p)] = c * vkp - s * vkr;
        v[(k, r)] = s * vkp + c * vkr;
    }
}

fn normalize_sign(col: &mut [f64]) {
    let mut best = 0;
    for (i, x) in col.iter().enumerate() {
        if x.abs() > col[best].abs() {
            best = i;
        }
    }
    if col[best] < 0.0 {
        col.iter_mut().for_each(|x| *x = -*x);
    }
}

/// `‖VᵗV − I‖_max`.
pub fn orthogonality_defect(basis: &SpectralBasis) -> f64 {
    let v = basis.vectors();
    v.transpose()
        .matmul(v)
        .max_abs_diff(&RealMatrix::identity(v.cols()))
}

/// Largest column residual `‖Q·v_k − λ_k·v_k‖₂` over the basis.
pub fn eigen_residual(q: &SymmetricMatrixQ, basis: &SpectralBasis) -> f64 {
    let qv = q.entries().matmul(basis.vectors());
    (0..basis.n())
        .map(|k| {
            let lambda = basis.q_eigenvalues()[k];
            (0..basis.n())
                .map(|i| {
                    let d = qv[(i, k)] - lambda * basis.vectors()[(i, k)];
                    d * d
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}
