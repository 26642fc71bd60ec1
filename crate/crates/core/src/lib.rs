//! Discrete fractional random transforms.
//!
//! A random symmetric matrix `Q = (P + Pᵗ)/2` is drawn from a seeded stream and
//! diagonalized once. Its orthonormal eigenvectors `V` are shared by every
//! transform in the family:
//!
//! * DFRNT: `R^α = V · diag(exp(-2iπkα/M)) · Vᵗ`
//! * DFRNCT / DFRNST: same basis, even (`2k`) or odd (`2k+1`) phase exponents
//! * ReDFRNT: a `2N` or `2N+1` point transform whose basis interleaves the
//!   DFRNCT/DFRNST vectors with their reversed copies, so even and odd signals
//!   can be transformed with two half-size kernels.
//!
//! ```
//! use fracrand::{Family, KernelSpec, SpectralBasis, Signal, apply_1d, build_kernel, energy};
//!
//! let basis = SpectralBasis::from_seed(7, 8).unwrap();
//! let kernel = build_kernel(&basis, &KernelSpec::new(Family::Dfrnct, 0.6, 1.0, 8).unwrap()).unwrap();
//! let x = Signal::from_real(&[1.0, 0.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
//! let spectrum = apply_1d(&kernel, &x).unwrap();
//! assert!((energy(&spectrum.values) - energy(x.samples())).abs() < 1e-10);
//! ```

pub mod cli;
pub mod eigenbasis;
pub mod figures;
pub mod error;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod randmat;
pub mod scramble;
pub mod signals;
pub mod transform;
pub mod verify;

pub use eigenbasis::{eigendecompose, orthogonality_defect, Assembly, SpectralBasis};
pub use error::{Error, Result};
pub use kernels::{
    assemble_redfrnt_basis, build_kernel, eigenvalue_diagonal, kernel_power_compose,
    EigenvalueDiagonal, Family, Kernel, KernelSpec, Parity,
};
pub use matrix::{ComplexMatrix, RealMatrix};
pub use num_complex::Complex64;
pub use randmat::{random_matrix, symmetrize, RandomMatrixP, SeededStream, SymmetricMatrixQ};

pub use signals::{make_test_signal, GrayImage, RectImageSpec, TestSignalId};
pub use transform::{
    apply_1d, apply_2d, energy, even_odd_decompose, redfrnt_fast, special_phase, EvenOddParts,
    Signal, Spectrum, PHASE_AMPLITUDE_FLOOR,
};
