//! Seeded random matrices.
//!
//! The generator is SplitMix64. With `state` a wrapping 64-bit counter, each
//! draw is:
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15        (mod 2^64)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  (mod 2^64)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB  (mod 2^64)
//! z = z ^ (z >> 31)
//! ```
//!
//! A real draw keeps the top 53 bits: `(z >> 11) * 2^-53`, which lies in `[0, 1)`.
//! `P` is filled row-major from a fresh stream, so `(seed, n)` fixes every bit
//! of `P`, `Q`, and everything built on them.

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_2: u64 = 0x94D0_49BB_1331_11EB;
const UNIT_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct SeededStream {
    state: u64,
    seed: u64,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Rewinds to the start of the sequence.
    pub fn reseed(&mut self) {
        self.state = self.seed;
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
        z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIT_53
    }
}

/// Shorthand for [`SeededStream::new`].
pub fn new_stream(seed: u64) -> SeededStream {
    SeededStream::new(seed)
}

/// The real random matrix `P`, entries uniform on `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomMatrixP {
    seed: u64,
    entries: RealMatrix,
}

impl RandomMatrixP {
    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }

    /// Wraps an arbitrary square matrix, e.g. a hand-written fixture.
    pub fn from_matrix(seed: u64, entries: RealMatrix) -> Result<Self> {
        if !entries.is_square() || entries.rows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "P must be square and non-empty, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        Ok(Self { seed, entries })
    }
}

pub fn random_matrix(seed: u64, n: usize) -> Result<RandomMatrixP> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    let mut stream = SeededStream::new(seed);
    let data = (0..n * n).map(|_| stream.next_f64()).collect();
    Ok(RandomMatrixP {
        seed,
        entries: RealMatrix::from_row_major(n, n, data),
    })
}

/// The symmetric matrix `Q = (P + Pᵗ)/2`. Symmetry is exact, not approximate.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrixQ {
    seed: Option<u64>,
    entries: RealMatrix,
}

impl SymmetricMatrixQ {
    /// Accepts a matrix that is already exactly symmetric.
    pub fn from_matrix(entries: RealMatrix) -> Result<Self> {
        if !entries.is_square() || entries.rows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "Q must be square and non-empty, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        let n = entries.rows();
        for i in 0..n {
            for j in i + 1..n {
                if entries[(i, j)].to_bits() != entries[(j, i)].to_bits() {
                    return Err(Error::InvalidInput(format!(
                        "Q is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            seed: None,
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    /// Seed of the `P` this was derived from, if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }
}

pub fn symmetrize(p: &RandomMatrixP) -> SymmetricMatrixQ {
    let n = p.n();
    let src = &p.entries;
    let mut q = RealMatrix::zeros(n, n);
    for i in 0..n {
        q[(i, i)] = src[(i, i)];
        for j in i + 1..n {
            let v = (src[(i, j)] + src[(j, i)]) / 2.0;
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    SymmetricMatrixQ {
        seed: Some(p.seed),
        entries: q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Reference outputs computed with an independent Python SplitMix64.
    #[test]
    fn splitmix_reference_vectors() {
        let mut s = SeededStream::new(0);
        assert_eq!(s.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(s.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        let mut s = SeededStream::new(1_234_567);
        let got: Vec<u64> = (0..3).map(|_| s.next_u64()).collect();
        assert_eq!(
            got,
            vec![6457827717110365317, 3203168211198807973, 9817491932198370423]
        );
    }

    #[test]
    fn equal_seeds_agree_and_reseed_rewinds() {
        let mut a = new_stream(0);
        let mut b = new_stream(0);
        assert_eq!(a.next_f64().to_bits(), b.next_f64().to_bits());

        let mut s = new_stream(42);
        let first: Vec<f64> = (0..3).map(|_| s.next_f64()).collect();
        s.reseed();
        let again: Vec<f64> = (0..3).map(|_| s.next_f64()).collect();
        assert_eq!(first, again);
        assert_eq!(s.seed(), 42);
    }

    #[test]
    fn different_seeds_differ() {
        let mut a = new_stream(1);
        let mut b = new_stream(2);
        let differs = (0..64).any(|_| a.next_f64() != b.next_f64());
        assert!(differs);
    }

    #[test]
    fn random_matrix_contract() {
        let a = random_matrix(7, 4).unwrap();
        let b = random_matrix(7, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.entries().as_slice().iter().all(|v| (0.0..1.0).contains(v)));
        assert_eq!(a.entries().as_slice().len(), 16);
        assert_ne!(a, random_matrix(8, 4).unwrap());
        assert!(matches!(random_matrix(7, 0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn symmetrize_examples() {
        let p = RandomMatrixP::from_matrix(0, RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]))
            .unwrap();
        let q = symmetrize(&p);
        assert_eq!(
            q.entries(),
            &RealMatrix::from_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]])
        );

        let sym = RealMatrix::from_rows(&[vec![0.25, 0.75], vec![0.75, 0.5]]);
        let q = symmetrize(&RandomMatrixP::from_matrix(0, sym.clone()).unwrap());
        assert_eq!(q.entries(), &sym);

        let q = symmetrize(&random_matrix(7, 8).unwrap());
        let m = q.entries();
        let worst = (0..8)
            .flat_map(|i| (0..8).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs())
            .fold(0.0, f64::max);
        assert_eq!(worst, 0.0);
        assert_eq!(q.seed(), Some(7));
    }

    #[test]
    fn q_rejects_asymmetric_input() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(SymmetricMatrixQ::from_matrix(m).is_err());
    }

    proptest! {
        #[test]
        fn q_is_bitwise_symmetric_and_in_range(seed in any::<u64>(), n in 1usize..24) {
            let p = random_matrix(seed, n).unwrap();
            let q = symmetrize(&p);
            let m = q.entries();
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(m[(i, j)].to_bits(), m[(j, i)].to_bits());
                    prop_assert!((0.0..1.0).contains(&m[(i, j)]));
                }
            }
            prop_assert_eq!(p, random_matrix(seed, n).unwrap());
        }
    }
}
