//! Applying kernels to signals and images, plus the half-size ReDFRNT path.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eigenbasis::{Assembly, SpectralBasis};
use crate::error::{Error, Result};
use crate::kernels::{build_kernel, unit_phase, Family, Kernel, KernelSpec};
use crate::matrix::ComplexMatrix;
use crate::signals::GrayImage;

/// Below this amplitude a phase is treated as undefined.
pub const PHASE_AMPLITUDE_FLOOR: f64 = 1e-9;

/// A non-empty 1-D sequence of complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("signal must have at least one sample".into()));
        }
        Ok(Self { samples })
    }

    /// Panics on an empty slice.
    pub fn from_real(samples: &[f64]) -> Self {
        assert!(!samples.is_empty(), "signal must have at least one sample");
        Self {
            samples: samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }
}

/// Transform output.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub spec: KernelSpec,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn amplitude(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Principal argument in `(-π, π]`.
    pub fn phase(&self) -> Vec<f64> {
        self.values.iter().map(|v| principal_phase(*v)).collect()
    }

    pub fn phase_defined(&self) -> Vec<bool> {
        self.values
            .iter()
            .map(|v| v.norm() >= PHASE_AMPLITUDE_FLOOR)
            .collect()
    }

    pub fn to_signal(&self) -> Signal {
        Signal {
            samples: self.values.clone(),
        }
    }
}

/// `arg(z)` mapped into `(-π, π]` (`atan2` may return `-π` for `-x - 0i`).
pub fn principal_phase(z: Complex64) -> f64 {
    let p = z.arg();
    if p <= -PI {
        p + 2.0 * PI
    } else {
        p
    }
}

/// `arctan(tan φ)`: the phase reduced modulo π into `[-π/2, π/2]`.
pub fn reduce_half_turn(phase: f64) -> f64 {
    phase - PI * (phase / PI).round()
}

/// Distance between two angles on a circle of the given period, in `[0, period/2]`.
pub fn angle_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Special phase of every entry; `None` where the amplitude is below
/// [`PHASE_AMPLITUDE_FLOOR`].
pub fn special_phase(spectrum: &Spectrum) -> Vec<Option<f64>> {
    special_phase_of(&spectrum.values)
}

/// [`special_phase`] on a bare slice.
pub fn special_phase_of(values: &[Complex64]) -> Vec<Option<f64>> {
    values
        .iter()
        .map(|v| {
            (v.norm() >= PHASE_AMPLITUDE_FLOOR).then(|| reduce_half_turn(principal_phase(*v)))
        })
        .collect()
}

/// Sum of squared moduli.
pub fn energy(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum()
}

pub fn apply_1d(kernel: &Kernel, x: &Signal) -> Result<Spectrum> {
    if kernel.dim() != x.len() {
        return Err(Error::InvalidInput(format!(
            "signal has {} samples, kernel expects {}",
            x.len(),
            kernel.dim()
        )));
    }
    Ok(Spectrum {
        values: kernel.entries().mul_vec(&x.samples),
        spec: *kernel.spec(),
    })
}

/// `R·y·Rᵗ` on a complex grid.
pub fn apply_2d_grid(kernel: &Kernel, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    if y.rows() != y.cols() {
        return Err(Error::InvalidInput(format!(
            "2-D transform needs a square grid, got {}x{}",
            y.rows(),
            y.cols()
        )));
    }
    if y.rows() != kernel.dim() {
        return Err(Error::InvalidInput(format!(
            "grid is {}x{}, kernel expects {}x{}",
            y.rows(),
            y.cols(),
            kernel.dim(),
            kernel.dim()
        )));
    }
    let r = kernel.entries();
    Ok(r.matmul(y).matmul(&r.transpose()))
}

/// `R·y·Rᵗ` on a grayscale image.
pub fn apply_2d(kernel: &Kernel, y: &GrayImage) -> Result<ComplexMatrix> {
    if y.rows() != y.cols() {
        return Err(Error::InvalidInput(format!(
            "2-D transform needs a square image, got {}x{}",
            y.rows(),
            y.cols()
        )));
    }
    apply_2d_grid(kernel, &ComplexMatrix::from_real(y.pixels()))
}

/// Mirror-symmetric and mirror-antisymmetric halves of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenOddParts {
    pub even: Signal,
    pub odd: Signal,
}

/// `s_e(n) = (s(n) + s(L+1-n))/2`, `s_o(n) = (s(n) - s(L+1-n))/2`.
///
/// For odd `L` the middle sample lands entirely in the even part.
pub fn even_odd_decompose(s: &Signal) -> EvenOddParts {
    let x = &s.samples;
    let len = x.len();
    let mut even = Vec::with_capacity(len);
    let mut odd = Vec::with_capacity(len);
    for n in 0..len {
        let mirrored = x[len - 1 - n];
        even.push((x[n] + mirrored) / 2.0);
        odd.push((x[n] - mirrored) / 2.0);
    }
    EvenOddParts {
        even: Signal { samples: even },
        odd: Signal { samples: odd },
    }
}

/// The two `N`-point kernels needed to evaluate a `2N` or `2N+1` point
/// ReDFRNT, built once and reused across signals.
#[derive(Debug, Clone)]
pub struct RedfrntFastPlan {
    cosine: Kernel,
    sine: Kernel,
    middle: Complex64,
}

impl RedfrntFastPlan {
    pub fn new(basis: &SpectralBasis, alpha: f64, m: f64) -> Result<Self> {
        if basis.assembly() != Assembly::Plain {
            return Err(Error::InvalidSpec(
                "the fast path needs the N-point eigenbasis, not an assembled one".into(),
            ));
        }
        let n = basis.n();
        let cosine = build_kernel(basis, &KernelSpec::new(Family::Dfrnct, alpha, m, n)?)?;
        let sine = build_kernel(basis, &KernelSpec::new(Family::Dfrnst, alpha, m, n)?)?;
        Ok(Self {
            cosine,
            sine,
            middle: unit_phase((2 * n) as f64, alpha, m),
        })
    }

    pub fn half_len(&self) -> usize {
        self.cosine.dim()
    }

    pub fn apply(&self, s: &Signal) -> Result<Spectrum> {
        let half = self.half_len();
        let len = s.len();
        let family = if len == 2 * half {
            Family::RedfrntEven
        } else if len == 2 * half + 1 {
            Family::RedfrntOdd
        } else {
            return Err(Error::InvalidLength {
                got: len,
                expected: format!("{} or {}", 2 * half, 2 * half + 1),
            });
        };

        let parts = even_odd_decompose(s);
        let even_half = &parts.even.samples[..half];
        let odd_half = &parts.odd.samples[..half];
        let s_ec = self.cosine.entries().mul_vec(even_half);
        let s_os = self.sine.entries().mul_vec(odd_half);

        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for n in 0..half {
            out[n] = s_ec[n] + s_os[n];
            out[len - 1 - n] = s_ec[n] - s_os[n];
        }
        if family == Family::RedfrntOdd {
            out[half] = s.samples[half] * self.middle;
        }

        let spec = self.cosine.spec().with_family(family);
        Ok(Spectrum { values: out, spec })
    }
}

/// ReDFRNT of a `2N` or `2N+1` point signal using one `N`-point DFRNCT on the
/// even half and one `N`-point DFRNST on the odd half.
pub fn redfrnt_fast(basis: &SpectralBasis, alpha: f64, m: f64, s: &Signal) -> Result<Spectrum> {
    RedfrntFastPlan::new(basis, alpha, m)?.apply(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn dense_redfrnt(basis: &SpectralBasis, alpha: f64, len: usize) -> Kernel {
        let family = if len.is_multiple_of(2) {
            Family::RedfrntEven
        } else {
            Family::RedfrntOdd
        };
        build_kernel(basis, &KernelSpec::new(family, alpha, 1.0, basis.n()).unwrap()).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]), 3.0);
    }

    #[test]
    fn even_odd_examples() {
        let p = even_odd_decompose(&Signal::from_real(&[1.0, 2.0, 2.0, 1.0]));
        assert_eq!(p.even, Signal::from_real(&[1.0, 2.0, 2.0, 1.0]));
        assert_eq!(p.odd, Signal::from_real(&[0.0; 4]));

        let p = even_odd_decompose(&Signal::from_real(&[1.0, 0.0, 0.0, -1.0]));
        assert_eq!(p.even, Signal::from_real(&[0.0; 4]));
        assert_eq!(p.odd, Signal::from_real(&[1.0, 0.0, 0.0, -1.0]));

        let p = even_odd_decompose(&Signal::from_real(&[4.0, 0.0, 0.0, 0.0]));
        assert_eq!(p.even, Signal::from_real(&[2.0, 0.0, 0.0, 2.0]));
        assert_eq!(p.odd, Signal::from_real(&[2.0, 0.0, 0.0, -2.0]));

        let p = even_odd_decompose(&Signal::from_real(&[1.0, 5.0, 3.0]));
        assert_eq!(p.even, Signal::from_real(&[2.0, 5.0, 2.0]));
        assert_eq!(p.odd, Signal::from_real(&[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn special_phase_examples() {
        assert!((reduce_half_turn(0.3) - 0.3).abs() < 1e-15);
        assert!((reduce_half_turn(0.3 - PI) - 0.3).abs() < 1e-15);
        assert!((reduce_half_turn(PI - 0.2) + 0.2).abs() < 1e-15);
        let spec = Spectrum {
            values: vec![c(0.0, 0.0), Complex64::from_polar(2.0, 0.3 - PI)],
            spec: KernelSpec::new(Family::Dfrnt, 0.0, 1.0, 2).unwrap(),
        };
        let sp = special_phase(&spec);
        assert_eq!(sp[0], None);
        assert!((sp[1].unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn principal_phase_range() {
        assert_eq!(principal_phase(c(-1.0, -0.0)), PI);
        assert_eq!(principal_phase(c(-1.0, 0.0)), PI);
        assert!((angle_distance(PI - 1e-3, -PI + 1e-3, 2.0 * PI) - 2e-3).abs() < 1e-12);
    }

    #[test]
    fn identity_and_round_trip_1d() {
        let b = SpectralBasis::from_seed(8, 16).unwrap();
        let x = Signal::new((0..16).map(|i| c(i as f64, -(i as f64) / 3.0)).collect()).unwrap();
        for f in [Family::Dfrnt, Family::Dfrnct, Family::Dfrnst] {
            let spec = KernelSpec::new(f, 0.0, 1.0, 16).unwrap();
            let y = apply_1d(&build_kernel(&b, &spec).unwrap(), &x).unwrap();
            assert!(max_diff(&y.values, x.samples()) <= 1e-10);

            let fwd = build_kernel(&b, &spec.with_alpha(0.45)).unwrap();
            let back = build_kernel(&b, &spec.with_alpha(-0.45)).unwrap();
            let there = apply_1d(&fwd, &x).unwrap();
            let rel = (energy(&there.values) - energy(x.samples())).abs() / energy(x.samples());
            assert!(rel <= 1e-10);
            let again = apply_1d(&back, &there.to_signal()).unwrap();
            assert!(max_diff(&again.values, x.samples()) <= 1e-9);
        }
    }

    #[test]
    fn dimension_checks() {
        let b = SpectralBasis::from_seed(8, 4).unwrap();
        let k = build_kernel(&b, &KernelSpec::new(Family::Dfrnt, 0.2, 1.0, 4).unwrap()).unwrap();
        assert!(apply_1d(&k, &Signal::from_real(&[1.0; 5])).is_err());
        let img = GrayImage::new(crate::matrix::RealMatrix::zeros(4, 3)).unwrap();
        assert!(apply_2d(&k, &img).is_err());
        let img = GrayImage::new(crate::matrix::RealMatrix::zeros(5, 5)).unwrap();
        assert!(apply_2d(&k, &img).is_err());
        assert!(matches!(
            redfrnt_fast(&b, 0.2, 1.0, &Signal::from_real(&[1.0; 7])),
            Err(Error::InvalidLength { got: 7, .. })
        ));
        assert!(Signal::new(vec![]).is_err());
    }

    #[test]
    fn fast_path_zero_order_is_identity() {
        let b = SpectralBasis::from_seed(3, 5).unwrap();
        for len in [10, 11] {
            let s = Signal::new((0..len).map(|i| c((i * i) as f64, 1.0)).collect()).unwrap();
            let y = redfrnt_fast(&b, 0.0, 1.0, &s).unwrap();
            assert!(max_diff(&y.values, s.samples()) <= 1e-10);
        }
    }

    #[test]
    fn odd_length_impulse_hits_middle_only() {
        let n = 6;
        let alpha = 0.6;
        let b = SpectralBasis::from_seed(21, n).unwrap();
        let mut x = vec![0.0; 2 * n + 1];
        x[n] = 1.0;
        let y = redfrnt_fast(&b, alpha, 1.0, &Signal::from_real(&x)).unwrap();
        let expected = Complex64::from_polar(1.0, -4.0 * PI * n as f64 * alpha);
        for (i, v) in y.values.iter().enumerate() {
            if i == n {
                assert!((v - expected).norm() <= 1e-12);
            } else {
                assert_eq!(*v, c(0.0, 0.0));
            }
        }
        let dense = apply_1d(&dense_redfrnt(&b, alpha, 2 * n + 1), &Signal::from_real(&x)).unwrap();
        assert!(max_diff(&dense.values, &y.values) <= 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn decomposition_reconstructs(xs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..40)) {
            let s = Signal::new(xs.iter().map(|&(r, i)| c(r, i)).collect()).unwrap();
            let p = even_odd_decompose(&s);
            let len = s.len();
            for n in 0..len {
                prop_assert!((p.even.samples()[n] + p.odd.samples()[n] - s.samples()[n]).norm() <= 1e-12);
                prop_assert!((p.even.samples()[n] - p.even.samples()[len - 1 - n]).norm() <= 1e-12);
                prop_assert!((p.odd.samples()[n] + p.odd.samples()[len - 1 - n]).norm() <= 1e-12);
            }
        }

        #[test]
        fn fast_path_matches_dense(
            seed in any::<u64>(),
            n in 1usize..20,
            odd in any::<bool>(),
            alpha in -1.0f64..1.0,
            sample_seed in any::<u64>(),
        ) {
            let b = SpectralBasis::from_seed(seed, n).unwrap();
            let len = 2 * n + usize::from(odd);
            let mut stream = crate::randmat::SeededStream::new(sample_seed);
            let s = Signal::new((0..len).map(|_| c(stream.next_f64() - 0.5, stream.next_f64() - 0.5)).collect()).unwrap();
            let fast = redfrnt_fast(&b, alpha, 1.0, &s).unwrap();
            let dense = apply_1d(&dense_redfrnt(&b, alpha, len), &s).unwrap();
            prop_assert!(max_diff(&fast.values, &dense.values) <= 1e-9);
            prop_assert_eq!(fast.spec, dense.spec);
        }

        #[test]
        fn linearity(
            seed in any::<u64>(),
            fam in 0usize..5,
            a in (-2.0f64..2.0, -2.0f64..2.0),
            bc in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let basis = SpectralBasis::from_seed(seed, 8).unwrap();
            let family = Family::ALL[fam];
            let k = build_kernel(&basis, &KernelSpec::new(family, 0.6, 1.0, 8).unwrap()).unwrap();
            let dim = k.dim();
            let mut stream = crate::randmat::SeededStream::new(seed ^ 0xabc);
            let mut draw = || Signal::new((0..dim).map(|_| c(stream.next_f64(), stream.next_f64())).collect()).unwrap();
            let (x1, x2) = (draw(), draw());
            let (a, bb) = (c(a.0, a.1), c(bc.0, bc.1));
            let mixed = Signal::new(x1.samples().iter().zip(x2.samples()).map(|(p, q)| a * p + bb * q).collect()).unwrap();
            let lhs = apply_1d(&k, &mixed).unwrap();
            let y1 = apply_1d(&k, &x1).unwrap();
            let y2 = apply_1d(&k, &x2).unwrap();
            let rhs: Vec<Complex64> = y1.values.iter().zip(&y2.values).map(|(p, q)| a * p + bb * q).collect();
            prop_assert!(max_diff(&lhs.values, &rhs) <= 1e-10);
        }
    }
}
