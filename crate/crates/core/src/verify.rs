//! Property suite behind `fracrand verify`.
//!
//! Every check measures a defect and compares it to a tolerance. Defaults are
//! the documented per-check tolerances; a single override replaces all of them.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::eigenbasis::{eigen_residual, eigendecompose, orthogonality_defect, SpectralBasis};
use crate::error::Result;
use crate::kernels::{
    assemble_redfrnt_basis, build_kernel, kernel_power_compose, Family, Kernel, KernelSpec, Parity,
};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::randmat::{random_matrix, symmetrize, SeededStream};
use crate::signals::{exact_mirrors, mirror_defect, Rect, RectImageSpec};
use crate::transform::{
    angle_distance, apply_1d, apply_2d, energy, even_odd_decompose, principal_phase, redfrnt_fast,
    special_phase_of, Signal, PHASE_AMPLITUDE_FLOOR,
};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub n: usize,
    pub alpha: f64,
    pub m: f64,
    /// Replaces every per-check tolerance when set.
    pub tolerance: Option<f64>,
    /// Added to the expected order in the additivity checks (negative control).
    pub alpha_mismatch: f64,
    /// Random signals per family for the Parseval and fast-path checks.
    pub trials: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n: 64,
            alpha: 0.6,
            m: 1.0,
            tolerance: None,
            alpha_mismatch: 0.0,
            trials: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.defect <= self.tolerance
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<52} defect {:>10.3e}  tolerance {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.defect,
            self.tolerance
        )
    }
}

struct Suite<'a> {
    cfg: &'a VerifyConfig,
    out: Vec<CheckOutcome>,
}

impl Suite<'_> {
    fn check(&mut self, name: impl Into<String>, defect: f64, tolerance: f64) {
        self.out.push(CheckOutcome {
            name: name.into(),
            // NaN must fail
            defect: if defect.is_nan() { f64::INFINITY } else { defect },
            tolerance: self.cfg.tolerance.unwrap_or(tolerance),
        });
    }
}

fn kernel(basis: &SpectralBasis, family: Family, alpha: f64, m: f64) -> Result<Kernel> {
    build_kernel(basis, &KernelSpec::new(family, alpha, m, basis.n())?)
}

fn random_signal(stream: &mut SeededStream, len: usize) -> Signal {
    Signal::new(
        (0..len)
            .map(|_| Complex64::new(stream.next_f64() - 0.5, stream.next_f64() - 0.5))
            .collect(),
    )
    .expect("len >= 1")
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn relative_energy_error(input: &[Complex64], output: &[Complex64]) -> f64 {
    let e_in = energy(input);
    (energy(output) - e_in).abs() / e_in
}

/// Mirror defects of a ReDFRNT output: amplitude, raw phase (even input) or
/// raw phase offset by π plus special phase (odd input).
struct MirrorDefects {
    amplitude: f64,
    phase: f64,
    special_phase: f64,
}

fn mirror_defects(values: &[Complex64], odd_input: bool) -> MirrorDefects {
    let len = values.len();
    let spectrum_phase: Vec<f64> = values.iter().map(|v| principal_phase(*v)).collect();
    let sp = special_phase_of(values);
    let mut d = MirrorDefects {
        amplitude: 0.0,
        phase: 0.0,
        special_phase: 0.0,
    };
    for n in 0..len {
        let k = len - 1 - n;
        d.amplitude = d.amplitude.max((values[n].norm() - values[k].norm()).abs());
        if values[n].norm() < PHASE_AMPLITUDE_FLOOR || values[k].norm() < PHASE_AMPLITUDE_FLOOR {
            continue;
        }
        let offset = if odd_input { PI } else { 0.0 };
        d.phase = d
            .phase
            .max(angle_distance(spectrum_phase[n], spectrum_phase[k] + offset, 2.0 * PI));
        if let (Some(a), Some(b)) = (sp[n], sp[k]) {
            d.special_phase = d.special_phase.max(angle_distance(a, b, PI));
        }
    }
    d
}

pub fn run_suite(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let mut suite = Suite {
        cfg,
        out: Vec::new(),
    };
    let (n, alpha, m) = (cfg.n, cfg.alpha, cfg.m);
    let q = symmetrize(&random_matrix(cfg.seed, n)?);
    let basis = eigendecompose(&q)?;
    let mut stream = SeededStream::new(cfg.seed ^ 0x5eed_5eed_5eed_5eed);

    suite.check("basis orthonormality ‖VᵗV − I‖", orthogonality_defect(&basis), 1e-10);
    suite.check(
        "basis eigen-residual / ‖Q‖_F",
        eigen_residual(&q, &basis) / q.entries().frobenius_norm().max(f64::MIN_POSITIVE),
        1e-9,
    );

    for family in Family::ALL {
        let r = kernel(&basis, family, alpha, m)?;
        suite.check(format!("{family}: unitarity ‖RR* − I‖"), r.entries().unitarity_defect(), 1e-10);
        let zero = kernel(&basis, family, 0.0, m)?;
        suite.check(format!("{family}: α = 0 gives identity"), zero.entries().identity_defect(), 1e-10);

        let a = kernel(&basis, family, alpha, m)?;
        let b = kernel(&basis, family, 0.4, m)?;
        let ab_expected = kernel(&basis, family, alpha + 0.4 + cfg.alpha_mismatch, m)?;
        let ab = kernel_power_compose(&a, &b)?;
        let ba = kernel_power_compose(&b, &a)?;
        suite.check(
            format!("{family}: additivity R^α·R^0.4 = R^(α+0.4)"),
            ab.entries().max_abs_diff(ab_expected.entries()),
            1e-10,
        );
        suite.check(
            format!("{family}: commutation R^α·R^0.4 = R^0.4·R^α"),
            ab.entries().max_abs_diff(ba.entries()),
            1e-10,
        );

        let period = if family == Family::Dfrnct { m / 2.0 } else { m };
        let shifted = kernel(&basis, family, alpha + period, m)?;
        suite.check(
            format!("{family}: periodicity (period {period})"),
            shifted.entries().max_abs_diff(r.entries()),
            1e-10,
        );

        let dim = r.dim();
        let mut worst_energy = 0.0f64;
        let mut worst_linear = 0.0f64;
        for _ in 0..cfg.trials.max(1) {
            let x1 = random_signal(&mut stream, dim);
            let x2 = random_signal(&mut stream, dim);
            let y1 = apply_1d(&r, &x1)?;
            let y2 = apply_1d(&r, &x2)?;
            worst_energy = worst_energy.max(relative_energy_error(x1.samples(), &y1.values));
            let (ca, cb) = (
                Complex64::new(stream.next_f64() - 0.5, stream.next_f64()),
                Complex64::new(stream.next_f64(), stream.next_f64() - 0.5),
            );
            let mixed = Signal::new(
                x1.samples().iter().zip(x2.samples()).map(|(p, q)| ca * p + cb * q).collect(),
            )?;
            let lhs = apply_1d(&r, &mixed)?;
            let rhs: Vec<Complex64> = y1.values.iter().zip(&y2.values).map(|(p, q)| ca * p + cb * q).collect();
            worst_linear = worst_linear.max(max_diff(&lhs.values, &rhs));
        }
        suite.check(format!("{family}: Parseval (relative)"), worst_energy, 1e-10);
        suite.check(format!("{family}: linearity"), worst_linear, 1e-10);
    }

    let half = m / 2.0;
    let neg_identity = ComplexMatrix::identity(n).scale(Complex64::new(-1.0, 0.0));
    suite.check(
        "dfrnct: α = M/2 gives identity",
        kernel(&basis, Family::Dfrnct, half, m)?.entries().identity_defect(),
        1e-10,
    );
    suite.check(
        "dfrnst: α = M/2 gives −identity",
        kernel(&basis, Family::Dfrnst, half, m)?
            .entries()
            .max_abs_diff(&neg_identity),
        1e-10,
    );

    let r2 = kernel(&basis, Family::Dfrnt, 2.0 * alpha, m)?;
    suite.check(
        "subset: R_c^α = R^2α",
        kernel(&basis, Family::Dfrnct, alpha, m)?
            .entries()
            .max_abs_diff(r2.entries()),
        1e-10,
    );
    let factor = Complex64::from_polar(1.0, -2.0 * alpha * PI / m);
    suite.check(
        "subset: R_s^α = exp(−2iαπ/M)·R^2α",
        kernel(&basis, Family::Dfrnst, alpha, m)?
            .entries()
            .max_abs_diff(&r2.entries().scale(factor)),
        1e-10,
    );

    for (parity, label) in [(Parity::Even2N, "2N"), (Parity::Odd2NPlus1, "2N+1")] {
        let assembled = assemble_redfrnt_basis(&basis, parity);
        suite.check(
            format!("ReDFRNT {label} basis orthonormality"),
            orthogonality_defect(&assembled),
            1e-10,
        );
    }
    let even_basis = assemble_redfrnt_basis(&basis, Parity::Even2N);
    let mut reversal = 0.0f64;
    for k in 0..2 * n {
        let col = even_basis.column(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..2 * n {
            reversal = reversal.max((col[i] - sign * col[2 * n - 1 - i]).abs());
        }
    }
    suite.check("ReDFRNT 2N columns even/odd under reversal", reversal, 0.0);

    for family in [Family::RedfrntEven, Family::RedfrntOdd] {
        let dense = kernel(&basis, family, alpha, m)?;
        let mut worst = 0.0f64;
        for _ in 0..cfg.trials.max(1) {
            let s = random_signal(&mut stream, dense.dim());
            let fast = redfrnt_fast(&basis, alpha, m, &s)?;
            worst = worst.max(max_diff(&fast.values, &apply_1d(&dense, &s)?.values));
        }
        suite.check(format!("{family}: fast path = dense kernel"), worst, 1e-9);
    }

    // symmetric and antisymmetric inputs through the dense 2N kernel
    let redfrnt = kernel(&basis, Family::RedfrntEven, alpha, m)?;
    let raw = random_signal(&mut stream, 2 * n);
    let parts = even_odd_decompose(&raw);
    let even_out = apply_1d(&redfrnt, &parts.even)?;
    let odd_out = apply_1d(&redfrnt, &parts.odd)?;
    let de = mirror_defects(&even_out.values, false);
    let dodd = mirror_defects(&odd_out.values, true);
    suite.check("ReDFRNT even input: amplitude mirror", de.amplitude, 1e-9);
    suite.check("ReDFRNT even input: phase mirror", de.phase, 1e-8);
    suite.check("ReDFRNT odd input: amplitude mirror", dodd.amplitude, 1e-9);
    suite.check("ReDFRNT odd input: phase offset ±π", dodd.phase, 1e-8);
    suite.check("ReDFRNT odd input: special phase mirror", dodd.special_phase, 1e-8);

    let cosine = kernel(&basis, Family::Dfrnct, alpha, m)?;
    let sine = kernel(&basis, Family::Dfrnst, alpha, m)?;
    let first_half = |s: &Signal| Signal::new(s.samples()[..n].to_vec());
    let c_half = apply_1d(&cosine, &first_half(&parts.even)?)?;
    let s_half = apply_1d(&sine, &first_half(&parts.odd)?)?;
    let amp_gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    suite.check(
        "first half: |DFRNCT(even′)| = |ReDFRNT(even)|",
        amp_gap(&c_half.amplitude(), &even_out.amplitude()[..n]),
        1e-9,
    );
    suite.check(
        "first half: |DFRNST(odd′)| = |ReDFRNT(odd)|",
        amp_gap(&s_half.amplitude(), &odd_out.amplitude()[..n]),
        1e-9,
    );

    let size = 2 * n;
    let noise = (0..size * size).map(|_| stream.next_f64()).collect();
    let image = crate::signals::GrayImage::new(RealMatrix::from_row_major(size, size, noise))?;
    let y = apply_2d(&redfrnt, &image)?;
    let e_in: f64 = image.pixels().as_slice().iter().map(|v| v * v).sum();
    suite.check(
        "ReDFRNT 2-D Parseval (relative)",
        (energy(y.as_slice()) - e_in).abs() / e_in,
        1e-9,
    );

    let bar = RectImageSpec {
        name: "centered",
        size,
        rectangles: vec![Rect {
            row0: size / 4,
            col0: size / 8,
            height: size / 2,
            width: size - size / 4,
            value: 1.0,
        }],
    }
    .render()?;
    let amp = amplitude_grid(&apply_2d(&redfrnt, &bar)?);
    let worst = exact_mirrors(&bar)
        .into_iter()
        .map(|mirror| mirror_defect(&amp, mirror))
        .fold(0.0, f64::max);
    suite.check("ReDFRNT 2-D keeps input mirror symmetries", worst, 1e-9);

    Ok(suite.out)
}

pub fn amplitude_grid(m: &ComplexMatrix) -> RealMatrix {
    RealMatrix::from_row_major(
        m.rows(),
        m.cols(),
        m.as_slice().iter().map(|v| v.norm()).collect(),
    )
}
