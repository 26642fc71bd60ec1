//! Dense kernel matrices `R = V · D^α · Vᵗ` for the five transform families.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::eigenbasis::{Assembly, SpectralBasis};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, RealMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Exponents `k`, `N` points.
    Dfrnt,
    /// Exponents `2k`, `N` points.
    Dfrnct,
    /// Exponents `2k + 1`, `N` points.
    Dfrnst,
    /// Exponents `k` over the `2N` point reconstructed basis.
    RedfrntEven,
    /// Exponents `k` over the `2N + 1` point reconstructed basis.
    RedfrntOdd,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Dfrnt,
        Family::Dfrnct,
        Family::Dfrnst,
        Family::RedfrntEven,
        Family::RedfrntOdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dfrnt => "dfrnt",
            Family::Dfrnct => "dfrnct",
            Family::Dfrnst => "dfrnst",
            Family::RedfrntEven => "redfrnt_even",
            Family::RedfrntOdd => "redfrnt_odd",
        }
    }

    /// Kernel dimension for a basis of `n` points.
    pub fn dim(self, n: usize) -> usize {
        match self {
            Family::RedfrntEven => 2 * n,
            Family::RedfrntOdd => 2 * n + 1,
            _ => n,
        }
    }

    /// Basis size that yields a kernel of dimension `dim`, if any.
    pub fn basis_size_for(self, dim: usize) -> Option<usize> {
        match self {
            Family::RedfrntEven if dim >= 2 && dim.is_multiple_of(2) => Some(dim / 2),
            Family::RedfrntOdd if dim >= 3 && dim % 2 == 1 => Some(dim / 2),
            Family::Dfrnt | Family::Dfrnct | Family::Dfrnst if dim >= 1 => Some(dim),
            _ => None,
        }
    }

    fn exponent(self, k: usize) -> f64 {
        match self {
            Family::Dfrnct => (2 * k) as f64,
            Family::Dfrnst => (2 * k + 1) as f64,
            _ => k as f64,
        }
    }

    pub fn is_redfrnt(self) -> bool {
        matches!(self, Family::RedfrntEven | Family::RedfrntOdd)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "unknown family '{s}' (expected one of dfrnt, dfrnct, dfrnst, redfrnt_even, redfrnt_odd)"
                ))
            })
    }
}

/// Which reconstructed basis to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even2N,
    Odd2NPlus1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    family: Family,
    alpha: f64,
    m: f64,
    n: usize,
}

impl KernelSpec {
    pub fn new(family: Family, alpha: f64, m: f64, n: usize) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidPeriod(m));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidSpec(format!("alpha must be finite, got {alpha}")));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("basis size n must be at least 1".into()));
        }
        Ok(Self {
            family,
            alpha,
            m,
            n,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Basis size `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.family.dim(self.n)
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }

    pub fn with_family(&self, family: Family) -> Self {
        Self { family, ..*self }
    }
}

/// Diagonal of `D^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueDiagonal {
    phases: Vec<Complex64>,
}

impl EigenvalueDiagonal {
    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }
}

/// `exp(-2iπ·e·α/M)` with `e·α/M` reduced to `[-1/2, 1/2]` turns first, so
/// orders that differ by a full period give the same bits.
pub(crate) fn unit_phase(exponent: f64, alpha: f64, m: f64) -> Complex64 {
    let turns = exponent * alpha / m;
    let frac = turns - turns.round();
    Complex64::from_polar(1.0, -2.0 * PI * frac)
}

pub fn eigenvalue_diagonal(spec: &KernelSpec) -> Result<EigenvalueDiagonal> {
    if !(spec.m > 0.0 && spec.m.is_finite()) {
        return Err(Error::InvalidPeriod(spec.m));
    }
    let phases = (0..spec.dim())
        .map(|k| unit_phase(spec.family.exponent(k), spec.alpha, spec.m))
        .collect();
    Ok(EigenvalueDiagonal { phases })
}

/// Builds the `2N` or `2N+1` point basis from an `N` point one.
///
/// Column `2n` is `[c_n ; rev(c_n)]/√2` (mirror-symmetric) and column `2n+1`
/// is `[s_n ; -rev(s_n)]/√2` (mirror-antisymmetric), with `c_n = s_n = v_n`.
/// The odd assembly inserts a zero middle row into those columns and appends
/// the middle unit vector as the last column.
pub fn assemble_redfrnt_basis(basis: &SpectralBasis, parity: Parity) -> SpectralBasis {
    let half = basis.n();
    let (dim, assembly) = match parity {
        Parity::Even2N => (2 * half, Assembly::RedfrntEven),
        Parity::Odd2NPlus1 => (2 * half + 1, Assembly::RedfrntOdd),
    };
    // rows below the top half start after the optional middle row
    let lower = dim - half;
    let src = basis.vectors();
    let mut v = RealMatrix::zeros(dim, dim);
    let mut q_eigenvalues = Vec::with_capacity(dim);
    for n in 0..half {
        let (even_col, odd_col) = (2 * n, 2 * n + 1);
        for i in 0..half {
            let x = src[(i, n)] * FRAC_1_SQRT_2;
            v[(i, even_col)] = x;
            v[(i, odd_col)] = x;
            let mirror = lower + (half - 1 - i);
            v[(mirror, even_col)] = x;
            v[(mirror, odd_col)] = -x;
        }
        let lambda = basis.q_eigenvalues()[n];
        q_eigenvalues.extend([lambda, lambda]);
    }
    if parity == Parity::Odd2NPlus1 {
        v[(half, 2 * half)] = 1.0;
        q_eigenvalues.push(0.0);
    }
    SpectralBasis::assembled(v, q_eigenvalues, basis.seed(), assembly)
}

/// A complex unitary transform matrix with its provenance.
///
/// The factors `V` and `D^α` are retained so that products of kernels on the
/// same basis stay in factored form too.
#[derive(Debug, Clone)]
pub struct Kernel {
    entries: ComplexMatrix,
    spec: KernelSpec,
    basis_seed: Option<u64>,
    basis_fingerprint: u64,
    vectors: Arc<RealMatrix>,
    diagonal: Vec<Complex64>,
}

impl Kernel {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn basis_seed(&self) -> Option<u64> {
        self.basis_seed
    }

    /// Hash of the source basis bits, used to check that two kernels share it.
    pub fn basis_fingerprint(&self) -> u64 {
        self.basis_fingerprint
    }

    /// The (possibly assembled) eigenvector matrix `V`.
    pub fn vectors(&self) -> &RealMatrix {
        &self.vectors
    }

    /// Diagonal of `D^α`.
    pub fn diagonal(&self) -> &[Complex64] {
        &self.diagonal
    }

    /// `R·y·Rᵗ` evaluated as `V·(D ∘ (Vᵗ·y·V) ∘ D)·Vᵗ`, i.e. without touching
    /// the dense kernel. Agrees with the dense product to rounding.
    pub fn apply_2d_factored(&self, y: &RealMatrix) -> Result<ComplexMatrix> {
        let dim = self.dim();
        if y.rows() != dim || y.cols() != dim {
            return Err(Error::InvalidInput(format!(
                "grid is {}x{}, kernel needs {dim}x{dim}",
                y.rows(),
                y.cols()
            )));
        }
        let v = &*self.vectors;
        let inner = v.transpose().matmul(y).matmul(v);
        let mut mid = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                mid[(i, j)] = self.diagonal[i] * self.diagonal[j] * inner[(i, j)];
            }
        }
        let vc = ComplexMatrix::from_real(v);
        Ok(vc.matmul(&mid).matmul(&vc.transpose()))
    }
}

fn fingerprint(m: &RealMatrix) -> u64 {
    // FNV-1a over the raw bits
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in m.as_slice() {
        for b in v.to_bits().to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Dense `V·diag(d)·Vᵗ`. The result is complex symmetric, so only the upper
/// triangle is summed and then mirrored.
fn synthesize(v: &RealMatrix, d: &[Complex64]) -> ComplexMatrix {
    let dim = v.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    let mut weighted = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..dim {
        let row_i = v.row(i);
        for (w, (&x, &p)) in weighted.iter_mut().zip(row_i.iter().zip(d)) {
            *w = p * x;
        }
        for j in i..dim {
            let row_j = v.row(j);
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, &y) in weighted.iter().zip(row_j) {
                acc += w * y;
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc;
        }
    }
    out
}

pub fn build_kernel(basis: &SpectralBasis, spec: &KernelSpec) -> Result<Kernel> {
    if basis.assembly() != Assembly::Plain {
        return Err(Error::InvalidSpec(
            "kernels are built from a plain eigenbasis; reconstructed bases are assembled internally"
                .into(),
        ));
    }
    if basis.n() != spec.n() {
        return Err(Error::InvalidSpec(format!(
            "basis has {} points but spec asks for n = {}",
            basis.n(),
            spec.n()
        )));
    }
    let diagonal = eigenvalue_diagonal(spec)?.phases;
    let vectors = match spec.family() {
        Family::RedfrntEven => assemble_redfrnt_basis(basis, Parity::Even2N).vectors().clone(),
        Family::RedfrntOdd => assemble_redfrnt_basis(basis, Parity::Odd2NPlus1)
            .vectors()
            .clone(),
        _ => basis.vectors().clone(),
    };
    let entries = synthesize(&vectors, &diagonal);
    Ok(Kernel {
        entries,
        spec: *spec,
        basis_seed: basis.seed(),
        basis_fingerprint: fingerprint(basis.vectors()),
        vectors: Arc::new(vectors),
        diagonal,
    })
}

/// Product `a·b` of two kernels from the same family and basis. The result
/// carries order `α_a + α_b`.
pub fn kernel_power_compose(a: &Kernel, b: &Kernel) -> Result<Kernel> {
    if a.spec.family != b.spec.family {
        return Err(Error::InvalidComposition(format!(
            "families differ ({} vs {})",
            a.spec.family, b.spec.family
        )));
    }
    if a.basis_fingerprint != b.basis_fingerprint || a.dim() != b.dim() {
        return Err(Error::InvalidComposition(
            "kernels were built on different bases".into(),
        ));
    }
    if a.spec.m != b.spec.m {
        return Err(Error::InvalidComposition(format!(
            "periods differ ({} vs {})",
            a.spec.m, b.spec.m
        )));
    }
    let diagonal = a
        .diagonal
        .iter()
        .zip(&b.diagonal)
        .map(|(x, y)| x * y)
        .collect();
    Ok(Kernel {
        entries: a.entries.matmul(&b.entries),
        spec: a.spec.with_alpha(a.spec.alpha + b.spec.alpha),
        basis_seed: a.basis_seed,
        basis_fingerprint: a.basis_fingerprint,
        vectors: Arc::clone(&a.vectors),
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenbasis::orthogonality_defect;
    use proptest::prelude::*;

    fn kernel(basis: &SpectralBasis, family: Family, alpha: f64, m: f64) -> Kernel {
        build_kernel(basis, &KernelSpec::new(family, alpha, m, basis.n()).unwrap()).unwrap()
    }

    #[test]
    fn diagonal_examples() {
        let d = eigenvalue_diagonal(&KernelSpec::new(Family::Dfrnt, 0.0, 3.0, 5).unwrap()).unwrap();
        assert_eq!(d.dim(), 5);
        assert!(d.phases().iter().all(|p| *p == Complex64::new(1.0, 0.0)));

        let d = eigenvalue_diagonal(&KernelSpec::new(Family::Dfrnst, 0.5, 1.0, 3).unwrap()).unwrap();
        for p in d.phases() {
            assert!((p - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        }

        let d = eigenvalue_diagonal(&KernelSpec::new(Family::Dfrnct, 0.6, 1.0, 4).unwrap()).unwrap();
        for (k, p) in d.phases().iter().enumerate() {
            let expected = Complex64::from_polar(1.0, -4.0 * PI * 0.6 * k as f64);
            assert!((p - expected).norm() < 1e-12, "k = {k}");
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }

        let d = eigenvalue_diagonal(&KernelSpec::new(Family::RedfrntOdd, 0.3, 1.0, 4).unwrap()).unwrap();
        assert_eq!(d.dim(), 9);
        let last = Complex64::from_polar(1.0, -2.0 * PI * 8.0 * 0.3);
        assert!((d.phases()[8] - last).norm() < 1e-12);
    }

    #[test]
    fn non_positive_period_is_rejected() {
        assert!(matches!(
            KernelSpec::new(Family::Dfrnt, 0.1, 0.0, 4),
            Err(Error::InvalidPeriod(_))
        ));
        assert!(matches!(
            KernelSpec::new(Family::Dfrnt, 0.1, -1.0, 4),
            Err(Error::InvalidPeriod(_))
        ));
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("dct".parse::<Family>().is_err());
        assert_eq!(Family::RedfrntOdd.basis_size_for(129), Some(64));
        assert_eq!(Family::RedfrntEven.basis_size_for(129), None);
    }

    #[test]
    fn single_point_even_assembly() {
        let b = SpectralBasis::from_parts(RealMatrix::identity(1), vec![0.5], None).unwrap();
        let e = assemble_redfrnt_basis(&b, Parity::Even2N);
        let s = FRAC_1_SQRT_2;
        assert_eq!(e.vectors(), &RealMatrix::from_rows(&[vec![s, s], vec![s, -s]]));
        assert!(orthogonality_defect(&e) < 1e-15);
    }

    #[test]
    fn odd_assembly_middle_column() {
        let b = SpectralBasis::from_seed(5, 3).unwrap();
        let o = assemble_redfrnt_basis(&b, Parity::Odd2NPlus1);
        assert_eq!(o.n(), 7);
        assert_eq!(o.column(6), vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        for k in 0..6 {
            assert_eq!(o.column(k)[3], 0.0);
        }
        assert!(orthogonality_defect(&o) <= 1e-10);
        assert_eq!(o.assembly(), Assembly::RedfrntOdd);
    }

    #[test]
    fn assembled_64_point_bases_are_orthonormal() {
        let b = SpectralBasis::from_seed(7, 64).unwrap();
        let e = assemble_redfrnt_basis(&b, Parity::Even2N);
        assert!(orthogonality_defect(&e) <= 1e-10);
        for k in 0..128 {
            let col = e.column(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..128 {
                assert_eq!(col[i], sign * col[127 - i]);
            }
        }
    }

    #[test]
    fn zero_order_is_identity() {
        let b = SpectralBasis::from_seed(2, 9).unwrap();
        for f in Family::ALL {
            assert!(kernel(&b, f, 0.0, 1.0).entries().identity_defect() <= 1e-10, "{f}");
        }
    }

    #[test]
    fn half_period_values() {
        let b = SpectralBasis::from_seed(2, 9).unwrap();
        for m in [1.0, 4.0] {
            let c = kernel(&b, Family::Dfrnct, m / 2.0, m);
            assert!(c.entries().identity_defect() <= 1e-10);
            let s = kernel(&b, Family::Dfrnst, m / 2.0, m);
            let neg = ComplexMatrix::identity(9).scale(Complex64::new(-1.0, 0.0));
            assert!(s.entries().max_abs_diff(&neg) <= 1e-10);
        }
    }

    #[test]
    fn cosine_kernel_is_dfrnt_at_double_order() {
        let b = SpectralBasis::from_seed(4, 16).unwrap();
        let c = kernel(&b, Family::Dfrnct, 0.35, 1.0);
        let r = kernel(&b, Family::Dfrnt, 0.7, 1.0);
        assert!(c.entries().max_abs_diff(r.entries()) <= 1e-10);
    }

    #[test]
    fn compose_examples() {
        let b = SpectralBasis::from_seed(1, 12).unwrap();
        let fwd = kernel(&b, Family::Dfrnst, 0.37, 1.0);
        let back = kernel(&b, Family::Dfrnst, -0.37, 1.0);
        let id = kernel_power_compose(&fwd, &back).unwrap();
        assert!(id.entries().identity_defect() <= 1e-10);
        assert_eq!(id.spec().alpha(), 0.0);

        let c3 = kernel(&b, Family::Dfrnct, 0.3, 1.0);
        let c4 = kernel(&b, Family::Dfrnct, 0.4, 1.0);
        let c7 = kernel(&b, Family::Dfrnct, 0.7, 1.0);
        let prod = kernel_power_compose(&c3, &c4).unwrap();
        assert!(prod.entries().max_abs_diff(c7.entries()) <= 1e-10);

        let s = kernel(&b, Family::Dfrnst, 0.2, 1.0);
        let s_next = kernel(&b, Family::Dfrnst, 1.2, 1.0);
        assert!(s.entries().max_abs_diff(s_next.entries()) <= 1e-10);
        let c_next = kernel(&b, Family::Dfrnct, 0.8, 1.0);
        assert!(c3.entries().max_abs_diff(c_next.entries()) <= 1e-10);
    }

    #[test]
    fn compose_rejects_mismatches() {
        let b = SpectralBasis::from_seed(1, 6).unwrap();
        let other = SpectralBasis::from_seed(2, 6).unwrap();
        let a = kernel(&b, Family::Dfrnt, 0.1, 1.0);
        assert!(kernel_power_compose(&a, &kernel(&b, Family::Dfrnct, 0.1, 1.0)).is_err());
        assert!(kernel_power_compose(&a, &kernel(&other, Family::Dfrnt, 0.1, 1.0)).is_err());
        assert!(kernel_power_compose(&a, &kernel(&b, Family::Dfrnt, 0.1, 2.0)).is_err());
    }

    #[test]
    fn size_mismatch_and_assembled_input_are_rejected() {
        let b = SpectralBasis::from_seed(1, 6).unwrap();
        let spec = KernelSpec::new(Family::Dfrnt, 0.1, 1.0, 7).unwrap();
        assert!(matches!(build_kernel(&b, &spec), Err(Error::InvalidSpec(_))));
        let e = assemble_redfrnt_basis(&b, Parity::Even2N);
        let spec = KernelSpec::new(Family::Dfrnt, 0.1, 1.0, 12).unwrap();
        assert!(build_kernel(&e, &spec).is_err());
    }

    #[test]
    fn factored_2d_matches_dense() {
        let b = SpectralBasis::from_seed(9, 10).unwrap();
        let mut stream = crate::randmat::SeededStream::new(3);
        for family in Family::ALL {
            let k = kernel(&b, family, 0.6, 1.0);
            let dim = k.dim();
            let y = RealMatrix::from_row_major(
                dim,
                dim,
                (0..dim * dim).map(|_| stream.next_f64()).collect(),
            );
            let r = k.entries();
            let dense = r.matmul(&ComplexMatrix::from_real(&y)).matmul(&r.transpose());
            let fact = k.apply_2d_factored(&y).unwrap();
            assert!(dense.max_abs_diff(&fact) <= 1e-10, "{family}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn unitary_additive_commuting(
            seed in any::<u64>(),
            n in 1usize..24,
            fam in 0usize..5,
            a in -2.0f64..2.0,
            b2 in -2.0f64..2.0,
            m in prop::sample::select(vec![1.0, 2.5, 4.0]),
        ) {
            let basis = SpectralBasis::from_seed(seed, n).unwrap();
            let family = Family::ALL[fam];
            let ka = kernel(&basis, family, a, m);
            let kb = kernel(&basis, family, b2, m);
            let kab = kernel(&basis, family, a + b2, m);
            prop_assert!(ka.entries().unitarity_defect() <= 1e-10);
            let ab = kernel_power_compose(&ka, &kb).unwrap();
            let ba = kernel_power_compose(&kb, &ka).unwrap();
            prop_assert!(ab.entries().max_abs_diff(kab.entries()) <= 1e-10);
            prop_assert!(ab.entries().max_abs_diff(ba.entries()) <= 1e-10);
        }
    }
}
