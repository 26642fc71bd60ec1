//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a property check failed, 2 usage or input error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::eigenbasis::SpectralBasis;
use crate::error::{Error, Result};
use crate::figures::compute_figures;
use crate::io::csv::{
    pair_prefix, read_basis, read_complex_pair, read_signal_csv, with_suffix, write_basis,
    write_complex_pair, write_kernel_csv, write_spectrum_csv,
};
use crate::io::pgm::{normalized_preview, read_pgm, write_pgm};
use crate::kernels::{build_kernel, Family, Kernel, KernelSpec};
use crate::matrix::ComplexMatrix;
use crate::scramble::{normalized_mse, recovered_image, scramble, unscramble};
use crate::signals::{make_test_signal, TestSignalId, DEFAULT_SIGNAL_LEN};
use crate::transform::{apply_1d, apply_2d_grid, redfrnt_fast, Signal};
use crate::verify::{amplitude_grid, run_suite, CheckOutcome, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_N: usize = 64;

/// Discrete fractional random transforms (DFRNT, DFRNCT, DFRNST, ReDFRNT).
#[derive(Debug, Parser)]
#[command(name = "fracrand", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a kernel matrix as a real/imaginary CSV pair.
    Kernel(KernelArgs),
    /// Export the eigenbasis for a seed as CSV plus a header file.
    Basis(BasisArgs),
    /// Transform a 1-D signal (CSV or built-in) or a square image (PGM or CSV pair).
    Transform(TransformArgs),
    /// Run the property suite and report each check.
    Verify(VerifyArgs),
    /// Regenerate the rectangle-signal and rectangle-image figures.
    Figures(FiguresArgs),
    /// Scramble a square PGM with a (seed, alpha) key.
    Scramble(ScrambleArgs),
    /// Invert `scramble` with the same key.
    Unscramble(UnscrambleArgs),
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed '{s}': {e}"))
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_signal(s: &str) -> std::result::Result<TestSignalId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct KeyArgs {
    /// Seed of the random matrix; decimal or 0x-prefixed hex.
    #[arg(long, env = "FRACRAND_SEED", default_value = "1", value_parser = parse_seed)]
    pub seed: u64,
    /// Fractional order.
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Period parameter.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long, default_value = "dfrnt", value_parser = parse_family)]
    pub family: Family,
    #[command(flatten)]
    pub key: KeyArgs,
    /// Basis size N (the kernel is 2N or 2N+1 for the ReDFRNT families).
    #[arg(long, default_value_t = DEFAULT_N)]
    pub n: usize,
    /// Load the basis from `<PREFIX>.csv` / `<PREFIX>.header` instead of the seed.
    #[arg(long, value_name = "PREFIX")]
    pub basis: Option<PathBuf>,
    /// Output prefix; writes `<PREFIX>_re.csv` and `<PREFIX>_im.csv`.
    #[arg(long, value_name = "PREFIX")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long, env = "FRACRAND_SEED", default_value = "1", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_N)]
    pub n: usize,
    /// Output prefix; writes `<PREFIX>.csv` and `<PREFIX>.header`.
    #[arg(long, value_name = "PREFIX")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, default_value = "dfrnt", value_parser = parse_family)]
    pub family: Family,
    #[command(flatten)]
    pub key: KeyArgs,
    /// Basis size N; derived from the input length when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Load the basis from `<PREFIX>.csv` / `<PREFIX>.header` instead of the seed.
    #[arg(long, value_name = "PREFIX")]
    pub basis: Option<PathBuf>,
    /// Built-in test signal (x1 or x2, 128 points).
    #[arg(long, value_parser = parse_signal, conflicts_with = "input")]
    pub signal: Option<TestSignalId>,
    /// Input: `.pgm` image, `<prefix>_re.csv` complex grid, or 1-D signal CSV.
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// 1-D: spectrum CSV path. 2-D: prefix for `_re.csv`, `_im.csv`, `_amp.pgm`.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Use the half-size even/odd path (ReDFRNT families, 1-D only).
    #[arg(long)]
    pub fast: bool,
    /// Apply the inverse transform (order -alpha).
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long, default_value_t = DEFAULT_N)]
    pub n: usize,
    /// Replace every per-check tolerance with this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Random signals per check.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Offset added to the expected order in the additivity checks.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub inject_alpha_mismatch: f64,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Replace every structural-check tolerance with this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScrambleArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    /// Square PGM image.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Prefix for `_re.csv`, `_im.csv` and the `_amp.pgm` preview.
    #[arg(long, value_name = "PREFIX")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct UnscrambleArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    /// `<prefix>_re.csv` (or the bare prefix) written by `scramble`.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Recovered PGM.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Original image; prints the normalized mean-square error against it.
    #[arg(long, value_name = "PATH")]
    pub reference: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Kernel(a) => cmd_kernel(a),
        Command::Basis(a) => cmd_basis(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Figures(a) => cmd_figures(a),
        Command::Scramble(a) => cmd_scramble(a),
        Command::Unscramble(a) => cmd_unscramble(a),
    }
}

fn load_basis(path: Option<&Path>, seed: u64, n: usize) -> Result<SpectralBasis> {
    match path {
        Some(prefix) => {
            let basis = read_basis(prefix)?;
            if basis.n() != n {
                return Err(Error::InvalidSpec(format!(
                    "basis file has N = {}, but N = {n} is required",
                    basis.n()
                )));
            }
            Ok(basis)
        }
        None => SpectralBasis::from_seed(seed, n),
    }
}

pub fn cmd_kernel(a: &KernelArgs) -> Result<i32> {
    let basis = load_basis(a.basis.as_deref(), a.key.seed, a.n)?;
    let kernel = build_kernel(&basis, &KernelSpec::new(a.family, a.key.alpha, a.key.m, a.n)?)?;
    let (re, im) = write_kernel_csv(&kernel, &a.out)?;
    println!("wrote {} and {}", re.display(), im.display());
    Ok(EXIT_OK)
}

pub fn cmd_basis(a: &BasisArgs) -> Result<i32> {
    let basis = SpectralBasis::from_seed(a.seed, a.n)?;
    let (csv, header) = write_basis(&basis, &a.out)?;
    println!("wrote {} and {}", csv.display(), header.display());
    Ok(EXIT_OK)
}

enum Input {
    Signal(Signal),
    Grid(ComplexMatrix),
}

fn read_input(a: &TransformArgs) -> Result<Input> {
    if let Some(id) = a.signal {
        return Ok(Input::Signal(make_test_signal(id, DEFAULT_SIGNAL_LEN)?));
    }
    let path = a
        .input
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("one of --signal or --in is required".into()))?;
    let is_pgm = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    if is_pgm {
        let img = read_pgm(path)?;
        return Ok(Input::Grid(ComplexMatrix::from_real(img.pixels())));
    }
    if let Some(prefix) = pair_prefix(path) {
        return Ok(Input::Grid(read_complex_pair(prefix)?.1));
    }
    Ok(Input::Signal(read_signal_csv(path)?))
}

fn transform_kernel(a: &TransformArgs, dim: usize) -> Result<(SpectralBasis, Kernel)> {
    let n = match a.n {
        Some(n) => n,
        None => a.family.basis_size_for(dim).ok_or_else(|| {
            Error::InvalidInput(format!("{} cannot take {dim}-point input", a.family))
        })?,
    };
    let alpha = if a.inverse { -a.key.alpha } else { a.key.alpha };
    let basis = load_basis(a.basis.as_deref(), a.key.seed, n)?;
    let kernel = build_kernel(&basis, &KernelSpec::new(a.family, alpha, a.key.m, n)?)?;
    Ok((basis, kernel))
}

pub fn cmd_transform(a: &TransformArgs) -> Result<i32> {
    match read_input(a)? {
        Input::Signal(x) => {
            let (basis, kernel) = transform_kernel(a, x.len())?;
            let spectrum = if a.fast {
                if !a.family.is_redfrnt() {
                    return Err(Error::InvalidInput(
                        "--fast applies to the redfrnt_even and redfrnt_odd families".into(),
                    ));
                }
                if kernel.dim() != x.len() {
                    return Err(Error::InvalidInput(format!(
                        "signal has {} samples, {} kernel expects {}",
                        x.len(),
                        a.family,
                        kernel.dim()
                    )));
                }
                redfrnt_fast(&basis, kernel.spec().alpha(), a.key.m, &x)?
            } else {
                apply_1d(&kernel, &x)?
            };
            write_spectrum_csv(&spectrum, &a.out)?;
            println!("wrote {}", a.out.display());
        }
        Input::Grid(y) => {
            if a.fast {
                return Err(Error::InvalidInput("--fast is defined for 1-D signals only".into()));
            }
            if y.rows() != y.cols() {
                return Err(Error::InvalidInput(format!(
                    "2-D transform needs a square image, got {}x{}",
                    y.rows(),
                    y.cols()
                )));
            }
            let (_, kernel) = transform_kernel(a, y.rows())?;
            let out = apply_2d_grid(&kernel, &y)?;
            let header = crate::io::csv::kernel_header(&kernel);
            let (re, im) = write_complex_pair(&out, &[header], &a.out)?;
            let amp = with_suffix(&a.out, "_amp.pgm");
            write_pgm(&normalized_preview(&amplitude_grid(&out)), &amp)?;
            println!("wrote {}, {} and {}", re.display(), im.display(), amp.display());
            if a.inverse {
                let real = with_suffix(&a.out, "_real.pgm");
                write_pgm(&recovered_image(&out), &real)?;
                println!("wrote {}", real.display());
            }
        }
    }
    Ok(EXIT_OK)
}

fn report(checks: &[CheckOutcome]) -> i32 {
    for c in checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!("{} checks, {} failed", checks.len(), failed);
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let cfg = VerifyConfig {
        seed: a.key.seed,
        n: a.n,
        alpha: a.key.alpha,
        m: a.key.m,
        tolerance: a.tolerance,
        alpha_mismatch: a.inject_alpha_mismatch,
        trials: a.trials,
    };
    Ok(report(&run_suite(&cfg)?))
}

pub fn cmd_figures(a: &FiguresArgs) -> Result<i32> {
    let figs = compute_figures(a.key.seed, a.key.alpha, a.key.m)?;
    for path in figs.write(&a.out)? {
        println!("wrote {}", path.display());
    }
    let mut checks = figs.checks();
    if let Some(t) = a.tolerance {
        checks.iter_mut().for_each(|c| c.tolerance = t);
    }
    Ok(report(&checks))
}

pub fn cmd_scramble(a: &ScrambleArgs) -> Result<i32> {
    let img = read_pgm(&a.input)?;
    let grid = scramble(&img, a.key.seed, a.key.alpha, a.key.m)?;
    let (re, im) = write_complex_pair(&grid, &["scrambled with family=dfrnt".to_string()], &a.out)?;
    let amp = with_suffix(&a.out, "_amp.pgm");
    write_pgm(&normalized_preview(&amplitude_grid(&grid)), &amp)?;
    println!("wrote {}, {} and {}", re.display(), im.display(), amp.display());
    Ok(EXIT_OK)
}

pub fn cmd_unscramble(a: &UnscrambleArgs) -> Result<i32> {
    let prefix = pair_prefix(&a.input).unwrap_or_else(|| a.input.clone());
    let (_, grid) = read_complex_pair(&prefix)?;
    let back = unscramble(&grid, a.key.seed, a.key.alpha, a.key.m)?;
    write_pgm(&recovered_image(&back), &a.out)?;
    println!("wrote {}", a.out.display());
    if let Some(reference) = &a.reference {
        let original = read_pgm(reference)?;
        if (original.rows(), original.cols()) != (back.rows(), back.cols()) {
            return Err(Error::InvalidInput("reference image size differs".into()));
        }
        println!("normalized mse {:.6e}", normalized_mse(&back, &original));
    }
    Ok(EXIT_OK)
}
