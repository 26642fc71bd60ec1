//! Plain-text numeric exchange formats.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which round
//! trips every `f64`. Lines starting with `#` are provenance comments.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::eigenbasis::{Assembly, SpectralBasis, SOLVER_VERSION};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::transform::{reduce_half_turn, Signal, Spectrum};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Appends `suffix` to the file name of `prefix`.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

/// `<prefix>_re.csv` and `<prefix>_im.csv`.
pub fn pair_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    (with_suffix(prefix, "_re.csv"), with_suffix(prefix, "_im.csv"))
}

/// Inverse of [`pair_paths`] for a path ending in `_re.csv`.
pub fn pair_prefix(re_path: &Path) -> Option<PathBuf> {
    let s = re_path.to_str()?;
    s.strip_suffix("_re.csv").map(PathBuf::from)
}

pub fn render_real_matrix(m: &RealMatrix, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_real_matrix_csv(m: &RealMatrix, comments: &[String], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_real_matrix(m, comments))
}

/// Returns the `#` comment lines (without the marker) and the matrix.
pub fn read_real_matrix_csv(path: impl AsRef<Path>) -> Result<(Vec<String>, RealMatrix)> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut comments = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.trim().to_string());
        } else if !trimmed.is_empty() {
            let row = trimmed
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(path, offset, format!("bad number '{}'", f.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::parse(path, offset, "ragged row"));
                }
            }
            rows.push(row);
        }
        offset += line.len();
    }
    if rows.is_empty() {
        return Err(Error::parse(path, offset, "no data rows"));
    }
    Ok((comments, RealMatrix::from_rows(&rows)))
}

/// Writes the real and imaginary parts as `<prefix>_re.csv` / `<prefix>_im.csv`.
pub fn write_complex_pair(
    m: &ComplexMatrix,
    comments: &[String],
    prefix: impl AsRef<Path>,
) -> Result<(PathBuf, PathBuf)> {
    let (re_path, im_path) = pair_paths(prefix.as_ref());
    let (re, im) = split_complex(m);
    write_real_matrix_csv(&re, comments, &re_path)?;
    write_real_matrix_csv(&im, comments, &im_path)?;
    Ok((re_path, im_path))
}

pub fn read_complex_pair(prefix: impl AsRef<Path>) -> Result<(Vec<String>, ComplexMatrix)> {
    let (re_path, im_path) = pair_paths(prefix.as_ref());
    let (comments, re) = read_real_matrix_csv(&re_path)?;
    let (_, im) = read_real_matrix_csv(&im_path)?;
    if (re.rows(), re.cols()) != (im.rows(), im.cols()) {
        return Err(Error::parse(
            &im_path,
            0,
            format!(
                "imaginary part is {}x{}, real part {}x{}",
                im.rows(),
                im.cols(),
                re.rows(),
                re.cols()
            ),
        ));
    }
    let data = re
        .as_slice()
        .iter()
        .zip(im.as_slice())
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    Ok((comments, ComplexMatrix::from_row_major(re.rows(), re.cols(), data)))
}

pub fn split_complex(m: &ComplexMatrix) -> (RealMatrix, RealMatrix) {
    let re = m.as_slice().iter().map(|v| v.re).collect();
    let im = m.as_slice().iter().map(|v| v.im).collect();
    (
        RealMatrix::from_row_major(m.rows(), m.cols(), re),
        RealMatrix::from_row_major(m.rows(), m.cols(), im),
    )
}

pub fn kernel_header(kernel: &Kernel) -> String {
    let spec = kernel.spec();
    format!(
        "family={} alpha={} m={} n={} dim={} seed={}",
        spec.family(),
        spec.alpha(),
        spec.m(),
        spec.n(),
        kernel.dim(),
        kernel
            .basis_seed()
            .map_or_else(|| "none".to_string(), |s| s.to_string())
    )
}

pub fn write_kernel_csv(kernel: &Kernel, prefix: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    write_complex_pair(kernel.entries(), &[kernel_header(kernel)], prefix)
}

pub const SPECTRUM_HEADER: &str = "index,real,imag,amplitude,phase,special_phase,phase_defined";

/// One row per sample, 1-based index. Phase columns are written even where
/// the amplitude is below the floor; `phase_defined` is 0 there.
pub fn render_spectrum_csv(spectrum: &Spectrum) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    let amp = spectrum.amplitude();
    let phase = spectrum.phase();
    let defined = spectrum.phase_defined();
    for (i, v) in spectrum.values.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i + 1,
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(amp[i]),
            fmt_f64(phase[i]),
            fmt_f64(reduce_half_turn(phase[i])),
            u8::from(defined[i])
        )
        .unwrap();
    }
    out
}

pub fn write_spectrum_csv(spectrum: &Spectrum, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_spectrum_csv(spectrum))
}

/// Reads a 1-D signal. Accepts a spectrum CSV (uses its `real`/`imag`
/// columns) or headerless lines of `re` or `re,im`.
pub fn read_signal_csv(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut columns: Option<(usize, usize)> = None;
    let mut samples = Vec::new();
    let mut offset = 0;
    for (line_no, line) in text.split_inclusive('\n').enumerate() {
        let trimmed = line.trim();
        let here = offset;
        offset += line.len();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if line_no == 0 && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            let re = fields.iter().position(|f| *f == "real");
            let im = fields.iter().position(|f| *f == "imag");
            match (re, im) {
                (Some(r), Some(i)) => columns = Some((r, i)),
                _ => return Err(Error::parse(path, here, "header lacks 'real' and 'imag' columns")),
            }
            continue;
        }
        let num = |idx: usize| -> Result<f64> {
            let f = fields
                .get(idx)
                .ok_or_else(|| Error::parse(path, here, format!("missing column {}", idx + 1)))?;
            f.parse()
                .map_err(|_| Error::parse(path, here, format!("bad number '{f}'")))
        };
        let value = match (columns, fields.len()) {
            (Some((r, i)), _) => Complex64::new(num(r)?, num(i)?),
            (None, 1) => Complex64::new(num(0)?, 0.0),
            (None, 2) => Complex64::new(num(0)?, num(1)?),
            (None, k) => {
                return Err(Error::parse(path, here, format!("expected 1 or 2 fields, got {k}")))
            }
        };
        samples.push(value);
    }
    Signal::new(samples).map_err(|_| Error::parse(path, offset, "no samples"))
}

pub fn write_signal_csv(signal: &Signal, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for v in signal.samples() {
        writeln!(out, "{},{}", fmt_f64(v.re), fmt_f64(v.im)).unwrap();
    }
    write_file(path.as_ref(), &out)
}

fn assembly_name(a: Assembly) -> &'static str {
    match a {
        Assembly::Plain => "plain",
        Assembly::RedfrntEven => "redfrnt_even",
        Assembly::RedfrntOdd => "redfrnt_odd",
    }
}

/// `<prefix>.csv` holds the columns, `<prefix>.header` the provenance and
/// eigenvalues as `key=value` lines.
pub fn write_basis(basis: &SpectralBasis, prefix: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let prefix = prefix.as_ref();
    let csv_path = with_suffix(prefix, ".csv");
    let header_path = with_suffix(prefix, ".header");
    write_real_matrix_csv(basis.vectors(), &[], &csv_path)?;
    let eig: Vec<String> = basis.q_eigenvalues().iter().map(|&v| fmt_f64(v)).collect();
    let header = format!(
        "seed={}\nn={}\nsolver={}\nassembly={}\neigenvalues={}\n",
        basis.seed().map_or_else(|| "none".to_string(), |s| s.to_string()),
        basis.n(),
        SOLVER_VERSION,
        assembly_name(basis.assembly()),
        eig.join(",")
    );
    write_file(&header_path, &header)?;
    Ok((csv_path, header_path))
}

pub fn read_basis(prefix: impl AsRef<Path>) -> Result<SpectralBasis> {
    let prefix = prefix.as_ref();
    let header_path = with_suffix(prefix, ".header");
    let text = read_file(&header_path)?;
    let mut seed = None;
    let mut n = None;
    let mut eigenvalues = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let here = offset;
        offset += line.len();
        let Some((key, value)) = line.trim().split_once('=') else {
            continue;
        };
        let bad = |what: &str| Error::parse(&header_path, here, format!("bad {what} '{value}'"));
        match key {
            "seed" if value == "none" => seed = None,
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed"))?),
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad("n"))?),
            "assembly" if value != "plain" => {
                return Err(Error::parse(&header_path, here, "only plain bases can be imported"))
            }
            "eigenvalues" => {
                eigenvalues = Some(
                    value
                        .split(',')
                        .map(|v| v.parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad("eigenvalues"))?,
                )
            }
            _ => {}
        }
    }
    let n = n.ok_or_else(|| Error::parse(&header_path, offset, "missing n"))?;
    let eigenvalues =
        eigenvalues.ok_or_else(|| Error::parse(&header_path, offset, "missing eigenvalues"))?;
    let (_, vectors) = read_real_matrix_csv(with_suffix(prefix, ".csv"))?;
    if vectors.rows() != n {
        return Err(Error::InvalidDimension(format!(
            "header says n = {n}, matrix has {} rows",
            vectors.rows()
        )));
    }
    SpectralBasis::from_parts(vectors, eigenvalues, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{build_kernel, Family, KernelSpec};
    use proptest::prelude::*;

    #[test]
    fn spectrum_rows_and_header() {
        let spectrum = Spectrum {
            values: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -2.0),
            ],
            spec: KernelSpec::new(Family::Dfrnt, 0.0, 1.0, 3).unwrap(),
        };
        let text = render_spectrum_csv(&spectrum);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], SPECTRUM_HEADER);
        assert!(lines[2].ends_with(",0"));
        assert!(lines[3].starts_with("3,0.0000000000000000e0,-2.0000000000000000e0,2.0000000000000000e0,"));

        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_spectrum_csv(&spectrum, &p).unwrap();
        assert_eq!(read_signal_csv(&p).unwrap().samples(), &spectrum.values[..]);
    }

    #[test]
    fn headerless_signal_forms() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        std::fs::write(&p, "1\n2.5, -1\n# note\n\n-3\n").unwrap();
        let s = read_signal_csv(&p).unwrap();
        assert_eq!(
            s.samples(),
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(2.5, -1.0),
                Complex64::new(-3.0, 0.0)
            ]
        );
        std::fs::write(&p, "1\nabc\n").unwrap();
        assert!(matches!(read_signal_csv(&p), Err(Error::Parse { offset: 2, .. })));
        std::fs::write(&p, "").unwrap();
        assert!(read_signal_csv(&p).is_err());
    }

    #[test]
    fn kernel_pair_carries_header() {
        let b = SpectralBasis::from_seed(7, 3).unwrap();
        let k = build_kernel(&b, &KernelSpec::new(Family::Dfrnst, 0.25, 1.0, 3).unwrap()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("k");
        let (re, _) = write_kernel_csv(&k, &prefix).unwrap();
        assert_eq!(pair_prefix(&re).unwrap(), prefix);
        let (comments, back) = read_complex_pair(&prefix).unwrap();
        assert_eq!(comments, vec!["family=dfrnst alpha=0.25 m=1 n=3 dim=3 seed=7".to_string()]);
        assert_eq!(&back, k.entries());
    }

    #[test]
    fn basis_export_import() {
        let b = SpectralBasis::from_seed(99, 6).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("basis");
        write_basis(&b, &prefix).unwrap();
        let back = read_basis(&prefix).unwrap();
        assert_eq!(back, b);
    }

    proptest! {
        #[test]
        fn matrix_text_is_lossless(vals in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 6)) {
            let m = RealMatrix::from_row_major(2, 3, vals);
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("m.csv");
            write_real_matrix_csv(&m, &["x".into()], &p).unwrap();
            let (_, back) = read_real_matrix_csv(&p).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
