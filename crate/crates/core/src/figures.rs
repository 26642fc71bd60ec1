//! Data and files for the rectangle-signal and rectangle-image experiments
//! (α = 0.6, M = 1 by default, 128-point signals, 64-point basis).

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::eigenbasis::SpectralBasis;
use crate::error::{Error, Result};
use crate::io::csv::{write_real_matrix_csv, write_spectrum_csv};
use crate::io::pgm::{normalized_preview, write_pgm};
use crate::io::svg::{write_svg_plot, PlotOptions, Series};
use crate::kernels::{build_kernel, Family, KernelSpec};
use crate::matrix::RealMatrix;
use crate::signals::{exact_mirrors, figure4_images, make_test_signal, mirror_defect, GrayImage, TestSignalId};
use crate::transform::{angle_distance, apply_1d, apply_2d, special_phase, Signal, Spectrum};
use crate::verify::{amplitude_grid, CheckOutcome};

pub const FIGURE_SIGNAL_LEN: usize = 128;

pub struct ImageFigure {
    pub name: &'static str,
    pub input: GrayImage,
    pub amplitude: RealMatrix,
}

pub struct Figures {
    pub alpha: f64,
    pub m: f64,
    pub seed: u64,
    /// Dense 128-point ReDFRNT of x1 and the 64-point DFRNCT of its first half.
    pub redfrnt_x1: Spectrum,
    pub dfrnct_x1_half: Spectrum,
    /// Dense 128-point ReDFRNT of x2 and the 64-point DFRNST of its first half.
    pub redfrnt_x2: Spectrum,
    pub dfrnst_x2_half: Spectrum,
    pub images: Vec<ImageFigure>,
}

fn first_half(s: &Signal) -> Result<Signal> {
    Signal::new(s.samples()[..s.len() / 2].to_vec())
}

pub fn compute_figures(seed: u64, alpha: f64, m: f64) -> Result<Figures> {
    let n = FIGURE_SIGNAL_LEN / 2;
    let basis = SpectralBasis::from_seed(seed, n)?;
    let spec = KernelSpec::new(Family::RedfrntEven, alpha, m, n)?;
    let redfrnt = build_kernel(&basis, &spec)?;
    let cosine = build_kernel(&basis, &spec.with_family(Family::Dfrnct))?;
    let sine = build_kernel(&basis, &spec.with_family(Family::Dfrnst))?;

    let x1 = make_test_signal(TestSignalId::X1RectEven, FIGURE_SIGNAL_LEN)?;
    let x2 = make_test_signal(TestSignalId::X2RectOdd, FIGURE_SIGNAL_LEN)?;

    let mut images = Vec::new();
    for preset in figure4_images() {
        let input = preset.render()?;
        let amplitude = amplitude_grid(&apply_2d(&redfrnt, &input)?);
        images.push(ImageFigure {
            name: preset.name,
            input,
            amplitude,
        });
    }

    Ok(Figures {
        alpha,
        m,
        seed,
        redfrnt_x1: apply_1d(&redfrnt, &x1)?,
        dfrnct_x1_half: apply_1d(&cosine, &first_half(&x1)?)?,
        redfrnt_x2: apply_1d(&redfrnt, &x2)?,
        dfrnst_x2_half: apply_1d(&sine, &first_half(&x2)?)?,
        images,
    })
}

fn head_gap(half: &[f64], full: &[f64]) -> f64 {
    half.iter().zip(full).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn mirror_gap(values: &[f64]) -> f64 {
    let len = values.len();
    (0..len)
        .map(|i| (values[i] - values[len - 1 - i]).abs())
        .fold(0.0, f64::max)
}

/// Worst mirror mismatch of (possibly undefined) angles on a circle.
fn angle_mirror_gap(values: &[Option<f64>], offset: f64, period: f64) -> f64 {
    let len = values.len();
    (0..len)
        .filter_map(|i| match (values[i], values[len - 1 - i]) {
            (Some(a), Some(b)) => Some(angle_distance(a, b + offset, period)),
            _ => None,
        })
        .fold(0.0, f64::max)
}

fn defined_phase(s: &Spectrum) -> Vec<Option<f64>> {
    s.phase()
        .into_iter()
        .zip(s.phase_defined())
        .map(|(p, ok)| ok.then_some(p))
        .collect()
}

impl Figures {
    /// Structural checks on the figure data.
    pub fn checks(&self) -> Vec<CheckOutcome> {
        let mut out = Vec::new();
        let mut push = |name: String, defect: f64, tolerance: f64| {
            out.push(CheckOutcome {
                name,
                defect,
                tolerance,
            })
        };
        let a1 = self.redfrnt_x1.amplitude();
        let a2 = self.redfrnt_x2.amplitude();
        push(
            "fig1: |DFRNCT(x1′)| = first half of |ReDFRNT(x1)|".into(),
            head_gap(&self.dfrnct_x1_half.amplitude(), &a1),
            1e-9,
        );
        push("fig1: |ReDFRNT(x1)| mirror-symmetric".into(), mirror_gap(&a1), 1e-9);
        push(
            "fig1: phase of ReDFRNT(x1) mirror-symmetric".into(),
            angle_mirror_gap(&defined_phase(&self.redfrnt_x1), 0.0, 2.0 * PI),
            1e-8,
        );
        push(
            "fig2: |DFRNST(x2′)| = first half of |ReDFRNT(x2)|".into(),
            head_gap(&self.dfrnst_x2_half.amplitude(), &a2),
            1e-9,
        );
        push("fig2: |ReDFRNT(x2)| mirror-symmetric".into(), mirror_gap(&a2), 1e-9);
        push(
            "fig2: phase of ReDFRNT(x2) mirrored up to ±π".into(),
            angle_mirror_gap(&defined_phase(&self.redfrnt_x2), PI, 2.0 * PI),
            1e-8,
        );
        push(
            "fig3: special phase of ReDFRNT(x2) mirror-symmetric".into(),
            angle_mirror_gap(&special_phase(&self.redfrnt_x2), 0.0, PI),
            1e-8,
        );
        for img in &self.images {
            for mirror in exact_mirrors(&img.input) {
                push(
                    format!("fig4 {}: |ReDFRNT| keeps {mirror} symmetry", img.name),
                    mirror_defect(&img.amplitude, mirror),
                    1e-9,
                );
            }
        }
        out
    }

    /// Writes SVG plots, spectrum CSVs and PGM images into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut written = Vec::new();
        let params = format!("α = {}, M = {}, seed = {}", self.alpha, self.m, self.seed);
        let mut plot = |name: &str, title: &str, y_label: &str, series: Vec<Series>| -> Result<()> {
            let path = dir.join(name);
            let opts = PlotOptions {
                title: format!("{title} ({params})"),
                x_label: "n".into(),
                y_label: y_label.into(),
            };
            write_svg_plot(&series, &opts, &path)?;
            written.push(path);
            Ok(())
        };
        let phase_series = |s: &Spectrum| -> Vec<f64> {
            defined_phase(s).into_iter().map(|p| p.unwrap_or(f64::NAN)).collect()
        };
        let special_series = |s: &Spectrum| -> Vec<f64> {
            special_phase(s).into_iter().map(|p| p.unwrap_or(f64::NAN)).collect()
        };

        plot(
            "fig1_amplitude.svg",
            "DFRNCT of x1′ over ReDFRNT of x1",
            "amplitude",
            vec![
                Series::new("DFRNCT(x1′)", self.dfrnct_x1_half.amplitude()).bold(),
                Series::new("ReDFRNT(x1)", self.redfrnt_x1.amplitude()),
            ],
        )?;
        plot(
            "fig1_phase.svg",
            "Phase, DFRNCT of x1′ and ReDFRNT of x1",
            "phase (rad)",
            vec![
                Series::new("DFRNCT(x1′)", phase_series(&self.dfrnct_x1_half)).bold(),
                Series::new("ReDFRNT(x1)", phase_series(&self.redfrnt_x1)),
            ],
        )?;
        plot(
            "fig2_amplitude.svg",
            "DFRNST of x2′ over ReDFRNT of x2",
            "amplitude",
            vec![
                Series::new("DFRNST(x2′)", self.dfrnst_x2_half.amplitude()).bold(),
                Series::new("ReDFRNT(x2)", self.redfrnt_x2.amplitude()),
            ],
        )?;
        plot(
            "fig2_phase.svg",
            "Phase, DFRNST of x2′ and ReDFRNT of x2",
            "phase (rad)",
            vec![
                Series::new("DFRNST(x2′)", phase_series(&self.dfrnst_x2_half)).bold(),
                Series::new("ReDFRNT(x2)", phase_series(&self.redfrnt_x2)),
            ],
        )?;
        plot(
            "fig3_special_phase.svg",
            "Special phase, DFRNST of x2′ and ReDFRNT of x2",
            "special phase (rad)",
            vec![
                Series::new("DFRNST(x2′)", special_series(&self.dfrnst_x2_half)).bold(),
                Series::new("ReDFRNT(x2)", special_series(&self.redfrnt_x2)),
            ],
        )?;

        for (name, spectrum) in [
            ("fig1_redfrnt_x1.csv", &self.redfrnt_x1),
            ("fig1_dfrnct_x1_half.csv", &self.dfrnct_x1_half),
            ("fig2_redfrnt_x2.csv", &self.redfrnt_x2),
            ("fig2_dfrnst_x2_half.csv", &self.dfrnst_x2_half),
        ] {
            let path = dir.join(name);
            write_spectrum_csv(spectrum, &path)?;
            written.push(path);
        }

        for img in &self.images {
            let input = dir.join(format!("fig4_{}_input.pgm", img.name));
            write_pgm(&img.input, &input)?;
            let preview = dir.join(format!("fig4_{}_amplitude.pgm", img.name));
            write_pgm(&normalized_preview(&img.amplitude), &preview)?;
            let csv = dir.join(format!("fig4_{}_amplitude.csv", img.name));
            write_real_matrix_csv(
                &img.amplitude,
                &[format!("family=redfrnt_even alpha={} m={} n=64 seed={}", self.alpha, self.m, self.seed)],
                &csv,
            )?;
            written.extend([input, preview, csv]);
        }
        Ok(written)
    }
}
