//! Reference signals and binary rectangle images.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::transform::Signal;

/// The two 1-D rectangle test signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestSignalId {
    /// 1 on samples 49..=80 (1-based), 0 elsewhere.
    X1RectEven,
    /// 1 on 49..=64, -1 on 65..=80, 0 elsewhere.
    X2RectOdd,
}

impl fmt::Display for TestSignalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestSignalId::X1RectEven => "x1",
            TestSignalId::X2RectOdd => "x2",
        })
    }
}

impl FromStr for TestSignalId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x1" | "x1_rect_even" => Ok(TestSignalId::X1RectEven),
            "x2" | "x2_rect_odd" => Ok(TestSignalId::X2RectOdd),
            _ => Err(Error::InvalidInput(format!(
                "unknown test signal '{s}' (expected x1 or x2)"
            ))),
        }
    }
}

pub const DEFAULT_SIGNAL_LEN: usize = 128;

/// Real samples of a test signal; `length` must cover index 80.
pub fn test_signal_samples(id: TestSignalId, length: usize) -> Result<Vec<f64>> {
    if length < 80 {
        return Err(Error::InvalidLength {
            got: length,
            expected: "at least 80".into(),
        });
    }
    Ok((1..=length)
        .map(|n| match (id, n) {
            (TestSignalId::X1RectEven, 49..=80) => 1.0,
            (TestSignalId::X2RectOdd, 49..=64) => 1.0,
            (TestSignalId::X2RectOdd, 65..=80) => -1.0,
            _ => 0.0,
        })
        .collect())
}

pub fn make_test_signal(id: TestSignalId, length: usize) -> Result<Signal> {
    Ok(Signal::from_real(&test_signal_samples(id, length)?))
}

/// Real image with pixels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pixels: RealMatrix,
}

impl GrayImage {
    pub fn new(pixels: RealMatrix) -> Result<Self> {
        if pixels.rows() == 0 || pixels.cols() == 0 {
            return Err(Error::InvalidDimension("image must be non-empty".into()));
        }
        if let Some(bad) = pixels.as_slice().iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidInput(format!(
                "pixel value {bad} outside [0, 1]"
            )));
        }
        Ok(Self { pixels })
    }

    pub fn rows(&self) -> usize {
        self.pixels.rows()
    }

    pub fn cols(&self) -> usize {
        self.pixels.cols()
    }

    pub fn pixels(&self) -> &RealMatrix {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[(row, col)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub row0: usize,
    pub col0: usize,
    pub height: usize,
    pub width: usize,
    pub value: f64,
}

/// A square canvas of zeros with filled rectangles (0-based, half-open).
#[derive(Debug, Clone, PartialEq)]
pub struct RectImageSpec {
    pub name: &'static str,
    pub size: usize,
    pub rectangles: Vec<Rect>,
}

impl RectImageSpec {
    pub fn render(&self) -> Result<GrayImage> {
        let mut px = RealMatrix::zeros(self.size, self.size);
        for r in &self.rectangles {
            if r.row0 + r.height > self.size || r.col0 + r.width > self.size {
                return Err(Error::InvalidInput(format!(
                    "rectangle {r:?} exceeds a {0}x{0} canvas",
                    self.size
                )));
            }
            for i in r.row0..r.row0 + r.height {
                for j in r.col0..r.col0 + r.width {
                    px[(i, j)] = r.value;
                }
            }
        }
        GrayImage::new(px)
    }
}

/// Three 128×128 binary images: a centered square (all four mirrors), a
/// centered bar (up-down and left-right only), and a pair of blocks that is
/// only left-right symmetric.
pub fn figure4_images() -> [RectImageSpec; 3] {
    let rect = |row0, col0, height, width| Rect {
        row0,
        col0,
        height,
        width,
        value: 1.0,
    };
    [
        RectImageSpec {
            name: "i1",
            size: 128,
            rectangles: vec![rect(48, 48, 32, 32)],
        },
        RectImageSpec {
            name: "i2",
            size: 128,
            rectangles: vec![rect(56, 32, 16, 64)],
        },
        RectImageSpec {
            name: "i3",
            size: 128,
            rectangles: vec![rect(20, 24, 32, 24), rect(20, 80, 32, 24)],
        },
    ]
}

/// Mirror maps of a square grid about its center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mirror {
    UpDown,
    LeftRight,
    Transpose,
    AntiTranspose,
}

impl Mirror {
    pub const ALL: [Mirror; 4] = [
        Mirror::UpDown,
        Mirror::LeftRight,
        Mirror::Transpose,
        Mirror::AntiTranspose,
    ];

    /// Image of `(i, j)` on a `size`-square grid.
    pub fn map(self, i: usize, j: usize, size: usize) -> (usize, usize) {
        let last = size - 1;
        match self {
            Mirror::UpDown => (last - i, j),
            Mirror::LeftRight => (i, last - j),
            Mirror::Transpose => (j, i),
            Mirror::AntiTranspose => (last - j, last - i),
        }
    }
}

impl fmt::Display for Mirror {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mirror::UpDown => "up-down",
            Mirror::LeftRight => "left-right",
            Mirror::Transpose => "transpose",
            Mirror::AntiTranspose => "anti-transpose",
        })
    }
}

/// `max |g(i,j) − g(mirror(i,j))|` over a square grid.
pub fn mirror_defect(grid: &RealMatrix, mirror: Mirror) -> f64 {
    assert!(grid.is_square(), "mirror checks need a square grid");
    let size = grid.rows();
    let mut worst = 0.0f64;
    for i in 0..size {
        for j in 0..size {
            let (a, b) = mirror.map(i, j, size);
            worst = worst.max((grid[(i, j)] - grid[(a, b)]).abs());
        }
    }
    worst
}

/// Mirrors under which the image is exactly invariant.
pub fn exact_mirrors(image: &GrayImage) -> Vec<Mirror> {
    if image.rows() != image.cols() {
        return Vec::new();
    }
    Mirror::ALL
        .into_iter()
        .filter(|m| mirror_defect(image.pixels(), *m) == 0.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::energy;

    #[test]
    fn x1_samples() {
        let x = test_signal_samples(TestSignalId::X1RectEven, 128).unwrap();
        assert_eq!(x[48], 1.0); // n = 49
        assert_eq!(x[47], 0.0);
        assert_eq!(x[79], 1.0);
        assert_eq!(x[80], 0.0);
        for n in 0..128 {
            assert_eq!(x[n], x[127 - n]);
        }
    }

    #[test]
    fn x2_samples() {
        let x = test_signal_samples(TestSignalId::X2RectOdd, 128).unwrap();
        assert_eq!(x[63], 1.0); // n = 64
        assert_eq!(x[64], -1.0); // n = 65
        for n in 0..128 {
            assert_eq!(x[n], -x[127 - n]);
        }
    }

    #[test]
    fn energies_and_lengths() {
        for id in [TestSignalId::X1RectEven, TestSignalId::X2RectOdd] {
            let s = make_test_signal(id, 128).unwrap();
            assert_eq!(energy(s.samples()), 32.0);
            assert_eq!(make_test_signal(id, 80).unwrap().len(), 80);
            assert!(matches!(
                make_test_signal(id, 79),
                Err(Error::InvalidLength { got: 79, .. })
            ));
        }
        assert_eq!("X2".parse::<TestSignalId>().unwrap(), TestSignalId::X2RectOdd);
    }

    #[test]
    fn preset_symmetry_classes() {
        let [i1, i2, i3] = figure4_images();
        let m1 = exact_mirrors(&i1.render().unwrap());
        assert_eq!(m1, Mirror::ALL.to_vec());
        let m2 = exact_mirrors(&i2.render().unwrap());
        assert_eq!(m2, vec![Mirror::UpDown, Mirror::LeftRight]);
        let m3 = exact_mirrors(&i3.render().unwrap());
        assert_eq!(m3, vec![Mirror::LeftRight]);
    }

    #[test]
    fn out_of_bounds_rectangle() {
        let spec = RectImageSpec {
            name: "bad",
            size: 4,
            rectangles: vec![Rect {
                row0: 2,
                col0: 0,
                height: 3,
                width: 1,
                value: 1.0,
            }],
        };
        assert!(spec.render().is_err());
    }

    #[test]
    fn gray_image_range() {
        assert!(GrayImage::new(RealMatrix::from_rows(&[vec![1.5]])).is_err());
        assert!(GrayImage::new(RealMatrix::zeros(0, 0)).is_err());
    }
}
