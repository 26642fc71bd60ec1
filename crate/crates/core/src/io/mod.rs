//! File formats: PGM images, numeric CSV, SVG plots.

pub mod csv;
pub mod pgm;
pub mod svg;

pub use self::csv::{
    read_basis, read_complex_pair, read_signal_csv, write_basis, write_complex_pair,
    write_kernel_csv, write_spectrum_csv,
};
pub use self::pgm::{read_pgm, write_pgm};
pub use self::svg::{write_svg_plot, PlotOptions, Series};
