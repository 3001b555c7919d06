//! Persistence and reporting: the text batch format for sampled spectra,
//! CSV tables for every experiment, and SVG diagnostics.

pub mod batch;
pub mod csv;
pub mod svg;

pub use batch::{read_batch, read_batch_file, write_batch, write_batch_file};
pub use csv::CsvTable;
