//! Output formats: CSV tables, the SVG portrait writer and run manifests.

pub mod csv;
pub mod manifest;
pub mod svg;

pub use manifest::{OutputDir, RunManifest};
