pub mod burnside;
pub mod characters;
pub mod config;
pub mod cyclotomic;
pub mod error;
pub mod geometry;
pub mod group;
pub mod lattice;
pub mod pipeline;
pub mod rep;
pub mod report;
pub mod spectral;
pub use error::{Error, Result};
