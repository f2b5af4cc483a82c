pub mod benchmarks;
pub mod clustering;
pub mod counting;
pub mod deflation;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod polynomial;

pub use error::{Error, Result};
