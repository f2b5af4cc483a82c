//! Arbitrary-precision floats, upward-rounded magnitudes and complex balls.

mod ball;
mod mag;

pub use ball::{unit_roundoff, ComplexBall};
pub use mag::Mag;
pub use rug::Float as BigFloat;
