//! Rotation-mode circular CORDIC: the conventional algorithm, scale-free
//! variants whose micro-rotations come from truncated compositions of the
//! sine/cosine and arctangent series, a Q2.30 hardware datapath model and
//! an error benchmark harness.

pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod fixedpoint;
pub mod hwsim;
pub mod refmath;
pub mod selector;
pub mod variants;

pub use error::{Error, Result};
pub use fixedpoint::Q30Fixed;
pub use variants::Variant;
