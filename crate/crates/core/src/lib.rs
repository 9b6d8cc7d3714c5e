pub mod certify;
pub mod error;
pub mod forms;
pub mod heatprobe;
pub mod jmaps;
pub mod mat;
pub mod metrics;
pub mod sampling;

pub use error::{Error, Result};
