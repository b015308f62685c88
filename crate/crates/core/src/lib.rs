//! Geometric-mechanics model of a two-link drag-dominated swimmer whose links
//! carry scales: longitudinal drag is larger when a link slides backward than
//! when it slides forward.

pub mod cli;
pub mod error;
pub mod gait;
pub mod geom;
pub mod scaled;
pub mod swimmer;

pub use error::{Error, Result};
