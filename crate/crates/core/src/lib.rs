pub mod arcset;
#[cfg(feature = "cli")]
pub mod cli;
pub mod conjugacy;
pub mod descriptor;
pub mod error;
pub mod homogeneity;
pub mod ifs;
pub mod pl;
pub mod shadowing;
pub mod rational;
pub mod report;
pub mod sample;
pub mod space;
pub mod systems;

pub use error::{Error, Result};
pub use rational::Rat;
