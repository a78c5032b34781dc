pub mod analysis;
pub mod arrival;
pub mod cat;
pub mod error;
pub mod gaussian;
pub mod identical;
pub mod model;
pub mod numerics;
pub mod scenario;
pub mod selftest;
pub mod shutter;

pub use error::{Error, Result};
pub use model::{diffusion_coefficient, Environment, GaussianPacket, Grid, ModelConstants};
