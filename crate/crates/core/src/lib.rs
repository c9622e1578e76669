//! Channel, lens and outage models for an indoor visible-light link whose
//! receiver carries an electrowetting tunable liquid lens.

pub mod channel;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod lens;
pub mod mobility;
pub mod outage;
pub mod specfun;

pub use channel::{Scheme, SystemParams};
pub use error::{Error, Result};
pub use geometry::{Pose, Vec3};
