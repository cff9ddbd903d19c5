//! Pseudo-spectral simulator for the inviscid slow-limiting ocean dynamics
//! model on the periodic box, with runtime checks of its conservation laws
//! and a-priori bounds.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod init;
pub mod io;
pub mod model;
pub mod spectral;
pub mod timestepper;

pub use error::{Error, Result};
