//! File formats, parallel sweeps, figure reproduction and the `cesdyn`
//! command line on top of [`cesdyn_core`].

pub mod cli;
pub mod io;
pub mod reproduce;
pub mod svg;
pub mod sweep;

pub use cesdyn_core as core;
