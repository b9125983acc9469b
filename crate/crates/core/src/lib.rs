// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curves;
pub mod dynsys;
pub mod error;
pub mod io;
pub mod model;
pub mod series;
pub mod sim;

pub use error::{Error, Result};
pub use model::{ModelParams, ParticleType, Regime};
