//! Design and analysis of multi-dimensional spatially-coupled LDPC codes.

pub mod catalog;
pub mod cli;
pub mod code_model;
pub mod error;
pub mod flcount;
pub mod grade;
pub mod mcmc;
pub mod patterns;
pub mod polyalg;
pub mod simchan;

pub use error::{Error, Result};
