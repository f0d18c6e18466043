#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod error;
pub mod ffq;
pub mod series;
pub mod curve;
pub mod divisor;
pub mod hkgeom;
pub mod counting;
pub mod closedform;

pub use error::{Error, Result};
