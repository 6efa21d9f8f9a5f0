#![no_std]

extern crate alloc;

pub mod algebra;
pub mod branching;
pub mod catalog;
pub mod error;
pub mod hull;
pub mod matrix;
pub mod scalar;
pub mod tightness;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
