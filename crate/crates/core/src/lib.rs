// `!(x > a)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::wrong_self_convention)]

pub mod anatomy;
pub mod arith;
pub mod asymptotics;
pub mod congruence;
pub mod error;
pub mod fieldred;
pub mod fixtures;
pub mod qseries;

pub use error::{Error, Result};
