//! Exact computations with A-fibered bisets on small finite groups.

pub mod error;
pub mod fiber;
pub mod group;
pub mod pairs;
pub mod burnside;
pub mod oracle;
pub mod seed;
pub mod functor;
pub mod plus;
pub mod upper;
pub mod verify;

pub use error::{Error, Result};
