//! k-orbit machinery for finite permutation groups.
//!
//! Points are 0-based. Products compose right to left: `g.compose(&h)` maps
//! `v` to `g(h(v))`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod aut;
pub mod chain;
pub mod elements;
pub mod error;
pub mod gi;
pub mod group;
pub mod korbit;
pub mod perm;
pub mod structure;

pub use elements::ElementSet;
pub use error::{Error, Result};
pub use group::{PermGroup, Primitivity, DEFAULT_CAP};
pub use perm::{compose, is_regular_element, CycleType, Permutation};
