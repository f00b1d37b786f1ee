#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod catalog;
pub mod coordfield;
pub mod exact;
pub mod invariants;
pub mod liealg;
