//! Exact arithmetic on Jacobian elliptic surfaces over `F_q(t)`.
//!
//! The crate is `no_std` (with `alloc`). Everything hangs off
//! [`weierstrass::WeierstrassModel`]: [`tate`] classifies its singular fibers,
//! [`invariants`] assembles the global report, [`twists`] builds new models
//! from old ones, and [`actions`] checks group-scheme actions on its charts.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;

pub mod actions;
pub mod algebra;
pub mod igusa;
pub mod invariants;
pub mod tate;
pub mod twists;
pub mod weierstrass;

pub use error::{Error, Result};
