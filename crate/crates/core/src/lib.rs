//! Exact arithmetic for the modular forms attached to order-`p` divided beta
//! family elements: level-one forms in the `Delta^a E4^b` basis, their
//! images on `Gamma_0(2)`, divisibility by `E_{p-1}`, and the closed forms
//! and linear search that produce `f_{i/j}`.

pub mod betafamily;
pub mod cache;
pub mod closedform;
pub mod conditions;
pub mod error;
pub mod exactnum;
pub mod level1;
pub mod level2;
pub mod par;
pub mod qseries;
pub mod reproduce;
pub mod search;
pub mod sweep;

pub use error::{Error, Result};
pub use par::Execution;
