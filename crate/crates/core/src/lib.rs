//! Divisor class groups, l-adic homology profiles and dualizing-complex
//! verdicts for resolution graphs of rational surface singularities.
//!
//! The pipeline runs bottom-up:
//!
//! - [`exactlat`]: exact integer matrices, Smith normal form, cokernels;
//! - [`dualgraph`]: weighted dual graphs, validation, ADE and
//!   Hirzebruch–Jung generators;
//! - [`curvehom`]: homology of the exceptional curve configuration;
//! - [`classgrp`]: `Cl(X)` as the cokernel of `E → E*`;
//! - [`surfhom`]: the local homology `H_q(X)`;
//! - [`dualizing`]: global verdicts on `Q_l` and `Z_l` as dualizing complexes;
//! - [`perversity`]: perverse t-structure conditions and weights.

pub mod catalog;
pub mod classgrp;
pub mod cli;
pub mod curvehom;
pub mod dualgraph;
pub mod dualizing;
pub mod error;
pub mod exactlat;
pub mod perversity;
pub mod surfhom;

pub use dualgraph::{DualGraph, ValidationReport, Vertex};
pub use error::{Error, Result};
pub use exactlat::{Coefficients, FgAbGroup, IntMatrix, LModule, Prime, SmithForm, Summand};
