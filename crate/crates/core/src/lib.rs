//! Sharp fractional Hardy inequalities: constants, remainder terms and
//! numerical checks on graphs, radial functions and lattices.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod exec;
pub mod graph_gsr;
pub mod inequalities;
pub mod numerics;
pub mod params;
pub mod radial;
pub mod rearrange_lorentz;

pub use error::{HardyError, Result};
pub use params::{make_params, HardyParams};
