//! Numerical kernel: quadrature, Gamma, Hurwitz zeta, sphere areas and 1D
//! minimization.

mod gamma;
mod minimize;
mod quad;
mod zeta;

pub use gamma::{ball_volume, gamma_fn, sphere_area};
pub use minimize::{minimize_scalar, Minimum};
pub use quad::{
    integrate_adaptive, integrate_points, integrate_singular, try_integrate_points,
    try_integrate_singular, Endpoint, QuadConfig, QuadResult, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};
pub use zeta::hurwitz_zeta;
