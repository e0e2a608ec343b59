//! Symmetric decreasing rearrangement on the integer lattice, Lorentz
//! quasinorms of radial step functions, and the Gaussian subordination of the
//! power kernel.

mod lattice;
mod lorentz;

pub use lattice::{
    exhaustive_sweep, lattice_energy, lattice_energy_extended, rearrange, rearrangement_gap,
    ConvexCost, ExponentialKernel, GridFunction1D, Kernel, PowerKernel, SweepSummary,
};
pub use lorentz::{
    distribution_function, gaussian_decomposition, gaussian_subordination, lorentz_nesting,
    lorentz_nesting_gap, lorentz_norm, lq_norm, symmdecr_identity, symmdecr_identity_gap,
    weighted_lp, GaussianCheck, Sides, StepRadialFunction,
};
