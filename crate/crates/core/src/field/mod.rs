//! Velocity from vorticity and circulations: kernel part, harmonic fields,
//! multi-obstacle correction and circulation coefficients.

mod blobs;
mod decomposition;
mod harmonic;
mod kernel;
mod quadrature;

#[cfg(test)]
mod tests;

pub use blobs::VortexBlobs;
pub use decomposition::{default_cutoff_eps, velocity, AlphaMethod, DecompositionOptions, StreamDecomposition};
pub use harmonic::{
    harmonic_psi_single, map_point, solve_correction_multi, solve_harmonic_multi, CorrectionField, CorrectionSolver,
    HarmonicField, HarmonicOptions, MappedPoint, Series,
};
pub use kernel::{fullplane_biot_savart, kernel_psi0_single};
pub use quadrature::BandQuadrature;

pub(crate) use kernel::fullplane_skip;
