//! Analytic magnetostatics of the four-magnet arrangement and the flux
//! linkage seen by the stationary coil.

mod field;
mod flux;

use thiserror::Error;

pub use field::{bz_cuboid, CuboidMagnet, MagnetArray, Point3, Polarity};
pub use flux::{
    fit_gradient, flux_linkage_curve, flux_through_square_turn, flux_through_turn,
    gradient_from_scaling_law, CoilFootprint, CurveOptions, FluxLinkageCurve, FLUX_QUADRATURE_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MagneticsError {
    #[error("field evaluated on a magnet edge at {0:?}")]
    SingularPoint(Point3),
    #[error("magnet half-extents must be positive")]
    InvalidMagnet,
    #[error("turn size must be non-negative and finite, got {0}")]
    InvalidTurn(f64),
    #[error("flux quadrature did not converge")]
    QuadratureNotConverged,
    #[error("sample count must be odd and at least 5, got {0}")]
    BadSampleCount(usize),
    #[error("line fit needs at least 5 samples, got {0}")]
    TooFewSamples(usize),
    #[error("line fit is degenerate: all displacements are equal")]
    DegenerateFit,
    #[error("coil footprint {0:?} is not a valid annulus")]
    InvalidFootprint(CoilFootprint),
    #[error("coil half-span {half_span} m exceeds the device half-width {limit} m")]
    CoilOutsideDevice { half_span: f64, limit: f64 },
}
