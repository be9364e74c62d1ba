use std::f64::consts::PI;

use rayon::prelude::*;

use super::field::{MagnetArray, Point3};
use super::MagneticsError;
use crate::geometry::{DeviceGeometry, MaterialProps};
use crate::numerics::{fit_line, gauss_legendre, gauss_legendre_on, LineFit};

/// Relative change between successive quadrature refinements that counts as converged.
pub const FLUX_QUADRATURE_TOL: f64 = 1e-3;
const MAX_REFINEMENTS: usize = 7;

/// Lateral shape of the coil in the gap mid-plane, centred under the magnets at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoilFootprint {
    /// Circular turns with radii between `r_inner` and `r_outer`.
    Circular { r_inner: f64, r_outer: f64 },
    /// Square turns with side lengths between `side_inner` and `side_outer`.
    Square { side_inner: f64, side_outer: f64 },
}

impl CoilFootprint {
    /// Largest lateral half-extent of the outermost turn.
    pub fn half_span(&self) -> f64 {
        match *self {
            CoilFootprint::Circular { r_outer, .. } => r_outer,
            CoilFootprint::Square { side_outer, .. } => side_outer / 2.0,
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match *self {
            CoilFootprint::Circular { r_inner, r_outer } => (r_inner, r_outer),
            CoilFootprint::Square { side_inner, side_outer } => (side_inner, side_outer),
        }
    }

    /// `count` turn sizes (radius or side) spread uniformly from inner to outer.
    pub fn representative_sizes(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.bounds();
        if count == 1 {
            return vec![0.5 * (lo + hi)];
        }
        (0..count)
            .map(|j| lo + (hi - lo) * j as f64 / (count - 1) as f64)
            .collect()
    }

    fn flux_through(&self, array: &MagnetArray, size: f64) -> Result<f64, MagneticsError> {
        match self {
            CoilFootprint::Circular { .. } => flux_through_turn(array, size, [0.0; 3]),
            CoilFootprint::Square { .. } => flux_through_square_turn(array, size, [0.0; 3]),
        }
    }
}

// Integrates f over successively refined rules until the signed integral
// changes by less than tol times the integral of |f|.
fn refine<F>(mut eval: F) -> Result<f64, MagneticsError>
where
    F: FnMut(usize) -> Result<(f64, f64), MagneticsError>,
{
    let (mut prev, _) = eval(0)?;
    for level in 1..=MAX_REFINEMENTS {
        let (value, magnitude) = eval(level)?;
        if (value - prev).abs() <= FLUX_QUADRATURE_TOL * magnitude || magnitude == 0.0 {
            return Ok(value);
        }
        prev = value;
    }
    Err(MagneticsError::QuadratureNotConverged)
}

/// Magnetic flux (Wb) through a flat circular turn of `radius` lying in the
/// plane z = `center[2]`.
///
/// Gauss–Legendre in radius, trapezoidal (spectrally accurate for the periodic
/// integrand) in angle.
pub fn flux_through_turn(array: &MagnetArray, radius: f64, center: Point3) -> Result<f64, MagneticsError> {
    if radius < 0.0 || !radius.is_finite() {
        return Err(MagneticsError::InvalidTurn(radius));
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    refine(|level| {
        let n_r = 8 << level;
        let n_theta = 16 << level;
        let (rs, ws) = gauss_legendre_on(n_r, 0.0, radius);
        let dtheta = 2.0 * PI / n_theta as f64;
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for (r, w) in rs.iter().zip(&ws) {
            let mut ring = 0.0;
            let mut ring_abs = 0.0;
            for k in 0..n_theta {
                let theta = (k as f64 + 0.5) * dtheta;
                let p = [center[0] + r * theta.cos(), center[1] + r * theta.sin(), center[2]];
                let b = array.bz(p)?;
                ring += b;
                ring_abs += b.abs();
            }
            value += w * r * ring * dtheta;
            magnitude += w * r * ring_abs * dtheta;
        }
        Ok((value, magnitude))
    })
}

/// Magnetic flux (Wb) through a square turn of side `side` in the plane z = `center[2]`.
pub fn flux_through_square_turn(
    array: &MagnetArray,
    side: f64,
    center: Point3,
) -> Result<f64, MagneticsError> {
    if side < 0.0 || !side.is_finite() {
        return Err(MagneticsError::InvalidTurn(side));
    }
    if side == 0.0 {
        return Ok(0.0);
    }
    let half = side / 2.0;
    refine(|level| {
        let n = 8 << level;
        let (t, w) = gauss_legendre(n);
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for (tx, wx) in t.iter().zip(&w) {
            for (ty, wy) in t.iter().zip(&w) {
                let p = [center[0] + half * tx, center[1] + half * ty, center[2]];
                let b = array.bz(p)?;
                let weight = wx * wy * half * half;
                value += weight * b;
                magnitude += weight * b.abs();
            }
        }
        Ok((value, magnitude))
    })
}

/// Sampling parameters for [`flux_linkage_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOptions {
    /// Odd number of displacement samples over [-x_m, x_m].
    pub samples: usize,
    /// Number of representative turns averaged per sample.
    pub representative_turns: usize,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self { samples: 21, representative_turns: 5 }
    }
}

/// Average flux per turn as a function of magnet displacement, with its
/// least-squares gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxLinkageCurve {
    /// Magnet displacements in metres, strictly increasing and symmetric about 0.
    pub displacements: Vec<f64>,
    /// Average flux per turn in webers at each displacement.
    pub flux_per_turn: Vec<f64>,
    /// Least-squares slope dφ/dx in Wb/m.
    pub fitted_gradient: f64,
    /// RMS residual of the line fit in Wb.
    pub fit_rms_residual: f64,
}

impl FluxLinkageCurve {
    pub fn from_samples(displacements: Vec<f64>, flux_per_turn: Vec<f64>) -> Result<Self, MagneticsError> {
        let fit = line_fit(&displacements, &flux_per_turn)?;
        Ok(Self {
            displacements,
            flux_per_turn,
            fitted_gradient: fit.slope,
            fit_rms_residual: fit.rms_residual,
        })
    }

    pub fn peak_displacement(&self) -> f64 {
        self.displacements.last().copied().unwrap_or(0.0)
    }

    /// Line fit restricted to samples with |x| ≤ `half_width`.
    pub fn fit_within(&self, half_width: f64) -> Result<LineFit, MagneticsError> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .displacements
            .iter()
            .zip(&self.flux_per_turn)
            .filter(|(x, _)| x.abs() <= half_width * (1.0 + 1e-12))
            .map(|(x, y)| (*x, *y))
            .unzip();
        line_fit(&xs, &ys)
    }

    /// Largest |φ(x) + φ(-x)| relative to the largest |φ|.
    pub fn oddness_defect(&self) -> f64 {
        let n = self.flux_per_turn.len();
        let peak = self.flux_per_turn.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if peak == 0.0 {
            return 0.0;
        }
        (0..n)
            .map(|i| (self.flux_per_turn[i] + self.flux_per_turn[n - 1 - i]).abs())
            .fold(0.0, f64::max)
            / peak
    }
}

fn line_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit, MagneticsError> {
    if xs.len() < 5 {
        return Err(MagneticsError::TooFewSamples(xs.len()));
    }
    fit_line(xs, ys).ok_or(MagneticsError::DegenerateFit)
}

/// Least-squares gradient of a flux-linkage curve over its full sampled range.
pub fn fit_gradient(curve: &FluxLinkageCurve) -> Result<f64, MagneticsError> {
    line_fit(&curve.displacements, &curve.flux_per_turn).map(|f| f.slope)
}

/// Samples the average flux per turn while the magnets sweep over [-x_m, x_m].
pub fn flux_linkage_curve(
    geom: &DeviceGeometry,
    mat: &MaterialProps,
    footprint: &CoilFootprint,
    options: &CurveOptions,
) -> Result<FluxLinkageCurve, MagneticsError> {
    let n = options.samples;
    if n < 5 || n % 2 == 0 {
        return Err(MagneticsError::BadSampleCount(n));
    }
    if options.representative_turns == 0 {
        return Err(MagneticsError::BadSampleCount(0));
    }
    let (lo, hi) = footprint.bounds();
    if !(lo >= 0.0 && hi > lo) {
        return Err(MagneticsError::InvalidFootprint(*footprint));
    }
    if footprint.half_span() > geom.d / 2.0 {
        return Err(MagneticsError::CoilOutsideDevice {
            half_span: footprint.half_span(),
            limit: geom.d / 2.0,
        });
    }
    let sizes = footprint.representative_sizes(options.representative_turns);
    let half = (n - 1) as f64;
    let displacements: Vec<f64> = (0..n)
        .map(|i| geom.x_m * (2.0 * i as f64 - half) / half)
        .collect();
    let flux: Vec<f64> = displacements
        .par_iter()
        .map(|&s| {
            let array = MagnetArray::new(geom, mat, s);
            let mut sum = 0.0;
            for size in &sizes {
                sum += footprint.flux_through(&array, *size)?;
            }
            Ok(sum / sizes.len() as f64)
        })
        .collect::<Result<_, MagneticsError>>()?;
    // quadrature noise at the symmetric centre sample
    let peak = flux.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let flux = flux
        .into_iter()
        .map(|v| if v.abs() <= 1e-12 * peak { 0.0 } else { v })
        .collect();
    FluxLinkageCurve::from_samples(displacements, flux)
}

/// Gradient from the linear size law, `k_phi * d`.
pub fn gradient_from_scaling_law(d: f64, k_phi: f64) -> f64 {
    k_phi * d
}
