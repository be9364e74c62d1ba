//! Device geometry of a cubic generator.
//!
//! Every internal dimension is a fixed fraction of the outer dimension `d`
//! (x = y = z = d). The moving mass is two side-by-side magnet columns, each
//! column made of an upper and a lower magnet separated by the coil gap.

use thiserror::Error;

const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("outer dimension must be positive and finite, got {0}")]
    NonPositiveDimension(f64),
    #[error("ratio `{name}` must lie in (0, 1), got {value}")]
    RatioOutOfRange { name: &'static str, value: f64 },
    #[error("2 * magnet_z_fraction + gap_fraction must equal 1, got {0}")]
    ClosureViolated(f64),
    #[error("two magnets are wider than the device (magnet_x_fraction = {0})")]
    MassTooWide(f64),
    #[error("material property `{name}` is invalid: {value}")]
    InvalidMaterial { name: &'static str, value: f64 },
    #[error("mass extent {x_mass} exceeds outer extent {x}")]
    MassExceedsExtent { x_mass: f64, x: f64 },
    #[error("argument `{name}` must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
}

/// Fractions of the outer dimension used to lay out magnets, gap and coil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryRatios {
    /// x-extent of a single magnet as a fraction of `d`.
    pub magnet_x_fraction: f64,
    /// z-extent of one magnet (upper or lower) as a fraction of `d`.
    pub magnet_z_fraction: f64,
    pub gap_fraction: f64,
    /// Coil thickness as a fraction of the gap.
    pub coil_thickness_fraction_of_gap: f64,
}

impl Default for GeometryRatios {
    fn default() -> Self {
        Self {
            magnet_x_fraction: 1.0 / 6.0,
            magnet_z_fraction: 0.4,
            gap_fraction: 0.2,
            coil_thickness_fraction_of_gap: 0.5,
        }
    }
}

impl GeometryRatios {
    pub fn validate(&self) -> Result<(), GeometryError> {
        for (name, value) in [
            ("magnet_x_fraction", self.magnet_x_fraction),
            ("magnet_z_fraction", self.magnet_z_fraction),
            ("gap_fraction", self.gap_fraction),
            ("coil_thickness_fraction_of_gap", self.coil_thickness_fraction_of_gap),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(GeometryError::RatioOutOfRange { name, value });
            }
        }
        let closure = 2.0 * self.magnet_z_fraction + self.gap_fraction;
        if (closure - 1.0).abs() > CLOSURE_TOL {
            return Err(GeometryError::ClosureViolated(closure));
        }
        if 2.0 * self.magnet_x_fraction >= 1.0 {
            return Err(GeometryError::MassTooWide(self.magnet_x_fraction));
        }
        Ok(())
    }
}

/// All derived dimensions of a generator with outer dimension `d`. Lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceGeometry {
    pub d: f64,
    /// x-extent of a single magnet.
    pub magnet_x: f64,
    /// x-extent of the moving mass (two magnets side by side).
    pub x_mass: f64,
    pub magnet_y: f64,
    /// z-extent of one magnet.
    pub magnet_z: f64,
    pub gap: f64,
    pub coil_thickness: f64,
    /// Peak displacement, `(d - x_mass) / 2`.
    pub x_m: f64,
}

/// Physical constants of the magnet and conductor materials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialProps {
    /// kg/m³
    pub magnet_density: f64,
    /// T
    pub remanence: f64,
    /// Ω·m
    pub conductor_resistivity: f64,
    pub copper_fill_factor: f64,
}

impl Default for MaterialProps {
    /// Sintered NdFeB magnets and copper conductor.
    fn default() -> Self {
        Self {
            magnet_density: 7600.0,
            remanence: 1.2,
            conductor_resistivity: 1.72e-8,
            copper_fill_factor: 0.55,
        }
    }
}

impl MaterialProps {
    pub fn validate(&self) -> Result<(), GeometryError> {
        for (name, value) in [
            ("magnet_density", self.magnet_density),
            ("remanence", self.remanence),
            ("conductor_resistivity", self.conductor_resistivity),
            ("copper_fill_factor", self.copper_fill_factor),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(GeometryError::InvalidMaterial { name, value });
            }
        }
        if self.copper_fill_factor > 1.0 {
            return Err(GeometryError::InvalidMaterial {
                name: "copper_fill_factor",
                value: self.copper_fill_factor,
            });
        }
        Ok(())
    }
}

pub fn derive_geometry(d: f64, ratios: &GeometryRatios) -> Result<DeviceGeometry, GeometryError> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(GeometryError::NonPositiveDimension(d));
    }
    ratios.validate()?;
    let magnet_x = ratios.magnet_x_fraction * d;
    let x_mass = 2.0 * magnet_x;
    let gap = ratios.gap_fraction * d;
    Ok(DeviceGeometry {
        d,
        magnet_x,
        x_mass,
        magnet_y: d,
        magnet_z: ratios.magnet_z_fraction * d,
        gap,
        coil_thickness: ratios.coil_thickness_fraction_of_gap * gap,
        x_m: (d - x_mass) / 2.0,
    })
}

/// Mass of the four magnets. The stationary coil is not part of the moving mass.
pub fn moving_mass(geom: &DeviceGeometry, mat: &MaterialProps) -> f64 {
    mat.magnet_density * geom.x_mass * geom.magnet_y * 2.0 * geom.magnet_z
}

/// Peak kinetic energy of a mass of extent `x_mass` oscillating sinusoidally at
/// `omega` with peak displacement `(x - x_mass) / 2`.
///
/// `z_mass` is the total z-extent of the moving mass (both magnet layers).
pub fn kinetic_energy(
    x_mass: f64,
    x: f64,
    y: f64,
    z_mass: f64,
    density: f64,
    omega: f64,
) -> Result<f64, GeometryError> {
    for (name, value) in [
        ("x_mass", x_mass),
        ("y", y),
        ("z_mass", z_mass),
        ("density", density),
        ("omega", omega),
    ] {
        if value < 0.0 || value.is_nan() {
            return Err(GeometryError::Negative { name, value });
        }
    }
    if x_mass > x {
        return Err(GeometryError::MassExceedsExtent { x_mass, x });
    }
    let free = x - x_mass;
    Ok(density * y * z_mass * x_mass * omega * omega * free * free / 8.0)
}

/// Mass extent that maximises [`kinetic_energy`] for a device of extent `x`.
///
/// d(KE)/d(x_mass) ∝ (x - x_mass)(x - 3 x_mass), so the interior root is x / 3,
/// which also makes the peak displacement x / 3.
pub fn optimal_mass_extent(x: f64) -> f64 {
    x / 3.0
}
