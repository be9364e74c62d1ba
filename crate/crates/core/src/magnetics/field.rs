//! Closed-form flux density of uniformly z-magnetised cuboids.
//!
//! A uniformly magnetised block is equivalent to two sheets of magnetic
//! surface charge ±M on its top and bottom faces. Integrating the Coulomb
//! kernel over a rectangle gives an arctan per corner, so the z-component
//! of the field is a signed sum of eight arctans. Permeability is taken as
//! that of free space everywhere.

use std::f64::consts::PI;

use super::MagneticsError;
use crate::geometry::{DeviceGeometry, MaterialProps};

pub type Point3 = [f64; 3];

/// Direction of magnetisation along z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Up,
    Down,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Up => 1.0,
            Polarity::Down => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuboidMagnet {
    pub center: Point3,
    pub half_extents: [f64; 3],
    pub polarity: Polarity,
    /// Remanent flux density in tesla.
    pub remanence: f64,
}

impl CuboidMagnet {
    pub fn new(center: Point3, half_extents: [f64; 3], polarity: Polarity, remanence: f64) -> Self {
        Self { center, half_extents, polarity, remanence }
    }

    pub fn contains(&self, p: Point3) -> bool {
        (0..3).all(|i| (p[i] - self.center[i]).abs() < self.half_extents[i])
    }
}

/// z-component of B (tesla) produced by `magnet` at `point`.
///
/// Points on a face (but not an edge) return the outside limit, which equals
/// the inside limit because the normal component of B is continuous. Points on
/// an edge are rejected.
pub fn bz_cuboid(magnet: &CuboidMagnet, point: Point3) -> Result<f64, MagneticsError> {
    let h = magnet.half_extents;
    if h.iter().any(|v| !(*v > 0.0)) {
        return Err(MagneticsError::InvalidMagnet);
    }
    let rel = [
        point[0] - magnet.center[0],
        point[1] - magnet.center[1],
        point[2] - magnet.center[2],
    ];
    let scale = h[0].max(h[1]).max(h[2]);
    let tol = 1e-12 * scale;
    let on_plane = |i: usize| (rel[i].abs() - h[i]).abs() <= tol;
    let within = |i: usize| rel[i].abs() <= h[i] + tol;
    let planes = (0..3).filter(|&i| on_plane(i)).count();
    if planes >= 2 && (0..3).all(within) {
        return Err(MagneticsError::SingularPoint(point));
    }

    let mut total = 0.0;
    for (face_sign, zf) in [(1.0, h[2]), (-1.0, -h[2])] {
        let mut z = rel[2] - zf;
        if z.abs() <= tol {
            // outside limit: above the top face, below the bottom face
            z = if face_sign > 0.0 { 0.0 } else { -0.0 };
        }
        let mut face = 0.0;
        for (si, xi) in [(1.0, h[0]), (-1.0, -h[0])] {
            let x = xi - rel[0];
            for (sj, yj) in [(1.0, h[1]), (-1.0, -h[1])] {
                let y = yj - rel[1];
                let num = x * y;
                if num == 0.0 {
                    continue;
                }
                let r = (x * x + y * y + z * z).sqrt();
                face += si * sj * (num / (z * r)).atan();
            }
        }
        total += face_sign * face;
    }
    let mut bz = magnet.polarity.sign() * magnet.remanence / (4.0 * PI) * total;
    if magnet.contains(point) && planes == 0 {
        bz += magnet.polarity.sign() * magnet.remanence;
    }
    if !bz.is_finite() {
        return Err(MagneticsError::SingularPoint(point));
    }
    Ok(bz)
}

/// The four moving magnets: two columns side by side in x with opposite
/// polarity, each column split into an upper and a lower magnet across the
/// coil gap. The gap is centred on z = 0 and the coil sits at x = y = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetArray {
    pub magnets: [CuboidMagnet; 4],
}

impl MagnetArray {
    /// Array displaced by `displacement` along x from its centred rest position.
    pub fn new(geom: &DeviceGeometry, mat: &MaterialProps, displacement: f64) -> Self {
        let half = [geom.magnet_x / 2.0, geom.magnet_y / 2.0, geom.magnet_z / 2.0];
        let zc = geom.gap / 2.0 + geom.magnet_z / 2.0;
        let left = displacement - geom.magnet_x / 2.0;
        let right = displacement + geom.magnet_x / 2.0;
        let br = mat.remanence;
        Self {
            magnets: [
                CuboidMagnet::new([left, 0.0, zc], half, Polarity::Up, br),
                CuboidMagnet::new([right, 0.0, zc], half, Polarity::Down, br),
                CuboidMagnet::new([left, 0.0, -zc], half, Polarity::Up, br),
                CuboidMagnet::new([right, 0.0, -zc], half, Polarity::Down, br),
            ],
        }
    }

    /// Superposition of the four single-magnet fields.
    pub fn bz(&self, point: Point3) -> Result<f64, MagneticsError> {
        let mut sum = 0.0;
        for m in &self.magnets {
            sum += bz_cuboid(m, point)?;
        }
        Ok(sum)
    }
}
