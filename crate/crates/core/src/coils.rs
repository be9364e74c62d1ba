//! Resistance and turn-count limits for wire-wound and single-layer
//! micro-fabricated coils. Inductance is neglected throughout.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoilError {
    #[error("coil dimension `{name}` is invalid: {value}")]
    InvalidDimension { name: &'static str, value: f64 },
    #[error("coil needs at least one turn")]
    NoTurns,
    #[error("wire diameter {diameter} m is below the minimum {minimum} m")]
    WireTooThin { diameter: f64, minimum: f64 },
    #[error("track width {width} m is below the minimum feature {minimum} m")]
    TrackTooNarrow { width: f64, minimum: f64 },
    #[error("coil cross-section cannot hold a single turn at this technology limit")]
    CannotFitOneTurn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoilTechnology {
    WireWound,
    MicroFabricated,
}

impl CoilTechnology {
    pub fn label(self) -> &'static str {
        match self {
            CoilTechnology::WireWound => "wirewound",
            CoilTechnology::MicroFabricated => "micro",
        }
    }
}

/// Smallest manufacturable conductor for each technology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TechnologyLimits {
    pub min_wire_diameter: f64,
    pub min_feature: f64,
}

impl Default for TechnologyLimits {
    fn default() -> Self {
        Self { min_wire_diameter: 12e-6, min_feature: 1e-6 }
    }
}

/// Multilayer circular coil of rectangular winding cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireWoundCoil {
    pub r_inner: f64,
    pub r_outer: f64,
    pub thickness: f64,
    pub turns: u64,
    pub fill_factor: f64,
    pub resistivity: f64,
}

impl WireWoundCoil {
    pub fn cross_section(&self) -> f64 {
        (self.r_outer - self.r_inner) * self.thickness
    }

    /// Bare conductor diameter implied by the fill factor and turn count.
    pub fn wire_diameter(&self) -> f64 {
        2.0 * (self.fill_factor * self.cross_section() / (PI * self.turns as f64)).sqrt()
    }

    fn check_shape(&self) -> Result<(), CoilError> {
        if !(self.r_inner > 0.0) {
            return Err(CoilError::InvalidDimension { name: "r_inner", value: self.r_inner });
        }
        if !(self.r_outer > self.r_inner) {
            return Err(CoilError::InvalidDimension { name: "r_outer", value: self.r_outer });
        }
        if !(self.thickness > 0.0) {
            return Err(CoilError::InvalidDimension { name: "thickness", value: self.thickness });
        }
        if !(self.fill_factor > 0.0 && self.fill_factor <= 1.0) {
            return Err(CoilError::InvalidDimension { name: "fill_factor", value: self.fill_factor });
        }
        if !(self.resistivity > 0.0) {
            return Err(CoilError::InvalidDimension { name: "resistivity", value: self.resistivity });
        }
        Ok(())
    }

    pub fn validate(&self, limits: &TechnologyLimits) -> Result<(), CoilError> {
        self.check_shape()?;
        if self.turns == 0 {
            return Err(CoilError::NoTurns);
        }
        let diameter = self.wire_diameter();
        if diameter < limits.min_wire_diameter * (1.0 - 1e-12) {
            return Err(CoilError::WireTooThin { diameter, minimum: limits.min_wire_diameter });
        }
        Ok(())
    }

    /// Resistance per turn squared, R_c / N².
    pub fn resistance_per_turn_squared(&self) -> f64 {
        self.resistivity * PI * (self.r_outer + self.r_inner)
            / (self.fill_factor * (self.r_outer - self.r_inner) * self.thickness)
    }
}

/// `R_c = ρ N² π (r_o + r_i) / (k_cu (r_o − r_i) t)`.
pub fn wirewound_resistance(coil: &WireWoundCoil, limits: &TechnologyLimits) -> Result<f64, CoilError> {
    coil.validate(limits)?;
    let n = coil.turns as f64;
    Ok(coil.resistance_per_turn_squared() * n * n)
}

/// Largest turn count whose wire is no thinner than the minimum diameter.
pub fn max_turns_wirewound(
    cross_section: f64,
    fill_factor: f64,
    limits: &TechnologyLimits,
) -> Result<u64, CoilError> {
    if !(cross_section > 0.0) {
        return Err(CoilError::InvalidDimension { name: "cross_section", value: cross_section });
    }
    let wire_area = PI * (limits.min_wire_diameter / 2.0).powi(2);
    let fits = |n: u64| fill_factor * cross_section / n as f64 >= wire_area * (1.0 - 1e-12);
    let estimate = fill_factor * cross_section / wire_area;
    if !estimate.is_finite() || estimate < 0.5 {
        return Err(CoilError::CannotFitOneTurn);
    }
    largest_satisfying(estimate, fits)
}

/// Single-layer planar square spiral with equal track width, spacing and thickness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroCoil {
    pub d_outer: f64,
    pub d_inner: f64,
    pub turns: u64,
    pub resistivity: f64,
}

impl MicroCoil {
    /// Track width (= spacing = thickness) that packs `turns` into the annulus.
    pub fn track_width(&self) -> f64 {
        (self.d_outer - self.d_inner) / (2.0 * (2.0 * self.turns as f64 - 1.0))
    }

    pub fn validate(&self, limits: &TechnologyLimits) -> Result<(), CoilError> {
        if !(self.d_inner > 0.0) {
            return Err(CoilError::InvalidDimension { name: "d_inner", value: self.d_inner });
        }
        if !(self.d_outer > self.d_inner) {
            return Err(CoilError::InvalidDimension { name: "d_outer", value: self.d_outer });
        }
        if !(self.resistivity > 0.0) {
            return Err(CoilError::InvalidDimension { name: "resistivity", value: self.resistivity });
        }
        if self.turns == 0 {
            return Err(CoilError::NoTurns);
        }
        let width = self.track_width();
        if width < limits.min_feature * (1.0 - 1e-12) {
            return Err(CoilError::TrackTooNarrow { width, minimum: limits.min_feature });
        }
        Ok(())
    }

    /// R_c / (4N³ − 4N² + N).
    pub fn resistance_per_turn_polynomial(&self) -> f64 {
        8.0 * self.resistivity * (self.d_outer + self.d_inner) / (self.d_outer - self.d_inner).powi(2)
    }
}

/// `4N³ − 4N² + N`, equal to `N (2N − 1)²`.
pub fn micro_turn_polynomial(turns: u64) -> f64 {
    let n = turns as f64;
    4.0 * n * n * n - 4.0 * n * n + n
}

/// `R_c = 8ρ (d_o + d_i) / (d_o − d_i)² · (4N³ − 4N² + N)`.
pub fn microcoil_resistance(coil: &MicroCoil, limits: &TechnologyLimits) -> Result<f64, CoilError> {
    coil.validate(limits)?;
    Ok(coil.resistance_per_turn_polynomial() * micro_turn_polynomial(coil.turns))
}

/// Largest turn count whose track is no narrower than the minimum feature.
pub fn max_turns_microcoil(d_outer: f64, d_inner: f64, limits: &TechnologyLimits) -> Result<u64, CoilError> {
    let span = d_outer - d_inner;
    if !(span > 0.0) {
        return Err(CoilError::InvalidDimension { name: "d_outer", value: d_outer });
    }
    let fits = |n: u64| span / (2.0 * (2.0 * n as f64 - 1.0)) >= limits.min_feature * (1.0 - 1e-12);
    if !fits(1) {
        return Err(CoilError::CannotFitOneTurn);
    }
    largest_satisfying((span / (2.0 * limits.min_feature) + 1.0) / 2.0, fits)
}

// Corrects a floating-point estimate of the largest n with fits(n).
fn largest_satisfying(estimate: f64, fits: impl Fn(u64) -> bool) -> Result<u64, CoilError> {
    let mut n = estimate.floor().max(1.0) as u64;
    while n > 0 && !fits(n) {
        n -= 1;
    }
    while fits(n + 1) {
        n += 1;
    }
    if n == 0 {
        Err(CoilError::CannotFitOneTurn)
    } else {
        Ok(n)
    }
}

/// Electrical view of a coil as seen by the damping model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoilElectrical {
    pub resistance: f64,
    /// Always zero here; kept so the damping expression keeps its general form.
    pub inductance: f64,
    pub turns: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn wire(turns: u64) -> WireWoundCoil {
        WireWoundCoil {
            r_inner: 1e-3,
            r_outer: 2e-3,
            thickness: 0.5e-3,
            turns,
            fill_factor: 0.55,
            resistivity: 1.7e-8,
        }
    }

    fn micro(turns: u64) -> MicroCoil {
        MicroCoil { d_outer: 4e-3, d_inner: 1e-3, turns, resistivity: 1.72e-8 }
    }

    #[test]
    fn wirewound_reference_value() {
        let limits = TechnologyLimits::default();
        let r = wirewound_resistance(&wire(100), &limits).unwrap();
        assert_relative_eq!(r, 5.826_226_375_748_344, max_relative = 1e-12);
        // ρ N L_MT / A_wire with L_MT = π (r_o + r_i) and A_wire = k A_coil / N
        let c = wire(100);
        let a_wire = c.fill_factor * c.cross_section() / 100.0;
        let alt = c.resistivity * 100.0 * PI * (c.r_outer + c.r_inner) / a_wire;
        assert_relative_eq!(r, alt, max_relative = 1e-12);
    }

    #[test]
    fn wirewound_quadruples_when_turns_double() {
        let limits = TechnologyLimits::default();
        let r1 = wirewound_resistance(&wire(100), &limits).unwrap();
        let r2 = wirewound_resistance(&wire(200), &limits).unwrap();
        assert_relative_eq!(r2 / r1, 4.0, max_relative = 1e-14);
    }

    #[test]
    fn wire_below_minimum_diameter_is_rejected() {
        let limits = TechnologyLimits::default();
        assert!(matches!(
            wirewound_resistance(&wire(10_000), &limits),
            Err(CoilError::WireTooThin { .. })
        ));
        assert!(matches!(wirewound_resistance(&wire(0), &limits), Err(CoilError::NoTurns)));
    }

    #[test]
    fn micro_single_turn_and_identity() {
        let limits = TechnologyLimits::default();
        let c = micro(1);
        let r = microcoil_resistance(&c, &limits).unwrap();
        assert_relative_eq!(
            r,
            8.0 * c.resistivity * (c.d_outer + c.d_inner) / (c.d_outer - c.d_inner).powi(2),
            max_relative = 1e-15
        );
        for n in [1, 2, 7, 50, 333] {
            let c = micro(n);
            let w = c.track_width();
            let geometric = c.resistivity * n as f64 * 2.0 * (c.d_outer + c.d_inner) / (w * w);
            assert_relative_eq!(microcoil_resistance(&c, &limits).unwrap(), geometric, max_relative = 1e-12);
            let nf = n as f64;
            assert_relative_eq!(nf * (2.0 * nf - 1.0).powi(2), micro_turn_polynomial(n), max_relative = 1e-15);
        }
    }

    #[test]
    fn micro_approaches_cubic_law() {
        let limits = TechnologyLimits::default();
        let r = |n| microcoil_resistance(&micro(n), &limits).unwrap();
        assert!((r(200) / r(100) - 8.0).abs() < 0.08);
        assert!((r(700) / r(350) / 8.0 - 1.0).abs() < 0.01);
        assert!(matches!(
            microcoil_resistance(&micro(2000), &limits),
            Err(CoilError::TrackTooNarrow { .. })
        ));
    }

    #[test]
    fn wirewound_turn_limit() {
        let limits = TechnologyLimits::default();
        assert_eq!(max_turns_wirewound(0.5e-6, 0.55, &limits).unwrap(), 2431);
        let n1 = max_turns_wirewound(0.37e-6, 0.55, &limits).unwrap();
        let n2 = max_turns_wirewound(0.74e-6, 0.55, &limits).unwrap();
        assert!((n2 as i64 - 2 * n1 as i64).abs() <= 1);
        let huge = TechnologyLimits { min_wire_diameter: 1.0, ..limits };
        assert!(matches!(max_turns_wirewound(0.5e-6, 0.55, &huge), Err(CoilError::CannotFitOneTurn)));
    }

    #[test]
    fn micro_turn_limit() {
        let limits = TechnologyLimits::default();
        assert_eq!(max_turns_microcoil(3e-3, 1e-3, &limits).unwrap(), 500);
        assert_eq!(max_turns_microcoil(2e-6 + 1e-3, 1e-3, &limits).unwrap(), 1);
        let a = max_turns_microcoil(1.8e-3, 1e-3, &limits).unwrap();
        let b = max_turns_microcoil(1.4e-3, 1e-3, &limits).unwrap();
        assert!((a as i64 - 2 * b as i64).abs() <= 1);
        assert!(matches!(max_turns_microcoil(1e-3 + 1e-6, 1e-3, &limits), Err(CoilError::CannotFitOneTurn)));
        // the limit itself is buildable, one more is not
        let c = MicroCoil { d_outer: 3e-3, d_inner: 1e-3, turns: 500, resistivity: 1.72e-8 };
        assert!(c.validate(&limits).is_ok());
        assert!(MicroCoil { turns: 501, ..c }.validate(&limits).is_err());
    }

    proptest! {
        #[test]
        fn resistances_increase_with_turns(n in 1u64..400) {
            let limits = TechnologyLimits { min_wire_diameter: 1e-9, min_feature: 1e-9 };
            let w = |n| wirewound_resistance(&wire(n), &limits).unwrap();
            let m = |n| microcoil_resistance(&micro(n), &limits).unwrap();
            prop_assert!(w(n + 1) > w(n));
            prop_assert!(m(n + 1) > m(n));
            prop_assert!((w(n) / (n * n) as f64 - wire(1).resistance_per_turn_squared()).abs()
                <= 1e-12 * wire(1).resistance_per_turn_squared());
            prop_assert!((m(n) / micro_turn_polynomial(n) - micro(1).resistance_per_turn_polynomial()).abs()
                <= 1e-12 * micro(1).resistance_per_turn_polynomial());
        }

        #[test]
        fn resistances_scale_inversely_with_size(b in 1.5f64..20.0, n in 1u64..50) {
            let limits = TechnologyLimits { min_wire_diameter: 1e-12, min_feature: 1e-12 };
            let c = wire(n);
            let small = WireWoundCoil {
                r_inner: c.r_inner / b, r_outer: c.r_outer / b, thickness: c.thickness / b, ..c
            };
            let ratio = wirewound_resistance(&small, &limits).unwrap() / wirewound_resistance(&c, &limits).unwrap();
            prop_assert!((ratio / b - 1.0).abs() < 1e-12);
            let m = micro(n);
            let ms = MicroCoil { d_outer: m.d_outer / b, d_inner: m.d_inner / b, ..m };
            let ratio = microcoil_resistance(&ms, &limits).unwrap() / microcoil_resistance(&m, &limits).unwrap();
            prop_assert!((ratio / b - 1.0).abs() < 1e-12);
        }
    }
}
