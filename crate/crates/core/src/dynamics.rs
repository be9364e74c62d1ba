//! Linear mass-spring-damper generator driven by a sinusoidal base
//! acceleration, with the coil circuit appearing as an extra viscous damper.

use std::f64::consts::SQRT_2;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("quality factor must be positive, got {0}")]
    NonPositiveQ(f64),
    #[error("parasitic damping must be positive, got {0}")]
    NonPositiveDamping(f64),
    #[error("total circuit resistance is zero")]
    ShortedCircuit,
    #[error("coil inductance {0} H is not supported; the damping model is purely resistive")]
    ReactiveCoil(f64),
    #[error("response is unbounded: undamped system driven at resonance")]
    UnboundedResponse,
    #[error("argument `{name}` is invalid: {value}")]
    InvalidArgument { name: &'static str, value: f64 },
}

/// Mechanical state of the resonator at one drive condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    /// kg
    pub mass: f64,
    /// N/m
    pub spring_constant: f64,
    /// Drive angular frequency, rad/s.
    pub omega: f64,
    /// Peak base acceleration, m/s².
    pub acceleration: f64,
    /// N·s/m
    pub parasitic_damping: f64,
    /// N·s/m
    pub em_damping: f64,
}

impl OperatingPoint {
    /// Spring tuned so the natural frequency equals the drive frequency.
    pub fn at_resonance(mass: f64, omega: f64, acceleration: f64, parasitic_damping: f64, em_damping: f64) -> Self {
        Self {
            mass,
            spring_constant: mass * omega * omega,
            omega,
            acceleration,
            parasitic_damping,
            em_damping,
        }
    }

    pub fn natural_frequency(&self) -> f64 {
        (self.spring_constant / self.mass).sqrt()
    }

    /// Peak drive force `m a`.
    pub fn drive_force(&self) -> f64 {
        self.mass * self.acceleration
    }

    pub fn total_damping(&self) -> f64 {
        self.parasitic_damping + self.em_damping
    }

    fn denominator_squared(&self) -> Result<f64, DynamicsError> {
        let detune = self.spring_constant - self.mass * self.omega * self.omega;
        let damp = self.total_damping() * self.omega;
        let den = detune * detune + damp * damp;
        if den == 0.0 {
            return Err(DynamicsError::UnboundedResponse);
        }
        Ok(den)
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        for (name, value) in [
            ("mass", self.mass),
            ("spring_constant", self.spring_constant),
            ("omega", self.omega),
            ("acceleration", self.acceleration),
            ("parasitic_damping", self.parasitic_damping),
            ("em_damping", self.em_damping),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(DynamicsError::InvalidArgument { name, value });
            }
        }
        Ok(())
    }
}

/// Coil and load as seen by the mechanical side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalLink {
    pub turns: u64,
    /// Average flux-linkage gradient per turn, Wb/m.
    pub flux_gradient: f64,
    pub coil_resistance: f64,
    pub coil_inductance: f64,
    pub load_resistance: f64,
}

impl ElectricalLink {
    pub fn resistive(turns: u64, flux_gradient: f64, coil_resistance: f64, load_resistance: f64) -> Self {
        Self { turns, flux_gradient, coil_resistance, coil_inductance: 0.0, load_resistance }
    }

    /// Transduction constant `N dφ/dx` in V·s/m.
    pub fn transduction(&self) -> f64 {
        self.turns as f64 * self.flux_gradient
    }

    pub fn circuit_resistance(&self) -> f64 {
        self.coil_resistance + self.load_resistance
    }

    /// Fraction of the extracted power dissipated in the load.
    pub fn load_share(&self) -> f64 {
        self.load_resistance / self.circuit_resistance()
    }
}

/// `D_p = m ω_n / Q_oc`.
pub fn parasitic_damping_from_q(mass: f64, omega_n: f64, q_oc: f64) -> Result<f64, DynamicsError> {
    if !(q_oc > 0.0) {
        return Err(DynamicsError::NonPositiveQ(q_oc));
    }
    Ok(mass * omega_n / q_oc)
}

/// Inverse of [`parasitic_damping_from_q`].
pub fn q_from_parasitic_damping(mass: f64, omega_n: f64, parasitic_damping: f64) -> Result<f64, DynamicsError> {
    if !(parasitic_damping > 0.0) {
        return Err(DynamicsError::NonPositiveDamping(parasitic_damping));
    }
    Ok(mass * omega_n / parasitic_damping)
}

/// `D_e = N² (dφ/dx)² / (R_c + R_l)`.
pub fn em_damping(link: &ElectricalLink) -> Result<f64, DynamicsError> {
    if link.coil_inductance != 0.0 {
        return Err(DynamicsError::ReactiveCoil(link.coil_inductance));
    }
    let r = link.circuit_resistance();
    if r == 0.0 {
        return Err(DynamicsError::ShortedCircuit);
    }
    let t = link.transduction();
    Ok(t * t / r)
}

/// Steady-state displacement amplitude.
pub fn displacement_amplitude(op: &OperatingPoint) -> Result<f64, DynamicsError> {
    op.validate()?;
    Ok(op.drive_force() / op.denominator_squared()?.sqrt())
}

/// Steady-state velocity amplitude, `ω` times the displacement amplitude.
pub fn velocity_amplitude(op: &OperatingPoint) -> Result<f64, DynamicsError> {
    Ok(op.omega * displacement_amplitude(op)?)
}

/// Average electrical power extracted through the EM damper (coil plus load).
pub fn average_power(op: &OperatingPoint) -> Result<f64, DynamicsError> {
    op.validate()?;
    let f = op.drive_force();
    Ok(op.em_damping * f * f * op.omega * op.omega / (2.0 * op.denominator_squared()?))
}

/// Extracted power when driven exactly at resonance.
pub fn resonant_power(drive_force: f64, parasitic_damping: f64, em_damping: f64) -> Result<f64, DynamicsError> {
    let total = parasitic_damping + em_damping;
    if !(total > 0.0) {
        return Err(DynamicsError::UnboundedResponse);
    }
    Ok(em_damping * drive_force * drive_force / (2.0 * total * total))
}

/// Upper bound on extracted power, reached when `D_e = D_p`: `(m a)² / (8 D_p)`.
pub fn max_power(mass: f64, acceleration: f64, parasitic_damping: f64) -> Result<f64, DynamicsError> {
    if !(parasitic_damping > 0.0) {
        return Err(DynamicsError::NonPositiveDamping(parasitic_damping));
    }
    let f = mass * acceleration;
    Ok(f * f / (8.0 * parasitic_damping))
}

/// Same bound expressed through the open-circuit quality factor: `m a² Q / (8 ω_n)`.
pub fn max_power_from_q(mass: f64, acceleration: f64, omega_n: f64, q_oc: f64) -> Result<f64, DynamicsError> {
    if !(q_oc > 0.0) {
        return Err(DynamicsError::NonPositiveQ(q_oc));
    }
    Ok(mass * acceleration * acceleration * q_oc / (8.0 * omega_n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadOutput {
    /// Average power in the load, W.
    pub power: f64,
    /// RMS load voltage, V.
    pub voltage_rms: f64,
}

/// Splits the extracted power between coil and load and computes the load voltage.
pub fn load_power_and_voltage(
    extracted_power: f64,
    link: &ElectricalLink,
    velocity_amplitude: f64,
) -> Result<LoadOutput, DynamicsError> {
    if !(extracted_power >= 0.0) {
        return Err(DynamicsError::InvalidArgument { name: "extracted_power", value: extracted_power });
    }
    let r = link.circuit_resistance();
    if r == 0.0 {
        return Err(DynamicsError::ShortedCircuit);
    }
    let share = link.load_resistance / r;
    let emf_rms = link.transduction() * velocity_amplitude / SQRT_2;
    Ok(LoadOutput { power: extracted_power * share, voltage_rms: emf_rms * share })
}

/// Open-circuit Q for which the unloaded resonant amplitude `a Q / ω_n²` is `2 x_m`.
pub fn required_q_for_displacement(x_m: f64, omega_n: f64, acceleration: f64) -> Result<f64, DynamicsError> {
    if !(acceleration > 0.0) {
        return Err(DynamicsError::InvalidArgument { name: "acceleration", value: acceleration });
    }
    Ok(2.0 * x_m * omega_n * omega_n / acceleration)
}
