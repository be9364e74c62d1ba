//! Time-domain simulation of the generator with a displacement-dependent
//! flux gradient, integrated with fixed-step fourth-order Runge–Kutta.

use std::f64::consts::PI;

use thiserror::Error;

use crate::dynamics::{ElectricalLink, OperatingPoint};
use crate::magnetics::FluxLinkageCurve;
use crate::numerics::Pchip;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransientError {
    #[error("invalid simulation setting: {0}")]
    InvalidConfig(&'static str),
    #[error("integration diverged at t = {time} s")]
    Diverged { time: f64 },
    #[error("flux curve cannot be interpolated")]
    BadCurve,
    #[error("waveform of {len} samples is not a whole number of {per_period}-sample periods")]
    IncompletePeriods { len: usize, per_period: usize },
    #[error("waveform has no component at the drive frequency")]
    ZeroFundamental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub steps_per_period: usize,
    pub periods_total: usize,
    pub periods_recorded: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { steps_per_period: 200, periods_total: 50, periods_recorded: 5 }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), TransientError> {
        if self.steps_per_period < 50 {
            return Err(TransientError::InvalidConfig("steps_per_period must be at least 50"));
        }
        if self.periods_recorded == 0 {
            return Err(TransientError::InvalidConfig("periods_recorded must be at least 1"));
        }
        if self.periods_recorded > self.periods_total {
            return Err(TransientError::InvalidConfig("periods_recorded exceeds periods_total"));
        }
        Ok(())
    }
}

/// Per-turn flux as a function of magnet displacement.
#[derive(Debug, Clone)]
pub enum FluxModel {
    /// Monotone cubic through sampled values, held flat beyond the samples.
    Curve { interpolant: Pchip, fitted_gradient: f64 },
    /// Linear flux, `gradient · x`.
    Constant(f64),
}

impl FluxModel {
    pub fn from_curve(curve: &FluxLinkageCurve) -> Result<Self, TransientError> {
        let interpolant = Pchip::new(curve.displacements.clone(), curve.flux_per_turn.clone())
            .ok_or(TransientError::BadCurve)?;
        Ok(FluxModel::Curve { interpolant, fitted_gradient: curve.fitted_gradient })
    }

    /// Line-fit counterpart of a sampled curve.
    pub fn linearised(curve: &FluxLinkageCurve) -> Self {
        FluxModel::Constant(curve.fitted_gradient)
    }

    pub fn flux(&self, x: f64) -> f64 {
        match self {
            FluxModel::Curve { interpolant, .. } => interpolant.value(x),
            FluxModel::Constant(g) => g * x,
        }
    }

    pub fn gradient(&self, x: f64) -> f64 {
        match self {
            FluxModel::Curve { interpolant, .. } => interpolant.derivative(x),
            FluxModel::Constant(g) => *g,
        }
    }

    /// Gradient of the best straight-line approximation.
    pub fn linear_gradient(&self) -> f64 {
        match self {
            FluxModel::Curve { fitted_gradient, .. } => *fitted_gradient,
            FluxModel::Constant(g) => *g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadCondition {
    /// Current flows through coil and load; the coil damps the motion.
    Loaded,
    /// No current; the recorded voltage is the open-circuit EMF.
    OpenCircuit,
}

/// Uniformly sampled steady-state waveforms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WaveformRecord {
    pub time: Vec<f64>,
    pub displacement: Vec<f64>,
    pub velocity: Vec<f64>,
    /// Total flux linkage `N φ(x)`, Wb-turns.
    pub flux_linkage: Vec<f64>,
    pub load_voltage: Vec<f64>,
    pub samples_per_period: usize,
}

impl WaveformRecord {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Mean of `V² / R_l` over the record.
    pub fn mean_load_power(&self, load_resistance: f64) -> f64 {
        mean_square(&self.load_voltage) / load_resistance
    }

    pub fn displacement_amplitude(&self) -> f64 {
        self.displacement.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

fn mean_square(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64
}

/// Integrates `m x″ + D_p x′ + k x = m a sin ωt − N φ′(x) i` with
/// `i = N φ′(x) x′ / (R_c + R_l)` and records the last periods.
///
/// `op.em_damping` is ignored: the coupling comes from `flux` and `link`.
/// The state starts on the steady-state solution of the linearised system,
/// which shortens the settling transient.
pub fn simulate(
    op: &OperatingPoint,
    link: &ElectricalLink,
    flux: &FluxModel,
    load: LoadCondition,
    cfg: &SimulationConfig,
) -> Result<WaveformRecord, TransientError> {
    cfg.validate()?;
    if !(op.mass > 0.0 && op.omega > 0.0) {
        return Err(TransientError::InvalidConfig("mass and drive frequency must be positive"));
    }
    let resistance = link.circuit_resistance();
    if load == LoadCondition::Loaded && !(resistance > 0.0) {
        return Err(TransientError::InvalidConfig("circuit resistance must be positive"));
    }
    let turns = link.turns as f64;
    let coupling = match load {
        LoadCondition::Loaded => turns * turns / resistance,
        LoadCondition::OpenCircuit => 0.0,
    };
    let (m, k, dp, w) = (op.mass, op.spring_constant, op.parasitic_damping, op.omega);
    let force = op.drive_force();

    let accel = |t: f64, x: f64, v: f64| {
        let g = flux.gradient(x);
        (force * (w * t).sin() - dp * v - k * x - coupling * g * g * v) / m
    };

    // linear steady state: x = A sin ωt + B cos ωt
    let g0 = flux.linear_gradient();
    let c = dp + coupling * g0 * g0;
    let re = k - m * w * w;
    let im = c * w;
    let den = re * re + im * im;
    let (mut x, mut v) = if den > 0.0 {
        let a = force * re / den;
        let b = -force * im / den;
        (b, a * w)
    } else {
        (0.0, 0.0)
    };

    let period = 2.0 * PI / w;
    let h = period / cfg.steps_per_period as f64;
    let total = cfg.periods_total * cfg.steps_per_period;
    let start = (cfg.periods_total - cfg.periods_recorded) * cfg.steps_per_period;
    let share = match load {
        LoadCondition::Loaded => link.load_share(),
        LoadCondition::OpenCircuit => 1.0,
    };
    let mut rec = WaveformRecord { samples_per_period: cfg.steps_per_period, ..Default::default() };
    for step in 0..=total {
        let t = step as f64 * h;
        if !(x.is_finite() && v.is_finite()) {
            return Err(TransientError::Diverged { time: t });
        }
        if step >= start && step < total {
            rec.time.push(t);
            rec.displacement.push(x);
            rec.velocity.push(v);
            rec.flux_linkage.push(turns * flux.flux(x));
            rec.load_voltage.push(turns * flux.gradient(x) * v * share);
        }
        if step == total {
            break;
        }
        let (k1x, k1v) = (v, accel(t, x, v));
        let (k2x, k2v) = (v + 0.5 * h * k1v, accel(t + 0.5 * h, x + 0.5 * h * k1x, v + 0.5 * h * k1v));
        let (k3x, k3v) = (v + 0.5 * h * k2v, accel(t + 0.5 * h, x + 0.5 * h * k2x, v + 0.5 * h * k2v));
        let (k4x, k4v) = (v + h * k3v, accel(t + h, x + h * k3x, v + h * k3v));
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    Ok(rec)
}

/// RMS of harmonics 2, 3, … up to the Nyquist limit relative to the
/// fundamental, from the DFT over a whole number of drive periods.
pub fn harmonic_distortion(samples: &[f64], samples_per_period: usize) -> Result<f64, TransientError> {
    let n = samples.len();
    if samples_per_period < 2 || n == 0 || n % samples_per_period != 0 {
        return Err(TransientError::IncompletePeriods { len: n, per_period: samples_per_period });
    }
    let periods = n / samples_per_period;
    let magnitude = |harmonic: usize| {
        let step = 2.0 * PI * (harmonic * periods) as f64 / n as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, s) in samples.iter().enumerate() {
            let phase = step * i as f64;
            re += s * phase.cos();
            im -= s * phase.sin();
        }
        re.hypot(im)
    };
    let fundamental = magnitude(1);
    let scale = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if !(fundamental > 1e-12 * scale * n as f64) {
        return Err(TransientError::ZeroFundamental);
    }
    let rest: f64 = (2..=samples_per_period / 2).map(|h| magnitude(h).powi(2)).sum();
    Ok(rest.sqrt() / fundamental)
}
