//! Turn-count and load-resistance selection.
//!
//! For every admissible turn count two loads are tried: the one that makes the
//! electromagnetic damping equal the parasitic damping, and the one equal to
//! the coil resistance. A candidate that would let the mass travel further
//! than the housing allows is pushed to heavier damping, or dropped if that
//! needs more damping than the parasitic level or a load below the minimum.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::coils::{
    max_turns_microcoil, max_turns_wirewound, micro_turn_polynomial, CoilError, CoilTechnology, MicroCoil,
    TechnologyLimits, WireWoundCoil,
};
use crate::dynamics::{
    self, max_power_from_q, parasitic_damping_from_q, required_q_for_displacement, DynamicsError,
    ElectricalLink, OperatingPoint,
};
use crate::geometry::{derive_geometry, moving_mass, DeviceGeometry, GeometryError, GeometryRatios, MaterialProps};
use crate::magnetics::{flux_linkage_curve, CoilFootprint, CurveOptions, FluxLinkageCurve, MagneticsError};

/// Turn counts above this are not enumerated one by one.
pub const EXHAUSTIVE_TURN_LIMIT: u64 = 100_000;
/// Relative tolerance on the displacement and damping constraints.
const CONSTRAINT_TOL: f64 = 1e-9;
/// Relative difference in load power below which candidates count as tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Magnetics(#[from] MagneticsError),
    #[error(transparent)]
    Coil(#[from] CoilError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("no turn count gives a feasible {} design at d = {d} m", technology.label())]
    NoFeasibleDesign { d: f64, technology: CoilTechnology },
    #[error("parameter `{name}` is invalid: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

/// Sinusoidal base excitation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    /// Hz
    pub frequency: f64,
    /// Peak acceleration, m/s².
    pub acceleration: f64,
}

impl Default for Drive {
    fn default() -> Self {
        Self { frequency: 1000.0, acceleration: 9.81 }
    }
}

impl Drive {
    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency
    }
}

/// How the open-circuit quality factor is chosen for each device size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QMode {
    /// Q at which the unloaded resonant amplitude is twice the allowed travel.
    DisplacementRule,
    Fixed(f64),
}

impl QMode {
    pub fn label(&self) -> String {
        match self {
            QMode::DisplacementRule => "displacement-rule".to_string(),
            QMode::Fixed(q) => format!("fixed-{q}"),
        }
    }

    pub fn quality_factor(&self, geom: &DeviceGeometry, drive: &Drive) -> Result<f64, OptimizerError> {
        match *self {
            QMode::DisplacementRule => Ok(required_q_for_displacement(geom.x_m, drive.omega(), drive.acceleration)?),
            QMode::Fixed(q) if q > 0.0 && q.is_finite() => Ok(q),
            QMode::Fixed(q) => Err(OptimizerError::InvalidParameter { name: "q", value: q }),
        }
    }
}

/// Coil lateral extent as fractions of the device dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoilLayout {
    pub wire_inner_radius: f64,
    pub wire_outer_radius: f64,
    pub micro_inner_side: f64,
    pub micro_outer_side: f64,
}

impl Default for CoilLayout {
    fn default() -> Self {
        Self { wire_inner_radius: 0.10, wire_outer_radius: 0.45, micro_inner_side: 0.2, micro_outer_side: 0.9 }
    }
}

impl CoilLayout {
    pub fn footprint(&self, technology: CoilTechnology, d: f64) -> CoilFootprint {
        match technology {
            CoilTechnology::WireWound => CoilFootprint::Circular {
                r_inner: self.wire_inner_radius * d,
                r_outer: self.wire_outer_radius * d,
            },
            CoilTechnology::MicroFabricated => CoilFootprint::Square {
                side_inner: self.micro_inner_side * d,
                side_outer: self.micro_outer_side * d,
            },
        }
    }
}

/// Everything except the device dimension, technology and Q mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepTemplate {
    pub ratios: GeometryRatios,
    pub materials: MaterialProps,
    pub drive: Drive,
    pub limits: TechnologyLimits,
    pub layout: CoilLayout,
    pub curve: CurveOptions,
    /// Smallest load resistance considered, Ω.
    pub min_load_resistance: f64,
}

impl Default for SweepTemplate {
    fn default() -> Self {
        Self {
            ratios: GeometryRatios::default(),
            materials: MaterialProps::default(),
            drive: Drive::default(),
            limits: TechnologyLimits::default(),
            layout: CoilLayout::default(),
            curve: CurveOptions::default(),
            min_load_resistance: 0.1,
        }
    }
}

impl SweepTemplate {
    pub fn geometry(&self, d: f64) -> Result<DeviceGeometry, OptimizerError> {
        Ok(derive_geometry(d, &self.ratios)?)
    }

    /// Flux-linkage curve for the coil of `technology` in a device of size `d`.
    pub fn flux_curve(&self, d: f64, technology: CoilTechnology) -> Result<FluxLinkageCurve, OptimizerError> {
        let geom = self.geometry(d)?;
        let footprint = self.layout.footprint(technology, d);
        Ok(flux_linkage_curve(&geom, &self.materials, &footprint, &self.curve)?)
    }

    /// Builds a problem, computing the flux gradient from the magnet model.
    pub fn problem(&self, d: f64, technology: CoilTechnology, q_mode: QMode) -> Result<DesignProblem, OptimizerError> {
        let gradient = self.flux_curve(d, technology)?.fitted_gradient.abs();
        self.problem_with_gradient(d, technology, q_mode, gradient)
    }

    pub fn problem_with_gradient(
        &self,
        d: f64,
        technology: CoilTechnology,
        q_mode: QMode,
        flux_gradient: f64,
    ) -> Result<DesignProblem, OptimizerError> {
        let geometry = self.geometry(d)?;
        self.materials.validate()?;
        let q_oc = q_mode.quality_factor(&geometry, &self.drive)?;
        Ok(DesignProblem {
            geometry,
            materials: self.materials,
            technology,
            flux_gradient,
            q_oc,
            drive: self.drive,
            limits: self.limits,
            layout: self.layout,
            min_load_resistance: self.min_load_resistance,
            turn_cap: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignProblem {
    pub geometry: DeviceGeometry,
    pub materials: MaterialProps,
    pub technology: CoilTechnology,
    /// Average flux-linkage gradient per turn, Wb/m.
    pub flux_gradient: f64,
    pub q_oc: f64,
    pub drive: Drive,
    pub limits: TechnologyLimits,
    pub layout: CoilLayout,
    pub min_load_resistance: f64,
    /// Optional extra ceiling on the turn count.
    pub turn_cap: Option<u64>,
}

/// Coil resistance as a function of turn count for one coil outline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoilModel {
    /// `R_c = unit · N²`
    WireWound { unit: f64, max_turns: u64 },
    /// `R_c = unit · (4N³ − 4N² + N)`
    Micro { unit: f64, max_turns: u64 },
}

impl CoilModel {
    pub fn resistance(&self, turns: u64) -> f64 {
        match *self {
            CoilModel::WireWound { unit, .. } => unit * (turns as f64).powi(2),
            CoilModel::Micro { unit, .. } => unit * micro_turn_polynomial(turns),
        }
    }

    pub fn max_turns(&self) -> u64 {
        match *self {
            CoilModel::WireWound { max_turns, .. } | CoilModel::Micro { max_turns, .. } => max_turns,
        }
    }
}

impl DesignProblem {
    pub fn mass(&self) -> f64 {
        moving_mass(&self.geometry, &self.materials)
    }

    pub fn parasitic_damping(&self) -> Result<f64, OptimizerError> {
        Ok(parasitic_damping_from_q(self.mass(), self.drive.omega(), self.q_oc)?)
    }

    pub fn max_power(&self) -> Result<f64, OptimizerError> {
        Ok(max_power_from_q(self.mass(), self.drive.acceleration, self.drive.omega(), self.q_oc)?)
    }

    pub fn coil_model(&self) -> Result<CoilModel, OptimizerError> {
        let d = self.geometry.d;
        let rho = self.materials.conductor_resistivity;
        let model = match self.technology {
            CoilTechnology::WireWound => {
                let coil = WireWoundCoil {
                    r_inner: self.layout.wire_inner_radius * d,
                    r_outer: self.layout.wire_outer_radius * d,
                    thickness: self.geometry.coil_thickness,
                    turns: 1,
                    fill_factor: self.materials.copper_fill_factor,
                    resistivity: rho,
                };
                let max_turns = max_turns_wirewound(coil.cross_section(), coil.fill_factor, &self.limits)?;
                CoilModel::WireWound { unit: coil.resistance_per_turn_squared(), max_turns }
            }
            CoilTechnology::MicroFabricated => {
                let coil = MicroCoil {
                    d_outer: self.layout.micro_outer_side * d,
                    d_inner: self.layout.micro_inner_side * d,
                    turns: 1,
                    resistivity: rho,
                };
                let max_turns = max_turns_microcoil(coil.d_outer, coil.d_inner, &self.limits)?;
                CoilModel::Micro { unit: coil.resistance_per_turn_polynomial(), max_turns }
            }
        };
        Ok(match (model, self.turn_cap) {
            (CoilModel::WireWound { unit, max_turns }, Some(cap)) => {
                CoilModel::WireWound { unit, max_turns: max_turns.min(cap) }
            }
            (CoilModel::Micro { unit, max_turns }, Some(cap)) => CoilModel::Micro { unit, max_turns: max_turns.min(cap) },
            (m, None) => m,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    MatchedDamping,
    ImpedanceMatched,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::MatchedDamping => "matched-damping",
            Strategy::ImpedanceMatched => "impedance-matched",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignResult {
    pub strategy: Strategy,
    pub turns: u64,
    pub load_resistance: f64,
    pub coil_resistance: f64,
    pub em_damping: f64,
    pub parasitic_damping: f64,
    /// Steady-state displacement amplitude, m.
    pub displacement: f64,
    pub max_power: f64,
    pub extracted_power: f64,
    pub load_power: f64,
    pub load_voltage_rms: f64,
}

/// Load that makes the electromagnetic damping equal `parasitic_damping`,
/// or `None` when it would fall below `min_load`.
pub fn solve_matched_load(
    turns: u64,
    flux_gradient: f64,
    parasitic_damping: f64,
    coil_resistance: f64,
    min_load: f64,
) -> Option<f64> {
    let coupling = (turns as f64 * flux_gradient).powi(2);
    let load = coupling / parasitic_damping - coil_resistance;
    (load >= min_load).then_some(load)
}

struct Evaluator {
    mass: f64,
    omega: f64,
    acceleration: f64,
    parasitic_damping: f64,
    x_m: f64,
    gradient: f64,
    max_power: f64,
    min_load: f64,
}

impl Evaluator {
    fn result(&self, strategy: Strategy, turns: u64, coil: f64, load: f64) -> Result<DesignResult, OptimizerError> {
        let link = ElectricalLink::resistive(turns, self.gradient, coil, load);
        let em = dynamics::em_damping(&link)?;
        let op = OperatingPoint::at_resonance(self.mass, self.omega, self.acceleration, self.parasitic_damping, em);
        let displacement = dynamics::displacement_amplitude(&op)?;
        let extracted = dynamics::average_power(&op)?;
        let out = dynamics::load_power_and_voltage(extracted, &link, self.omega * displacement)?;
        let strategy = if (em / self.parasitic_damping - 1.0).abs() <= CONSTRAINT_TOL {
            Strategy::MatchedDamping
        } else {
            strategy
        };
        Ok(DesignResult {
            strategy,
            turns,
            load_resistance: load,
            coil_resistance: coil,
            em_damping: em,
            parasitic_damping: self.parasitic_damping,
            displacement,
            max_power: self.max_power,
            extracted_power: extracted,
            load_power: out.power,
            load_voltage_rms: out.voltage_rms,
        })
    }

    // Applies the travel limit, lowering the load if the mass would overshoot.
    fn constrained(
        &self,
        strategy: Strategy,
        turns: u64,
        coil: f64,
        load: f64,
    ) -> Result<Option<DesignResult>, OptimizerError> {
        let r = self.result(strategy, turns, coil, load)?;
        if r.em_damping > self.parasitic_damping * (1.0 + CONSTRAINT_TOL) {
            return Ok(None);
        }
        if r.displacement <= self.x_m * (1.0 + CONSTRAINT_TOL) {
            return Ok(Some(r));
        }
        let needed = self.mass * self.acceleration / (self.omega * self.x_m) - self.parasitic_damping;
        if needed > self.parasitic_damping * (1.0 + CONSTRAINT_TOL) {
            return Ok(None);
        }
        let coupling = (turns as f64 * self.gradient).powi(2);
        let load = coupling / needed - coil;
        if !(load >= self.min_load) {
            return Ok(None);
        }
        Ok(Some(self.result(strategy, turns, coil, load)?))
    }
}

fn better(candidate: &DesignResult, incumbent: &DesignResult) -> bool {
    let scale = candidate.load_power.abs().max(incumbent.load_power.abs());
    let diff = candidate.load_power - incumbent.load_power;
    if diff > TIE_TOL * scale {
        return true;
    }
    if diff < -TIE_TOL * scale {
        return false;
    }
    if candidate.load_voltage_rms != incumbent.load_voltage_rms {
        return candidate.load_voltage_rms > incumbent.load_voltage_rms;
    }
    candidate.turns < incumbent.turns
}

/// Turn counts searched: all of them up to the enumeration limit, then the
/// technology maximum. Beyond the limit only the wire-wound case arises, where
/// load share and extracted power do not depend on N and voltage grows with N.
pub fn candidate_turns(max_turns: u64) -> impl Iterator<Item = u64> {
    let dense = max_turns.min(EXHAUSTIVE_TURN_LIMIT);
    let tail = (max_turns > dense).then_some(max_turns);
    (1..=dense).chain(tail)
}

/// Best (N, R_l) for one device. Errors when no turn count is feasible.
pub fn optimize_design(problem: &DesignProblem) -> Result<DesignResult, OptimizerError> {
    if !(problem.flux_gradient > 0.0 && problem.flux_gradient.is_finite()) {
        return Err(OptimizerError::InvalidParameter { name: "flux_gradient", value: problem.flux_gradient });
    }
    if !(problem.min_load_resistance > 0.0) {
        return Err(OptimizerError::InvalidParameter {
            name: "min_load_resistance",
            value: problem.min_load_resistance,
        });
    }
    let model = problem.coil_model()?;
    let eval = Evaluator {
        mass: problem.mass(),
        omega: problem.drive.omega(),
        acceleration: problem.drive.acceleration,
        parasitic_damping: problem.parasitic_damping()?,
        x_m: problem.geometry.x_m,
        gradient: problem.flux_gradient,
        max_power: problem.max_power()?,
        min_load: problem.min_load_resistance,
    };
    let mut best: Option<DesignResult> = None;
    for turns in candidate_turns(model.max_turns()) {
        let coil = model.resistance(turns);
        let mut loads = Vec::with_capacity(2);
        if let Some(load) = solve_matched_load(turns, eval.gradient, eval.parasitic_damping, coil, eval.min_load) {
            loads.push((Strategy::MatchedDamping, load));
        }
        if coil >= eval.min_load {
            loads.push((Strategy::ImpedanceMatched, coil));
        }
        for (strategy, load) in loads {
            if let Some(r) = eval.constrained(strategy, turns, coil, load)? {
                if best.as_ref().map_or(true, |b| better(&r, b)) {
                    best = Some(r);
                }
            }
        }
    }
    best.ok_or(OptimizerError::NoFeasibleDesign { d: problem.geometry.d, technology: problem.technology })
}

/// One line of a dimension sweep; infeasible points carry their error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d: f64,
    pub technology: CoilTechnology,
    pub q_mode: QMode,
    /// `None` if the quality factor could not be determined.
    pub q_oc: Option<f64>,
    pub outcome: Result<DesignResult, OptimizerError>,
}

impl SweepRow {
    pub fn feasible(&self) -> bool {
        self.outcome.is_ok()
    }

    /// Load power, zero when infeasible.
    pub fn load_power(&self) -> f64 {
        self.outcome.as_ref().map_or(0.0, |r| r.load_power)
    }
}

/// Optimizes every (d, technology, Q mode) combination. Rows come out ordered
/// by d, then technology, then Q mode, in the order given. The flux curve is
/// computed once per (d, technology).
pub fn sweep_dimensions(
    d_values: &[f64],
    technologies: &[CoilTechnology],
    q_modes: &[QMode],
    template: &SweepTemplate,
) -> Vec<SweepRow> {
    let cells: Vec<(f64, CoilTechnology)> = d_values
        .iter()
        .flat_map(|&d| technologies.iter().map(move |&t| (d, t)))
        .collect();
    cells
        .par_iter()
        .flat_map_iter(|&(d, technology)| {
            let gradient = template.flux_curve(d, technology).map(|c| c.fitted_gradient.abs());
            q_modes
                .iter()
                .map(|&q_mode| {
                    let q_oc = template
                        .geometry(d)
                        .and_then(|g| q_mode.quality_factor(&g, &template.drive))
                        .ok();
                    let outcome = gradient.clone().and_then(|g| {
                        optimize_design(&template.problem_with_gradient(d, technology, q_mode, g)?)
                    });
                    SweepRow { d, technology, q_mode, q_oc, outcome }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
