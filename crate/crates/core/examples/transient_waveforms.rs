//! Time-domain flux linkage and voltage of a 6 mm device with a 100-turn
//! coil at 100 Hz, where the mass swings beyond the region of linear flux.

use emharvest::coils::CoilTechnology;
use emharvest::dynamics::{ElectricalLink, OperatingPoint};
use emharvest::optimizer::{Drive, QMode, SweepTemplate};
use emharvest::transient::{harmonic_distortion, simulate, FluxModel, LoadCondition, SimulationConfig};

fn main() {
    let template = SweepTemplate { drive: Drive { frequency: 100.0, acceleration: 9.81 }, ..Default::default() };
    let d = 6e-3;
    let problem = template.problem(d, CoilTechnology::WireWound, QMode::DisplacementRule).unwrap();
    let curve = template.flux_curve(d, CoilTechnology::WireWound).unwrap();
    let coil = problem.coil_model().unwrap().resistance(100);
    let omega = template.drive.omega();
    let op = OperatingPoint::at_resonance(problem.mass(), omega, 9.81, problem.parasitic_damping().unwrap(), 0.0);
    let link = ElectricalLink::resistive(100, curve.fitted_gradient, coil, coil);
    let cfg = SimulationConfig::default();

    let curved = simulate(&op, &link, &FluxModel::from_curve(&curve).unwrap(), LoadCondition::OpenCircuit, &cfg).unwrap();
    let straight = simulate(&op, &link, &FluxModel::linearised(&curve), LoadCondition::OpenCircuit, &cfg).unwrap();

    println!("open-circuit, one period (every 10th sample):");
    println!("{:>9} {:>10} {:>14} {:>11}", "t_ms", "x_mm", "flux_Wbturns", "emf_V");
    for i in (0..cfg.steps_per_period).step_by(10) {
        println!(
            "{:>9.4} {:>10.4} {:>14.4e} {:>11.4e}",
            curved.time[i] * 1e3,
            curved.displacement[i] * 1e3,
            curved.flux_linkage[i],
            curved.load_voltage[i]
        );
    }
    println!(
        "amplitude {:.3} mm against ±{:.3} mm of sampled flux",
        curved.displacement_amplitude() * 1e3,
        curve.peak_displacement() * 1e3
    );
    println!(
        "harmonic distortion: sampled flux {:.4}, straight-line flux {:.2e}",
        harmonic_distortion(&curved.load_voltage, cfg.steps_per_period).unwrap(),
        harmonic_distortion(&straight.load_voltage, cfg.steps_per_period).unwrap()
    );

    let loaded = simulate(&op, &link, &FluxModel::from_curve(&curve).unwrap(), LoadCondition::Loaded, &cfg).unwrap();
    println!(
        "with R_l = R_c = {:.3} ohm: mean load power {:.4e} W, distortion {:.4}",
        coil,
        loaded.mean_load_power(coil),
        harmonic_distortion(&loaded.load_voltage, cfg.steps_per_period).unwrap()
    );
}
