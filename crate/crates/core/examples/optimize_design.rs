//! Chooses turns and load for a 6 mm device with both coil technologies, at
//! the quality factor set by the travel limit and at Q = 300.

use emharvest::coils::CoilTechnology;
use emharvest::optimizer::{optimize_design, QMode, SweepTemplate};

fn main() {
    let template = SweepTemplate::default();
    let d = 6e-3;
    for mode in [QMode::DisplacementRule, QMode::Fixed(300.0)] {
        for tech in [CoilTechnology::WireWound, CoilTechnology::MicroFabricated] {
            let problem = template.problem(d, tech, mode).expect("problem");
            print!("{:>9} / {:<18} Q = {:>7.0}: ", tech.label(), mode.label(), problem.q_oc);
            match optimize_design(&problem) {
                Ok(r) => println!(
                    "{} N = {} R_c = {:.3e} R_l = {:.3e} D_e/D_p = {:.4} P_load = {:.4e} W ({:.1}% of max) V = {:.3e} V",
                    r.strategy.label(),
                    r.turns,
                    r.coil_resistance,
                    r.load_resistance,
                    r.em_damping / r.parasitic_damping,
                    r.load_power,
                    100.0 * r.load_power / r.max_power,
                    r.load_voltage_rms
                ),
                Err(e) => println!("{e}"),
            }
        }
    }
}
