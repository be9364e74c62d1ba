//! Optimizes wire-wound and micro-fabricated generators from 1 mm to 10 mm
//! and reports how load power scales with size.

use emharvest::coils::CoilTechnology;
use emharvest::numerics::log_log_slope;
use emharvest::optimizer::{sweep_dimensions, QMode, SweepTemplate};

fn main() {
    let ds: Vec<f64> = (1..=10).map(|i| i as f64 * 1e-3).collect();
    let techs = [CoilTechnology::WireWound, CoilTechnology::MicroFabricated];
    let modes = [QMode::DisplacementRule, QMode::Fixed(300.0)];
    let rows = sweep_dimensions(&ds, &techs, &modes, &SweepTemplate::default());

    println!("{:>6} {:>10} {:>18} {:>9} {:>6} {:>18} {:>11} {:>11} {:>10}", "d_mm", "tech", "q_mode", "Q", "N", "strategy", "P_max_W", "P_load_W", "V_rms");
    for row in &rows {
        let q = row.q_oc.unwrap_or(f64::NAN);
        match &row.outcome {
            Ok(r) => println!(
                "{:>6.1} {:>10} {:>18} {:>9.0} {:>6} {:>18} {:>11.3e} {:>11.3e} {:>10.3e}",
                row.d * 1e3,
                row.technology.label(),
                row.q_mode.label(),
                q,
                r.turns,
                r.strategy.label(),
                r.max_power,
                r.load_power,
                r.load_voltage_rms
            ),
            Err(e) => println!("{:>6.1} {:>10} {:>18} {:>9.0}  infeasible: {e}", row.d * 1e3, row.technology.label(), row.q_mode.label(), q),
        }
    }

    for tech in techs {
        for mode in modes {
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.technology == tech && r.q_mode == mode && r.d >= 2e-3 && r.feasible())
                .map(|r| (r.d, r.load_power()))
                .unzip();
            if let Some(slope) = log_log_slope(&xs, &ys) {
                println!("{} / {}: load power ~ d^{slope:.2} over 2-10 mm", tech.label(), mode.label());
            }
        }
    }
}
