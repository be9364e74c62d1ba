//! Power available from a resonant generator: the matched-damping optimum,
//! the quality factor needed to respect the travel limit, and how the bound
//! scales with size.

use std::f64::consts::PI;

use emharvest::dynamics::{max_power_from_q, parasitic_damping_from_q, required_q_for_displacement, resonant_power};
use emharvest::geometry::{derive_geometry, moving_mass, GeometryRatios, MaterialProps};

fn main() {
    let (omega, a) = (2.0 * PI * 1000.0, 9.81);
    let mat = MaterialProps::default();

    println!("{:>5} {:>11} {:>9} {:>12} {:>12}", "d_mm", "mass_kg", "Q_rule", "P_max_W", "P_max_Q300_W");
    for d_mm in 1..=10 {
        let g = derive_geometry(d_mm as f64 * 1e-3, &GeometryRatios::default()).unwrap();
        let m = moving_mass(&g, &mat);
        let q = required_q_for_displacement(g.x_m, omega, a).unwrap();
        println!(
            "{d_mm:>5} {m:>11.4e} {q:>9.0} {:>12.4e} {:>12.4e}",
            max_power_from_q(m, a, omega, q).unwrap(),
            max_power_from_q(m, a, omega, 300.0).unwrap()
        );
    }

    let m = 2e-3;
    let dp = parasitic_damping_from_q(m, omega, 300.0).unwrap();
    println!("extracted power against electrical damping (m = 2 g, Q = 300):");
    for ratio in [0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 10.0] {
        let p = resonant_power(m * a, dp, ratio * dp).unwrap();
        println!("  D_e/D_p = {ratio:>4}: {p:.5e} W");
    }
}
