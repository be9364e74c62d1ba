//! Splits a cube of side `d` between moving mass and free travel, and checks
//! numerically that kinetic energy peaks when the mass takes a third.

use std::f64::consts::PI;

use emharvest::geometry::{derive_geometry, kinetic_energy, moving_mass, optimal_mass_extent, GeometryRatios, MaterialProps};

fn main() {
    let mat = MaterialProps::default();
    let omega = 2.0 * PI * 1000.0;
    for d_mm in [1.0, 2.0, 5.0, 10.0] {
        let d = d_mm * 1e-3;
        let g = derive_geometry(d, &GeometryRatios::default()).expect("valid ratios");
        println!(
            "d = {d_mm:>4} mm: magnet {:.3} x {:.3} x {:.3} mm, gap {:.3} mm, travel ±{:.3} mm, mass {:.4e} kg",
            g.magnet_x * 1e3,
            g.magnet_y * 1e3,
            g.magnet_z * 1e3,
            g.gap * 1e3,
            g.x_m * 1e3,
            moving_mass(&g, &mat)
        );
    }

    let d = 10e-3;
    let n = 10_000;
    let (best, energy) = (1..n)
        .map(|i| d * i as f64 / n as f64)
        .map(|xm| (xm, kinetic_energy(xm, d, d, 0.8 * d, mat.magnet_density, omega).unwrap()))
        .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    println!(
        "grid optimum of kinetic energy: mass extent {:.6} mm (analytic {:.6} mm), energy {energy:.4e} J",
        best * 1e3,
        optimal_mass_extent(d) * 1e3
    );
}
