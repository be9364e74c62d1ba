//! Flux linkage per turn versus magnet displacement for both coil outlines,
//! and the gradient's linear growth with device size.

use emharvest::coils::CoilTechnology;
use emharvest::numerics::log_log_slope;
use emharvest::optimizer::SweepTemplate;

fn main() {
    let template = SweepTemplate::default();
    let d = 6e-3;
    for tech in [CoilTechnology::WireWound, CoilTechnology::MicroFabricated] {
        let curve = template.flux_curve(d, tech).expect("flux curve");
        println!("{} coil at d = 6 mm", tech.label());
        for (x, phi) in curve.displacements.iter().zip(&curve.flux_per_turn).step_by(2) {
            println!("  x = {:>7.3} mm   phi = {:>11.4e} Wb", x * 1e3, phi);
        }
        let centre = curve.fit_within(curve.peak_displacement() / 2.0).unwrap();
        println!(
            "  fitted gradient {:.4e} Wb/m (central half: {:.4e}, R² {:.4})",
            curve.fitted_gradient, centre.slope, centre.r_squared
        );
    }

    let ds: Vec<f64> = (1..=10).map(|i| i as f64 * 1e-3).collect();
    let gradients: Vec<f64> = ds
        .iter()
        .map(|&d| template.flux_curve(d, CoilTechnology::WireWound).unwrap().fitted_gradient.abs())
        .collect();
    for (d, g) in ds.iter().zip(&gradients) {
        println!("d = {:>4.1} mm  gradient {:.4e} Wb/m  ({:.4} per metre of d)", d * 1e3, g, g / d);
    }
    println!("log-log slope of gradient vs d: {:.4}", log_log_slope(&ds, &gradients).unwrap());
}
