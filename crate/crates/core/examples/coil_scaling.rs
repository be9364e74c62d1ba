//! Coil resistance against turn count and device size for wire-wound and
//! planar micro-fabricated coils.

use emharvest::coils::{
    max_turns_microcoil, max_turns_wirewound, microcoil_resistance, wirewound_resistance, MicroCoil, TechnologyLimits,
    WireWoundCoil,
};

fn main() {
    let limits = TechnologyLimits::default();
    let wire = |d: f64, turns: u64| WireWoundCoil {
        r_inner: 0.10 * d,
        r_outer: 0.45 * d,
        thickness: 0.1 * d,
        turns,
        fill_factor: 0.55,
        resistivity: 1.72e-8,
    };
    let micro = |d: f64, turns: u64| MicroCoil { d_outer: 0.9 * d, d_inner: 0.2 * d, turns, resistivity: 1.72e-8 };

    println!("{:>5} {:>8} {:>12} {:>8} {:>12}", "d_mm", "N_wire", "R_wire_ohm", "N_micro", "R_micro_ohm");
    for d_mm in [1.0, 2.0, 5.0, 10.0] {
        let d = d_mm * 1e-3;
        let c = wire(d, 1);
        let nw = max_turns_wirewound(c.cross_section(), c.fill_factor, &limits).unwrap();
        let nm = max_turns_microcoil(0.9 * d, 0.2 * d, &limits).unwrap();
        println!(
            "{d_mm:>5} {nw:>8} {:>12.4e} {nm:>8} {:>12.4e}",
            wirewound_resistance(&wire(d, nw), &limits).unwrap(),
            microcoil_resistance(&micro(d, nm), &limits).unwrap()
        );
    }

    let d = 5e-3;
    println!("doubling the turn count at d = 5 mm:");
    for n in [10u64, 50, 100, 200] {
        let rw = wirewound_resistance(&wire(d, 2 * n), &limits).unwrap() / wirewound_resistance(&wire(d, n), &limits).unwrap();
        let rm = microcoil_resistance(&micro(d, 2 * n), &limits).unwrap() / microcoil_resistance(&micro(d, n), &limits).unwrap();
        println!("  N = {n:>3}: wire-wound x{rw:.6}, micro x{rm:.6}");
    }

    let (n, b) = (100, 4.0);
    let rw = wirewound_resistance(&wire(d / b, n), &limits).unwrap() / wirewound_resistance(&wire(d, n), &limits).unwrap();
    let rm = microcoil_resistance(&micro(d / b, n), &limits).unwrap() / microcoil_resistance(&micro(d, n), &limits).unwrap();
    println!("shrinking every dimension by {b} at N = {n}: wire-wound x{rw:.6}, micro x{rm:.6}");
}
