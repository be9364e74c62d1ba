//! End-to-end acceptance checks. Each test prints one PASS/FAIL line with
//! the measured quantity and its tolerance before asserting.

mod support;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use emharvest::coils::{micro_turn_polynomial, microcoil_resistance, wirewound_resistance, CoilTechnology, MicroCoil, TechnologyLimits, WireWoundCoil};
use emharvest::dynamics::{max_power, max_power_from_q, required_q_for_displacement, resonant_power, ElectricalLink, OperatingPoint};
use emharvest::geometry::{derive_geometry, kinetic_energy, moving_mass, GeometryRatios, MaterialProps};
use emharvest::magnetics::{bz_cuboid, CuboidMagnet, Polarity};
use emharvest::numerics::log_log_slope;
use emharvest::optimizer::{optimize_design, sweep_dimensions, Drive, QMode, Strategy, SweepRow, SweepTemplate};
use emharvest::transient::{harmonic_distortion, simulate, FluxModel, LoadCondition, SimulationConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const OMEGA: f64 = 2.0 * PI * 1000.0;
const A: f64 = 9.81;

fn report(id: u32, pass: bool, detail: String) {
    println!("criterion {id:>2}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn dims_mm(range: std::ops::RangeInclusive<u32>) -> Vec<f64> {
    range.map(|i| i as f64 * 1e-3).collect()
}

fn within(t: Instant, limit: u64) -> (bool, Duration) {
    let e = t.elapsed();
    (e < Duration::from_secs(limit), e)
}

#[test]
fn criterion_01_optimum_mass_partition() {
    let t = Instant::now();
    let (x, n) = (10e-3, 10_000);
    let step = x / n as f64;
    let mut best = (0.0, f64::MIN);
    for i in 1..n {
        let xm = step * i as f64;
        let e = kinetic_energy(xm, x, x, 0.8 * x, 7600.0, OMEGA).unwrap();
        if e > best.1 {
            best = (xm, e);
        }
    }
    let (fast, dt) = within(t, 1);
    let off = (best.0 - x / 3.0).abs();
    report(1, off <= step && fast, format!("argmax {:.6e} m vs x/3 {:.6e} m, |diff| {off:.2e} <= step {step:.1e}, {dt:?} < 1 s", best.0, x / 3.0));
}

fn sweep(modes: &[QMode], techs: &[CoilTechnology], ds: &[f64]) -> Vec<SweepRow> {
    sweep_dimensions(ds, techs, modes, &SweepTemplate::default())
}

#[test]
fn criterion_02_gradient_grows_linearly_with_size() {
    let t = Instant::now();
    let ds = dims_mm(1..=10);
    let template = SweepTemplate::default();
    let g: Vec<f64> = ds
        .iter()
        .map(|&d| template.flux_curve(d, CoilTechnology::WireWound).unwrap().fitted_gradient.abs())
        .collect();
    let slope = log_log_slope(&ds, &g).unwrap();
    let (fast, dt) = within(t, 60);
    report(2, (slope - 1.0).abs() <= 0.10 && fast, format!("log-log slope {slope:.4} (1.00 ± 0.10), {dt:?} < 60 s"));
}

#[test]
fn criterion_03_resistance_scales_inversely_with_size() {
    let limits = TechnologyLimits { min_wire_diameter: 1e-9, min_feature: 1e-9 };
    let wire = |s: f64| WireWoundCoil { r_inner: 1e-3 * s, r_outer: 4e-3 * s, thickness: 1e-3 * s, turns: 250, fill_factor: 0.55, resistivity: 1.72e-8 };
    let micro = |s: f64| MicroCoil { d_outer: 8e-3 * s, d_inner: 2e-3 * s, turns: 250, resistivity: 1.72e-8 };
    let mut worst: f64 = 0.0;
    for b in [2.0, 3.0, 7.5, 10.0] {
        let rw = wirewound_resistance(&wire(1.0 / b), &limits).unwrap() / wirewound_resistance(&wire(1.0), &limits).unwrap();
        let rm = microcoil_resistance(&micro(1.0 / b), &limits).unwrap() / microcoil_resistance(&micro(1.0), &limits).unwrap();
        worst = worst.max((rw / b - 1.0).abs()).max((rm / b - 1.0).abs());
    }
    report(3, worst <= 1e-12, format!("largest relative deviation from factor b: {worst:.2e} (<= 1e-12)"));
}

#[test]
fn criterion_04_turn_count_laws() {
    let limits = TechnologyLimits { min_wire_diameter: 1e-9, min_feature: 1e-9 };
    let wire = |n: u64| WireWoundCoil { r_inner: 1e-3, r_outer: 4e-3, thickness: 1e-3, turns: n, fill_factor: 0.55, resistivity: 1.72e-8 };
    let micro = |n: u64| MicroCoil { d_outer: 8e-3, d_inner: 2e-3, turns: n, resistivity: 1.72e-8 };
    let mut wire_dev: f64 = 0.0;
    let mut micro_dev: f64 = 0.0;
    for n in [1u64, 3, 100, 137, 500, 1000] {
        let rw = wirewound_resistance(&wire(2 * n), &limits).unwrap() / wirewound_resistance(&wire(n), &limits).unwrap();
        wire_dev = wire_dev.max((rw - 4.0).abs());
        if n >= 100 {
            let rm = microcoil_resistance(&micro(2 * n), &limits).unwrap() / microcoil_resistance(&micro(n), &limits).unwrap();
            micro_dev = micro_dev.max((rm / 8.0 - 1.0).abs());
        }
    }
    let poly_ok = micro_turn_polynomial(1) == 1.0;
    report(
        4,
        wire_dev <= 1e-12 && micro_dev < 0.01 && poly_ok,
        format!("wire-wound |ratio-4| {wire_dev:.1e}; micro |ratio/8-1| {micro_dev:.4} (< 0.01 for N >= 100)"),
    );
}

#[test]
fn criterion_05_constant_q_power_scaling() {
    let mat = MaterialProps::default();
    let ds = dims_mm(1..=10);
    let p: Vec<f64> = ds
        .iter()
        .map(|&d| {
            let g = derive_geometry(d, &GeometryRatios::default()).unwrap();
            max_power_from_q(moving_mass(&g, &mat), A, OMEGA, 300.0).unwrap()
        })
        .collect();
    let slope = log_log_slope(&ds, &p).unwrap();
    report(5, (slope - 6.0).abs() <= 1e-3, format!("log-log slope of P_max at fixed Q: {slope:.4} (6.000 ± 0.001)"));
}

#[test]
fn criterion_06_matched_damping_optimum() {
    let (m, dp) = (2e-3, 0.04);
    let f = m * A;
    let n = 100_000;
    let mut best = (0.0, f64::MIN);
    for i in 1..=n {
        let de = 3.0 * dp * i as f64 / n as f64;
        let p = resonant_power(f, dp, de).unwrap();
        if p > best.1 {
            best = (de, p);
        }
    }
    let loc = (best.0 / dp - 1.0).abs();
    let peak = (best.1 / max_power(m, A, dp).unwrap() - 1.0).abs();
    report(6, loc <= 1e-3 && peak <= 1e-9, format!("peak at D_e/D_p = {:.6} (±0.1%), peak vs (ma)²/8D_p rel diff {peak:.1e} (<= 1e-9)", best.0 / dp));
}

#[test]
fn criterion_07_displacement_rule_q_band() {
    let qs: Vec<f64> = dims_mm(1..=10)
        .iter()
        .map(|&d| {
            let g = derive_geometry(d, &GeometryRatios::default()).unwrap();
            required_q_for_displacement(g.x_m, OMEGA, A).unwrap()
        })
        .collect();
    let (lo, hi) = (qs[0], qs[9]);
    report(7, qs.iter().all(|q| (2.0e3..=3.0e4).contains(q)), format!("Q from {lo:.0} (1 mm) to {hi:.0} (10 mm), band [2000, 30000]"));
}

#[test]
fn criterion_08_regime_switch() {
    let t = Instant::now();
    let ds = dims_mm(1..=10);
    let low = sweep(&[QMode::Fixed(300.0)], &[CoilTechnology::WireWound, CoilTechnology::MicroFabricated], &ds);
    let low_ok = low.iter().all(|r| {
        r.outcome
            .as_ref()
            .is_ok_and(|o| o.strategy == Strategy::ImpedanceMatched && o.load_resistance == o.coil_resistance)
    });
    let high = sweep(&[QMode::DisplacementRule], &[CoilTechnology::WireWound], &ds);
    let matched: Vec<bool> = high
        .iter()
        .map(|r| {
            r.outcome.as_ref().is_ok_and(|o| {
                o.strategy == Strategy::MatchedDamping && (o.em_damping / o.parasitic_damping - 1.0).abs() <= 1e-6
            })
        })
        .collect();
    let high_ok = matched[1..].iter().all(|m| *m);
    let (fast, dt) = within(t, 60);
    report(
        8,
        low_ok && high_ok && fast,
        format!("Q=300 impedance-matched with R_l = R_c at all {} points: {low_ok}; wire-wound matched damping at 2-10 mm: {high_ok} (1 mm: {}); {dt:?}", low.len(), matched[0]),
    );
}

#[test]
fn criterion_09_fourth_power_law() {
    let t = Instant::now();
    let ds = dims_mm(2..=10);
    let rows = sweep(&[QMode::DisplacementRule], &[CoilTechnology::WireWound], &ds);
    let p: Vec<f64> = rows.iter().map(|r| r.load_power()).collect();
    let slope = log_log_slope(&ds, &p).unwrap_or(f64::NAN);
    let (fast, dt) = within(t, 60);
    report(9, (slope - 4.0).abs() <= 0.5 && fast, format!("log-log slope of wire-wound P_load over 2-10 mm: {slope:.3} (4.0 ± 0.5), {dt:?}"));
}

#[test]
fn criterion_10_micro_coil_crossover() {
    let t = Instant::now();
    let ds = dims_mm(1..=10);
    let rows = sweep(&[QMode::DisplacementRule], &[CoilTechnology::WireWound, CoilTechnology::MicroFabricated], &ds);
    let power = |tech: CoilTechnology, d: f64| {
        rows.iter().find(|r| r.technology == tech && r.d == d).map_or(0.0, |r| r.load_power())
    };
    let micro_wins: Vec<bool> = ds
        .iter()
        .map(|&d| power(CoilTechnology::MicroFabricated, d) > power(CoilTechnology::WireWound, d))
        .collect();
    // largest d such that micro wins at every size up to it
    let d_star = micro_wins.iter().take_while(|w| **w).count().checked_sub(1).map(|i| ds[i]);
    let feasible_micro = rows.iter().filter(|r| r.technology == CoilTechnology::MicroFabricated && r.feasible()).count();
    let (fast, dt) = within(t, 60);
    let pass = d_star.is_some_and(|d| d <= 3e-3) && fast;
    report(
        10,
        pass,
        format!("d* = {d_star:?} m (must exist and be <= 3 mm); micro wins at {:?}; feasible micro points {feasible_micro}/10; {dt:?}",
            ds.iter().zip(&micro_wins).filter(|(_, w)| **w).map(|(d, _)| *d).collect::<Vec<_>>()),
    );
}

#[test]
fn criterion_11_transient_oracle() {
    let t = Instant::now();
    let template = SweepTemplate { drive: Drive { frequency: 100.0, acceleration: A }, ..Default::default() };
    let d = 6e-3;
    let problem = template.problem(d, CoilTechnology::WireWound, QMode::DisplacementRule).unwrap();
    let curve = template.flux_curve(d, CoilTechnology::WireWound).unwrap();
    let coil = problem.coil_model().unwrap().resistance(100);
    let w = template.drive.omega();
    let dp = problem.parasitic_damping().unwrap();
    let op = OperatingPoint::at_resonance(problem.mass(), w, A, dp, 0.0);
    let link = ElectricalLink::resistive(100, curve.fitted_gradient, coil, coil);
    let cfg = SimulationConfig::default();

    let linear = simulate(&op, &link, &FluxModel::linearised(&curve), LoadCondition::Loaded, &cfg).unwrap();
    let de = emharvest::dynamics::em_damping(&link).unwrap();
    let expected = resonant_power(op.drive_force(), dp, de).unwrap() * link.load_share();
    let power_err = (linear.mean_load_power(coil) / expected - 1.0).abs();

    let curved_oc = simulate(&op, &link, &FluxModel::from_curve(&curve).unwrap(), LoadCondition::OpenCircuit, &cfg).unwrap();
    let linear_oc = simulate(&op, &link, &FluxModel::linearised(&curve), LoadCondition::OpenCircuit, &cfg).unwrap();
    let hd_curved = harmonic_distortion(&curved_oc.load_voltage, cfg.steps_per_period).unwrap();
    let hd_linear = harmonic_distortion(&linear_oc.load_voltage, cfg.steps_per_period).unwrap();
    let (fast, dt) = within(t, 30);
    report(
        11,
        power_err <= 0.02 && hd_curved > hd_linear && fast,
        format!("constant-gradient load power error {:.2e} (<= 2%); distortion {hd_curved:.4} (sampled flux) > {hd_linear:.2e} (line fit); {dt:?}", power_err),
    );
}

#[test]
fn criterion_12_field_matches_quadrature() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let h = [rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0)];
        let pol = if rng.gen_bool(0.5) { Polarity::Up } else { Polarity::Down };
        let m = CuboidMagnet::new([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)], h, pol, rng.gen_range(0.8..1.5));
        let p = [0, 1, 2].map(|i| m.center[i] + rng.gen_range(-3.0..3.0) * h[i]);
        // keep clear of the charged faces, where the integrand is nearly singular
        if (0..3).any(|i| ((p[i] - m.center[i]).abs() - h[i]).abs() < 0.02 * h[i]) {
            continue;
        }
        let exact = bz_cuboid(&m, p).unwrap();
        let quad = support::bz_by_quadrature(&m, p, 1e-9);
        let rel = (exact - quad).abs() / quad.abs().max(1e-12);
        worst = worst.max(rel);
        count += 1;
    }
    let (fast, dt) = within(t, 30);
    report(12, worst <= 1e-6 && fast, format!("worst relative difference over 100 random points {worst:.2e} (<= 1e-6), {dt:?} < 30 s"));
}

#[test]
fn optimizer_reproduces_single_sweep_row() {
    let rows = sweep(&[QMode::DisplacementRule], &[CoilTechnology::WireWound], &[6e-3]);
    let direct = optimize_design(&SweepTemplate::default().problem(6e-3, CoilTechnology::WireWound, QMode::DisplacementRule).unwrap());
    assert_eq!(rows[0].outcome, direct);
}
