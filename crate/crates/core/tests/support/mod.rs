//! Independent reference for the cuboid field: the surface-charge integral
//! evaluated by nested adaptive Gauss–Kronrod quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

use emharvest::magnetics::{CuboidMagnet, Point3};

const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XK[j];
        let s = f(c - dx) + f(c + dx);
        k += WK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive 15-point Gauss–Kronrod integration to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = kronrod(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth + 1) + recurse(f, m, b, 0.5 * tol, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

/// Bz of a cuboid from the ±M surface charges on its z-faces, plus the
/// magnetisation itself inside the block.
pub fn bz_by_quadrature(m: &CuboidMagnet, p: Point3, rel_tol: f64) -> f64 {
    let [hx, hy, hz] = m.half_extents;
    let [cx, cy, cz] = m.center;
    let mut total = 0.0;
    for (sign, zf) in [(1.0, cz + hz), (-1.0, cz - hz)] {
        let dz = p[2] - zf;
        // the face integral is bounded by the full solid angle
        let tol = rel_tol * 1e-2 * 2.0 * PI;
        let inner = |x: f64| {
            let f = |y: f64| {
                let r2 = (p[0] - x).powi(2) + (p[1] - y).powi(2) + dz * dz;
                dz / (r2 * r2.sqrt())
            };
            integrate(&f, cy - hy, cy + hy, tol / (4.0 * hx))
        };
        total += sign * integrate(&inner, cx - hx, cx + hx, tol);
    }
    let mut bz = m.polarity.sign() * m.remanence / (4.0 * PI) * total;
    if m.contains(p) {
        bz += m.polarity.sign() * m.remanence;
    }
    bz
}
