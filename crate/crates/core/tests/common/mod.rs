#![allow(dead_code)]

use magnon_efimov::quad::{integrate, integrate_breakpoints};
use magnon_efimov::two_body::EftParams;
use std::f64::consts::PI;

/// ∫dq/(2π) 1/(A − u|q|^z) by adaptive quadrature in q.
///
/// z > 1 runs over the whole line; the part beyond q₀ = (|A|/u)^{1/z} is
/// mapped to s ∈ (0, 1] by q = q₀ s^{−1/(z−1)}, which leaves a smooth
/// integrand. z = 1 integrates |q| ≤ Λ with geometric breakpoints.
pub fn loop_by_quadrature(a: f64, eft: &EftParams) -> f64 {
    let (z, u, big_a) = (eft.z, eft.u, -a);
    if z == 1.0 {
        let f = |q: f64| 1.0 / (big_a + u * q);
        let q0 = big_a / u;
        let mut bps = vec![0.0];
        let mut q = q0.min(eft.lambda);
        while q < eft.lambda {
            bps.push(q);
            q *= 4.0;
        }
        bps.push(eft.lambda);
        let v = integrate_breakpoints(f, &bps, 0.0, 1e-13, 100_000).unwrap().value;
        return -v / PI;
    }
    let q0 = (big_a / u).powf(1.0 / z);
    let head = integrate(|q| 1.0 / (big_a + u * q.powf(z)), 0.0, q0, 0.0, 1e-13).unwrap().value;
    let p = 1.0 / (z - 1.0);
    let tail = integrate(|s| p * q0 / big_a / (1.0 + s.powf(p * z)), 0.0, 1.0, 0.0, 1e-13)
        .unwrap()
        .value;
    -(head + tail) / PI
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
