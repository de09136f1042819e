#![allow(dead_code)]

use spinscatter::airy::{airy_eval, ode_reference_with_tolerance};

/// Worst relative error of Ai and Bi against direct integration of
/// y'' = u·y over [lo, hi], sampled every `step`. Each sample is reached by a
/// unit-length integration in the stable direction: Ai downward, Bi upward on
/// u > 0, both from the right on u < 0 where the envelope is √(Ai² + Bi²).
pub fn airy_ode_error(lo: f64, hi: f64, step: f64) -> f64 {
    let mut worst = 0.0f64;
    let n = ((hi - lo) / step).round() as usize;
    for i in 0..=n {
        let u = lo + step * i as f64;
        let here = airy_eval(u).unwrap();
        let (ai, bi) = if u >= 0.0 {
            let above = airy_eval(u + 1.0).unwrap();
            let below = airy_eval(u - 1.0).unwrap();
            let (ai, _) = ode_reference_with_tolerance(u + 1.0, u, above.ai, above.ai_prime, 1e-12).unwrap();
            let (bi, _) = ode_reference_with_tolerance(u - 1.0, u, below.bi, below.bi_prime, 1e-12).unwrap();
            (ai, bi)
        } else {
            let from = airy_eval(u + 1.0).unwrap();
            let (ai, _) = ode_reference_with_tolerance(u + 1.0, u, from.ai, from.ai_prime, 1e-12).unwrap();
            let (bi, _) = ode_reference_with_tolerance(u + 1.0, u, from.bi, from.bi_prime, 1e-12).unwrap();
            (ai, bi)
        };
        let (sa, sb) = if u >= 0.0 {
            (here.ai.abs(), here.bi.abs())
        } else {
            let env = here.ai.hypot(here.bi);
            (env, env)
        };
        worst = worst.max((ai - here.ai).abs() / sa).max((bi - here.bi).abs() / sb);
    }
    worst
}

/// Worst |W − 1/π| on `n` evenly spaced points of [lo, hi].
pub fn wronskian_error(lo: f64, hi: f64, n: usize) -> f64 {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .map(|u| (airy_eval(u).unwrap().wronskian() - std::f64::consts::FRAC_1_PI).abs())
        .fold(0.0, f64::max)
}
