//! Oracles shared by the integration tests. None of them calls into the
//! crate's series machinery.

#![allow(dead_code)]

use cir_core::WaveguideParams;
use rand::Rng;

/// `ζ(1/2)` from Borwein's accelerated alternating series for `η(s)`.
pub fn zeta_half_borwein() -> f64 {
    let n = 40usize;
    let s = 0.5f64;
    let nf = n as f64;
    let mut term = 1.0f64;
    let mut acc = 1.0f64;
    let mut d = vec![acc];
    for i in 1..=n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = 0.0;
    for (k, dk) in d[..n].iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dk - dn) / ((k + 1) as f64).powf(s);
    }
    -sum / (dn * (1.0 - 2f64.powf(1.0 - s)))
}

/// `ζ(s, q)` by Euler–Maclaurin summation with a fixed cut at `N = 30`.
pub fn hurwitz_zeta_em(s: f64, q: f64) -> f64 {
    const B2J_OVER_FACT: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let n = 30.0;
    let mut sum: f64 = (0..30).map(|j| (j as f64 + q).powf(-s)).sum();
    let x = n + q;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    for (j, b) in B2J_OVER_FACT.iter().enumerate() {
        sum += b * rising * power;
        let m = (2 * j + 1) as f64;
        rising *= (s + m) * (s + m + 1.0);
        power /= x * x;
    }
    sum
}

/// `Σ e^{−x√(n+ε)}/√(n+ε) − 2/x` by plain summation; `x` must not be small.
pub fn brute_lambda(x: f64, eps: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 1.0;
    loop {
        let t = (n + eps).sqrt();
        let term = (-x * t).exp() / t;
        sum += term;
        if term < 1e-20 {
            break;
        }
        n += 1.0;
    }
    sum - 2.0 / x
}

/// `Σ e^{−x√(n+ε)} − 2/x²` by plain summation; `x` must not be small.
pub fn brute_f(x: f64, eps: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 1.0;
    loop {
        let term = (-x * (n + eps).sqrt()).exp();
        sum += term;
        if term < 1e-20 {
            break;
        }
        n += 1.0;
    }
    sum - 2.0 / (x * x)
}

/// Random point of the working window: `ka⊥` log-uniform on `[1e−4, 1.95]`,
/// `a` log-uniform on `[1e−3, 3]`, `a⊥/a₃D` uniform on `[−10, 10]`.
pub fn random_params<R: Rng>(rng: &mut R) -> WaveguideParams {
    let k = 10f64.powf(rng.gen_range(-4.0..1.95f64.log10()));
    let a = 10f64.powf(rng.gen_range(-3.0..3f64.log10()));
    let q = rng.gen_range(-10.0..10.0);
    WaveguideParams::new(k, a, q).expect("sampled inside the validated window")
}
