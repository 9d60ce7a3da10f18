//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the library's closed forms: the values come from
//! series, finite differences and plain composite rules.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    // compensated summation keeps 10⁵ panels from adding rounding noise
    let (mut acc, mut carry) = (f(a) + f(b), 0.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        let y = w * f(a + i as f64 * h) - carry;
        let t = acc + y;
        carry = (t - acc) - y;
        acc = t;
    }
    acc * h / 3.0
}

/// `erfc(x)` from its defining integral, Simpson on `[x, x + 12]`.
pub fn erfc_by_quadrature(x: f64) -> f64 {
    2.0 / PI.sqrt() * simpson(|t| (-t * t).exp(), x, x + 12.0, 200_000)
}

const BERNOULLI_2K: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Hurwitz `ζ(s, a)` for real `s ≠ 1` by Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    let n = 30usize;
    let mut sum: f64 = (0..n).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = n as f64 + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // B_{2k}/(2k)! · s(s+1)…(s+2k−2) · x^{-s-2k+1}
    let mut rising = s;
    let mut factorial = 2.0;
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        let k = k + 1;
        sum += b / factorial * rising * x.powf(-s - 2.0 * k as f64 + 1.0);
        rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
        factorial *= (2.0 * k as f64 + 1.0) * (2.0 * k as f64 + 2.0);
    }
    sum
}

/// η of `{n + a : n ∈ ℤ}` through `Σ sgn(λ)|λ|^{-s} = ζ(s, a) − ζ(s, 1 − a)`,
/// continued to `s = 0` by symmetric evaluation at `±h`.
pub fn circle_eta_by_zeta(a: f64) -> f64 {
    let h = 1e-5;
    let eta = |s: f64| hurwitz_zeta(s, a) - hurwitz_zeta(s, 1.0 - a);
    0.5 * (eta(h) + eta(-h))
}

/// Crank–Nicolson solve of `u_s = u_yy − λ²u` on `[lo, hi]` with zero
/// boundary values, started at time `s0` from the free Gaussian centred at
/// `y0`; returns `u(s, y)`.
pub fn heat_solve(lambda: f64, y0: f64, s0: f64, s: f64, y: f64, lo: f64, hi: f64) -> f64 {
    let h = 0.005;
    let m = ((hi - lo) / h).round() as usize;
    let steps = 4000;
    let dt = (s - s0) / steps as f64;
    let grid: Vec<f64> = (0..=m).map(|i| lo + i as f64 * h).collect();
    let mut u: Vec<f64> = grid
        .iter()
        .map(|&x| (-(x - y0).powi(2) / (4.0 * s0) - lambda * lambda * s0).exp() / (4.0 * PI * s0).sqrt())
        .collect();
    u[0] = 0.0;
    u[m] = 0.0;
    let r = dt / (h * h);
    let c = 0.5 * dt * lambda * lambda;
    // (1 + r + c) u_i − r/2 (u_{i−1} + u_{i+1}) = rhs
    let diag = 1.0 + r + c;
    let off = -0.5 * r;
    let inner = m - 1;
    let mut cp = vec![0.0; inner];
    let mut dp = vec![0.0; inner];
    for _ in 0..steps {
        let rhs: Vec<f64> = (1..m)
            .map(|i| (1.0 - r - c) * u[i] + 0.5 * r * (u[i - 1] + u[i + 1]))
            .collect();
        cp[0] = off / diag;
        dp[0] = rhs[0] / diag;
        for i in 1..inner {
            let den = diag - off * cp[i - 1];
            cp[i] = off / den;
            dp[i] = (rhs[i] - off * dp[i - 1]) / den;
        }
        u[inner] = dp[inner - 1];
        for i in (1..inner).rev() {
            u[i] = dp[i - 1] - cp[i - 1] * u[i + 1];
        }
    }
    let pos = (y - lo) / h;
    let i = pos.floor() as usize;
    let w = pos - i as f64;
    (1.0 - w) * u[i] + w * u[i + 1]
}

/// Dirichlet heat kernel of `−d²/dy² + λ²` on `(0, ∞)`, image sum written out.
fn dirichlet(lambda: f64, s: f64, y: f64, yp: f64) -> f64 {
    let g = |d: f64| (-d * d / (4.0 * s)).exp();
    (-lambda * lambda * s).exp() / (4.0 * PI * s).sqrt() * (g(y - yp) - g(y + yp))
}

/// Brute-force `−∫₀^∞ (∂_{y′} + λ)κ^F ds` at `y = y′ = a′`: the Dirichlet heat
/// kernel composed with `D_C^-` for every mode, derivative by central
/// differences and the heat-time integral by Simpson's rule after `s = u²`
/// and a cut at `s = 60/λ²`.
pub fn brute_force_dirichlet_variant(lambda: f64, a_prime: f64) -> f64 {
    let step = 1e-5;
    let kernel = |s: f64| {
        let derivative =
            (dirichlet(lambda, s, a_prime, a_prime + step) - dirichlet(lambda, s, a_prime, a_prime - step)) / (2.0 * step);
        derivative + lambda * dirichlet(lambda, s, a_prime, a_prime)
    };
    let u_max = (60.0f64).sqrt() / lambda.abs();
    // the integrand tends to λ/√π as u → 0, so nudge the endpoint off zero
    let integral = simpson(|u| { let u = u.max(1e-12); kernel(u * u) * 2.0 * u }, 0.0, u_max, 200_000);
    -integral
}
