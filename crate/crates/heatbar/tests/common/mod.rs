//! Shared fixtures for the acceptance suite: reference bar configurations,
//! an independent classical single-material oracle, and a tiny deterministic
//! RNG so "random probe points" are reproducible.
#![allow(dead_code)]

use heatbar::{builtin, BarProblem};

/// Long iron-into-lead bar: L = 5 m, interface at 2 m, h = 10, 150 C on 20 C.
pub fn example3() -> BarProblem<f64> {
    BarProblem::new(
        5.0,
        2.0,
        builtin("Fe").unwrap(),
        builtin("Pb").unwrap(),
        10.0,
        150.0,
        20.0,
    )
    .unwrap()
}

/// Desk-scale iron-into-lead bar: L = 1 m, interface at 0.3 m, h = 10,
/// 100 C on 25 C.
pub fn example4() -> BarProblem<f64> {
    BarProblem::new(
        1.0,
        0.3,
        builtin("Fe").unwrap(),
        builtin("Pb").unwrap(),
        10.0,
        100.0,
        25.0,
    )
    .unwrap()
}

/// Silver then lead, interface at the midpoint.
pub fn silver_lead() -> BarProblem<f64> {
    BarProblem::new(
        1.0,
        0.5,
        builtin("Ag").unwrap(),
        builtin("Pb").unwrap(),
        10.0,
        100.0,
        25.0,
    )
    .unwrap()
}

/// Textbook single-material bar with a Dirichlet source at 0 and a Robin
/// film at L, written from scratch so it shares no code with the crate.
pub struct ClassicalBar {
    pub length: f64,
    pub k: f64,
    pub alpha2: f64,
    pub h: f64,
    pub source: f64,
    pub ambient: f64,
}

impl ClassicalBar {
    /// Roots of `tan(lambda L) = -(k/h) lambda` by bisection of the
    /// continuous equivalent `sin(lambda L) + (k/h) lambda cos(lambda L)`.
    /// Exactly one root lives in each window
    /// `((m - 1/2) pi / L, (m + 1/2) pi / L)`.
    pub fn eigenvalues(&self, count: usize) -> Vec<f64> {
        let g = |lam: f64| {
            (lam * self.length).sin() + (self.k / self.h) * lam * (lam * self.length).cos()
        };
        (1..=count)
            .map(|m| {
                let pi = std::f64::consts::PI;
                let mut lo = (m as f64 - 0.5) * pi / self.length + 1e-12;
                let mut hi = (m as f64 + 0.5) * pi / self.length - 1e-12;
                let mut g_lo = g(lo);
                assert!(
                    g_lo * g(hi) < 0.0,
                    "oracle bracket {m} lost its sign change"
                );
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    let g_mid = g(mid);
                    if g_lo * g_mid <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        g_lo = g_mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    pub fn steady(&self, x: f64) -> f64 {
        self.source
            - (self.source - self.ambient) * self.h * x / (self.k + self.h * self.length)
    }

    /// Projection of `Ta - U^S` (a linear function) on `sin(lambda x)`,
    /// both integrals in closed form.
    pub fn coefficient(&self, lam: f64) -> f64 {
        let a = self.ambient - self.source;
        let slope = (self.source - self.ambient) * self.h / (self.k + self.h * self.length);
        let ll = lam * self.length;
        let num = a * (1.0 - ll.cos()) / lam + slope * (ll.sin() - ll * ll.cos()) / (lam * lam);
        let den = self.length / 2.0 - (2.0 * ll).sin() / (4.0 * lam);
        num / den
    }

    pub fn eval(&self, x: f64, t: f64, lams: &[f64]) -> f64 {
        self.steady(x)
            + lams
                .iter()
                .map(|&lam| {
                    self.coefficient(lam)
                        * (lam * x).sin()
                        * (-lam * lam * self.alpha2 * t).exp()
                })
                .sum::<f64>()
    }
}

/// xorshift64* with a fixed seed: enough randomness to scatter probe
/// points, fully reproducible across runs.
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in [0, 1).
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_unit()
    }
}
