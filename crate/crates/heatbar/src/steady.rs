//! Closed-form steady state.
//!
//! With the left end pinned at `F` and a film condition at the right end, the
//! stationary temperature is piecewise linear with one kink at the interface.
//! The whole profile is controlled by a single dimensionless number
//! `mu = k1 k2 / D`, `D = k1 k2 + k1 h L + (k2 - k1) h l`, which lies in
//! `(0, 1)` for every valid problem.

use crate::error::{Error, Result};
use crate::problem::BarProblem;
use crate::scalar::Real;

/// The steady profile `U^S` of a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadySolution<R: Real> {
    problem: BarProblem<R>,
    mu: R,
    q: R,
}

impl<R: Real> SteadySolution<R> {
    /// Solves the stationary problem; never fails for a valid `BarProblem`.
    pub fn solve(problem: &BarProblem<R>) -> Self {
        let k1 = problem.left().k();
        let k2 = problem.right().k();
        let h = problem.h();
        let l = problem.interface();
        let len = problem.length();
        let d = k1 * k2 + k1 * h * len + (k2 - k1) * h * l;
        let mu = k1 * k2 / d;
        let q = (problem.source() - problem.ambient()) * h;
        Self {
            problem: problem.clone(),
            mu,
            q,
        }
    }

    pub fn problem(&self) -> &BarProblem<R> {
        &self.problem
    }

    /// The dimensionless interface number `mu`; always in `(0, 1)`.
    pub fn mu(&self) -> R {
        self.mu
    }

    /// The constant steady heat flux `Q mu` through the bar, W/m^2.
    pub fn flux(&self) -> R {
        self.q * self.mu
    }

    /// Evaluates `U^S(x)`. The interface point itself is served by the left
    /// branch; both branches agree there exactly.
    pub fn eval(&self, x: R) -> Result<R> {
        let p = &self.problem;
        if !(x.is_finite() && x >= R::zero() && x <= p.length()) {
            return Err(Error::PositionOutOfDomain {
                x: x.as_f64(),
                length: p.length().as_f64(),
            });
        }
        let qmu = self.q * self.mu;
        let l = p.interface();
        if x <= l {
            Ok(p.source() - qmu * x / p.left().k())
        } else {
            Ok(p.source() - qmu * ((x - l) / p.right().k() + l / p.left().k()))
        }
    }
}

fn require_midpoint<R: Real>(p: &BarProblem<R>) -> Result<()> {
    let half = p.length() * R::lit(0.5);
    let tol = R::lit(1e-12) * (R::one() + p.length());
    if (p.interface() - half).abs() > tol {
        return Err(Error::InterfaceNotAtMidpoint {
            interface: p.interface().as_f64(),
            length: p.length().as_f64(),
        });
    }
    Ok(())
}

/// Steady interface temperature for the symmetric split `l = L/2`:
///
/// `U^S(L/2) = F - (F - Ta) h L k2 / (2 k1 k2 + h L (k1 + k2))`.
pub fn interface_temperature_half<R: Real>(p: &BarProblem<R>) -> Result<R> {
    require_midpoint(p)?;
    let (k1, k2) = (p.left().k(), p.right().k());
    let two = R::lit(2.0);
    let den = two * k1 * k2 + p.h() * p.length() * (k1 + k2);
    Ok(p.source() - (p.source() - p.ambient()) * p.h() * p.length() * k2 / den)
}

/// Steady right-end temperature for the symmetric split `l = L/2`:
///
/// `U^S(L) = F - (F - Ta) h L (k1 + k2) / (2 k1 k2 + h L (k1 + k2))`.
///
/// Symmetric in the two conductivities, so swapping the materials leaves it
/// unchanged.
pub fn right_end_temperature_half<R: Real>(p: &BarProblem<R>) -> Result<R> {
    require_midpoint(p)?;
    let (k1, k2) = (p.left().k(), p.right().k());
    let two = R::lit(2.0);
    let hlk = p.h() * p.length() * (k1 + k2);
    let den = two * k1 * k2 + hlk;
    Ok(p.source() - (p.source() - p.ambient()) * hlk / den)
}
