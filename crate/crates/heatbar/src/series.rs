//! Transient Fourier series on the eigenmode basis.
//!
//! The solution splits as `U(x, t) = U^S(x) + phi(x, t)` with
//! `phi = sum C_n X_n(x) exp(-lambda_n^2 alpha2^2 t)` and the deviation
//! `g = Ta - U^S` as initial data. Because the eigenfunctions of the
//! two-material problem are orthogonal only under the piecewise weight
//! `w = k_i / alpha_i^2` (the volumetric heat capacity of each segment), the
//! default coefficients are the weighted full-bar projection
//!
//! ```text
//! C_n = int_0^L w g X_n dx / int_0^L w X_n^2 dx,
//! ```
//!
//! computed by adaptive quadrature. A legacy closed-form expression that
//! projects on the left segment alone is also provided; it disagrees with
//! the projection above whenever the two materials differ, and the
//! validation report tabulates both so the discrepancy stays visible.

use crate::eigen::{find_eigenvalues, Eigenmode};
use crate::error::{Error, Result};
use crate::problem::BarProblem;
use crate::quadrature::integrate;
use crate::scalar::Real;
use crate::steady::SteadySolution;

/// How series coefficients are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientMethod {
    /// Weighted full-bar projection by adaptive quadrature; the default and
    /// the only method that reproduces the initial condition.
    #[default]
    Quadrature,
    /// Closed-form left-segment expression, kept for comparison.
    ClosedForm,
}

impl std::fmt::Display for CoefficientMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoefficientMethod::Quadrature => f.write_str("quadrature"),
            CoefficientMethod::ClosedForm => f.write_str("closed-form"),
        }
    }
}

const COEFF_REL_TOL: f64 = 1e-10;

/// Initial deviation `g(x) = Ta - U^S(x)`, expressed directly so integrands
/// stay total functions.
fn deviation<R: Real>(s: &SteadySolution<R>, x: R) -> R {
    let p = s.problem();
    let qmu = s.flux();
    let l = p.interface();
    if x <= l {
        p.ambient() - p.source() + qmu * x / p.left().k()
    } else {
        p.ambient() - p.source() + qmu * ((x - l) / p.right().k() + l / p.left().k())
    }
}

fn oscillation_panels<R: Real>(phase_span: R) -> usize {
    (phase_span / R::FRAC_PI_2()).ceil().as_f64() as usize + 4
}

/// Left-segment sine amplitude ratio
/// `int_0^l g sin(lambda1 x) dx / int_0^l sin^2(lambda1 x) dx`,
/// the quantity the closed form below intends to express.
pub fn coefficient_left_segment_ratio<R: Real>(
    s: &SteadySolution<R>,
    mode: &Eigenmode<R>,
) -> Result<R> {
    let p = s.problem();
    let l = p.interface();
    let b = mode.lambda1;
    let tol = R::lit(COEFF_REL_TOL);
    let num = integrate(
        |x| deviation(s, x) * (b * x).sin(),
        R::zero(),
        l,
        tol,
        oscillation_panels(b * l),
    )?;
    let two = R::lit(2.0);
    let four = R::lit(4.0);
    let den = l / two - (two * b * l).sin() / (four * b);
    let den_scale = R::lit(1e-14) * (R::one() + l);
    if den.abs() <= den_scale {
        return Err(Error::DegenerateDenominator {
            index: mode.index,
            magnitude: den.abs().as_f64(),
        });
    }
    Ok(num / den)
}

/// Closed-form left-segment coefficient
///
/// ```text
/// C_n = 2 (Ta - F) [ -(mu h / k2) sin(b l)/b + cos(b l)((mu h / k2) l - 1) + 1 ]
///       / [ b l - sin(b l) cos(b l) ],      b = lambda1
/// ```
///
/// This is the textbook-style reduction of
/// [`coefficient_left_segment_ratio`], except that its slope factor divides
/// the flux by the right conductivity where the left segment's own slope
/// carries `k1`; the two therefore agree only when `k1 = k2`. It is retained
/// verbatim for the comparison report rather than silently corrected.
pub fn coefficient_closed_form<R: Real>(
    s: &SteadySolution<R>,
    mode: &Eigenmode<R>,
) -> Result<R> {
    let p = s.problem();
    let l = p.interface();
    let b = mode.lambda1;
    let bl = b * l;
    let den = bl - bl.sin() * bl.cos();
    if den.abs() <= R::lit(1e-14) * (R::one() + bl.abs()) {
        return Err(Error::DegenerateDenominator {
            index: mode.index,
            magnitude: den.abs().as_f64(),
        });
    }
    let mh = s.mu() * p.h() / p.right().k();
    let num = -bl.sin() / b * mh + bl.cos() * (mh * l - R::one()) + R::one();
    Ok(R::lit(2.0) * (p.ambient() - p.source()) * num / den)
}

/// Weighted full-bar projection coefficient (the default method).
///
/// Uses the heat-capacity weight `w = k_i / alpha_i^2` under which the modes
/// are orthogonal, so the series actually attains the uniform initial
/// condition.
pub fn coefficient_quadrature<R: Real>(
    s: &SteadySolution<R>,
    mode: &Eigenmode<R>,
) -> Result<R> {
    let p = s.problem();
    let l = p.interface();
    let len = p.length();
    let w1 = p.left().k() / p.left().alpha2();
    let w2 = p.right().k() / p.right().alpha2();
    let tol = R::lit(COEFF_REL_TOL);
    let panels_l = oscillation_panels(mode.lambda1 * l);
    let panels_r = oscillation_panels(mode.lambda * (len - l));

    let num_l = integrate(
        |x| deviation(s, x) * mode.shape(p, x),
        R::zero(),
        l,
        tol,
        panels_l,
    )?;
    let num_r = integrate(
        |x| deviation(s, x) * mode.shape(p, x),
        l,
        len,
        tol,
        panels_r,
    )?;
    let den_l = integrate(
        |x| {
            let v = mode.shape(p, x);
            v * v
        },
        R::zero(),
        l,
        tol,
        panels_l,
    )?;
    let den_r = integrate(
        |x| {
            let v = mode.shape(p, x);
            v * v
        },
        l,
        len,
        tol,
        panels_r,
    )?;

    let num = w1 * num_l + w2 * num_r;
    let den = w1 * den_l + w2 * den_r;
    let den_scale = R::lit(1e-14) * (w1 * l + w2 * (len - l));
    // catches NaN as well as underflow
    if den.is_nan() || den <= den_scale {
        return Err(Error::DegenerateDenominator {
            index: mode.index,
            magnitude: den.as_f64(),
        });
    }
    Ok(num / den)
}

/// The assembled series solution: steady part plus `N` transient modes.
#[derive(Debug, Clone)]
pub struct AnalyticSolution<R: Real> {
    steady: SteadySolution<R>,
    modes: Vec<Eigenmode<R>>,
    coefficients: Vec<R>,
    method: CoefficientMethod,
}

impl<R: Real> AnalyticSolution<R> {
    /// Solves the eigenproblem and projects the initial data onto the first
    /// `n_modes` modes. `n_modes = 0` degenerates to the steady solution.
    pub fn assemble(
        p: &BarProblem<R>,
        n_modes: usize,
        method: CoefficientMethod,
    ) -> Result<Self> {
        let steady = SteadySolution::solve(p);
        let modes = if n_modes == 0 {
            Vec::new()
        } else {
            find_eigenvalues(p, n_modes)?
        };
        let coefficients = modes
            .iter()
            .map(|m| match method {
                CoefficientMethod::Quadrature => coefficient_quadrature(&steady, m),
                CoefficientMethod::ClosedForm => coefficient_closed_form(&steady, m),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            steady,
            modes,
            coefficients,
            method,
        })
    }

    pub fn steady(&self) -> &SteadySolution<R> {
        &self.steady
    }

    pub fn problem(&self) -> &BarProblem<R> {
        self.steady.problem()
    }

    pub fn modes(&self) -> &[Eigenmode<R>] {
        &self.modes
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coefficients
    }

    pub fn method(&self) -> CoefficientMethod {
        self.method
    }

    /// The same solution truncated to its first `n` modes.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.modes.len());
        Self {
            steady: self.steady.clone(),
            modes: self.modes[..n].to_vec(),
            coefficients: self.coefficients[..n].to_vec(),
            method: self.method,
        }
    }

    fn check_time(&self, t: R) -> Result<()> {
        if !(t.is_finite() && t >= R::zero()) {
            return Err(Error::InvalidTime(t.as_f64()));
        }
        Ok(())
    }

    /// The transient part `phi(x, t)`; tends to zero as `t` grows.
    ///
    /// `t = 0` is allowed for diagnostics, but there the truncated series
    /// carries its full Gibbs overshoot against the discontinuous initial
    /// data, so treat such values as qualitative.
    pub fn transient(&self, x: R, t: R) -> Result<R> {
        self.check_time(t)?;
        let p = self.problem();
        if !(x.is_finite() && x >= R::zero() && x <= p.length()) {
            return Err(Error::PositionOutOfDomain {
                x: x.as_f64(),
                length: p.length().as_f64(),
            });
        }
        let mut acc = R::zero();
        for (m, &c) in self.modes.iter().zip(&self.coefficients) {
            acc = acc + c * m.shape(p, x) * (-m.decay_rate(p) * t).exp();
        }
        Ok(acc)
    }

    /// Full temperature `U(x, t) = U^S(x) + phi(x, t)`.
    pub fn eval(&self, x: R, t: R) -> Result<R> {
        Ok(self.steady.eval(x)? + self.transient(x, t)?)
    }

    /// Crude upper estimate of the dropped tail `|sum_{n > N} ...|` at time
    /// `t > 0`, from the last kept mode's amplitude and the spectral gap.
    pub fn tail_estimate(&self, t: R) -> R {
        let p = self.problem();
        let Some(last) = self.modes.last() else {
            return R::infinity();
        };
        if t.is_nan() || t <= R::zero() {
            return R::infinity();
        }
        let amp = |m: &Eigenmode<R>| R::one().max(m.a.hypot(m.b));
        let c_last = self.coefficients.last().copied().unwrap_or(R::zero());
        let head = c_last.abs() * amp(last) * (-last.decay_rate(p) * t).exp();
        let gap = if self.modes.len() >= 2 {
            let prev = &self.modes[self.modes.len() - 2];
            (last.decay_rate(p) - prev.decay_rate(p)) * t
        } else {
            last.decay_rate(p) * t
        };
        let ratio = (-gap).exp();
        if ratio >= R::lit(0.999) {
            return R::infinity();
        }
        R::lit(2.0) * head / (R::one() - ratio)
    }

    /// L2 distance between the reconstructed initial profile and the true
    /// uniform initial condition, on `(0, l)` and `(l, L)` separately.
    ///
    /// Composite Simpson on 4000 fixed intervals per segment: deterministic
    /// and fine enough to resolve the highest mode this crate is asked for.
    pub fn reconstruction_error(&self) -> (R, R) {
        let p = self.problem().clone();
        let l = p.interface();
        (
            self.l2_against_ambient(R::zero(), l),
            self.l2_against_ambient(l, p.length()),
        )
    }

    fn l2_against_ambient(&self, a: R, b: R) -> R {
        const INTERVALS: usize = 4000;
        let ta = self.problem().ambient();
        let h = (b - a) / R::lit(INTERVALS as f64);
        let sq = |x: R| {
            let e = self.eval(x, R::zero()).expect("grid stays inside the bar") - ta;
            e * e
        };
        let mut acc = sq(a) + sq(b);
        for i in 1..INTERVALS {
            let x = a + h * R::lit(i as f64);
            let w = if i % 2 == 1 { R::lit(4.0) } else { R::lit(2.0) };
            acc = acc + w * sq(x);
        }
        (acc * h / R::lit(3.0)).sqrt()
    }
}
