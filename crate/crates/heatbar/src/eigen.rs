//! The interface eigenvalue problem.
//!
//! Separating variables on the two-material bar produces modes
//!
//! ```text
//! X(x) = sin(alpha lambda x)                                   on (0, l)
//! X(x) = A sin(lambda (x - l)) + B cos(lambda (x - l))         on (l, L)
//! ```
//!
//! with `A = k alpha cos(alpha lambda l)`, `B = sin(alpha lambda l)`, where
//! `alpha` and `k` are the diffusivity and conductivity ratios. Admissible
//! `lambda` solve the transcendental relation
//!
//! ```text
//! -(k2/h) x = (tan(alpha l x) + k alpha tan((L-l) x))
//!             / (k alpha - tan(alpha l x) tan((L-l) x))
//! ```
//!
//! whose right side collapses to `tan(f(x))` for the phase function
//! `f(x) = atan(tan(alpha l x)/(k alpha)) + (L-l) x`. The solver works with
//! the level function `F(x) = f(x) + atan((k2/h) x)`: `F` increases strictly
//! between consecutive discontinuities of the `atan(tan ...)` branch (where
//! it drops by exactly pi), so every root is the unique solution of
//! `F(x) = m pi` for some integer `m` inside one continuity interval. That
//! turns global root finding into bracketed bisection with no sign scanning
//! and no missed roots.

use crate::error::{Error, Result};
use crate::problem::BarProblem;
use crate::scalar::Real;

/// Relative half-width of the rejection band around branch discontinuities.
const JUMP_GUARD: f64 = 1e-9;

/// Band (on the level-function scale) inside which a level is treated as
/// tangent to an interval endpoint.
const TANGENCY_BAND: f64 = 1e-9;

/// Branch structure of the phase function for one problem.
#[derive(Debug, Clone)]
pub struct BranchLayout<R: Real> {
    alpha_l: R,
    k_alpha: R,
    tail: R,
    k2_over_h: R,
    jumps: Vec<R>,
}

impl<R: Real> BranchLayout<R> {
    /// Lays out the first `n_jumps` discontinuities
    /// `x_n = (2n - 1) pi / (2 alpha l)`.
    pub fn new(p: &BarProblem<R>, n_jumps: usize) -> Self {
        let r = p.ratios();
        let alpha_l = r.alpha * p.interface();
        let delta = R::PI() / (R::lit(2.0) * alpha_l);
        let jumps = (1..=n_jumps)
            .map(|n| delta * R::from_usize(2 * n - 1).expect("jump index fits in scalar"))
            .collect();
        Self {
            alpha_l,
            k_alpha: r.k_ratio * r.alpha,
            tail: p.length() - p.interface(),
            k2_over_h: p.right().k() / p.h(),
            jumps,
        }
    }

    /// Discontinuities of `f`, in ascending order.
    pub fn jumps(&self) -> &[R] {
        &self.jumps
    }

    /// The discontinuity closest to `x` (not restricted to the stored ones).
    pub fn nearest_jump(&self, x: R) -> R {
        let delta = R::PI() / (R::lit(2.0) * self.alpha_l);
        let n = ((x / delta + R::one()) * R::lit(0.5)).round().max(R::one());
        (R::lit(2.0) * n - R::one()) * delta
    }

    fn guard(&self, x: R) -> Result<()> {
        let jump = self.nearest_jump(x);
        let tol = R::lit(JUMP_GUARD) * (R::one() + x.abs());
        if (x - jump).abs() <= tol {
            return Err(Error::AtBranchJump {
                x: x.as_f64(),
                jump: jump.as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(())
    }

    pub(crate) fn f_raw(&self, x: R) -> R {
        ((self.alpha_l * x).tan() / self.k_alpha).atan() + self.tail * x
    }

    pub(crate) fn level_raw(&self, x: R) -> R {
        self.f_raw(x) + (self.k2_over_h * x).atan()
    }

    /// The phase function `f(x)`; rejects points within the guard band of a
    /// discontinuity, where the principal branch is about to flip.
    pub fn f(&self, x: R) -> Result<R> {
        self.guard(x)?;
        Ok(self.f_raw(x))
    }

    /// The level function `F(x) = f(x) + atan((k2/h) x)` the root finder
    /// bisects on; guarded like [`Self::f`].
    pub fn level(&self, x: R) -> Result<R> {
        self.guard(x)?;
        Ok(self.level_raw(x))
    }

    /// One-sided limit of `F` as `x` approaches the discontinuity `b` from
    /// the left: `pi/2 + (L-l) b + atan((k2/h) b)`.
    fn upper_limit(&self, b: R) -> R {
        R::FRAC_PI_2() + self.tail * b + (self.k2_over_h * b).atan()
    }
}

/// Left- and right-hand sides of the transcendental eigenvalue relation at
/// `x`, for inspection and for residual checks at computed roots.
///
/// Fails where either tangent blows up or the combined denominator
/// `k alpha - tan tan` vanishes; roots never sit on those sets, but probe
/// points can.
pub fn lhs_rhs<R: Real>(p: &BarProblem<R>, x: R) -> Result<(R, R)> {
    let r = p.ratios();
    let k_alpha = r.k_ratio * r.alpha;
    let a1 = r.alpha * p.interface() * x;
    let a2 = (p.length() - p.interface()) * x;
    let eps = R::lit(1e-12);
    if a1.cos().abs() <= eps {
        return Err(Error::SingularEigenRelation {
            x: x.as_f64(),
            what: "cos(alpha l x)",
            magnitude: a1.cos().abs().as_f64(),
        });
    }
    if a2.cos().abs() <= eps {
        return Err(Error::SingularEigenRelation {
            x: x.as_f64(),
            what: "cos((L - l) x)",
            magnitude: a2.cos().abs().as_f64(),
        });
    }
    let (t1, t2) = (a1.tan(), a2.tan());
    let den = k_alpha - t1 * t2;
    let den_scale = k_alpha.abs() + (t1 * t2).abs() + R::one();
    if den.abs() <= eps * den_scale {
        return Err(Error::SingularEigenRelation {
            x: x.as_f64(),
            what: "k alpha - tan tan",
            magnitude: den.abs().as_f64(),
        });
    }
    let lhs = -(p.right().k() / p.h()) * x;
    let rhs = (t1 + k_alpha * t2) / den;
    Ok((lhs, rhs))
}

/// One separated mode of the transient problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenmode<R: Real> {
    /// 1-based position in the ascending spectrum.
    pub index: usize,
    /// Eigenvalue `lambda` (the right-segment wavenumber).
    pub lambda: R,
    /// Left-segment wavenumber `lambda1 = alpha lambda`.
    pub lambda1: R,
    /// Right-segment sine amplitude `A = k alpha cos(alpha lambda l)`.
    pub a: R,
    /// Right-segment cosine amplitude `B = sin(alpha lambda l)`.
    pub b: R,
    /// Normalized residual of the Robin condition at `x = L`.
    pub residual: R,
}

impl<R: Real> Eigenmode<R> {
    /// The eigenfunction `X(x)`; the interface point is served by the left
    /// branch, which matches the right branch there by construction.
    pub fn shape(&self, p: &BarProblem<R>, x: R) -> R {
        if x <= p.interface() {
            (self.lambda1 * x).sin()
        } else {
            let th = self.lambda * (x - p.interface());
            self.a * th.sin() + self.b * th.cos()
        }
    }

    /// Spatial derivative `X'(x)` (left branch at the interface point).
    pub fn shape_dx(&self, p: &BarProblem<R>, x: R) -> R {
        if x <= p.interface() {
            self.lambda1 * (self.lambda1 * x).cos()
        } else {
            let th = self.lambda * (x - p.interface());
            self.lambda * (self.a * th.cos() - self.b * th.sin())
        }
    }

    /// Exponential decay rate `lambda^2 alpha2_right` of this mode, 1/s.
    pub fn decay_rate(&self, p: &BarProblem<R>) -> R {
        self.lambda * self.lambda * p.right().alpha2()
    }
}

pub(crate) fn robin_residual<R: Real>(p: &BarProblem<R>, lambda: R, a: R, b: R) -> R {
    let th = lambda * (p.length() - p.interface());
    let x2 = a * th.sin() + b * th.cos();
    let x2p = lambda * (a * th.cos() - b * th.sin());
    let num = p.right().k() * x2p + p.h() * x2;
    let scale = (p.right().k() * lambda + p.h()) * (a.abs() + b.abs());
    num.abs() / scale
}

fn make_mode<R: Real>(p: &BarProblem<R>, index: usize, lambda: R) -> Eigenmode<R> {
    let r = p.ratios();
    let lambda1 = r.alpha * lambda;
    let a = r.k_ratio * r.alpha * (lambda1 * p.interface()).cos();
    let b = (lambda1 * p.interface()).sin();
    let residual = robin_residual(p, lambda, a, b);
    Eigenmode {
        index,
        lambda,
        lambda1,
        a,
        b,
        residual,
    }
}

/// Bisects `F(x) = level` inside the continuity interval `(a, b)`.
///
/// `F` is strictly increasing on the interval and the caller guarantees the
/// level lies between the one-sided limits, so only interior signs are
/// needed; the endpoints are never evaluated at the discontinuities
/// themselves.
fn bisect_level<R: Real>(layout: &BranchLayout<R>, a: R, b: R, level: R, wide: bool) -> R {
    // The epsilon floor keeps the offsets meaningful in f32, where 1e-13
    // relative would round away entirely.
    let base = if wide { R::lit(1e-10) } else { R::lit(1e-13) };
    let off = base.max(R::epsilon() * R::lit(50.0));
    let mut lo = a + off * (R::one() + a.abs());
    let mut hi = b - off * (R::one() + b.abs());
    if hi <= lo {
        return (a + b) * R::lit(0.5);
    }
    let mut glo = layout.level_raw(lo) - level;
    let mut ghi = layout.level_raw(hi) - level;
    if glo >= R::zero() {
        return lo; // root squeezed against the left discontinuity
    }
    if ghi <= R::zero() {
        return hi; // tangency: crossing sits at or beyond the right limit
    }
    let (outer_lo, outer_hi) = (lo, hi);
    for _ in 0..220 {
        let mut mid = (lo + hi) * R::lit(0.5);
        let jump = layout.nearest_jump(mid);
        if (mid - jump).abs() <= R::lit(1e-14) * (R::one() + mid.abs()) {
            mid = lo * R::lit(0.25) + hi * R::lit(0.75);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        let g = layout.level_raw(mid) - level;
        if g == R::zero() {
            return mid;
        }
        if g < R::zero() {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
            ghi = g;
        }
        if hi - lo <= R::lit(1e-13) * (R::one() + mid.abs()) {
            break;
        }
    }
    // Derivative-free secant polish on the residual.
    let (mut x0, mut g0, mut x1, mut g1) = (lo, glo, hi, ghi);
    let (mut best, mut best_g) = if g0.abs() <= g1.abs() {
        (x0, g0.abs())
    } else {
        (x1, g1.abs())
    };
    let target = R::lit(1e-10) * (R::one() + level.abs());
    for _ in 0..3 {
        if best_g <= target || g1 == g0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        if !x2.is_finite() || x2 <= outer_lo || x2 >= outer_hi {
            break;
        }
        let g2 = layout.level_raw(x2) - level;
        if g2.abs() < best_g {
            best = x2;
            best_g = g2.abs();
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g2;
    }
    best
}

fn dedup_roots<R: Real>(roots: &mut Vec<R>) {
    let radius = R::lit(1e-9).max(R::epsilon() * R::lit(100.0));
    roots.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
    roots.dedup_by(|b, a| (*b - *a).abs() <= radius * (R::one() + b.abs()));
}

fn enumerate_roots<R: Real>(layout: &BranchLayout<R>, want: usize) -> Vec<R> {
    let pi = R::PI();
    let mut roots: Vec<R> = Vec::with_capacity(want + 4);
    let mut a = R::zero();
    let mut f_start = R::zero();
    for &b in layout.jumps() {
        let f_end = layout.upper_limit(b);
        let band = R::lit(TANGENCY_BAND) * (R::one() + f_end.abs());
        let m_lo = ((f_start / pi).floor().as_f64() as i64 + 1).max(0);
        let m_hi = (f_end / pi).ceil().as_f64() as i64 - 1;
        for m in m_lo..=m_hi {
            let level = pi * R::from_i64(m).expect("level index fits in scalar");
            if !(level > f_start && level < f_end) {
                continue;
            }
            let tangent = level - f_start <= band || f_end - level <= band;
            if tangent {
                log::warn!(
                    "eigenvalue level {m} pi is tangent to the branch jump near x = {b}; \
                     bracket perturbed"
                );
            }
            roots.push(bisect_level(layout, a, b, level, tangent));
        }
        // A level meeting the interval's upper limit exactly (or a hair
        // above it) is a root parked on the discontinuity itself; neither
        // this interval nor the next sees it as strictly interior.
        let m_end = (f_end / pi).round();
        let level_end = m_end * pi;
        if level_end >= f_end
            && level_end - f_end <= band
            && m_end >= R::one()
            && level_end > f_start
        {
            log::warn!(
                "eigenvalue level at the branch jump x = {b}; returning a perturbed root"
            );
            roots.push(b - R::lit(1e-10) * (R::one() + b.abs()));
        }
        a = b;
        f_start = f_end - pi;
        if roots.len() >= want + 4 {
            break;
        }
    }
    dedup_roots(&mut roots);
    roots
}

/// Computes the first `count` eigenvalues in ascending order, with their
/// mode data and Robin residuals.
///
/// The search walks `count + 5` continuity intervals, which always suffices
/// because `F` gains more than pi per interval; the bound is nevertheless
/// extended once before giving up, as cheap insurance.
pub fn find_eigenvalues<R: Real>(p: &BarProblem<R>, count: usize) -> Result<Vec<Eigenmode<R>>> {
    if count == 0 {
        return Err(Error::ZeroModeCount);
    }
    let mut n_jumps = count + 5;
    for attempt in 0..2 {
        let layout = BranchLayout::new(p, n_jumps);
        let roots = enumerate_roots(&layout, count);
        if roots.len() >= count {
            let modes: Vec<_> = roots[..count]
                .iter()
                .enumerate()
                .map(|(i, &lam)| make_mode(p, i + 1, lam))
                .collect();
            debug_assert!(modes.windows(2).all(|w| w[0].lambda < w[1].lambda));
            return Ok(modes);
        }
        if attempt == 0 {
            log::warn!(
                "eigenvalue search found {} of {} roots below {} intervals; extending bound",
                roots.len(),
                count,
                n_jumps
            );
            n_jumps *= 2;
        } else {
            return Err(Error::EigenSearchExhausted {
                found: roots.len(),
                requested: count,
                bound: layout.jumps().last().map_or(0.0, |j| j.as_f64()),
            });
        }
    }
    unreachable!("both search attempts return")
}

/// Residuals of every defining condition for one mode, each normalized to
/// unit eigenfunction amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCheck<R: Real> {
    /// `|X(0)|`; exactly zero for the sine basis.
    pub origin: R,
    /// Temperature continuity `|X1(l) - X2(l)|`, normalized.
    pub value_jump: R,
    /// Flux continuity `|k1 X1'(l) - k2 X2'(l)|`, normalized.
    pub flux_jump: R,
    /// Flux residual if the sine amplitude were built from the interface
    /// position `l` instead of the conductivity ratio `k`. The two choices
    /// collide numerically when `l` happens to equal `k1/k2`, so both are
    /// reported to keep a mix-up visible.
    pub flux_jump_length_weighted: R,
    /// Robin condition at `x = L`, normalized.
    pub robin: R,
    /// Largest of the four defining residuals (the length-weighted variant
    /// is informational and excluded).
    pub max: R,
}

/// Evaluates all boundary, interface, and end conditions for a mode.
pub fn verify_mode<R: Real>(p: &BarProblem<R>, mode: &Eigenmode<R>) -> ModeCheck<R> {
    let r = p.ratios();
    let l = p.interface();
    let (k1, k2) = (p.left().k(), p.right().k());
    let origin = (mode.lambda1 * R::zero()).sin().abs();
    let x1l = (mode.lambda1 * l).sin();
    let x1pl = mode.lambda1 * (mode.lambda1 * l).cos();
    let x2l = mode.b;
    let x2pl = mode.lambda * mode.a;
    let value_jump = (x1l - x2l).abs() / (R::one() + x1l.abs() + x2l.abs());
    let flux_scale = k1 * mode.lambda1 + k2 * mode.lambda;
    let flux_jump = (k1 * x1pl - k2 * x2pl).abs() / flux_scale;
    let a_alt = l * r.alpha * (mode.lambda1 * l).cos();
    let flux_jump_length_weighted = (k1 * x1pl - k2 * mode.lambda * a_alt).abs() / flux_scale;
    let robin = robin_residual(p, mode.lambda, mode.a, mode.b);
    let max = origin.max(value_jump).max(flux_jump).max(robin);
    ModeCheck {
        origin,
        value_jump,
        flux_jump,
        flux_jump_length_weighted,
        robin,
        max,
    }
}
