//! Adaptive Simpson integration.
//!
//! The coefficient projections integrate products of steady profiles and
//! eigenfunctions, which oscillate at the mode frequency. Callers therefore
//! pass a minimum panel count so the initial subdivision already resolves the
//! oscillation; the adaptive recursion then only has to polish.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to the requested relative tolerance.
///
/// `min_panels` seeds the initial uniform subdivision; use at least a few
/// panels per oscillation period of the integrand. Fails if the recursion
/// cannot reach the tolerance or the integrand produces non-finite values.
pub fn integrate<R: Real>(
    f: impl Fn(R) -> R,
    a: R,
    b: R,
    rel_tol: R,
    min_panels: usize,
) -> Result<R> {
    if a == b {
        return Ok(R::zero());
    }
    if a > b {
        return integrate(f, b, a, rel_tol, min_panels).map(|v| -v);
    }
    let panels = min_panels.max(4);
    let width = (b - a) / R::from_usize(panels).expect("panel count fits in scalar");

    // First pass: composite Simpson over the seed panels, to size the
    // absolute tolerance budget.
    let mut seeds = Vec::with_capacity(panels);
    let mut rough = R::zero();
    for i in 0..panels {
        let x0 = a + width * R::from_usize(i).expect("panel index fits");
        let x1 = if i + 1 == panels { b } else { x0 + width };
        let xm = (x0 + x1) * R::lit(0.5);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        if !(f0.is_finite() && fm.is_finite() && f1.is_finite()) {
            return Err(Error::QuadratureDidNotConverge {
                a: a.as_f64(),
                b: b.as_f64(),
                estimate: f64::NAN,
            });
        }
        let s = simpson(x0, x1, f0, fm, f1);
        rough = rough + s;
        seeds.push((x0, x1, f0, fm, f1, s));
    }

    // Absolute budget per unit length; the eps floor keeps an identically
    // zero integrand from demanding the impossible.
    let scale = rough.abs().max(R::epsilon() * (b - a));
    let tol_total = rel_tol * scale;
    let tol_panel = tol_total / R::from_usize(panels).expect("panel count fits");

    let mut total = R::zero();
    for (x0, x1, f0, fm, f1, s) in seeds {
        total = total + refine(&f, x0, x1, f0, fm, f1, s, tol_panel, 0, a, b)?;
    }
    Ok(total)
}

fn simpson<R: Real>(x0: R, x1: R, f0: R, fm: R, f1: R) -> R {
    (x1 - x0) / R::lit(6.0) * (f0 + R::lit(4.0) * fm + f1)
}

#[allow(clippy::too_many_arguments)]
fn refine<R: Real>(
    f: &impl Fn(R) -> R,
    x0: R,
    x1: R,
    f0: R,
    fm: R,
    f1: R,
    whole: R,
    tol: R,
    depth: u32,
    a: R,
    b: R,
) -> Result<R> {
    let xm = (x0 + x1) * R::lit(0.5);
    let xl = (x0 + xm) * R::lit(0.5);
    let xr = (xm + x1) * R::lit(0.5);
    let (fl, fr) = (f(xl), f(xr));
    if !(fl.is_finite() && fr.is_finite()) {
        return Err(Error::QuadratureDidNotConverge {
            a: a.as_f64(),
            b: b.as_f64(),
            estimate: f64::NAN,
        });
    }
    let left = simpson(x0, xm, f0, fl, fm);
    let right = simpson(xm, x1, fm, fr, f1);
    let delta = left + right - whole;
    if delta.abs() <= R::lit(15.0) * tol || xm <= x0 || xm >= x1 {
        // Richardson tail correction for the accepted node.
        return Ok(left + right + delta / R::lit(15.0));
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureDidNotConverge {
            a: a.as_f64(),
            b: b.as_f64(),
            estimate: delta.abs().as_f64(),
        });
    }
    let half_tol = tol * R::lit(0.5);
    let lv = refine(f, x0, xm, f0, fl, fm, left, half_tol, depth + 1, a, b)?;
    let rv = refine(f, xm, x1, fm, fr, f1, right, half_tol, depth + 1, a, b)?;
    Ok(lv + rv)
}
