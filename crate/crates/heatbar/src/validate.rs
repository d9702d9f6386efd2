//! Cross-checks between the three solution routes.
//!
//! The steady profile, the eigenfunction series, and the explicit
//! finite-difference march are independent computations that must land on
//! the same temperatures. This module measures how far apart they actually
//! are and packages the measurements into a plain-text report.

use std::fmt::Write as _;

use crate::eigen::{find_eigenvalues, verify_mode, BranchLayout, Eigenmode, ModeCheck};
use crate::error::{Error, Result};
use crate::fdm::{check_stability, FdmState, GridSpec, StabilityCheck};
use crate::problem::BarProblem;
use crate::scalar::Real;
use crate::series::{
    coefficient_closed_form, coefficient_left_segment_ratio, coefficient_quadrature,
    AnalyticSolution, CoefficientMethod,
};
use crate::steady::SteadySolution;

/// Series truncation noise dominates comparisons at very early times, so
/// profile comparisons insist on at least a minute of simulated time.
pub const MIN_COMPARISON_TIME_S: f64 = 60.0;

/// Distance between the analytic and finite-difference profiles at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileComparison<R: Real> {
    pub t: R,
    /// max over grid nodes of |series - FDM|
    pub linf: R,
    /// node position where the max is attained
    pub worst_x: R,
    /// sqrt(dx sum (series - FDM)^2), a node-weighted L2 distance
    pub l2: R,
    /// max |FDM - steady|: how far the march still is from equilibrium
    pub fdm_vs_steady_linf: R,
    /// max |series - steady|: the transient remnant the series itself carries
    pub analytic_vs_steady_linf: R,
}

/// Compares the truncated series against the explicit march at each time in
/// `times` (seconds, each at least [`MIN_COMPARISON_TIME_S`]), marching the
/// grid once through the sorted list.
pub fn compare_profiles<R: Real>(
    p: &BarProblem<R>,
    grid: &GridSpec<R>,
    times: &[R],
    n_modes: usize,
) -> Result<Vec<ProfileComparison<R>>> {
    let min = R::lit(MIN_COMPARISON_TIME_S);
    for &t in times {
        if !(t.is_finite() && t >= min) {
            return Err(Error::ComparisonTimeTooSmall {
                min: MIN_COMPARISON_TIME_S,
                got: t.as_f64(),
            });
        }
    }
    let series = AnalyticSolution::assemble(p, n_modes, CoefficientMethod::Quadrature)?;
    let steady = SteadySolution::solve(p);
    let mut steps: Vec<u64> = times
        .iter()
        .map(|&t| (t / grid.dt()).round().as_f64() as u64)
        .collect();
    steps.sort_unstable();
    steps.dedup();

    let xs = grid.positions();
    let mut state = FdmState::new(p, grid);
    let mut out = Vec::with_capacity(steps.len());
    for target in steps {
        state.advance(target - state.steps())?;
        let t = state.time();
        let mut cmp = ProfileComparison {
            t,
            linf: R::zero(),
            worst_x: R::zero(),
            l2: R::zero(),
            fdm_vs_steady_linf: R::zero(),
            analytic_vs_steady_linf: R::zero(),
        };
        let mut sq = R::zero();
        for (&x, &u_fdm) in xs.iter().zip(state.temps()) {
            let u_series = series.eval(x, t)?;
            let u_steady = steady.eval(x)?;
            let d = (u_series - u_fdm).abs();
            if d > cmp.linf {
                cmp.linf = d;
                cmp.worst_x = x;
            }
            sq = sq + d * d;
            cmp.fdm_vs_steady_linf = cmp.fdm_vs_steady_linf.max((u_fdm - u_steady).abs());
            cmp.analytic_vs_steady_linf =
                cmp.analytic_vs_steady_linf.max((u_series - u_steady).abs());
        }
        cmp.l2 = (sq * grid.dx()).sqrt();
        out.push(cmp);
    }
    Ok(out)
}

/// How far the march is from the steady profile at `t` and at `2t`.
///
/// The second number can never meaningfully exceed the first: the explicit
/// scheme relaxes monotonically toward its discrete equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyConsistency<R: Real> {
    pub t: R,
    pub linf: R,
    pub linf_doubled: R,
}

pub fn steady_consistency<R: Real>(
    p: &BarProblem<R>,
    grid: &GridSpec<R>,
    t: R,
) -> Result<SteadyConsistency<R>> {
    if !(t.is_finite() && t > R::zero()) {
        return Err(Error::InvalidTime(t.as_f64()));
    }
    let steady = SteadySolution::solve(p);
    let xs = grid.positions();
    let gap = |state: &FdmState<R>| -> Result<R> {
        let mut worst = R::zero();
        for (&x, &u) in xs.iter().zip(state.temps()) {
            worst = worst.max((u - steady.eval(x)?).abs());
        }
        Ok(worst)
    };
    let steps = (t / grid.dt()).round().as_f64() as u64;
    let mut state = FdmState::new(p, grid);
    state.advance(steps)?;
    let linf = gap(&state)?;
    state.advance(steps)?;
    let linf_doubled = gap(&state)?;
    Ok(SteadyConsistency {
        t,
        linf,
        linf_doubled,
    })
}

/// First simulated time at which the probe nearest `x` reaches `fraction`
/// of the way from ambient to its local steady temperature.
pub fn time_to_fraction<R: Real>(
    p: &BarProblem<R>,
    grid: &GridSpec<R>,
    x: R,
    fraction: R,
    t_cap: R,
) -> Result<R> {
    if !(fraction > R::zero() && fraction < R::one()) {
        return Err(Error::InvalidFraction(fraction.as_f64()));
    }
    if !(t_cap.is_finite() && t_cap > R::zero()) {
        return Err(Error::InvalidTime(t_cap.as_f64()));
    }
    let node = grid.node_at(x, p.length())?;
    let x_node = grid.dx() * R::lit(node as f64);
    let steady = SteadySolution::solve(p);
    let target = p.ambient() + fraction * (steady.eval(x_node)? - p.ambient());
    let max_steps = (t_cap / grid.dt()).ceil().as_f64() as u64;
    let mut state = FdmState::new(p, grid);
    if state.temps()[node] >= target {
        return Ok(R::zero());
    }
    for _ in 0..max_steps {
        state.step()?;
        if state.temps()[node] >= target {
            return Ok(state.time());
        }
    }
    Err(Error::TargetNotReached {
        x: x_node.as_f64(),
        fraction: fraction.as_f64(),
        t_cap: t_cap.as_f64(),
    })
}

/// The two constants of the transcendental eigenvalue relation, written in
/// both circulating parameterizations.
///
/// The relation compares `tan(alpha l x)` against `k alpha` with
/// `alpha = alpha2/alpha1` and `k = k1/k2`. Published worked examples
/// sometimes carry the reciprocal convention (`alpha1/alpha2`, `k2/k1`)
/// without saying so; quoting both forms side by side makes an imported
/// constant immediately attributable to one convention or the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationConstants<R: Real> {
    /// `alpha * l`, the frequency of the left-segment tangent
    pub alpha_l: R,
    /// `k * alpha`, the amplitude ratio across the interface
    pub k_alpha: R,
    /// `l / alpha`: what `alpha * l` becomes if alpha is inverted
    pub alpha_l_reciprocal: R,
    /// `1 / (k alpha)`: the same relation solved for the other segment
    pub k_alpha_reciprocal: R,
}

pub fn relation_constants<R: Real>(p: &BarProblem<R>) -> RelationConstants<R> {
    let r = p.ratios();
    let l = p.interface();
    RelationConstants {
        alpha_l: r.alpha * l,
        k_alpha: r.k_ratio * r.alpha,
        alpha_l_reciprocal: l / r.alpha,
        k_alpha_reciprocal: (r.k_ratio * r.alpha).recip(),
    }
}

/// One eigenmode together with the defect sizes of everything it promises.
#[derive(Debug, Clone)]
pub struct EigenAuditRow<R: Real> {
    pub mode: Eigenmode<R>,
    pub check: ModeCheck<R>,
    /// Which multiple of pi the phase function attains at this root; `None`
    /// when the root sits on a branch jump where the phase is not evaluable.
    pub level: Option<u32>,
}

/// Solves the eigenproblem and verifies every boundary and matching
/// condition mode by mode.
pub fn audit_eigen<R: Real>(p: &BarProblem<R>, count: usize) -> Result<Vec<EigenAuditRow<R>>> {
    let modes = find_eigenvalues(p, count)?;
    let layout = BranchLayout::new(p, count + 5);
    Ok(modes
        .into_iter()
        .map(|mode| {
            let check = verify_mode(p, &mode);
            let level = layout
                .level(mode.lambda)
                .ok()
                .map(|v| (v / R::PI()).round().as_f64() as u32);
            EigenAuditRow { mode, check, level }
        })
        .collect())
}

/// Series coefficient for one mode by all three routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientRow<R: Real> {
    pub index: usize,
    pub lambda: R,
    /// weighted full-bar projection (the one the solver uses)
    pub quadrature: R,
    /// closed-form left-segment expression
    pub closed_form: R,
    /// left-segment projection integrated numerically
    pub left_ratio: R,
}

pub fn coefficient_table<R: Real>(
    p: &BarProblem<R>,
    modes: &[Eigenmode<R>],
) -> Result<Vec<CoefficientRow<R>>> {
    let steady = SteadySolution::solve(p);
    modes
        .iter()
        .map(|m| {
            Ok(CoefficientRow {
                index: m.index,
                lambda: m.lambda,
                quadrature: coefficient_quadrature(&steady, m)?,
                closed_form: coefficient_closed_form(&steady, m)?,
                left_ratio: coefficient_left_segment_ratio(&steady, m)?,
            })
        })
        .collect()
}

/// Everything the `compare` pipeline measures, ready for rendering.
#[derive(Debug, Clone)]
pub struct ComparisonReport<R: Real> {
    pub problem: BarProblem<R>,
    pub dx: R,
    pub dt: R,
    pub n_nodes: usize,
    pub interface_node: usize,
    pub stability: StabilityCheck<R>,
    pub mu: R,
    pub interface_temperature: R,
    pub end_temperature: R,
    pub relation: RelationConstants<R>,
    pub n_modes: usize,
    pub eigen_rows: Vec<EigenAuditRow<R>>,
    pub coefficient_rows: Vec<CoefficientRow<R>>,
    pub reconstruction: (R, R),
    pub profiles: Vec<ProfileComparison<R>>,
}

impl<R: Real> ComparisonReport<R> {
    /// Runs every audit: spectrum, coefficients, reconstruction, and the
    /// profile comparisons at `times`. `table_rows` bounds how many modes
    /// the per-mode tables list; the series itself keeps `n_modes`.
    pub fn generate(
        p: &BarProblem<R>,
        grid: &GridSpec<R>,
        times: &[R],
        n_modes: usize,
        table_rows: usize,
    ) -> Result<Self> {
        let steady = SteadySolution::solve(p);
        let series = AnalyticSolution::assemble(p, n_modes, CoefficientMethod::Quadrature)?;
        let rows = table_rows.min(series.modes().len());
        let eigen_rows = if rows > 0 {
            audit_eigen(p, rows)?
        } else {
            Vec::new()
        };
        let coefficient_rows = coefficient_table(p, &series.modes()[..rows])?;
        let profiles = compare_profiles(p, grid, times, n_modes)?;
        Ok(Self {
            problem: p.clone(),
            dx: grid.dx(),
            dt: grid.dt(),
            n_nodes: grid.n_nodes(),
            interface_node: grid.interface_node(),
            stability: check_stability(p, grid.dx(), grid.dt()),
            mu: steady.mu(),
            interface_temperature: steady.eval(p.interface())?,
            end_temperature: steady.eval(p.length())?,
            relation: relation_constants(p),
            n_modes,
            eigen_rows,
            coefficient_rows,
            reconstruction: series.reconstruction_error(),
            profiles,
        })
    }

    /// Renders the report. The output depends only on the inputs, never on
    /// clocks or environment, so repeated runs are byte-identical.
    pub fn to_text(&self) -> String {
        let p = &self.problem;
        let f = |v: R| v.as_f64();
        let mut s = String::new();
        writeln!(s, "two-material bar: cross-validation report").unwrap();
        writeln!(s, "==========================================").unwrap();
        writeln!(s).unwrap();
        writeln!(s, "problem").unwrap();
        writeln!(
            s,
            "  L = {} m, interface at l = {} m",
            f(p.length()),
            f(p.interface())
        )
        .unwrap();
        writeln!(
            s,
            "  left  (0, l): {} (k = {}, alpha^2 = {:e})",
            p.left().name(),
            f(p.left().k()),
            f(p.left().alpha2())
        )
        .unwrap();
        writeln!(
            s,
            "  right (l, L): {} (k = {}, alpha^2 = {:e})",
            p.right().name(),
            f(p.right().k()),
            f(p.right().alpha2())
        )
        .unwrap();
        writeln!(
            s,
            "  h = {}, F = {} C, Ta = {} C",
            f(p.h()),
            f(p.source()),
            f(p.ambient())
        )
        .unwrap();
        writeln!(s).unwrap();
        writeln!(s, "grid").unwrap();
        writeln!(
            s,
            "  dx = {} m, dt = {} s, {} nodes, interface at node {}",
            f(self.dx),
            f(self.dt),
            self.n_nodes,
            self.interface_node
        )
        .unwrap();
        writeln!(
            s,
            "  stability: max alpha^2 = {:.4e} vs dx^2/(2 dt) = {:.4e} (margin {:.2}, {})",
            f(self.stability.max_diffusivity),
            f(self.stability.threshold),
            f(self.stability.margin),
            if self.stability.stable {
                "stable"
            } else {
                "UNSTABLE"
            }
        )
        .unwrap();
        writeln!(s).unwrap();
        writeln!(s, "steady state").unwrap();
        writeln!(s, "  mu = {:.9}", f(self.mu)).unwrap();
        writeln!(
            s,
            "  U(l) = {:.6} C, U(L) = {:.6} C",
            f(self.interface_temperature),
            f(self.end_temperature)
        )
        .unwrap();
        writeln!(s).unwrap();
        writeln!(s, "eigenvalue relation constants").unwrap();
        writeln!(
            s,
            "  alpha l = {:.5}, k alpha = {:.5} (reciprocal convention: {:.5}, {:.5})",
            f(self.relation.alpha_l),
            f(self.relation.k_alpha),
            f(self.relation.alpha_l_reciprocal),
            f(self.relation.k_alpha_reciprocal)
        )
        .unwrap();
        writeln!(s).unwrap();
        writeln!(
            s,
            "eigenmodes (first {} of {} in the series)",
            self.eigen_rows.len(),
            self.n_modes
        )
        .unwrap();
        writeln!(
            s,
            "  {:>3}  {:>5}  {:>14}  {:>14}  {:>10}  {:>10}  {:>10}  {:>10}",
            "n", "level", "lambda", "lambda1", "jump", "flux", "flux-alt", "robin"
        )
        .unwrap();
        for row in &self.eigen_rows {
            let level = row
                .level
                .map_or_else(|| "jump".to_string(), |m| m.to_string());
            writeln!(
                s,
                "  {:>3}  {:>5}  {:>14.9}  {:>14.9}  {:>10.2e}  {:>10.2e}  {:>10.2e}  {:>10.2e}",
                row.mode.index,
                level,
                f(row.mode.lambda),
                f(row.mode.lambda1),
                f(row.check.value_jump),
                f(row.check.flux_jump),
                f(row.check.flux_jump_length_weighted),
                f(row.check.robin)
            )
            .unwrap();
        }
        writeln!(s).unwrap();
        writeln!(s, "series coefficients by method").unwrap();
        writeln!(
            s,
            "  {:>3}  {:>14}  {:>14}  {:>14}  {:>14}",
            "n", "lambda", "quadrature", "closed-form", "left-ratio"
        )
        .unwrap();
        for row in &self.coefficient_rows {
            writeln!(
                s,
                "  {:>3}  {:>14.9}  {:>14.6}  {:>14.6}  {:>14.6}",
                row.index,
                f(row.lambda),
                f(row.quadrature),
                f(row.closed_form),
                f(row.left_ratio)
            )
            .unwrap();
        }
        writeln!(s).unwrap();
        writeln!(
            s,
            "initial-condition reconstruction (N = {}): |e|_2 = {:.6} C left, {:.6} C right",
            self.n_modes,
            f(self.reconstruction.0),
            f(self.reconstruction.1)
        )
        .unwrap();
        writeln!(s).unwrap();
        writeln!(s, "series vs explicit march").unwrap();
        for c in &self.profiles {
            writeln!(
                s,
                "  t = {:>9.1} s: max |diff| = {:.6} C at x = {:.3} m, l2 = {:.6}; \
                 march is {:.6} C from steady, series {:.6} C",
                f(c.t),
                f(c.linf),
                f(c.worst_x),
                f(c.l2),
                f(c.fdm_vs_steady_linf),
                f(c.analytic_vs_steady_linf)
            )
            .unwrap();
        }
        s
    }
}
