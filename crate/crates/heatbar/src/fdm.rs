//! Explicit finite-difference solver (forward time, centered space).
//!
//! Interior nodes of each segment use standard FTCS with that segment's
//! diffusivity. The right boundary eliminates a ghost node through the
//! convective flux condition. The interface node is closed by a balance over
//! the half-cells on either side of it,
//!
//! ```text
//! u_j' = u_j + dt [ k2 (u_{j+1} - u_j) - k1 (u_j - u_{j-1}) ]
//!              / ( dx^2 (w1 + w2) / 2 ),        w_i = k_i / alpha_i^2,
//! ```
//!
//! which conserves the interfacial flux, keeps the exact steady profile a
//! fixed point of the update, and collapses to plain FTCS when both
//! materials coincide. A one-sided algebraic closure (averaging the
//! neighbours with conductivity weights) shares none of those properties and
//! leaves an O(dx) error frozen at the interface, so it is not offered.
//!
//! Stability is the usual explicit bound `max(alpha_i^2) < dx^2 / (2 dt)`,
//! enforced at grid construction.

use crate::error::{Error, Result};
use crate::problem::BarProblem;
use crate::scalar::Real;

/// Outcome of the explicit stability test for a proposed grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityCheck<R: Real> {
    /// `dx^2 / (2 dt)`; diffusivities must stay strictly below it.
    pub threshold: R,
    /// Larger of the two segment diffusivities.
    pub max_diffusivity: R,
    /// `threshold / max_diffusivity`; above 1 means stable.
    pub margin: R,
    pub stable: bool,
}

/// Evaluates the explicit stability bound without building a grid.
pub fn check_stability<R: Real>(p: &BarProblem<R>, dx: R, dt: R) -> StabilityCheck<R> {
    let threshold = dx * dx / (R::lit(2.0) * dt);
    let max_diffusivity = p.left().alpha2().max(p.right().alpha2());
    StabilityCheck {
        threshold,
        max_diffusivity,
        margin: threshold / max_diffusivity,
        stable: max_diffusivity < threshold,
    }
}

/// A validated uniform space-time grid for one problem.
#[derive(Debug, Clone)]
pub struct GridSpec<R: Real> {
    dx: R,
    dt: R,
    /// Node count including both ends; nodes sit at `j dx`, `j = 0..=J`.
    n_nodes: usize,
    /// Index of the node carrying the interface closure.
    j_interface: usize,
}

impl<R: Real> GridSpec<R> {
    /// Builds a grid, rejecting steps that do not tile the bar, an interface
    /// that does not land on an interior node, and unstable step ratios.
    pub fn new(p: &BarProblem<R>, dx: R, dt: R) -> Result<Self> {
        let spec = Self::new_allowing_instability(p, dx, dt)?;
        let check = check_stability(p, dx, dt);
        if !check.stable {
            return Err(Error::UnstableGrid {
                max_diffusivity: check.max_diffusivity.as_f64(),
                threshold: check.threshold.as_f64(),
            });
        }
        Ok(spec)
    }

    /// Same validation as [`GridSpec::new`] except the stability bound,
    /// for deliberately running the scheme past its limit.
    pub fn new_allowing_instability(p: &BarProblem<R>, dx: R, dt: R) -> Result<Self> {
        if !(dx.is_finite() && dx > R::zero()) {
            return Err(Error::InvalidStep {
                name: "dx",
                value: dx.as_f64(),
            });
        }
        if !(dt.is_finite() && dt > R::zero()) {
            return Err(Error::InvalidStep {
                name: "dt",
                value: dt.as_f64(),
            });
        }
        let len = p.length();
        let cells = (len / dx).round();
        let n_cells = cells.as_f64() as usize;
        if n_cells < 4 || (cells * dx - len).abs() > R::lit(1e-9) * (R::one() + len) {
            return Err(Error::GridDoesNotTile {
                nodes: n_cells + 1,
                dx: dx.as_f64(),
                length: len.as_f64(),
            });
        }
        let jl = (p.interface() / dx).round();
        let j_interface = jl.as_f64() as usize;
        if j_interface == 0 || j_interface >= n_cells {
            return Err(Error::InterfaceNotInteriorNode {
                interface: p.interface().as_f64(),
                dx: dx.as_f64(),
            });
        }
        let snap = (jl * dx - p.interface()).abs();
        if snap > R::lit(1e-12) * (R::one() + len) {
            log::warn!(
                "interface snapped to node {} ({} away from l = {})",
                j_interface,
                snap.as_f64(),
                p.interface().as_f64()
            );
        }
        Ok(Self {
            dx,
            dt,
            n_nodes: n_cells + 1,
            j_interface,
        })
    }

    pub fn dx(&self) -> R {
        self.dx
    }

    pub fn dt(&self) -> R {
        self.dt
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn interface_node(&self) -> usize {
        self.j_interface
    }

    /// Coordinates of every node, left end first.
    pub fn positions(&self) -> Vec<R> {
        (0..self.n_nodes)
            .map(|j| self.dx * R::lit(j as f64))
            .collect()
    }

    /// Nearest node to `x`, if `x` lies on the bar.
    pub fn node_at(&self, x: R, length: R) -> Result<usize> {
        if !(x.is_finite() && x >= R::zero() && x <= length) {
            return Err(Error::ProbeOutOfDomain(x.as_f64()));
        }
        Ok(((x / self.dx).round().as_f64() as usize).min(self.n_nodes - 1))
    }
}

/// Marching state of the explicit scheme.
#[derive(Debug, Clone)]
pub struct FdmState<R: Real> {
    problem: BarProblem<R>,
    grid: GridSpec<R>,
    temps: Vec<R>,
    scratch: Vec<R>,
    steps: u64,
    r1: R,
    r2: R,
    /// dt / (dx^2 (w1 + w2) / 2) for the interface half-cell balance.
    c_interface: R,
    ghost: R,
    limit: R,
}

impl<R: Real> FdmState<R> {
    /// Initial state: uniform ambient temperature with the source already
    /// applied at the left end.
    pub fn new(p: &BarProblem<R>, grid: &GridSpec<R>) -> Self {
        Self::from_profile(p, grid, |x| {
            if x == R::zero() {
                p.source()
            } else {
                p.ambient()
            }
        })
    }

    /// Starts from an arbitrary profile; the left end is overwritten with
    /// the source temperature, which the scheme holds fixed.
    pub fn from_profile(p: &BarProblem<R>, grid: &GridSpec<R>, f: impl Fn(R) -> R) -> Self {
        let mut temps: Vec<R> = grid.positions().into_iter().map(&f).collect();
        temps[0] = p.source();
        let dx2 = grid.dx * grid.dx;
        let w1 = p.left().k() / p.left().alpha2();
        let w2 = p.right().k() / p.right().alpha2();
        let scratch = temps.clone();
        Self {
            problem: p.clone(),
            grid: grid.clone(),
            temps,
            scratch,
            steps: 0,
            r1: p.left().alpha2() * grid.dt / dx2,
            r2: p.right().alpha2() * grid.dt / dx2,
            c_interface: grid.dt / (dx2 * (w1 + w2) / R::lit(2.0)),
            ghost: R::lit(2.0) * grid.dx * p.h() / p.right().k(),
            limit: R::lit(10.0) * (p.source().abs() + p.ambient().abs()),
        }
    }

    pub fn grid(&self) -> &GridSpec<R> {
        &self.grid
    }

    pub fn temps(&self) -> &[R] {
        &self.temps
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn time(&self) -> R {
        self.grid.dt * R::lit(self.steps as f64)
    }

    /// One explicit update over the whole bar.
    pub fn step(&mut self) -> Result<()> {
        let p = &self.problem;
        let u = &self.temps;
        let next = &mut self.scratch;
        let jl = self.grid.j_interface;
        let last = self.grid.n_nodes - 1;
        let (k1, k2) = (p.left().k(), p.right().k());
        let ta = p.ambient();

        next[0] = p.source();
        for j in 1..last {
            next[j] = if j == jl {
                u[j] + self.c_interface * (k2 * (u[j + 1] - u[j]) - k1 * (u[j] - u[j - 1]))
            } else {
                let r = if j < jl { self.r1 } else { self.r2 };
                u[j] + r * (u[j + 1] - R::lit(2.0) * u[j] + u[j - 1])
            };
        }
        // ghost node from k2 U_x(L) = -h (U(L) - Ta)
        let mirror = u[last - 1] - self.ghost * (u[last] - ta);
        next[last] = u[last] + self.r2 * (mirror - R::lit(2.0) * u[last] + u[last - 1]);

        std::mem::swap(&mut self.temps, &mut self.scratch);
        self.steps += 1;

        for &v in &self.temps {
            if !v.is_finite() || v.abs() > self.limit {
                return Err(Error::Diverged {
                    step: self.steps,
                    time: self.time().as_f64(),
                    limit: self.limit.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Runs `n` updates, stopping at the first divergence.
    pub fn advance(&mut self, n: u64) -> Result<()> {
        for _ in 0..n {
            self.step()?;
        }
        Ok(())
    }
}

/// Temperature history at one probe node.
#[derive(Debug, Clone)]
pub struct ProbeSeries<R: Real> {
    pub x: R,
    pub node: usize,
    pub temps: Vec<R>,
}

/// Result of a batch run: final state plus sampled probe histories.
#[derive(Debug, Clone)]
pub struct FdmRun<R: Real> {
    pub state: FdmState<R>,
    /// Sample times, one per recorded row (step 0 included).
    pub times: Vec<R>,
    pub probes: Vec<ProbeSeries<R>>,
}

/// Marches from the uniform initial state to the step count nearest
/// `t_end`, recording each probe every `stride` steps (and at the end).
pub fn run<R: Real>(
    p: &BarProblem<R>,
    grid: &GridSpec<R>,
    t_end: R,
    probe_positions: &[R],
    stride: u64,
) -> Result<FdmRun<R>> {
    if !(t_end.is_finite() && t_end >= R::zero()) {
        return Err(Error::InvalidTime(t_end.as_f64()));
    }
    if stride == 0 {
        return Err(Error::InvalidStep {
            name: "stride",
            value: 0.0,
        });
    }
    let n_steps = (t_end / grid.dt()).round().as_f64() as u64;
    let mut probes: Vec<ProbeSeries<R>> = probe_positions
        .iter()
        .map(|&x| {
            Ok(ProbeSeries {
                x,
                node: grid.node_at(x, p.length())?,
                temps: Vec::new(),
            })
        })
        .collect::<Result<_>>()?;

    let mut state = FdmState::new(p, grid);
    let mut times = Vec::new();
    let record = |state: &FdmState<R>, times: &mut Vec<R>, probes: &mut Vec<ProbeSeries<R>>| {
        times.push(state.time());
        for probe in probes.iter_mut() {
            probe.temps.push(state.temps()[probe.node]);
        }
    };
    record(&state, &mut times, &mut probes);
    let mut done: u64 = 0;
    while done < n_steps {
        let burst = stride.min(n_steps - done);
        state.advance(burst)?;
        done += burst;
        record(&state, &mut times, &mut probes);
    }
    Ok(FdmRun {
        state,
        times,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::builtin;
    use crate::series::{AnalyticSolution, CoefficientMethod};
    use crate::steady::SteadySolution;
    use approx::assert_abs_diff_eq;

    fn fe_pb() -> BarProblem<f64> {
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

    fn ag_pb() -> BarProblem<f64> {
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

    #[test]
    fn stability_threshold_for_the_reference_grid() {
        let check = check_stability(&ag_pb(), 0.01, 0.1);
        assert_abs_diff_eq!(check.threshold, 5.0e-4, epsilon = 1e-18);
        assert_abs_diff_eq!(check.max_diffusivity, 1.7014e-4, epsilon = 1e-18);
        assert!(check.stable);
        assert_abs_diff_eq!(check.margin, 5.0e-4 / 1.7014e-4, epsilon = 1e-12);
    }

    #[test]
    fn oversized_time_step_is_rejected() {
        let p = ag_pb();
        assert!(matches!(
            GridSpec::new(&p, 0.01, 0.5),
            Err(Error::UnstableGrid { .. })
        ));
        assert!(GridSpec::new_allowing_instability(&p, 0.01, 0.5).is_ok());
    }

    #[test]
    fn grid_validation_catches_bad_geometry() {
        let p = fe_pb();
        assert!(matches!(
            GridSpec::new(&p, 0.3, 0.1),
            Err(Error::GridDoesNotTile { .. })
        ));
        assert!(matches!(
            GridSpec::new(&p, 0.0, 0.1),
            Err(Error::InvalidStep { name: "dx", .. })
        ));
        assert!(matches!(
            GridSpec::new(&p, 0.01, -1.0),
            Err(Error::InvalidStep { name: "dt", .. })
        ));
        let tiny_l = BarProblem::new(
            1.0,
            0.004,
            builtin("Fe").unwrap(),
            builtin("Pb").unwrap(),
            10.0,
            100.0,
            25.0,
        )
        .unwrap();
        assert!(matches!(
            GridSpec::new(&tiny_l, 0.01, 0.1),
            Err(Error::InterfaceNotInteriorNode { .. })
        ));
    }

    #[test]
    fn grid_reports_its_layout() {
        let g = GridSpec::new(&fe_pb(), 0.01, 0.1).unwrap();
        assert_eq!(g.n_nodes(), 101);
        assert_eq!(g.interface_node(), 30);
        let xs = g.positions();
        assert_eq!(xs.len(), 101);
        assert_abs_diff_eq!(xs[30], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(xs[100], 1.0, epsilon = 1e-15);
        assert_eq!(g.node_at(0.935, 1.0).unwrap(), 94);
        assert!(g.node_at(1.2, 1.0).is_err());
    }

    #[test]
    fn initial_state_is_ambient_with_the_source_applied() {
        let p = fe_pb();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let s = FdmState::new(&p, &g);
        assert_eq!(s.temps()[0], 100.0);
        assert!(s.temps()[1..].iter().all(|&u| u == 25.0));
        assert_eq!(s.steps(), 0);
        assert_eq!(s.time(), 0.0);
    }

    #[test]
    fn first_step_only_moves_the_node_beside_the_source() {
        let p = fe_pb();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let mut s = FdmState::new(&p, &g);
        s.step().unwrap();
        let r1 = p.left().alpha2() * 0.1 / 1e-4;
        assert_abs_diff_eq!(s.temps()[1], 25.0 + r1 * 75.0, epsilon = 1e-12);
        assert!(s.temps()[2..].iter().all(|&u| u == 25.0));
        assert_eq!(s.temps()[0], 100.0);
        assert_abs_diff_eq!(s.time(), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn exact_steady_profile_is_a_fixed_point() {
        let p = fe_pb();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let steady = SteadySolution::solve(&p);
        let mut s = FdmState::from_profile(&p, &g, |x| steady.eval(x).unwrap());
        let reference = s.temps().to_vec();
        s.advance(200).unwrap();
        let drift = s
            .temps()
            .iter()
            .zip(&reference)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(drift < 1e-10 * 75.0, "steady profile drifted by {drift}");
    }

    #[test]
    fn equilibrated_bar_never_moves() {
        let p = BarProblem::new_allowing_equal_temperatures(
            1.0,
            0.3,
            builtin("Fe").unwrap(),
            builtin("Pb").unwrap(),
            10.0,
            25.0,
            25.0,
        )
        .unwrap();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let mut s = FdmState::new(&p, &g);
        s.advance(100).unwrap();
        assert!(s.temps().iter().all(|&u| u == 25.0));
    }

    #[test]
    fn discrete_maximum_principle_holds_under_the_stability_bound() {
        let p = fe_pb();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let mut s = FdmState::new(&p, &g);
        for _ in 0..2000 {
            s.step().unwrap();
            for &u in s.temps() {
                assert!((25.0 - 1e-12..=100.0 + 1e-12).contains(&u));
            }
        }
    }

    #[test]
    fn heating_from_ambient_is_monotone_in_time() {
        let p = fe_pb();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let run = run(&p, &g, 600.0, &[0.25, 0.5, 0.93], 50).unwrap();
        for probe in &run.probes {
            for pair in probe.temps.windows(2) {
                assert!(
                    pair[1] >= pair[0] - 1e-12,
                    "probe at {} cooled from {} to {}",
                    probe.x,
                    pair[0],
                    pair[1]
                );
            }
        }
        assert_eq!(run.times.len(), run.probes[0].temps.len());
        assert_abs_diff_eq!(*run.times.last().unwrap(), 600.0, epsilon = 1e-9);
    }

    #[test]
    fn probe_on_the_source_node_stays_at_the_source() {
        let p = fe_pb();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let run = run(&p, &g, 50.0, &[0.0], 100).unwrap();
        assert!(run.probes[0].temps.iter().all(|&u| u == 100.0));
    }

    #[test]
    fn spatial_refinement_converges_at_second_order() {
        let p = fe_pb();
        let series = AnalyticSolution::assemble(&p, 60, CoefficientMethod::Quadrature).unwrap();
        let t = 600.0;
        let err = |dx: f64| {
            let dt = 0.1 * (dx / 0.01) * (dx / 0.01);
            let g = GridSpec::new(&p, dx, dt).unwrap();
            let mut s = FdmState::new(&p, &g);
            s.advance((t / dt).round() as u64).unwrap();
            s.grid()
                .positions()
                .iter()
                .zip(s.temps())
                .skip(1)
                .map(|(&x, &u)| (u - series.eval(x, t).unwrap()).abs())
                .fold(0.0_f64, f64::max)
        };
        let (coarse, fine) = (err(0.02), err(0.01));
        let order = (coarse / fine).log2();
        assert!(
            order > 1.5,
            "observed order {order} (errors {coarse} -> {fine})"
        );
    }

    #[test]
    fn interface_flux_mismatch_shrinks_with_the_grid() {
        let p = fe_pb();
        let t = 600.0;
        let mismatch = |dx: f64| {
            let dt = 0.1 * (dx / 0.01) * (dx / 0.01);
            let g = GridSpec::new(&p, dx, dt).unwrap();
            let mut s = FdmState::new(&p, &g);
            s.advance((t / dt).round() as u64).unwrap();
            let jl = g.interface_node();
            let u = s.temps();
            let left = p.left().k() * (u[jl] - u[jl - 1]) / dx;
            let right = p.right().k() * (u[jl + 1] - u[jl]) / dx;
            (left - right).abs()
        };
        let (coarse, fine) = (mismatch(0.02), mismatch(0.005));
        assert!(
            fine < coarse,
            "flux mismatch grew under refinement: {coarse} -> {fine}"
        );
    }

    #[test]
    fn composite_scheme_matches_plain_ftcs_on_one_material() {
        let fe = builtin::<f64>("Fe").unwrap();
        let p = BarProblem::new(1.0, 0.5, fe.clone(), fe.clone(), 10.0, 100.0, 25.0).unwrap();
        let g = GridSpec::new(&p, 0.01, 0.1).unwrap();
        let mut s = FdmState::new(&p, &g);
        s.advance(2000).unwrap();

        // independent single-material FTCS with the same Robin ghost
        let r = fe.alpha2() * 0.1 / 1e-4;
        let ghost = 2.0 * 0.01 * 10.0 / fe.k();
        let mut u = vec![25.0_f64; 101];
        u[0] = 100.0;
        let mut next = u.clone();
        for _ in 0..2000 {
            next[0] = 100.0;
            for j in 1..100 {
                next[j] = u[j] + r * (u[j + 1] - 2.0 * u[j] + u[j - 1]);
            }
            let mirror = u[99] - ghost * (u[100] - 25.0);
            next[100] = u[100] + r * (mirror - 2.0 * u[100] + u[99]);
            std::mem::swap(&mut u, &mut next);
        }
        let diff = s
            .temps()
            .iter()
            .zip(&u)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(diff <= 1e-10, "composite deviated from plain FTCS by {diff}");
    }

    #[test]
    fn unstable_run_diverges_quickly_and_reports_the_step() {
        let p = ag_pb();
        let g = GridSpec::new_allowing_instability(&p, 0.01, 0.5).unwrap();
        let mut s = FdmState::new(&p, &g);
        match s.advance(1000) {
            Err(Error::Diverged { step, limit, .. }) => {
                assert!(step <= 1000, "diverged only at step {step}");
                assert_abs_diff_eq!(limit, 1250.0, epsilon = 1e-12);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn single_precision_run_stays_finite() {
        let p = BarProblem::<f32>::new(
            1.0,
            0.3,
            builtin("Fe").unwrap(),
            builtin("Pb").unwrap(),
            10.0,
            100.0,
            25.0,
        )
        .unwrap();
        let g = GridSpec::new(&p, 0.05, 1.0).unwrap();
        let mut s = FdmState::new(&p, &g);
        s.advance(500).unwrap();
        assert!(s.temps().iter().all(|u| u.is_finite()));
        assert!(s.temps()[1] > 25.0);
    }
}
