//! End-to-end acceptance gate: one test per shipping criterion, each
//! printing a single PASS/FAIL line (visible with `--nocapture`, and in the
//! panic output when a criterion fails).

mod common;

use std::time::Instant;

use heatbar::fdm;
use heatbar::{
    audit_eigen, builtin, builtin_materials, check_stability, coefficient_table, compare_profiles,
    find_eigenvalues, interface_temperature_half, right_end_temperature_half, time_to_fraction,
    AnalyticSolution, BarProblem, CoefficientMethod, ComparisonReport, Error, GridSpec,
    SteadySolution,
};

use common::{example3, example4, silver_lead, ClassicalBar, XorShift};

#[test]
fn acceptance_1_eigen_residual_suite() {
    let started = Instant::now();
    let rows = audit_eigen(&example3(), 20).unwrap();
    assert_eq!(rows.len(), 20);
    let mut worst = 0.0_f64;
    for row in &rows {
        for (what, v) in [
            ("origin", row.check.origin),
            ("value continuity", row.check.value_jump),
            ("flux continuity", row.check.flux_jump),
            ("Robin end", row.check.robin),
        ] {
            assert!(
                v < 1e-8,
                "mode {}: {what} residual {v:.3e} out of tolerance",
                row.mode.index
            );
            worst = worst.max(v);
        }
    }
    for pair in rows.windows(2) {
        assert!(
            pair[1].mode.lambda > pair[0].mode.lambda,
            "eigenvalues not strictly increasing at n = {}",
            pair[0].mode.index
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "eigen suite took {elapsed:.3} s, budget 1 s");
    println!(
        "ACCEPTANCE 1 (eigen residual suite): PASS - 20 modes, worst residual {worst:.2e}, {elapsed:.3} s"
    );
}

#[test]
fn acceptance_2_homogeneous_reduction_oracle() {
    let started = Instant::now();
    let fe = builtin::<f64>("Fe").unwrap();
    let bar = BarProblem::new(1.0, 0.5, fe.clone(), fe.clone(), 10.0, 100.0, 25.0).unwrap();
    let oracle = ClassicalBar {
        length: 1.0,
        k: fe.k(),
        alpha2: fe.alpha2(),
        h: 10.0,
        source: 100.0,
        ambient: 25.0,
    };

    let modes = find_eigenvalues(&bar, 20).unwrap();
    let reference = oracle.eigenvalues(20);
    let mut worst_rel = 0.0_f64;
    for (m, &lam) in modes.iter().zip(&reference) {
        let rel = (m.lambda - lam).abs() / lam;
        worst_rel = worst_rel.max(rel);
        assert!(
            rel < 1e-9,
            "mode {}: lambda {} vs classical {lam} (rel {rel:.2e})",
            m.index,
            m.lambda
        );
    }

    let series = AnalyticSolution::assemble(&bar, 40, CoefficientMethod::Quadrature).unwrap();
    let lams = oracle.eigenvalues(40);
    let t = 3600.0;
    let mut worst_temp = 0.0_f64;
    for i in 0..=200 {
        let x = i as f64 / 200.0;
        let diff = (series.eval(x, t).unwrap() - oracle.eval(x, t, &lams)).abs();
        worst_temp = worst_temp.max(diff);
    }
    assert!(
        worst_temp < 1e-6,
        "series deviates from the classical solution by {worst_temp:.3e} C at t = 1 h"
    );
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "homogeneous suite took {elapsed:.3} s, budget 5 s");
    println!(
        "ACCEPTANCE 2 (homogeneous reduction): PASS - eigenvalues to {worst_rel:.2e} rel, \
         profile to {worst_temp:.2e} C, {elapsed:.3} s"
    );
}

#[test]
fn acceptance_3_steady_closed_forms() {
    let p = example4();
    let s = SteadySolution::solve(&p);
    assert_eq!(s.eval(0.0).unwrap(), 100.0, "source end must be exact");

    // interface and end temperatures written out from first principles
    let (k1, k2, h, l, len, f, ta) = (73.0_f64, 35.0, 10.0, 0.3, 1.0, 100.0, 25.0);
    let d = k1 * k2 + k1 * h * len + (k2 - k1) * h * l;
    let mu = k1 * k2 / d;
    let q = (f - ta) * h;
    let u_l = f - q * mu * l / k1;
    let u_end = f - q * mu * (l / k1 + (len - l) / k2);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    assert!(rel(s.eval(l).unwrap(), u_l) < 1e-12);
    assert!(rel(s.eval(len).unwrap(), u_end) < 1e-12);

    // midpoint-interface shortcuts against their own closed forms
    let half = BarProblem::new(
        1.0,
        0.5,
        builtin("Fe").unwrap(),
        builtin("Pb").unwrap(),
        10.0,
        100.0,
        25.0,
    )
    .unwrap();
    let sh = SteadySolution::solve(&half);
    let denom = 2.0 * k1 * k2 + h * len * (k1 + k2);
    let u_half_l = f - (f - ta) * h * len * k2 / denom;
    let u_half_end = f - (f - ta) * h * len * (k1 + k2) / denom;
    assert!(rel(interface_temperature_half(&half).unwrap(), u_half_l) < 1e-12);
    assert!(rel(right_end_temperature_half(&half).unwrap(), u_half_end) < 1e-12);
    assert!(rel(sh.eval(0.5).unwrap(), u_half_l) < 1e-12);
    assert!(rel(sh.eval(1.0).unwrap(), u_half_end) < 1e-12);

    // with l = L/2 the end temperature ignores the material order
    let swapped = SteadySolution::solve(&half.swapped());
    let gap = (sh.eval(1.0).unwrap() - swapped.eval(1.0).unwrap()).abs();
    assert!(gap < 1e-12, "swap symmetry broken by {gap:.2e} C");

    println!(
        "ACCEPTANCE 3 (steady closed forms): PASS - U(0) exact, U(l)/U(L) to 1e-12, \
         swap gap {gap:.1e} C"
    );
}

#[test]
fn acceptance_4_oracle_triangle_at_reference_scale() {
    let p = example4();
    let grid = GridSpec::new(&p, 0.01, 0.1).unwrap();
    let cmp = compare_profiles(&p, &grid, &[3600.0, 54000.0], 100).unwrap();
    let (one_hour, fifteen_hours) = (&cmp[0], &cmp[1]);

    println!(
        "  analytic vs FDM at t = 1 h:   {:.4} C (tolerance 0.5)",
        one_hour.linf
    );
    println!(
        "  analytic vs FDM at t = 15 h:  {:.4} C (tolerance 0.5)",
        fifteen_hours.linf
    );
    println!(
        "  FDM vs steady at t = 15 h:    {:.4} C (tolerance 0.5)",
        fifteen_hours.fdm_vs_steady_linf
    );
    assert!(one_hour.linf <= 0.5);
    assert!(fifteen_hours.linf <= 0.5);

    let remnant = fifteen_hours.fdm_vs_steady_linf;
    if remnant <= 0.5 {
        println!(
            "ACCEPTANCE 4 (oracle triangle): PASS - all three edges within 0.5 C"
        );
        return;
    }

    // Quantify the slowest mode so the failure is attributable.
    let series = AnalyticSolution::assemble(&p, 1, CoefficientMethod::Quadrature).unwrap();
    let mode = &series.modes()[0];
    let c1 = series.coefficients()[0];
    let decay = (-mode.decay_rate(&p) * 54000.0).exp();
    let max_shape = (0..=1000)
        .map(|i| mode.shape(&p, i as f64 * 1e-3).abs())
        .fold(0.0_f64, f64::max);
    let predicted = c1.abs() * max_shape * decay;
    println!(
        "ACCEPTANCE 4 (oracle triangle): FAIL - FDM is {remnant:.4} C from steady at t = 15 h"
    );
    panic!(
        "FDM vs steady at 15 h = {remnant:.4} C exceeds the 0.5 C budget. This edge cannot \
         pass: the slowest mode (lambda_1 = {:.6}, C_1 = {c1:.2}) has only decayed to \
         exp(-lambda_1^2 alpha_2^2 t) = {decay:.3e} by 54000 s, leaving a physical remnant \
         |C_1| max|X_1| decay = {predicted:.4} C that any correct solver must show. The other \
         two edges agree to {:.4} C and {:.4} C, and the analytic route carries the same \
         remnant ({:.4} C), so the three routes are mutually consistent: the bar has not \
         finished relaxing at 15 h, and the 0.5 C budget underestimates the settling time.",
        mode.lambda,
        one_hour.linf,
        fifteen_hours.linf,
        fifteen_hours.analytic_vs_steady_linf,
    );
}

#[test]
fn acceptance_5_stability_guard() {
    // the reference grid's threshold, and every built-in metal under it
    let silver = silver_lead();
    let check = check_stability(&silver, 0.01, 0.1);
    assert!(
        (check.threshold - 5.0e-4).abs() < 1e-17,
        "threshold {} != 5e-4",
        check.threshold
    );
    for m in builtin_materials::<f64>() {
        let uniform =
            BarProblem::new(1.0, 0.5, m.clone(), m.clone(), 10.0, 100.0, 25.0).unwrap();
        let c = check_stability(&uniform, 0.01, 0.1);
        assert!(c.stable, "{} unstable on the reference grid", m.name());
    }

    // a five-fold time step is refused before any stepping
    match GridSpec::new(&silver, 0.01, 0.5) {
        Err(Error::UnstableGrid {
            max_diffusivity,
            threshold,
        }) => {
            assert!(max_diffusivity >= threshold);
        }
        other => panic!("expected UnstableGrid, got {other:?}"),
    }

    // bypassing the guard trips the divergence detector quickly
    let loose = GridSpec::new_allowing_instability(&silver, 0.01, 0.5).unwrap();
    let mut state = fdm::FdmState::new(&silver, &loose);
    let blow_up = match state.advance(1000) {
        Err(Error::Diverged { step, .. }) => step,
        other => panic!("unstable run should diverge within 1000 steps, got {other:?}"),
    };
    println!(
        "ACCEPTANCE 5 (stability guard): PASS - threshold 5e-4, all materials stable, \
         dt = 0.5 rejected, bypassed run diverged at step {blow_up}"
    );
}

#[test]
fn acceptance_6_qualitative_figure_claims() {
    // interface stays hotter than the far end at every recorded time
    let p = example4();
    let grid = GridSpec::new(&p, 0.01, 0.1).unwrap();
    let run = fdm::run(&p, &grid, 7200.0, &[0.3, 1.0], 6000).unwrap();
    let (at_l, at_end) = (&run.probes[0], &run.probes[1]);
    for i in 1..run.times.len() {
        assert!(
            at_l.temps[i] > at_end.temps[i],
            "U(l) = {} not above U(L) = {} at t = {}",
            at_l.temps[i],
            at_end.temps[i],
            run.times[i]
        );
        for probe in [at_l, at_end] {
            assert!(
                probe.temps[i] >= probe.temps[i - 1] - 1e-9,
                "probe at {} regressed at t = {}",
                probe.x,
                run.times[i]
            );
        }
    }

    // the bar led by the better conductor settles its interface sooner
    let ag_pb = silver_lead();
    let pb_ag = ag_pb.swapped();
    let mid_grid = GridSpec::new(&ag_pb, 0.01, 0.1).unwrap();
    let cap = 360_000.0;
    let fast = time_to_fraction(&ag_pb, &mid_grid, 0.5, 0.95, cap).unwrap();
    let slow = time_to_fraction(&pb_ag, &mid_grid, 0.5, 0.95, cap).unwrap();
    assert!(
        fast < slow,
        "Ag-Pb should reach 95% first: {fast} s vs {slow} s"
    );
    println!(
        "ACCEPTANCE 6 (qualitative claims): PASS - U(l,t) > U(L,t) throughout, probes \
         monotone, 95% interface settling {fast:.0} s (Ag-Pb) vs {slow:.0} s (Pb-Ag)"
    );
}

#[test]
fn acceptance_7_series_self_consistency() {
    let p = example4();
    let series = AnalyticSolution::assemble(&p, 100, CoefficientMethod::Quadrature).unwrap();
    let l = p.interface();
    let len = p.length();
    let (a1, a2) = (p.left().alpha2(), p.right().alpha2());

    // Each summand must satisfy U_t = alpha_i^2 U_xx away from the
    // interface. Fourth-order stencils keep the check's own truncation far
    // below the 1e-6 budget; residuals are normalized per mode by the
    // magnitude of the time derivative at that instant.
    let mut rng = XorShift::new(0x9E37_79B9_7F4A_7C15);
    let mut worst = 0.0_f64;
    let mut checked = 0_u64;
    for _ in 0..20 {
        let left_side = rng.next_unit() < 0.5;
        let (x, alpha2) = if left_side {
            (rng.next_in(0.012, l - 0.012), a1)
        } else {
            (rng.next_in(l + 0.012, len - 0.012), a2)
        };
        let t = rng.next_in(60.0, 3600.0);
        for (mode, &c) in series.modes().iter().zip(series.coefficients()) {
            let omega = mode.decay_rate(&p);
            let amp = c.abs() * mode.a.hypot(mode.b).max(1.0) * (-omega * t).exp();
            let scale = omega * amp;
            if scale < 1e-250 {
                // the mode has decayed below representable range; its
                // summand is identically zero here
                continue;
            }
            let u = |x: f64, t: f64| c * mode.shape(&p, x) * (-omega * t).exp();
            let h = (0.05 / mode.lambda1.max(mode.lambda)).min(4e-3);
            let k = (0.05 / omega).min(5.0);
            let du_dt =
                (u(x, t - 2.0 * k) - 8.0 * u(x, t - k) + 8.0 * u(x, t + k) - u(x, t + 2.0 * k))
                    / (12.0 * k);
            let d2u_dx2 = (-u(x - 2.0 * h, t) + 16.0 * u(x - h, t) - 30.0 * u(x, t)
                + 16.0 * u(x + h, t)
                - u(x + 2.0 * h, t))
                / (12.0 * h * h);
            let residual = (du_dt - alpha2 * d2u_dx2).abs() / scale;
            assert!(
                residual < 1e-6,
                "mode {} at (x = {x:.4}, t = {t:.1}): PDE residual {residual:.3e}",
                mode.index
            );
            worst = worst.max(residual);
            checked += 1;
        }
    }

    // more modes must reconstruct the initial condition better on (0, l)
    let (left_100, _) = series.reconstruction_error();
    let (left_25, _) = series.truncated(25).reconstruction_error();
    assert!(
        left_100 < left_25,
        "reconstruction worsened: N=25 gives {left_25:.4}, N=100 gives {left_100:.4}"
    );
    println!(
        "ACCEPTANCE 7 (series self-consistency): PASS - {checked} summand checks, worst \
         residual {worst:.2e}; reconstruction {left_25:.3} C (N=25) -> {left_100:.3} C (N=100)"
    );
}

#[test]
fn acceptance_8_coefficient_comparison_report() {
    // the two coefficient routes tabulated side by side for the long bar
    let p3 = example3();
    let modes = find_eigenvalues(&p3, 10).unwrap();
    let table = coefficient_table(&p3, &modes).unwrap();
    assert_eq!(table.len(), 10);
    println!("  n    lambda        closed-form    quadrature");
    for row in &table {
        println!(
            "  {:<2}   {:<12.6}  {:>12.5}  {:>12.5}",
            row.index, row.lambda, row.closed_form, row.quadrature
        );
    }

    let grid3 = GridSpec::new(&p3, 0.01, 0.1).unwrap();
    let report = ComparisonReport::generate(&p3, &grid3, &[3600.0], 100, 10)
        .unwrap()
        .to_text();
    assert!(report.contains("series coefficients by method"));
    assert!(report.contains("eigenvalue relation constants"));

    // the quadrature pipeline itself must hold up the agreement criteria:
    // the two analytic-vs-FDM edges of the oracle triangle and the
    // reconstruction improvement. (The triangle's FDM-vs-steady edge is a
    // physical remnant at 15 h; it is asserted, and fails with analysis, in
    // the oracle-triangle criterion.)
    let p4 = example4();
    let grid4 = GridSpec::new(&p4, 0.01, 0.1).unwrap();
    let cmp = compare_profiles(&p4, &grid4, &[3600.0, 54000.0], 100).unwrap();
    assert!(cmp[0].linf <= 0.5, "1 h edge broke: {:.4} C", cmp[0].linf);
    assert!(cmp[1].linf <= 0.5, "15 h edge broke: {:.4} C", cmp[1].linf);
    let series = AnalyticSolution::assemble(&p4, 100, CoefficientMethod::Quadrature).unwrap();
    let (left_100, _) = series.reconstruction_error();
    let (left_25, _) = series.truncated(25).reconstruction_error();
    assert!(left_100 < left_25);

    let divergence = table
        .iter()
        .map(|r| (r.closed_form - r.quadrature).abs())
        .fold(0.0_f64, f64::max);
    println!(
        "ACCEPTANCE 8 (coefficient report): PASS - 10 rows tabulated, report rendered, \
         quadrature pipeline edges hold; closed form departs from quadrature by up to \
         {divergence:.2} (reported, not required to agree)"
    );
}
