//! Command-line front end for the two-material bar solvers: closed-form
//! steady state, eigenfunction series, explicit finite differences, and
//! the cross-validation report that plays them against each other.

mod config;
mod emit;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use heatbar::{
    audit_eigen, AnalyticSolution, BarProblem64, CoefficientMethod, ComparisonReport, FdmState,
    GridSpec, SteadySolution,
};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "heatbar",
    version,
    about = "Transient heat conduction in a two-material bar"
)]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Subcommand)]
enum Mode {
    /// Closed-form steady profile sampled at grid.dx
    Steady(Common),
    /// Eigenvalue audit: spectrum, shape constants, residuals
    Eigen(Common),
    /// Fourier-series transient: probe histories and the full field
    Analytic(Common),
    /// Explicit finite-difference march
    Fdm(Common),
    /// Cross-validation of the series against the explicit march
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// Run configuration file (key = value lines)
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Output directory (overrides output.dir)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Series mode count (overrides run.modes)
    #[arg(long, value_name = "N")]
    modes: Option<usize>,
    /// Space step in metres (overrides grid.dx)
    #[arg(long, value_name = "M")]
    dx: Option<f64>,
    /// Time step in seconds (overrides grid.dt)
    #[arg(long, value_name = "S")]
    dt: Option<f64>,
    /// March horizon in seconds (overrides run.tmax)
    #[arg(long, value_name = "S")]
    tmax: Option<f64>,
}

impl Common {
    fn load(&self) -> error::Result<RunConfig> {
        config::load(
            &self.config,
            &config::Overrides {
                out: self.out.clone(),
                modes: self.modes,
                dx: self.dx,
                dt: self.dt,
                tmax: self.tmax,
            },
        )
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match &cli.mode {
        Mode::Steady(c) => c.load().and_then(|cfg| cmd_steady(&cfg)),
        Mode::Eigen(c) => c.load().and_then(|cfg| cmd_eigen(&cfg)),
        Mode::Analytic(c) => c.load().and_then(|cfg| cmd_analytic(&cfg)),
        Mode::Fdm(c) => c.load().and_then(|cfg| cmd_fdm(&cfg)),
        Mode::Compare(c) => c.load().and_then(|cfg| cmd_compare(&cfg)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heatbar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Number of sample intervals that tile `[0, length]` at spacing near `dx`.
fn sample_intervals(length: f64, dx: f64) -> usize {
    ((length / dx).round() as usize).max(1)
}

fn probe_label(p: &BarProblem64, x: f64) -> String {
    if (x - p.interface()).abs() <= 1e-12 {
        "U_at_l".into()
    } else if (x - p.length()).abs() <= 1e-12 {
        "U_at_L".into()
    } else {
        format!("U_at_{x}")
    }
}

fn cmd_steady(cfg: &RunConfig) -> error::Result<()> {
    let s = SteadySolution::solve(&cfg.problem);
    let length = cfg.problem.length();
    let n = sample_intervals(length, cfg.dx);
    let mut f = emit::create(cfg, "steady", "steady_profile.csv", "x,U")?;
    for i in 0..=n {
        let x = if i == n { length } else { i as f64 * cfg.dx };
        f.row(format_args!("{x},{}", s.eval(x)?))?;
    }
    let path = f.finish()?;
    println!(
        "steady: mu = {}, U(l) = {}, U(L) = {}; wrote {} ({} rows)",
        s.mu(),
        s.eval(cfg.problem.interface())?,
        s.eval(length)?,
        path.display(),
        n + 1
    );
    Ok(())
}

fn cmd_eigen(cfg: &RunConfig) -> error::Result<()> {
    let rows = audit_eigen(&cfg.problem, cfg.modes)?;
    let mut f = emit::create(
        cfg,
        "eigen",
        "eigenvalues.csv",
        "n,lambda,lambda1,a,b,origin,value_jump,flux_jump,robin,level",
    )?;
    for r in &rows {
        let level = r.level.map(|v| v.to_string()).unwrap_or_default();
        f.row(format_args!(
            "{},{},{},{},{},{},{},{},{},{level}",
            r.mode.index,
            r.mode.lambda,
            r.mode.lambda1,
            r.mode.a,
            r.mode.b,
            r.check.origin,
            r.check.value_jump,
            r.check.flux_jump,
            r.check.robin
        ))?;
    }
    let path = f.finish()?;
    let worst = rows.iter().map(|r| r.check.max).fold(0.0, f64::max);
    println!(
        "eigen: {} modes, lambda_1 = {}, worst residual {worst:e}; wrote {}",
        rows.len(),
        rows[0].mode.lambda,
        path.display()
    );
    Ok(())
}

fn cmd_analytic(cfg: &RunConfig) -> error::Result<()> {
    let p = &cfg.problem;
    let series = AnalyticSolution::assemble(p, cfg.modes, CoefficientMethod::Quadrature)?;

    let labels: Vec<String> = cfg.probes.iter().map(|&x| probe_label(p, x)).collect();
    let columns = format!("t_hours,{}", labels.join(","));
    let mut probes_csv = emit::create(cfg, "analytic", "probe_series.csv", &columns)?;
    for i in 0..=cfg.nt {
        let t = cfg.tmax * i as f64 / cfg.nt as f64;
        let mut row = (t / 3600.0).to_string();
        for &x in &cfg.probes {
            row.push(',');
            row.push_str(&series.eval(x, t)?.to_string());
        }
        probes_csv.row(format_args!("{row}"))?;
    }
    let probes_path = probes_csv.finish()?;

    let length = p.length();
    let nx = sample_intervals(length, cfg.dx);
    let mut field = emit::create(cfg, "analytic", "space_time_field.csv", "t,x,U")?;
    for i in 0..=cfg.nt {
        let t = cfg.tmax * i as f64 / cfg.nt as f64;
        for j in 0..=nx {
            let x = if j == nx { length } else { j as f64 * cfg.dx };
            field.row(format_args!("{t},{x},{}", series.eval(x, t)?))?;
        }
    }
    let field_path = field.finish()?;
    println!(
        "analytic: {} modes, series tail at tmax <= {:e}; wrote {} and {}",
        series.modes().len(),
        series.tail_estimate(cfg.tmax),
        probes_path.display(),
        field_path.display()
    );
    Ok(())
}

fn cmd_fdm(cfg: &RunConfig) -> error::Result<()> {
    let p = &cfg.problem;
    let grid = GridSpec::new(p, cfg.dx, cfg.dt)?;
    let nodes = cfg
        .probes
        .iter()
        .map(|&x| grid.node_at(x, p.length()))
        .collect::<heatbar::Result<Vec<usize>>>()?;
    let labels: Vec<String> = cfg.probes.iter().map(|&x| probe_label(p, x)).collect();
    let columns = format!("t_hours,{}", labels.join(","));
    let mut probes_csv = emit::create(cfg, "fdm", "probe_series.csv", &columns)?;
    let mut field = emit::create(cfg, "fdm", "space_time_field.csv", "t,x,U")?;

    let positions = grid.positions();
    let total = (cfg.tmax / grid.dt()).ceil() as u64;
    let mut state = FdmState::new(p, &grid);
    loop {
        let t = state.time();
        let mut row = (t / 3600.0).to_string();
        for &j in &nodes {
            row.push(',');
            row.push_str(&state.temps()[j].to_string());
        }
        probes_csv.row(format_args!("{row}"))?;
        for (x, u) in positions.iter().zip(state.temps()) {
            field.row(format_args!("{t},{x},{u}"))?;
        }
        let done = state.steps();
        if done >= total {
            break;
        }
        state.advance(cfg.stride.min(total - done))?;
    }
    let probes_path = probes_csv.finish()?;
    let field_path = field.finish()?;
    println!(
        "fdm: {} steps of dt = {} on {} nodes; U(l) = {}, U(L) = {}; wrote {} and {}",
        state.steps(),
        grid.dt(),
        grid.n_nodes(),
        state.temps()[grid.interface_node()],
        state.temps()[grid.n_nodes() - 1],
        probes_path.display(),
        field_path.display()
    );
    Ok(())
}

fn cmd_compare(cfg: &RunConfig) -> error::Result<()> {
    let grid = GridSpec::new(&cfg.problem, cfg.dx, cfg.dt)?;
    let table_rows = cfg.modes.min(10);
    let report =
        ComparisonReport::generate(&cfg.problem, &grid, &cfg.times, cfg.modes, table_rows)?;
    let mut csv = emit::create(
        cfg,
        "compare",
        "comparison.csv",
        "t_s,t_hours,linf,worst_x,l2,fdm_vs_steady_linf,analytic_vs_steady_linf",
    )?;
    for pc in &report.profiles {
        csv.row(format_args!(
            "{},{},{},{},{},{},{}",
            pc.t,
            pc.t / 3600.0,
            pc.linf,
            pc.worst_x,
            pc.l2,
            pc.fdm_vs_steady_linf,
            pc.analytic_vs_steady_linf
        ))?;
    }
    let csv_path = csv.finish()?;
    let text_path = emit::write_text(cfg, "compare", "comparison_report.txt", &report.to_text())?;
    for pc in &report.profiles {
        println!(
            "compare: t = {} s: |series - march| = {} C (Linf), {} C (L2)",
            pc.t, pc.linf, pc.l2
        );
    }
    println!(
        "compare: wrote {} and {}",
        csv_path.display(),
        text_path.display()
    );
    Ok(())
}
