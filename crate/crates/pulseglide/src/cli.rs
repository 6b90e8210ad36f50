//! Command-line interface: argument parsing, report serialization, and the
//! CSV/SVG writers.
//!
//! Exit codes: 0 on success (including help and version), 1 for command-line
//! usage errors, 2 for any runtime failure (configuration, domain, numerics,
//! or I/O), with a message on stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use pulseglide::error::{Error, Result};
use pulseglide::linear::{self, CriticalResult, LocusPoint, TransitionStructure};
use pulseglide::ode::Trajectory;
use pulseglide::pmp::Weights;
use pulseglide::trajopt::{
    self, DecisionVector, EvaluationResult, OptimizationResult, OptimizeOptions,
};
use pulseglide::vehicle::{self, BsfcParams, VehicleParams};
use pulseglide::{config, svg};

#[derive(Parser)]
#[command(
    name = "pulseglide",
    version,
    about = "Pulse-and-glide cruise analysis: equilibria, stability maps, and periodic trajectory optimization"
)]
struct Cli {
    /// JSON parameter file; built-in passenger-car defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the steady cruise equilibrium at a speed and report it as JSON.
    Equilibrium {
        /// Cruise speed (m/s).
        #[arg(long)]
        speed: f64,
        /// Write the JSON here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Sweep the input weight R and report the linearized modes as CSV.
    Locus {
        /// Cruise speed (m/s).
        #[arg(long)]
        speed: f64,
        /// Lower end of the R sweep (g s/N^2).
        #[arg(long, default_value_t = 1e-8)]
        r_min: f64,
        /// Upper end of the R sweep (g s/N^2).
        #[arg(long, default_value_t = 1e2)]
        r_max: f64,
        /// Number of logarithmically spaced samples.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out_csv: Option<PathBuf>,
        /// Also render an eigenvalue scatter plot.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Find the critical input weight across a range of speeds (CSV).
    Rcrit {
        /// Lowest speed (m/s).
        #[arg(long, default_value_t = 2.0)]
        v_min: f64,
        /// Highest speed (m/s).
        #[arg(long, default_value_t = 36.0)]
        v_max: f64,
        /// Speed increment (m/s).
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Write the CSV here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out_csv: Option<PathBuf>,
        /// Also render the sweep as stacked plots.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Find the speed above which pulse-and-glide stops paying (JSON).
    Vcrit {
        /// Write the JSON here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Optimize a periodic pulse-and-glide trajectory (JSON report).
    Optimize {
        /// Nominal cruise speed (m/s).
        #[arg(long)]
        speed: f64,
        /// Input weight R on the squared force rate (g s/N^2).
        #[arg(long, default_value_t = 3e-4)]
        r: f64,
        /// Speed weight C (g/m); defaults to the value that makes steady
        /// cruising at --speed stationary.
        #[arg(long)]
        c: Option<f64>,
        /// Fourier harmonics in the input, reached by continuation from one.
        #[arg(long, default_value_t = 1)]
        harmonics: usize,
        /// Integration steps per period.
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out_json: Option<PathBuf>,
        /// Also write the optimal trajectory as CSV.
        #[arg(long, value_name = "FILE")]
        out_csv: Option<PathBuf>,
        /// Also render the optimal trajectory as stacked plots.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Integrate a decision JSON over one period and emit the trajectory CSV.
    Simulate {
        /// Decision file: either an optimize report or a bare decision
        /// object with x1_0, x2_0, omega, a, b.
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Integration steps per period.
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out_csv: Option<PathBuf>,
        /// Also render the trajectory as stacked plots.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (vp, bp) = match &cli.config {
        Some(path) => config::load_params_file(path)?,
        None => (VehicleParams::default(), BsfcParams::default()),
    };
    match cli.command {
        Command::Equilibrium { speed, out } => cmd_equilibrium(speed, out, &vp, &bp),
        Command::Locus { speed, r_min, r_max, points, out_csv, svg } => {
            cmd_locus(speed, r_min, r_max, points, out_csv, svg, &vp, &bp)
        }
        Command::Rcrit { v_min, v_max, step, out_csv, svg } => {
            cmd_rcrit(v_min, v_max, step, out_csv, svg, &vp, &bp)
        }
        Command::Vcrit { out } => cmd_vcrit(out, &vp, &bp),
        Command::Optimize { speed, r, c, harmonics, steps, out_json, out_csv, svg } => {
            cmd_optimize(speed, r, c, harmonics, steps, out_json, out_csv, svg, &vp, &bp)
        }
        Command::Simulate { input, steps, out_csv, svg } => {
            cmd_simulate(&input, steps, out_csv, svg, &vp, &bp)
        }
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain { name, value })
    }
}

/// Write to the file when given, otherwise to stdout.
fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("serializing report: {e}")))?;
    text.push('\n');
    emit(path, &text)
}

#[derive(Serialize)]
struct EquilibriumReport {
    speed_mps: f64,
    force_n: f64,
    power_w: f64,
    fuel_rate_g_per_s: f64,
    lambda1: f64,
    lambda2: f64,
    weight_c_g_per_m: f64,
    steady_cost_g_per_s: f64,
}

fn cmd_equilibrium(
    speed: f64,
    out: Option<PathBuf>,
    vp: &VehicleParams,
    bp: &BsfcParams,
) -> Result<()> {
    require_positive("speed", speed)?;
    let eq = vehicle::equilibrium_for_speed(speed, vp, bp);
    let power = vehicle::power(vehicle::State::new(eq.v, eq.force));
    let report = EquilibriumReport {
        speed_mps: eq.v,
        force_n: eq.force,
        power_w: power,
        fuel_rate_g_per_s: vehicle::fuel_rate(power, bp),
        lambda1: eq.lambda1,
        lambda2: eq.lambda2,
        weight_c_g_per_m: eq.weight_c,
        steady_cost_g_per_s: vehicle::steady_cost(speed, eq.weight_c, vp, bp),
    };
    emit_json(out.as_deref(), &report)
}

fn locus_csv(points: &[LocusPoint]) -> String {
    let mut out = String::from("R,re1,im1,re2,im2,re3,im3,re4,im4,class\n");
    for p in points {
        let mut eigs = p.eigenvalues.s;
        // Largest imaginary part first; ties broken by real part descending.
        eigs.sort_by(|a, b| b.im.total_cmp(&a.im).then(b.re.total_cmp(&a.re)));
        let _ = write!(out, "{}", p.r_value);
        for e in &eigs {
            let _ = write!(out, ",{},{}", e.re, e.im);
        }
        let _ = writeln!(out, ",{}", p.mode);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_locus(
    speed: f64,
    r_min: f64,
    r_max: f64,
    points: usize,
    out_csv: Option<PathBuf>,
    svg_path: Option<PathBuf>,
    vp: &VehicleParams,
    bp: &BsfcParams,
) -> Result<()> {
    require_positive("speed", speed)?;
    require_positive("r-min", r_min)?;
    if r_max <= r_min {
        return Err(Error::Domain { name: "r-max", value: r_max });
    }
    if points < 2 {
        return Err(Error::Domain { name: "points", value: points as f64 });
    }
    let grid = linear::log_grid(r_min, r_max, points);
    let locus = linear::root_locus(speed, &grid, vp, bp)?;
    if linear::transition_structure(&locus) == TransitionStructure::ReEntrant {
        eprintln!(
            "note: the oscillatory region re-enters along this sweep; \
             a single critical R does not describe it"
        );
    }
    if let Some(path) = &svg_path {
        std::fs::write(path, svg::locus_svg(&locus)?)?;
    }
    emit(out_csv.as_deref(), &locus_csv(&locus))
}

fn critical_csv(rows: &[(f64, Option<CriticalResult>)]) -> String {
    let mut out = String::from("v_mps,r_crit,omega_rad_s,period_s\n");
    for (v, c) in rows {
        match c {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    v, c.r_crit, c.omega_at_crit, c.period_at_crit
                );
            }
            None => {
                let _ = writeln!(out, "{},,,", v);
            }
        }
    }
    out
}

fn cmd_rcrit(
    v_min: f64,
    v_max: f64,
    step: f64,
    out_csv: Option<PathBuf>,
    svg_path: Option<PathBuf>,
    vp: &VehicleParams,
    bp: &BsfcParams,
) -> Result<()> {
    require_positive("v-min", v_min)?;
    require_positive("step", step)?;
    if v_max < v_min {
        return Err(Error::Domain { name: "v-max", value: v_max });
    }
    let mut grid = Vec::new();
    let mut v = v_min;
    while v <= v_max + 1e-9 {
        grid.push(v);
        v = v_min + (grid.len() as f64) * step;
    }
    let rows: Vec<(f64, Option<CriticalResult>)> = linear::rcrit_sweep(&grid, vp, bp)
        .into_iter()
        .map(|(v, r)| (v, r.ok()))
        .collect();
    if let Some(path) = &svg_path {
        std::fs::write(path, svg::critical_svg(&rows)?)?;
    }
    emit(out_csv.as_deref(), &critical_csv(&rows))
}

#[derive(Serialize)]
struct VcritReport {
    v_crit_mps: f64,
    search_window_mps: [f64; 2],
    tolerance_mps: f64,
}

fn cmd_vcrit(out: Option<PathBuf>, vp: &VehicleParams, bp: &BsfcParams) -> Result<()> {
    let v_crit = linear::find_v_crit(vp, bp)?;
    let report = VcritReport {
        v_crit_mps: v_crit,
        search_window_mps: [2.0, 40.0],
        tolerance_mps: 1e-3,
    };
    emit_json(out.as_deref(), &report)
}

fn trajectory_csv(traj: &Trajectory<2>, d: &DecisionVector, bp: &BsfcParams) -> String {
    let mut out = String::from("t_s,x1_mps,x2_N,u_Nps,power_W,fuel_gps\n");
    for (t, row) in traj.t.iter().zip(&traj.rows) {
        let u = d.input.eval(*t);
        let power = row[0] * row[1];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            t,
            row[0],
            row[1],
            u,
            power,
            vehicle::fuel_rate(power, bp)
        );
    }
    out
}

fn trajectory_outputs(
    eval: &EvaluationResult,
    d: &DecisionVector,
    bp: &BsfcParams,
    out_csv: Option<&Path>,
    svg_path: Option<&Path>,
    csv_to_stdout_when_unset: bool,
) -> Result<()> {
    if let Some(path) = svg_path {
        let traj = &eval.trajectory;
        let x1: Vec<f64> = traj.rows.iter().map(|r| r[0]).collect();
        let x2: Vec<f64> = traj.rows.iter().map(|r| r[1]).collect();
        let u: Vec<f64> = traj.t.iter().map(|t| d.input.eval(*t)).collect();
        std::fs::write(path, svg::trajectory_svg(&traj.t, &x1, &x2, &u)?)?;
    }
    match (out_csv, csv_to_stdout_when_unset) {
        (Some(path), _) => emit(Some(path), &trajectory_csv(&eval.trajectory, d, bp)),
        (None, true) => emit(None, &trajectory_csv(&eval.trajectory, d, bp)),
        (None, false) => Ok(()),
    }
}

#[derive(Serialize)]
struct CostReport {
    total_g_per_s: f64,
    fuel_g_per_s: f64,
    speed_g_per_s: f64,
    input_g_per_s: f64,
    steady_g_per_s: f64,
}

#[derive(Serialize)]
struct ResidualReport {
    r_x1_mps: f64,
    r_x2_n: f64,
    min_x2_n: f64,
}

#[derive(Serialize)]
struct StageReport {
    harmonics: usize,
    cost_g_per_s: f64,
    converged: bool,
    iterations: usize,
}

#[derive(Serialize)]
struct OptimizeReport {
    speed_mps: f64,
    speed_weight_g_per_m: f64,
    input_weight_g_s_per_n2: f64,
    harmonics: usize,
    decision: DecisionVector,
    cost: CostReport,
    residuals: ResidualReport,
    converged: bool,
    period_s: f64,
    continuation: Vec<StageReport>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    speed: f64,
    r: f64,
    c: Option<f64>,
    harmonics: usize,
    steps: usize,
    out_json: Option<PathBuf>,
    out_csv: Option<PathBuf>,
    svg_path: Option<PathBuf>,
    vp: &VehicleParams,
    bp: &BsfcParams,
) -> Result<()> {
    require_positive("speed", speed)?;
    require_positive("r", r)?;
    if harmonics == 0 {
        return Err(Error::Domain { name: "harmonics", value: 0.0 });
    }
    let eq = vehicle::equilibrium_for_speed(speed, vp, bp);
    let w = Weights {
        speed_weight: c.unwrap_or(eq.weight_c),
        jerk_weight: r,
    };
    let opts = OptimizeOptions { steps, ..OptimizeOptions::default() };
    let d0 = trajopt::default_initial_guess(speed, vp, bp);
    let seed = trajopt::optimize(&d0, &w, vp, bp, &opts)?;
    let sequence: Vec<OptimizationResult> = if harmonics > 1 {
        trajopt::continuation(&seed, harmonics, &w, vp, bp, &opts)?
    } else {
        vec![seed]
    };
    let last = sequence.last().expect("continuation returns at least the seed");

    let report = OptimizeReport {
        speed_mps: speed,
        speed_weight_g_per_m: w.speed_weight,
        input_weight_g_s_per_n2: w.jerk_weight,
        harmonics: last.decision.input.harmonics(),
        decision: last.decision.clone(),
        cost: CostReport {
            total_g_per_s: last.eval.j_total,
            fuel_g_per_s: last.eval.fuel_term,
            speed_g_per_s: last.eval.speed_term,
            input_g_per_s: last.eval.jerk_term,
            steady_g_per_s: vehicle::steady_cost(speed, w.speed_weight, vp, bp),
        },
        residuals: ResidualReport {
            r_x1_mps: last.eval.r_x1,
            r_x2_n: last.eval.r_x2,
            min_x2_n: last.eval.min_x2,
        },
        converged: last.converged,
        period_s: last.decision.input.period(),
        continuation: sequence
            .iter()
            .map(|s| StageReport {
                harmonics: s.decision.input.harmonics(),
                cost_g_per_s: s.eval.j_total,
                converged: s.converged,
                iterations: s.iterations,
            })
            .collect(),
    };
    emit_json(out_json.as_deref(), &report)?;
    trajectory_outputs(&last.eval, &last.decision, bp, out_csv.as_deref(), svg_path.as_deref(), false)
}

fn parse_decision(text: &str) -> Result<DecisionVector> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("decision file: {e}")))?;
    let body = value.get("decision").unwrap_or(&value);
    serde_json::from_value(body.clone())
        .map_err(|e| Error::Config(format!("decision file: {e}")))
}

fn cmd_simulate(
    input: &Path,
    steps: usize,
    out_csv: Option<PathBuf>,
    svg_path: Option<PathBuf>,
    vp: &VehicleParams,
    bp: &BsfcParams,
) -> Result<()> {
    let d = parse_decision(&std::fs::read_to_string(input)?)?;
    // The weights scale cost terms only; the trajectory itself is
    // weight-independent, and only the trajectory is reported here.
    let w = Weights { speed_weight: 0.0, jerk_weight: 0.0 };
    let eval = trajopt::evaluate(&d, &w, vp, bp, steps)?;
    trajectory_outputs(&eval, &d, bp, out_csv.as_deref(), svg_path.as_deref(), true)
}
