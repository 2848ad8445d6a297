//! Command-line front door: optimize, compare against separated transport,
//! sweep, validate and carbon accounting.

pub mod report;
pub mod sweep;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

pub use report::{build_report, Comparison, Report};
pub use sweep::{run_sweep, SweepAxis, SweepRow, SweepSpec};

use crate::economics::FareMode;
use crate::evaluate::{EvalOptions, Evaluator};
use crate::model::{load_instance_file, validate_instance, Instance, Severity};
use crate::scalarize::PenaltyMode;
use crate::service_time::{monte_carlo_reliability, WaitMode};
use crate::solver::{optimize, Algorithm, OptimizeResult, SolverConfig, SolverTrace};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] anyhow::Error),
    #[error("no feasible solution found")]
    Infeasible,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Infeasible => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pfsm", version, about = "Passenger-freight shared-mobility bus scheduling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize the schedule; writes report.json and trace.csv under --out.
    Optimize(SolveArgs),
    /// Optimize, then set the result against separated passenger and parcel transport.
    Compare(SolveArgs),
    /// Re-optimize over a grid of demand levels or limits.
    Sweep(SweepArgs),
    /// Check an instance file and print per-run aggregates.
    Validate(ValidateArgs),
    /// Carbon emissions of diesel distance and electric energy.
    Carbon(CarbonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Ijs)]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 100)]
    pub pop: usize,
    #[arg(long, default_value_t = 150)]
    pub iters: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FareMode::Described)]
    pub fare_mode: FareMode,
    /// How waiting time enters the travel-time sum.
    #[arg(long, value_enum, default_value_t = WaitMode::Waiting)]
    pub wait_mode: WaitMode,
    #[arg(long, value_enum, default_value_t = PenaltyMode::Linear)]
    pub penalty: PenaltyMode,
    /// Also estimate per-run on-time probability from N sampled days.
    #[arg(long, value_name = "N")]
    pub monte_carlo: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Override the average travel-time limit (minutes).
    #[arg(long, value_name = "MIN")]
    pub tmax: Option<f64>,
    /// Override the minimum passenger share (percent).
    #[arg(long, value_name = "PCT")]
    pub lambda_min: Option<f64>,
}

impl SolveArgs {
    pub fn config(&self) -> SolverConfig {
        SolverConfig {
            algorithm: self.algo,
            pop: self.pop,
            iters: self.iters,
            seed: self.seed,
            penalty_mode: self.penalty,
            eval: EvalOptions { fare_mode: self.fare_mode, wait_mode: self.wait_mode },
            ..SolverConfig::default()
        }
    }

    pub fn load(&self) -> anyhow::Result<Instance> {
        let mut inst = load_instance_file(&self.instance)
            .with_context(|| format!("cannot load instance {}", self.instance.display()))?;
        if let Some(t) = self.tmax {
            inst.limits.t_max_min = t;
        }
        if let Some(p) = self.lambda_min {
            inst.limits.lambda_min = p / 100.0;
        }
        Ok(inst.finalize()?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long, value_enum)]
    pub sweep_axis: SweepAxis,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sweep_values: Vec<f64>,
    /// Parcel totals for the demand axis.
    #[arg(long, value_delimiter = ',')]
    pub sweep_values2: Vec<f64>,
    /// Seeds per grid cell, counted up from --seed.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Print the full report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CarbonArgs {
    /// Diesel vehicle distance.
    #[arg(long, default_value_t = 0.0)]
    pub km: f64,
    /// Electric traction energy.
    #[arg(long, default_value_t = 0.0)]
    pub kwh: f64,
    /// Read emission factors from this instance.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub diesel_l_per_km: Option<f64>,
    #[arg(long)]
    pub diesel_kg_per_l: Option<f64>,
    #[arg(long)]
    pub grid_kg_per_kwh: Option<f64>,
}

/// Format with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

pub fn write_trace<W: Write>(out: W, trace: &SolverTrace) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iter", "best_F", "best_Z", "best_T", "feasible_count", "evals"])?;
    for r in &trace.rows {
        w.write_record([
            r.iter.to_string(),
            sig6(r.best_f),
            sig6(r.best_z),
            sig6(r.best_t),
            r.feasible_count.to_string(),
            r.evals.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "cell", "axis", "value", "value2", "seed", "best_F", "best_Z", "best_T", "feasible", "passengers", "parcels",
        "pcr", "ier", "spcr",
    ])?;
    for r in rows {
        w.write_record([
            r.cell.to_string(),
            r.axis.name().to_string(),
            sig6(r.value),
            r.value2.map(sig6).unwrap_or_default(),
            r.seed.to_string(),
            sig6(r.best_f),
            sig6(r.best_z),
            sig6(r.best_t),
            r.feasible.to_string(),
            r.passengers.to_string(),
            r.parcels.to_string(),
            sig6(r.ratios.pcr),
            sig6(r.ratios.ier),
            sig6(r.ratios.spcr),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn out_dir(dir: &Option<PathBuf>) -> anyhow::Result<Option<&Path>> {
    match dir {
        Some(d) => {
            fs::create_dir_all(d).with_context(|| format!("cannot create {}", d.display()))?;
            Ok(Some(d.as_path()))
        }
        None => Ok(None),
    }
}

/// Optimize and assemble the report, with Monte-Carlo reliability when asked.
pub fn optimize_report(
    inst: &Instance,
    cfg: &SolverConfig,
    monte_carlo: Option<usize>,
) -> anyhow::Result<(Report, OptimizeResult)> {
    let result = optimize(inst, cfg)?;
    let evaluator = Evaluator::new(inst, cfg.eval)?;
    let (_, timeline) = evaluator.evaluate_detailed(&result.solution)?;
    let mut report = build_report(inst, &result, &timeline);
    if let Some(n) = monte_carlo {
        report.reliability = Some(monte_carlo_reliability(inst, evaluator.timing(), n, cfg.seed)?);
    }
    Ok((report, result))
}

fn print_report(r: &Report) {
    println!("{}  algorithm {}  seed {}", r.instance, r.solver.algorithm, r.solver.seed);
    println!("{:>4}  {:<8} {:>5}  runs", "bus", "type", "λ%");
    for row in &r.scheme {
        let runs: Vec<String> = row.runs.iter().map(|x| x.to_string()).collect();
        println!("{:>4}  {:<8} {:>5}  {}", row.bus, row.vehicle_type, row.lambda_pct, runs.join(","));
    }
    let c = &r.costs;
    println!(
        "Z {:.2}  E_u {:.2}  E_f {:.2}  C_toll {:.2}  C_dwell {:.2}  C_run {:.2}  C_fix {:.2}",
        c.profit, c.passenger_revenue, c.freight_revenue, c.toll, c.dwell, c.running, c.purchasing
    );
    let t = &r.times;
    println!(
        "T {:.2} min/passenger  cruise {:.1}  dwell {:.1}  wait {:.1}  detention {:.1}",
        t.avg, t.cruise, t.dwell, t.wait, t.detention
    );
    println!("{:.2} km  {:.2} kWh  {:.2} kg CO2  feasible {}", c.distance_km, r.carbon.energy_kwh, r.carbon.kg_co2, r.feasible);
}

pub fn cmd_optimize(args: &SolveArgs) -> Result<Report, CliError> {
    let inst = args.load()?;
    let (report, result) = optimize_report(&inst, &args.config(), args.monte_carlo)?;
    if let Some(dir) = out_dir(&args.out)? {
        write_json(&dir.join("report.json"), &report)?;
        let f = fs::File::create(dir.join("trace.csv")).context("cannot create trace.csv")?;
        write_trace(f, &result.trace)?;
    }
    print_report(&report);
    if !report.feasible {
        return Err(CliError::Infeasible);
    }
    Ok(report)
}

pub fn cmd_compare(args: &SolveArgs) -> Result<Comparison, CliError> {
    let inst = args.load()?;
    if inst.truck.is_none() {
        return Err(anyhow::anyhow!("instance has no truck parameters").into());
    }
    let cfg = args.config();
    let (pfsm, _) = optimize_report(&inst, &cfg, args.monte_carlo)?;
    let sep = report::evaluate_separated(&inst, &pfsm.solution, cfg.eval)?;
    let cmp = report::compare(pfsm, sep);
    if let Some(dir) = out_dir(&args.out)? {
        write_json(&dir.join("compare.json"), &cmp)?;
    }
    print_report(&cmp.pfsm);
    let s = &cmp.separated;
    println!(
        "separated: Z {:.2}  T {:.2}  buses {}  trucks {}  truck km {:.2}  truck cost {:.2}  truck CO2 {:.2} kg",
        s.z,
        s.bus.t(),
        s.buses_used,
        s.trucks.trucks,
        s.trucks.km,
        s.trucks.total_cost(),
        s.trucks.kg_co2
    );
    println!(
        "Z gain {:.2}  T increase {:.2}%  vehicles {} vs {}",
        cmp.z_gain, cmp.avg_time_increase_pct, cmp.pfsm_vehicles, cmp.separated_vehicles
    );
    if !cmp.pfsm.feasible {
        return Err(CliError::Infeasible);
    }
    Ok(cmp)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<SweepRow>, CliError> {
    let inst = args.solve.load()?;
    let spec = SweepSpec {
        axis: args.sweep_axis,
        values: args.sweep_values.clone(),
        values2: args.sweep_values2.clone(),
        seeds: args.seeds,
    };
    let rows = run_sweep(&inst, &spec, &args.solve.config())?;
    match out_dir(&args.solve.out)? {
        Some(dir) => {
            let f = fs::File::create(dir.join("sweep.csv")).context("cannot create sweep.csv")?;
            write_sweep(f, &rows)?;
        }
        None => write_sweep(std::io::stdout().lock(), &rows)?,
    }
    Ok(rows)
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let inst = load_instance_file(&args.instance)
        .with_context(|| format!("cannot load instance {}", args.instance.display()))?;
    let report = validate_instance(&inst);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).context("serialize")?);
    } else {
        for f in &report.findings {
            let tag = match f.severity {
                Severity::Info => "info",
                Severity::Warning => "warning",
                Severity::Error => "error",
            };
            println!("{tag}: {}", f.message);
        }
        for a in &report.aggregates {
            let on: u64 = a.boardings.values().sum();
            let parcels: u64 = a.parcels_loaded.values().sum();
            println!("run {:>3}: {on} passengers, {parcels} parcels", a.run);
        }
        println!("{} errors, {} warnings", report.error_count(), report.warning_count());
    }
    if report.error_count() > 0 {
        return Err(anyhow::anyhow!("instance has {} errors", report.error_count()).into());
    }
    Ok(())
}

pub fn cmd_carbon(args: &CarbonArgs) -> Result<(f64, f64), CliError> {
    if args.km < 0.0 || args.kwh < 0.0 {
        return Err(anyhow::anyhow!("distance and energy must be nonnegative").into());
    }
    let mut factors = match &args.instance {
        Some(p) => load_instance_file(p).with_context(|| format!("cannot load {}", p.display()))?.carbon,
        None => Default::default(),
    };
    if let Some(v) = args.diesel_l_per_km {
        factors.diesel_l_per_km = v;
    }
    if let Some(v) = args.diesel_kg_per_l {
        factors.diesel_kg_per_l = v;
    }
    if let Some(v) = args.grid_kg_per_kwh {
        factors.grid_kg_per_kwh = v;
    }
    let diesel = report::diesel_co2_kg(args.km, factors.diesel_l_per_km, factors.diesel_kg_per_l);
    let electric = report::electric_co2_kg(args.kwh, factors.grid_kg_per_kwh);
    println!("diesel   {} km x {} L/km x {} kg/L = {} kg CO2", args.km, factors.diesel_l_per_km, factors.diesel_kg_per_l, sig6(diesel));
    println!("electric {} kWh x {} kg/kWh = {} kg CO2", args.kwh, factors.grid_kg_per_kwh, sig6(electric));
    println!("total    {} kg CO2", sig6(diesel + electric));
    Ok((diesel, electric))
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match &cli.command {
        Command::Optimize(a) => cmd_optimize(a).map(|_| ()),
        Command::Compare(a) => cmd_compare(a).map(|_| ()),
        Command::Sweep(a) => cmd_sweep(a).map(|_| ()),
        Command::Validate(a) => cmd_validate(a),
        Command::Carbon(a) => cmd_carbon(a).map(|_| ()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
