mod common;

use std::process::Command;

use pfsm::cli::report::{evaluate_separated, passenger_only_instance, Report};
use pfsm::cli::sweep::{cell_instance, run_sweep, SweepAxis, SweepSpec};
use pfsm::cli::Comparison;
use pfsm::solver::{optimize, SolverConfig};
use pfsm::{EvalOptions, Evaluator, Solution};

fn pfsm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pfsm"))
}

fn quick() -> SolverConfig {
    SolverConfig { pop: 20, iters: 10, ..SolverConfig::default() }
}

#[test]
fn missing_instance_exits_with_input_error() {
    let out = pfsm().args(["optimize", "--instance", "/nonexistent/instance.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot load instance"));
}

#[test]
fn bad_sweep_grid_is_an_input_error() {
    let inst = common::data("micro.json");
    let out = pfsm()
        .args(["sweep", "--instance", inst.to_str().unwrap(), "--sweep-axis", "demand", "--sweep-values", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn optimize_writes_report_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let inst = common::data("yushe.json");
    let status = pfsm()
        .args(["optimize", "--instance", inst.to_str().unwrap(), "--pop", "20", "--iters", "12"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap()
        .status;
    assert!(matches!(status.code(), Some(0) | Some(2)));

    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    let again: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
    assert_eq!(report.scheme.len(), 6);
    assert_eq!(status.code() == Some(0), report.feasible);

    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("iter,best_F,best_Z,best_T,feasible_count,evals"));
    assert_eq!(lines.count(), 12);
}

#[test]
fn compare_uses_no_more_vehicles_than_separated_transport() {
    let dir = tempfile::tempdir().unwrap();
    let inst = common::data("yushe.json");
    pfsm()
        .args(["compare", "--instance", inst.to_str().unwrap(), "--pop", "20", "--iters", "20"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    let cmp: Comparison = serde_json::from_str(&std::fs::read_to_string(dir.path().join("compare.json")).unwrap()).unwrap();
    assert!(cmp.pfsm_vehicles <= cmp.separated_vehicles);
    assert_eq!(cmp.separated.trucks.trucks, 4);
    assert!((cmp.z_gain - (cmp.pfsm.costs.profit - cmp.separated.z)).abs() < 1e-9);
}

#[test]
fn compare_without_truck_parameters_fails() {
    let inst = common::data("micro.json");
    let out = pfsm().args(["compare", "--instance", inst.to_str().unwrap(), "--pop", "5", "--iters", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_prints_one_row_per_cell_and_seed() {
    let inst = common::data("micro.json");
    let out = pfsm()
        .args(["sweep", "--instance", inst.to_str().unwrap(), "--pop", "10", "--iters", "5"])
        .args(["--sweep-axis", "t_max", "--sweep-values", "40,50,60", "--seeds", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let seeds: Vec<u64> = reader.records().map(|r| r.unwrap()[4].parse().unwrap()).collect();
    assert_eq!(seeds, vec![1, 2, 1, 2, 1, 2]);
}

#[test]
fn single_cell_sweep_matches_optimize() {
    let base = common::yushe();
    let cfg = SolverConfig { seed: 7, ..quick() };
    let spec = SweepSpec { axis: SweepAxis::FreightDemand, values: vec![900.0], values2: vec![], seeds: 1 };
    let rows = run_sweep(&base, &spec, &cfg).unwrap();
    let inst = cell_instance(&base, SweepAxis::FreightDemand, 900.0, None).unwrap();
    assert_eq!(inst.total_parcels(), 900);
    let direct = optimize(&inst, &cfg).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].seed, 7);
    assert_eq!(rows[0].best_f, direct.fitness.f);
    assert_eq!(rows[0].best_z, direct.evaluation.z());
    assert_eq!(rows[0].best_t, direct.evaluation.t());
}

#[test]
fn without_parcels_both_modes_agree_on_the_bus_side() {
    let inst = passenger_only_instance(&common::yushe()).unwrap();
    let sep = inst.separated.clone().unwrap();
    let sol = Solution {
        x: sep.schedule.unwrap(),
        y: vec![sep.bus_type; inst.fleet()],
        lambda_pct: vec![100; inst.fleet()],
    };
    let pfsm = Evaluator::new(&inst, EvalOptions::default()).unwrap().evaluate(&sol).unwrap();
    let separated = evaluate_separated(&inst, &sol, EvalOptions::default()).unwrap();
    assert_eq!(separated.bus, pfsm);
    assert_eq!(separated.trucks.trucks, 0);
    assert_eq!(pfsm.costs.freight_revenue, 0.0);
}

#[test]
fn carbon_command_prints_both_figures() {
    let out = pfsm().args(["carbon", "--km", "350.28", "--kwh", "394.06"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("140.6"), "{text}");
    assert!(text.contains("313.9"), "{text}");
}

#[test]
fn validate_accepts_bundled_instances() {
    for name in ["yushe.json", "simnet.json", "micro.json"] {
        let out = pfsm().args(["validate", "--instance", common::data(name).to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
