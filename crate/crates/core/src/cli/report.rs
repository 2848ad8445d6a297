//! Report assembly, the separated-transport baseline and carbon accounting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::economics::CostBreakdown;
use crate::error::EvalError;
use crate::evaluate::{EvalOptions, Evaluation, Evaluator};
use crate::model::{CarbonFactors, Instance, LineId, RunId, TruckParams};
use crate::scalarize::{EwmWeights, Fitness};
use crate::service_time::{RunReliability, RunTimeline, TimeBreakdown};
use crate::solution::Solution;
use crate::solver::OptimizeResult;

pub fn diesel_co2_kg(km: f64, l_per_km: f64, kg_per_l: f64) -> f64 {
    km * l_per_km * kg_per_l
}

pub fn electric_co2_kg(kwh: f64, kg_per_kwh: f64) -> f64 {
    kwh * kg_per_kwh
}

/// Daily traction energy: the per-run figure when the instance gives one,
/// otherwise driven distance times the serving type's consumption.
pub fn energy_kwh(inst: &Instance, sol: &Solution, timeline: &RunTimeline) -> f64 {
    (0..inst.num_runs())
        .map(|r| match inst.runs[r].energy_kwh {
            Some(e) => e,
            None => {
                let km = inst.run_distance(r, timeline.runs[r].carries_parcels);
                km * inst.vehicle_types[sol.type_of_run(r)].energy_kwh_per_km
            }
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusRow {
    pub bus: u32,
    pub runs: Vec<RunId>,
    pub vehicle_type: String,
    pub lambda_pct: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarbonSummary {
    pub energy_kwh: f64,
    pub grid_kg_per_kwh: f64,
    pub kg_co2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverMeta {
    pub algorithm: String,
    pub seed: u64,
    pub pop: usize,
    pub iters: usize,
    pub evaluations: u64,
    pub wall_time_s: f64,
    pub first_hit_iteration: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: String,
    pub currency: String,
    pub scheme: Vec<BusRow>,
    pub solution: Solution,
    pub costs: CostBreakdown,
    pub times: TimeBreakdown,
    pub feasible: bool,
    pub residual_sum: f64,
    pub fitness: Fitness,
    pub weights: EwmWeights,
    pub carbon: CarbonSummary,
    pub solver: SolverMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reliability: Option<Vec<RunReliability>>,
}

pub fn scheme_table(inst: &Instance, sol: &Solution) -> Vec<BusRow> {
    sol.duties(inst.fleet())
        .into_iter()
        .enumerate()
        .map(|(k, runs)| BusRow {
            bus: k as u32 + 1,
            runs: runs.into_iter().map(|r| inst.runs[r].id).collect(),
            vehicle_type: inst.vehicle_types[sol.y[k]].id.clone(),
            lambda_pct: sol.lambda_pct[k],
        })
        .collect()
}

pub fn carbon_summary(inst: &Instance, sol: &Solution, timeline: &RunTimeline) -> CarbonSummary {
    let energy = energy_kwh(inst, sol, timeline);
    CarbonSummary {
        energy_kwh: energy,
        grid_kg_per_kwh: inst.carbon.grid_kg_per_kwh,
        kg_co2: electric_co2_kg(energy, inst.carbon.grid_kg_per_kwh),
    }
}

pub fn build_report(inst: &Instance, result: &OptimizeResult, timeline: &RunTimeline) -> Report {
    let sol = &result.solution;
    let e = &result.evaluation;
    Report {
        instance: inst.name.clone(),
        currency: inst.currency.clone(),
        scheme: scheme_table(inst, sol),
        solution: sol.clone(),
        costs: e.costs,
        times: e.times,
        feasible: e.feasible,
        residual_sum: e.residual_sum,
        fitness: result.fitness,
        weights: result.scalarizer.weights,
        carbon: carbon_summary(inst, sol, timeline),
        solver: SolverMeta {
            algorithm: result.config.algorithm.name().to_string(),
            seed: result.config.seed,
            pop: result.config.pop,
            iters: result.config.iters,
            evaluations: result.trace.evaluations,
            wall_time_s: result.trace.wall_time_s,
            first_hit_iteration: result.trace.first_hit_iteration(),
        },
        reliability: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruckSummary {
    pub trucks: u32,
    pub km: f64,
    pub fuel_cost: f64,
    pub purchase_cost: f64,
    pub wage_cost: f64,
    pub kg_co2: f64,
}

impl TruckSummary {
    pub fn total_cost(&self) -> f64 {
        self.fuel_cost + self.purchase_cost + self.wage_cost
    }
}

/// Dedicated trucks for the parcel flow. Each line direction gets enough
/// trucks to move its daily parcel volume in one trip, and every truck
/// drives the full line between the two distribution centers and back.
pub fn truck_fleet(inst: &Instance, params: &TruckParams, carbon: &CarbonFactors) -> TruckSummary {
    let mut volume: BTreeMap<(LineId, i8), f64> = BTreeMap::new();
    for r in 0..inst.num_runs() {
        let run = &inst.runs[r];
        let parcels: u64 = inst.parcel_records(r).map(|p| u64::from(p.count)).sum();
        *volume.entry((run.line, run.direction)).or_default() += parcels as f64 * inst.parcel_volume();
    }
    let mut trucks = 0u32;
    let mut km = 0.0;
    for ((line, _), v) in volume {
        if v <= 0.0 {
            continue;
        }
        let n = (v / params.capacity_m3 - 1e-9).ceil().max(1.0) as u32;
        let line = inst.line(line).expect("validated line");
        trucks += n;
        km += f64::from(n) * 2.0 * line.path_km(0, line.stops.len() - 1);
    }
    TruckSummary {
        trucks,
        km,
        fuel_cost: km * params.fuel_cost_per_km,
        purchase_cost: f64::from(trucks) * params.purchase_per_day,
        wage_cost: f64::from(trucks) * params.wage_per_day,
        kg_co2: diesel_co2_kg(km, carbon.diesel_l_per_km, carbon.diesel_kg_per_l),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatedSummary {
    pub solution: Solution,
    pub buses_used: usize,
    pub bus: Evaluation,
    pub bus_carbon: CarbonSummary,
    pub trucks: TruckSummary,
    /// Bus-side profit; truck costs are reported alongside, not netted in.
    pub z: f64,
}

/// Same instance without parcels: one vehicle type, every bus at full
/// passenger share.
pub fn passenger_only_instance(inst: &Instance) -> Result<Instance, crate::error::ModelError> {
    let mut copy = inst.clone();
    copy.demand.parcels.clear();
    copy.finalize()
}

pub fn evaluate_separated(
    inst: &Instance,
    pfsm: &Solution,
    opts: EvalOptions,
) -> Result<SeparatedSummary, anyhow::Error> {
    let truck = inst.truck.as_ref().ok_or_else(|| anyhow::anyhow!("instance has no truck parameters"))?;
    let (bus_type, schedule) = match &inst.separated {
        Some(s) => (s.bus_type, s.schedule.clone()),
        None => (inst.num_types() / 2, None),
    };
    if bus_type >= inst.num_types() {
        anyhow::bail!("separated bus type {bus_type} out of range");
    }
    let pax = passenger_only_instance(inst)?;
    let sol = Solution {
        x: schedule.unwrap_or_else(|| pfsm.x.clone()),
        y: vec![bus_type; inst.fleet()],
        lambda_pct: vec![100; inst.fleet()],
    };
    let evaluator = Evaluator::new(&pax, opts)?;
    let (bus, timeline) = evaluator.evaluate_detailed(&sol).map_err(|e: EvalError| anyhow::anyhow!(e))?;
    let mut used: Vec<u32> = sol.x.clone();
    used.sort_unstable();
    used.dedup();
    Ok(SeparatedSummary {
        buses_used: used.len(),
        bus_carbon: carbon_summary(&pax, &sol, &timeline),
        trucks: truck_fleet(inst, truck, &inst.carbon),
        z: bus.z(),
        bus,
        solution: sol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub pfsm: Report,
    pub separated: SeparatedSummary,
    pub z_gain: f64,
    pub avg_time_increase_pct: f64,
    pub pfsm_vehicles: usize,
    pub separated_vehicles: usize,
}

pub fn compare(pfsm: Report, separated: SeparatedSummary) -> Comparison {
    let mut used: Vec<u32> = pfsm.solution.x.clone();
    used.sort_unstable();
    used.dedup();
    let t_sep = separated.bus.t();
    Comparison {
        z_gain: pfsm.costs.profit - separated.z,
        avg_time_increase_pct: if t_sep > 0.0 { 100.0 * (pfsm.times.avg - t_sep) / t_sep } else { 0.0 },
        pfsm_vehicles: used.len(),
        separated_vehicles: separated.buses_used + separated.trucks.trucks as usize,
        pfsm,
        separated,
    }
}
