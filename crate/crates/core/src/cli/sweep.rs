//! Sensitivity sweeps over demand, the travel-time limit and the minimum
//! passenger share.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{Instance, OdRecord};
use crate::solver::{optimize, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepAxis {
    PassengerDemand,
    FreightDemand,
    /// Passenger totals from the first grid crossed with parcel totals from the second.
    Demand,
    TMax,
    LambdaMin,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::PassengerDemand => "passenger_demand",
            SweepAxis::FreightDemand => "freight_demand",
            SweepAxis::Demand => "demand",
            SweepAxis::TMax => "t_max",
            SweepAxis::LambdaMin => "lambda_min",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Second grid, only for the demand axis.
    pub values2: Vec<f64>,
    pub seeds: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.values.is_empty() {
            anyhow::bail!("sweep grid is empty");
        }
        if self.seeds == 0 {
            anyhow::bail!("at least one seed per cell is required");
        }
        if self.axis == SweepAxis::Demand && self.values2.is_empty() {
            anyhow::bail!("the demand axis needs a second grid of parcel totals");
        }
        if self.values.iter().chain(&self.values2).any(|v| !v.is_finite() || *v < 0.0) {
            anyhow::bail!("sweep values must be finite and nonnegative");
        }
        Ok(())
    }

    /// Grid points in row-major order, `None` as the second value off the demand axis.
    pub fn grid(&self) -> Vec<(f64, Option<f64>)> {
        match self.axis {
            SweepAxis::Demand => self
                .values
                .iter()
                .flat_map(|&a| self.values2.iter().map(move |&b| (a, Some(b))))
                .collect(),
            _ => self.values.iter().map(|&v| (v, None)).collect(),
        }
    }
}

/// Scale integer counts to sum to `target` while keeping their proportions:
/// floor every share, then hand the leftover units to the largest remainders
/// (earlier records win ties).
pub fn largest_remainder(counts: &[u32], target: u64) -> Vec<u32> {
    let total: u64 = counts.iter().map(|&c| u64::from(c)).sum();
    if total == 0 {
        return counts.to_vec();
    }
    let mut out = Vec::with_capacity(counts.len());
    let mut rems = Vec::with_capacity(counts.len());
    for (i, &c) in counts.iter().enumerate() {
        let exact = u128::from(c) * u128::from(target);
        out.push((exact / u128::from(total)) as u32);
        rems.push((exact % u128::from(total), i));
    }
    let assigned: u64 = out.iter().map(|&c| u64::from(c)).sum();
    rems.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in rems.iter().take((target - assigned) as usize) {
        out[i] += 1;
    }
    out
}

fn rescale(records: &mut [OdRecord], target: u64) {
    let counts: Vec<u32> = records.iter().map(|r| r.count).collect();
    for (r, c) in records.iter_mut().zip(largest_remainder(&counts, target)) {
        r.count = c;
    }
}

/// The instance for one grid point.
pub fn cell_instance(base: &Instance, axis: SweepAxis, value: f64, value2: Option<f64>) -> anyhow::Result<Instance> {
    let mut inst = base.clone();
    match axis {
        SweepAxis::PassengerDemand => rescale(&mut inst.demand.passengers, value.round() as u64),
        SweepAxis::FreightDemand => rescale(&mut inst.demand.parcels, value.round() as u64),
        SweepAxis::Demand => {
            rescale(&mut inst.demand.passengers, value.round() as u64);
            rescale(&mut inst.demand.parcels, value2.unwrap_or(0.0).round() as u64);
        }
        SweepAxis::TMax => inst.limits.t_max_min = value,
        SweepAxis::LambdaMin => inst.limits.lambda_min = value / 100.0,
    }
    Ok(inst.finalize()?)
}

/// Revenue-per-unit ratios of the best scheme, each read as `1 : x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitRatios {
    /// Revenue per parcel over revenue per passenger.
    pub pcr: f64,
    /// Parcels needed to earn one passenger's fare.
    pub ier: f64,
    /// Parcels stacked in one seat's volume against the passenger in that seat.
    pub spcr: f64,
}

pub fn unit_ratios(inst: &Instance, passenger_revenue: f64, freight_revenue: f64) -> UnitRatios {
    let (nu, nf) = (inst.total_passengers() as f64, inst.total_parcels() as f64);
    if nu == 0.0 || nf == 0.0 || passenger_revenue <= 0.0 || freight_revenue <= 0.0 {
        return UnitRatios { pcr: f64::NAN, ier: f64::NAN, spcr: f64::NAN };
    }
    let pcr = (freight_revenue / nf) / (passenger_revenue / nu);
    let per_seat = inst.seat_volume_m3 / inst.parcel_volume();
    UnitRatios { pcr, ier: 1.0 / pcr, spcr: per_seat * pcr }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cell: usize,
    pub axis: SweepAxis,
    pub value: f64,
    pub value2: Option<f64>,
    pub seed: u64,
    pub best_f: f64,
    pub best_z: f64,
    pub best_t: f64,
    pub feasible: bool,
    pub passengers: u64,
    pub parcels: u64,
    pub ratios: UnitRatios,
}

/// Optimize every grid point for every seed. Cells run in parallel; rows
/// come back in grid order, seeds `base.seed .. base.seed + seeds`.
pub fn run_sweep(base: &Instance, spec: &SweepSpec, config: &SolverConfig) -> anyhow::Result<Vec<SweepRow>> {
    spec.validate()?;
    let jobs: Vec<(usize, f64, Option<f64>, u64)> = spec
        .grid()
        .into_iter()
        .enumerate()
        .flat_map(|(cell, (v, v2))| (0..spec.seeds).map(move |s| (cell, v, v2, s)))
        .collect();
    jobs.par_iter()
        .map(|&(cell, value, value2, s)| {
            let inst = cell_instance(base, spec.axis, value, value2)?;
            let cfg = SolverConfig { seed: config.seed + s, ..config.clone() };
            let res = optimize(&inst, &cfg)?;
            let c = &res.evaluation.costs;
            Ok(SweepRow {
                cell,
                axis: spec.axis,
                value,
                value2,
                seed: cfg.seed,
                best_f: res.fitness.f,
                best_z: res.evaluation.z(),
                best_t: res.evaluation.t(),
                feasible: res.evaluation.feasible,
                passengers: inst.total_passengers(),
                parcels: inst.total_parcels(),
                ratios: unit_ratios(&inst, c.passenger_revenue, c.freight_revenue),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn largest_remainder_hits_target() {
        assert_eq!(largest_remainder(&[1, 1, 1], 5), vec![2, 2, 1]);
        assert_eq!(largest_remainder(&[15, 15], 15), vec![8, 7]);
        assert_eq!(largest_remainder(&[3, 6], 6), vec![2, 4]);
        assert_eq!(largest_remainder(&[0, 0], 10), vec![0, 0]);
    }

    #[test]
    fn demand_grid_is_cartesian() {
        let spec = SweepSpec {
            axis: SweepAxis::Demand,
            values: vec![100.0, 300.0, 500.0, 700.0, 900.0],
            values2: vec![500.0, 1000.0, 1500.0, 2000.0, 2500.0],
            seeds: 1,
        };
        spec.validate().unwrap();
        assert_eq!(spec.grid().len(), 25);
    }
}
