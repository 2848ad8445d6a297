//! Upper level: operating costs, fare and freight revenue, the profit
//! objective and the constraint residuals.

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::model::{Instance, TollTable};
use crate::service_time::RunTimeline;
use crate::solution::Solution;

/// Reading of the piecewise fare formulas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FareMode {
    /// Base fare covers the first base kilometres; the per-km rate applies beyond.
    #[default]
    Described,
    /// As typeset: the per-km rate is also charged inside the base distance.
    Literal,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub toll: f64,
    /// Also reported as idle cost.
    pub dwell: f64,
    pub running: f64,
    pub purchasing: f64,
    pub passenger_revenue: f64,
    pub freight_revenue: f64,
    pub profit: f64,
    /// Distance driven by all runs, detours included (km).
    pub distance_km: f64,
}

impl CostBreakdown {
    pub fn total_cost(&self) -> f64 {
        self.toll + self.dwell + self.running + self.purchasing
    }
}

/// Seats of a bus whose passenger share is `lambda`.
pub fn seat_count(capacity_m3: f64, lambda: f64, seat_volume_m3: f64) -> u64 {
    // Guard against 0.8 * 20.3 / 1.0 landing a hair under an integer.
    ((lambda * capacity_m3 / seat_volume_m3) + 1e-9).floor().max(0.0) as u64
}

/// Fare for one trip of `km` with the given base fare, per-km rate and base distance.
pub fn trip_fare(km: f64, base: f64, per_km: f64, base_km: f64, mode: FareMode) -> f64 {
    if km <= base_km {
        match mode {
            FareMode::Described => base,
            FareMode::Literal => base + per_km * km,
        }
    } else {
        base + per_km * (km - base_km)
    }
}

/// Toll rate for a bus with `seats` seats.
pub fn toll_rate(table: &TollTable, seats: u64) -> Result<f64, EvalError> {
    let b = table.seat_thresholds;
    if !(b[0] < b[1] && b[1] < b[2]) {
        return Err(EvalError::NonMonotoneToll(b));
    }
    let class = b.iter().position(|&t| seats <= u64::from(t)).unwrap_or(3);
    Ok(table.rates[class])
}

pub fn toll_cost(inst: &Instance, sol: &Solution) -> Result<f64, EvalError> {
    let Some(table) = &inst.toll else {
        return Ok(0.0);
    };
    let mut total = 0.0;
    for r in 0..inst.num_runs() {
        let k = sol.bus_of(r);
        let vt = &inst.vehicle_types[sol.y[k]];
        let seats = seat_count(vt.capacity_m3, sol.lambda(k), inst.seat_volume_m3);
        total += toll_rate(table, seats)? * inst.run_line(r).toll_km;
    }
    Ok(total)
}

/// Dwell cost from the total dwell seconds over all runs and stops.
pub fn dwell_cost(cost_per_hour: f64, total_dwell_s: f64) -> f64 {
    cost_per_hour / 3600.0 * total_dwell_s
}

/// Running cost of every run plus the purchasing cost of every bus. Detours
/// to the distribution centers are driven only by runs that carry parcels.
pub fn fixed_and_running_cost(inst: &Instance, sol: &Solution, timeline: &RunTimeline) -> (f64, f64, f64) {
    let mut running = 0.0;
    let mut km_total = 0.0;
    for r in 0..inst.num_runs() {
        let mut km = inst.service_km(r);
        if timeline.runs[r].carries_parcels {
            km += inst.detour_km(r);
        }
        km_total += km;
        running += km * inst.vehicle_types[sol.type_of_run(r)].running_cost_per_km;
    }
    let purchasing = sol.y.iter().map(|&t| inst.vehicle_types[t].purchasing_cost_per_day).sum();
    (running, purchasing, km_total)
}

/// Fare revenue of every passenger carried, at the rate of the bus type that carried them.
pub fn passenger_revenue(inst: &Instance, timeline: &RunTimeline, mode: FareMode) -> Result<f64, EvalError> {
    let f = &inst.fares;
    let mut total = 0.0;
    for (r, trace) in timeline.runs.iter().enumerate() {
        let line = inst.run_line(r);
        let per_km = inst.vehicle_types[trace.vehicle_type].per_km_fare;
        for ride in &trace.passengers {
            let km = inst.od_km(line, ride.from, ride.to)?;
            total += ride.count as f64 * trip_fare(km, f.passenger_base, per_km, f.passenger_base_km, mode);
        }
    }
    Ok(total)
}

/// Freight revenue of every parcel carried; independent of the bus type.
pub fn freight_revenue(inst: &Instance, timeline: &RunTimeline, mode: FareMode) -> Result<f64, EvalError> {
    let f = &inst.fares;
    let mut total = 0.0;
    for (r, trace) in timeline.runs.iter().enumerate() {
        let line = inst.run_line(r);
        for ride in &trace.parcels {
            let km = inst.od_km(line, ride.from, ride.to)?;
            total += ride.count as f64 * trip_fare(km, f.freight_base, f.freight_per_km, f.freight_base_km, mode);
        }
    }
    Ok(total)
}

pub fn profit(inst: &Instance, sol: &Solution, timeline: &RunTimeline, mode: FareMode) -> Result<CostBreakdown, EvalError> {
    let toll = toll_cost(inst, sol)?;
    let dwell = dwell_cost(inst.dwell.cost_per_hour, timeline.total_dwell_s());
    let (running, purchasing, distance_km) = fixed_and_running_cost(inst, sol, timeline);
    let passenger_revenue = passenger_revenue(inst, timeline, mode)?;
    let freight_revenue = freight_revenue(inst, timeline, mode)?;
    let profit = passenger_revenue + freight_revenue - running - dwell - purchasing - toll;
    Ok(CostBreakdown { toll, dwell, running, purchasing, passenger_revenue, freight_revenue, profit, distance_km })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResiduals {
    /// Per run: peak onboard passengers above the seat count.
    pub passenger_overload: Vec<f64>,
    /// Per run: peak parcel volume above the freight share (m³).
    pub freight_overload: Vec<f64>,
    /// Per bus: shortfall of the passenger share below its minimum.
    pub lambda_violation: Vec<f64>,
    pub type_violations: u32,
    pub assignment_violations: u32,
    /// Pairs of time-overlapping runs sharing a bus.
    pub duty_conflicts: u32,
    /// Demanded passengers above the total seats offered.
    pub passenger_shortfall: f64,
    /// Demanded parcel volume above the total freight space offered (m³).
    pub freight_shortfall: f64,
    pub unserved_passengers: u64,
    /// Reported only: a parcel left behind loses its fare but breaks no constraint.
    pub rejected_parcels: u64,
    /// Average passenger travel time above the limit (minutes).
    pub avg_time_excess: f64,
}

impl ConstraintResiduals {
    pub fn is_feasible(&self) -> bool {
        self.passenger_overload.iter().all(|&v| v == 0.0)
            && self.freight_overload.iter().all(|&v| v == 0.0)
            && self.lambda_violation.iter().all(|&v| v == 0.0)
            && self.type_violations == 0
            && self.assignment_violations == 0
            && self.duty_conflicts == 0
            && self.passenger_shortfall == 0.0
            && self.freight_shortfall == 0.0
            && self.unserved_passengers == 0
            && self.avg_time_excess == 0.0
    }

    /// Sum of residuals, each scaled to be dimensionless and of order one.
    pub fn normalized_sum(&self, inst: &Instance) -> f64 {
        let pax = inst.total_passengers().max(1) as f64;
        let parcels = inst.total_parcels().max(1) as f64;
        let parcel_m3 = parcels * inst.parcel_volume();
        let runs = inst.num_runs() as f64;
        self.passenger_overload.iter().sum::<f64>() / pax
            + self.freight_overload.iter().sum::<f64>() / parcel_m3
            + self.lambda_violation.iter().sum::<f64>()
            + f64::from(self.type_violations + self.assignment_violations + self.duty_conflicts) / runs
            + self.passenger_shortfall / pax
            + self.freight_shortfall / parcel_m3
            + self.unserved_passengers as f64 / pax
            + self.avg_time_excess / inst.limits.t_max_min.max(1.0)
    }
}

pub fn constraint_residuals(
    inst: &Instance,
    sol: &Solution,
    timeline: &RunTimeline,
    avg_time: f64,
) -> ConstraintResiduals {
    let mut res = ConstraintResiduals::default();
    let pv = inst.parcel_volume();
    let mut seats_total = 0.0;
    let mut freight_total = 0.0;
    for trace in &timeline.runs {
        let peak_pax = trace.stops.iter().map(|e| e.onboard).max().unwrap_or(0);
        res.passenger_overload.push(peak_pax.saturating_sub(trace.seats) as f64);
        let peak_m3 = trace.stops.iter().map(|e| e.onboard_parcel_m3).fold(0.0, f64::max);
        res.freight_overload.push((peak_m3 - trace.freight_capacity_m3 - 1e-9).max(0.0));
        seats_total += trace.seats as f64;
        freight_total += trace.freight_capacity_m3;
    }
    let lambda_min = inst.limits.lambda_min;
    res.lambda_violation = (0..sol.lambda_pct.len())
        .map(|k| {
            let short = lambda_min - sol.lambda(k);
            if short > 1e-9 { short } else { 0.0 }
        })
        .collect();
    res.type_violations = sol.y.iter().filter(|&&t| t >= inst.num_types()).count() as u32;
    res.assignment_violations = sol.x.iter().filter(|&&b| b == 0 || b as usize > inst.fleet()).count() as u32;
    for duty in sol.duties(inst.fleet()) {
        for (i, &a) in duty.iter().enumerate() {
            for &b in &duty[i + 1..] {
                if inst.runs[a].overlaps(&inst.runs[b]) {
                    res.duty_conflicts += 1;
                }
            }
        }
    }
    res.passenger_shortfall = (inst.total_passengers() as f64 - seats_total).max(0.0);
    res.freight_shortfall = (inst.total_parcels() as f64 * pv - freight_total - 1e-9).max(0.0);
    res.unserved_passengers = timeline.unserved_passengers;
    res.rejected_parcels = timeline.rejected_parcels;
    res.avg_time_excess = (avg_time - inst.limits.t_max_min).max(0.0);
    res
}
