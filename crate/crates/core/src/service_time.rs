//! Lower level: run timelines, passenger time components and travel-time
//! reliability.
//!
//! Internal times are minutes after midnight. Dwell inputs are seconds and
//! are converted where dwell enters a cost or a passenger time.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal as NormalSampler};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::economics::seat_count;
use crate::error::EvalError;
use crate::model::{DwellParams, Instance, RunId, StopId};
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SegmentTimeStats {
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub free_flow: f64,
    pub volume: f64,
    pub capacity: f64,
}

/// How the waiting term is accumulated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WaitMode {
    /// Passenger-minutes: each arrival waits until the bus comes.
    #[default]
    Waiting,
    /// Integral of the arrival rate, i.e. the arrival count.
    Literal,
}

/// BPR mean travel time `a * (1 + beta * (q / c)^z)`.
pub fn bpr_mean(free_flow: f64, volume: f64, capacity: f64, beta: f64, power: f64) -> f64 {
    free_flow * (1.0 + beta * (volume / capacity).powf(power))
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

pub fn normal_quantile(p: f64) -> f64 {
    standard_normal().inverse_cdf(p)
}

pub fn normal_cdf(x: f64) -> f64 {
    standard_normal().cdf(x)
}

/// Cornish-Fisher corrected quantile of a standardized variable with the
/// given skewness and excess kurtosis.
pub fn cornish_fisher_quantile(gamma: f64, skewness: f64, kurtosis: f64) -> Result<f64, EvalError> {
    if !(gamma > 0.5 && gamma < 1.0) {
        return Err(EvalError::ConfidenceOutOfRange(gamma));
    }
    let z = normal_quantile(gamma);
    Ok(z + skewness / 6.0 * (z * z - 1.0) + kurtosis / 24.0 * (z.powi(3) - 3.0 * z)
        - skewness * skewness / 36.0 * (2.0 * z.powi(3) - 5.0 * z))
}

/// Travel time budget met with probability `gamma`.
pub fn time_budget(stats: &SegmentTimeStats, gamma: f64) -> Result<f64, EvalError> {
    Ok(stats.mean + stats.std * cornish_fisher_quantile(gamma, stats.skewness, stats.kurtosis)?)
}

/// Probability that the travel time does not exceed `budget`.
pub fn reliability(stats: &SegmentTimeStats, budget: f64) -> f64 {
    if stats.std > 0.0 {
        normal_cdf((budget - stats.mean) / stats.std)
    } else if budget >= stats.mean {
        1.0
    } else {
        0.0
    }
}

/// Stop dwell in seconds: the slowest of alighting, boarding and parcel
/// handling. `boarding_demand` is capped by the remaining seats.
pub fn stop_dwell(
    params: &DwellParams,
    alightings: u64,
    boarding_demand: u64,
    remaining_seats: u64,
    parcels_handled: u64,
    freight_stop: bool,
) -> f64 {
    let alight = params.per_passenger_s * alightings as f64;
    let board = params.per_passenger_s * boarding_demand.min(remaining_seats) as f64;
    let freight = if freight_stop { params.per_parcel_s * parcels_handled as f64 } else { 0.0 };
    alight.max(board).max(freight)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StopEvent {
    pub stop: StopId,
    pub arrival: f64,
    pub departure: f64,
    pub dwell_s: f64,
    pub boardings: u64,
    pub alightings: u64,
    pub parcels_on: u64,
    pub parcels_off: u64,
    /// Passengers on board when leaving the stop.
    pub onboard: u64,
    pub onboard_parcel_m3: f64,
    /// Seats free after alighting, before boarding.
    pub remaining_seats: u64,
    /// New arrivals plus passengers detained by the previous run.
    pub waiting: u64,
    pub detained: u64,
    /// Passengers of this run's own demand who arrived during the window.
    pub new_arrivals: u64,
    /// Length of the arrival window preceding this bus (minutes).
    pub window_min: f64,
    /// Extra wait of each detained passenger until the next bus arrives.
    pub detention_min: f64,
}

/// A group of passengers or parcels carried together between two stops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ride {
    pub from: StopId,
    pub to: StopId,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub run: RunId,
    pub bus: u32,
    pub vehicle_type: usize,
    pub lambda: f64,
    pub seats: u64,
    pub freight_capacity_m3: f64,
    pub carries_parcels: bool,
    pub stops: Vec<StopEvent>,
    pub passengers: Vec<Ride>,
    pub parcels: Vec<Ride>,
    pub rejected_parcels: u64,
}

impl RunTrace {
    fn index_of(&self, stop: StopId) -> Option<usize> {
        self.stops.iter().position(|e| e.stop == stop)
    }

    pub fn dwell_s(&self) -> f64 {
        self.stops.iter().map(|e| e.dwell_s).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTimeline {
    /// One trace per run, in instance run order.
    pub runs: Vec<RunTrace>,
    /// Passengers still detained after the last run of their stream.
    pub unserved_passengers: u64,
    pub rejected_parcels: u64,
}

impl RunTimeline {
    pub fn total_dwell_s(&self) -> f64 {
        self.runs.iter().map(RunTrace::dwell_s).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeBreakdown {
    pub cruise: f64,
    pub dwell: f64,
    pub wait: f64,
    pub detention: f64,
    pub total: f64,
    pub avg: f64,
}

/// Solution-independent timing data for one run.
#[derive(Debug, Clone)]
struct RunPlan {
    /// Stops in travel order, including distribution centers.
    stops: Vec<StopId>,
    /// Mean time of the segment leaving `stops[i]`.
    seg_mean: Vec<f64>,
    seg_stats: Vec<SegmentTimeStats>,
    freight_stop: Vec<bool>,
    passenger_stop: Vec<bool>,
    /// First and last service (non-DC end) indices in travel order.
    service: (usize, usize),
}

/// Timing tables derived once from an instance and reused across solutions.
#[derive(Debug, Clone)]
pub struct TimingModel {
    plans: Vec<RunPlan>,
    /// Runs grouped by line and direction, each sorted by departure.
    streams: Vec<Vec<usize>>,
}

impl TimingModel {
    pub fn new(inst: &Instance) -> Result<Self, EvalError> {
        let mut plans = Vec::with_capacity(inst.num_runs());
        for r in 0..inst.num_runs() {
            plans.push(plan_run(inst, r)?);
        }
        let mut seen = vec![false; inst.num_runs()];
        let mut streams = Vec::new();
        let mut order: Vec<usize> = (0..inst.num_runs()).collect();
        order.sort_by(|&a, &b| inst.runs[a].departure.0.total_cmp(&inst.runs[b].departure.0).then(a.cmp(&b)));
        for &r in &order {
            if seen[r] {
                continue;
            }
            let mut head = r;
            while let Some(p) = inst.prev_run(head) {
                head = p;
            }
            let mut stream = vec![head];
            seen[head] = true;
            while let Some(n) = inst.next_run(*stream.last().unwrap()) {
                seen[n] = true;
                stream.push(n);
            }
            streams.push(stream);
        }
        Ok(TimingModel { plans, streams })
    }

    /// Mean/std of the travel time between two stops of a run.
    pub fn path_stats(&self, run: usize, from: StopId, to: StopId) -> Option<SegmentTimeStats> {
        let plan = &self.plans[run];
        let a = plan.stops.iter().position(|&s| s == from)?;
        let b = plan.stops.iter().position(|&s| s == to)?;
        if a >= b {
            return None;
        }
        let mut acc = SegmentTimeStats { capacity: 1.0, ..Default::default() };
        let mut var = 0.0;
        for s in &plan.seg_stats[a..b] {
            acc.mean += s.mean;
            acc.free_flow += s.free_flow;
            var += s.std * s.std;
            acc.skewness = s.skewness;
            acc.kurtosis = s.kurtosis;
        }
        acc.std = var.sqrt();
        Some(acc)
    }

    pub fn simulate(&self, inst: &Instance, sol: &Solution) -> Result<RunTimeline, EvalError> {
        sol.check_dimensions(inst)?;
        let mut runs: Vec<Option<RunTrace>> = vec![None; inst.num_runs()];
        let mut unserved = 0;
        for stream in &self.streams {
            let mut carry: HashMap<StopId, VecDeque<(StopId, u64)>> = HashMap::new();
            for &r in stream {
                runs[r] = Some(self.simulate_run(inst, sol, r, &mut carry));
            }
            unserved += carry.values().flatten().map(|g| g.1).sum::<u64>();
            // Detention lasts until the next bus of the stream reaches the stop.
            for w in stream.windows(2) {
                let next = runs[w[1]].take().unwrap();
                let cur = runs[w[0]].as_mut().unwrap();
                for e in cur.stops.iter_mut().filter(|e| e.detained > 0) {
                    if let Some(i) = next.index_of(e.stop) {
                        e.detention_min = next.stops[i].arrival - e.departure;
                    }
                }
                runs[w[1]] = Some(next);
            }
        }
        let runs: Vec<RunTrace> = runs.into_iter().map(|r| r.expect("every run belongs to a stream")).collect();
        let rejected_parcels = runs.iter().map(|r| r.rejected_parcels).sum();
        let mut timeline = RunTimeline { runs, unserved_passengers: unserved, rejected_parcels };
        fill_windows(inst, &mut timeline);
        Ok(timeline)
    }

    fn simulate_run(
        &self,
        inst: &Instance,
        sol: &Solution,
        r: usize,
        carry: &mut HashMap<StopId, VecDeque<(StopId, u64)>>,
    ) -> RunTrace {
        let plan = &self.plans[r];
        let run = &inst.runs[r];
        let bus = sol.bus_of(r);
        let vt = sol.y[bus];
        let lambda = sol.lambda(bus);
        let vehicle = &inst.vehicle_types[vt];
        let seats = seat_count(vehicle.capacity_m3, lambda, inst.seat_volume_m3);
        let fcap = (1.0 - lambda) * vehicle.capacity_m3;
        let pv = inst.parcel_volume();
        let pos = |s: StopId| plan.stops.iter().position(|&x| x == s);

        // Parcel admission in record order, limited by free volume en route.
        let nseg = plan.stops.len() - 1;
        let mut seg_load = vec![0.0; nseg];
        let mut parcels = Vec::new();
        let mut rejected = 0;
        for rec in inst.parcel_records(r) {
            let count = u64::from(rec.count);
            let (Some(a), Some(b)) = (pos(rec.from), pos(rec.to)) else {
                rejected += count;
                continue;
            };
            if a >= b || !plan.freight_stop[a] || !plan.freight_stop[b] {
                rejected += count;
                continue;
            }
            let free = seg_load[a..b].iter().map(|l| fcap - l).fold(f64::INFINITY, f64::min);
            let fit = ((free + 1e-9) / pv).floor().max(0.0) as u64;
            let take = count.min(fit);
            rejected += count - take;
            if take > 0 {
                for l in &mut seg_load[a..b] {
                    *l += take as f64 * pv;
                }
                parcels.push(Ride { from: rec.from, to: rec.to, count: take });
            }
        }
        let carries_parcels = !parcels.is_empty();
        let (first, last) = if carries_parcels { (0, plan.stops.len() - 1) } else { plan.service };

        // New passenger demand per origin, in record order.
        let mut fresh: BTreeMap<StopId, Vec<(StopId, u64)>> = BTreeMap::new();
        for rec in inst.passenger_records(r) {
            if let (Some(a), Some(b)) = (pos(rec.from), pos(rec.to)) {
                if a < b && plan.passenger_stop[a] && plan.passenger_stop[b] && rec.count > 0 {
                    fresh.entry(rec.from).or_default().push((rec.to, u64::from(rec.count)));
                }
            }
        }

        let mut onboard: Vec<(StopId, StopId, u64)> = Vec::new();
        let mut rides: Vec<Ride> = Vec::new();
        let mut parcel_m3 = 0.0;
        let mut events = Vec::with_capacity(last - first + 1);
        for i in first..=last {
            let stop = plan.stops[i];
            let mut e = StopEvent { stop, ..Default::default() };

            onboard.retain(|&(_, to, n)| {
                if to == stop {
                    e.alightings += n;
                }
                to != stop
            });

            if plan.passenger_stop[i] {
                let seated: u64 = onboard.iter().map(|g| g.2).sum();
                e.remaining_seats = seats.saturating_sub(seated);
                let mut queue = carry.remove(&stop).unwrap_or_default();
                if let Some(groups) = fresh.remove(&stop) {
                    e.new_arrivals = groups.iter().map(|g| g.1).sum();
                    queue.extend(groups);
                }
                e.waiting = queue.iter().map(|g| g.1).sum();
                let mut room = e.remaining_seats;
                let mut left = VecDeque::new();
                for (to, n) in queue {
                    let take = n.min(room);
                    room -= take;
                    if take > 0 {
                        onboard.push((stop, to, take));
                        rides.push(Ride { from: stop, to, count: take });
                    }
                    if n > take {
                        left.push_back((to, n - take));
                    }
                }
                e.boardings = e.remaining_seats - room;
                e.detained = e.waiting - e.boardings;
                if !left.is_empty() {
                    carry.insert(stop, left);
                }
            }

            for p in &parcels {
                if p.to == stop {
                    e.parcels_off += p.count;
                    parcel_m3 -= p.count as f64 * pv;
                }
                if p.from == stop {
                    e.parcels_on += p.count;
                    parcel_m3 += p.count as f64 * pv;
                }
            }
            e.onboard = onboard.iter().map(|g| g.2).sum();
            e.onboard_parcel_m3 = parcel_m3.max(0.0);
            e.dwell_s = stop_dwell(
                &inst.dwell,
                e.alightings,
                e.waiting,
                e.remaining_seats,
                e.parcels_on + e.parcels_off,
                plan.freight_stop[i],
            );
            events.push(e);
        }

        // Times: the first service stop departs on schedule; distribution
        // center legs before it are back-computed.
        let s0 = plan.service.0 - first;
        events[s0].arrival = run.departure.0;
        events[s0].departure = run.departure.0 + events[s0].dwell_s / 60.0;
        for k in (0..s0).rev() {
            events[k].departure = events[k + 1].arrival - plan.seg_mean[first + k];
            events[k].arrival = events[k].departure - events[k].dwell_s / 60.0;
        }
        for k in s0 + 1..events.len() {
            events[k].arrival = events[k - 1].departure + plan.seg_mean[first + k - 1];
            events[k].departure = events[k].arrival + events[k].dwell_s / 60.0;
        }

        RunTrace {
            run: run.id,
            bus: bus as u32 + 1,
            vehicle_type: vt,
            lambda,
            seats,
            freight_capacity_m3: fcap,
            carries_parcels,
            stops: events,
            passengers: rides,
            parcels,
            rejected_parcels: rejected,
        }
    }
}

fn plan_run(inst: &Instance, r: usize) -> Result<RunPlan, EvalError> {
    let run = &inst.runs[r];
    let line = inst.run_line(r);
    let order = inst.run_positions(r);
    let stops: Vec<StopId> = order.iter().map(|&p| line.stops[p]).collect();
    let (lo, hi) = inst.service_span(line);
    let service = if run.direction > 0 {
        (lo, hi)
    } else {
        let n = line.stops.len() - 1;
        (n - hi, n - lo)
    };
    let service_km = inst.service_km(r);
    let duration = run.duration_min();
    let bpr = &inst.bpr;

    let mut seg_mean = Vec::with_capacity(stops.len() - 1);
    let mut seg_stats = Vec::with_capacity(stops.len() - 1);
    for w in order.windows(2) {
        let (from, to) = (line.stops[w[0]], line.stops[w[1]]);
        let km = line.path_km(w[0], w[1]);
        let ov = bpr.segments.iter().find(|o| {
            o.run.is_none_or(|id| id == run.id)
                && ((o.from == from && o.to == to) || (o.from == to && o.to == from))
        });
        let free_flow = ov.and_then(|o| o.free_flow_min).unwrap_or(duration * km / service_km);
        let (volume, capacity) = ov.map_or((0.0, 1.0), |o| (o.volume, o.capacity));
        if !(capacity > 0.0) {
            return Err(EvalError::NonPositiveCapacity { run: run.id, from, to, capacity });
        }
        let mean = bpr_mean(free_flow, volume, capacity, bpr.beta, bpr.power);
        let std = ov.and_then(|o| o.sigma_min).unwrap_or(bpr.cv * mean);
        seg_mean.push(mean);
        seg_stats.push(SegmentTimeStats {
            mean,
            std,
            skewness: bpr.skewness,
            kurtosis: bpr.kurtosis,
            free_flow,
            volume,
            capacity,
        });
    }
    let freight_stop = stops.iter().map(|&s| inst.stop(s).is_some_and(|s| s.allows_freight())).collect();
    let passenger_stop = stops
        .iter()
        .enumerate()
        .map(|(i, &s)| i >= service.0 && i <= service.1 && inst.stop(s).is_some_and(|s| s.allows_passengers()))
        .collect();
    Ok(RunPlan { stops, seg_mean, seg_stats, freight_stop, passenger_stop, service })
}

/// Statistics of the segment between two stops of run `r`.
pub fn segment_time(inst: &Instance, r: usize, from: StopId, to: StopId) -> Result<SegmentTimeStats, EvalError> {
    let model = TimingModel::new(inst)?;
    model.path_stats(r, from, to).ok_or_else(|| {
        EvalError::Model(crate::error::ModelError::StopNotOnLine { stop: to, line: inst.runs[r].line })
    })
}

pub fn simulate_timeline(inst: &Instance, sol: &Solution) -> Result<RunTimeline, EvalError> {
    TimingModel::new(inst)?.simulate(inst, sol)
}

/// Passenger time components of a simulated timeline.
pub fn time_breakdown(inst: &Instance, timeline: &RunTimeline, mode: WaitMode) -> TimeBreakdown {
    let mut t = TimeBreakdown::default();
    for trace in &timeline.runs {
        for ride in &trace.passengers {
            let (Some(a), Some(b)) = (trace.index_of(ride.from), trace.index_of(ride.to)) else {
                continue;
            };
            let n = ride.count as f64;
            let dwell: f64 = trace.stops[a + 1..b].iter().map(|e| e.dwell_s / 60.0).sum();
            let ride_min = trace.stops[b].arrival - trace.stops[a].departure;
            t.cruise += n * (ride_min - dwell);
            t.dwell += n * dwell;
        }
        for e in &trace.stops {
            let arrivals = e.new_arrivals as f64;
            t.wait += match mode {
                WaitMode::Waiting => arrivals * e.window_min / 2.0,
                WaitMode::Literal => arrivals,
            };
            t.detention += e.detained as f64 * e.detention_min;
        }
    }
    t.total = t.cruise + t.dwell + t.wait + t.detention;
    let pax = inst.total_passengers();
    t.avg = if pax == 0 { 0.0 } else { t.total / pax as f64 };
    t
}

/// Fill the arrival windows of every stop event. Each window opens when the
/// previous bus of the stream left the stop (or at service start) and is
/// capped by the instance's arrival lead time.
fn fill_windows(inst: &Instance, timeline: &mut RunTimeline) {
    let lead = inst.arrivals.lead_min.unwrap_or(f64::INFINITY);
    for r in 0..timeline.runs.len() {
        let prev = inst.prev_run(r);
        let start = inst.service_start(r);
        for k in 0..timeline.runs[r].stops.len() {
            let (stop, arrival) = {
                let e = &timeline.runs[r].stops[k];
                (e.stop, e.arrival)
            };
            let open = prev
                .and_then(|p| {
                    let pt = &timeline.runs[p];
                    pt.index_of(stop).map(|i| pt.stops[i].departure)
                })
                .unwrap_or(start);
            timeline.runs[r].stops[k].window_min = (arrival - open).clamp(0.0, lead);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReliability {
    pub run: RunId,
    pub mean_min: f64,
    pub std_min: f64,
    pub budget_min: f64,
    pub analytic: f64,
    pub empirical: f64,
}

/// Compare the analytic on-time probability of each run's in-motion time with
/// a Monte-Carlo estimate from normally perturbed segment times.
pub fn monte_carlo_reliability(
    inst: &Instance,
    model: &TimingModel,
    samples: usize,
    seed: u64,
) -> Result<Vec<RunReliability>, EvalError> {
    let gamma = inst.reliability.gamma;
    let mut out = Vec::with_capacity(inst.num_runs());
    for r in 0..inst.num_runs() {
        let plan = &model.plans[r];
        let (a, b) = plan.service;
        let stats = model
            .path_stats(r, plan.stops[a], plan.stops[b])
            .expect("service span has at least one segment");
        let budget = time_budget(&stats, gamma)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let mut hits = 0usize;
        for _ in 0..samples {
            let mut total = 0.0;
            for s in &plan.seg_stats[a..b] {
                total += if s.std > 0.0 {
                    NormalSampler::new(s.mean, s.std).expect("finite").sample(&mut rng)
                } else {
                    s.mean
                };
            }
            hits += usize::from(total <= budget);
        }
        out.push(RunReliability {
            run: inst.runs[r].id,
            mean_min: stats.mean,
            std_min: stats.std,
            budget_min: budget,
            analytic: reliability(&stats, budget),
            empirical: if samples == 0 { f64::NAN } else { hits as f64 / samples as f64 },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn stats(mean: f64, std: f64) -> SegmentTimeStats {
        SegmentTimeStats { mean, std, capacity: 1.0, ..Default::default() }
    }

    #[test]
    fn bpr_examples() {
        assert_abs_diff_eq!(bpr_mean(10.0, 1.0, 1.0, 0.15, 4.0), 11.5, epsilon = 1e-12);
        assert_eq!(bpr_mean(10.0, 0.0, 1.0, 0.15, 4.0), 10.0);
    }

    #[test]
    fn budget_at_085() {
        let z = cornish_fisher_quantile(0.85, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(z, 1.0364333894937898, epsilon = 1e-9);
        assert_abs_diff_eq!(time_budget(&stats(11.5, 2.0), 0.85).unwrap(), 13.572867, epsilon = 1e-6);
    }

    #[test]
    fn cornish_fisher_terms() {
        let z: f64 = 1.0364333894937898;
        let (s, k) = (0.5, 1.0);
        let by_hand = z + s / 6.0 * (z * z - 1.0) + k / 24.0 * (z.powi(3) - 3.0 * z) - s * s / 36.0 * (2.0 * z.powi(3) - 5.0 * z);
        assert_abs_diff_eq!(cornish_fisher_quantile(0.85, s, k).unwrap(), by_hand, epsilon = 1e-12);
        assert!(cornish_fisher_quantile(0.4, 0.0, 0.0).is_err());
        assert!(cornish_fisher_quantile(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn reliability_edges() {
        let s = stats(10.0, 2.0);
        assert_abs_diff_eq!(reliability(&s, 10.0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(reliability(&s, time_budget(&s, 0.85).unwrap()), 0.85, epsilon = 1e-9);
        assert_abs_diff_eq!(reliability(&s, 1e9), 1.0, epsilon = 1e-12);
        assert_eq!(reliability(&stats(10.0, 0.0), 10.0), 1.0);
        assert_eq!(reliability(&stats(10.0, 0.0), 9.0), 0.0);
    }

    #[test]
    fn dwell_examples() {
        let p = DwellParams { per_passenger_s: 3.0, per_parcel_s: 5.0, cost_per_hour: 30.0 };
        assert_eq!(stop_dwell(&p, 5, 10, 8, 4, true), 24.0);
        assert_eq!(stop_dwell(&p, 5, 10, 8, 4, false), 24.0);
        assert_eq!(stop_dwell(&p, 0, 0, 0, 0, true), 0.0);
        assert_eq!(stop_dwell(&p, 0, 0, 0, 10, true), 50.0);
    }
}
