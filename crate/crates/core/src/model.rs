//! Problem instance: network, timetable, vehicle catalog, demand and every
//! economic/behavioural parameter the two evaluation levels need.
//!
//! An [`Instance`] is built once by [`load_instance`] and is immutable
//! afterwards, so it can be shared freely between threads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ModelError;

pub const SCHEMA_VERSION: u32 = 1;

pub type StopId = u32;
pub type LineId = u32;
pub type RunId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopKind {
    Regular,
    /// Distribution center: parcels only.
    Dc,
    /// Integrated transportation service center: passengers and parcels.
    Itsc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stop {
    pub id: StopId,
    pub kind: StopKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Stop {
    pub fn allows_freight(&self) -> bool {
        !matches!(self.kind, StopKind::Regular)
    }

    pub fn allows_passengers(&self) -> bool {
        !matches!(self.kind, StopKind::Dc)
    }
}

/// A bidirectional line. `stops` lists the full stop sequence in the forward
/// direction, including distribution centers reached by detour at either end.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Line {
    pub id: LineId,
    pub stops: Vec<StopId>,
    /// Distance between consecutive entries of `stops`, in km.
    pub segments_km: Vec<f64>,
    #[serde(default)]
    pub toll_km: f64,
}

impl Line {
    /// Position of `stop` in the forward stop sequence (the `|i|` index).
    pub fn position(&self, stop: StopId) -> Option<usize> {
        self.stops.iter().position(|&s| s == stop)
    }

    /// Distance between two positions along the line, independent of direction.
    pub fn path_km(&self, a: usize, b: usize) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.segments_km[lo..hi].iter().sum()
    }
}

/// Clock time in minutes after midnight, serialized as `"HH:MM"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ClockTime(pub f64);

impl ClockTime {
    pub fn minutes(self) -> f64 {
        self.0
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (h, m) = s.trim().split_once(':')?;
        let h: u32 = h.parse().ok()?;
        let m: u32 = m.parse().ok()?;
        if m >= 60 || h > 47 {
            return None;
        }
        Some(ClockTime(f64::from(h * 60 + m)))
    }
}

impl fmt::Display for ClockTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.0.round() as i64;
        write!(f, "{:02}:{:02}", total.div_euclid(60), total.rem_euclid(60))
    }
}

impl Serialize for ClockTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ClockTime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ClockTime::parse(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid clock time `{s}`, expected HH:MM")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Run {
    pub id: RunId,
    pub line: LineId,
    /// +1 follows the line's stop sequence, -1 runs it backwards.
    pub direction: i8,
    pub departure: ClockTime,
    pub arrival: ClockTime,
    /// Measured energy use of the run, overriding the per-km vehicle figure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_kwh: Option<f64>,
}

impl Run {
    pub fn duration_min(&self) -> f64 {
        self.arrival.0 - self.departure.0
    }

    pub fn overlaps(&self, other: &Run) -> bool {
        self.departure.0 < other.arrival.0 && other.departure.0 < self.arrival.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VehicleType {
    pub id: String,
    pub capacity_m3: f64,
    pub running_cost_per_km: f64,
    pub purchasing_cost_per_day: f64,
    /// Passenger fare per km beyond the base distance.
    pub per_km_fare: f64,
    pub energy_kwh_per_km: f64,
}

/// One origin-destination request attached to a run. `count` is passengers
/// in the passenger list and parcels in the parcel list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdRecord {
    pub run: RunId,
    pub from: StopId,
    pub to: StopId,
    pub count: u32,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Demand {
    #[serde(default)]
    pub passengers: Vec<OdRecord>,
    #[serde(default)]
    pub parcels: Vec<OdRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fares {
    pub passenger_base: f64,
    /// Distance covered by the passenger base fare (km).
    pub passenger_base_km: f64,
    pub freight_base: f64,
    pub freight_per_km: f64,
    pub freight_base_km: f64,
}

/// Seat-class road tolls: `rates[c]` per toll km for class `c`, where the
/// class boundaries are the (inclusive upper) seat thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TollTable {
    pub rates: [f64; 4],
    pub seat_thresholds: [u32; 3],
}

/// Dwell parameters. Defaults are calibration values, not measured data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DwellParams {
    #[serde(default = "default_per_passenger_s")]
    pub per_passenger_s: f64,
    #[serde(default = "default_per_parcel_s")]
    pub per_parcel_s: f64,
    #[serde(default = "default_dwell_cost")]
    pub cost_per_hour: f64,
}

fn default_per_passenger_s() -> f64 {
    3.0
}
fn default_per_parcel_s() -> f64 {
    5.0
}
fn default_dwell_cost() -> f64 {
    30.0
}

impl Default for DwellParams {
    fn default() -> Self {
        DwellParams {
            per_passenger_s: default_per_passenger_s(),
            per_parcel_s: default_per_parcel_s(),
            cost_per_hour: default_dwell_cost(),
        }
    }
}

/// Per run-segment congestion inputs. `run: None` applies to every run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentOverride {
    #[serde(default)]
    pub run: Option<RunId>,
    pub from: StopId,
    pub to: StopId,
    #[serde(default)]
    pub free_flow_min: Option<f64>,
    #[serde(default)]
    pub volume: f64,
    #[serde(default = "one")]
    pub capacity: f64,
    #[serde(default)]
    pub sigma_min: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BprParams {
    #[serde(default = "default_bpr_beta")]
    pub beta: f64,
    #[serde(default = "default_bpr_power")]
    pub power: f64,
    /// Standard deviation of the travel-time perturbation as a fraction of
    /// the segment mean, used when a segment has no explicit sigma.
    #[serde(default = "default_cv")]
    pub cv: f64,
    #[serde(default)]
    pub skewness: f64,
    #[serde(default)]
    pub kurtosis: f64,
    #[serde(default)]
    pub segments: Vec<SegmentOverride>,
}

fn default_bpr_beta() -> f64 {
    0.15
}
fn default_bpr_power() -> f64 {
    4.0
}
fn default_cv() -> f64 {
    0.1
}

impl Default for BprParams {
    fn default() -> Self {
        BprParams {
            beta: default_bpr_beta(),
            power: default_bpr_power(),
            cv: default_cv(),
            skewness: 0.0,
            kurtosis: 0.0,
            segments: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reliability {
    pub gamma: f64,
}

impl Default for Reliability {
    fn default() -> Self {
        Reliability { gamma: 0.85 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Limits {
    /// Upper bound on the average passenger travel time (minutes).
    pub t_max_min: f64,
    /// Minimum passenger share of vehicle volume, as a fraction.
    pub lambda_min: f64,
    /// Granularity of the passenger share in percentage points.
    #[serde(default = "default_lambda_step")]
    pub lambda_step_pct: u32,
}

fn default_lambda_step() -> u32 {
    1
}

/// Passenger arrival model. The arrival rate at a stop is piecewise constant
/// per inter-run window and integrates to the run's boarding demand there.
/// `lead_min` caps how long before the bus passengers start arriving; absent
/// means they spread over the whole headway.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Arrivals {
    #[serde(default)]
    pub lead_min: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarbonFactors {
    pub diesel_kg_per_l: f64,
    pub diesel_l_per_km: f64,
    pub grid_kg_per_kwh: f64,
}

impl Default for CarbonFactors {
    fn default() -> Self {
        CarbonFactors {
            diesel_kg_per_l: 2.6765,
            diesel_l_per_km: 0.15,
            grid_kg_per_kwh: 0.7967,
        }
    }
}

/// Dedicated parcel truck used by the separated-transport baseline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruckParams {
    pub capacity_m3: f64,
    pub fuel_cost_per_km: f64,
    pub purchase_per_day: f64,
    pub wage_per_day: f64,
}

/// How the passenger-only bus fleet of the separated baseline is configured.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparatedBaseline {
    /// Vehicle type index used for every bus.
    pub bus_type: usize,
    /// Run-to-bus assignment (1-based bus numbers), one entry per run.
    #[serde(default)]
    pub schedule: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub currency: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub stops: Vec<Stop>,
    pub lines: Vec<Line>,
    pub runs: Vec<Run>,
    pub vehicle_types: Vec<VehicleType>,
    pub fleet_size: u32,
    #[serde(default)]
    pub demand: Demand,
    pub fares: Fares,
    #[serde(default)]
    pub toll: Option<TollTable>,
    #[serde(default = "default_seat_volume")]
    pub seat_volume_m3: f64,
    /// Volume of one parcel; defaults to a tenth of a seat.
    #[serde(default)]
    pub parcel_volume_m3: Option<f64>,
    #[serde(default)]
    pub dwell: DwellParams,
    #[serde(default)]
    pub bpr: BprParams,
    #[serde(default)]
    pub reliability: Reliability,
    pub limits: Limits,
    #[serde(default)]
    pub arrivals: Arrivals,
    #[serde(default)]
    pub carbon: CarbonFactors,
    #[serde(default)]
    pub truck: Option<TruckParams>,
    #[serde(default)]
    pub separated: Option<SeparatedBaseline>,

    #[serde(skip)]
    index: InstanceIndex,
}

fn default_seat_volume() -> f64 {
    0.5
}

#[derive(Debug, Clone, Default)]
struct InstanceIndex {
    stop: HashMap<StopId, usize>,
    line: HashMap<LineId, usize>,
    run: HashMap<RunId, usize>,
    /// Per run: passenger record indices.
    run_passengers: Vec<Vec<usize>>,
    run_parcels: Vec<Vec<usize>>,
    /// Per run: index of the previous run on the same line and direction.
    prev_run: Vec<Option<usize>>,
    next_run: Vec<Option<usize>>,
    /// Per run: first departure of its line/direction group.
    service_start: Vec<f64>,
}

/// Load an instance from any reader holding the JSON instance document.
pub fn load_instance<R: Read>(source: R) -> Result<Instance, ModelError> {
    let inst: Instance = serde_json::from_reader(source).map_err(|e| ModelError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    inst.finalize()
}

pub fn load_instance_file(path: impl AsRef<Path>) -> Result<Instance, ModelError> {
    let file = std::fs::File::open(path)?;
    load_instance(std::io::BufReader::new(file))
}

pub fn load_instance_str(s: &str) -> Result<Instance, ModelError> {
    load_instance(s.as_bytes())
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ModelError {
    ModelError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

impl Instance {
    /// Check structural invariants and build lookup tables. Must be called
    /// after any programmatic modification of the public fields.
    pub fn finalize(mut self) -> Result<Self, ModelError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ModelError::SchemaVersion(self.schema_version, SCHEMA_VERSION));
        }
        let mut index = InstanceIndex::default();

        for (i, s) in self.stops.iter().enumerate() {
            if index.stop.insert(s.id, i).is_some() {
                return Err(ModelError::DuplicateId { kind: "stop", id: s.id.to_string() });
            }
        }
        for (i, l) in self.lines.iter().enumerate() {
            if index.line.insert(l.id, i).is_some() {
                return Err(ModelError::DuplicateId { kind: "line", id: l.id.to_string() });
            }
            if l.stops.len() < 2 {
                return Err(invalid(format!("lines[{}].stops", l.id), "a line needs at least 2 stops"));
            }
            if l.segments_km.len() != l.stops.len() - 1 {
                return Err(invalid(
                    format!("lines[{}].segments_km", l.id),
                    format!("expected {} segments, found {}", l.stops.len() - 1, l.segments_km.len()),
                ));
            }
            if let Some(d) = l.segments_km.iter().find(|d| !(**d > 0.0)) {
                return Err(invalid(format!("lines[{}].segments_km", l.id), format!("distance {d} is not positive")));
            }
            for s in &l.stops {
                if !index.stop.contains_key(s) {
                    return Err(ModelError::DanglingReference {
                        kind: "stop",
                        id: s.to_string(),
                        referrer: format!("line {}", l.id),
                    });
                }
            }
            let mut seen = l.stops.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != l.stops.len() {
                return Err(invalid(format!("lines[{}].stops", l.id), "a stop appears twice in the sequence"));
            }
            if l.toll_km < 0.0 {
                return Err(invalid(format!("lines[{}].toll_km", l.id), "negative toll mileage"));
            }
        }
        for (i, r) in self.runs.iter().enumerate() {
            if index.run.insert(r.id, i).is_some() {
                return Err(ModelError::DuplicateId { kind: "run", id: r.id.to_string() });
            }
            if !index.line.contains_key(&r.line) {
                return Err(ModelError::DanglingReference {
                    kind: "line",
                    id: r.line.to_string(),
                    referrer: format!("run {}", r.id),
                });
            }
            if r.direction != 1 && r.direction != -1 {
                return Err(invalid(format!("runs[{}].direction", r.id), "must be 1 or -1"));
            }
            if !(r.departure.0 < r.arrival.0) {
                return Err(invalid(format!("runs[{}]", r.id), "departure must precede arrival"));
            }
        }
        if self.runs.is_empty() {
            return Err(invalid("runs", "at least one run is required"));
        }
        if self.vehicle_types.is_empty() {
            return Err(invalid("vehicle_types", "at least one vehicle type is required"));
        }
        for v in &self.vehicle_types {
            for (name, val) in [
                ("capacity_m3", v.capacity_m3),
                ("running_cost_per_km", v.running_cost_per_km),
                ("purchasing_cost_per_day", v.purchasing_cost_per_day),
                ("per_km_fare", v.per_km_fare),
            ] {
                if !(val > 0.0) {
                    return Err(invalid(format!("vehicle_types[{}].{name}", v.id), "must be positive"));
                }
            }
            if v.energy_kwh_per_km < 0.0 {
                return Err(invalid(format!("vehicle_types[{}].energy_kwh_per_km", v.id), "negative"));
            }
        }
        if self.fleet_size == 0 {
            return Err(invalid("fleet_size", "must be at least 1"));
        }
        if !(self.limits.lambda_min > 0.0 && self.limits.lambda_min <= 1.0) {
            return Err(invalid("limits.lambda_min", "must lie in (0, 1]"));
        }
        if self.limits.lambda_step_pct == 0 || self.limits.lambda_step_pct > 100 {
            return Err(invalid("limits.lambda_step_pct", "must lie in [1, 100]"));
        }
        if !(self.reliability.gamma > 0.5 && self.reliability.gamma < 1.0) {
            return Err(invalid("reliability.gamma", "must lie in (0.5, 1)"));
        }
        if let Some(t) = &self.toll {
            let b = t.seat_thresholds;
            if !(b[0] < b[1] && b[1] < b[2]) {
                return Err(invalid("toll.seat_thresholds", "must be strictly increasing"));
            }
        }
        if !(self.seat_volume_m3 > 0.0) {
            return Err(invalid("seat_volume_m3", "must be positive"));
        }
        if let Some(p) = self.parcel_volume_m3 {
            if !(p > 0.0) {
                return Err(invalid("parcel_volume_m3", "must be positive"));
            }
        }
        if let Some(sep) = &self.separated {
            if sep.bus_type >= self.vehicle_types.len() {
                return Err(ModelError::DanglingReference {
                    kind: "vehicle type",
                    id: sep.bus_type.to_string(),
                    referrer: "separated.bus_type".into(),
                });
            }
            if let Some(s) = &sep.schedule {
                if s.len() != self.runs.len() || s.iter().any(|&b| b == 0 || b > self.fleet_size) {
                    return Err(invalid("separated.schedule", "needs one bus number in [1, fleet_size] per run"));
                }
            }
        }

        index.run_passengers = vec![Vec::new(); self.runs.len()];
        index.run_parcels = vec![Vec::new(); self.runs.len()];
        for (list, target, what) in [
            (&self.demand.passengers, &mut index.run_passengers, "passenger demand"),
            (&self.demand.parcels, &mut index.run_parcels, "parcel demand"),
        ] {
            for (k, rec) in list.iter().enumerate() {
                let Some(&ri) = index.run.get(&rec.run) else {
                    return Err(ModelError::DanglingReference {
                        kind: "run",
                        id: rec.run.to_string(),
                        referrer: format!("{what} record {k}"),
                    });
                };
                for s in [rec.from, rec.to] {
                    if !index.stop.contains_key(&s) {
                        return Err(ModelError::DanglingReference {
                            kind: "stop",
                            id: s.to_string(),
                            referrer: format!("{what} record {k}"),
                        });
                    }
                }
                target[ri].push(k);
            }
        }
        for ov in &self.bpr.segments {
            if let Some(r) = ov.run {
                if !index.run.contains_key(&r) {
                    return Err(ModelError::DanglingReference {
                        kind: "run",
                        id: r.to_string(),
                        referrer: "bpr.segments".into(),
                    });
                }
            }
        }

        // Neighbouring runs within each (line, direction) stream.
        let mut groups: BTreeMap<(LineId, i8), Vec<usize>> = BTreeMap::new();
        for (i, r) in self.runs.iter().enumerate() {
            groups.entry((r.line, r.direction)).or_default().push(i);
        }
        index.prev_run = vec![None; self.runs.len()];
        index.next_run = vec![None; self.runs.len()];
        index.service_start = vec![0.0; self.runs.len()];
        for members in groups.values_mut() {
            members.sort_by(|&a, &b| {
                self.runs[a]
                    .departure
                    .0
                    .total_cmp(&self.runs[b].departure.0)
                    .then(a.cmp(&b))
            });
            let start = self.runs[members[0]].departure.0;
            for w in members.windows(2) {
                index.prev_run[w[1]] = Some(w[0]);
                index.next_run[w[0]] = Some(w[1]);
            }
            for &m in members.iter() {
                index.service_start[m] = start;
            }
        }

        self.index = index;
        Ok(self)
    }

    pub fn num_runs(&self) -> usize {
        self.runs.len()
    }

    pub fn num_types(&self) -> usize {
        self.vehicle_types.len()
    }

    pub fn fleet(&self) -> usize {
        self.fleet_size as usize
    }

    pub fn stop(&self, id: StopId) -> Option<&Stop> {
        self.index.stop.get(&id).map(|&i| &self.stops[i])
    }

    pub fn line(&self, id: LineId) -> Option<&Line> {
        self.index.line.get(&id).map(|&i| &self.lines[i])
    }

    pub fn run_index(&self, id: RunId) -> Option<usize> {
        self.index.run.get(&id).copied()
    }

    /// The line a run (by index) travels on.
    pub fn run_line(&self, run: usize) -> &Line {
        &self.lines[self.index.line[&self.runs[run].line]]
    }

    pub fn passenger_records(&self, run: usize) -> impl Iterator<Item = &OdRecord> {
        self.index.run_passengers[run].iter().map(|&k| &self.demand.passengers[k])
    }

    pub fn parcel_records(&self, run: usize) -> impl Iterator<Item = &OdRecord> {
        self.index.run_parcels[run].iter().map(|&k| &self.demand.parcels[k])
    }

    pub fn prev_run(&self, run: usize) -> Option<usize> {
        self.index.prev_run[run]
    }

    pub fn next_run(&self, run: usize) -> Option<usize> {
        self.index.next_run[run]
    }

    /// First scheduled departure of the run's line in its direction.
    pub fn service_start(&self, run: usize) -> f64 {
        self.index.service_start[run]
    }

    pub fn parcel_volume(&self) -> f64 {
        self.parcel_volume_m3.unwrap_or(self.seat_volume_m3 / 10.0)
    }

    pub fn is_dc(&self, stop: StopId) -> bool {
        self.stop(stop).is_some_and(|s| s.kind == StopKind::Dc)
    }

    /// Positions in the line's forward sequence in travel order for a run.
    pub fn run_positions(&self, run: usize) -> Vec<usize> {
        let n = self.run_line(run).stops.len();
        if self.runs[run].direction > 0 {
            (0..n).collect()
        } else {
            (0..n).rev().collect()
        }
    }

    /// Index range (forward positions, inclusive) of the passenger service
    /// part of a line: everything except distribution centers at the ends.
    pub fn service_span(&self, line: &Line) -> (usize, usize) {
        let n = line.stops.len();
        let mut lo = 0;
        while lo < n - 1 && self.is_dc(line.stops[lo]) {
            lo += 1;
        }
        let mut hi = n - 1;
        while hi > lo && self.is_dc(line.stops[hi]) {
            hi -= 1;
        }
        (lo, hi)
    }

    /// Detour distance to the distribution centers at the line ends (km),
    /// driven once per parcel-carrying run.
    pub fn detour_km(&self, run: usize) -> f64 {
        let line = self.run_line(run);
        let (lo, hi) = self.service_span(line);
        line.path_km(0, lo) + line.path_km(hi, line.stops.len() - 1)
    }

    /// Terminal-to-terminal passenger distance of a run (km).
    pub fn service_km(&self, run: usize) -> f64 {
        let line = self.run_line(run);
        let (lo, hi) = self.service_span(line);
        line.path_km(lo, hi)
    }

    /// Running distance `L_r`. With `include_dc_detour` the end detours are
    /// added when the run has parcel demand.
    pub fn run_distance(&self, run: usize, include_dc_detour: bool) -> f64 {
        let mut km = self.service_km(run);
        if include_dc_detour && self.index.run_parcels[run].iter().any(|&k| self.demand.parcels[k].count > 0) {
            km += self.detour_km(run);
        }
        km
    }

    /// Distance between two stops along a line (`l_{i,j}`).
    pub fn od_km(&self, line: &Line, from: StopId, to: StopId) -> Result<f64, ModelError> {
        let a = line.position(from).ok_or(ModelError::StopNotOnLine { stop: from, line: line.id })?;
        let b = line.position(to).ok_or(ModelError::StopNotOnLine { stop: to, line: line.id })?;
        Ok(line.path_km(a, b))
    }

    /// Direction `u(i, j)` of travel from `from` to `to` on `line`.
    pub fn direction_on_line(&self, line: &Line, from: StopId, to: StopId) -> Result<i8, ModelError> {
        let a = line.position(from).ok_or(ModelError::StopNotOnLine { stop: from, line: line.id })?;
        let b = line.position(to).ok_or(ModelError::StopNotOnLine { stop: to, line: line.id })?;
        if a == b {
            return Err(ModelError::SameStop(from, to));
        }
        route_direction(a, b)
    }

    pub fn total_passengers(&self) -> u64 {
        self.demand.passengers.iter().map(|r| u64::from(r.count)).sum()
    }

    pub fn total_parcels(&self) -> u64 {
        self.demand.parcels.iter().map(|r| u64::from(r.count)).sum()
    }
}

/// Sign of travel between two sequence positions: +1 downstream, -1 upstream.
pub fn route_direction(from_seq: usize, to_seq: usize) -> Result<i8, ModelError> {
    match to_seq.cmp(&from_seq) {
        std::cmp::Ordering::Greater => Ok(1),
        std::cmp::Ordering::Less => Ok(-1),
        std::cmp::Ordering::Equal => Err(ModelError::SameStop(from_seq as u32, to_seq as u32)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

/// Boardings/alightings per stop for one run, derived from its OD records.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunAggregates {
    pub run: RunId,
    pub boardings: BTreeMap<StopId, u64>,
    pub alightings: BTreeMap<StopId, u64>,
    pub parcels_loaded: BTreeMap<StopId, u64>,
    pub parcels_unloaded: BTreeMap<StopId, u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub aggregates: Vec<RunAggregates>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn error_count(&self) -> usize {
        self.errors().count()
    }

    pub fn warning_count(&self) -> usize {
        self.findings.iter().filter(|f| f.severity == Severity::Warning).count()
    }

    fn push(&mut self, severity: Severity, message: String) {
        self.findings.push(Finding { severity, message });
    }
}

/// Semantic checks on a loaded instance plus per-run flow aggregates.
pub fn validate_instance(inst: &Instance) -> ValidationReport {
    let mut report = ValidationReport::default();

    for (ri, run) in inst.runs.iter().enumerate() {
        let line = inst.run_line(ri);
        let mut agg = RunAggregates { run: run.id, ..Default::default() };
        for (label, records, freight) in [
            ("passenger", inst.passenger_records(ri).collect::<Vec<_>>(), false),
            ("parcel", inst.parcel_records(ri).collect::<Vec<_>>(), true),
        ] {
            for rec in records {
                let ctx = format!("run {} {label} record {}->{}", run.id, rec.from, rec.to);
                if rec.from == rec.to {
                    report.push(Severity::Error, format!("{ctx}: origin equals destination"));
                    continue;
                }
                match inst.direction_on_line(line, rec.from, rec.to) {
                    Err(e) => {
                        report.push(Severity::Error, format!("{ctx}: {e}"));
                        continue;
                    }
                    Ok(dir) if dir != run.direction => {
                        report.push(Severity::Error, format!("{ctx}: travels against the run direction"));
                    }
                    Ok(_) => {}
                }
                let (from, to) = (inst.stop(rec.from).unwrap(), inst.stop(rec.to).unwrap());
                if freight {
                    if !from.allows_freight() || !to.allows_freight() {
                        report.push(Severity::Error, format!("{ctx}: freight at regular stop"));
                    }
                    *agg.parcels_loaded.entry(rec.from).or_default() += u64::from(rec.count);
                    *agg.parcels_unloaded.entry(rec.to).or_default() += u64::from(rec.count);
                } else {
                    if !from.allows_passengers() || !to.allows_passengers() {
                        report.push(Severity::Error, format!("{ctx}: passengers at a distribution center"));
                    }
                    *agg.boardings.entry(rec.from).or_default() += u64::from(rec.count);
                    *agg.alightings.entry(rec.to).or_default() += u64::from(rec.count);
                }
            }
        }
        report.aggregates.push(agg);
    }

    for i in 0..inst.runs.len() {
        for j in i + 1..inst.runs.len() {
            let (a, b) = (&inst.runs[i], &inst.runs[j]);
            if a.line == b.line && a.departure == b.departure {
                report.push(
                    Severity::Warning,
                    format!("runs {} and {} on line {} share departure {}", a.id, b.id, a.line, a.departure),
                );
            } else if a.overlaps(b) {
                report.push(
                    Severity::Info,
                    format!("runs {} and {} overlap in time and need different buses", a.id, b.id),
                );
            }
        }
    }

    // Peak number of simultaneously active runs must fit in the fleet.
    let mut events: Vec<(f64, i32)> = inst
        .runs
        .iter()
        .flat_map(|r| [(r.departure.0, 1), (r.arrival.0, -1)])
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut active = 0;
    let mut peak = 0;
    for (_, d) in events {
        active += d;
        peak = peak.max(active);
    }
    if peak as u32 > inst.fleet_size {
        report.push(
            Severity::Error,
            format!("{peak} runs overlap in time but the fleet has only {} buses", inst.fleet_size),
        );
    }

    for line in &inst.lines {
        for &s in &line.stops[1..line.stops.len() - 1] {
            if inst.is_dc(s) {
                report.push(
                    Severity::Warning,
                    format!("line {} has distribution center {s} in the middle of its sequence", line.id),
                );
            }
        }
    }

    report
}
