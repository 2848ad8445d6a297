#![allow(dead_code)]

use std::path::PathBuf;

use pfsm::model::{load_instance_file, load_instance_str, Instance};
use pfsm::Solution;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn yushe() -> Instance {
    load_instance_file(data("yushe.json")).unwrap()
}

pub fn simnet() -> Instance {
    load_instance_file(data("simnet.json")).unwrap()
}

pub fn micro() -> Instance {
    load_instance_file(data("micro.json")).unwrap()
}

/// The published optimal Yushe scheme.
pub fn published_scheme() -> Solution {
    Solution {
        x: vec![1, 2, 3, 2, 1, 3, 4, 5, 6, 4, 5, 6],
        y: vec![0, 0, 1, 2, 1, 2],
        lambda_pct: vec![100, 100, 80, 50, 90, 70],
    }
}

/// Three stops, two runs in the same direction, one bus type.
///
/// Stop 1 and 3 handle freight, stop 2 only passengers. Run 1 leaves
/// stop 1 at 08:00, run 2 at 08:30; both are scheduled for 20 minutes
/// over 6 + 4 km, so free-flow times are 12 and 8 minutes. The first
/// segment carries half its capacity, so its mean is 12 * (1 + 0.15 / 16).
pub const TIMELINE_ORACLE: &str = r#"{
  "schema_version": 1,
  "name": "oracle",
  "stops": [
    {"id": 1, "kind": "itsc"},
    {"id": 2, "kind": "regular"},
    {"id": 3, "kind": "itsc"}
  ],
  "lines": [{"id": 1, "stops": [1, 2, 3], "segments_km": [6.0, 4.0]}],
  "runs": [
    {"id": 1, "line": 1, "direction": 1, "departure": "08:00", "arrival": "08:20"},
    {"id": 2, "line": 1, "direction": 1, "departure": "08:30", "arrival": "08:50"}
  ],
  "vehicle_types": [
    {"id": "bus", "capacity_m3": 4.0, "running_cost_per_km": 1.0, "purchasing_cost_per_day": 100.0,
     "per_km_fare": 0.2, "energy_kwh_per_km": 1.0}
  ],
  "fleet_size": 1,
  "demand": {
    "passengers": [
      {"run": 1, "from": 1, "to": 3, "count": 4},
      {"run": 1, "from": 2, "to": 3, "count": 1},
      {"run": 2, "from": 1, "to": 2, "count": 1}
    ],
    "parcels": [{"run": 1, "from": 1, "to": 3, "count": 12}]
  },
  "fares": {"passenger_base": 2.0, "passenger_base_km": 5.0, "freight_base": 1.0, "freight_per_km": 0.05,
            "freight_base_km": 5.0},
  "seat_volume_m3": 1.0,
  "parcel_volume_m3": 0.1,
  "dwell": {"per_passenger_s": 3.0, "per_parcel_s": 1.0, "cost_per_hour": 30.0},
  "bpr": {"beta": 0.15, "power": 4.0, "cv": 0.1,
          "segments": [{"from": 1, "to": 2, "volume": 50.0, "capacity": 100.0}]},
  "limits": {"t_max_min": 60.0, "lambda_min": 0.5, "lambda_step_pct": 25},
  "arrivals": {"lead_min": 10.0}
}"#;

pub fn timeline_oracle() -> Instance {
    load_instance_str(TIMELINE_ORACLE).unwrap()
}

pub fn timeline_oracle_solution() -> Solution {
    Solution { x: vec![1, 1], y: vec![0], lambda_pct: vec![75] }
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
