use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::model::Instance;

/// Decoded scheme: which bus serves each run, the type of each bus and the
/// share of each bus's volume reserved for passengers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    /// Bus number (1-based) per run, in instance run order.
    pub x: Vec<u32>,
    /// Vehicle type index per bus.
    pub y: Vec<usize>,
    /// Passenger share per bus, integer percent.
    pub lambda_pct: Vec<u32>,
}

impl Solution {
    pub fn check_dimensions(&self, inst: &Instance) -> Result<(), EvalError> {
        let dims = [
            ("run assignments", self.x.len(), inst.num_runs()),
            ("bus types", self.y.len(), inst.fleet()),
            ("capacity shares", self.lambda_pct.len(), inst.fleet()),
        ];
        for (what, got, expected) in dims {
            if got != expected {
                return Err(EvalError::Dimension { what, got, expected });
            }
        }
        if let Some(&b) = self.x.iter().find(|&&b| b == 0 || b as usize > inst.fleet()) {
            return Err(EvalError::Dimension { what: "bus number", got: b as usize, expected: inst.fleet() });
        }
        if let Some(&t) = self.y.iter().find(|&&t| t >= inst.num_types()) {
            return Err(EvalError::Dimension { what: "vehicle type index", got: t, expected: inst.num_types() });
        }
        if let Some(&l) = self.lambda_pct.iter().find(|&&l| l > 100) {
            return Err(EvalError::Dimension { what: "capacity share percent", got: l as usize, expected: 100 });
        }
        Ok(())
    }

    /// Zero-based bus index serving run `r`.
    pub fn bus_of(&self, r: usize) -> usize {
        self.x[r] as usize - 1
    }

    pub fn type_of_run(&self, r: usize) -> usize {
        self.y[self.bus_of(r)]
    }

    /// Passenger share of bus `k` as a fraction.
    pub fn lambda(&self, k: usize) -> f64 {
        f64::from(self.lambda_pct[k]) / 100.0
    }

    /// Runs served by each bus, in instance run order.
    pub fn duties(&self, buses: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); buses];
        for (r, &b) in self.x.iter().enumerate() {
            out[b as usize - 1].push(r);
        }
        out
    }
}
