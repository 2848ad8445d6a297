use serde::{Deserialize, Serialize};

use crate::economics::{self, ConstraintResiduals, CostBreakdown, FareMode};
use crate::error::EvalError;
use crate::model::Instance;
use crate::service_time::{self, RunTimeline, TimeBreakdown, TimingModel, WaitMode};
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub fare_mode: FareMode,
    pub wait_mode: WaitMode,
}

/// Both levels evaluated for one solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub costs: CostBreakdown,
    pub times: TimeBreakdown,
    pub residuals: ConstraintResiduals,
    pub residual_sum: f64,
    pub feasible: bool,
}

impl Evaluation {
    pub fn z(&self) -> f64 {
        self.costs.profit
    }

    /// Average passenger travel time, the time index used for scalarization.
    pub fn t(&self) -> f64 {
        self.times.avg
    }
}

/// Reusable evaluator bound to one instance.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    inst: &'a Instance,
    timing: TimingModel,
    opts: EvalOptions,
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a Instance, opts: EvalOptions) -> Result<Self, EvalError> {
        Ok(Evaluator { inst, timing: TimingModel::new(inst)?, opts })
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn timing(&self) -> &TimingModel {
        &self.timing
    }

    pub fn options(&self) -> EvalOptions {
        self.opts
    }

    pub fn evaluate(&self, sol: &Solution) -> Result<Evaluation, EvalError> {
        self.evaluate_detailed(sol).map(|(e, _)| e)
    }

    pub fn evaluate_detailed(&self, sol: &Solution) -> Result<(Evaluation, RunTimeline), EvalError> {
        let timeline = self.timing.simulate(self.inst, sol)?;
        let costs = economics::profit(self.inst, sol, &timeline, self.opts.fare_mode)?;
        let times = service_time::time_breakdown(self.inst, &timeline, self.opts.wait_mode);
        let residuals = economics::constraint_residuals(self.inst, sol, &timeline, times.avg);
        let feasible = residuals.is_feasible();
        let residual_sum = residuals.normalized_sum(self.inst);
        Ok((Evaluation { costs, times, residuals, residual_sum, feasible }, timeline))
    }
}
