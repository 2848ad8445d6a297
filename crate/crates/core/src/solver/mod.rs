//! Metaheuristic search over the scheme encoding.

mod baselines;
pub mod encoding;
mod ijs;
pub mod operators;

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use encoding::SearchSpace;
pub use ijs::de_refine;

use crate::error::SolverError;
use crate::evaluate::{EvalOptions, Evaluation, Evaluator};
use crate::model::Instance;
use crate::scalarize::{Fitness, PenaltyMode, Scalarizer};
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ijs,
    Js,
    Ga,
    Pso,
    Gwo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::Ijs, Algorithm::Js, Algorithm::Ga, Algorithm::Pso, Algorithm::Gwo];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ijs => "ijs",
            Algorithm::Js => "js",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
            Algorithm::Gwo => "gwo",
        }
    }
}

/// Base vector of the differential-evolution mutant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeBase {
    /// The jellyfish's own moved position.
    Current,
    /// The best position found so far.
    #[default]
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1 / D`.
    pub mutation_rate: Option<f64>,
    pub tournament: usize,
    pub elites: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams { crossover_rate: 0.8, mutation_rate: None, tournament: 2, elites: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity limit as a fraction of each coordinate's range.
    pub max_velocity: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams { inertia: 0.7298, cognitive: 1.49618, social: 1.49618, max_velocity: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub pop: usize,
    pub iters: usize,
    pub seed: u64,
    /// Distribution coefficient of the ocean current.
    pub beta_d: f64,
    /// Passive motion coefficient.
    pub gamma_motion: f64,
    /// Time-control threshold between current and swarm phases.
    pub c0: f64,
    pub levy_beta: f64,
    pub crossover_rate: f64,
    pub de_base: DeBase,
    pub mu_tent: f64,
    pub penalty_mode: PenaltyMode,
    /// Fixed penalty coefficient; derived from the calibration sample when absent.
    pub penalty_coefficient: Option<f64>,
    pub ga: GaParams,
    pub pso: PsoParams,
    pub eval: EvalOptions,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: Algorithm::Ijs,
            pop: 100,
            iters: 150,
            seed: 1,
            beta_d: 3.0,
            gamma_motion: 0.1,
            c0: 0.5,
            levy_beta: 1.5,
            crossover_rate: 0.5,
            de_base: DeBase::Best,
            mu_tent: 2.0,
            penalty_mode: PenaltyMode::Linear,
            penalty_coefficient: None,
            ga: GaParams::default(),
            pso: PsoParams::default(),
            eval: EvalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub best_f: f64,
    pub best_z: f64,
    pub best_t: f64,
    pub feasible_count: usize,
    pub evals: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub rows: Vec<TraceRow>,
    pub evaluations: u64,
    pub wall_time_s: f64,
}

impl SolverTrace {
    /// First iteration at which the final best fitness was reached.
    pub fn first_hit_iteration(&self) -> Option<usize> {
        let last = self.rows.last()?.best_f;
        self.rows.iter().find(|r| r.best_f >= last).map(|r| r.iter)
    }
}

/// Fitness of one position together with the objective values behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub f: f64,
    pub z: f64,
    pub t: f64,
    pub feasible: bool,
}

/// Evaluation pipeline seen by the algorithms: decode, evaluate, scalarize.
/// Decoded schemes are memoized; the evaluation counter counts every call.
pub struct Problem<'a> {
    pub evaluator: Evaluator<'a>,
    pub space: SearchSpace,
    pub scalarizer: Scalarizer,
    cache: Mutex<HashMap<Solution, Score>>,
}

impl<'a> Problem<'a> {
    pub fn new(evaluator: Evaluator<'a>, scalarizer: Scalarizer) -> Self {
        let space = SearchSpace::new(evaluator.instance());
        Problem { evaluator, space, scalarizer, cache: Mutex::new(HashMap::new()) }
    }

    /// Fit the scalarizer on `samples` uniform random positions drawn from
    /// a stream reserved for calibration, so every algorithm run with the
    /// same seed shares one fitness function.
    pub fn calibrated(
        evaluator: Evaluator<'a>,
        samples: usize,
        seed: u64,
        penalty_coefficient: Option<f64>,
        mode: PenaltyMode,
    ) -> Result<Self, SolverError> {
        use rand::Rng;
        let space = SearchSpace::new(evaluator.instance());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let positions: Vec<Vec<f64>> = (0..samples)
            .map(|_| space.lower.iter().zip(&space.upper).map(|(&l, &u)| rng.random_range(l..=u)).collect())
            .collect();
        let pairs = positions
            .par_iter()
            .map(|p| {
                let e = evaluator.evaluate(&space.decode(p).0)?;
                Ok((e.t(), e.z()))
            })
            .collect::<Result<Vec<_>, SolverError>>()?;
        let scalarizer = Scalarizer::fit(&pairs, penalty_coefficient, mode)?;
        Ok(Problem::new(evaluator, scalarizer))
    }

    pub fn score_solution(&self, sol: &Solution) -> Result<Score, SolverError> {
        if let Some(s) = self.cache.lock().expect("cache lock").get(sol) {
            return Ok(*s);
        }
        let e = self.evaluator.evaluate(sol)?;
        let fit = self.fitness_of(&e);
        let s = Score { f: fit.f, z: e.z(), t: e.t(), feasible: e.feasible };
        self.cache.lock().expect("cache lock").insert(sol.clone(), s);
        Ok(s)
    }

    pub fn score(&self, pos: &[f64]) -> Result<Score, SolverError> {
        self.score_solution(&self.space.decode(pos).0)
    }

    pub fn score_all(&self, positions: &[Vec<f64>]) -> Result<Vec<Score>, SolverError> {
        positions.par_iter().map(|p| self.score(p)).collect()
    }

    pub fn fitness_of(&self, e: &Evaluation) -> Fitness {
        self.scalarizer.fitness(e.z(), e.t(), e.residual_sum, e.feasible)
    }
}

/// Per-individual random streams derived from the master seed. Stream 0 is
/// the master stream; individual `i` draws from stream `i + 1`.
pub(crate) fn streams(seed: u64, n: usize) -> (ChaCha8Rng, Vec<ChaCha8Rng>) {
    let master = ChaCha8Rng::seed_from_u64(seed);
    let each = (0..n)
        .map(|i| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(i as u64 + 1);
            r
        })
        .collect();
    (master, each)
}

/// Elitist bookkeeping shared by all algorithms.
pub(crate) struct Recorder {
    pub best_pos: Vec<f64>,
    pub best: Score,
    pub evals: u64,
    pub rows: Vec<TraceRow>,
}

impl Recorder {
    pub fn new(pop: &[Vec<f64>], scores: &[Score]) -> Self {
        let i = argmax(scores);
        Recorder { best_pos: pop[i].clone(), best: scores[i], evals: scores.len() as u64, rows: Vec::new() }
    }

    pub fn offer(&mut self, pos: &[f64], s: Score) {
        if s.f > self.best.f {
            self.best = s;
            self.best_pos = pos.to_vec();
        }
    }

    pub fn record(&mut self, iter: usize, scores: &[Score]) {
        self.rows.push(TraceRow {
            iter,
            best_f: self.best.f,
            best_z: self.best.z,
            best_t: self.best.t,
            feasible_count: scores.iter().filter(|s| s.feasible).count(),
            evals: self.evals,
        });
    }
}

pub(crate) fn argmax(scores: &[Score]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if s.f > scores[best].f {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub config: SolverConfig,
    pub solution: Solution,
    pub evaluation: Evaluation,
    pub fitness: Fitness,
    pub scalarizer: Scalarizer,
    pub trace: SolverTrace,
}

/// Run `config.algorithm` on a prepared problem.
pub fn optimize_problem(problem: &Problem<'_>, config: &SolverConfig) -> Result<OptimizeResult, SolverError> {
    if config.iters == 0 {
        return Err(SolverError::Config("at least one iteration is required".into()));
    }
    let min_pop = match config.algorithm {
        Algorithm::Ijs => 3,
        _ => 2,
    };
    if config.pop < min_pop {
        return Err(SolverError::PopulationTooSmall(config.pop));
    }
    if !(config.mu_tent > 1.0 && config.mu_tent <= 2.0) {
        return Err(SolverError::Config(format!("tent parameter {} outside (1, 2]", config.mu_tent)));
    }
    let start = Instant::now();
    let rec = match config.algorithm {
        Algorithm::Ijs => ijs::run(problem, config, true)?,
        Algorithm::Js => ijs::run(problem, config, false)?,
        Algorithm::Ga => baselines::ga(problem, config)?,
        Algorithm::Pso => baselines::pso(problem, config)?,
        Algorithm::Gwo => baselines::gwo(problem, config)?,
    };
    let solution = problem.space.decode(&rec.best_pos).0;
    let evaluation = problem.evaluator.evaluate(&solution)?;
    let fitness = problem.fitness_of(&evaluation);
    Ok(OptimizeResult {
        config: config.clone(),
        solution,
        evaluation,
        fitness,
        scalarizer: problem.scalarizer,
        trace: SolverTrace { rows: rec.rows, evaluations: rec.evals, wall_time_s: start.elapsed().as_secs_f64() },
    })
}

/// Calibrate the fitness on the instance and run the configured algorithm.
pub fn optimize(inst: &Instance, config: &SolverConfig) -> Result<OptimizeResult, SolverError> {
    let evaluator = Evaluator::new(inst, config.eval)?;
    let problem = Problem::calibrated(evaluator, config.pop.max(2), config.seed, config.penalty_coefficient, config.penalty_mode)?;
    optimize_problem(&problem, config)
}
