//! Jellyfish search and its improved variant.
//!
//! Individuals are updated in place, one after another, in the order of the
//! reference pseudocode: time control, ocean current or swarm motion, Lévy
//! flight, differential-evolution refinement, boundary wrap, greedy
//! replacement and best update. The plain variant starts from a logistic
//! map and skips the Lévy and DE steps.

use rand::Rng;

use super::operators::*;
use super::{streams, DeBase, Problem, Recorder, Score, SolverConfig};
use crate::error::SolverError;

pub(crate) fn run(problem: &Problem<'_>, cfg: &SolverConfig, improved: bool) -> Result<Recorder, SolverError> {
    let (lower, upper) = (&problem.space.lower, &problem.space.upper);
    let dim = lower.len();
    let n = cfg.pop;
    let (mut master, mut rngs) = streams(cfg.seed, n);

    let mut pop = if improved {
        init_population_tent(n, lower, upper, cfg.mu_tent, &mut master)
    } else {
        init_population_logistic(n, lower, upper, &mut master)
    };
    let mut scores = problem.score_all(&pop)?;
    let mut rec = Recorder::new(&pop, &scores);

    for t in 1..=cfg.iters {
        let mean: Vec<f64> = (0..dim).map(|d| pop.iter().map(|p| p[d]).sum::<f64>() / n as f64).collect();
        for i in 0..n {
            let rng = &mut rngs[i];
            let c = time_control(t, cfg.iters, rng.random());
            let mut cand = if c >= cfg.c0 {
                ocean_current(&pop[i], &rec.best_pos, &mean, cfg.beta_d, rng)
            } else if rng.random::<f64>() > 1.0 - c {
                passive_motion(&pop[i], cfg.gamma_motion, lower, upper, rng)
            } else {
                let j = distinct_others(n, i, 1, rng)[0];
                active_motion(&pop[i], &pop[j], scores[i].f, scores[j].f, rng)
            };
            if improved {
                let alpha: f64 = rng.random();
                for (x, s) in cand.iter_mut().zip(levy_step(dim, cfg.levy_beta, rng)) {
                    *x += alpha * s;
                }
            }
            wrap_bounds(&mut cand, lower, upper);
            let mut cand_score = problem.score(&cand)?;
            rec.evals += 1;

            if improved {
                let base = match cfg.de_base {
                    DeBase::Current => cand.clone(),
                    DeBase::Best => rec.best_pos.clone(),
                };
                (cand, cand_score) = de_refine(problem, cand, cand_score, &base, &pop, i, cfg.crossover_rate, rng)?;
                rec.evals += 1;
            }

            if cand_score.f >= scores[i].f {
                pop[i] = cand;
                scores[i] = cand_score;
                rec.offer(&pop[i], scores[i]);
            }
        }
        rec.record(t, &scores);
    }
    Ok(rec)
}

/// Differential-evolution refinement of a moved candidate: mutate `base`
/// with the scaled difference of two other members, cross over with the
/// candidate and keep whichever of the two scores at least as well.
#[allow(clippy::too_many_arguments)]
pub fn de_refine<R: Rng + ?Sized>(
    problem: &Problem<'_>,
    cand: Vec<f64>,
    cand_score: Score,
    base: &[f64],
    pop: &[Vec<f64>],
    me: usize,
    cr: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, Score), SolverError> {
    let jk = distinct_others(pop.len(), me, 2, rng);
    let scale: f64 = rng.random();
    let mutant = de_mutant(base, &pop[jk[0]], &pop[jk[1]], scale);
    let mut trial = binomial_crossover(&cand, &mutant, cr, rng);
    wrap_bounds(&mut trial, &problem.space.lower, &problem.space.upper);
    let trial_score = problem.score(&trial)?;
    if trial_score.f >= cand_score.f {
        Ok((trial, trial_score))
    } else {
        Ok((cand, cand_score))
    }
}
