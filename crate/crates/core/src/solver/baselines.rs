//! Textbook GA, PSO and GWO over the same encoding and fitness. New
//! positions are generated serially from per-individual streams and then
//! scored in parallel, so results do not depend on the thread count.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{argmax, streams, Problem, Recorder, Score, SolverConfig};
use crate::error::SolverError;

fn uniform_population(n: usize, lower: &[f64], upper: &[f64], rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| lower.iter().zip(upper).map(|(&l, &u)| rng.random_range(l..=u)).collect())
        .collect()
}

fn clamp_into(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &l), &u) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(l, u);
    }
}

fn tournament(scores: &[Score], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut best = rng.random_range(0..scores.len());
    for _ in 1..size {
        let c = rng.random_range(0..scores.len());
        if scores[c].f > scores[best].f {
            best = c;
        }
    }
    best
}

/// Generational real-coded GA: tournament selection, arithmetic crossover,
/// uniform-reset mutation and elitism.
pub(crate) fn ga(problem: &Problem<'_>, cfg: &SolverConfig) -> Result<Recorder, SolverError> {
    let (lower, upper) = (&problem.space.lower, &problem.space.upper);
    let dim = lower.len();
    let n = cfg.pop;
    let p = cfg.ga;
    let pm = p.mutation_rate.unwrap_or(1.0 / dim as f64);
    let elites = p.elites.min(n);
    let (mut master, mut rngs) = streams(cfg.seed, n);

    let mut pop = uniform_population(n, lower, upper, &mut master);
    let mut scores = problem.score_all(&pop)?;
    let mut rec = Recorder::new(&pop, &scores);

    for t in 1..=cfg.iters {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scores[b].f.total_cmp(&scores[a].f));
        let mut next: Vec<Vec<f64>> = order[..elites].iter().map(|&i| pop[i].clone()).collect();
        let mut next_scores: Vec<Score> = order[..elites].iter().map(|&i| scores[i]).collect();

        let mut children = Vec::with_capacity(n - elites);
        for rng in rngs.iter_mut().take(n - elites) {
            let a = &pop[tournament(&scores, p.tournament, rng)];
            let b = &pop[tournament(&scores, p.tournament, rng)];
            let mut child: Vec<f64> = if rng.random::<f64>() < p.crossover_rate {
                a.iter()
                    .zip(b)
                    .map(|(&u, &v)| {
                        let w: f64 = rng.random();
                        w * u + (1.0 - w) * v
                    })
                    .collect()
            } else {
                a.clone()
            };
            for d in 0..dim {
                if rng.random::<f64>() < pm {
                    child[d] = rng.random_range(lower[d]..=upper[d]);
                }
            }
            children.push(child);
        }
        let child_scores = problem.score_all(&children)?;
        rec.evals += children.len() as u64;
        for (c, s) in children.iter().zip(&child_scores) {
            rec.offer(c, *s);
        }
        next.extend(children);
        next_scores.extend(child_scores);
        pop = next;
        scores = next_scores;
        rec.record(t, &scores);
    }
    Ok(rec)
}

/// Global-best PSO with constriction-equivalent inertia and velocity clamping.
pub(crate) fn pso(problem: &Problem<'_>, cfg: &SolverConfig) -> Result<Recorder, SolverError> {
    let (lower, upper) = (&problem.space.lower, &problem.space.upper);
    let dim = lower.len();
    let n = cfg.pop;
    let p = cfg.pso;
    let (mut master, mut rngs) = streams(cfg.seed, n);
    let vmax: Vec<f64> = lower.iter().zip(upper).map(|(&l, &u)| p.max_velocity * (u - l)).collect();

    let mut pop = uniform_population(n, lower, upper, &mut master);
    let mut vel: Vec<Vec<f64>> = (0..n)
        .map(|_| vmax.iter().map(|&m| master.random_range(-m..=m)).collect())
        .collect();
    let mut scores = problem.score_all(&pop)?;
    let mut pbest = pop.clone();
    let mut pbest_scores = scores.clone();
    let mut rec = Recorder::new(&pop, &scores);

    for t in 1..=cfg.iters {
        for i in 0..n {
            let rng = &mut rngs[i];
            for d in 0..dim {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let v = p.inertia * vel[i][d]
                    + p.cognitive * r1 * (pbest[i][d] - pop[i][d])
                    + p.social * r2 * (rec.best_pos[d] - pop[i][d]);
                vel[i][d] = v.clamp(-vmax[d], vmax[d]);
                pop[i][d] += vel[i][d];
            }
            clamp_into(&mut pop[i], lower, upper);
        }
        scores = problem.score_all(&pop)?;
        rec.evals += n as u64;
        for i in 0..n {
            if scores[i].f >= pbest_scores[i].f {
                pbest[i] = pop[i].clone();
                pbest_scores[i] = scores[i];
            }
            rec.offer(&pop[i], scores[i]);
        }
        rec.record(t, &scores);
    }
    Ok(rec)
}

/// Grey wolf optimizer with the linear `a: 2 -> 0` schedule.
pub(crate) fn gwo(problem: &Problem<'_>, cfg: &SolverConfig) -> Result<Recorder, SolverError> {
    let (lower, upper) = (&problem.space.lower, &problem.space.upper);
    let dim = lower.len();
    let n = cfg.pop;
    let (mut master, mut rngs) = streams(cfg.seed, n);

    let mut pop = uniform_population(n, lower, upper, &mut master);
    let mut scores = problem.score_all(&pop)?;
    let mut rec = Recorder::new(&pop, &scores);

    for t in 1..=cfg.iters {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scores[b].f.total_cmp(&scores[a].f));
        let leaders: Vec<Vec<f64>> = order.iter().take(3).map(|&i| pop[i].clone()).collect();
        let a = 2.0 * (1.0 - (t - 1) as f64 / cfg.iters as f64);
        for i in 0..n {
            let rng = &mut rngs[i];
            for d in 0..dim {
                let mut sum = 0.0;
                for leader in &leaders {
                    let big_a = 2.0 * a * rng.random::<f64>() - a;
                    let big_c = 2.0 * rng.random::<f64>();
                    sum += leader[d] - big_a * (big_c * leader[d] - pop[i][d]).abs();
                }
                pop[i][d] = sum / leaders.len() as f64;
            }
            clamp_into(&mut pop[i], lower, upper);
        }
        scores = problem.score_all(&pop)?;
        rec.evals += n as u64;
        let i = argmax(&scores);
        rec.offer(&pop[i], scores[i]);
        rec.record(t, &scores);
    }
    Ok(rec)
}
