//! Position update operators shared by the jellyfish variants.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::gamma;

/// Points where the tent map gets stuck in a fixed point or a short cycle.
const TENT_TRAPS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

pub fn tent_map(x: f64, mu: f64) -> f64 {
    if x < 0.5 {
        mu * x
    } else {
        mu * (1.0 - x)
    }
}

fn near_trap(x: f64) -> bool {
    TENT_TRAPS.iter().any(|t| (x - t).abs() < 1e-6)
}

fn fresh_seed<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let x: f64 = rng.random();
        if !near_trap(x) {
            return x;
        }
    }
}

/// Each float step at `mu = 2` drops one mantissa bit; orbits restart well
/// before the remaining bits stop looking uniform.
const MAX_ORBIT: usize = 32;

/// `n` successive tent-map values starting from a random seed. The sequence
/// is reseeded whenever it lands near a trap point or the orbit gets long.
pub fn tent_sequence<R: Rng + ?Sized>(n: usize, mu: f64, rng: &mut R) -> Vec<f64> {
    let mut x = fresh_seed(rng);
    let mut orbit = 0;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x = tent_map(x, mu);
        orbit += 1;
        if orbit == MAX_ORBIT || near_trap(x) {
            x = fresh_seed(rng);
            orbit = 0;
        }
    }
    out
}

/// Population whose coordinate `d` follows a tent-map sequence across
/// individuals, scaled onto `[lower[d], upper[d]]`.
pub fn init_population_tent<R: Rng + ?Sized>(
    n_pop: usize,
    lower: &[f64],
    upper: &[f64],
    mu: f64,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let mut pop = vec![vec![0.0; lower.len()]; n_pop];
    for d in 0..lower.len() {
        for (i, v) in tent_sequence(n_pop, mu, rng).into_iter().enumerate() {
            pop[i][d] = lower[d] + v * (upper[d] - lower[d]);
        }
    }
    pop
}

/// Logistic-map initialization used by the original jellyfish search.
pub fn init_population_logistic<R: Rng + ?Sized>(n_pop: usize, lower: &[f64], upper: &[f64], rng: &mut R) -> Vec<Vec<f64>> {
    let mut pop = vec![vec![0.0; lower.len()]; n_pop];
    for d in 0..lower.len() {
        let mut x = fresh_seed(rng);
        for ind in pop.iter_mut() {
            ind[d] = lower[d] + x * (upper[d] - lower[d]);
            x = 4.0 * x * (1.0 - x);
            if near_trap(x) {
                x = fresh_seed(rng);
            }
        }
    }
    pop
}

/// `|(1 - t/max) * (2 r - 1)|` for a uniform draw `r`.
pub fn time_control(t: usize, max_it: usize, r: f64) -> f64 {
    ((1.0 - t as f64 / max_it as f64) * (2.0 * r - 1.0)).abs()
}

/// Drift toward the best position against the population mean.
pub fn ocean_current<R: Rng + ?Sized>(x: &[f64], best: &[f64], mean: &[f64], beta_d: f64, rng: &mut R) -> Vec<f64> {
    x.iter()
        .zip(best)
        .zip(mean)
        .map(|((&xi, &b), &m)| {
            let trend = b - beta_d * rng.random::<f64>() * m;
            xi + rng.random::<f64>() * trend
        })
        .collect()
}

/// Random motion around the current position.
pub fn passive_motion<R: Rng + ?Sized>(x: &[f64], gamma_motion: f64, lower: &[f64], upper: &[f64], rng: &mut R) -> Vec<f64> {
    x.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&xi, (&l, &u))| xi + gamma_motion * rng.random::<f64>() * (u - l))
        .collect()
}

/// Move toward `xj` if it is at least as fit, away from it otherwise.
pub fn active_motion<R: Rng + ?Sized>(xi: &[f64], xj: &[f64], fi: f64, fj: f64, rng: &mut R) -> Vec<f64> {
    let toward = fj >= fi;
    xi.iter()
        .zip(xj)
        .map(|(&a, &b)| {
            let dir = if toward { b - a } else { a - b };
            a + rng.random::<f64>() * dir
        })
        .collect()
}

/// Mantegna's standard deviation of the numerator draw for index `beta`.
pub fn mantegna_sigma(beta: f64) -> f64 {
    let num = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

pub fn levy_from(u: f64, v: f64, beta: f64) -> f64 {
    u / v.abs().powf(1.0 / beta)
}

pub fn levy_step<R: Rng + ?Sized>(dim: usize, beta: f64, rng: &mut R) -> Vec<f64> {
    let sigma = mantegna_sigma(beta);
    (0..dim)
        .map(|_| {
            let u: f64 = StandardNormal.sample(rng);
            let v: f64 = StandardNormal.sample(rng);
            levy_from(u * sigma, v, beta)
        })
        .collect()
}

pub fn de_mutant(x: &[f64], xj: &[f64], xk: &[f64], scale: f64) -> Vec<f64> {
    x.iter().zip(xj.iter().zip(xk)).map(|(&a, (&b, &c))| a + scale * (b - c)).collect()
}

/// Binomial crossover: take the mutant coordinate where a draw falls below `cr`.
pub fn binomial_crossover<R: Rng + ?Sized>(x: &[f64], v: &[f64], cr: f64, rng: &mut R) -> Vec<f64> {
    x.iter().zip(v).map(|(&a, &b)| if rng.random::<f64>() < cr { b } else { a }).collect()
}

fn wrap_once(v: f64, l: f64, u: f64) -> f64 {
    if v > u {
        v - u + l
    } else if v < l {
        v - l + u
    } else {
        v
    }
}

/// Send coordinates that left the box in through the opposite bound; a
/// second pass handles overshoots up to two spans, anything beyond is clamped.
pub fn wrap_bounds(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &l), &u) in x.iter_mut().zip(lower).zip(upper) {
        if !v.is_finite() {
            *v = l + (u - l) / 2.0;
            continue;
        }
        *v = wrap_once(wrap_once(*v, l, u), l, u).clamp(l, u);
    }
}

/// Pick `count` distinct indices below `n`, all different from `exclude`.
pub fn distinct_others<R: Rng + ?Sized>(n: usize, exclude: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let mut picked = Vec::with_capacity(count);
    while picked.len() < count {
        let c = rng.random_range(0..n);
        if c != exclude && !picked.contains(&c) {
            picked.push(c);
        }
    }
    picked
}
