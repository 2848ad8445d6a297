//! Property suites shared by the `properties` and `acceptance` targets.
//! Each suite draws at least `CASES` inputs from a fixed-seed runner.

#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use pfsm::evaluate::{EvalOptions, Evaluator};
use pfsm::model::Instance;
use pfsm::scalarize::{ewm_weights, PenaltyMode, Scalarizer};
use pfsm::service_time::{bpr_mean, normal_cdf, normal_quantile, reliability, time_budget, SegmentTimeStats};
use pfsm::solver::operators::{tent_sequence, wrap_bounds};
use pfsm::solver::{de_refine, Problem, SearchSpace};

use crate::common;

pub const CASES: u32 = 128;

pub type Suite = (&'static str, fn() -> Result<u32, String>);

pub const SUITES: &[Suite] = &[
    ("profit identity", profit_identity),
    ("travel-time decomposition", time_decomposition),
    ("timeline causality and load conservation", timeline_causality),
    ("structural constraints after decode", decode_structure),
    ("wrap_bounds idempotence", wrap_idempotence),
    ("DE refinement never decreases fitness", de_non_decrease),
    ("EWM weights and scaling invariance", ewm_invariance),
    ("tent map range and uniformity", tent_uniformity),
    ("normal quantile and CDF round trip", quantile_round_trip),
    ("BPR monotone in congestion", bpr_monotone),
];

fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    runner().run(&strategy, test).map(|_| CASES).map_err(|e| e.to_string())
}

fn instances() -> &'static [Instance] {
    static CELL: OnceLock<Vec<Instance>> = OnceLock::new();
    CELL.get_or_init(|| vec![common::yushe(), common::simnet(), common::micro(), common::timeline_oracle()])
}

fn spaces() -> &'static [SearchSpace] {
    static CELL: OnceLock<Vec<SearchSpace>> = OnceLock::new();
    CELL.get_or_init(|| instances().iter().map(SearchSpace::new).collect())
}

/// An instance index and a position inside its search box.
fn instance_and_position() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (0..instances().len()).prop_flat_map(|i| {
        let space = &spaces()[i];
        let dim = space.lower.len();
        prop::collection::vec(0.0..=1.0f64, dim).prop_map(move |u| {
            let s = &spaces()[i];
            let pos = u.iter().enumerate().map(|(d, &v)| s.lower[d] + v * (s.upper[d] - s.lower[d])).collect();
            (i, pos)
        })
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

pub fn profit_identity() -> Result<u32, String> {
    run(instance_and_position(), |(i, pos)| {
        let inst = &instances()[i];
        let sol = spaces()[i].decode(&pos).0;
        let e = Evaluator::new(inst, EvalOptions::default()).unwrap().evaluate(&sol).unwrap();
        let c = e.costs;
        let expected = c.passenger_revenue + c.freight_revenue - (c.toll + c.dwell + c.running + c.purchasing);
        prop_assert!(close(c.profit, expected), "Z {} vs {}", c.profit, expected);
        prop_assert!(close(c.total_cost(), c.toll + c.dwell + c.running + c.purchasing));
        prop_assert!(c.distance_km >= 0.0 && c.running >= 0.0 && c.dwell >= 0.0);
        Ok(())
    })
}

pub fn time_decomposition() -> Result<u32, String> {
    run(instance_and_position(), |(i, pos)| {
        let inst = &instances()[i];
        let sol = spaces()[i].decode(&pos).0;
        let t = Evaluator::new(inst, EvalOptions::default()).unwrap().evaluate(&sol).unwrap().times;
        prop_assert!(close(t.total, t.cruise + t.dwell + t.wait + t.detention));
        prop_assert!(close(t.avg * inst.total_passengers() as f64, t.total));
        for part in [t.cruise, t.dwell, t.wait, t.detention] {
            prop_assert!(part >= -1e-9, "negative component {part}");
        }
        Ok(())
    })
}

pub fn timeline_causality() -> Result<u32, String> {
    run(instance_and_position(), |(i, pos)| {
        let inst = &instances()[i];
        let sol = spaces()[i].decode(&pos).0;
        let (_, tl) = Evaluator::new(inst, EvalOptions::default()).unwrap().evaluate_detailed(&sol).unwrap();
        let mut boarded = 0u64;
        let mut accepted = 0u64;
        for trace in &tl.runs {
            let (mut on, mut off, mut p_on, mut p_off) = (0, 0, 0, 0);
            for (k, e) in trace.stops.iter().enumerate() {
                prop_assert!(e.arrival <= e.departure + 1e-12);
                if let Some(next) = trace.stops.get(k + 1) {
                    prop_assert!(e.departure <= next.arrival + 1e-9, "run {} goes back in time", trace.run);
                }
                prop_assert!(e.onboard <= trace.seats);
                prop_assert!(e.boardings <= e.remaining_seats);
                prop_assert!(e.detained + e.boardings == e.waiting);
                prop_assert!(e.onboard_parcel_m3 <= trace.freight_capacity_m3 + 1e-9);
                prop_assert!(e.window_min >= 0.0 && e.detention_min >= 0.0);
                on += e.boardings;
                off += e.alightings;
                p_on += e.parcels_on;
                p_off += e.parcels_off;
            }
            prop_assert_eq!(on, off);
            prop_assert_eq!(p_on, p_off);
            prop_assert_eq!(trace.stops.last().map_or(0, |e| e.onboard), 0);
            boarded += on;
            accepted += p_on;
        }
        prop_assert_eq!(boarded + tl.unserved_passengers, inst.total_passengers());
        prop_assert_eq!(accepted + tl.rejected_parcels, inst.total_parcels());
        Ok(())
    })
}

pub fn decode_structure() -> Result<u32, String> {
    run(instance_and_position(), |(i, pos)| {
        let inst = &instances()[i];
        let space = &spaces()[i];
        let (sol, unresolved) = space.decode(&pos);
        prop_assert_eq!(sol.x.len(), inst.num_runs());
        prop_assert_eq!(sol.y.len(), inst.fleet());
        prop_assert!(sol.x.iter().all(|&b| b >= 1 && b as usize <= inst.fleet()));
        prop_assert!(sol.y.iter().all(|&t| t < inst.num_types()));
        for &l in &sol.lambda_pct {
            prop_assert!(l >= space.lambda_lo && l <= 100);
            prop_assert!((l - space.lambda_lo) % space.lambda_step == 0 || l == 100);
            prop_assert!(f64::from(l) >= 100.0 * inst.limits.lambda_min - 1e-9);
        }
        if unresolved == 0 {
            for a in 0..inst.num_runs() {
                for b in a + 1..inst.num_runs() {
                    if sol.x[a] == sol.x[b] {
                        prop_assert!(!inst.runs[a].overlaps(&inst.runs[b]), "runs {a} and {b} overlap");
                    }
                }
            }
        }
        prop_assert_eq!(space.decode(&space.encode(&sol)).0, sol);
        Ok(())
    })
}

pub fn wrap_idempotence() -> Result<u32, String> {
    let strategy = (-1e3..1e3f64, 0.01..1e3f64, prop::collection::vec(-1.0..2.0f64, 1..8));
    run(strategy, |(lo, span, fracs)| {
        let hi = lo + span;
        let n = fracs.len();
        let (lower, upper) = (vec![lo; n], vec![hi; n]);
        let mut x: Vec<f64> = fracs.iter().map(|f| lo + f * span).collect();
        let inside: Vec<bool> = x.iter().map(|v| (lo..=hi).contains(v)).collect();
        let before = x.clone();
        wrap_bounds(&mut x, &lower, &upper);
        for d in 0..n {
            prop_assert!(x[d] >= lo && x[d] <= hi, "{} escaped [{lo}, {hi}]", x[d]);
            if inside[d] {
                prop_assert_eq!(x[d], before[d]);
            }
        }
        let once = x.clone();
        wrap_bounds(&mut x, &lower, &upper);
        prop_assert_eq!(x, once);
        Ok(())
    })
}

fn problems() -> &'static [Problem<'static>] {
    static CELL: OnceLock<Vec<Problem<'static>>> = OnceLock::new();
    CELL.get_or_init(|| {
        instances()
            .iter()
            .map(|inst| {
                let ev = Evaluator::new(inst, EvalOptions::default()).unwrap();
                Problem::calibrated(ev, 30, 1, None, PenaltyMode::Linear).unwrap()
            })
            .collect()
    })
}

pub fn de_non_decrease() -> Result<u32, String> {
    let strategy = (0..instances().len(), any::<u64>(), 0.0..=1.0f64, any::<bool>());
    run(strategy, |(i, seed, cr, from_best)| {
        let problem = &problems()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = &problem.space;
        let pop: Vec<Vec<f64>> = (0..5)
            .map(|_| s.lower.iter().zip(&s.upper).map(|(&l, &u)| rng.random_range(l..=u)).collect())
            .collect();
        let scores = problem.score_all(&pop).unwrap();
        let base = if from_best { pop[1].clone() } else { pop[0].clone() };
        let (out, score) = de_refine(problem, pop[0].clone(), scores[0], &base, &pop, 0, cr, &mut rng).unwrap();
        prop_assert!(score.f >= scores[0].f);
        prop_assert_eq!(problem.score(&out).unwrap(), score);
        Ok(())
    })
}

pub fn ewm_invariance() -> Result<u32, String> {
    let sample = (1.0..200.0f64, -5e3..5e3f64);
    let strategy = (prop::collection::vec(sample, 2..40), 1e-3..1e3f64, 1e-3..1e3f64);
    run(strategy, |(samples, ct, cz)| {
        let w = ewm_weights(&samples).unwrap();
        prop_assert!((w.w1 + w.w2 - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&w.w1) && (0.0..=1.0).contains(&w.w2));

        let scaled: Vec<(f64, f64)> = samples.iter().map(|&(t, z)| (ct * t, cz * z)).collect();
        let ws = ewm_weights(&scaled).unwrap();
        prop_assert!((w.w1 - ws.w1).abs() < 1e-9, "w1 {} vs {}", w.w1, ws.w1);

        let a = Scalarizer::fit(&samples, None, PenaltyMode::Linear).unwrap();
        let b = Scalarizer::fit(&scaled, None, PenaltyMode::Linear).unwrap();
        let fa: Vec<f64> = samples.iter().map(|&(t, z)| a.fitness(z, t, 0.0, true).f).collect();
        let fb: Vec<f64> = scaled.iter().map(|&(t, z)| b.fitness(z, t, 0.0, true).f).collect();
        let best_a = (0..fa.len()).max_by(|&x, &y| fa[x].total_cmp(&fa[y])).unwrap();
        let max_b = fb.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((fb[best_a] - max_b).abs() < 1e-9, "argmax moved under scaling");
        Ok(())
    })
}

/// Successive tent values are dependent; samples this far apart are close
/// enough to independent for a chi-square count.
const TENT_SPACING: usize = 8;

/// Chi-square statistic of `n` spaced tent samples over ten equal bins.
pub fn tent_chi2(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bins = [0f64; 10];
    for v in tent_sequence(n * TENT_SPACING, 2.0, &mut rng).iter().step_by(TENT_SPACING) {
        bins[((v * 10.0) as usize).min(9)] += 1.0;
    }
    let expected = n as f64 / 10.0;
    bins.iter().map(|o| (o - expected).powi(2) / expected).sum()
}

pub fn chi2_critical(alpha: f64) -> f64 {
    ChiSquared::new(9.0).unwrap().inverse_cdf(1.0 - alpha)
}

pub fn tent_uniformity() -> Result<u32, String> {
    // Bonferroni over the cases keeps the family-wise level at 0.01.
    let critical = chi2_critical(0.01 / f64::from(CASES));
    run((any::<u64>(), 1.0001..=2.0f64), move |(seed, mu)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let short = tent_sequence(2_000, mu, &mut rng);
        prop_assert!(short.iter().all(|v| (0.0..=1.0).contains(v)));
        let chi2 = tent_chi2(20_000, seed);
        prop_assert!(chi2 < critical, "chi2 {chi2:.2} over {critical:.2}");
        Ok(())
    })
}

pub fn quantile_round_trip() -> Result<u32, String> {
    let strategy = (0.5001..0.9999f64, 1.0..120.0f64, 0.01..20.0f64);
    run(strategy, |(p, mean, std)| {
        prop_assert!((normal_cdf(normal_quantile(p)) - p).abs() < 1e-9);
        prop_assert!((normal_quantile(0.85) - 1.036).abs() < 1e-3);
        let stats = SegmentTimeStats { mean, std, capacity: 1.0, ..Default::default() };
        for gamma in [0.85, p] {
            let budget = time_budget(&stats, gamma).unwrap();
            prop_assert!((reliability(&stats, budget) - gamma).abs() < 1e-9);
        }
        Ok(())
    })
}

pub fn bpr_monotone() -> Result<u32, String> {
    let strategy = (0.1..100.0f64, 0.0..500.0f64, 0.0..500.0f64, 1.0..1000.0f64, 0.01..1.0f64, 1.0..6.0f64);
    run(strategy, |(a, q1, dq, cap, beta, power)| {
        let low = bpr_mean(a, q1, cap, beta, power);
        let high = bpr_mean(a, q1 + dq, cap, beta, power);
        prop_assert!(low >= a);
        prop_assert!(high >= low);
        prop_assert!(bpr_mean(a, q1, cap * 2.0, beta, power) <= low);
        Ok(())
    })
}

use rand::Rng;
