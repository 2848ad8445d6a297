//! Continuous search space and the decode/repair map onto integer schemes.
//!
//! A position has `R* + 2K*` coordinates: the bus number of every run, then
//! the type index of every bus, then the passenger share (percent) of every
//! bus. Each coordinate ranges over half a grid step beyond its extreme
//! integer values so that rounding gives every value an equal-width cell.

use crate::model::Instance;
use crate::solution::Solution;

const EDGE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub runs: usize,
    pub buses: usize,
    pub types: usize,
    pub lambda_lo: u32,
    pub lambda_step: u32,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Runs ordered by departure, the order repair places them in.
    placement: Vec<usize>,
    /// `overlap[a][b]`: runs a and b cannot share a bus.
    overlap: Vec<Vec<bool>>,
}

impl SearchSpace {
    pub fn new(inst: &Instance) -> Self {
        let runs = inst.num_runs();
        let buses = inst.fleet();
        let types = inst.num_types();
        let lambda_step = inst.limits.lambda_step_pct;
        let lambda_lo = min_lambda_pct(inst.limits.lambda_min, lambda_step);
        let mut lower = Vec::with_capacity(runs + 2 * buses);
        let mut upper = Vec::with_capacity(runs + 2 * buses);
        for _ in 0..runs {
            lower.push(0.5 + EDGE);
            upper.push(buses as f64 + 0.5 - EDGE);
        }
        for _ in 0..buses {
            lower.push(-0.5 + EDGE);
            upper.push(types as f64 - 0.5 - EDGE);
        }
        let half = f64::from(lambda_step) / 2.0;
        for _ in 0..buses {
            lower.push(f64::from(lambda_lo) - half + EDGE);
            upper.push(100.0 + half - EDGE);
        }
        let mut placement: Vec<usize> = (0..runs).collect();
        placement.sort_by(|&a, &b| inst.runs[a].departure.0.total_cmp(&inst.runs[b].departure.0).then(a.cmp(&b)));
        let overlap = (0..runs)
            .map(|a| (0..runs).map(|b| a != b && inst.runs[a].overlaps(&inst.runs[b])).collect())
            .collect();
        SearchSpace { runs, buses, types, lambda_lo, lambda_step, lower, upper, placement, overlap }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Admissible passenger shares in percent.
    pub fn lambda_values(&self) -> Vec<u32> {
        (self.lambda_lo..=100).step_by(self.lambda_step as usize).collect()
    }

    /// Round, clamp and repair a position into a scheme. Also reports how
    /// many runs could not be moved off a conflicting bus.
    pub fn decode(&self, pos: &[f64]) -> (Solution, u32) {
        let (r, k) = (self.runs, self.buses);
        let mut x: Vec<u32> = pos[..r].iter().map(|&v| (v.round() as i64).clamp(1, k as i64) as u32).collect();
        let y = pos[r..r + k]
            .iter()
            .map(|&v| (v.round() as i64).clamp(0, self.types as i64 - 1) as usize)
            .collect();
        let step = f64::from(self.lambda_step);
        let lambda_pct = pos[r + k..]
            .iter()
            .map(|&v| {
                let snapped = ((v - f64::from(self.lambda_lo)) / step).round() * step + f64::from(self.lambda_lo);
                (snapped as i64).clamp(i64::from(self.lambda_lo), 100) as u32
            })
            .collect();
        let unresolved = self.repair(&mut x);
        (Solution { x, y, lambda_pct }, unresolved)
    }

    /// Move each run that overlaps an already placed run on its bus to the
    /// lowest-numbered bus that is free for it.
    fn repair(&self, x: &mut [u32]) -> u32 {
        let mut duties: Vec<Vec<usize>> = vec![Vec::new(); self.buses];
        let mut unresolved = 0;
        for &r in &self.placement {
            let free = |b: usize, duties: &Vec<Vec<usize>>| duties[b].iter().all(|&o| !self.overlap[r][o]);
            let mut bus = x[r] as usize - 1;
            if !free(bus, &duties) {
                match (0..self.buses).find(|&b| free(b, &duties)) {
                    Some(b) => bus = b,
                    None => unresolved += 1,
                }
            }
            x[r] = bus as u32 + 1;
            duties[bus].push(r);
        }
        unresolved
    }

    /// Position whose decode is `sol` (before repair).
    pub fn encode(&self, sol: &Solution) -> Vec<f64> {
        sol.x
            .iter()
            .map(|&b| f64::from(b))
            .chain(sol.y.iter().map(|&t| t as f64))
            .chain(sol.lambda_pct.iter().map(|&l| f64::from(l)))
            .collect()
    }
}

/// Smallest admissible passenger share in percent on the step grid.
pub fn min_lambda_pct(lambda_min: f64, step: u32) -> u32 {
    let pct = (lambda_min * 100.0 - 1e-9).ceil().max(0.0) as u32;
    pct.div_ceil(step) * step
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_instance_file;

    fn yushe() -> Instance {
        load_instance_file(concat!(env!("CARGO_MANIFEST_DIR"), "/data/yushe.json")).unwrap()
    }

    #[test]
    fn figure_three_vector() {
        let inst = yushe();
        let space = SearchSpace::new(&inst);
        assert_eq!(space.dim(), 12 + 2 * 6);
        let pos = [
            1.2, 2.4, 2.6, 1.9, 0.7, 3.1, 4.0, 4.8, 6.3, 3.6, 5.2, 5.9, 0.1, 1.3, 1.6, 2.2, -0.2, 0.9, 69.6, 55.4, 60.2, 79.9,
            100.3, 89.5,
        ];
        let (sol, unresolved) = space.decode(&pos);
        assert_eq!(unresolved, 0);
        assert_eq!(sol.x, vec![1, 2, 3, 2, 1, 3, 4, 5, 6, 4, 5, 6]);
        assert_eq!(sol.y, vec![0, 1, 2, 2, 0, 1]);
        assert_eq!(sol.lambda_pct, vec![70, 55, 60, 80, 100, 90]);
    }

    #[test]
    fn integer_points_round_trip() {
        let inst = yushe();
        let space = SearchSpace::new(&inst);
        let published = Solution {
            x: vec![1, 2, 3, 2, 1, 3, 4, 5, 6, 4, 5, 6],
            y: vec![0, 0, 1, 2, 1, 2],
            lambda_pct: vec![100, 100, 80, 50, 90, 70],
        };
        let (back, _) = space.decode(&space.encode(&published));
        assert_eq!(back, published);
    }

    #[test]
    fn repair_moves_later_run() {
        let inst = yushe();
        let space = SearchSpace::new(&inst);
        // Runs 1 and 7 overlap (06:00-07:10 and 06:10-07:15).
        let pos = space.encode(&Solution {
            x: vec![1, 2, 3, 2, 1, 3, 1, 5, 6, 4, 5, 6],
            y: vec![0; 6],
            lambda_pct: vec![100; 6],
        });
        let (sol, unresolved) = space.decode(&pos);
        assert_eq!(unresolved, 0);
        assert_eq!(sol.x[0], 1);
        assert_eq!(sol.x[6], 2, "lowest-numbered free bus");
    }

    #[test]
    fn lambda_grid() {
        assert_eq!(min_lambda_pct(0.4, 1), 40);
        assert_eq!(min_lambda_pct(0.5, 50), 50);
        assert_eq!(min_lambda_pct(0.41, 5), 45);
        assert_eq!(min_lambda_pct(0.29, 1), 29);
    }
}
