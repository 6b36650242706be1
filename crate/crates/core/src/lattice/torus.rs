//! Simple-random-walk cover experiments on the discrete torus Z_n^2.

use super::mask::{largest_empty_disk, VisitMask};
use super::{LatticeKind, LatticeSpec, Site};
use crate::error::{Error, Result};
use crate::rng::{RandomSource, Xoshiro256pp};

/// Outcome of a full cover run. Replaying the same seed reproduces
/// `cover_steps` exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverResult {
    pub cover_steps: u64,
    pub last_site: Site,
    pub seed: u64,
}

/// One uniform nearest-neighbor step. Direction encoding (low two bits of
/// the draw): 0 -> +x, 1 -> -x, 2 -> +y, 3 -> -y. On the square torus the
/// coordinates wrap modulo the side; the triangular lattice steps on axial
/// coordinates (6 directions) and the honeycomb on its brick-wall integer
/// coordinates (3 directions, parity-dependent vertical edge).
pub fn srw_step(position: Site, lattice: &LatticeSpec, rng: &mut impl RandomSource) -> Site {
    match lattice.kind {
        LatticeKind::SquareTorus | LatticeKind::SquarePlane => {
            let (dx, dy) = match rng.next_u64() & 3 {
                0 => (1i64, 0i64),
                1 => (-1, 0),
                2 => (0, 1),
                _ => (0, -1),
            };
            let mut x = position.x + dx;
            let mut y = position.y + dy;
            if lattice.kind == LatticeKind::SquareTorus {
                let n = lattice.size as i64;
                x = x.rem_euclid(n);
                y = y.rem_euclid(n);
            }
            Site { x, y }
        }
        LatticeKind::Triangular => {
            const DIRS: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
            let (dx, dy) = DIRS[(rng.next_u64() % 6) as usize];
            Site { x: position.x + dx, y: position.y + dy }
        }
        LatticeKind::Honeycomb => {
            // brick-wall representation: degree 3, the vertical edge
            // alternates with site parity
            let d = rng.next_u64() % 3;
            match d {
                0 => Site { x: position.x + 1, y: position.y },
                1 => Site { x: position.x - 1, y: position.y },
                _ => {
                    if (position.x + position.y).rem_euclid(2) == 0 {
                        Site { x: position.x, y: position.y + 1 }
                    } else {
                        Site { x: position.x, y: position.y - 1 }
                    }
                }
            }
        }
    }
}

struct TorusWalk {
    n: usize,
    mask: VisitMask,
    row: usize,
    col: usize,
    rng: Xoshiro256pp,
    steps: u64,
}

impl TorusWalk {
    fn new(n: usize, seed: u64) -> Self {
        let mut mask = VisitMask::new(n);
        mask.visit(0, 0);
        TorusWalk { n, mask, row: 0, col: 0, rng: Xoshiro256pp::from_seed(seed), steps: 0 }
    }

    #[inline]
    fn step(&mut self) {
        let n = self.n;
        match self.rng.next_u64() & 3 {
            0 => self.col = if self.col + 1 == n { 0 } else { self.col + 1 },
            1 => self.col = if self.col == 0 { n - 1 } else { self.col - 1 },
            2 => self.row = if self.row + 1 == n { 0 } else { self.row + 1 },
            _ => self.row = if self.row == 0 { n - 1 } else { self.row - 1 },
        }
        self.mask.visit(self.row, self.col);
        self.steps += 1;
    }

    fn run_to_cover(&mut self) -> u64 {
        while self.mask.unvisited_count() > 0 {
            self.step();
        }
        self.steps
    }

    fn run_to_step(&mut self, target: u64) {
        while self.steps < target {
            self.step();
        }
    }
}

/// Cover time of the n-torus by simple random walk from the origin (the
/// start site counts as visited at step 0).
pub fn cover_time_torus(n: u32, seed: u64) -> Result<CoverResult> {
    if n < 1 {
        return Err(Error::domain("n", "need n >= 1".to_string()));
    }
    let mut walk = TorusWalk::new(n as usize, seed);
    let steps = walk.run_to_cover();
    Ok(CoverResult {
        cover_steps: steps,
        last_site: Site { x: walk.row as i64, y: walk.col as i64 },
        seed,
    })
}

/// Exact expected cover time of the n-torus for n <= 2, by linear solves on
/// the absorbing chain over (position, visited-set) states. Test oracle for
/// [`cover_time_torus`]; the state space explodes beyond n = 2.
pub fn exact_small_cover(n: u32) -> Result<f64> {
    if n > 2 {
        return Err(Error::domain("n", "oracle limited to n <= 2".to_string()));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let nsites = 4usize;
    let full: u32 = (1 << nsites) - 1;
    // neighbor multiset of each site on the 2-torus: +-x collapse, +-y collapse
    let neighbors = |site: usize| -> [usize; 4] {
        let (x, y) = (site % 2, site / 2);
        let xn = (x ^ 1) + 2 * y;
        let yn = x + 2 * (y ^ 1);
        [xn, xn, yn, yn]
    };
    // E[site][visited]: expected steps to full coverage
    let mut expect = vec![vec![f64::NAN; (full + 1) as usize]; nsites];
    for site in 0..nsites {
        expect[site][full as usize] = 0.0;
    }
    // visited sets by descending popcount; within a set, solve the linear
    // system over positions in the set
    let mut sets: Vec<u32> = (1..=full).collect();
    sets.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
    for set in sets {
        if set == full {
            continue;
        }
        let members: Vec<usize> = (0..nsites).filter(|&s| set & (1 << s) != 0).collect();
        let index = |s: usize| members.iter().position(|&m| m == s).unwrap();
        let dim = members.len();
        // A e = b with A = I - P_within, b = 1 + sum of known exits
        let mut a = vec![vec![0.0f64; dim]; dim];
        let mut b = vec![1.0f64; dim];
        for (row, &site) in members.iter().enumerate() {
            a[row][row] = 1.0;
            for nb in neighbors(site) {
                if set & (1 << nb) != 0 {
                    a[row][index(nb)] -= 0.25;
                } else {
                    b[row] += 0.25 * expect[nb][(set | (1 << nb)) as usize];
                }
            }
        }
        let e = solve_dense(&mut a, &mut b);
        for (row, &site) in members.iter().enumerate() {
            expect[site][set as usize] = e[row];
        }
    }
    Ok(expect[0][1])
}

/// Gaussian elimination with partial pivoting; sizes here are at most 4.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        for row in (col + 1)..n {
            let factor = a[row][col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// First step at which the largest fully-unvisited torus disk has radius at
/// most `n^gamma`. Pathwise at most the cover time, and non-increasing in
/// gamma for a fixed seed.
///
/// The O(n^2) disk query runs lazily: it re-runs only once the unvisited
/// count has halved since the last query, and the first crossing is then
/// pinned down by bisection over the step index (replays are cheap because
/// walks are pure functions of the seed; the disk radius is non-increasing
/// along any trajectory, so the predicate is monotone in the step).
pub fn time_to_uncovered_radius(n: u32, gamma: f64, seed: u64) -> Result<u64> {
    if n < 4 {
        return Err(Error::domain("n", format!("need n >= 4, got {n}")));
    }
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::domain("gamma", format!("need 0 < gamma < 1, got {gamma}")));
    }
    let threshold = (n as f64).powf(gamma);
    let radius_at = |step: u64| -> f64 {
        let mut walk = TorusWalk::new(n as usize, seed);
        walk.run_to_step(step);
        largest_empty_disk(&walk.mask).1
    };

    let mut walk = TorusWalk::new(n as usize, seed);
    if largest_empty_disk(&walk.mask).1 <= threshold {
        return Ok(0);
    }
    let mut last_step = 0u64;
    let mut last_unvisited = walk.mask.unvisited_count();
    loop {
        let fully_covered = walk.mask.unvisited_count() == 0;
        let due = walk.mask.unvisited_count() <= last_unvisited / 2 || fully_covered;
        if due {
            let here = walk.steps;
            if largest_empty_disk(&walk.mask).1 <= threshold {
                // first crossing lies in (last_step, here]: bisect
                let (mut lo, mut hi) = (last_step, here);
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if radius_at(mid) <= threshold {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Ok(hi);
            }
            last_step = here;
            last_unvisited = walk.mask.unvisited_count();
            debug_assert!(!fully_covered, "radius is 0 <= threshold at cover");
        }
        walk.step();
    }
}

/// Radius of the largest unvisited disk at step `ceil(alpha * T_n)`: runs to
/// full coverage to learn `T_n`, then replays the same seed.
pub fn radius_at_fraction(n: u32, alpha: f64, seed: u64) -> Result<f64> {
    if n < 4 {
        return Err(Error::domain("n", format!("need n >= 4, got {n}")));
    }
    if !(0.0 < alpha && alpha <= 1.0) {
        return Err(Error::domain("alpha", format!("need 0 < alpha <= 1, got {alpha}")));
    }
    let cover = cover_time_torus(n, seed)?.cover_steps;
    let target = (alpha * cover as f64).ceil() as u64;
    let mut walk = TorusWalk::new(n as usize, seed);
    walk.run_to_step(target);
    Ok(largest_empty_disk(&walk.mask).1)
}
