//! Covering the lattice disk D_n in Z^2 by free simple random walk, with
//! excursion counting across the annulus `2n` to `n (ln n)^3`.
//!
//! Cover times of planar disks have infinite expectation: an excursion
//! escapes past radius `e^k` with probability of order `1/k` and then needs
//! of order `e^{2k}` steps to diffuse back, so a literal step-by-step walk
//! does not terminate in practice (log T_n has a Pareto-type tail — that
//! tail is exactly the content of the `exp(-4/t)` limit law). The walk is
//! therefore simulated exactly inside a zone comfortably containing the
//! excursion annulus, and coarse-grained outside it:
//!
//! * exact zone `|z| <= B1 = 2 B0`, with `B0` the smallest power of two at
//!   least twice the outer excursion radius — every step inside is a real
//!   SRW step, so coverage and excursion counts use the genuine path;
//! * far field: on dyadic circles `B0 * 2^j` the radial log-walk is a
//!   symmetric +-1 walk on levels (the gambler's-ruin odds between dyadic
//!   radii are exactly 1/2 for Brownian motion and 1/2 + O(1/B0) for SRW),
//!   reflected at a deep ceiling; each hop costs an exponential number of
//!   steps with the Brownian mean `(9/8) (B0 2^j)^2`, accumulated in log
//!   space; re-entry lands uniformly on the circle of radius `B0`
//!   (harmonic-measure mixing across the `B0 -> B1` shell justifies the
//!   uniform angle).
//!
//! Time bookkeeping is exact while the walk never leaves the zone (an
//! integer step count), and log-space otherwise: `ln_t` is always finite
//! even when `t_n` overflows f64.

use crate::error::{Error, Result};
use crate::logspace::ln_add_exp;
use crate::rng::{RandomSource, Xoshiro256pp};

/// Result of one disk-cover run.
///
/// `t_n` is the step count as f64 (exact integer when the walk stayed in the
/// exact zone, `inf` if the far-field time overflowed the linear scale);
/// `ln_t` is the always-finite natural log of the same quantity;
/// `n_excursions` counts annulus excursions begun by coverage time, after
/// the first visit to the outer circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskCoverResult {
    pub t_n: f64,
    pub ln_t: f64,
    pub n_excursions: u64,
    pub seed: u64,
}

/// Reflecting ceiling for the dyadic level walk. Reached with probability
/// `1/LEVEL_CAP` per far excursion; the truncation only caps single-hop
/// durations around `e^{2 * LEVEL_CAP * ln 2}` in log scale.
const LEVEL_CAP: u32 = 4096;

struct FarField {
    ln_b0: f64,
}

impl FarField {
    /// Run the level walk from level 1 until it returns to level 0.
    /// Returns ln(total far-field duration in steps).
    fn excursion(&self, rng: &mut Xoshiro256pp) -> f64 {
        let mut level: u32 = 1;
        let mut ln_total = f64::NEG_INFINITY;
        let ln_mean_base = (9.0f64 / 8.0).ln();
        loop {
            // duration of the hop leaving the current level
            let ln_rho = self.ln_b0 + level as f64 * std::f64::consts::LN_2;
            let ln_dur = ln_mean_base + 2.0 * ln_rho + rng.exp1().ln();
            ln_total = ln_add_exp(ln_total, ln_dur);
            if level == LEVEL_CAP {
                level -= 1; // reflect
            } else if rng.next_u64() & 1 == 0 {
                level += 1;
            } else {
                level -= 1;
            }
            if level == 0 {
                return ln_total;
            }
        }
    }
}

/// Cover the closed lattice disk `D_n = {z : |z| <= n}` by simple random
/// walk from the origin. Excursions are counted from the boundary shell of
/// `D_{2n}` out to the boundary shell of `D_{n (ln n)^3}` after the walk
/// first reaches the outer shell; the excursion in progress when coverage
/// completes is included (it was needed to cover).
pub fn disk_cover_z2(n: u32, seed: u64) -> Result<DiskCoverResult> {
    if n <= 3 {
        return Err(Error::domain(
            "n",
            format!("degenerate annulus: need n >= 4 so that n (ln n)^3 > 2n, got {n}"),
        ));
    }
    if n > 16 {
        return Err(Error::domain(
            "n",
            format!("exact-zone grid grows like (n (ln n)^3)^2; desk-scale cap is n <= 16, got {n}"),
        ));
    }
    let nf = n as f64;
    let r_cover_sq = (n as i64) * (n as i64);
    let r_inner = 2.0 * nf;
    let r_inner_sq = r_inner * r_inner;
    let r_outer = nf * nf.ln().powi(3);
    let r_outer_sq = r_outer * r_outer;
    debug_assert!(r_outer > r_inner);

    let mut b0: i64 = 2;
    while (b0 as f64) < 2.0 * r_outer {
        b0 *= 2;
    }
    let b1 = 2 * b0;
    let far = FarField { ln_b0: (b0 as f64).ln() };

    // dense visit grid over the exact zone, coordinates offset by b1 + 2
    let half = b1 + 2;
    let side = (2 * half + 1) as usize;
    let mut visited = vec![0u64; (side * side).div_ceil(64)];
    let idx = |x: i64, y: i64| -> usize { ((x + half) as usize) * side + (y + half) as usize };
    let mut mark = |x: i64, y: i64| -> bool {
        let i = idx(x, y);
        let (w, m) = (i >> 6, 1u64 << (i & 63));
        if visited[w] & m == 0 {
            visited[w] |= m;
            true
        } else {
            false
        }
    };

    // number of target sites in the closed disk of radius n
    let mut remaining: u64 = 0;
    for x in -(n as i64)..=(n as i64) {
        for y in -(n as i64)..=(n as i64) {
            if x * x + y * y <= r_cover_sq {
                remaining += 1;
            }
        }
    }

    let mut rng = Xoshiro256pp::from_seed(seed);
    let (mut x, mut y) = (0i64, 0i64);
    mark(x, y);
    remaining -= 1;

    let mut steps: u64 = 0;
    let mut ln_far_time = f64::NEG_INFINITY;
    let mut hit_outer = false;
    let mut excursion_begun = false;
    let mut n_excursions: u64 = 0;

    while remaining > 0 {
        match rng.next_u64() & 3 {
            0 => x += 1,
            1 => x -= 1,
            2 => y += 1,
            _ => y -= 1,
        }
        steps += 1;
        let mut r2 = (x * x + y * y) as f64;

        // excursion bookkeeping first: coverage may complete mid-excursion
        if r2 > r_outer_sq {
            hit_outer = true;
            excursion_begun = false; // any begun excursion completes here
            if r2 >= (b1 * b1) as f64 {
                // hand the far wandering to the dyadic level walk
                ln_far_time = ln_add_exp(ln_far_time, far.excursion(&mut rng));
                let theta = 2.0 * std::f64::consts::PI * rng.uniform();
                x = ((b0 as f64) * theta.cos()).round() as i64;
                y = ((b0 as f64) * theta.sin()).round() as i64;
                r2 = (x * x + y * y) as f64;
            }
        } else if hit_outer && !excursion_begun && r2 <= r_inner_sq + 4.0 * r_inner + 4.0 {
            // cheap shell pre-filter, then the boundary test proper: on or
            // inside the shell of sites adjacent to D_{2n}
            let on_or_inside = r2 <= r_inner_sq
                || [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .any(|&(dx, dy)| {
                        let (qx, qy) = (x + dx, y + dy);
                        ((qx * qx + qy * qy) as f64) <= r_inner_sq
                    });
            if on_or_inside {
                excursion_begun = true;
                n_excursions += 1;
            }
        }

        if r2 <= (r_cover_sq as f64) && mark(x, y) {
            remaining -= 1;
        }
    }

    let ln_steps = (steps as f64).ln();
    let (t_n, ln_t) = if ln_far_time == f64::NEG_INFINITY {
        (steps as f64, ln_steps)
    } else {
        let ln_t = ln_add_exp(ln_steps, ln_far_time);
        (ln_t.exp(), ln_t)
    };
    Ok(DiskCoverResult { t_n, ln_t, n_excursions, seed })
}

/// Length of the shortest walk from the origin covering the closed unit
/// disk `{0, +-e1, +-e2}`, by exhaustive search over all walks up to the
/// given length. Test oracle: the answer is 7.
pub fn min_cover_walk_d1(max_len: usize) -> Option<usize> {
    fn site_bit(x: i64, y: i64) -> u8 {
        match (x, y) {
            (0, 0) => 1,
            (1, 0) => 2,
            (-1, 0) => 4,
            (0, 1) => 8,
            (0, -1) => 16,
            _ => 0,
        }
    }
    fn dfs(x: i64, y: i64, mask: u8, depth: usize, max_len: usize, best: &mut Option<usize>) {
        if mask == 0b11111 {
            *best = Some(best.map_or(depth, |b: usize| b.min(depth)));
            return;
        }
        if depth >= max_len || best.is_some_and(|b| depth + 1 >= b) {
            return;
        }
        for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            dfs(nx, ny, mask | site_bit(nx, ny), depth + 1, max_len, best);
        }
    }
    let mut best = None;
    dfs(0, 0, site_bit(0, 0), 0, max_len, &mut best);
    best
}
