//! Discretized Brownian motion on the unit torus `(-1/2, 1/2]^2`: hitting
//! times of small disks, epsilon-cover times of a coverage mesh, and the
//! concentric-annulus excursion decomposition.
//!
//! Discretization is Euler-Maruyama with independent `N(0, dt)` increments
//! per coordinate and torus wrap after each step. Hitting is detected on
//! step endpoints only, which biases hitting times upward; the
//! `dt_refinement_bias` regression test bounds the effect. The step rule
//! `dt <= (eps/8)^2` keeps the per-step displacement scale at `eps/8`.

use crate::error::{Error, Result};
use crate::green::{torus_dist, wrap_unit};
use crate::rng::Xoshiro256pp;

/// Point of the unit torus, coordinates reduced to `[-1/2, 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint { x: wrap_unit(x), y: wrap_unit(y) }
    }

    pub fn dist(&self, other: &TorusPoint) -> f64 {
        torus_dist(self.x, self.y, other.x, other.y)
    }
}

/// Euler-Maruyama configuration.
#[derive(Clone, Copy, Debug)]
pub struct BmConfig {
    pub dt: f64,
    pub seed: u64,
}

impl BmConfig {
    pub fn new(dt: f64, seed: u64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain("dt", format!("need dt > 0, got {dt}")));
        }
        Ok(BmConfig { dt, seed })
    }

    fn check_eps_rule(&self, eps: f64) -> Result<()> {
        let cap = (eps / 8.0) * (eps / 8.0);
        if self.dt > cap {
            return Err(Error::domain("dt", format!("need dt <= (eps/8)^2 = {cap}, got {}", self.dt)));
        }
        Ok(())
    }
}

struct EulerWalk {
    x: f64,
    y: f64,
    sigma: f64,
    rng: Xoshiro256pp,
}

impl EulerWalk {
    fn new(start: TorusPoint, cfg: &BmConfig) -> Self {
        EulerWalk { x: start.x, y: start.y, sigma: cfg.dt.sqrt(), rng: Xoshiro256pp::from_seed(cfg.seed) }
    }

    #[inline]
    fn step(&mut self) {
        self.x = wrap_unit(self.x + self.sigma * self.rng.normal());
        self.y = wrap_unit(self.y + self.sigma * self.rng.normal());
    }

    #[inline]
    fn dist_to(&self, p: &TorusPoint) -> f64 {
        torus_dist(self.x, self.y, p.x, p.y)
    }
}

/// First Euler-step time at which the path is within `epsilon` of `x`.
pub fn hitting_time(x: TorusPoint, epsilon: f64, cfg: &BmConfig, start: TorusPoint) -> Result<f64> {
    if !(0.0 < epsilon && epsilon < 0.5) {
        return Err(Error::domain("epsilon", format!("need 0 < eps < 1/2, got {epsilon}")));
    }
    cfg.check_eps_rule(epsilon)?;
    if start.dist(&x) <= epsilon {
        return Ok(0.0);
    }
    let mut walk = EulerWalk::new(start, cfg);
    let mut steps: u64 = 0;
    loop {
        walk.step();
        steps += 1;
        if walk.dist_to(&x) <= epsilon {
            return Ok(steps as f64 * cfg.dt);
        }
    }
}

/// Coverage mesh: one boolean per mesh center, marked once the path has come
/// within `epsilon` of it (up to the conservative under-marking margin
/// `m = 3 sqrt(dt)` that compensates intra-step excursions).
pub struct CoverMesh {
    pub epsilon: f64,
    pub resolution: usize,
    pub covered: Vec<bool>,
    pub uncovered_count: usize,
}

impl CoverMesh {
    fn new(epsilon: f64, resolution: usize) -> Self {
        CoverMesh {
            epsilon,
            resolution,
            covered: vec![false; resolution * resolution],
            uncovered_count: resolution * resolution,
        }
    }

    #[inline]
    fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let res = self.resolution as f64;
        (-0.5 + (i as f64 + 0.5) / res, -0.5 + (j as f64 + 0.5) / res)
    }

    /// Mark all centers within `radius` of `(px, py)`.
    fn mark_near(&mut self, px: f64, py: f64, radius: f64) {
        let res = self.resolution;
        let resf = res as f64;
        let ci = ((px + 0.5) * resf).floor() as i64;
        let cj = ((py + 0.5) * resf).floor() as i64;
        let w = (radius * resf).ceil() as i64 + 1;
        for di in -w..=w {
            let i = (ci + di).rem_euclid(res as i64) as usize;
            for dj in -w..=w {
                let j = (cj + dj).rem_euclid(res as i64) as usize;
                let idx = i * res + j;
                if self.covered[idx] {
                    continue;
                }
                let (cx, cy) = self.center(i, j);
                if torus_dist(px, py, cx, cy) <= radius {
                    self.covered[idx] = true;
                    self.uncovered_count -= 1;
                }
            }
        }
    }
}

/// Epsilon-cover time of the torus: first time every mesh center has been
/// within `epsilon` of the path (Wiener-sausage coverage of the mesh). The
/// path starts at the origin.
pub fn cover_time_bm(epsilon: f64, cfg: &BmConfig, resolution: usize) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::domain("epsilon", format!("need eps > 0, got {epsilon}")));
    }
    // the start point is within the torus half-diameter of every point
    if epsilon >= 0.5f64.sqrt() {
        return Ok(0.0);
    }
    if resolution < (4.0 / epsilon).ceil() as usize {
        return Err(Error::domain("resolution", format!("need resolution >= ceil(4/eps), got {resolution}")));
    }
    cfg.check_eps_rule(epsilon)?;
    let margin = 3.0 * cfg.dt.sqrt();
    let radius = epsilon - margin;
    debug_assert!(radius > 0.0);
    let mut mesh = CoverMesh::new(epsilon, resolution);
    let mut walk = EulerWalk::new(TorusPoint::new(0.0, 0.0), cfg);
    mesh.mark_near(walk.x, walk.y, radius);
    let mut steps: u64 = 0;
    while mesh.uncovered_count > 0 {
        walk.step();
        steps += 1;
        mesh.mark_near(walk.x, walk.y, radius);
    }
    Ok(steps as f64 * cfg.dt)
}

/// Per-excursion record across the concentric annulus `(r, R)` around
/// `center`. `tau0` is the initial approach to the outer circle; `tau[i]`
/// and `sigma[i]` are the duration of excursion `i+1` and its inner-hit
/// delay, so `sigma[i] <= tau[i]` holds element-wise.
#[derive(Clone, Debug)]
pub struct ExcursionRecord {
    pub center: TorusPoint,
    pub r: f64,
    pub big_r: f64,
    pub tau0: f64,
    pub tau: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl ExcursionRecord {
    /// Total simulated time `tau0 + sum tau`.
    pub fn total_time(&self) -> f64 {
        self.tau0 + self.tau.iter().sum::<f64>()
    }
}

/// Simulate `count` excursions from the outer circle to itself via the inner
/// circle. The walk starts at the antipode of `center`, the torus point
/// farthest from it. Crossings are detected by sign changes of
/// `distance - radius` at step endpoints, the same convention for both
/// circles.
pub fn excursion_decompose(
    center: TorusPoint,
    r: f64,
    big_r: f64,
    count: usize,
    cfg: &BmConfig,
) -> Result<ExcursionRecord> {
    if !(0.0 < r && 2.0 * r <= big_r && big_r < 0.5) {
        return Err(Error::domain("r", format!("need 0 < 2r <= R < 1/2, got r={r} R={big_r}")));
    }
    if count == 0 {
        return Err(Error::domain("count", "need count >= 1".to_string()));
    }
    cfg.check_eps_rule(r)?;
    let start = TorusPoint::new(center.x + 0.5, center.y + 0.5);
    let mut walk = EulerWalk::new(start, cfg);
    let mut steps: u64 = 0;

    // initial approach to the outer circle
    while walk.dist_to(&center) > big_r {
        walk.step();
        steps += 1;
    }
    let tau0 = steps as f64 * cfg.dt;

    let mut tau = Vec::with_capacity(count);
    let mut sigma = Vec::with_capacity(count);
    for _ in 0..count {
        let excursion_start = steps;
        // inward leg: first hit of the inner circle
        while walk.dist_to(&center) > r {
            walk.step();
            steps += 1;
        }
        sigma.push((steps - excursion_start) as f64 * cfg.dt);
        // outward leg: return to the outer circle
        while walk.dist_to(&center) < big_r {
            walk.step();
            steps += 1;
        }
        tau.push((steps - excursion_start) as f64 * cfg.dt);
    }
    Ok(ExcursionRecord { center, r, big_r, tau0, tau, sigma })
}

/// Planar gambler's ruin: probability that Brownian motion from radius `rho`
/// hits the circle of radius `r` before the circle of radius `R`:
/// `log(R/rho) / log(R/r)`.
pub fn annulus_hit_prob(rho: f64, r: f64, big_r: f64) -> Result<f64> {
    if !(0.0 < r && r <= rho && rho <= big_r) {
        return Err(Error::domain("rho", format!("need 0 < r <= rho <= R, got r={r} rho={rho} R={big_r}")));
    }
    if r == big_r {
        return Err(Error::domain("r", "degenerate annulus r = R".to_string()));
    }
    Ok((big_r / rho).ln() / (big_r / r).ln())
}

/// One planar Euler path from `(rho, 0)` run until it exits the annulus;
/// true if the inner circle is hit first. Monte Carlo cross-check companion
/// of [`annulus_hit_prob`].
pub fn annulus_exit_sample(rho: f64, r: f64, big_r: f64, dt: f64, rng: &mut Xoshiro256pp) -> bool {
    let sigma = dt.sqrt();
    let (mut x, mut y) = (rho, 0.0);
    loop {
        x += sigma * rng.normal();
        y += sigma * rng.normal();
        let d2 = x * x + y * y;
        if d2 <= r * r {
            return true;
        }
        if d2 >= big_r * big_r {
            return false;
        }
    }
}
