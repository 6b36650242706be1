//! Cover times of finite disk-shaped pieces of general planar lattices.
//!
//! A lattice piece `L_rho = L intersect D(0, rho)` is materialized as an
//! explicit graph in the lattice's Euclidean embedding; degree and cell area
//! come from the geometry, not from naming conventions (coordination number
//! 6 for the triangular lattice, 3 for the honeycomb). The per-step
//! covariance of the uniform nearest-neighbor walk is `I/2` for all three
//! unit-bond lattices here, so the intrinsic constant reduces to
//! `C_L = A / pi` with `A` the area per vertex.

use super::{LatticeKind, LatticeSpec};
use crate::error::{Error, Result};
use crate::rng::{RandomSource, Xoshiro256pp};
use std::collections::HashMap;

/// Finite lattice disk as an adjacency graph.
pub struct LatticeDisk {
    pub kind: LatticeKind,
    pub rho: f64,
    pub positions: Vec<(f64, f64)>,
    pub adjacency: Vec<Vec<u32>>,
    pub start: u32,
}

impl LatticeDisk {
    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    /// Empirical area per vertex `pi rho^2 / N_rho`.
    pub fn area_per_vertex(&self) -> f64 {
        std::f64::consts::PI * self.rho * self.rho / self.vertex_count() as f64
    }
}

const SQRT3: f64 = 1.732050807568877293;

fn enumerate_sites(kind: LatticeKind, rho: f64) -> Vec<((i64, i64, u8), (f64, f64))> {
    let mut out = Vec::new();
    let bound = (rho + 3.0).ceil() as i64;
    match kind {
        LatticeKind::SquareTorus | LatticeKind::SquarePlane => {
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let p = (a as f64, b as f64);
                    if p.0 * p.0 + p.1 * p.1 < rho * rho {
                        out.push(((a, b, 0), p));
                    }
                }
            }
        }
        LatticeKind::Triangular => {
            // axial coordinates, unit bonds: (a, b) -> a (1, 0) + b (1/2, sqrt3/2)
            for a in -2 * bound..=2 * bound {
                for b in -2 * bound..=2 * bound {
                    let p = (a as f64 + 0.5 * b as f64, SQRT3 / 2.0 * b as f64);
                    if p.0 * p.0 + p.1 * p.1 < rho * rho {
                        out.push(((a, b, 0), p));
                    }
                }
            }
        }
        LatticeKind::Honeycomb => {
            // Bravais cell (sqrt3, 0), (sqrt3/2, 3/2) with a two-site basis;
            // unit bonds, coordination number 3
            for a in -2 * bound..=2 * bound {
                for b in -2 * bound..=2 * bound {
                    let base = (SQRT3 * a as f64 + SQRT3 / 2.0 * b as f64, 1.5 * b as f64);
                    for s in 0u8..2 {
                        let p = if s == 0 { base } else { (base.0 + SQRT3 / 2.0, base.1 + 0.5) };
                        if p.0 * p.0 + p.1 * p.1 < rho * rho {
                            out.push(((a, b, s), p));
                        }
                    }
                }
            }
        }
    }
    out
}

fn neighbor_keys(kind: LatticeKind, key: (i64, i64, u8)) -> Vec<(i64, i64, u8)> {
    let (a, b, s) = key;
    match kind {
        LatticeKind::SquareTorus | LatticeKind::SquarePlane => {
            vec![(a + 1, b, 0), (a - 1, b, 0), (a, b + 1, 0), (a, b - 1, 0)]
        }
        LatticeKind::Triangular => vec![
            (a + 1, b, 0),
            (a - 1, b, 0),
            (a, b + 1, 0),
            (a, b - 1, 0),
            (a + 1, b - 1, 0),
            (a - 1, b + 1, 0),
        ],
        LatticeKind::Honeycomb => {
            if s == 0 {
                vec![(a, b, 1), (a - 1, b, 1), (a, b - 1, 1)]
            } else {
                vec![(a, b, 0), (a + 1, b, 0), (a, b + 1, 0)]
            }
        }
    }
}

/// Build `L_rho`; rejects empty or disconnected pieces.
pub fn build_lattice_disk(kind: LatticeKind, rho: f64) -> Result<LatticeDisk> {
    if !(rho > 0.0) {
        return Err(Error::domain("rho", format!("need rho > 0, got {rho}")));
    }
    let sites = enumerate_sites(kind, rho);
    if sites.is_empty() {
        return Err(Error::domain("rho", format!("L_rho is empty at rho = {rho}")));
    }
    let index: HashMap<(i64, i64, u8), u32> =
        sites.iter().enumerate().map(|(i, (k, _))| (*k, i as u32)).collect();
    let mut adjacency = vec![Vec::new(); sites.len()];
    for (i, (key, _)) in sites.iter().enumerate() {
        for nb in neighbor_keys(kind, *key) {
            if let Some(&j) = index.get(&nb) {
                adjacency[i].push(j);
            }
        }
    }
    // start at the site nearest the origin
    let start = sites
        .iter()
        .enumerate()
        .min_by(|(_, (_, p)), (_, (_, q))| {
            (p.0 * p.0 + p.1 * p.1).total_cmp(&(q.0 * q.0 + q.1 * q.1))
        })
        .map(|(i, _)| i as u32)
        .unwrap();
    // connectivity check (isolated vertices count as disconnection)
    let mut seen = vec![false; sites.len()];
    let mut queue = vec![start];
    seen[start as usize] = true;
    let mut visited = 1usize;
    while let Some(v) = queue.pop() {
        for &w in &adjacency[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                visited += 1;
                queue.push(w);
            }
        }
    }
    if visited != sites.len() {
        return Err(Error::domain("rho", format!("L_rho disconnected at rho = {rho} ({visited} of {} reachable)", sites.len())));
    }
    let positions = sites.into_iter().map(|(_, p)| p).collect();
    Ok(LatticeDisk { kind, rho, positions, adjacency, start })
}

/// Cover time of `L_rho` by simple random walk started at the site nearest
/// the origin. A single-vertex piece is covered at step 0.
pub fn cover_time_lattice(lattice: &LatticeSpec, rho: f64, seed: u64) -> Result<u64> {
    let disk = build_lattice_disk(lattice.kind, rho)?;
    let n = disk.vertex_count();
    let mut rng = Xoshiro256pp::from_seed(seed);
    let mut visited = vec![false; n];
    let mut remaining = n;
    let mut at = disk.start as usize;
    visited[at] = true;
    remaining -= 1;
    let mut steps = 0u64;
    while remaining > 0 {
        let nbs = &disk.adjacency[at];
        at = nbs[(rng.next_u64() % nbs.len() as u64) as usize] as usize;
        steps += 1;
        if !visited[at] {
            visited[at] = true;
            remaining -= 1;
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predict::lattice_constant;
    use crate::rng::RandomSource;

    const SQUARE: LatticeSpec = LatticeSpec { kind: LatticeKind::SquarePlane, size: 1 };

    #[test]
    fn single_vertex_covers_at_zero() {
        let spec = SQUARE;
        assert_eq!(cover_time_lattice(&spec, 0.5, 1).unwrap(), 0);
    }

    #[test]
    fn vertex_count_tracks_disk_area() {
        // |N_rho - pi rho^2| <= c rho for the square lattice
        for rho in [10.0f64, 20.0, 40.0] {
            let disk = build_lattice_disk(LatticeKind::SquarePlane, rho).unwrap();
            let err = (disk.vertex_count() as f64 - std::f64::consts::PI * rho * rho).abs();
            assert!(err <= 10.0 * rho, "rho={rho}: {err}");
        }
    }

    #[test]
    fn degrees_come_from_geometry() {
        let tri = build_lattice_disk(LatticeKind::Triangular, 12.0).unwrap();
        let hex = build_lattice_disk(LatticeKind::Honeycomb, 12.0).unwrap();
        let inner_degree = |d: &LatticeDisk, full: usize| {
            d.positions
                .iter()
                .zip(&d.adjacency)
                .filter(|(p, _)| (p.0 * p.0 + p.1 * p.1).sqrt() < d.rho - 2.0)
                .all(|(_, a)| a.len() == full)
        };
        assert!(inner_degree(&tri, 6), "triangular coordination number is 6");
        assert!(inner_degree(&hex, 3), "honeycomb coordination number is 3");
        // area per vertex approaches (d/4) tan(pi/d) under the standard
        // naming: d=6 triangular ~ sqrt3/2, d=3 honeycomb ~ 3 sqrt3/4
        let a_tri = tri.area_per_vertex();
        let a_hex = hex.area_per_vertex();
        assert!((a_tri - SQRT3 / 2.0).abs() < 0.12, "{a_tri}");
        assert!((a_hex - 3.0 * SQRT3 / 4.0).abs() < 0.2, "{a_hex}");
    }

    #[test]
    fn square_cover_ratio_approaches_intrinsic_constant() {
        // steps / (N (ln N)^2) converges to C_L = 1/pi; at desk scale the
        // ratio sits above the constant (boundary slow-down of the disk
        // piece) and drifts down toward it: measured ratio/C_L of 1.69,
        // 1.57, 1.44 at rho = 15, 30, 60.
        let c_l = lattice_constant(1.0, [[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let mut ratios = Vec::new();
        for rho in [15.0f64, 30.0, 60.0] {
            let disk = build_lattice_disk(LatticeKind::SquarePlane, rho).unwrap();
            let n = disk.vertex_count() as f64;
            let reps = 100u64;
            let mut sum = 0.0;
            for rep in 0..reps {
                let s = crate::rng::substream_seed(0x5AFE, rep);
                sum += cover_time_lattice(&SQUARE, rho, s).unwrap() as f64;
            }
            let mean = sum / reps as f64;
            ratios.push(mean / (n * n.ln() * n.ln()));
        }
        for r in &ratios {
            assert!(*r > c_l && *r < 2.2 * c_l, "{ratios:?} vs C_L {c_l}");
        }
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2], "not converging down: {ratios:?}");
    }

    #[test]
    fn nonsquare_lattices_share_the_normalization() {
        // same N (ln N)^2 scaling with the lattice's own C_L = A / pi
        for kind in [LatticeKind::Triangular, LatticeKind::Honeycomb] {
            let spec = LatticeSpec { kind, size: 1 };
            let disk = build_lattice_disk(kind, 15.0).unwrap();
            let n = disk.vertex_count() as f64;
            let c_l = lattice_constant(disk.area_per_vertex(), [[0.5, 0.0], [0.0, 0.5]]).unwrap();
            let reps = 20u64;
            let mut sum = 0.0;
            for rep in 0..reps {
                sum += cover_time_lattice(&spec, 15.0, crate::rng::substream_seed(17, rep)).unwrap() as f64;
            }
            let ratio = sum / reps as f64 / (n * n.ln() * n.ln());
            assert!(ratio > 0.8 * c_l && ratio < 2.5 * c_l, "{kind:?}: ratio {ratio} vs C_L {c_l}");
        }
    }

    #[test]
    fn walks_stay_on_the_graph() {
        let disk = build_lattice_disk(LatticeKind::Honeycomb, 8.0).unwrap();
        let mut rng = Xoshiro256pp::from_seed(4);
        let mut at = disk.start as usize;
        for _ in 0..10_000 {
            let nbs = &disk.adjacency[at];
            assert!(!nbs.is_empty());
            at = nbs[(rng.next_u64() % nbs.len() as u64) as usize] as usize;
            let p = disk.positions[at];
            assert!((p.0 * p.0 + p.1 * p.1).sqrt() < disk.rho);
        }
    }
}
