//! Simple-random-walk simulation on the discrete torus, the plane, and
//! general planar lattices: cover times, partial-cover geometry, and
//! excursion-count measurement.

mod graph;
mod mask;
mod plane;
mod torus;

pub use graph::{build_lattice_disk, cover_time_lattice, LatticeDisk};
pub use mask::{largest_empty_disk, torus_distance_sq, VisitMask};
pub use plane::{disk_cover_z2, min_cover_walk_d1, DiskCoverResult};
pub use torus::{
    cover_time_torus, exact_small_cover, radius_at_fraction, srw_step, time_to_uncovered_radius,
    CoverResult,
};

use serde::{Deserialize, Serialize};

/// Which lattice a walk lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    SquareTorus,
    SquarePlane,
    Triangular,
    Honeycomb,
}

/// Lattice descriptor: `size` is the torus side for the square torus and a
/// default disk radius for the planar kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub size: u32,
}

/// Lattice coordinate; serializes as a `(row, col)` integer pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}
