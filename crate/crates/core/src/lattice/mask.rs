//! Bit-packed visit mask over a square torus and the exact wrap-aware
//! largest-empty-disk query.

/// Occupancy grid over the `side x side` torus with a live unvisited count.
#[derive(Clone, Debug)]
pub struct VisitMask {
    pub side: usize,
    words: Vec<u64>,
    unvisited: usize,
}

impl VisitMask {
    pub fn new(side: usize) -> Self {
        assert!(side >= 1);
        let nbits = side * side;
        VisitMask { side, words: vec![0u64; nbits.div_ceil(64)], unvisited: nbits }
    }

    #[inline]
    fn bit(&self, row: usize, col: usize) -> (usize, u64) {
        let idx = row * self.side + col;
        (idx >> 6, 1u64 << (idx & 63))
    }

    #[inline]
    pub fn is_visited(&self, row: usize, col: usize) -> bool {
        let (w, m) = self.bit(row, col);
        self.words[w] & m != 0
    }

    /// Mark a site; returns true if it was unvisited. The unvisited count is
    /// monotone non-increasing under marking.
    #[inline]
    pub fn visit(&mut self, row: usize, col: usize) -> bool {
        let (w, m) = self.bit(row, col);
        if self.words[w] & m == 0 {
            self.words[w] |= m;
            self.unvisited -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn unvisited_count(&self) -> usize {
        self.unvisited
    }

    pub fn visited_sites(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.side {
            for c in 0..self.side {
                if self.is_visited(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }
}

const INF: f64 = f64::INFINITY;

/// 1D squared-distance transform (lower envelope of parabolas). Entries with
/// `f = INF` contribute no parabola; an all-INF line stays INF.
fn dt_1d(f: &[f64], d: &mut [f64]) {
    let n = f.len();
    let mut v: Vec<usize> = Vec::with_capacity(n);
    let mut z = vec![0.0f64; n + 1];
    for q in 0..n {
        if f[q] == INF {
            continue;
        }
        if v.is_empty() {
            v.push(q);
            z[0] = -INF;
            z[1] = INF;
            continue;
        }
        loop {
            let k = v.len() - 1;
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                v.pop();
                if v.is_empty() {
                    v.push(q);
                    z[0] = -INF;
                    z[1] = INF;
                    break;
                }
            } else {
                v.push(q);
                z[v.len() - 1] = s;
                z[v.len()] = INF;
                break;
            }
        }
    }
    if v.is_empty() {
        for slot in d.iter_mut() {
            *slot = INF;
        }
        return;
    }
    let mut k = 0usize;
    for (q, slot) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        *slot = dq * dq + f[p];
    }
}

/// Exact torus squared Euclidean distance to the nearest visited site for
/// every site, via a two-pass transform over a 3x3 tiling of the mask.
/// Returns `None` when nothing is visited.
pub fn torus_distance_sq(mask: &VisitMask) -> Option<Vec<f64>> {
    let n = mask.side;
    if mask.unvisited_count() == n * n {
        return None;
    }
    let m = 3 * n;
    // column pass on the tiled grid
    let mut col_dt = vec![INF; m * m];
    let mut f = vec![INF; m];
    let mut d = vec![INF; m];
    for j in 0..m {
        for i in 0..m {
            f[i] = if mask.is_visited(i % n, j % n) { 0.0 } else { INF };
        }
        dt_1d(&f, &mut d);
        for i in 0..m {
            col_dt[i * m + j] = d[i];
        }
    }
    // row pass
    let mut full = vec![INF; m * m];
    for i in 0..m {
        dt_1d(&col_dt[i * m..(i + 1) * m], &mut d);
        full[i * m..(i + 1) * m].copy_from_slice(&d);
    }
    // central tile
    let mut out = vec![INF; n * n];
    for r in 0..n {
        for c in 0..n {
            out[r * n + c] = full[(r + n) * m + (c + n)];
        }
    }
    Some(out)
}

/// Center (lex-smallest among maximizers) and radius of the largest disk
/// containing no visited site, measured site-to-site with torus wrap. An
/// all-unvisited mask returns the half-diameter `side / sqrt(2)` at (0, 0).
pub fn largest_empty_disk(mask: &VisitMask) -> ((usize, usize), f64) {
    let n = mask.side;
    match torus_distance_sq(mask) {
        None => ((0, 0), n as f64 / 2.0f64.sqrt()),
        Some(d2) => {
            let mut best = (0usize, 0usize);
            let mut best_d2 = -1.0;
            for r in 0..n {
                for c in 0..n {
                    let v = d2[r * n + c];
                    if v > best_d2 {
                        best_d2 = v;
                        best = (r, c);
                    }
                }
            }
            (best, best_d2.sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(mask: &VisitMask) -> ((usize, usize), f64) {
        let n = mask.side as i64;
        let visited = mask.visited_sites();
        if visited.is_empty() {
            return ((0, 0), mask.side as f64 / 2.0f64.sqrt());
        }
        let mut best = (0usize, 0usize);
        let mut best_d2 = -1i64;
        for r in 0..mask.side {
            for c in 0..mask.side {
                let mut min_d2 = i64::MAX;
                for &(vr, vc) in &visited {
                    let mut dr = (r as i64 - vr as i64).abs() % n;
                    let mut dc = (c as i64 - vc as i64).abs() % n;
                    dr = dr.min(n - dr);
                    dc = dc.min(n - dc);
                    min_d2 = min_d2.min(dr * dr + dc * dc);
                }
                if min_d2 > best_d2 {
                    best_d2 = min_d2;
                    best = (r, c);
                }
            }
        }
        (best, (best_d2 as f64).sqrt())
    }

    #[test]
    fn mask_counts() {
        let mut m = VisitMask::new(4);
        assert_eq!(m.unvisited_count(), 16);
        assert!(m.visit(1, 2));
        assert!(!m.visit(1, 2));
        assert_eq!(m.unvisited_count(), 15);
        assert!(m.is_visited(1, 2));
    }

    #[test]
    fn fully_visited_radius_zero() {
        let mut m = VisitMask::new(5);
        for r in 0..5 {
            for c in 0..5 {
                m.visit(r, c);
            }
        }
        let (_, radius) = largest_empty_disk(&m);
        assert_eq!(radius, 0.0);
    }

    #[test]
    fn empty_mask_half_diameter() {
        let m = VisitMask::new(8);
        let (center, radius) = largest_empty_disk(&m);
        assert_eq!(center, (0, 0));
        assert!((radius - 8.0 / 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_site_antipode() {
        let n = 16;
        let mut m = VisitMask::new(n);
        m.visit(0, 0);
        let (center, radius) = largest_empty_disk(&m);
        assert_eq!(center, (n / 2, n / 2));
        assert!((radius - n as f64 / 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_fixed_cases() {
        for (n, sites) in [
            (6usize, vec![(0usize, 0usize), (3, 4)]),
            (9, vec![(1, 1), (7, 2), (4, 8)]),
            (12, vec![(0, 11), (6, 6), (11, 0), (3, 3), (9, 9)]),
        ] {
            let mut m = VisitMask::new(n);
            for (r, c) in sites {
                m.visit(r, c);
            }
            let (fast_c, fast_r) = largest_empty_disk(&m);
            let (brute_c, brute_r) = brute_force(&m);
            assert!((fast_r - brute_r).abs() < 1e-9, "n={n}");
            assert_eq!(fast_c, brute_c, "n={n}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_brute_force_random(
            n in 2usize..=32,
            seed in any::<u64>(),
            density in 1usize..=40,
        ) {
            let mut rng = crate::rng::Xoshiro256pp::from_seed(seed);
            use crate::rng::RandomSource;
            let mut m = VisitMask::new(n);
            let count = 1 + (density * n * n) / 100;
            for _ in 0..count {
                let r = (rng.next_u64() % n as u64) as usize;
                let c = (rng.next_u64() % n as u64) as usize;
                m.visit(r, c);
            }
            let (fast_c, fast_r) = largest_empty_disk(&m);
            let (brute_c, brute_r) = brute_force(&m);
            prop_assert!((fast_r - brute_r).abs() < 1e-9);
            prop_assert_eq!(fast_c, brute_c);
        }
    }
}
