//! Torus Green's function by spectral construction, hitting-time bands, and
//! the annulus Poisson kernel with its Harnack-type ratio bound.
//!
//! The construction: `h(z) = -(1/2pi) phi(|z|) log|z|` with a smooth bump
//! `phi` (1 on `[0, r1]`, 0 on `[r2, inf)`); the pointwise Laplacian of `h`
//! extends smoothly with `H = lap h - 1` C-infinity on the torus; dividing
//! the Fourier coefficients of `H` by `4 pi^2 (j^2 + k^2)` yields `F` with
//! `lap F = -H`, and `g = h + F` solves `lap g = 1` away from the origin
//! while `g(z) + (1/2pi) log|z|` extends continuously.
//!
//! Evaluation splits `g` into the analytic singular part `h` plus bilinear
//! interpolation of the smooth grid part `F`; the stored grid keeps `g`
//! itself (the origin sample holds the regular part, see [`GreenTable`]).

use crate::error::{Error, Result};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

const TWO_PI: f64 = 2.0 * PI;

/// Wrap a coordinate to the fundamental domain `[-1/2, 1/2)`.
#[inline]
pub fn wrap_unit(x: f64) -> f64 {
    let y = (x + 0.5).rem_euclid(1.0) - 0.5;
    if y >= 0.5 {
        -0.5
    } else {
        y
    }
}

/// Torus distance between points of the unit torus.
#[inline]
pub fn torus_dist(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let dx = wrap_unit(ax - bx);
    let dy = wrap_unit(ay - by);
    (dx * dx + dy * dy).sqrt()
}

// ---------------------------------------------------------------------------
// smooth bump
// ---------------------------------------------------------------------------

/// C-infinity bridge B(u) = s(u) / (s(u) + s(1-u)), s(t) = exp(-1/t),
/// together with first and second derivatives.
fn bridge(u: f64) -> (f64, f64, f64) {
    // B(u) = 1 / (1 + e^{w}) with w = 1/u - 1/(1-u)
    let w = 1.0 / u - 1.0 / (1.0 - u);
    if w > 700.0 {
        return (0.0, 0.0, 0.0);
    }
    if w < -700.0 {
        return (1.0, 0.0, 0.0);
    }
    let e = w.exp();
    let b = 1.0 / (1.0 + e);
    let b1m = b * (1.0 - b);
    let w1 = -1.0 / (u * u) - 1.0 / ((1.0 - u) * (1.0 - u));
    let w2 = 2.0 / (u * u * u) - 2.0 / ((1.0 - u) * (1.0 - u) * (1.0 - u));
    let db = -b1m * w1;
    let ddb = -(db * (1.0 - 2.0 * b) * w1 + b1m * w2);
    (b, db, ddb)
}

/// Bump value and radial derivatives: 1 on `[0, r1]`, 0 on `[r2, inf)`.
pub fn bump(rho: f64, r1: f64, r2: f64) -> (f64, f64, f64) {
    if rho <= r1 {
        return (1.0, 0.0, 0.0);
    }
    if rho >= r2 {
        return (0.0, 0.0, 0.0);
    }
    let q = 1.0 / (r2 - r1);
    let u = (r2 - rho) * q;
    let (b, db, ddb) = bridge(u);
    (b, -db * q, ddb * q * q)
}

/// Singular part `h(z) = -(1/2pi) phi(|z|) log|z|` (diverges at the origin).
pub fn h_singular(r: f64, r1: f64, r2: f64) -> f64 {
    if r >= r2 {
        return 0.0;
    }
    let (phi, _, _) = bump(r, r1, r2);
    -phi * r.ln() / TWO_PI
}

/// Pointwise radial Laplacian of `h` for r > 0:
/// `lap h = -(1/2pi) (phi'' log r + (2 + log r) phi' / r)`; identically 0
/// inside the bump plateau, so `H = lap h - 1` extends smoothly by -1 at 0.
pub fn lap_h(r: f64, r1: f64, r2: f64) -> f64 {
    if r <= r1 || r >= r2 {
        return 0.0;
    }
    let (_, dphi, ddphi) = bump(r, r1, r2);
    -(ddphi * r.ln() + (2.0 + r.ln()) * dphi / r) / TWO_PI
}

// ---------------------------------------------------------------------------
// spectral build
// ---------------------------------------------------------------------------

/// Sampled torus Green's function.
///
/// `g_values` is row-major over the grid `z = (i/N, j/N)` wrapped to the
/// fundamental domain; the origin sample stores the regular part
/// `F(0) = lim_{z->0} (g(z) + (1/2pi) log|z|)` since `g` itself diverges
/// there. `spectrum` holds the real Fourier coefficients of `H` in the
/// exponential basis (index-signed frequencies), so `spectrum[0]` is
/// `a_{0,0}`, forced to 0 by the construction.
pub struct GreenTable {
    pub grid_side: usize,
    pub cutoff: (f64, f64),
    pub g_values: Vec<f64>,
    pub f_values: Vec<f64>,
    pub spectrum: Vec<f64>,
}

fn fft2d(data: &mut [Complex<f64>], n: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = data[i * n + j];
        }
        fft.process(&mut col);
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
}

#[inline]
fn signed_freq(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Build the sampled Green's function. `grid_side` must be a power of two
/// `>= 256`; the bump cutoff must satisfy `0 < r1 < r2 < 1/2`.
pub fn build_green(grid_side: usize, cutoff: (f64, f64)) -> Result<GreenTable> {
    if grid_side < 256 || !grid_side.is_power_of_two() {
        return Err(Error::domain("grid_side", format!("need a power of two >= 256, got {grid_side}")));
    }
    let (r1, r2) = cutoff;
    if !(0.0 < r1 && r1 < r2 && r2 < 0.5) {
        return Err(Error::domain("cutoff", format!("need 0 < r1 < r2 < 1/2, got ({r1}, {r2})")));
    }
    let n = grid_side;
    let mut hgrid = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        let z1 = wrap_unit(i as f64 / n as f64);
        for j in 0..n {
            let z2 = wrap_unit(j as f64 / n as f64);
            let r = (z1 * z1 + z2 * z2).sqrt();
            let val = if r == 0.0 { -1.0 } else { lap_h(r, r1, r2) - 1.0 };
            hgrid[i * n + j] = Complex::new(val, 0.0);
        }
    }
    fft2d(&mut hgrid, n, false);
    let norm = 1.0 / (n * n) as f64;
    let mut spectrum = Vec::with_capacity(n * n);
    let mut fhat = vec![Complex::new(0.0, 0.0); n * n];
    let mut max_imag: f64 = 0.0;
    for i in 0..n {
        let fi = signed_freq(i, n) as f64;
        for j in 0..n {
            let fj = signed_freq(j, n) as f64;
            let c = hgrid[i * n + j] * norm;
            max_imag = max_imag.max(c.im.abs());
            spectrum.push(c.re);
            if i == 0 && j == 0 {
                fhat[0] = Complex::new(0.0, 0.0);
            } else {
                let denom = 4.0 * PI * PI * (fi * fi + fj * fj);
                fhat[i * n + j] = c / denom;
            }
        }
    }
    debug_assert!(max_imag < 1e-8, "H should be even: max imag coefficient {max_imag}");
    fft2d(&mut fhat, n, true);
    let mut f_values = Vec::with_capacity(n * n);
    let mut g_values = Vec::with_capacity(n * n);
    for i in 0..n {
        let z1 = wrap_unit(i as f64 / n as f64);
        for j in 0..n {
            let z2 = wrap_unit(j as f64 / n as f64);
            let f = fhat[i * n + j].re;
            f_values.push(f);
            let r = (z1 * z1 + z2 * z2).sqrt();
            // the origin keeps the regular part; h diverges there
            let g = if r == 0.0 { f } else { h_singular(r, r1, r2) + f };
            g_values.push(g);
        }
    }
    Ok(GreenTable { grid_side: n, cutoff, g_values, f_values, spectrum })
}

impl GreenTable {
    /// `a_{0,0}`: the mean of `H`, zero up to quadrature error.
    pub fn a00(&self) -> f64 {
        self.spectrum[0]
    }

    /// Bilinear interpolation of the smooth part `F` at a wrapped point.
    fn interp_f(&self, zx: f64, zy: f64) -> f64 {
        let n = self.grid_side;
        let fx = (zx.rem_euclid(1.0)) * n as f64;
        let fy = (zy.rem_euclid(1.0)) * n as f64;
        let i0 = fx.floor() as usize % n;
        let j0 = fy.floor() as usize % n;
        let i1 = (i0 + 1) % n;
        let j1 = (j0 + 1) % n;
        let tx = fx - fx.floor();
        let ty = fy - fy.floor();
        let f = |i: usize, j: usize| self.f_values[i * n + j];
        (1.0 - tx) * (1.0 - ty) * f(i0, j0)
            + tx * (1.0 - ty) * f(i1, j0)
            + (1.0 - tx) * ty * f(i0, j1)
            + tx * ty * f(i1, j1)
    }

    /// `g` at a wrapped difference vector: analytic singular part plus
    /// interpolated smooth part.
    pub fn g_at(&self, dx: f64, dy: f64) -> f64 {
        let (r1, r2) = self.cutoff;
        let wx = wrap_unit(dx);
        let wy = wrap_unit(dy);
        let r = (wx * wx + wy * wy).sqrt();
        h_singular(r, r1, r2) + self.interp_f(wx, wy)
    }

    /// Persist as flat binary: `grid_side: u64 LE`, `r1: f64 LE`,
    /// `r2: f64 LE`, then row-major g values as f64 LE.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        out.write_all(&(self.grid_side as u64).to_le_bytes())?;
        out.write_all(&self.cutoff.0.to_le_bytes())?;
        out.write_all(&self.cutoff.1.to_le_bytes())?;
        for v in &self.g_values {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Load a persisted table. The smooth part is recovered exactly as
    /// `F = g - h` (the origin sample already stores `F`); the spectrum is
    /// re-derived from the analytic `H`, which costs one forward transform.
    pub fn load(path: &Path) -> Result<GreenTable> {
        let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut u8buf = [0u8; 8];
        file.read_exact(&mut u8buf)?;
        let n = u64::from_le_bytes(u8buf) as usize;
        file.read_exact(&mut u8buf)?;
        let r1 = f64::from_le_bytes(u8buf);
        file.read_exact(&mut u8buf)?;
        let r2 = f64::from_le_bytes(u8buf);
        if n < 256 || !n.is_power_of_two() || !(0.0 < r1 && r1 < r2 && r2 < 0.5) {
            return Err(Error::domain("file", "corrupt green table header".to_string()));
        }
        let mut g_values = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            file.read_exact(&mut u8buf)?;
            g_values.push(f64::from_le_bytes(u8buf));
        }
        let mut f_values = Vec::with_capacity(n * n);
        for i in 0..n {
            let z1 = wrap_unit(i as f64 / n as f64);
            for j in 0..n {
                let z2 = wrap_unit(j as f64 / n as f64);
                let r = (z1 * z1 + z2 * z2).sqrt();
                let g = g_values[i * n + j];
                f_values.push(if r == 0.0 { g } else { g - h_singular(r, r1, r2) });
            }
        }
        let mut hgrid = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            let z1 = wrap_unit(i as f64 / n as f64);
            for j in 0..n {
                let z2 = wrap_unit(j as f64 / n as f64);
                let r = (z1 * z1 + z2 * z2).sqrt();
                let val = if r == 0.0 { -1.0 } else { lap_h(r, r1, r2) - 1.0 };
                hgrid[i * n + j] = Complex::new(val, 0.0);
            }
        }
        fft2d(&mut hgrid, n, false);
        let norm = 1.0 / (n * n) as f64;
        let spectrum = hgrid.iter().map(|c| c.re * norm).collect();
        Ok(GreenTable { grid_side: n, cutoff: (r1, r2), g_values, f_values, spectrum })
    }
}

/// `G_x(y) = g((x - y) wrapped)`; rejects the diagonal where g diverges.
pub fn green_eval(table: &GreenTable, x: (f64, f64), y: (f64, f64)) -> Result<f64> {
    let dx = wrap_unit(x.0 - y.0);
    let dy = wrap_unit(x.1 - y.1);
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::domain("y", "green_eval is singular at x = y".to_string()));
    }
    Ok(table.g_at(dx, dy))
}

/// Predicted band for the expected hitting time of `D(x, r)` from the circle
/// of radius `R`: `((1 -/+ eta) / pi) log(R/r)`.
pub fn hit_time_band(big_r: f64, r: f64, eta: f64) -> Result<(f64, f64)> {
    if !(0.0 < r && 2.0 * r <= big_r && big_r < 0.5) {
        return Err(Error::domain("r", format!("need 0 < 2r <= R < 1/2, got r={r} R={big_r}")));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::domain("eta", format!("need 0 <= eta < 1, got {eta}")));
    }
    let v = (big_r / r).ln() / PI;
    Ok(((1.0 - eta) * v, (1.0 + eta) * v))
}

// ---------------------------------------------------------------------------
// annulus Poisson kernel
// ---------------------------------------------------------------------------

/// Annulus `r0 < |x| < 1` with a series truncation order.
#[derive(Clone, Copy, Debug)]
pub struct AnnulusSpec {
    pub r0: f64,
    pub terms: u32,
}

impl AnnulusSpec {
    pub fn new(r0: f64, terms: u32) -> Result<Self> {
        if !(0.0 < r0 && r0 < 1.0) {
            return Err(Error::domain("r0", format!("need 0 < r0 < 1, got {r0}")));
        }
        if terms == 0 {
            return Err(Error::domain("terms", "need at least one term".to_string()));
        }
        Ok(AnnulusSpec { r0, terms })
    }

    /// Harmonic inner-exit probability `c_0(x) = log(1/|x|) / log(1/r0)`.
    pub fn c0(&self, abs_x: f64) -> f64 {
        (1.0 / abs_x).ln() / (1.0 / self.r0).ln()
    }
}

/// Truncated zonal-harmonic series for the Poisson kernel of the annulus at
/// its inner boundary:
/// `P_A(x, u) = c_0(x) + sum_m c_m(x) Z_m(x, e^{i phi_u})` with
/// `c_m = |x|^{-m} (r0/|x|)^m (1 - |x|^{2m}) / (1 - r0^{2m})` and
/// `Z_m = 2 |x|^m cos(m (Arg x - phi_u))`.
pub fn annulus_poisson_kernel(spec: &AnnulusSpec, x: (f64, f64), phi_u: f64) -> Result<f64> {
    let abs_x = (x.0 * x.0 + x.1 * x.1).sqrt();
    if !(spec.r0 < abs_x && abs_x < 1.0) {
        return Err(Error::domain("x", format!("need r0 < |x| < 1, got |x| = {abs_x}")));
    }
    let arg_x = x.1.atan2(x.0);
    let mut sum = spec.c0(abs_x);
    let ratio = spec.r0 / abs_x;
    for m in 1..=spec.terms {
        let mf = m as f64;
        let cm_zm = 2.0
            * ratio.powf(mf)
            * (1.0 - abs_x.powf(2.0 * mf))
            / (1.0 - spec.r0.powf(2.0 * mf))
            * (mf * (arg_x - phi_u)).cos();
        sum += cm_zm;
    }
    Ok(sum)
}

/// Result of a Harnack-type ratio sweep.
#[derive(Clone, Copy, Debug)]
pub struct HarnackReport {
    pub pass: bool,
    /// Largest observed sup/inf kernel ratio over the samples.
    pub worst_ratio: f64,
    /// The bound at the sample attaining the worst margin.
    pub bound_at_worst: f64,
}

/// Check `sup_u K(z,u) <= (1 + 40 r log(2r) / (|z| log(2|z|))) inf_u K(z,u)`
/// where `K(z,u) = P_A(2z, 2u)` with `r0 = 2r` (Brownian scaling of the
/// annulus `r < |z| < 1/2` to the unit annulus). Samples must satisfy
/// `10 r <= |z| < 1/20`.
pub fn harnack_ratio_check(r: f64, z_samples: &[(f64, f64)]) -> Result<HarnackReport> {
    const C: f64 = 10.0;
    let spec = AnnulusSpec::new(2.0 * r, 64)?;
    let grid = 1024usize;
    let mut pass = true;
    let mut worst_ratio: f64 = 1.0;
    let mut bound_at_worst = f64::INFINITY;
    for &z in z_samples {
        let abs_z = (z.0 * z.0 + z.1 * z.1).sqrt();
        if !(C * r <= abs_z && abs_z < 1.0 / (2.0 * C)) {
            return Err(Error::domain("z_samples", format!("|z| = {abs_z} outside [{}, {})", C * r, 1.0 / (2.0 * C))));
        }
        let x = (2.0 * z.0, 2.0 * z.1);
        // anchor the angular grid at Arg x: the grid then contains the true
        // extremes and the sweep is exactly rotation-invariant
        let arg_x = x.1.atan2(x.0);
        let mut sup = f64::NEG_INFINITY;
        let mut inf = f64::INFINITY;
        for g in 0..grid {
            let phi = arg_x + TWO_PI * g as f64 / grid as f64;
            let k = annulus_poisson_kernel(&spec, x, phi)?;
            sup = sup.max(k);
            inf = inf.min(k);
        }
        let ratio = sup / inf;
        let bound = 1.0 + 40.0 * r * (2.0 * r).ln() / (abs_z * (2.0 * abs_z).ln());
        if ratio > bound {
            pass = false;
        }
        if ratio > worst_ratio {
            worst_ratio = ratio;
            bound_at_worst = bound;
        }
    }
    Ok(HarnackReport { pass, worst_ratio, bound_at_worst })
}

/// Radon-Nikodym comparison bound between planar and toral hitting
/// distributions on the circle of radius `r` from radius `R`:
/// `1 + 40 r log(2r) / (R log(2R))` (both logarithms negative).
pub fn rn_derivative_bound(r: f64, big_r: f64) -> Result<f64> {
    const C: f64 = 10.0;
    if !(C * r <= big_r && big_r < 1.0 / (2.0 * C)) {
        return Err(Error::domain("R", format!("need {C} r <= R < {}, got r={r} R={big_r}", 1.0 / (2.0 * C))));
    }
    Ok(1.0 + 40.0 * r * (2.0 * r).ln() / (big_r * (2.0 * big_r).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape_and_derivatives() {
        let (r1, r2) = (0.15, 0.35);
        assert_eq!(bump(0.1, r1, r2).0, 1.0);
        assert_eq!(bump(0.4, r1, r2).0, 0.0);
        let (b, _, _) = bump(0.25, r1, r2);
        assert!(b > 0.0 && b < 1.0);
        // analytic derivatives against central differences
        let eps = 1e-6;
        for rho in [0.18, 0.22, 0.25, 0.3, 0.33] {
            let (_, d1, d2) = bump(rho, r1, r2);
            let fd1 = (bump(rho + eps, r1, r2).0 - bump(rho - eps, r1, r2).0) / (2.0 * eps);
            let fd2 = (bump(rho + eps, r1, r2).0 - 2.0 * bump(rho, r1, r2).0 + bump(rho - eps, r1, r2).0) / (eps * eps);
            assert!((d1 - fd1).abs() < 1e-4 * (1.0 + d1.abs()), "rho={rho}: {d1} vs {fd1}");
            assert!((d2 - fd2).abs() < 1e-2 * (1.0 + d2.abs()), "rho={rho}: {d2} vs {fd2}");
        }
    }

    #[test]
    fn lap_h_matches_radial_fd() {
        let (r1, r2) = (0.15, 0.35);
        let eps = 1e-5;
        let h = |r: f64| h_singular(r, r1, r2);
        for r in [0.2, 0.25, 0.3] {
            let d2 = (h(r + eps) - 2.0 * h(r) + h(r - eps)) / (eps * eps);
            let d1 = (h(r + eps) - h(r - eps)) / (2.0 * eps);
            let fd = d2 + d1 / r;
            let analytic = lap_h(r, r1, r2);
            assert!((fd - analytic).abs() < 1e-3 * (1.0 + analytic.abs()), "r={r}: {fd} vs {analytic}");
        }
    }

    #[test]
    fn build_green_basics_256() {
        let table = build_green(256, (0.15, 0.35)).unwrap();
        // a00 at modest grid: quadrature error only
        assert!(table.a00().abs() < 1e-6, "a00 = {}", table.a00());
        // evenness of the stored grid
        let n = table.grid_side;
        for (i, j) in [(3usize, 7usize), (100, 41), (200, 255), (17, 250)] {
            let a = table.g_values[i * n + j];
            let b = table.g_values[((n - i) % n) * n + ((n - j) % n)];
            assert!((a - b).abs() < 1e-9, "evenness at ({i},{j})");
        }
    }

    #[test]
    fn finite_difference_laplacian_away_from_origin_256() {
        // 4th-order stencil; at grid 256 only |z| > 0.1 is resolvable
        let table = build_green(256, (0.15, 0.35)).unwrap();
        let n = table.grid_side;
        let h = 1.0 / n as f64;
        let g = |i: i64, j: i64| {
            table.g_values[((i.rem_euclid(n as i64)) as usize) * n + (j.rem_euclid(n as i64)) as usize]
        };
        let mut worst: f64 = 0.0;
        for i in 0..n as i64 {
            let z1 = wrap_unit(i as f64 / n as f64);
            for j in 0..n as i64 {
                let z2 = wrap_unit(j as f64 / n as f64);
                if (z1 * z1 + z2 * z2).sqrt() <= 0.1 {
                    continue;
                }
                let axis = |f: &dyn Fn(i64) -> f64| {
                    (-f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) / (12.0 * h * h)
                };
                let lap = axis(&|d| g(i + d, j)) + axis(&|d| g(i, j + d));
                worst = worst.max((lap - 1.0).abs());
            }
        }
        assert!(worst < 1e-3, "max |lap g - 1| = {worst}");
    }

    #[test]
    fn green_eval_symmetry_translation_and_continuity() {
        let table = build_green(256, (0.15, 0.35)).unwrap();
        let x = (0.13, -0.21);
        let y = (-0.02, 0.4);
        let gxy = green_eval(&table, x, y).unwrap();
        let gyx = green_eval(&table, y, x).unwrap();
        assert!((gxy - gyx).abs() < 1e-6);
        // translation invariance
        let v = (0.37, -0.11);
        let shifted = green_eval(&table, (x.0 + v.0, x.1 + v.1), (y.0 + v.0, y.1 + v.1)).unwrap();
        assert!((gxy - shifted).abs() < 1e-6);
        // diagonal rejected
        assert!(green_eval(&table, x, x).is_err());
        // near-diagonal continuity: g + (1/2pi) log r varies little on
        // shrinking circles
        for r in [0.02, 0.01, 0.005] {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for k in 0..64 {
                let th = TWO_PI * k as f64 / 64.0;
                let g = table.g_at(r * th.cos(), r * th.sin());
                let reg = g + r.ln() / TWO_PI;
                lo = lo.min(reg);
                hi = hi.max(reg);
            }
            assert!(hi - lo < 1e-2, "r={r}: variation {}", hi - lo);
        }
    }

    #[test]
    fn save_load_roundtrip() {
        let table = build_green(256, (0.15, 0.35)).unwrap();
        let path = std::env::temp_dir().join("green_roundtrip_test.bin");
        table.save(&path).unwrap();
        let loaded = GreenTable::load(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(loaded.grid_side, table.grid_side);
        assert_eq!(loaded.cutoff, table.cutoff);
        assert_eq!(loaded.g_values, table.g_values);
        for (a, b) in loaded.f_values.iter().zip(&table.f_values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hit_time_band_values() {
        let r = 0.05;
        let (lo, hi) = hit_time_band(std::f64::consts::E * r, r, 0.0).unwrap();
        assert!((lo - 1.0 / PI).abs() < 1e-12);
        assert!((hi - 1.0 / PI).abs() < 1e-12);
        // width linear in eta
        let (lo1, hi1) = hit_time_band(0.2, 0.02, 0.1).unwrap();
        let (lo2, hi2) = hit_time_band(0.2, 0.02, 0.2).unwrap();
        assert!(((hi2 - lo2) - 2.0 * (hi1 - lo1)).abs() < 1e-12);
        assert!(hit_time_band(0.03, 0.02, 0.1).is_err());
    }

    #[test]
    fn kernel_angular_average_is_c0() {
        let spec = AnnulusSpec::new(0.1, 64).unwrap();
        for abs_x in [0.15, 0.1f64.sqrt(), 0.5, 0.9] {
            let x = (abs_x * 0.6f64.cos(), abs_x * 0.6f64.sin());
            let grid = 4096;
            let mut sum = 0.0;
            for g in 0..grid {
                sum += annulus_poisson_kernel(&spec, x, TWO_PI * g as f64 / grid as f64).unwrap();
            }
            let avg = sum / grid as f64;
            assert!((avg - spec.c0(abs_x)).abs() < 1e-10, "avg {avg} vs c0 {}", spec.c0(abs_x));
        }
        // logarithmic midpoint exits inward with probability 1/2
        assert!((spec.c0(0.1f64.sqrt()) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn kernel_envelope_and_truncation() {
        let r0 = 0.05;
        let spec64 = AnnulusSpec::new(r0, 64).unwrap();
        let spec128 = AnnulusSpec::new(r0, 128).unwrap();
        for abs_x in [0.12, 0.3, 0.7] {
            for ang in [0.0f64, 0.9, 2.2] {
                let x = (abs_x * ang.cos(), abs_x * ang.sin());
                for phi in [0.0, 1.0, 3.0, 5.5] {
                    let k = annulus_poisson_kernel(&spec64, x, phi).unwrap();
                    let c0 = spec64.c0(abs_x);
                    assert!((k - c0).abs() <= 2.0 * r0 / (abs_x - r0) + 1e-12);
                    assert!(k > 0.0, "kernel positive");
                    if abs_x >= 2.0 * r0 {
                        let k2 = annulus_poisson_kernel(&spec128, x, phi).unwrap();
                        assert!((k - k2).abs() < 1e-12, "truncation at |x|={abs_x}");
                    }
                }
            }
        }
        assert!(annulus_poisson_kernel(&spec64, (0.01, 0.0), 0.0).is_err());
    }

    #[test]
    fn kernel_harmonicity() {
        // 4th-order FD Laplacian in x of P_A(x, u) vanishes in the interior
        let spec = AnnulusSpec::new(0.1, 64).unwrap();
        let h = 1e-3;
        for (cx, cy) in [(0.4, 0.1), (0.25, -0.3), (-0.5, 0.2)] {
            let f = |x: f64, y: f64| annulus_poisson_kernel(&spec, (x, y), 0.7).unwrap();
            let axis = |g: &dyn Fn(f64) -> f64| {
                (-g(-2.0 * h) + 16.0 * g(-h) - 30.0 * g(0.0) + 16.0 * g(h) - g(2.0 * h)) / (12.0 * h * h)
            };
            let lap = axis(&|d| f(cx + d, cy)) + axis(&|d| f(cx, cy + d));
            assert!(lap.abs() < 1e-6, "lap P at ({cx},{cy}) = {lap}");
        }
    }

    #[test]
    fn harnack_bound_example() {
        // r = 0.001, |z| = 0.04: bound = 1 + 0.04 ln 0.002 / (0.04 ln 0.08)
        let bound = rn_derivative_bound(0.001, 0.04).unwrap();
        assert!((bound - 3.4605).abs() < 1e-3, "{bound}");
        let report = harnack_ratio_check(0.001, &[(0.04, 0.0), (0.02, 0.03)]).unwrap();
        assert!(report.pass, "worst {} vs bound {}", report.worst_ratio, report.bound_at_worst);
        // rotation invariance of the ratio, up to the angular grid
        let a = harnack_ratio_check(0.001, &[(0.04, 0.0)]).unwrap();
        let b = harnack_ratio_check(0.001, &[(0.04 * 0.5f64.cos(), 0.04 * 0.5f64.sin())]).unwrap();
        assert!((a.worst_ratio - b.worst_ratio).abs() < 1e-6);
        // ratio -> 1 as |z|/r grows
        let near = harnack_ratio_check(0.003, &[(0.03, 0.0)]).unwrap();
        let mid = harnack_ratio_check(0.0003, &[(0.03, 0.0)]).unwrap();
        let far = harnack_ratio_check(0.000003, &[(0.03, 0.0)]).unwrap();
        assert!(far.worst_ratio < mid.worst_ratio && mid.worst_ratio < near.worst_ratio);
        assert!(far.worst_ratio < 1.01);
    }

    #[test]
    fn rn_bound_window_and_limits() {
        assert!(rn_derivative_bound(0.01, 0.04).is_err()); // 10 r > R
        assert!(rn_derivative_bound(0.001, 0.06).is_err()); // R >= 1/20
        // correction vanishes as r -> 0
        let big = rn_derivative_bound(1e-3, 0.04).unwrap();
        let small = rn_derivative_bound(1e-6, 0.04).unwrap();
        assert!(small - 1.0 < 1e-2 * (big - 1.0));
        // schedule: N_n (bound - 1) -> 0 along r_n = a / |log eps_n|^3,
        // N_n ~ (log n)^2 / log log n, with eps_n = n^{gamma - 1}. The decay
        // is logarithmic (~ 1/ln n), so the check is the trend plus the
        // expected overall shrink factor across the grid.
        let gamma = 0.5;
        let a = 0.5;
        let big_r = 0.04;
        let mut values = Vec::new();
        for ln_n in [13.0f64, 16.0, 20.0, 26.0, 34.0] {
            let log_eps = (gamma - 1.0) * ln_n;
            let r_n = a / log_eps.abs().powi(3);
            let n_n = ln_n * ln_n / ln_n.ln();
            values.push(n_n * (rn_derivative_bound(r_n, big_r).unwrap() - 1.0));
        }
        for w in values.windows(2) {
            assert!(w[1] < w[0], "schedule not decreasing: {values:?}");
        }
        let last = values.last().unwrap();
        assert!(last < &(0.6 * values[0]), "decay too slow: {values:?}");
    }
}
