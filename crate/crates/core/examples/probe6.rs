use covertime_core::green::*;
use std::time::Instant;
fn main() {
    let t = Instant::now();
    let table = build_green(1024, (0.15, 0.35)).unwrap();
    eprintln!("build 1024: a00 = {:.3e}  [{:?}]", table.a00(), t.elapsed());
    let n = table.grid_side;
    let h = 1.0 / n as f64;
    let g = |i: i64, j: i64| table.g_values[(i.rem_euclid(n as i64) as usize) * n + (j.rem_euclid(n as i64)) as usize];
    let mut worst = 0.0f64;
    let mut worst_at = (0.0, 0.0);
    for i in 0..n as i64 {
        let z1 = wrap_unit(i as f64 / n as f64);
        for j in 0..n as i64 {
            let z2 = wrap_unit(j as f64 / n as f64);
            if (z1 * z1 + z2 * z2).sqrt() <= 0.05 { continue; }
            let axis = |f: &dyn Fn(i64) -> f64| (-f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) / (12.0 * h * h);
            let lap = axis(&|d| g(i + d, j)) + axis(&|d| g(i, j + d));
            let r = (lap - 1.0).abs();
            if r > worst { worst = r; worst_at = (z1, z2); }
        }
    }
    eprintln!("max |lap g - 1| over |z|>0.05: {worst:.3e} at {worst_at:?}  [{:?}]", t.elapsed());
    // spectrum imaginary part check happens inside build (debug_assert); also
    // check evenness + eval symmetry at 1024
    let gxy = green_eval(&table, (0.13, -0.21), (-0.02, 0.4)).unwrap();
    let gyx = green_eval(&table, (-0.02, 0.4), (0.13, -0.21)).unwrap();
    eprintln!("symmetry diff: {:.3e}", (gxy - gyx).abs());
    for r in [0.02f64, 0.01, 0.005] {
        let mut lo = f64::INFINITY; let mut hi = f64::NEG_INFINITY;
        for k in 0..256 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 256.0;
            let v = table.g_at(r * th.cos(), r * th.sin()) + r.ln() / (2.0 * std::f64::consts::PI);
            lo = lo.min(v); hi = hi.max(v);
        }
        eprintln!("regular-part variation at r={r}: {:.3e}", hi - lo);
    }
}
