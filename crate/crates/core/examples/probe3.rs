use covertime_core::bm::*;
use covertime_core::lattice::*;
use covertime_core::rng::substream_seed;
use std::time::Instant;

fn main() {
    // BM cover ratio across epsilon at two margin conventions
    for (label, c) in [("c16", 16.0f64), ("c32", 32.0)] {
        for eps in [0.1f64, 0.05, 0.02] {
            if label == "c32" && eps == 0.1 { continue; }
            let t = Instant::now();
            let dt = (eps / c) * (eps / c);
            let res = (4.0 / eps).ceil() as usize;
            let reps = if c > 16.0 { 24u64 } else { 40 };
            let mut sum = 0.0;
            for i in 0..reps {
                let cfg = BmConfig { dt, seed: substream_seed(1304, i) };
                sum += cover_time_bm(eps, &cfg, res).unwrap();
            }
            let ratio = sum / reps as f64 / (2.0 / std::f64::consts::PI * eps.ln() * eps.ln());
            println!("BM {label} eps={eps}: ratio = {ratio:.4}  [{:?}]", t.elapsed());
        }
    }

    // alpha-radius value distribution at n=256
    for alpha in [0.25f64, 0.5] {
        for master in [1102u64, 977, 31415] {
            let t = Instant::now();
            let reps = 100u64;
            let mut vals: Vec<f64> = (0..reps)
                .map(|i| radius_at_fraction(256, alpha, substream_seed(master, i)).unwrap())
                .collect();
            vals.sort_by(|a, b| a.total_cmp(b));
            let median_r = vals[(reps / 2 - 1) as usize];
            let exps: Vec<f64> = vals.iter().map(|r| r.ln() / 256.0f64.ln()).collect();
            let median_e = exps[(reps / 2 - 1) as usize];
            // histogram of the middle values
            let lo_count = vals.iter().filter(|&&r| r < median_r - 1e-9).count();
            let eq_count = vals.iter().filter(|&&r| (r - median_r).abs() < 1e-9).count();
            println!(
                "alpha={alpha} master={master}: median radius {median_r:.3} exponent {median_e:.4} (target {:.4}) below {lo_count} at {eq_count}  [{:?}]",
                1.0 - alpha.sqrt(), t.elapsed()
            );
        }
    }

    // torus cover at n=256 extends the trend
    let t = Instant::now();
    let reps = 60u64;
    let mut sum = 0.0;
    for i in 0..reps {
        sum += cover_time_torus(256, substream_seed(1001, i)).unwrap().cover_steps as f64;
    }
    let nf = 256.0f64;
    let pred = 4.0 / std::f64::consts::PI * nf * nf * nf.ln() * nf.ln();
    println!("torus n=256: ratio = {:.4}  [{:?}]", sum / reps as f64 / pred, t.elapsed());
}
