use covertime_core::bm::*;
use covertime_core::lattice::*;
use covertime_core::rng::substream_seed;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if which == "bm" || which == "all" {
        for eps in [0.05f64, 0.02] {
            for c in [8.0f64, 16.0, 32.0] {
                let t = Instant::now();
                let dt = (eps / c) * (eps / c);
                let res = (4.0 / eps).ceil() as usize;
                let reps = 32u64;
                let mut sum = 0.0;
                let mut sumsq = 0.0;
                for i in 0..reps {
                    let cfg = BmConfig { dt, seed: substream_seed(555000 + c as u64, i) };
                    let v = cover_time_bm(eps, &cfg, res).unwrap();
                    sum += v;
                    sumsq += v * v;
                }
                let mean = sum / reps as f64;
                let sd = (sumsq / reps as f64 - mean * mean).sqrt();
                let denom = 2.0 / std::f64::consts::PI * eps.ln() * eps.ln();
                eprintln!(
                    "eps={eps} c={c}: ratio = {:.4} (se {:.4})  [{:?}]",
                    mean / denom, sd / (reps as f64).sqrt() / denom, t.elapsed()
                );
            }
        }
    }

    if which == "alpha" || which == "all" {
        for alpha in [0.25f64, 0.5] {
            let t = Instant::now();
            let mut vals: Vec<f64> = (0..400u64)
                .map(|i| radius_at_fraction(256, alpha, substream_seed(246810, i)).unwrap())
                .collect();
            vals.sort_by(|a, b| a.total_cmp(b));
            let median = vals[199];
            let expo = median.ln() / 256.0f64.ln();
            eprint!("alpha={alpha}: median {median:.4} expo {expo:.4} | low hist:");
            let mut k = 0usize;
            while k < vals.len() {
                let v = vals[k];
                let count = vals[k..].iter().take_while(|&&x| (x - v).abs() < 1e-9).count();
                if v < median * 1.7 {
                    eprint!(" {v:.3}x{count}");
                }
                k += count;
            }
            eprintln!("  [{:?}]", t.elapsed());
        }
    }
}
