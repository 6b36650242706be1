use covertime_core::bm::*;
use covertime_core::rng::substream_seed;
fn main() {
    for master in [42u64, 777] {
        let mut ratios = Vec::new();
        for eps in [0.05f64, 0.02] {
            let dt = (eps / 16.0) * (eps / 16.0);
            let res = (4.0 / eps).ceil() as usize;
            let reps = 300u64;
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in 0..reps {
                let cfg = BmConfig { dt, seed: substream_seed(master, i) };
                let v = cover_time_bm(eps, &cfg, res).unwrap();
                sum += v; sumsq += v * v;
            }
            let mean = sum / reps as f64;
            let sd = (sumsq / reps as f64 - mean * mean).sqrt();
            let denom = 2.0 / std::f64::consts::PI * eps.ln() * eps.ln();
            ratios.push(mean / denom);
            eprintln!("master={master} eps={eps}: ratio = {:.4} se = {:.4}", mean / denom, sd / (reps as f64).sqrt() / denom);
        }
        eprintln!("master={master}: diff(0.02 - 0.05) = {:+.4}", ratios[1] - ratios[0]);
    }
}
