use covertime_core::bm::*;
use covertime_core::chain::*;
use covertime_core::green::hit_time_band;
use covertime_core::lattice::*;
use covertime_core::rng::{substream_seed, Xoshiro256pp};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();

    // --- criterion 4: first-moment law
    for n in [10u32, 20, 40, 80, 160] {
        let params = ChainParams::new(n, 2.0).unwrap();
        let lq = q_bar_exact(&params).unwrap();
        let d = (lq / libm::lgamma(n as f64 + 1.0) + 6.0).abs();
        println!("C4 n={n}: log q = {lq:.2}, delta = {d:.4}");
    }
    println!("  [{:?}]", t0.elapsed());

    // --- criterion 7: hitting-time band, R=0.2 r=0.02 dt=(r/8)^2, 1e3 reps
    let t = Instant::now();
    let (big_r, r) = (0.2f64, 0.02f64);
    let dt = (r / 8.0) * (r / 8.0);
    let x = TorusPoint::new(0.0, 0.0);
    let reps = 1000u64;
    let mut sum = 0.0;
    for i in 0..reps {
        let mut rng = Xoshiro256pp::substream(701, i);
        use covertime_core::rng::RandomSource;
        let theta = 2.0 * std::f64::consts::PI * rng.uniform();
        let start = TorusPoint::new(big_r * theta.cos(), big_r * theta.sin());
        let cfg = BmConfig { dt, seed: rng.next_u64() };
        sum += hitting_time(x, r, &cfg, start).unwrap();
    }
    let mean = sum / reps as f64;
    let band = hit_time_band(big_r, r, 0.2).unwrap();
    println!("C7 mean E tau = {mean:.4}, band = {band:?}  [{:?}]", t.elapsed());

    // --- criterion 8: gambler's ruin at two dt choices
    for dtdiv in [32.0f64, 64.0] {
        let t = Instant::now();
        let (r, big_r) = (0.01f64, 0.2f64);
        let dt = (r / dtdiv) * (r / dtdiv);
        for (label, rho, target) in [("mid", (r * big_r).sqrt(), 0.5f64), ("rho05", 0.05, 0.46276)] {
            let reps = 10_000u64;
            let mut hits = 0u64;
            for i in 0..reps {
                let mut rng = Xoshiro256pp::substream(802, i);
                if annulus_exit_sample(rho, r, big_r, dt, &mut rng) { hits += 1; }
            }
            let freq = hits as f64 / reps as f64;
            println!("C8 dt=(r/{dtdiv})^2 {label}: freq = {freq:.5} target {target} diff {:+.5}", freq - target);
        }
        println!("  [{:?}]", t.elapsed());
    }

    // --- criterion 10: torus cover trend
    let t = Instant::now();
    for (n, reps) in [(16u32, 400u64), (32, 400), (64, 150), (128, 100)] {
        let mut sum = 0.0;
        for i in 0..reps {
            sum += cover_time_torus(n, substream_seed(1001 + n as u64, i)).unwrap().cover_steps as f64;
        }
        let nf = n as f64;
        let pred = 4.0 / std::f64::consts::PI * nf * nf * nf.ln() * nf.ln();
        println!("C10 n={n}: ratio = {:.4}", sum / reps as f64 / pred);
    }
    println!("  [{:?}]", t.elapsed());

    // --- criterion 11: alpha radius at n=256
    let t = Instant::now();
    for alpha in [0.25f64, 0.5] {
        let mut vals: Vec<f64> = (0..50u64)
            .map(|i| {
                let r = radius_at_fraction(256, alpha, substream_seed(1102, i)).unwrap();
                r.ln() / 256.0f64.ln()
            })
            .collect();
        vals.sort_by(|a, b| a.total_cmp(b));
        let median = vals[24];
        println!("C11 alpha={alpha}: median log_n radius = {median:.4} target {:.4}", 1.0 - alpha.sqrt());
    }
    println!("  [{:?}]", t.elapsed());

    // --- criterion 12: disk cover n=5, 200 reps
    let t = Instant::now();
    let lnn2 = 5.0f64.ln().powi(2);
    let mut lnt = Vec::new();
    let mut min_exc = u64::MAX;
    let mut exc_sum = 0.0;
    for i in 0..200u64 {
        let r = disk_cover_z2(5, substream_seed(1203, i)).unwrap();
        lnt.push(r.ln_t);
        min_exc = min_exc.min(r.n_excursions);
        exc_sum += r.n_excursions as f64;
    }
    let cdf = |tt: f64| lnt.iter().filter(|&&v| v <= tt * lnn2).count() as f64 / 200.0;
    let phi5 = 2.0 / 3.0 * lnn2 / 5.0f64.ln().ln();
    println!(
        "C12: cdf(4)={:.3} cdf(8)={:.3} (limit {:.3}/{:.3}) min_exc={min_exc} mean_exc={:.2} (2/3)phi5={phi5:.2}  [{:?}]",
        cdf(4.0), cdf(8.0), (-1.0f64).exp(), (-0.5f64).exp(), exc_sum / 200.0, t.elapsed()
    );

    // --- criterion 13: bm cover trend
    let t = Instant::now();
    for eps in [0.05f64, 0.02] {
        let dt = (eps / 16.0) * (eps / 16.0);
        let res = (4.0 / eps).ceil() as usize;
        let reps = 20u64;
        let mut sum = 0.0;
        for i in 0..reps {
            let cfg = BmConfig { dt, seed: substream_seed(1304, i) };
            sum += cover_time_bm(eps, &cfg, res).unwrap();
        }
        let ratio = sum / reps as f64 / (2.0 / std::f64::consts::PI * eps.ln() * eps.ln());
        println!("C13 eps={eps}: mean ratio = {ratio:.4}");
    }
    println!("  [{:?}]", t.elapsed());

    // --- criterion 2 timing: 1e7 NB replicates at n=3, a=1/3
    let t = Instant::now();
    let params = ChainParams::new(3, 1.0 / 3.0).unwrap();
    let mut hits = 0u64;
    for i in 0..10_000_000u64 {
        let mut rng = Xoshiro256pp::substream(202, i);
        let cv = simulate_counts_with(&params, ChainMethod::NbChain, &mut rng);
        if is_n_successful(&cv, &params) { hits += 1; }
    }
    println!("C2: freq = {:.6e} target 7.45e-5, closed form {:.6e}  [{:?}]",
        hits as f64 / 1e7, q_bar_exact(&params).unwrap().exp(), t.elapsed());
}
