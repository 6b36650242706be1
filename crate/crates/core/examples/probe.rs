use covertime_core::chain::*;
use covertime_core::lattice::{cover_time_lattice, build_lattice_disk, LatticeKind, LatticeSpec};
use covertime_core::predict::lattice_constant;
use covertime_core::rng::substream_seed;

fn main() {
    // transition band over k in 3..=200 for zeta = 6
    let params = ChainParams::new(201, 2.0).unwrap();
    let zeta = params.zeta;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut lo20 = f64::INFINITY;
    let mut hi20 = f64::NEG_INFINITY;
    let mut center_lo = f64::INFINITY;
    let mut center_hi = f64::NEG_INFINITY;
    for k in 3..=200u32 {
        let (llo, lhi) = params.window(k);
        let (mlo, mhi) = params.window(k + 1);
        for m in mlo..=mhi {
            for l in llo..=lhi {
                let lp = nb_transition_logpmf(k, m, l).unwrap();
                let s = lp + (zeta + 1.0) * (k as f64).ln() + 0.5 * (k as f64).ln().ln();
                lo = lo.min(s); hi = hi.max(s);
                if k >= 20 { lo20 = lo20.min(s); hi20 = hi20.max(s); }
            }
        }
        let c = nb_transition_logpmf(k, params.window_center(k+1), params.window_center(k)).unwrap()
            + (zeta + 1.0) * (k as f64).ln() + 0.5 * (k as f64).ln().ln();
        center_lo = center_lo.min(c); center_hi = center_hi.max(c);
    }
    println!("transition band all k: [{lo:.3}, {hi:.3}], k>=20: [{lo20:.3}, {hi20:.3}], centers: [{center_lo:.3}, {center_hi:.3}]");

    // h ratio band at n = 40
    let params = ChainParams::new(40, 2.0).unwrap();
    let top = params.top_count();
    let mut hlast = 0.0;
    let mut rlo = f64::INFINITY; let mut rhi = f64::NEG_INFINITY;
    for k in (10..40u32).rev() {
        let t = h_dp(k, 40, &params).unwrap();
        let h_kn = t.log_h(40, top);
        let ratio = h_kn - hlast + zeta * (k as f64).ln() + 0.5 * (k as f64).ln().ln();
        if k < 39 { rlo = rlo.min(ratio); rhi = rhi.max(ratio); }
        hlast = h_kn;
    }
    println!("h ratio band (10..39): [{rlo:.3}, {rhi:.3}]");

    // second moment ratios at n = 14
    let params = ChainParams::new(14, 2.0).unwrap();
    for l in 3..=11u32 {
        match second_moment_ratio(l, &params) {
            Ok(v) => println!("smr l={l}: {v:.3}"),
            Err(e) => println!("smr l={l}: ERR {e}"),
        }
    }

    // lattice cover ratios
    for rho in [15.0f64, 30.0, 60.0] {
        let disk = build_lattice_disk(LatticeKind::SquarePlane, rho).unwrap();
        let n = disk.vertex_count() as f64;
        let reps = 100u64;
        let mut sum = 0.0;
        for rep in 0..reps {
            let s = substream_seed(0x5AFE, rep);
            sum += cover_time_lattice(&LatticeSpec{kind: LatticeKind::SquarePlane, size:1}, rho, s).unwrap() as f64;
        }
        let ratio = sum / reps as f64 / (n * n.ln() * n.ln());
        println!("square rho={rho}: N={n} ratio={ratio:.4} ratio/C={:.3}", ratio * std::f64::consts::PI);
    }
    for kind in [LatticeKind::Triangular, LatticeKind::Honeycomb] {
        let disk = build_lattice_disk(kind, 15.0).unwrap();
        let n = disk.vertex_count() as f64;
        let c_l = lattice_constant(disk.area_per_vertex(), [[0.5,0.0],[0.0,0.5]]).unwrap();
        let reps = 40u64;
        let mut sum = 0.0;
        for rep in 0..reps {
            sum += cover_time_lattice(&LatticeSpec{kind, size:1}, 15.0, substream_seed(17, rep)).unwrap() as f64;
        }
        let ratio = sum / reps as f64 / (n * n.ln() * n.ln());
        println!("{kind:?} rho=15: N={n} ratio={ratio:.4} ratio/C={:.3}", ratio / c_l);
    }
}
