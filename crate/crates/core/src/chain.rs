//! Birth-death excursion chain, its negative-binomial count chain, and the
//! windowed dynamic program for the n-successful probability.
//!
//! The chain lives on levels `1..=n` (level `k` standing for the k-th radius
//! of a factorial-cubic scale sequence). Upward-in-radius moves are encoded by
//! the level dropping by one; the probability of moving inward from level `k`
//! is the gambler's-ruin ratio `p_bar(k) = log(k+1) / (log k + log(k+1))`.
//! Level counts across a run form a Markov chain of negative-binomial
//! transitions; the windowed path sum `h_{i,j}` over that chain yields the
//! n-successful probability `q_bar_n = h_{2,n}(l_n)` exactly.
//!
//! All probabilities are held as natural logarithms: `q_bar_n` scales like
//! `(n!)^-zeta` and underflows any linear representation beyond n ~ 10.

use crate::error::{Error, Result};
use crate::logspace::{ln_sum_exp, round_half_up};
use crate::rng::{RandomSource, Xoshiro256pp};

/// Parameters of the excursion chain.
///
/// `zeta = 3a` always; `rho_n` and `eps1` only enter the radius table and the
/// union-bound arithmetic, never the chain law itself.
#[derive(Clone, Debug)]
pub struct ChainParams {
    pub n: u32,
    pub a: f64,
    pub zeta: f64,
    pub eps1: f64,
    pub rho_n: f64,
}

impl ChainParams {
    pub fn new(n: u32, a: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("n", format!("need n >= 3, got {n}")));
        }
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::domain("a", format!("need a > 0, got {a}")));
        }
        let rho_n = (-25.0 * (n as f64).ln()).exp();
        Ok(ChainParams { n, a, zeta: 3.0 * a, eps1: 0.25, rho_n })
    }

    pub fn with_eps1(mut self, eps1: f64) -> Result<Self> {
        if !(0.0 < eps1 && eps1 < 0.5) {
            return Err(Error::domain("eps1", format!("need 0 < eps1 < 1/2, got {eps1}")));
        }
        self.eps1 = eps1;
        Ok(self)
    }

    pub fn with_rho_n(mut self, rho_n: f64) -> Result<Self> {
        if !(rho_n > 0.0 && rho_n.is_finite()) {
            return Err(Error::domain("rho_n", format!("need rho_n > 0, got {rho_n}")));
        }
        self.rho_n = rho_n;
        Ok(self)
    }

    /// Window centre `n_k = round(zeta k^2 ln k)`, defined for `k >= 3`.
    pub fn window_center(&self, k: u32) -> u64 {
        debug_assert!(k >= 3);
        round_half_up(self.zeta * (k as f64) * (k as f64) * (k as f64).ln()) as u64
    }

    /// Top count `l_n = round(zeta n^2 ln n)`.
    pub fn top_count(&self) -> u64 {
        self.window_center(self.n)
    }

    /// Inclusive count window at level `k`: `{l_n}` at the top, `{0}` at
    /// level 2, `|m - n_k| <= k` (clamped to non-negative) in between.
    pub fn window(&self, k: u32) -> (u64, u64) {
        if k == self.n {
            let t = self.top_count();
            (t, t)
        } else if k == 2 {
            (0, 0)
        } else {
            let c = self.window_center(k) as i64;
            let lo = (c - k as i64).max(0) as u64;
            (lo, (c + k as i64) as u64)
        }
    }

    /// Wald-identity mean of the level-k count: `l_n * ln n / ln k`
    /// (the per-level geometric means `log(j+1)/log j` telescope).
    pub fn wald_mean(&self, k: u32) -> f64 {
        self.top_count() as f64 * (self.n as f64).ln() / (k as f64).ln()
    }
}

/// Inward-move probability `p_bar(k) = ln(k+1) / (ln k + ln(k+1))`.
pub fn p_bar(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("k", format!("p_bar needs k >= 2, got {k}")));
    }
    let lk = (k as f64).ln();
    let lk1 = (k as f64 + 1.0).ln();
    Ok(lk1 / (lk + lk1))
}

/// Radius scale table, held in log space.
#[derive(Clone, Debug)]
pub struct ScaleTable {
    pub n: u32,
    /// `ln eps_{n,k}` for k = 1..=n (index k-1).
    pub log_eps_nk: Vec<f64>,
    /// `n_k = round(zeta k^2 ln k)` for k = 3..=n (index k-3).
    pub n_k: Vec<u64>,
}

impl ScaleTable {
    pub fn log_eps(&self, k: u32) -> f64 {
        self.log_eps_nk[(k - 1) as usize]
    }
}

/// Build the scale table `eps_{n,k} = rho_n * eps_n * (k!)^3` with
/// `eps_n = eps1 (n!)^-3`, entirely in log space.
pub fn build_scales(params: &ChainParams) -> ScaleTable {
    let n = params.n;
    let ln_rho = params.rho_n.ln();
    let ln_eps1 = params.eps1.ln();
    let ln_fact_n = libm::lgamma(n as f64 + 1.0);
    let mut log_eps_nk = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let ln_fact_k = libm::lgamma(k as f64 + 1.0);
        log_eps_nk.push(ln_rho + ln_eps1 - 3.0 * ln_fact_n + 3.0 * ln_fact_k);
    }
    let n_k = (3..=n).map(|k| params.window_center(k)).collect();
    ScaleTable { n, log_eps_nk, n_k }
}

/// Log of the count-chain transition pmf
/// `P(L_{-k} = ell | L_{-(k+1)} = m_tilde) = C(m_tilde-1+ell, m_tilde-1)
/// p_bar_k^ell (1-p_bar_k)^m_tilde`, with the absorbing row at `m_tilde = 0`.
pub fn nb_transition_logpmf(k: u32, m_tilde: u64, ell: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("k", format!("need k >= 2, got {k}")));
    }
    if m_tilde == 0 {
        return Ok(if ell == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let p = p_bar(k)?;
    let m = m_tilde as f64;
    let l = ell as f64;
    let ln_choose = libm::lgamma(m + l) - libm::lgamma(m) - libm::lgamma(l + 1.0);
    Ok(ln_choose + l * p.ln() + m * (1.0 - p).ln())
}

/// Which simulator realizes the count vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMethod {
    /// Step the reflecting birth-death chain until the prescribed number of
    /// completed top-level excursions, tallying inward transitions.
    YChain,
    /// Sample level counts top-down through the negative-binomial law.
    NbChain,
}

/// Excursion counts per level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    pub n: u32,
    /// `L_{-k}` for k = 2..=n (index k-2).
    counts: Vec<u64>,
}

impl CountVector {
    pub fn count(&self, k: u32) -> u64 {
        self.counts[(k - 2) as usize]
    }
}

/// Simulate one count vector. Both methods produce identically distributed
/// output; the Y-chain is the mechanical definition, the NB chain its
/// level-by-level representation through sums of geometric variables.
pub fn simulate_counts(params: &ChainParams, method: ChainMethod, seed: u64) -> CountVector {
    let mut rng = Xoshiro256pp::from_seed(seed);
    simulate_counts_with(params, method, &mut rng)
}

/// As [`simulate_counts`], drawing from a caller-owned stream (used by
/// replicate loops that pre-derive substreams).
pub fn simulate_counts_with(
    params: &ChainParams,
    method: ChainMethod,
    rng: &mut Xoshiro256pp,
) -> CountVector {
    let n = params.n;
    let top = params.top_count();
    let mut counts = vec![0u64; (n - 1) as usize];
    counts[(n - 2) as usize] = top;
    match method {
        ChainMethod::NbChain => {
            let mut upper = top;
            for k in (2..n).rev() {
                let p = p_bar(k).expect("k >= 2");
                let mut sum = 0u64;
                for _ in 0..upper {
                    sum += rng.geometric(p);
                }
                counts[(k - 2) as usize] = sum;
                upper = sum;
            }
        }
        ChainMethod::YChain => {
            let p: Vec<f64> = (0..=n).map(|k| if k >= 2 { p_bar(k).unwrap() } else { 0.0 }).collect();
            let mut level = n;
            let mut arrivals_at_top = 0u64;
            let mut inward = vec![0u64; (n + 1) as usize];
            loop {
                if level == n {
                    // reflecting: always step inward
                    inward[n as usize] += 1;
                    level = n - 1;
                } else if level == 1 {
                    level = 2;
                } else if rng.uniform() < p[level as usize] {
                    inward[level as usize] += 1;
                    level -= 1;
                } else {
                    level += 1;
                    if level == n {
                        arrivals_at_top += 1;
                        if arrivals_at_top == top {
                            break;
                        }
                    }
                }
            }
            debug_assert_eq!(inward[n as usize], top);
            for k in 2..=n {
                counts[(k - 2) as usize] = inward[k as usize];
            }
        }
    }
    CountVector { n, counts }
}

/// n-successful test: zero innermost count and every intermediate count
/// inside its `n_k +- k` window.
pub fn is_n_successful(counts: &CountVector, params: &ChainParams) -> bool {
    if counts.count(2) != 0 {
        return false;
    }
    for k in 3..params.n {
        let c = counts.count(k) as i64;
        let center = params.window_center(k) as i64;
        if (c - center).abs() > k as i64 {
            return false;
        }
    }
    true
}

/// Windowed path-sum table: `log h_{i,k}(m)` for `k = i..=j` over the count
/// window at each level.
#[derive(Clone, Debug)]
pub struct DpTable {
    pub i: u32,
    pub j: u32,
    /// Per level k (index k-i): (window lo, log h values for m = lo..=hi).
    levels: Vec<(u64, Vec<f64>)>,
}

impl DpTable {
    /// `log h_{i,k}(m)`; -inf outside the window.
    pub fn log_h(&self, k: u32, m: u64) -> f64 {
        let (lo, ref vals) = self.levels[(k - self.i) as usize];
        if m < lo || (m - lo) as usize >= vals.len() {
            return f64::NEG_INFINITY;
        }
        vals[(m - lo) as usize]
    }

    /// Window at level k as (lo, values).
    pub fn level(&self, k: u32) -> (u64, &[f64]) {
        let (lo, ref vals) = self.levels[(k - self.i) as usize];
        (lo, vals)
    }

    /// `log sum over the level-j window of h_{i,j}(m)`.
    pub fn log_window_sum(&self) -> f64 {
        ln_sum_exp(&self.levels.last().expect("non-empty table").1)
    }
}

/// Backward dynamic program for `h_{i,j}`: empty product 1 at level i, then
/// one negative-binomial convolution per level, accumulated with
/// log-sum-exp. Windows are `|m - n_k| <= k` for 2 < k < n, `{0}` at level 2
/// and the pinned top count at level n.
pub fn h_dp(i: u32, j: u32, params: &ChainParams) -> Result<DpTable> {
    if !(2 <= i && i < j && j <= params.n) {
        return Err(Error::domain("i", format!("need 2 <= i < j <= n, got i={i} j={j} n={}", params.n)));
    }
    let mut levels: Vec<(u64, Vec<f64>)> = Vec::with_capacity((j - i + 1) as usize);
    let (lo_i, hi_i) = params.window(i);
    levels.push((lo_i, vec![0.0; (hi_i - lo_i + 1) as usize]));
    for k in (i + 1)..=j {
        let (lo_k, hi_k) = params.window(k);
        let (lo_prev, ref prev) = levels[(k - 1 - i) as usize];
        let mut vals = Vec::with_capacity((hi_k - lo_k + 1) as usize);
        let mut terms = Vec::with_capacity(prev.len());
        for m in lo_k..=hi_k {
            terms.clear();
            for (off, &h_prev) in prev.iter().enumerate() {
                let m_prev = lo_prev + off as u64;
                let lp = nb_transition_logpmf(k - 1, m, m_prev)?;
                terms.push(lp + h_prev);
            }
            vals.push(ln_sum_exp(&terms));
        }
        levels.push((lo_k, vals));
    }
    Ok(DpTable { i, j, levels })
}

/// `log q_bar_n = log h_{2,n}(l_n)`: the exact n-successful probability.
/// Reads neither `rho_n` nor `eps1`.
pub fn q_bar_exact(params: &ChainParams) -> Result<f64> {
    let table = h_dp(2, params.n, params)?;
    Ok(table.log_h(params.n, params.top_count()))
}

/// Constants-free pair-correlation exponent:
/// `log[ h_{l+3,n}(l_n) (sum_{|m-n_l|<=l} h_{2,l}(m))^2 ] - 2 log q_bar_n`.
pub fn second_moment_ratio(l: u32, params: &ChainParams) -> Result<f64> {
    let n = params.n;
    if !(3 <= l && l + 3 <= n) {
        return Err(Error::domain("l", format!("need 3 <= l <= n-3, got l={l} n={n}")));
    }
    // h_{n,n} is the empty product
    let upper = if l + 3 == n { 0.0 } else { h_dp(l + 3, n, params)?.log_h(n, params.top_count()) };
    let lower = h_dp(2, l, params)?;
    let qbar = q_bar_exact(params)?;
    Ok(upper + 2.0 * lower.log_window_sum() - 2.0 * qbar)
}

/// Log of the union-bound second-moment sum `sum_{l=1}^{n-1} V_l` with all
/// existential constants set to 1:
/// `V_l = M_n^{-1} (eps_{n,l+1}/eps_n)^2 n^39 (eps_{n,n}/eps_{n,l+1})^{a+gamma}`
/// over `M_n = (1/4) prod l^6` patch squares.
pub fn union_second_moment_sum(params: &ChainParams, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || 2.0 - params.a - gamma <= 0.0 {
        return Err(Error::domain(
            "gamma",
            format!("need gamma > 0 and 2 - a - gamma > 0, got a={} gamma={gamma}", params.a),
        ));
    }
    let n = params.n as f64;
    let scales = build_scales(params);
    let ln_m_n = 6.0 * libm::lgamma(n + 1.0) - 4.0_f64.ln();
    let ln_eps_n = scales.log_eps(1) - params.rho_n.ln(); // eps_n = eps_{n,1}/rho_n
    let s = params.a + gamma;
    let mut terms = Vec::with_capacity(params.n as usize - 1);
    for l in 1..params.n {
        let ln_eps_l1 = scales.log_eps(l + 1);
        let ln_eps_nn = scales.log_eps(params.n);
        let v = -ln_m_n + 2.0 * (ln_eps_l1 - ln_eps_n) + 39.0 * n.ln() + s * (ln_eps_nn - ln_eps_l1);
        terms.push(v);
    }
    Ok(ln_sum_exp(&terms))
}
