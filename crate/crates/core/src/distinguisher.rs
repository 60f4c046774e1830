//! The explicit distinguisher circuit: a threshold over clique indicators on
//! independently random ell-subsets, with parameter selection driven by the
//! gap between the clique probabilities of the two test distributions.
//!
//! Calibration: the feasibility gate is `q >= 5 * p_ind` with
//! `q = (beta/n)^ell` and `p_ind = p^C(ell,2)`; the indicator count is
//! `m = ceil(K / (q * delta))` with `K = 8`; the threshold sits one above the
//! Markov line, `tau = ceil(4 * p_ind * m) + 1`, strictly below the expected
//! positive count, so both error sides have margin.

use crate::circuit::{
    batcher_network, estimate_acceptance, CircuitBuilder, Distribution, MonotoneCircuit,
};
use crate::combinat::choose2;
use crate::error::{Error, Result};
use crate::graph::{
    edge_probability, sample_subset_rng, Graph, NegDistParams, PosDistParams, VertexSet,
};
use crate::seed::{streams, SeedSpec};

/// Largest indicator size scanned by the feasibility search.
pub const DEFAULT_ELL_CAP: usize = 64;

/// Trial-count constant in `m = ceil(K / (q * delta))`, calibrated so both
/// error sides clear 2/3 with margin at the reference configuration
/// (n=100, alpha=20, beta=50).
pub const TRIAL_COUNT_K: f64 = 8.0;

/// Default Chebyshev confidence parameter.
pub const DEFAULT_DELTA: f64 = 0.1;

/// Output of the indicator-size selection.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SelectedCliqueSize {
    pub ell: usize,
    /// `(alpha-1)/2 * log(n/beta) / log n`, reported for reference.
    pub gamma: f64,
    /// `(beta/n)^ell`.
    pub q: f64,
    /// `p^C(ell,2)`.
    pub p_ind: f64,
    /// The edge probability of the negative distribution.
    pub p: f64,
}

/// Smallest `ell >= 2` with `(beta/n)^ell >= 5 * p^C(ell,2)`, scanned in log
/// space so deep exponents cannot underflow.
pub fn select_clique_size(n: usize, alpha: usize, beta: usize) -> Result<SelectedCliqueSize> {
    select_clique_size_with_cap(n, alpha, beta, DEFAULT_ELL_CAP)
}

pub fn select_clique_size_with_cap(
    n: usize,
    alpha: usize,
    beta: usize,
    ell_cap: usize,
) -> Result<SelectedCliqueSize> {
    if alpha > beta || beta > n {
        return Err(Error::InvalidParameter(format!(
            "need 4 <= alpha <= beta <= n, got alpha={alpha}, beta={beta}, n={n}"
        )));
    }
    let p = edge_probability(n, alpha)?;
    let ln_p = p.ln();
    let ln_ratio = (beta as f64 / n as f64).ln();
    let ln_n = (n as f64).ln();
    let gamma = (alpha as f64 - 1.0) / 2.0 * ((n as f64 / beta as f64).ln() / ln_n);
    let ln5 = 5.0f64.ln();
    let mut best_ratio = f64::NEG_INFINITY;
    for ell in 2..=ell_cap.min(beta) {
        let ln_q = ell as f64 * ln_ratio;
        let ln_p_ind = choose2(ell) as f64 * ln_p;
        let log_margin = ln_q - ln5 - ln_p_ind;
        best_ratio = best_ratio.max(log_margin);
        if log_margin >= 0.0 {
            return Ok(SelectedCliqueSize {
                ell,
                gamma,
                q: ln_q.exp(),
                p_ind: ln_p_ind.exp(),
                p,
            });
        }
    }
    Err(Error::InfeasibleCliqueSize {
        cap: ell_cap,
        best_ratio: best_ratio.exp(),
    })
}

/// `m = ceil(K / (q * delta))`: enough independent indicators for the
/// Chebyshev side of the analysis to push the failure probability to
/// O(delta^2).
pub fn choose_trial_count(q: f64, delta: f64) -> Result<usize> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!("q={q} outside (0,1]")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta={delta} outside (0,1)"
        )));
    }
    let m = (TRIAL_COUNT_K / (q * delta)).ceil();
    if m > 1e7 {
        return Err(Error::Capacity(format!(
            "m={m:.3e} indicators exceed the desk-scale budget of 10^7"
        )));
    }
    Ok(m as usize)
}

/// Fully pinned construction parameters, with the feasibility certificate
/// checked at construction.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct DistinguisherParams {
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
    pub ell: usize,
    pub m: usize,
    pub tau: usize,
    pub seed: SeedSpec,
}

impl DistinguisherParams {
    pub fn new(
        n: usize,
        alpha: usize,
        beta: usize,
        ell: usize,
        m: usize,
        tau: usize,
        seed: SeedSpec,
    ) -> Result<Self> {
        if !(2 <= ell && ell <= beta && beta <= n) {
            return Err(Error::InvalidParameter(format!(
                "need 2 <= ell <= beta <= n, got ell={ell}, beta={beta}, n={n}"
            )));
        }
        if tau == 0 || tau > m {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= tau <= m, got tau={tau}, m={m}"
            )));
        }
        let p = edge_probability(n, alpha)?;
        // Feasibility certificate, in log space.
        let lhs = ell as f64 * (beta as f64 / n as f64).ln();
        let rhs = 5.0f64.ln() + choose2(ell) as f64 * p.ln();
        if lhs < rhs {
            return Err(Error::InvalidParameter(format!(
                "infeasible parameters: (beta/n)^ell < 5 p^C(ell,2) \
                 (log gap {:.3})",
                lhs - rhs
            )));
        }
        Ok(DistinguisherParams {
            n,
            alpha,
            beta,
            ell,
            m,
            tau,
            seed,
        })
    }

    /// End-to-end parameter selection: pick ell, then m from the Chebyshev
    /// budget, then the threshold just above the Markov line.
    pub fn plan(n: usize, alpha: usize, beta: usize, delta: f64, seed: SeedSpec) -> Result<Self> {
        let sel = select_clique_size(n, alpha, beta)?;
        let m = choose_trial_count(sel.q, delta)?;
        let tau = (4.0 * sel.p_ind * m as f64).ceil() as usize + 1;
        if tau > m {
            return Err(Error::InvalidParameter(format!(
                "threshold tau={tau} exceeds m={m}; delta too large for this gap"
            )));
        }
        DistinguisherParams::new(n, alpha, beta, sel.ell, m, tau, seed)
    }

    pub fn negative(&self) -> NegDistParams {
        NegDistParams::new(self.n, self.alpha).expect("validated at construction")
    }

    pub fn positive(&self) -> PosDistParams {
        PosDistParams::new(self.n, self.beta).expect("validated at construction")
    }
}

/// The assembled circuit together with its indicator supports.
#[derive(Clone, Debug)]
pub struct Distinguisher {
    params: DistinguisherParams,
    subsets: Vec<VertexSet>,
    circuit: MonotoneCircuit,
}

impl Distinguisher {
    pub fn params(&self) -> &DistinguisherParams {
        &self.params
    }

    pub fn subsets(&self) -> &[VertexSet] {
        &self.subsets
    }

    pub fn circuit(&self) -> &MonotoneCircuit {
        &self.circuit
    }

    /// Number of indicator supports whose clique is present in `g`.
    pub fn satisfied_indicators(&self, g: &Graph) -> usize {
        self.subsets
            .iter()
            .filter(|s| s.clique_edge_slots().iter().all(|&slot| g.has_slot(slot)))
            .count()
    }

    /// AND/OR gate count predicted from the construction:
    /// `m * (C(ell,2) - 1)` indicator gates plus two per comparator.
    pub fn predicted_size(&self) -> usize {
        self.params.m * (choose2(self.params.ell) - 1)
            + 2 * batcher_network(self.params.m).len()
    }
}

/// Draws the m random ell-subsets (deterministic in the seed) and wires the
/// indicators into the sorting-network threshold.
pub fn build_distinguisher(params: &DistinguisherParams) -> Result<Distinguisher> {
    let mut rng = params.seed.stream(streams::CONSTRUCTION).rng(0);
    let subsets: Vec<VertexSet> = (0..params.m)
        .map(|_| sample_subset_rng(params.n, params.ell, &mut rng))
        .collect();
    let mut builder = CircuitBuilder::new(params.n);
    let indicator_outputs: Vec<usize> = subsets
        .iter()
        .map(|s| builder.clique_indicator(s))
        .collect();
    let output = builder.threshold(&indicator_outputs, params.tau)?;
    let circuit = builder.finish(output);
    Ok(Distinguisher {
        params: *params,
        subsets,
        circuit,
    })
}

/// Success measurement over both distributions.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SuccessReport {
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
    pub ell: usize,
    pub m: usize,
    pub tau: usize,
    pub trials: u64,
    pub accept_pos: f64,
    pub ci_pos: f64,
    pub reject_neg: f64,
    pub ci_neg: f64,
    pub circuit_size: usize,
    pub seed: u64,
    pub pass: bool,
}

/// Runs the circuit against seeded samples of both distributions and checks
/// the 2/3 success bar on each side.
pub fn measure_success(params: &DistinguisherParams, trials: u64) -> Result<SuccessReport> {
    if trials < 100 {
        return Err(Error::InvalidParameter(format!(
            "trials={trials} below the minimum of 100"
        )));
    }
    let dist = build_distinguisher(params)?;
    let pos = estimate_acceptance(
        dist.circuit(),
        &Distribution::Positive(params.positive()),
        trials,
        &params.seed.stream(streams::POSITIVE_TRIALS),
    )?;
    let neg = estimate_acceptance(
        dist.circuit(),
        &Distribution::Negative(params.negative()),
        trials,
        &params.seed.stream(streams::NEGATIVE_TRIALS),
    )?;
    let accept_pos = pos.estimate;
    let reject_neg = 1.0 - neg.estimate;
    Ok(SuccessReport {
        n: params.n,
        alpha: params.alpha,
        beta: params.beta,
        ell: params.ell,
        m: params.m,
        tau: params.tau,
        trials,
        accept_pos,
        ci_pos: pos.ci_half_width,
        reject_neg,
        ci_neg: neg.ci_half_width,
        circuit_size: dist.circuit().size(),
        seed: params.seed.master_seed,
        pass: accept_pos >= 2.0 / 3.0 && reject_neg >= 2.0 / 3.0,
    })
}
