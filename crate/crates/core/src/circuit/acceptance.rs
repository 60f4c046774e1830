//! Acceptance probability of a circuit under the two test distributions:
//! seeded Monte-Carlo estimation and exact weighted enumeration.

use super::MonotoneCircuit;
use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::graph::{
    sample_negative_rng, sample_positive_rng, Graph, NegDistParams, PosDistParams, VertexSet,
};
use crate::seed::SeedSpec;
use crate::stats::FreqEstimate;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

/// Which test distribution to sample.
#[derive(Clone, Copy, Debug)]
pub enum Distribution {
    Negative(NegDistParams),
    Positive(PosDistParams),
}

impl Distribution {
    pub fn n(&self) -> usize {
        match self {
            Distribution::Negative(p) => p.n,
            Distribution::Positive(p) => p.n,
        }
    }

    pub fn sample(&self, seed: &SeedSpec, trial: u64) -> Graph {
        let mut rng = seed.rng(trial);
        match self {
            Distribution::Negative(p) => sample_negative_rng(p, &mut rng),
            Distribution::Positive(p) => sample_positive_rng(p, &mut rng),
        }
    }
}

pub type AcceptanceEstimate = FreqEstimate;

/// Monte-Carlo acceptance estimate with a 99% CI. Deterministic given the
/// seed and invariant under the worker-thread count (per-trial generators).
pub fn estimate_acceptance(
    circuit: &MonotoneCircuit,
    dist: &Distribution,
    trials: u64,
    seed: &SeedSpec,
) -> Result<AcceptanceEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if dist.n() != circuit.n_vertices() {
        return Err(Error::VertexCountMismatch {
            expected: circuit.n_vertices(),
            actual: dist.n(),
        });
    }
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = dist.sample(seed, t);
            circuit.evaluate(&g).expect("n checked above") as u64
        })
        .sum();
    Ok(FreqEstimate::from_counts(successes, trials))
}

/// Exact acceptance probability by weighted enumeration.
///
/// Negative side: enumerates assignments of the edge slots the circuit
/// actually reads (capacity 24 slots) with Bernoulli(p) weights. Positive
/// side: averages over all `C(n, beta)` planted supports (capacity 10^6).
pub fn exact_acceptance(circuit: &MonotoneCircuit, dist: &Distribution) -> Result<f64> {
    match dist {
        Distribution::Negative(params) => exact_acceptance_negative(circuit, params),
        Distribution::Positive(params) => {
            Ok(exact_acceptance_positive(circuit, params)?.to_f64().unwrap())
        }
    }
}

pub fn exact_acceptance_negative(
    circuit: &MonotoneCircuit,
    params: &NegDistParams,
) -> Result<f64> {
    if params.n != circuit.n_vertices() {
        return Err(Error::VertexCountMismatch {
            expected: circuit.n_vertices(),
            actual: params.n,
        });
    }
    let slots = circuit.referenced_slots();
    let r = slots.len();
    if r > 24 {
        return Err(Error::Capacity(format!(
            "exact negative acceptance needs <= 24 referenced slots, circuit reads {r}"
        )));
    }
    let p = params.p;
    let mut total = 0.0;
    for mask in 0u64..1 << r {
        let accepted = circuit.evaluate_assignment(&|slot| {
            slots
                .binary_search(&slot)
                .map(|idx| mask >> idx & 1 == 1)
                .unwrap_or(false)
        });
        if accepted {
            let k = mask.count_ones() as i32;
            total += p.powi(k) * (1.0 - p).powi(r as i32 - k);
        }
    }
    Ok(total)
}

/// Exact rational acceptance on the positive distribution:
/// `#accepting supports / C(n, beta)`.
pub fn exact_acceptance_positive(
    circuit: &MonotoneCircuit,
    params: &PosDistParams,
) -> Result<BigRational> {
    if params.n != circuit.n_vertices() {
        return Err(Error::VertexCountMismatch {
            expected: circuit.n_vertices(),
            actual: params.n,
        });
    }
    let supports = binomial(params.n, params.beta);
    if supports > BigInt::from(1_000_000u64) {
        return Err(Error::Capacity(format!(
            "exact positive acceptance needs C(n,beta) <= 10^6, got {supports}"
        )));
    }
    let mut accepted = 0u64;
    crate::combinat::for_each_combination(params.n, params.beta, |c| {
        let support = VertexSet::from_members(params.n, c.iter().copied());
        let g = Graph::clique_on(&support);
        if circuit.evaluate(&g).expect("n checked above") {
            accepted += 1;
        }
        true
    });
    Ok(BigRational::new(BigInt::from(accepted), supports))
}
