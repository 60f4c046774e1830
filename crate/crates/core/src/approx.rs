//! The approximation pipeline: DNFs of clique indicators maintained as
//! antichain set families, the pairwise-union/union compression of AND/OR
//! gates, robust-sunflower closure, trim, gate-by-gate circuit
//! approximation, and one-step error estimation.

use crate::circuit::{Gate, MonotoneCircuit};
use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::graph::{Graph, NegDistParams, PosDistParams, VertexSet};
use crate::seed::SeedSpec;
use crate::sunflower::{
    coverage_prob_clique, coverage_verdict, CoverageEstimate, CoverageMode, Prob, SetFamily,
    Verdict, EXACT_UNIVERSE_CAP,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Approximator
// ---------------------------------------------------------------------------

/// A disjunction of clique indicators, stored as an antichain of vertex sets
/// (no term contains another). The empty family is constant 0; a family
/// containing the empty set is constant 1. Terms of size <= 1 are empty
/// conjunctions and also evaluate to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximator {
    n: usize,
    terms: Vec<VertexSet>,
}

impl Approximator {
    pub fn const_zero(n: usize) -> Self {
        Approximator { n, terms: vec![] }
    }

    pub fn const_one(n: usize) -> Self {
        Approximator {
            n,
            terms: vec![VertexSet::empty(n)],
        }
    }

    pub fn from_edge(n: usize, u: usize, v: usize) -> Self {
        Approximator {
            n,
            terms: vec![VertexSet::from_members(n, [u, v])],
        }
    }

    /// Builds from arbitrary terms, absorbing to an antichain.
    pub fn from_terms<I: IntoIterator<Item = VertexSet>>(n: usize, terms: I) -> Self {
        let mut a = Approximator::const_zero(n);
        for t in terms {
            a.insert_absorb(t);
        }
        a
    }

    pub fn from_family(family: &SetFamily) -> Self {
        Approximator::from_terms(family.n(), family.sets().iter().cloned())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[VertexSet] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Representation-level constant 0 (empty family).
    pub fn is_const_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Function-level constant 1: some term has size <= 1 (empty conjunction).
    pub fn is_constant_one_function(&self) -> bool {
        self.terms.iter().any(|t| t.len() <= 1)
    }

    /// Inserts a term, keeping the family an antichain of minimal sets:
    /// dropped if an existing term is contained in it, and existing supersets
    /// are dropped when it enters.
    pub fn insert_absorb(&mut self, set: VertexSet) {
        debug_assert_eq!(set.universe(), self.n);
        if self.terms.iter().any(|t| t.is_subset(&set)) {
            return;
        }
        self.terms.retain(|t| !set.is_subset(t));
        self.terms.push(set);
        self.canonicalize();
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by_key(|t| (t.len(), t.members()));
    }

    /// Antichain invariant: no term contains another.
    pub fn is_antichain(&self) -> bool {
        for (i, a) in self.terms.iter().enumerate() {
            for (j, b) in self.terms.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return false;
                }
            }
        }
        true
    }

    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for t in &self.terms {
            *hist.entry(t.len()).or_insert(0) += 1;
        }
        hist
    }

    /// Evaluates the DNF on a graph: accepts iff some term's clique is
    /// contained in it.
    pub fn eval(&self, g: &Graph) -> Result<bool> {
        if g.n() != self.n {
            return Err(Error::VertexCountMismatch {
                expected: self.n,
                actual: g.n(),
            });
        }
        Ok(self.terms.iter().any(|t| {
            t.clique_edge_slots().iter().all(|&s| g.has_slot(s))
        }))
    }

    /// The family as a SetFamily (terms are distinct by the antichain
    /// invariant), for the FAMILY text format.
    pub fn to_family(&self) -> SetFamily {
        SetFamily::new(self.n, self.terms.clone()).expect("antichain terms are distinct")
    }
}

// ---------------------------------------------------------------------------
// Pointwise comparisons
// ---------------------------------------------------------------------------

/// `a(G) <= b(G)` for every graph. The functions only read edges inside
/// their terms, so enumerating the union of relevant slots is exhaustive.
pub fn pointwise_le(a: &Approximator, b: &Approximator) -> Result<bool> {
    compare_pointwise(a, b, |x, y| x <= y)
}

pub fn pointwise_eq(a: &Approximator, b: &Approximator) -> Result<bool> {
    compare_pointwise(a, b, |x, y| x == y)
}

fn compare_pointwise(
    a: &Approximator,
    b: &Approximator,
    ok: impl Fn(bool, bool) -> bool,
) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::VertexCountMismatch {
            expected: a.n,
            actual: b.n,
        });
    }
    let mut relevant: Vec<usize> = a
        .terms
        .iter()
        .chain(&b.terms)
        .flat_map(|t| t.clique_edge_slots())
        .collect();
    relevant.sort_unstable();
    relevant.dedup();
    if relevant.len() > EXACT_UNIVERSE_CAP {
        return Err(Error::Capacity(format!(
            "pointwise comparison needs <= {EXACT_UNIVERSE_CAP} relevant edges, got {}",
            relevant.len()
        )));
    }
    let masks = |approx: &Approximator| -> Vec<u32> {
        approx
            .terms
            .iter()
            .map(|t| {
                let mut m = 0u32;
                for slot in t.clique_edge_slots() {
                    m |= 1 << relevant.binary_search(&slot).unwrap();
                }
                m
            })
            .collect()
    };
    let ma = masks(a);
    let mb = masks(b);
    for w in 0u64..1 << relevant.len() {
        let w = w as u32;
        let va = crate::combinat::any_submask(&ma, w);
        let vb = crate::combinat::any_submask(&mb, w);
        if !ok(va, vb) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Compression functions
// ---------------------------------------------------------------------------

/// Parameters of the robust closure + trim inner compression.
#[derive(Clone, Debug)]
pub struct CompressionParams {
    pub p: Prob,
    pub eps: Prob,
    pub c: usize,
}

impl CompressionParams {
    pub fn new(p: Prob, eps: Prob, c: usize) -> Result<Self> {
        if c < 2 {
            return Err(Error::InvalidParameter(format!(
                "trim threshold c={c} must be >= 2"
            )));
        }
        Ok(CompressionParams { p, eps, c })
    }
}

/// Inner compression applied after each gate combination.
#[derive(Clone, Debug)]
pub enum Icomp {
    /// No rewriting: the raw antichain combination.
    Identity,
    /// Only the trim step (drop terms larger than c).
    TrimOnly { c: usize },
    /// `trim_c(cl_{p,eps}(A))`.
    Full(CompressionParams),
}

/// Backend for the robustness checks inside closure: exact enumeration when
/// the relevant edge universe fits, seeded Monte-Carlo otherwise.
#[derive(Clone, Debug)]
pub struct ClosureCfg {
    pub mc_trials: u64,
    pub seed: SeedSpec,
}

impl ClosureCfg {
    pub fn new(mc_trials: u64, seed: SeedSpec) -> Self {
        ClosureCfg { mc_trials, seed }
    }
}

/// One closure rewrite: the certified robust clique sunflower and the core
/// that replaced it.
#[derive(Clone, Debug)]
pub struct Replacement {
    /// Minimal certified subfamily (greedily pruned from all terms above the
    /// core while the coverage threshold and the core intersection persist).
    pub subfamily: Vec<VertexSet>,
    pub core: VertexSet,
    pub coverage: CoverageEstimate,
}

/// `P^∧`: pairwise unions, absorption, then the inner compression.
pub fn approx_and(
    a: &Approximator,
    b: &Approximator,
    icomp: &Icomp,
    cfg: &ClosureCfg,
) -> Result<(Approximator, Vec<Replacement>, Vec<VertexSet>)> {
    if a.n != b.n {
        return Err(Error::VertexCountMismatch {
            expected: a.n,
            actual: b.n,
        });
    }
    let mut raw = Approximator::const_zero(a.n);
    for x in &a.terms {
        for y in &b.terms {
            raw.insert_absorb(x.union(y));
        }
    }
    apply_icomp(raw, icomp, cfg)
}

/// `P^∨`: family union, absorption, then the inner compression.
pub fn approx_or(
    a: &Approximator,
    b: &Approximator,
    icomp: &Icomp,
    cfg: &ClosureCfg,
) -> Result<(Approximator, Vec<Replacement>, Vec<VertexSet>)> {
    if a.n != b.n {
        return Err(Error::VertexCountMismatch {
            expected: a.n,
            actual: b.n,
        });
    }
    let mut raw = a.clone();
    for y in &b.terms {
        raw.insert_absorb(y.clone());
    }
    apply_icomp(raw, icomp, cfg)
}

fn apply_icomp(
    raw: Approximator,
    icomp: &Icomp,
    cfg: &ClosureCfg,
) -> Result<(Approximator, Vec<Replacement>, Vec<VertexSet>)> {
    match icomp {
        Icomp::Identity => Ok((raw, vec![], vec![])),
        Icomp::TrimOnly { c } => {
            let (trimmed, dropped) = trim(&raw, *c);
            Ok((trimmed, vec![], dropped))
        }
        Icomp::Full(params) => {
            let (closed, replacements) = closure(&raw, &params.p, &params.eps, cfg)?;
            let (trimmed, dropped) = trim(&closed, params.c);
            Ok((trimmed, replacements, dropped))
        }
    }
}

/// Removes all terms larger than `c` (callers guarantee `c >= 2`; see
/// `CompressionParams`).
pub fn trim(a: &Approximator, c: usize) -> (Approximator, Vec<VertexSet>) {
    let (kept, dropped): (Vec<VertexSet>, Vec<VertexSet>) =
        a.terms.iter().cloned().partition(|t| t.len() <= c);
    (
        Approximator {
            n: a.n,
            terms: kept,
        },
        dropped,
    )
}

/// Robust closure `cl_{p,eps}`: repeatedly replaces a (p, eps)-robust clique
/// sunflower among the terms by its core, interleaved with absorption, until
/// no candidate core passes. Candidate cores are enumerated smallest-first
/// from the intersection semilattice of the current terms; for each core the
/// subfamily tested is every term above it. Robustness is checked exactly
/// when the petal edge universe has at most 24 slots and by seeded
/// Monte-Carlo otherwise; an inconclusive Monte-Carlo verdict aborts.
pub fn closure(
    a: &Approximator,
    p: &Prob,
    eps: &Prob,
    cfg: &ClosureCfg,
) -> Result<(Approximator, Vec<Replacement>)> {
    let mut current = a.clone();
    let mut replacements: Vec<Replacement> = Vec::new();
    let mut inserted_cores: Vec<VertexSet> = Vec::new();
    let threshold = eps.complement();
    let mut mc_stream = 0u64;

    'outer: loop {
        let candidates = intersection_semilattice(&current.terms)?;
        for core in candidates {
            let above: Vec<VertexSet> = current
                .terms
                .iter()
                .filter(|t| core.is_subset(t))
                .cloned()
                .collect();
            if above.len() < 2 {
                continue;
            }
            debug_assert_eq!(intersection_of(&above, current.n), core);
            let coverage = robust_coverage(&above, &core, p, cfg, &mut mc_stream)?;
            if coverage_verdict(&coverage, &threshold) != Verdict::Pass {
                continue;
            }
            // Greedily prune the certificate to a minimal subfamily that
            // still has core C and passing coverage.
            let (subfamily, coverage) =
                prune_certificate(above.clone(), core.clone(), coverage, p, &threshold, cfg, &mut mc_stream)?;
            assert!(
                !inserted_cores.contains(&core),
                "closure re-inserted core {core:?}"
            );
            inserted_cores.push(core.clone());
            replacements.push(Replacement {
                subfamily,
                core: core.clone(),
                coverage,
            });
            current.terms.retain(|t| !core.is_subset(t));
            current.insert_absorb(core);
            continue 'outer;
        }
        break;
    }
    debug_assert!(current.is_antichain());
    Ok((current, replacements))
}

fn intersection_of(sets: &[VertexSet], n: usize) -> VertexSet {
    let mut it = sets.iter();
    let mut acc = match it.next() {
        Some(s) => s.clone(),
        None => return VertexSet::full(n),
    };
    for s in it {
        acc = acc.intersection(s);
    }
    acc
}

/// All intersections of two or more terms (the semilattice generated by
/// pairwise intersection), sorted by size then members.
fn intersection_semilattice(terms: &[VertexSet]) -> Result<Vec<VertexSet>> {
    const CANDIDATE_CAP: usize = 100_000;
    let mut found: Vec<VertexSet> = Vec::new();
    let mut queue: Vec<VertexSet> = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let c = terms[i].intersection(&terms[j]);
            if !found.contains(&c) {
                found.push(c.clone());
                queue.push(c);
            }
        }
    }
    while let Some(c) = queue.pop() {
        for t in terms {
            let d = c.intersection(t);
            if !found.contains(&d) {
                found.push(d.clone());
                queue.push(d);
            }
        }
        if found.len() > CANDIDATE_CAP {
            return Err(Error::Capacity(
                "closure candidate-core semilattice exceeded 100k sets".into(),
            ));
        }
    }
    found.sort_by_key(|c| (c.len(), c.members()));
    Ok(found)
}

fn robust_coverage(
    subfamily: &[VertexSet],
    core: &VertexSet,
    p: &Prob,
    cfg: &ClosureCfg,
    mc_stream: &mut u64,
) -> Result<CoverageEstimate> {
    let n = core.universe();
    let family = SetFamily::new(n, subfamily.to_vec())?;
    match coverage_prob_clique(&family, core, p, &CoverageMode::Exact) {
        Ok(cov) => Ok(cov),
        Err(Error::Capacity(_)) => {
            *mc_stream += 1;
            let mode = CoverageMode::Mc {
                trials: cfg.mc_trials,
                seed: cfg.seed.stream(*mc_stream),
            };
            coverage_prob_clique(&family, core, p, &mode)
        }
        Err(e) => Err(e),
    }
}

fn prune_certificate(
    mut subfamily: Vec<VertexSet>,
    core: VertexSet,
    mut coverage: CoverageEstimate,
    p: &Prob,
    threshold: &Prob,
    cfg: &ClosureCfg,
    mc_stream: &mut u64,
) -> Result<(Vec<VertexSet>, CoverageEstimate)> {
    let n = core.universe();
    let mut i = 0;
    while subfamily.len() > 2 && i < subfamily.len() {
        let mut candidate = subfamily.clone();
        candidate.remove(i);
        if intersection_of(&candidate, n) != core {
            i += 1;
            continue;
        }
        let cov = robust_coverage(&candidate, &core, p, cfg, mc_stream)?;
        match coverage_verdict(&cov, threshold) {
            Verdict::Pass => {
                subfamily = candidate;
                coverage = cov;
            }
            Verdict::Fail => i += 1,
            Verdict::Inconclusive => {
                return Err(Error::Inconclusive(format!(
                    "robustness check straddles 1-eps={} while pruning a closure certificate",
                    threshold.value
                )))
            }
        }
    }
    // The kept certificate must itself be a definite pass.
    if coverage.exact.is_none() {
        let lower = coverage.probability - coverage.ci_half_width;
        if lower < threshold.value {
            return Err(Error::Inconclusive(format!(
                "certificate coverage {} +- {} straddles 1-eps={}",
                coverage.probability, coverage.ci_half_width, threshold.value
            )));
        }
    }
    Ok((subfamily, coverage))
}

// ---------------------------------------------------------------------------
// Gate-by-gate circuit approximation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GateOp {
    Input,
    And,
    Or,
    Const,
}

/// Per-gate record of what the compression did.
#[derive(Clone, Debug)]
pub struct GateRecord {
    pub gate: usize,
    pub op: GateOp,
    pub children: Option<(usize, usize)>,
    pub replacements: Vec<Replacement>,
    pub trimmed: Vec<VertexSet>,
    pub size_histogram: BTreeMap<usize, usize>,
}

/// Full approximation trace: the per-gate records plus every intermediate
/// approximator (indexed by gate id).
#[derive(Clone, Debug)]
pub struct ApproxTrace {
    pub records: Vec<GateRecord>,
    pub approximators: Vec<Approximator>,
}

impl ApproxTrace {
    /// JSON-lines rendering, one record per gate. Vertices are 1-based to
    /// match the text formats.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&record_json(r).to_string());
            out.push('\n');
        }
        out
    }
}

fn vertices_json(s: &VertexSet) -> serde_json::Value {
    serde_json::Value::Array(
        s.members()
            .iter()
            .map(|&v| serde_json::Value::from(v + 1))
            .collect(),
    )
}

fn record_json(r: &GateRecord) -> serde_json::Value {
    serde_json::json!({
        "gate": r.gate + 1,
        "op": r.op,
        "children": r.children.map(|(a, b)| vec![a + 1, b + 1]),
        "replacements": r.replacements.iter().map(|rep| serde_json::json!({
            "subfamily": rep.subfamily.iter().map(vertices_json).collect::<Vec<_>>(),
            "core": vertices_json(&rep.core),
            "coverage": rep.coverage.probability,
            "exact": rep.coverage.exact.is_some(),
        })).collect::<Vec<_>>(),
        "trimmed": r.trimmed.iter().map(vertices_json).collect::<Vec<_>>(),
        "hist": r.size_histogram.iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::from(*v)))
            .collect::<serde_json::Map<String, serde_json::Value>>(),
    })
}

/// Runs the gate-by-gate approximation: inputs map to their edge term, AND
/// and OR gates go through the compression functions.
pub fn approximate_circuit(
    circuit: &MonotoneCircuit,
    icomp: &Icomp,
    cfg: &ClosureCfg,
) -> Result<(Approximator, ApproxTrace)> {
    let n = circuit.n_vertices();
    let mut approxs: Vec<Approximator> = Vec::with_capacity(circuit.gate_count());
    let mut records = Vec::with_capacity(circuit.gate_count());
    for (i, gate) in circuit.gates().iter().enumerate() {
        let (approx, op, children, replacements, trimmed) = match *gate {
            Gate::Input(slot) => {
                let (u, v) = crate::graph::slot_to_edge(n, slot);
                (Approximator::from_edge(n, u, v), GateOp::Input, None, vec![], vec![])
            }
            Gate::Const(b) => {
                let a = if b {
                    Approximator::const_one(n)
                } else {
                    Approximator::const_zero(n)
                };
                (a, GateOp::Const, None, vec![], vec![])
            }
            Gate::And(x, y) => {
                let (a, reps, trims) = approx_and(&approxs[x], &approxs[y], icomp, cfg)?;
                (a, GateOp::And, Some((x, y)), reps, trims)
            }
            Gate::Or(x, y) => {
                let (a, reps, trims) = approx_or(&approxs[x], &approxs[y], icomp, cfg)?;
                (a, GateOp::Or, Some((x, y)), reps, trims)
            }
        };
        debug_assert!(approx.is_antichain());
        records.push(GateRecord {
            gate: i,
            op,
            children,
            replacements,
            trimmed,
            size_histogram: approx.size_histogram(),
        });
        approxs.push(approx);
    }
    let result = approxs[circuit.output()].clone();
    Ok((
        result,
        ApproxTrace {
            records,
            approximators: approxs,
        },
    ))
}

// ---------------------------------------------------------------------------
// One-step error estimation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum ErrorMode {
    /// Exact weighted enumeration (small instances only).
    Exact,
    Mc { trials: u64, seed: SeedSpec },
}

/// Empirical one-step errors at one gate: `zeta_plus` is the probability (on
/// the positive distribution) that the raw combination of the child
/// approximators accepts but the compressed gate rejects; `zeta_minus` is the
/// probability (on the negative distribution) of the reverse flip.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GateStepError {
    pub gate: usize,
    pub zeta_plus: f64,
    pub zeta_minus: f64,
}

pub fn estimate_step_errors(
    trace: &ApproxTrace,
    neg: &NegDistParams,
    pos: &PosDistParams,
    mode: &ErrorMode,
) -> Result<Vec<GateStepError>> {
    let mut out = Vec::new();
    for record in &trace.records {
        let Some((x, y)) = record.children else {
            out.push(GateStepError {
                gate: record.gate,
                zeta_plus: 0.0,
                zeta_minus: 0.0,
            });
            continue;
        };
        let a = &trace.approximators[x];
        let b = &trace.approximators[y];
        let post = &trace.approximators[record.gate];
        let is_and = record.op == GateOp::And;
        let zeta_plus = flip_probability(a, b, post, is_and, true, neg, pos, mode)?;
        let zeta_minus = flip_probability(a, b, post, is_and, false, neg, pos, mode)?;
        out.push(GateStepError {
            gate: record.gate,
            zeta_plus,
            zeta_minus,
        });
    }
    Ok(out)
}

/// Probability of the one-step flip event. `positive_side` selects both the
/// distribution (T+ vs T-) and the direction (1->0 vs 0->1).
#[allow(clippy::too_many_arguments)]
fn flip_probability(
    a: &Approximator,
    b: &Approximator,
    post: &Approximator,
    is_and: bool,
    positive_side: bool,
    neg: &NegDistParams,
    pos: &PosDistParams,
    mode: &ErrorMode,
) -> Result<f64> {
    let flip = |g: &Graph| -> Result<bool> {
        let va = a.eval(g)?;
        let vb = b.eval(g)?;
        let pre = if is_and { va && vb } else { va || vb };
        let vpost = post.eval(g)?;
        Ok(if positive_side {
            pre && !vpost
        } else {
            !pre && vpost
        })
    };
    match mode {
        ErrorMode::Mc { trials, seed } => {
            let stream = if positive_side { 1 } else { 2 };
            let seed = seed.stream(seed.stream_id * 2 + stream);
            let mut hits = 0u64;
            for t in 0..*trials {
                let g = if positive_side {
                    crate::graph::sample_positive(pos, &seed, t)
                } else {
                    crate::graph::sample_negative(neg, &seed, t)
                };
                if flip(&g)? {
                    hits += 1;
                }
            }
            Ok(hits as f64 / *trials as f64)
        }
        ErrorMode::Exact => {
            if positive_side {
                let supports = binomial(pos.n, pos.beta);
                if supports > BigInt::from(1_000_000u64) {
                    return Err(Error::Capacity(format!(
                        "exact positive step error needs C(n,beta) <= 10^6, got {supports}"
                    )));
                }
                let mut hits = 0u64;
                let mut total = 0u64;
                let mut err = None;
                crate::combinat::for_each_combination(pos.n, pos.beta, |c| {
                    let g = Graph::clique_on(&VertexSet::from_members(pos.n, c.iter().copied()));
                    match flip(&g) {
                        Ok(true) => hits += 1,
                        Ok(false) => {}
                        Err(e) => {
                            err = Some(e);
                            return false;
                        }
                    }
                    total += 1;
                    true
                });
                if let Some(e) = err {
                    return Err(e);
                }
                Ok(hits as f64 / total as f64)
            } else {
                // Relevant slots: everything the three families can read.
                let mut relevant: Vec<usize> = a
                    .terms()
                    .iter()
                    .chain(b.terms())
                    .chain(post.terms())
                    .flat_map(|t| t.clique_edge_slots())
                    .collect();
                relevant.sort_unstable();
                relevant.dedup();
                if relevant.len() > EXACT_UNIVERSE_CAP {
                    return Err(Error::Capacity(format!(
                        "exact negative step error needs <= {EXACT_UNIVERSE_CAP} relevant edges, got {}",
                        relevant.len()
                    )));
                }
                let masks = |approx: &Approximator| -> Vec<u32> {
                    approx
                        .terms()
                        .iter()
                        .map(|t| {
                            let mut m = 0u32;
                            for slot in t.clique_edge_slots() {
                                m |= 1 << relevant.binary_search(&slot).unwrap();
                            }
                            m
                        })
                        .collect()
                };
                let (ma, mb, mp) = (masks(a), masks(b), masks(post));
                let evaluate = crate::combinat::any_submask;
                let p = neg.p;
                let r = relevant.len();
                let mut prob = 0.0;
                for w in 0u64..1 << r {
                    let w32 = w as u32;
                    let va = evaluate(&ma, w32);
                    let vb = evaluate(&mb, w32);
                    let pre = if is_and { va && vb } else { va || vb };
                    let vpost = evaluate(&mp, w32);
                    if !pre && vpost {
                        let k = w32.count_ones() as i32;
                        prob += p.powi(k) * (1.0 - p).powi(r as i32 - k);
                    }
                }
                Ok(prob)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Simple-approximator audit
// ---------------------------------------------------------------------------

/// The computable part of the union bound on positive acceptance: the
/// term-size histogram, `sum_l (beta/n)^l * M_l`, and the exact acceptance.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub histogram: BTreeMap<usize, usize>,
    /// `sum_l (beta/n)^l * M_l` over term sizes l >= 2.
    pub bound: BigRational,
    /// Exact acceptance probability on the positive distribution.
    pub acceptance: BigRational,
    /// Set when the approximator is the constant-1 function (a term of size
    /// <= 1); the union bound does not apply on that branch.
    pub constant_one: bool,
    pub holds: bool,
}

pub fn audit_simple_approximator(
    a: &Approximator,
    beta: usize,
    n: usize,
) -> Result<AuditReport> {
    if a.n() != n {
        return Err(Error::VertexCountMismatch {
            expected: n,
            actual: a.n(),
        });
    }
    if beta < 2 || beta > n {
        return Err(Error::InvalidParameter(format!(
            "beta={beta} out of range 2..={n}"
        )));
    }
    let histogram = a.size_histogram();
    let ratio = BigRational::new(BigInt::from(beta), BigInt::from(n));
    let mut bound = BigRational::zero();
    for (&len, &count) in &histogram {
        if len >= 2 {
            bound += num_traits::pow::pow(ratio.clone(), len) * BigRational::from(BigInt::from(count));
        }
    }
    if a.is_constant_one_function() {
        return Ok(AuditReport {
            histogram,
            bound,
            acceptance: BigRational::one(),
            constant_one: true,
            holds: true,
        });
    }
    let supports = binomial(n, beta);
    if supports > BigInt::from(1_000_000u64) {
        return Err(Error::Capacity(format!(
            "audit needs C(n,beta) <= 10^6, got {supports}"
        )));
    }
    let mut accepted = 0u64;
    crate::combinat::for_each_combination(n, beta, |c| {
        let support = VertexSet::from_members(n, c.iter().copied());
        if a.terms().iter().any(|t| t.is_subset(&support)) {
            accepted += 1;
        }
        true
    });
    let acceptance = BigRational::new(BigInt::from(accepted), supports);
    let holds = acceptance <= bound;
    Ok(AuditReport {
        histogram,
        bound,
        acceptance,
        constant_one: false,
        holds,
    })
}
