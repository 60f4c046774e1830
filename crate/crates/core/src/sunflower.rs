//! k-sunflowers, robust sunflowers, robust clique sunflowers: exact and
//! Monte-Carlo coverage machinery plus the lemma-level verifiers.
//!
//! Exact coverage enumerates subsets of the *relevant* universe (petal
//! elements / petal edges outside the core) with Bernoulli weights, capped at
//! 24 relevant items, and reports an exact rational alongside the f64.

use crate::bitset::Bitset;
use crate::combinat::{choose2, rational_from_popcount_counts};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::seed::SeedSpec;
use crate::stats::FreqEstimate;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Maximum number of relevant elements/edges for exact enumeration (2^24
/// states, sub-second).
pub const EXACT_UNIVERSE_CAP: usize = 24;

/// A probability carried in both f64 and exact rational form, so exact and
/// Monte-Carlo code paths stay coherent.
#[derive(Clone, Debug)]
pub struct Prob {
    pub value: f64,
    pub rational: BigRational,
}

impl Prob {
    /// Exact dyadic interpretation of an f64 in [0,1].
    pub fn from_f64(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p={p} outside [0,1]")));
        }
        Ok(Prob {
            value: p,
            rational: BigRational::from_float(p).expect("finite float"),
        })
    }

    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "bad probability {num}/{den}"
            )));
        }
        let rational = BigRational::new(BigInt::from(num), BigInt::from(den));
        Ok(Prob {
            value: rational.to_f64().unwrap(),
            rational,
        })
    }

    pub fn from_rational(rational: BigRational) -> Result<Self> {
        if rational.is_negative() || rational > BigRational::one() {
            return Err(Error::InvalidParameter(format!(
                "bad probability {rational}"
            )));
        }
        Ok(Prob {
            value: rational.to_f64().unwrap(),
            rational,
        })
    }

    pub fn pow(&self, k: usize) -> Prob {
        Prob {
            value: self.value.powi(k as i32),
            rational: num_traits::pow::pow(self.rational.clone(), k),
        }
    }

    pub fn complement(&self) -> Prob {
        Prob {
            value: 1.0 - self.value,
            rational: BigRational::one() - &self.rational,
        }
    }
}

// ---------------------------------------------------------------------------
// SetFamily
// ---------------------------------------------------------------------------

/// A family of distinct subsets of `[n]`, optionally uniform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    sets: Vec<VertexSet>,
    uniformity: Option<usize>,
}

impl SetFamily {
    pub fn new(n: usize, sets: Vec<VertexSet>) -> Result<Self> {
        for (i, s) in sets.iter().enumerate() {
            if s.universe() != n {
                return Err(Error::InvalidParameter(format!(
                    "set {i} lives in universe {} != {n}",
                    s.universe()
                )));
            }
            for other in &sets[..i] {
                if s == other {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate set {:?}",
                        s.members()
                    )));
                }
            }
        }
        let uniformity = match sets.first() {
            Some(first) if sets.iter().all(|s| s.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Ok(SetFamily {
            n,
            sets,
            uniformity,
        })
    }

    pub fn from_members<I, J>(n: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = usize>,
    {
        SetFamily::new(
            n,
            sets.into_iter()
                .map(|s| VertexSet::from_members(n, s))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    /// Intersection of all member sets. Panics on an empty family.
    pub fn core(&self) -> VertexSet {
        let mut it = self.sets.iter();
        let mut core = it.next().expect("core of empty family").clone();
        for s in it {
            core = core.intersection(s);
        }
        core
    }

    // -- FAMILY text format ----------------------------------------------

    pub fn to_text(&self) -> String {
        let mut out = format!("FAMILY n={}\n", self.n);
        for s in &self.sets {
            let members: Vec<String> = s.members().iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&format!("S: {}\n", members.join(" ")));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<SetFamily> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n = header
            .strip_prefix("FAMILY n=")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("expected 'FAMILY n=<n>', got '{header}'"),
            })?;
        let mut sets = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                break;
            }
            let body = line.strip_prefix("S:").ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("expected 'S: v1 v2 ...', got '{line}'"),
            })?;
            let mut members = Vec::new();
            for tok in body.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad vertex '{tok}'"),
                })?;
                if v == 0 || v > n {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("vertex {v} out of range 1..={n}"),
                    });
                }
                members.push(v - 1);
            }
            let set = VertexSet::from_members(n, members.iter().copied());
            if set.len() != members.len() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "repeated vertex within a set".into(),
                });
            }
            if sets.contains(&set) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("duplicate set {:?}", set.members()),
                });
            }
            sets.push(set);
        }
        SetFamily::new(n, sets)
    }
}

/// Random ell-uniform family of `size` distinct sets on `[n]`.
pub fn random_uniform_family<R: Rng>(n: usize, ell: usize, size: usize, rng: &mut R) -> SetFamily {
    use crate::combinat::binomial;
    assert!(
        BigInt::from(size) <= binomial(n, ell),
        "not enough distinct ell-subsets"
    );
    let mut sets: Vec<VertexSet> = Vec::with_capacity(size);
    while sets.len() < size {
        let s = crate::graph::sample_subset_rng(n, ell, rng);
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    SetFamily {
        n,
        sets,
        uniformity: Some(ell),
    }
}

// ---------------------------------------------------------------------------
// k-sunflower search
// ---------------------------------------------------------------------------

/// Witness for a k-sunflower inside a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerWitness {
    pub petal_indices: Vec<usize>,
    pub core: VertexSet,
}

/// Per-core candidate frontier above which the disjoint-petal backtracking is
/// refused (the search stays complete or errors, never silently partial).
const PETAL_FRONTIER_CAP: usize = 24;

/// Exact search for a k-sunflower: for every candidate core (an intersection
/// of two members), backtrack over pairwise-disjoint petals.
pub fn find_k_sunflower(family: &SetFamily, k: usize) -> Result<Option<SunflowerWitness>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if family.len() < k {
        return Err(Error::InvalidParameter(format!(
            "family of {} sets cannot contain a {k}-sunflower",
            family.len()
        )));
    }
    if k == 1 {
        return Ok(Some(SunflowerWitness {
            petal_indices: vec![0],
            core: family.sets()[0].clone(),
        }));
    }

    // Candidate cores: distinct pairwise intersections, smallest first.
    let sets = family.sets();
    let mut cores: Vec<VertexSet> = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let c = sets[i].intersection(&sets[j]);
            if !cores.contains(&c) {
                cores.push(c);
            }
        }
    }
    cores.sort_by_key(|c| (c.len(), c.members()));

    let mut overflowed = false;
    for core in cores {
        let mut idx = Vec::new();
        let mut petals: Vec<Bitset> = Vec::new();
        for (i, s) in sets.iter().enumerate() {
            if core.is_subset(s) {
                idx.push(i);
                petals.push(Bitset::from_indices(family.n(), s.difference(&core).iter()));
            }
        }
        if idx.len() < k {
            continue;
        }
        if idx.len() > PETAL_FRONTIER_CAP {
            overflowed = true;
            continue;
        }
        let mut chosen = Vec::new();
        if pick_disjoint(&petals, 0, k, &mut chosen, &Bitset::new(family.n())) {
            let petal_indices: Vec<usize> = chosen.iter().map(|&c| idx[c]).collect();
            for (a, &i) in petal_indices.iter().enumerate() {
                for &j in &petal_indices[a + 1..] {
                    debug_assert_eq!(sets[i].intersection(&sets[j]), core);
                }
            }
            return Ok(Some(SunflowerWitness {
                petal_indices,
                core,
            }));
        }
    }
    if overflowed {
        return Err(Error::Capacity(format!(
            "a candidate core has more than {PETAL_FRONTIER_CAP} petal candidates"
        )));
    }
    Ok(None)
}

fn pick_disjoint(
    petals: &[Bitset],
    start: usize,
    need: usize,
    chosen: &mut Vec<usize>,
    used: &Bitset,
) -> bool {
    if need == 0 {
        return true;
    }
    for i in start..petals.len() {
        if petals.len() - i < need {
            return false;
        }
        if petals[i].is_disjoint(used) {
            chosen.push(i);
            if pick_disjoint(petals, i + 1, need - 1, chosen, &petals[i].union(used)) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Erdős–Rado bound `ell! * (k-1)^ell`.
pub fn erdos_rado_bound(ell: usize, k: usize) -> usize {
    let fact: usize = (1..=ell).product();
    fact * (k - 1).pow(ell as u32)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ErdosRadoReport {
    pub ell: usize,
    pub k: usize,
    pub bound: usize,
    pub families_checked: usize,
    pub families_without_sunflower: usize,
    pub holds: bool,
}

/// Checks that every supplied family of size >= `ell!(k-1)^ell` contains a
/// k-sunflower.
pub fn verify_erdos_rado<I>(ell: usize, k: usize, families: I) -> Result<ErdosRadoReport>
where
    I: IntoIterator<Item = SetFamily>,
{
    let bound = erdos_rado_bound(ell, k);
    let mut checked = 0;
    let mut misses = 0;
    for family in families {
        if family.uniformity() != Some(ell) {
            return Err(Error::InvalidParameter(format!(
                "family is not {ell}-uniform"
            )));
        }
        if family.len() < bound {
            return Err(Error::InvalidParameter(format!(
                "family of {} sets is below the bound {bound}",
                family.len()
            )));
        }
        checked += 1;
        if find_k_sunflower(&family, k)?.is_none() {
            misses += 1;
        }
    }
    Ok(ErdosRadoReport {
        ell,
        k,
        bound,
        families_checked: checked,
        families_without_sunflower: misses,
        holds: misses == 0,
    })
}

/// Exhaustively scans all ell-uniform families of the given size on `[n]` for
/// one with no k-sunflower. `Ok(None)` means the scan is exhausted: every such
/// family contains one.
pub fn search_family_without_sunflower(
    n: usize,
    ell: usize,
    size: usize,
    k: usize,
) -> Result<Option<SetFamily>> {
    let mut all_sets: Vec<VertexSet> = Vec::new();
    crate::combinat::for_each_combination(n, ell, |c| {
        all_sets.push(VertexSet::from_members(n, c.iter().copied()));
        true
    });
    if all_sets.len() < size {
        return Err(Error::InvalidParameter(format!(
            "only {} ell-subsets exist, cannot form families of {size}",
            all_sets.len()
        )));
    }
    let budget = crate::combinat::binomial(all_sets.len(), size);
    if budget > BigInt::from(20_000_000u64) {
        return Err(Error::Capacity(format!(
            "{budget} families is beyond the exhaustive-scan budget"
        )));
    }
    let mut found = None;
    crate::combinat::for_each_combination(all_sets.len(), size, |c| {
        let family = SetFamily {
            n,
            sets: c.iter().map(|&i| all_sets[i].clone()).collect(),
            uniformity: Some(ell),
        };
        match find_k_sunflower(&family, k) {
            Ok(None) => {
                found = Some(family);
                false
            }
            _ => true,
        }
    });
    Ok(found)
}

// ---------------------------------------------------------------------------
// Coverage probabilities
// ---------------------------------------------------------------------------

/// Exact enumeration or seeded Monte-Carlo.
#[derive(Clone, Debug)]
pub enum CoverageMode {
    Exact,
    Mc { trials: u64, seed: SeedSpec },
}

/// A coverage probability; `exact` is set in exact mode (zero-width CI).
#[derive(Clone, Debug)]
pub struct CoverageEstimate {
    pub probability: f64,
    pub exact: Option<BigRational>,
    pub ci_half_width: f64,
    pub trials: u64,
}

impl CoverageEstimate {
    fn from_exact(value: BigRational) -> Self {
        CoverageEstimate {
            probability: value.to_f64().unwrap(),
            exact: Some(value),
            ci_half_width: 0.0,
            trials: 0,
        }
    }

    fn from_freq(freq: FreqEstimate) -> Self {
        CoverageEstimate {
            probability: freq.estimate,
            exact: None,
            ci_half_width: freq.ci_half_width,
            trials: freq.trials,
        }
    }
}

/// Shared kernel: probability that a Bernoulli(p) subset of an `r`-element
/// universe contains at least one of the given masks.
fn union_coverage(masks: &[u32], r: usize, p: &Prob, mode: &CoverageMode) -> CoverageEstimate {
    match mode {
        CoverageMode::Exact => {
            if masks.is_empty() {
                return CoverageEstimate::from_exact(BigRational::zero());
            }
            let mut counts = vec![0u64; r + 1];
            for w in 0u64..1 << r {
                let w32 = w as u32;
                if crate::combinat::any_submask(masks, w32) {
                    counts[w.count_ones() as usize] += 1;
                }
            }
            CoverageEstimate::from_exact(rational_from_popcount_counts(&counts, &p.rational))
        }
        CoverageMode::Mc { trials, seed } => {
            use rayon::prelude::*;
            let hits: u64 = (0..*trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = seed.rng(t);
                    let mut w: u32 = 0;
                    for b in 0..r {
                        if rng.gen::<f64>() < p.value {
                            w |= 1 << b;
                        }
                    }
                    crate::combinat::any_submask(masks, w) as u64
                })
                .sum();
            CoverageEstimate::from_freq(FreqEstimate::from_counts(hits, *trials))
        }
    }
}

/// `Pr_W[∃S ∈ F: S ⊆ W ∪ C]` where `W` keeps each element of `[n]`
/// independently with probability p.
pub fn coverage_prob_set(
    family: &SetFamily,
    core: &VertexSet,
    p: &Prob,
    mode: &CoverageMode,
) -> Result<CoverageEstimate> {
    let petals: Vec<Vec<usize>> = family
        .sets()
        .iter()
        .map(|s| s.difference(core).members())
        .collect();
    masked_coverage(&petals, p, mode, "set elements")
}

/// `Pr_G[∃S ∈ F: K_S ⊆ G ∪ K_C]` where `G ~ G(n,p)`.
pub fn coverage_prob_clique(
    family: &SetFamily,
    core: &VertexSet,
    p: &Prob,
    mode: &CoverageMode,
) -> Result<CoverageEstimate> {
    let core_slots: std::collections::HashSet<usize> =
        core.clique_edge_slots().into_iter().collect();
    let petals: Vec<Vec<usize>> = family
        .sets()
        .iter()
        .map(|s| {
            s.clique_edge_slots()
                .into_iter()
                .filter(|slot| !core_slots.contains(slot))
                .collect()
        })
        .collect();
    masked_coverage(&petals, p, mode, "petal edges")
}

fn masked_coverage(
    petals: &[Vec<usize>],
    p: &Prob,
    mode: &CoverageMode,
    what: &str,
) -> Result<CoverageEstimate> {
    let mut relevant: Vec<usize> = petals.iter().flatten().copied().collect();
    relevant.sort_unstable();
    relevant.dedup();
    let r = relevant.len();
    if matches!(mode, CoverageMode::Exact) && r > EXACT_UNIVERSE_CAP {
        return Err(Error::Capacity(format!(
            "exact coverage needs <= {EXACT_UNIVERSE_CAP} relevant {what}, instance has {r}"
        )));
    }
    let masks: Vec<u32> = petals
        .iter()
        .map(|petal| {
            let mut m = 0u32;
            for item in petal {
                m |= 1 << relevant.binary_search(item).unwrap();
            }
            m
        })
        .collect();
    Ok(union_coverage(&masks, r, p, mode))
}

// ---------------------------------------------------------------------------
// Robustness verdicts
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RobustKind {
    Set,
    Clique,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct RobustnessVerdict {
    pub kind: RobustKind,
    pub coverage: CoverageEstimate,
    /// `1 - eps`.
    pub threshold: f64,
    pub verdict: Verdict,
}

/// Tests whether `family` is a (p, eps)-robust (clique) sunflower with its
/// own core `C = ⋂F`. Monte-Carlo verdicts are tri-state: straddling the
/// threshold at the 99% level is Inconclusive, not a guess.
pub fn check_robust(
    family: &SetFamily,
    core: &VertexSet,
    p: &Prob,
    eps: &Prob,
    kind: RobustKind,
    mode: &CoverageMode,
) -> Result<RobustnessVerdict> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("empty family".into()));
    }
    if *core != family.core() {
        return Err(Error::InvalidParameter(
            "core must be the intersection of the family".into(),
        ));
    }
    let coverage = match kind {
        RobustKind::Set => coverage_prob_set(family, core, p, mode)?,
        RobustKind::Clique => coverage_prob_clique(family, core, p, mode)?,
    };
    let threshold = eps.complement();
    let verdict = coverage_verdict(&coverage, &threshold);
    Ok(RobustnessVerdict {
        kind,
        coverage,
        threshold: threshold.value,
        verdict,
    })
}

pub(crate) fn coverage_verdict(coverage: &CoverageEstimate, threshold: &Prob) -> Verdict {
    match &coverage.exact {
        Some(exact) => {
            if *exact >= threshold.rational {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        None => {
            if coverage.probability - coverage.ci_half_width >= threshold.value {
                Verdict::Pass
            } else if coverage.probability + coverage.ci_half_width < threshold.value {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lemma-level verifiers
// ---------------------------------------------------------------------------

/// The canonical ell-uniform k-sunflower with a core of size `c`: disjoint
/// petals laid out consecutively after the core.
pub fn canonical_sunflower(ell: usize, k: usize, c: usize) -> Result<SetFamily> {
    if c >= ell || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "need core size c={c} < ell={ell} and k={k} >= 1"
        )));
    }
    let petal = ell - c;
    let n = c + k * petal;
    let sets: Vec<VertexSet> = (0..k)
        .map(|i| VertexSet::from_members(n, (0..c).chain(c + i * petal..c + (i + 1) * petal)))
        .collect();
    SetFamily::new(n, sets)
}

#[derive(Clone, Debug)]
pub struct SunflowerRcsReport {
    pub ell: usize,
    pub k: usize,
    pub core_size: usize,
    /// Exact failure probability 1 - coverage (enumeration).
    pub failure: BigRational,
    /// Independent-petal closed form `(1 - p^(C(ell,2)-C(c,2)))^k`.
    pub closed_form: BigRational,
    /// `exp(-k * p^C(ell,2))`.
    pub bound: f64,
    pub holds: bool,
}

/// Every ell-uniform k-sunflower is a (p, exp(-k p^C(ell,2)))-robust clique
/// sunflower: builds the canonical sunflower, computes the exact failure
/// probability two ways, and compares against the bound.
pub fn verify_sunflower_is_rcs(
    ell: usize,
    k: usize,
    c: usize,
    p: &Prob,
) -> Result<SunflowerRcsReport> {
    let family = canonical_sunflower(ell, k, c)?;
    // The prescribed core {0..c}; for k >= 2 this equals the family
    // intersection, for k = 1 the intersection would be the whole set.
    let core = VertexSet::from_members(family.n(), 0..c);
    debug_assert!(k == 1 || core == family.core());
    let coverage = coverage_prob_clique(&family, &core, p, &CoverageMode::Exact)?;
    let exact = coverage.exact.expect("exact mode");
    let failure = BigRational::one() - exact;

    // Petal edge sets are disjoint, so the per-petal coverage events are
    // independent and the failure probability factors.
    let petal_edges = choose2(ell) - choose2(c);
    let miss = BigRational::one() - p.pow(petal_edges).rational;
    let closed_form = num_traits::pow::pow(miss, k);

    let bound = (-(k as f64) * p.value.powi(choose2(ell) as i32)).exp();
    let holds = failure.to_f64().unwrap() <= bound;
    Ok(SunflowerRcsReport {
        ell,
        k,
        core_size: c,
        failure,
        closed_form,
        bound,
        holds,
    })
}

#[derive(Clone, Debug)]
pub struct RsImpliesRcsReport {
    pub requested: usize,
    pub attempts: usize,
    pub premise_satisfying: usize,
    /// Families satisfying the robust-sunflower premise whose clique coverage
    /// missed the conclusion threshold. Expected empty.
    pub counterexamples: Vec<SetFamily>,
    pub holds: bool,
}

/// Empirical check of the reduction: every family that is a
/// `(p^ell, eps/ell^2)`-robust sunflower is also a `(p, eps)`-robust clique
/// sunflower. Exact rational computation on both sides; generation is biased
/// toward families with small petals so the premise is reachable.
pub fn verify_rs_implies_rcs(
    sample_count: usize,
    n: usize,
    ell: usize,
    p: &Prob,
    eps: &Prob,
    seed: &SeedSpec,
) -> Result<RsImpliesRcsReport> {
    if ell < 2 || ell > n {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= ell <= n, got ell={ell}, n={n}"
        )));
    }
    let ell_sq = BigInt::from(ell * ell);
    let premise_p = Prob::from_rational(num_traits::pow::pow(p.rational.clone(), ell))?;
    let premise_threshold =
        Prob::from_rational(BigRational::one() - &eps.rational / BigRational::from(ell_sq))?;
    let conclusion_threshold = eps.complement();

    let mut attempts = 0;
    let mut satisfying = 0;
    let mut counterexamples = Vec::new();
    let max_attempts = sample_count.saturating_mul(400);
    let mut trial = 0u64;
    while satisfying < sample_count && attempts < max_attempts {
        let mut rng = seed.rng(trial);
        trial += 1;
        attempts += 1;
        let Some(family) = random_biased_family(n, ell, &mut rng) else {
            continue;
        };
        let core = family.core();
        let premise = match coverage_prob_set(&family, &core, &premise_p, &CoverageMode::Exact) {
            Ok(c) => c,
            Err(Error::Capacity(_)) => continue,
            Err(e) => return Err(e),
        };
        if *premise.exact.as_ref().unwrap() < premise_threshold.rational {
            continue;
        }
        let conclusion = match coverage_prob_clique(&family, &core, p, &CoverageMode::Exact) {
            Ok(c) => c,
            Err(Error::Capacity(_)) => continue,
            Err(e) => return Err(e),
        };
        satisfying += 1;
        if *conclusion.exact.as_ref().unwrap() < conclusion_threshold.rational {
            counterexamples.push(family);
        }
    }
    if satisfying < sample_count {
        return Err(Error::Capacity(format!(
            "only {satisfying}/{sample_count} premise-satisfying families found \
             in {attempts} attempts; premise too strict at these parameters"
        )));
    }
    Ok(RsImpliesRcsReport {
        requested: sample_count,
        attempts,
        premise_satisfying: satisfying,
        holds: counterexamples.is_empty(),
        counterexamples,
    })
}

/// Random ell-uniform family biased toward large cores (small petals), so
/// high set-coverage premises occur at a usable rate.
fn random_biased_family<R: Rng>(n: usize, ell: usize, rng: &mut R) -> Option<SetFamily> {
    let core_size = if rng.gen_bool(0.7) {
        ell - 1
    } else {
        rng.gen_range(0..ell)
    };
    let core = crate::graph::sample_subset_rng(n, core_size, rng);
    let outside: Vec<usize> = (0..n).filter(|v| !core.contains(*v)).collect();
    let petal_size = ell - core_size;
    if outside.len() < petal_size {
        return None;
    }
    let target = rng.gen_range(2..=7usize);
    let mut sets: Vec<VertexSet> = Vec::new();
    for _ in 0..4 * target {
        if sets.len() >= target {
            break;
        }
        let mut members = core.members();
        let mut pool = outside.clone();
        for i in 0..petal_size {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        members.extend_from_slice(&pool[..petal_size]);
        let s = VertexSet::from_members(n, members);
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    if sets.len() < 2 {
        return None;
    }
    Some(SetFamily {
        n,
        uniformity: Some(ell),
        sets,
    })
}
