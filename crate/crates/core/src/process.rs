//! Stochastic-process comparison machinery: proper liftings of k-uniform
//! families into the cell grid `[n] x [n]`, the interpolated liftings
//! `phi_t`, and exact / Monte-Carlo expected suprema of the associated
//! processes.

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::seed::SeedSpec;
use crate::stats::MeanEstimate;
use crate::sunflower::{coverage_prob_set, CoverageMode, Prob, SetFamily};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Exact-mode capacity: number of distinct cells under the lifting.
pub const EXACT_CELL_CAP: usize = 22;

pub type Cell = (usize, usize);

// ---------------------------------------------------------------------------
// Liftings
// ---------------------------------------------------------------------------

/// A map from the sets of a k-uniform family to `k*ell`-element cell sets
/// with exactly `ell` cells in every member row (a proper lifting).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifting {
    family: SetFamily,
    ell: usize,
    /// Cell lists aligned with `family.sets()`, each sorted.
    cells: Vec<Vec<Cell>>,
}

impl Lifting {
    /// `phi(S) = S x [ell]`: the smallest process in the comparison order.
    pub fn left(family: &SetFamily, ell: usize) -> Result<Lifting> {
        let k = require_uniform(family)?;
        let _ = k;
        if ell == 0 || ell > family.n() {
            return Err(Error::InvalidParameter(format!(
                "ell={ell} out of range 1..={}",
                family.n()
            )));
        }
        let cells = family
            .sets()
            .iter()
            .map(|s| {
                let mut cs: Vec<Cell> = s
                    .iter()
                    .flat_map(|i| (0..ell).map(move |j| (i, j)))
                    .collect();
                cs.sort_unstable();
                cs
            })
            .collect();
        Ok(Lifting {
            family: family.clone(),
            ell,
            cells,
        })
    }

    /// `phi(S) = S x S`; requires `ell = k`.
    pub fn square(family: &SetFamily) -> Result<Lifting> {
        let k = require_uniform(family)?;
        let cells = family
            .sets()
            .iter()
            .map(|s| {
                let members = s.members();
                let mut cs: Vec<Cell> = members
                    .iter()
                    .flat_map(|&i| members.iter().map(move |&j| (i, j)))
                    .collect();
                cs.sort_unstable();
                cs
            })
            .collect();
        Ok(Lifting {
            family: family.clone(),
            ell: k,
            cells,
        })
    }

    /// `phi(S) = S x (C ∪ S)` for a fixed column set `C` disjoint from every
    /// member; row multiplicity `|C| + k`.
    pub fn link(family: &SetFamily, core: &VertexSet) -> Result<Lifting> {
        let k = require_uniform(family)?;
        if core.universe() != family.n() {
            return Err(Error::InvalidParameter(
                "core universe mismatch".into(),
            ));
        }
        for s in family.sets() {
            if !core.is_disjoint(s) {
                return Err(Error::InvalidParameter(format!(
                    "link lifting needs the column core {:?} disjoint from {:?}",
                    core.members(),
                    s.members()
                )));
            }
        }
        let ell = k + core.len();
        let cells = family
            .sets()
            .iter()
            .map(|s| {
                let cols: Vec<usize> = core.union(s).members();
                let mut cs: Vec<Cell> = s
                    .iter()
                    .flat_map(|i| cols.iter().map(move |&j| (i, j)))
                    .collect();
                cs.sort_unstable();
                cs
            })
            .collect();
        Ok(Lifting {
            family: family.clone(),
            ell,
            cells,
        })
    }

    /// Random proper lifting: each member row receives `ell` distinct random
    /// columns.
    pub fn random_proper<R: Rng>(family: &SetFamily, ell: usize, rng: &mut R) -> Result<Lifting> {
        require_uniform(family)?;
        let n = family.n();
        if ell == 0 || ell > n {
            return Err(Error::InvalidParameter(format!(
                "ell={ell} out of range 1..={n}"
            )));
        }
        let cells = family
            .sets()
            .iter()
            .map(|s| {
                let mut cs: Vec<Cell> = Vec::new();
                for i in s.iter() {
                    let cols = crate::graph::sample_subset_rng(n, ell, rng);
                    cs.extend(cols.iter().map(|j| (i, j)));
                }
                cs.sort_unstable();
                cs
            })
            .collect();
        Ok(Lifting {
            family: family.clone(),
            ell,
            cells,
        })
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn cells(&self) -> &[Vec<Cell>] {
        &self.cells
    }

    /// Def-level properness: every member row carries exactly `ell` distinct
    /// cells, no cells outside member rows, total `k*ell`.
    pub fn validate_proper(&self) -> bool {
        for (s, cs) in self.family.sets().iter().zip(&self.cells) {
            let mut dedup = cs.clone();
            dedup.dedup();
            if dedup.len() != cs.len() {
                return false;
            }
            if cs.len() != s.len() * self.ell {
                return false;
            }
            for i in s.iter() {
                if cs.iter().filter(|&&(r, _)| r == i).count() != self.ell {
                    return false;
                }
            }
            if cs.iter().any(|&(r, c)| !s.contains(r) || c >= self.family.n()) {
                return false;
            }
        }
        true
    }

    /// The interpolated lifting `phi_t`: rows below `t` keep this lifting's
    /// cells, rows from `t` on follow `S x [ell]`, so that `phi_0` is the
    /// left lifting and `phi_n` is this one.
    pub fn interpolate(&self, t: usize) -> Result<Lifting> {
        if t > self.family.n() {
            return Err(Error::InvalidParameter(format!(
                "t={t} out of range 0..={}",
                self.family.n()
            )));
        }
        let cells = self
            .family
            .sets()
            .iter()
            .zip(&self.cells)
            .map(|(s, cs)| {
                let mut out: Vec<Cell> = cs.iter().copied().filter(|&(r, _)| r < t).collect();
                out.extend(
                    s.iter()
                        .filter(|&i| i >= t)
                        .flat_map(|i| (0..self.ell).map(move |j| (i, j))),
                );
                out.sort_unstable();
                out
            })
            .collect();
        Ok(Lifting {
            family: self.family.clone(),
            ell: self.ell,
            cells,
        })
    }

    // -- JSON serialization ------------------------------------------------

    /// JSON object mapping each set ("v1 v2 ...", 1-based) to its cell list.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (s, cs) in self.family.sets().iter().zip(&self.cells) {
            let key = s
                .members()
                .iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let cells: Vec<serde_json::Value> = cs
                .iter()
                .map(|&(r, c)| serde_json::json!([r + 1, c + 1]))
                .collect();
            map.insert(key, serde_json::Value::Array(cells));
        }
        serde_json::json!({
            "n": self.family.n(),
            "ell": self.ell,
            "map": map,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Lifting> {
        let bad = |msg: &str| Error::Parse {
            line: 0,
            msg: msg.to_string(),
        };
        let n = value["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let ell = value["ell"].as_u64().ok_or_else(|| bad("missing ell"))? as usize;
        let map = value["map"].as_object().ok_or_else(|| bad("missing map"))?;
        let mut sets = Vec::new();
        let mut cells = Vec::new();
        for (key, cell_list) in map {
            let members: Vec<usize> = key
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .ok()
                        .and_then(|v| v.checked_sub(1))
                        .ok_or_else(|| bad(&format!("bad set key '{key}'")))
                })
                .collect::<Result<_>>()?;
            sets.push(VertexSet::from_members(n, members.iter().copied()));
            let cs: Vec<Cell> = cell_list
                .as_array()
                .ok_or_else(|| bad("cell list is not an array"))?
                .iter()
                .map(|c| {
                    let pair = c.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                        bad("cell is not a [row, col] pair")
                    })?;
                    let r = pair[0].as_u64().ok_or_else(|| bad("bad row"))? as usize;
                    let col = pair[1].as_u64().ok_or_else(|| bad("bad col"))? as usize;
                    if r == 0 || r > n || col == 0 || col > n {
                        return Err(bad(&format!("cell ({r},{col}) out of range")));
                    }
                    Ok((r - 1, col - 1))
                })
                .collect::<Result<_>>()?;
            cells.push(cs);
        }
        let family = SetFamily::new(n, sets)?;
        Ok(Lifting { family, ell, cells })
    }
}

fn require_uniform(family: &SetFamily) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("empty family".into()));
    }
    family
        .uniformity()
        .filter(|&k| k > 0)
        .ok_or_else(|| Error::InvalidParameter("family must be uniform".into()))
}

// ---------------------------------------------------------------------------
// Cell distributions and expected suprema
// ---------------------------------------------------------------------------

/// i.i.d. distribution of the cell variables.
#[derive(Clone, Debug)]
pub enum CellDist {
    Bernoulli(Prob),
    /// Finite support `(value, probability)`; probabilities sum to 1.
    Finite(Vec<(f64, f64)>),
}

impl CellDist {
    pub fn validate(&self) -> Result<()> {
        match self {
            CellDist::Bernoulli(_) => Ok(()),
            CellDist::Finite(support) => {
                if support.is_empty() {
                    return Err(Error::InvalidParameter("empty support".into()));
                }
                let total: f64 = support.iter().map(|&(_, p)| p).sum();
                if (total - 1.0).abs() > 1e-9 || support.iter().any(|&(_, p)| p < 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "support probabilities sum to {total}, want 1"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            CellDist::Bernoulli(p) => p.value,
            CellDist::Finite(support) => support.iter().map(|&(v, p)| v * p).sum(),
        }
    }

    pub fn max_value(&self) -> f64 {
        match self {
            CellDist::Bernoulli(_) => 1.0,
            CellDist::Finite(support) => {
                support.iter().map(|&(v, _)| v).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            CellDist::Bernoulli(p) => (rng.gen::<f64>() < p.value) as u8 as f64,
            CellDist::Finite(support) => {
                let mut u = rng.gen::<f64>();
                for &(v, p) in support {
                    if u < p {
                        return v;
                    }
                    u -= p;
                }
                support.last().unwrap().0
            }
        }
    }
}

/// An expected supremum; `exact` is set in exact Bernoulli mode.
#[derive(Clone, Debug)]
pub struct SupEstimate {
    pub value: f64,
    pub exact: Option<BigRational>,
    pub ci_half_width: f64,
    pub trials: u64,
}

#[derive(Clone, Debug)]
pub enum SupMode {
    Exact,
    Mc { trials: u64, seed: SeedSpec },
}

/// `E sup_{S in F} sum_{(i,j) in phi(S)} A_{i,j}` for i.i.d. cells. Exact
/// mode enumerates assignments of the cells in `∪ phi(S)` (all other cells
/// cancel in the sup); Bernoulli cells yield an exact rational.
pub fn expected_sup(lifting: &Lifting, dist: &CellDist, mode: &SupMode) -> Result<SupEstimate> {
    dist.validate()?;
    if lifting.family.is_empty() {
        return Err(Error::InvalidParameter("empty family".into()));
    }
    let mut relevant: Vec<Cell> = lifting.cells.iter().flatten().copied().collect();
    relevant.sort_unstable();
    relevant.dedup();
    let r = relevant.len();
    match mode {
        SupMode::Exact => {
            if r > EXACT_CELL_CAP {
                return Err(Error::Capacity(format!(
                    "exact expected-sup needs <= {EXACT_CELL_CAP} relevant cells, got {r}"
                )));
            }
            match dist {
                CellDist::Bernoulli(p) => Ok(exact_sup_bernoulli(lifting, &relevant, p)),
                CellDist::Finite(support) => exact_sup_finite(lifting, &relevant, support),
            }
        }
        SupMode::Mc { trials, seed } => {
            use rayon::prelude::*;
            let indices: Vec<Vec<usize>> = lifting
                .cells
                .iter()
                .map(|cs| {
                    cs.iter()
                        .map(|c| relevant.binary_search(c).unwrap())
                        .collect()
                })
                .collect();
            let samples: Vec<f64> = (0..*trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = seed.rng(t);
                    let values: Vec<f64> = (0..r).map(|_| dist.sample(&mut rng)).collect();
                    indices
                        .iter()
                        .map(|idx| idx.iter().map(|&i| values[i]).sum::<f64>())
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .collect();
            let est = MeanEstimate::from_samples(&samples);
            Ok(SupEstimate {
                value: est.mean,
                exact: None,
                ci_half_width: est.ci_half_width,
                trials: *trials,
            })
        }
    }
}

fn exact_sup_bernoulli(lifting: &Lifting, relevant: &[Cell], p: &Prob) -> SupEstimate {
    let r = relevant.len();
    let masks: Vec<u64> = lifting
        .cells
        .iter()
        .map(|cs| {
            let mut m = 0u64;
            for c in cs {
                m |= 1 << relevant.binary_search(c).unwrap();
            }
            m
        })
        .collect();
    let max_sum = lifting.cells.iter().map(|cs| cs.len()).max().unwrap();
    // counts[popcount][sup value]
    let mut counts = vec![vec![0u64; max_sum + 1]; r + 1];
    for w in 0u64..1 << r {
        let sup = masks
            .iter()
            .map(|&m| (m & w).count_ones() as usize)
            .max()
            .unwrap();
        counts[w.count_ones() as usize][sup] += 1;
    }
    let mut total = BigRational::zero();
    #[allow(clippy::needless_range_loop)] // v indexes the inner dimension
    for v in 1..=max_sum {
        let column: Vec<u64> = (0..=r).map(|k| counts[k][v]).collect();
        if column.iter().all(|&c| c == 0) {
            continue;
        }
        let prob_v = rational_column(&column, &p.rational);
        total += prob_v * BigRational::from(BigInt::from(v));
    }
    SupEstimate {
        value: total.to_f64().unwrap(),
        exact: Some(total),
        ci_half_width: 0.0,
        trials: 0,
    }
}

fn rational_column(counts: &[u64], p: &BigRational) -> BigRational {
    crate::combinat::rational_from_popcount_counts(counts, p)
}

fn exact_sup_finite(
    lifting: &Lifting,
    relevant: &[Cell],
    support: &[(f64, f64)],
) -> Result<SupEstimate> {
    let r = relevant.len();
    let d = support.len();
    let states = (d as f64).powi(r as i32);
    if states > (1u64 << 22) as f64 {
        return Err(Error::Capacity(format!(
            "{d}^{r} assignments exceed the exact enumeration budget"
        )));
    }
    let indices: Vec<Vec<usize>> = lifting
        .cells
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|c| relevant.binary_search(c).unwrap())
                .collect()
        })
        .collect();
    let mut digits = vec![0usize; r];
    let mut total = 0.0;
    loop {
        let weight: f64 = digits.iter().map(|&i| support[i].1).product();
        if weight > 0.0 {
            let sup = indices
                .iter()
                .map(|idx| idx.iter().map(|&i| support[digits[i]].0).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            total += weight * sup;
        }
        // Odometer.
        let mut pos = 0;
        loop {
            if pos == r {
                return Ok(SupEstimate {
                    value: total,
                    exact: None,
                    ci_half_width: 0.0,
                    trials: 0,
                });
            }
            digits[pos] += 1;
            if digits[pos] < d {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Comparison chain
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ChainReport {
    /// Exact expected suprema under `phi_0, ..., phi_n`.
    pub values: Vec<SupEstimate>,
    pub non_decreasing: bool,
}

/// Computes the full interpolation chain exactly and checks it never
/// decreases; `phi_0 = S x [ell]` and `phi_n = phi` make this the comparison
/// inequality plus all intermediate steps.
pub fn verify_comparison_chain(lifting: &Lifting, dist: &CellDist) -> Result<ChainReport> {
    let n = lifting.family.n();
    let mut values = Vec::with_capacity(n + 1);
    for t in 0..=n {
        let phi_t = lifting.interpolate(t)?;
        values.push(expected_sup(&phi_t, dist, &SupMode::Exact)?);
    }
    let non_decreasing = values.windows(2).all(|w| match (&w[0].exact, &w[1].exact) {
        (Some(a), Some(b)) => a <= b,
        _ => w[0].value <= w[1].value + 1e-12,
    });
    Ok(ChainReport {
        values,
        non_decreasing,
    })
}

// ---------------------------------------------------------------------------
// The reduction bridge
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct BridgeReport {
    /// Exact set coverage of the petals at rate p^ell.
    pub premise_coverage: BigRational,
    pub premise_holds: bool,
    pub e_left: BigRational,
    pub e_link: BigRational,
    /// `ell*k - eps`.
    pub target: BigRational,
    pub holds: bool,
}

/// For an ell-uniform family with core C: when the family is a
/// `(p^ell, eps/ell^2)`-robust sunflower, the expected supremum of the linked
/// process on the petals dominates `ell*k - eps`. Exact rationals throughout.
pub fn verify_lemma33_bridge(
    family: &SetFamily,
    p: &Prob,
    eps: &Prob,
    ) -> Result<BridgeReport> {
    let ell = family
        .uniformity()
        .ok_or_else(|| Error::InvalidParameter("family must be uniform".into()))?;
    if ell < 1 {
        return Err(Error::InvalidParameter("need ell >= 1".into()));
    }
    let core = family.core();
    let k = ell - core.len();
    if k == 0 {
        return Err(Error::InvalidParameter(
            "family collapses to its core".into(),
        ));
    }
    let petals: Vec<VertexSet> = family.sets().iter().map(|s| s.difference(&core)).collect();
    let petal_family = SetFamily::new(family.n(), petals)?;

    let premise_p = Prob::from_rational(num_traits::pow::pow(p.rational.clone(), ell))?;
    let premise_threshold = BigRational::one()
        - &eps.rational / BigRational::from(BigInt::from(ell * ell));
    let premise = coverage_prob_set(family, &core, &premise_p, &CoverageMode::Exact)?
        .exact
        .expect("exact mode");
    let premise_holds = premise >= premise_threshold;

    let left = Lifting::left(&petal_family, ell)?;
    let link = Lifting::link(&petal_family, &core)?;
    let dist = CellDist::Bernoulli(p.clone());
    let e_left = expected_sup(&left, &dist, &SupMode::Exact)?
        .exact
        .expect("bernoulli exact");
    let e_link = expected_sup(&link, &dist, &SupMode::Exact)?
        .exact
        .expect("bernoulli exact");

    let target = BigRational::from(BigInt::from(ell * k)) - &eps.rational;
    let holds = !premise_holds || (e_left <= e_link && e_link >= target);
    Ok(BridgeReport {
        premise_coverage: premise,
        premise_holds,
        e_left,
        e_link,
        target,
        holds,
    })
}
