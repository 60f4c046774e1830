//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them).

use cliquelab::approx::{
    approx_and, approx_or, audit_simple_approximator, closure, pointwise_le, trim, Approximator,
    ClosureCfg, Icomp,
};
use cliquelab::circuit::{
    batcher_network, build_clique_indicator, build_threshold_over_slots, estimate_acceptance,
    exact_acceptance_negative, exact_acceptance_positive, Distribution, MonotoneCircuit,
};
use cliquelab::distinguisher::{measure_success, select_clique_size, DistinguisherParams};
use cliquelab::graph::{
    edge_probability, sample_negative, Graph, NegDistParams, PosDistParams, VertexSet,
};
use cliquelab::process::{expected_sup, verify_comparison_chain, CellDist, Lifting, SupMode};
use cliquelab::sunflower::{
    coverage_prob_clique, coverage_prob_set, random_uniform_family, verify_rs_implies_rcs,
    verify_sunflower_is_rcs, CoverageMode, Prob, SetFamily,
};
use cliquelab::{BigRational, SeedSpec};
use num_traits::{One, ToPrimitive};
use rand::Rng;

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!("ACCEPTANCE {id} ({name}): {} — {detail}", verdict(pass));
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

/// Criterion 1: the explicit distinguisher at n=100, alpha=20, beta=50 with
/// selected ell (expected 6) and calibrated m, tau clears the 2/3 bar on both
/// sides over >= 1000 trials per distribution, single-threaded within 5
/// minutes.
#[test]
fn criterion_1_distinguisher_end_to_end() {
    let start = std::time::Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let (sel, report_data) = pool.install(|| {
        let sel = select_clique_size(100, 20, 50).unwrap();
        let params =
            DistinguisherParams::plan(100, 20, 50, 0.1, SeedSpec::new(20_240_817, 0)).unwrap();
        let rep = measure_success(&params, 1000).unwrap();
        (sel, rep)
    });
    let elapsed = start.elapsed();

    // Feasibility per the clique-probability formulas: 5 p^15 <= (1/2)^6.
    let p = edge_probability(100, 20).unwrap();
    let feasible = 5.0 * p.powi(15) <= 0.5f64.powi(6);
    let pass = sel.ell == 6
        && feasible
        && report_data.trials >= 1000
        && report_data.accept_pos >= 2.0 / 3.0
        && report_data.reject_neg >= 2.0 / 3.0
        && elapsed.as_secs() < 300;
    report(
        1,
        "distinguisher end-to-end",
        pass,
        &format!(
            "ell={} m={} tau={} accept_pos={:.4} reject_neg={:.4} circuit_size={} \
             single-thread elapsed={:.1}s (budget 300s)",
            report_data.ell,
            report_data.m,
            report_data.tau,
            report_data.accept_pos,
            report_data.reject_neg,
            report_data.circuit_size,
            elapsed.as_secs_f64()
        ),
    );
}

/// Criterion 2: Monte-Carlo estimators agree with their exact enumerating
/// oracles within 3 sigma on >= 100 random small instances each
/// (coverage_prob_set, coverage_prob_clique, estimate_acceptance).
#[test]
fn criterion_2_exact_vs_mc_agreement() {
    let seed = SeedSpec::new(20_240_818, 0);
    let mut rng = seed.rng(0);
    let trials = 4000u64;
    let mut checked = [0usize; 3];
    let mut worst_z = 0.0f64;

    // Coverage estimators, set and clique mode.
    for i in 0..100u64 {
        let ell = 2 + (i % 2) as usize;
        let nsets = 3 + (i % 3) as usize;
        let family = random_uniform_family(7, ell, nsets, &mut rng);
        let core = family.core();
        let p = Prob::from_f64(0.2 + 0.6 * rng.gen::<f64>()).unwrap();
        for (which, idx) in [(true, 0usize), (false, 1usize)] {
            let exact = if which {
                coverage_prob_set(&family, &core, &p, &CoverageMode::Exact).unwrap()
            } else {
                coverage_prob_clique(&family, &core, &p, &CoverageMode::Exact).unwrap()
            };
            let mc_mode = CoverageMode::Mc {
                trials,
                seed: seed.stream(1000 + 2 * i + idx as u64),
            };
            let mc = if which {
                coverage_prob_set(&family, &core, &p, &mc_mode).unwrap()
            } else {
                coverage_prob_clique(&family, &core, &p, &mc_mode).unwrap()
            };
            let v = exact.probability;
            let sigma = (v * (1.0 - v) / trials as f64).sqrt();
            let dev = (mc.probability - v).abs();
            if sigma == 0.0 {
                assert_eq!(mc.probability, v, "instance {i}");
            } else {
                worst_z = worst_z.max(dev / sigma);
                assert!(
                    dev <= 3.0 * sigma,
                    "coverage instance {i} ({}): mc {} vs exact {v}",
                    if which { "set" } else { "clique" },
                    mc.probability
                );
            }
            checked[idx] += 1;
        }
    }

    // Acceptance estimator against both exact oracles.
    let neg = NegDistParams::with_forced_p(5, 4, 0.45).unwrap();
    let pos = PosDistParams::new(5, 3).unwrap();
    for i in 0..100u64 {
        let circuit = random_circuit(5, 22, &mut rng);
        let (dist, exact): (Distribution, f64) = if i % 2 == 0 {
            (
                Distribution::Negative(neg),
                exact_acceptance_negative(&circuit, &neg).unwrap(),
            )
        } else {
            (
                Distribution::Positive(pos),
                exact_acceptance_positive(&circuit, &pos)
                    .unwrap()
                    .to_f64()
                    .unwrap(),
            )
        };
        let est = estimate_acceptance(&circuit, &dist, trials, &seed.stream(5000 + i)).unwrap();
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let dev = (est.estimate - exact).abs();
        if sigma == 0.0 {
            assert_eq!(est.estimate, exact, "circuit {i}");
        } else {
            worst_z = worst_z.max(dev / sigma);
            assert!(
                dev <= 3.0 * sigma,
                "acceptance instance {i}: mc {} vs exact {exact}",
                est.estimate
            );
        }
        checked[2] += 1;
    }
    let pass = checked.iter().all(|&c| c >= 100);
    report(
        2,
        "exact-vs-MC agreement",
        pass,
        &format!(
            "instances: coverage_set={} coverage_clique={} estimate_acceptance={}, \
             worst |z|={worst_z:.2} (limit 3)",
            checked[0], checked[1], checked[2]
        ),
    );
}

/// Criterion 3: for every (ell, k, c, p) in the grid, the exact
/// clique-coverage failure of the canonical sunflower stays below
/// exp(-k p^C(ell,2)), with exact arithmetic and zero violations.
#[test]
fn criterion_3_sunflower_is_rcs_grid() {
    let mut configs = 0;
    let mut violations = 0;
    for ell in [2usize, 3] {
        for k in [2usize, 3, 4] {
            for c in [0usize, 1] {
                for (num, den) in [(3u64, 10u64), (1, 2), (7, 10)] {
                    let p = Prob::from_ratio(num, den).unwrap();
                    let rep = verify_sunflower_is_rcs(ell, k, c, &p).unwrap();
                    configs += 1;
                    // The enumeration must reproduce the independent-petal
                    // closed form exactly, and sit below the bound.
                    if !rep.holds || rep.failure != rep.closed_form {
                        violations += 1;
                    }
                }
            }
        }
    }
    report(
        3,
        "Lemma: k-sunflowers are robust clique sunflowers",
        violations == 0,
        &format!("{configs} parameter configs, {violations} violations (exact rationals)"),
    );
}

/// Criterion 4: >= 700 premise-satisfying random families across ell in
/// {2,3} produce zero counterexamples to "robust sunflower at (p^ell,
/// eps/ell^2) implies robust clique sunflower at (p, eps)", exact both sides.
#[test]
fn criterion_4_rs_implies_rcs() {
    let seed = SeedSpec::new(20_240_819, 0);
    let a = verify_rs_implies_rcs(
        500,
        8,
        2,
        &Prob::from_ratio(7, 10).unwrap(),
        &Prob::from_ratio(3, 10).unwrap(),
        &seed,
    )
    .unwrap();
    let b = verify_rs_implies_rcs(
        200,
        7,
        3,
        &Prob::from_ratio(8, 10).unwrap(),
        &Prob::from_ratio(4, 10).unwrap(),
        &seed.stream(1),
    )
    .unwrap();
    let satisfying = a.premise_satisfying + b.premise_satisfying;
    let counterexamples = a.counterexamples.len() + b.counterexamples.len();
    let pass = satisfying >= 700 && counterexamples == 0;
    report(
        4,
        "robust sunflower implies robust clique sunflower",
        pass,
        &format!(
            "premise-satisfying families={satisfying} (ell=2: {}, ell=3: {}), \
             counterexamples={counterexamples}",
            a.premise_satisfying, b.premise_satisfying
        ),
    );
}

/// Criterion 5: exact comparison-lemma verification. For the left and square
/// liftings plus 50 random proper liftings, on instances with <= 22 relevant
/// cells and rational Bernoulli p in {1/4, 1/2, 3/4}: the interpolation
/// chain never decreases and the endpoint inequality holds, zero tolerance.
#[test]
fn criterion_5_comparison_lemma() {
    let seed = SeedSpec::new(20_240_820, 0);
    let mut rng = seed.rng(0);
    let mut liftings: Vec<Lifting> = Vec::new();
    // Ten base families: left and square liftings for each.
    let mut random_budget = 50;
    for i in 0..10 {
        let n = 4 + (i % 2);
        let family = random_uniform_family(n, 2, 2 + (i % 2), &mut rng);
        liftings.push(Lifting::left(&family, 2).unwrap());
        liftings.push(Lifting::square(&family).unwrap());
        for _ in 0..5 {
            liftings.push(Lifting::random_proper(&family, 2, &mut rng).unwrap());
            random_budget -= 1;
        }
    }
    assert_eq!(random_budget, 0);
    let mut checks = 0;
    let mut violations = 0;
    for lifting in &liftings {
        assert!(lifting.validate_proper());
        for (num, den) in [(1u64, 4u64), (1, 2), (3, 4)] {
            let dist = CellDist::Bernoulli(Prob::from_ratio(num, den).unwrap());
            let chain = verify_comparison_chain(lifting, &dist).unwrap();
            let endpoints_ok = {
                let lhs = expected_sup(
                    &Lifting::left(lifting.family(), lifting.ell()).unwrap(),
                    &dist,
                    &SupMode::Exact,
                )
                .unwrap();
                let rhs = expected_sup(lifting, &dist, &SupMode::Exact).unwrap();
                let first = chain.values.first().unwrap().exact.clone().unwrap();
                let last = chain.values.last().unwrap().exact.clone().unwrap();
                lhs.exact.as_ref().unwrap() <= rhs.exact.as_ref().unwrap()
                    && first == lhs.exact.unwrap()
                    && last == rhs.exact.unwrap()
            };
            checks += 1;
            if !chain.non_decreasing || !endpoints_ok {
                violations += 1;
            }
        }
    }
    report(
        5,
        "comparison lemma and interpolation chains",
        violations == 0,
        &format!(
            "{} liftings x 3 rational rates = {checks} exact chains, {violations} violations",
            liftings.len()
        ),
    );
}

/// Criterion 6: approximation-method soundness, pointwise over all graphs on
/// the relevant edge supports: cl >= A, trim <= A, P^or(id) = or,
/// P^and(id) <= and; every closure replacement has exact negative error <=
/// eps; replacement counts stay below n^(2c); and the union-bound audit holds
/// exactly on 10 random closure fixed points.
#[test]
fn criterion_6_approximation_soundness() {
    let seed = SeedSpec::new(20_240_821, 0);
    let mut rng = seed.rng(0);
    let cfg = ClosureCfg::new(20_000, seed.stream(9));
    let p = Prob::from_ratio(1, 2).unwrap();
    let eps = Prob::from_ratio(1, 4).unwrap();
    let eps_threshold = BigRational::new(1.into(), 4.into());
    let trim_c = 2usize;
    let mut soundness_checks = 0;
    let mut replacement_checks = 0;

    for i in 0..40 {
        let n = 6 + (i % 3); // 6, 7, 8
        let ell = 2 + (i % 2);
        let family = random_uniform_family(n, ell, 3 + (i % 2), &mut rng);
        let a = Approximator::from_family(&family);

        // Closure grows the function pointwise; each replacement's exact
        // negative error (1 - coverage) is at most eps.
        let (closed, reps) = closure(&a, &p, &eps, &cfg).unwrap();
        assert!(pointwise_le(&a, &closed).unwrap(), "cl >= A failed at {i}");
        for rep in &reps {
            let cov = rep
                .coverage
                .exact
                .as_ref()
                .expect("exact coverage at these sizes");
            assert!(
                BigRational::one() - cov <= eps_threshold,
                "replacement error above eps at {i}"
            );
            replacement_checks += 1;
        }
        let budget = (n as f64).powi(2 * trim_c as i32);
        assert!((reps.len() as f64) <= budget, "replacement count at {i}");

        // Trim shrinks the function pointwise.
        let (trimmed, _) = trim(&a, trim_c);
        assert!(pointwise_le(&trimmed, &a).unwrap(), "trim <= A failed at {i}");

        // Identity-compression gate soundness against the true combination.
        // Universe capped at 7 so the relevant edge supports always fit the
        // exhaustive scan (C(7,2) = 21 slots).
        let ng = n.min(7);
        let left = Approximator::from_family(&random_uniform_family(ng, ell, 3, &mut rng));
        let right = Approximator::from_family(&random_uniform_family(ng, 2, 2, &mut rng));
        let (and_ab, _, _) = approx_and(&left, &right, &Icomp::Identity, &cfg).unwrap();
        let (or_ab, _, _) = approx_or(&left, &right, &Icomp::Identity, &cfg).unwrap();
        exhaustive_gate_check(&left, &right, &and_ab, true, true);
        exhaustive_gate_check(&left, &right, &or_ab, false, false);
        soundness_checks += 1;
    }

    // Union-bound audit on closure fixed points.
    let mut audits = 0;
    for _ in 0..10 {
        let family = random_uniform_family(10, 3, 6, &mut rng);
        let (closed, _) = closure(&Approximator::from_family(&family), &p, &eps, &cfg).unwrap();
        let audit = audit_simple_approximator(&closed, 5, 10).unwrap();
        assert!(
            audit.constant_one || audit.holds,
            "union bound failed: acceptance {} vs bound {}",
            audit.acceptance,
            audit.bound
        );
        audits += 1;
    }
    report(
        6,
        "approximation-method soundness",
        soundness_checks == 40 && audits == 10,
        &format!(
            "{soundness_checks} instances (cl/trim/P-gates pointwise), \
             {replacement_checks} replacements all with exact error <= 1/4, \
             {audits} fixed-point audits"
        ),
    );
}

/// Pointwise check of a compressed gate against the true boolean combination
/// of its children, over every assignment of the relevant edges (mask-based,
/// no graph construction in the inner loop).
fn exhaustive_gate_check(
    a: &Approximator,
    b: &Approximator,
    combined: &Approximator,
    is_and: bool,
    le_only: bool,
) {
    let mut slots: Vec<usize> = a
        .terms()
        .iter()
        .chain(b.terms())
        .chain(combined.terms())
        .flat_map(|t| t.clique_edge_slots())
        .collect();
    slots.sort_unstable();
    slots.dedup();
    assert!(slots.len() <= 24, "instance too large for the exhaustive check");
    let term_masks = |x: &Approximator| -> Vec<u32> {
        x.terms()
            .iter()
            .map(|t| {
                let mut m = 0u32;
                for slot in t.clique_edge_slots() {
                    m |= 1 << slots.binary_search(&slot).unwrap();
                }
                m
            })
            .collect()
    };
    let (ma, mb, mc) = (term_masks(a), term_masks(b), term_masks(combined));
    let eval = |masks: &[u32], w: u32| cliquelab::combinat::any_submask(masks, w);
    for w in 0u64..1 << slots.len() {
        let w = w as u32;
        let va = eval(&ma, w);
        let vb = eval(&mb, w);
        let truth = if is_and { va && vb } else { va || vb };
        let approx_val = eval(&mc, w);
        if le_only {
            assert!(approx_val <= truth, "P-gate exceeded the true function");
        } else {
            assert_eq!(approx_val, truth, "P-or must equal the disjunction");
        }
    }
}

/// Criterion 7: circuit infrastructure. Sorting networks sort every 0/1
/// input up to width 12, thresholds equal popcount comparisons exhaustively,
/// and serialization round-trips the golden files byte-exactly.
#[test]
fn criterion_7_circuit_infrastructure() {
    // 0-1 principle, all widths to 12.
    for m in 1..=12usize {
        assert!(batcher_network(m).sorts_all_01(), "width {m}");
    }
    // Thresholds equal popcount >= tau for every m <= 12 and every tau.
    let mut threshold_checks = 0u64;
    for m in 1..=12usize {
        let n = 7; // C(7,2) = 21 >= 12 slots
        let slots: Vec<usize> = (0..m).collect();
        for tau in 1..=m {
            let c = build_threshold_over_slots(n, &slots, tau).unwrap();
            for mask in 0u32..1 << m {
                let mut g = Graph::empty(n);
                for (b, &slot) in slots.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        g.set_slot(slot);
                    }
                }
                assert_eq!(
                    c.evaluate(&g).unwrap(),
                    mask.count_ones() as usize >= tau,
                    "m={m} tau={tau} mask={mask:b}"
                );
                threshold_checks += 1;
            }
        }
    }

    // Golden files: byte-exact regeneration and parse/serialize round trips.
    let k123_text = include_str!("golden/k123.mono");
    let regenerated = build_clique_indicator(&VertexSet::from_members(3, [0, 1, 2]), 3);
    assert_eq!(regenerated.to_text(), k123_text);
    assert_eq!(
        MonotoneCircuit::parse_text(k123_text).unwrap().to_text(),
        k123_text
    );

    let thr_text = include_str!("golden/threshold_m5_t3.mono");
    let thr = build_threshold_over_slots(5, &[0, 1, 2, 3, 4], 3).unwrap();
    assert_eq!(thr.to_text(), thr_text);
    assert_eq!(
        MonotoneCircuit::parse_text(thr_text).unwrap().to_text(),
        thr_text
    );

    let graph_text = include_str!("golden/example.graph");
    assert_eq!(Graph::parse_text(graph_text).unwrap().to_text(), graph_text);

    let family_text = include_str!("golden/example.family");
    assert_eq!(
        SetFamily::parse_text(family_text).unwrap().to_text(),
        family_text
    );

    report(
        7,
        "circuit infrastructure",
        true,
        &format!(
            "networks sorted 2^m inputs for m<=12, {threshold_checks} threshold \
             evaluations matched popcount, 4 golden files round-tripped byte-exactly"
        ),
    );
}

/// Criterion 8: distribution sanity. At n=50, alpha=5 the fraction of
/// negative samples containing a 5-clique stays at or below 0.05 over 10^4
/// samples (the analysis bound is 1/4; the observed rate is far smaller).
#[test]
fn criterion_8_negative_distribution_sanity() {
    use rayon::prelude::*;
    let params = NegDistParams::new(50, 5).unwrap();
    let seed = SeedSpec::new(20_240_822, 0);
    let trials = 10_000u64;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            sample_negative(&params, &seed, t)
                .contains_clique(5)
                .unwrap() as u64
        })
        .sum();
    let fraction = hits as f64 / trials as f64;
    report(
        8,
        "negative distribution rarely contains alpha-cliques",
        fraction <= 0.05,
        &format!(
            "fraction={fraction:.4} over {trials} samples (required <= 0.05, paper bound 1/4)"
        ),
    );
}

/// Small random monotone circuit over the edge variables (acceptance-suite
/// copy of the unit-test helper).
fn random_circuit<R: Rng>(n: usize, max_gates: usize, rng: &mut R) -> MonotoneCircuit {
    use cliquelab::circuit::CircuitBuilder;
    let mut b = CircuitBuilder::new(n);
    let mut ids = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.4) {
                ids.push(b.input(u, v));
            }
        }
    }
    if ids.is_empty() {
        ids.push(b.constant(rng.gen_bool(0.5)));
    }
    while ids.len() < max_gates {
        let a = ids[rng.gen_range(0..ids.len())];
        let c = ids[rng.gen_range(0..ids.len())];
        ids.push(if rng.gen_bool(0.5) { b.and(a, c) } else { b.or(a, c) });
    }
    let out = *ids.last().unwrap();
    b.finish(out)
}
