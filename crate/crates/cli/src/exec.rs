//! Dispatch from a validated config to the owning library module, and the
//! append-only run-record log.

use crate::config::*;
use chrono::{SecondsFormat, Utc};
use cliquelab::approx::{approximate_circuit, closure, Approximator, ClosureCfg, CompressionParams, Icomp};
use cliquelab::circuit::MonotoneCircuit;
use cliquelab::distinguisher::{build_distinguisher, measure_success, DistinguisherParams};
use cliquelab::error::Error;
use cliquelab::graph::{sample_negative, sample_positive, NegDistParams, PosDistParams, VertexSet};
use cliquelab::process::{expected_sup, verify_comparison_chain, verify_lemma33_bridge, CellDist, Lifting, SupMode};
use cliquelab::seed::streams;
use cliquelab::sunflower::{
    check_robust, find_k_sunflower, random_uniform_family, verify_erdos_rado,
    verify_rs_implies_rcs, verify_sunflower_is_rcs, CoverageMode, Prob, RobustKind, SetFamily,
};
use cliquelab::{Result, SeedSpec};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_MC_TRIALS: u64 = 20_000;

/// One line of the append-only result log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub started_at: String,
    pub finished_at: String,
    pub seed: u64,
    pub artifact_version: String,
    pub command: String,
    pub pass: bool,
    pub result: Value,
}

/// Runs the config and persists the record (when an output path is set).
pub fn run(config: &ExperimentConfig) -> Result<RunRecord> {
    let started_at = now();
    let (result, pass) = dispatch(config)?;
    let record = RunRecord {
        config_hash: config.hash(),
        started_at,
        finished_at: now(),
        seed: config.master_seed,
        artifact_version: ARTIFACT_VERSION.to_string(),
        command: config.command_name().to_string(),
        pass,
        result,
    };
    if let Some(path) = &config.output_path {
        append_record(path, &record)?;
    }
    Ok(record)
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn append_record(path: &str, record: &RunRecord) -> Result<()> {
    use std::io::Write;
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    writeln!(file, "{}", serde_json::to_string(record).expect("record serializes"))?;
    Ok(())
}

fn dispatch(config: &ExperimentConfig) -> Result<(Value, bool)> {
    let seed = SeedSpec::new(config.master_seed, 0);
    match &config.command {
        CommandSpec::Sample(p) => cmd_sample(p, &seed),
        CommandSpec::BuildDistinguisher(p) => cmd_build(p, &seed),
        CommandSpec::MeasureSuccess(p) => cmd_measure(p, &seed),
        CommandSpec::CheckRobust(p) => cmd_check_robust(p, &seed),
        CommandSpec::FindSunflower(p) => cmd_find_sunflower(p),
        CommandSpec::Closure(p) => cmd_closure(p, &seed),
        CommandSpec::Approximate(p) => cmd_approximate(p, &seed),
        CommandSpec::CompareProcesses(p) => cmd_compare(p, &seed),
        CommandSpec::VerifyLemma(p) => cmd_verify_lemma(p, &seed),
    }
}

fn missing(field: &str) -> Error {
    Error::InvalidParameter(format!("missing required parameter '{field}'"))
}

fn load_family(path: &str) -> Result<SetFamily> {
    SetFamily::parse_text(&std::fs::read_to_string(path)?)
}

fn load_circuit(path: &str) -> Result<MonotoneCircuit> {
    MonotoneCircuit::parse_text(&std::fs::read_to_string(path)?)
}

fn rational_json(r: &cliquelab::BigRational) -> Value {
    json!({ "rational": r.to_string(), "value": r.to_f64() })
}

fn members_1based(s: &VertexSet) -> Vec<usize> {
    s.members().iter().map(|v| v + 1).collect()
}

// -- sample ------------------------------------------------------------

fn cmd_sample(p: &SampleParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    let count = p.count.unwrap_or(1);
    let mut graphs = Vec::new();
    let mut edge_counts = Vec::new();
    match p.dist {
        DistKind::Neg => {
            let alpha = p.alpha.ok_or_else(|| missing("alpha"))?;
            let params = NegDistParams::new(p.n, alpha)?;
            let stream = seed.stream(streams::NEGATIVE_TRIALS);
            for t in 0..count {
                let g = sample_negative(&params, &stream, t);
                edge_counts.push(g.edge_count());
                graphs.push(g.to_text());
            }
        }
        DistKind::Pos => {
            let beta = p.beta.ok_or_else(|| missing("beta"))?;
            let params = PosDistParams::new(p.n, beta)?;
            let stream = seed.stream(streams::POSITIVE_TRIALS);
            for t in 0..count {
                let g = sample_positive(&params, &stream, t);
                edge_counts.push(g.edge_count());
                graphs.push(g.to_text());
            }
        }
    }
    Ok((
        json!({
            "dist": p.dist,
            "n": p.n,
            "count": count,
            "edge_counts": edge_counts,
            "graphs": graphs,
        }),
        true,
    ))
}

// -- distinguisher -------------------------------------------------------

fn cmd_build(p: &BuildDistinguisherParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    let delta = p.delta.unwrap_or(cliquelab::distinguisher::DEFAULT_DELTA);
    let params = DistinguisherParams::plan(p.n, p.alpha, p.beta, delta, *seed)?;
    let dist = build_distinguisher(&params)?;
    let text = dist.circuit().to_text();
    let mut result = json!({
        "n": params.n,
        "alpha": params.alpha,
        "beta": params.beta,
        "ell": params.ell,
        "m": params.m,
        "tau": params.tau,
        "circuit_size": dist.circuit().size(),
        "gate_count": dist.circuit().gate_count(),
    });
    if let Some(path) = &p.circuit_out {
        std::fs::write(path, &text)?;
        result["circuit_out"] = json!(path);
    } else if dist.circuit().gate_count() <= 2000 {
        result["circuit"] = json!(text);
    }
    Ok((result, true))
}

fn cmd_measure(p: &MeasureSuccessParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    let params = match (p.ell, p.m, p.tau) {
        (Some(ell), Some(m), Some(tau)) => {
            DistinguisherParams::new(p.n, p.alpha, p.beta, ell, m, tau, *seed)?
        }
        (None, None, None) => DistinguisherParams::plan(
            p.n,
            p.alpha,
            p.beta,
            p.delta.unwrap_or(cliquelab::distinguisher::DEFAULT_DELTA),
            *seed,
        )?,
        _ => {
            return Err(Error::InvalidParameter(
                "ell, m, tau must be given together (or all omitted)".into(),
            ))
        }
    };
    let report = measure_success(&params, p.trials)?;
    let pass = report.pass;
    Ok((serde_json::to_value(&report).expect("report serializes"), pass))
}

// -- sunflowers ----------------------------------------------------------

fn parse_kind(kind: &Option<String>) -> Result<RobustKind> {
    match kind.as_deref() {
        None | Some("clique") => Ok(RobustKind::Clique),
        Some("set") => Ok(RobustKind::Set),
        Some(other) => Err(Error::InvalidParameter(format!(
            "kind must be 'set' or 'clique', got '{other}'"
        ))),
    }
}

fn coverage_json(cov: &cliquelab::sunflower::CoverageEstimate) -> Value {
    let mut v = json!({
        "probability": cov.probability,
        "ci_half_width": cov.ci_half_width,
        "trials": cov.trials,
    });
    if let Some(exact) = &cov.exact {
        v["exact"] = json!(exact.to_string());
    }
    v
}

fn cmd_check_robust(p: &CheckRobustParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    let family = load_family(&p.family)?;
    let core = family.core();
    let prob = Prob::from_f64(p.p)?;
    let eps = Prob::from_f64(p.eps)?;
    let kind = parse_kind(&p.kind)?;
    let mode = match p.mode {
        Mode::Exact => CoverageMode::Exact,
        Mode::Mc => CoverageMode::Mc {
            trials: p.trials.unwrap_or(DEFAULT_MC_TRIALS),
            seed: seed.stream(streams::COVERAGE_MC),
        },
    };
    let verdict = check_robust(&family, &core, &prob, &eps, kind, &mode)?;
    let pass = verdict.verdict == cliquelab::sunflower::Verdict::Pass;
    Ok((
        json!({
            "kind": kind,
            "core": members_1based(&core),
            "threshold": verdict.threshold,
            "verdict": verdict.verdict,
            "coverage": coverage_json(&verdict.coverage),
        }),
        pass,
    ))
}

fn cmd_find_sunflower(p: &FindSunflowerParams) -> Result<(Value, bool)> {
    let family = load_family(&p.family)?;
    let witness = find_k_sunflower(&family, p.k)?;
    match witness {
        Some(w) => Ok((
            json!({
                "found": true,
                "k": p.k,
                "petal_sets": w.petal_indices.iter().map(|&i| i + 1).collect::<Vec<_>>(),
                "core": members_1based(&w.core),
            }),
            true,
        )),
        None => Ok((json!({ "found": false, "k": p.k }), false)),
    }
}

// -- approximation ---------------------------------------------------------

fn closure_cfg(mc_trials: Option<u64>, seed: &SeedSpec) -> ClosureCfg {
    ClosureCfg::new(
        mc_trials.unwrap_or(DEFAULT_MC_TRIALS),
        seed.stream(streams::COVERAGE_MC),
    )
}

fn replacements_json(reps: &[cliquelab::approx::Replacement]) -> Value {
    Value::Array(
        reps.iter()
            .map(|r| {
                json!({
                    "subfamily": r.subfamily.iter().map(members_1based).collect::<Vec<_>>(),
                    "core": members_1based(&r.core),
                    "coverage": coverage_json(&r.coverage),
                })
            })
            .collect(),
    )
}

fn cmd_closure(p: &ClosureParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    let family = load_family(&p.family)?;
    let approx = Approximator::from_family(&family);
    let prob = Prob::from_f64(p.p)?;
    let eps = Prob::from_f64(p.eps)?;
    let (closed, reps) = closure(&approx, &prob, &eps, &closure_cfg(p.mc_trials, seed))?;
    Ok((
        json!({
            "input_terms": family.len(),
            "output_terms": closed.term_count(),
            "closed_family": closed.to_family().to_text(),
            "replacements": replacements_json(&reps),
        }),
        true,
    ))
}

fn cmd_approximate(p: &ApproximateParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    let circuit = load_circuit(&p.circuit)?;
    let icomp = match p.icomp.as_deref() {
        Some("id") => Icomp::Identity,
        Some("trim") => Icomp::TrimOnly {
            c: p.c.ok_or_else(|| missing("c"))?,
        },
        None | Some("full") => {
            let prob = Prob::from_f64(p.p.ok_or_else(|| missing("p"))?)?;
            let eps = Prob::from_f64(p.eps.ok_or_else(|| missing("eps"))?)?;
            Icomp::Full(CompressionParams::new(prob, eps, p.c.ok_or_else(|| missing("c"))?)?)
        }
        Some(other) => {
            return Err(Error::InvalidParameter(format!(
                "icomp must be 'id', 'trim' or 'full', got '{other}'"
            )))
        }
    };
    let (approx, trace) = approximate_circuit(&circuit, &icomp, &closure_cfg(p.mc_trials, seed))?;
    let replacement_total: usize = trace.records.iter().map(|r| r.replacements.len()).sum();
    let trimmed_total: usize = trace.records.iter().map(|r| r.trimmed.len()).sum();
    let mut result = json!({
        "gates": circuit.gate_count(),
        "terms": approx.term_count(),
        "approximator": approx.to_family().to_text(),
        "histogram": approx.size_histogram(),
        "replacement_total": replacement_total,
        "trimmed_total": trimmed_total,
    });
    if let Some(path) = &p.trace_out {
        std::fs::write(path, trace.to_jsonl())?;
        result["trace_out"] = json!(path);
    }
    Ok((result, true))
}

// -- process comparison -----------------------------------------------------

fn build_lifting(
    name: &str,
    family: &SetFamily,
    ell: Option<usize>,
    core: &Option<Vec<usize>>,
) -> Result<Lifting> {
    match name {
        "left" => Lifting::left(family, ell.ok_or_else(|| missing("ell"))?),
        "square" => {
            // The square lifting forces ell = k; an explicit conflicting ell
            // is an improper construction request.
            if let (Some(ell), Some(k)) = (ell, family.uniformity()) {
                if ell != k {
                    return Err(Error::InvalidParameter(format!(
                        "square lifting has ell = k = {k}, got ell={ell}"
                    )));
                }
            }
            Lifting::square(family)
        }
        "link" => {
            let members = core.clone().ok_or_else(|| missing("core"))?;
            for &v in &members {
                if v == 0 || v > family.n() {
                    return Err(Error::InvalidParameter(format!(
                        "core vertex {v} out of range 1..={}",
                        family.n()
                    )));
                }
            }
            let core = VertexSet::from_members(family.n(), members.iter().map(|&v| v - 1));
            Lifting::link(family, &core)
        }
        path => Lifting::from_json(&serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| Error::Parse {
                line: 0,
                msg: format!("bad lifting JSON: {e}"),
            })?),
    }
}

fn sup_json(e: &cliquelab::process::SupEstimate) -> Value {
    let mut v = json!({
        "value": e.value,
        "ci_half_width": e.ci_half_width,
        "trials": e.trials,
    });
    if let Some(exact) = &e.exact {
        v["exact"] = json!(exact.to_string());
    }
    v
}

fn cmd_compare(p: &CompareProcessesParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    let family = load_family(&p.family)?;
    let lifting = build_lifting(&p.lifting, &family, p.ell, &p.core)?;
    if !lifting.validate_proper() {
        return Err(Error::InvalidParameter("lifting is not proper".into()));
    }
    let dist = CellDist::Bernoulli(Prob::from_f64(p.p)?);
    if p.chain.unwrap_or(false) {
        let report = verify_comparison_chain(&lifting, &dist)?;
        let pass = report.non_decreasing;
        return Ok((
            json!({
                "chain": report.values.iter().map(sup_json).collect::<Vec<_>>(),
                "non_decreasing": report.non_decreasing,
            }),
            pass,
        ));
    }
    let mode = match p.mode {
        Mode::Exact => SupMode::Exact,
        Mode::Mc => SupMode::Mc {
            trials: p.trials.unwrap_or(DEFAULT_MC_TRIALS),
            seed: seed.stream(streams::PROCESS_MC),
        },
    };
    let rhs = expected_sup(&lifting, &dist, &mode)?;
    let left = Lifting::left(&family, lifting.ell())?;
    let lhs = expected_sup(&left, &dist, &mode)?;
    // In exact mode the comparison is rational; in MC mode it is reported
    // but only counted as a violation beyond the joint CI.
    let pass = match (&lhs.exact, &rhs.exact) {
        (Some(a), Some(b)) => a <= b,
        _ => lhs.value <= rhs.value + lhs.ci_half_width + rhs.ci_half_width,
    };
    Ok((
        json!({
            "lhs_left_lifting": sup_json(&lhs),
            "rhs_lifting": sup_json(&rhs),
            "comparison_holds": pass,
        }),
        pass,
    ))
}

// -- lemma verification -------------------------------------------------

fn cmd_verify_lemma(p: &VerifyLemmaParams, seed: &SeedSpec) -> Result<(Value, bool)> {
    match p.lemma.as_str() {
        "erdos-rado" => {
            let ell = p.ell.ok_or_else(|| missing("ell"))?;
            let k = p.k.ok_or_else(|| missing("k"))?;
            let n = p.n.ok_or_else(|| missing("n"))?;
            let count = p.families.unwrap_or(1000);
            let bound = cliquelab::sunflower::erdos_rado_bound(ell, k);
            let gen_seed = seed.stream(streams::FAMILY_GEN);
            let families =
                (0..count).map(|i| random_uniform_family(n, ell, bound, &mut gen_seed.rng(i as u64)));
            let report = verify_erdos_rado(ell, k, families)?;
            let pass = report.holds;
            Ok((serde_json::to_value(&report).expect("serializes"), pass))
        }
        "sunflower-rcs" => {
            let ell = p.ell.ok_or_else(|| missing("ell"))?;
            let k = p.k.ok_or_else(|| missing("k"))?;
            let c = p.core_size.unwrap_or(0);
            let prob = Prob::from_f64(p.p.ok_or_else(|| missing("p"))?)?;
            let report = verify_sunflower_is_rcs(ell, k, c, &prob)?;
            let pass = report.holds && report.failure == report.closed_form;
            Ok((
                json!({
                    "ell": report.ell,
                    "k": report.k,
                    "core_size": report.core_size,
                    "failure": rational_json(&report.failure),
                    "closed_form": rational_json(&report.closed_form),
                    "bound": report.bound,
                    "holds": report.holds,
                }),
                pass,
            ))
        }
        "rs-implies-rcs" => {
            let samples = p.samples.unwrap_or(100);
            let n = p.n.ok_or_else(|| missing("n"))?;
            let ell = p.ell.ok_or_else(|| missing("ell"))?;
            let prob = Prob::from_f64(p.p.ok_or_else(|| missing("p"))?)?;
            let eps = Prob::from_f64(p.eps.ok_or_else(|| missing("eps"))?)?;
            let report = verify_rs_implies_rcs(
                samples,
                n,
                ell,
                &prob,
                &eps,
                &seed.stream(streams::FAMILY_GEN),
            )?;
            let pass = report.holds;
            Ok((
                json!({
                    "requested": report.requested,
                    "attempts": report.attempts,
                    "premise_satisfying": report.premise_satisfying,
                    "counterexamples": report.counterexamples.len(),
                    "holds": report.holds,
                }),
                pass,
            ))
        }
        "lemma33-bridge" => {
            let family = load_family(p.family.as_deref().ok_or_else(|| missing("family"))?)?;
            let prob = Prob::from_f64(p.p.ok_or_else(|| missing("p"))?)?;
            let eps = Prob::from_f64(p.eps.ok_or_else(|| missing("eps"))?)?;
            let report = verify_lemma33_bridge(&family, &prob, &eps)?;
            let pass = report.holds;
            Ok((
                json!({
                    "premise_coverage": rational_json(&report.premise_coverage),
                    "premise_holds": report.premise_holds,
                    "e_left": rational_json(&report.e_left),
                    "e_link": rational_json(&report.e_link),
                    "target": rational_json(&report.target),
                    "holds": report.holds,
                }),
                pass,
            ))
        }
        "comparison-chain" => {
            let family = load_family(p.family.as_deref().ok_or_else(|| missing("family"))?)?;
            let lifting = build_lifting(
                p.lifting.as_deref().ok_or_else(|| missing("lifting"))?,
                &family,
                p.ell,
                &None,
            )?;
            let dist = CellDist::Bernoulli(Prob::from_f64(p.p.ok_or_else(|| missing("p"))?)?);
            let report = verify_comparison_chain(&lifting, &dist)?;
            let pass = report.non_decreasing;
            Ok((
                json!({
                    "chain": report.values.iter().map(sup_json).collect::<Vec<_>>(),
                    "non_decreasing": report.non_decreasing,
                }),
                pass,
            ))
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown lemma '{other}'; expected erdos-rado, sunflower-rcs, \
             rs-implies-rcs, lemma33-bridge or comparison-chain"
        ))),
    }
}
