//! Monotone circuit IR: a DAG of edge-input / AND / OR / constant gates with
//! one output, plus construction helpers (clique indicators, sorting-network
//! thresholds), evaluation, acceptance estimation, and the MONO v1 text
//! format.

mod acceptance;
mod sortnet;

pub use acceptance::{
    estimate_acceptance, exact_acceptance, exact_acceptance_negative, exact_acceptance_positive,
    AcceptanceEstimate, Distribution,
};
pub use sortnet::{batcher_network, ComparatorNetwork};

use crate::error::{Error, Result};
use crate::graph::{edge_slot, edge_slot_count, slot_to_edge, Graph, VertexSet};

pub type GateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    /// Reads one edge slot of the input graph.
    Input(usize),
    And(GateId, GateId),
    Or(GateId, GateId),
    Const(bool),
}

/// Monotone circuit over the `C(n,2)` edge variables of an n-vertex graph.
///
/// Gates are stored in topological order: a gate may only reference earlier
/// gates. `size()` counts AND/OR gates, matching the usual circuit-size
/// convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCircuit {
    n_vertices: usize,
    gates: Vec<Gate>,
    output: GateId,
}

impl MonotoneCircuit {
    /// Single-gate constant circuit.
    pub fn constant(n_vertices: usize, value: bool) -> Self {
        MonotoneCircuit {
            n_vertices,
            gates: vec![Gate::Const(value)],
            output: 0,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Number of AND/OR gates.
    pub fn size(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::And(..) | Gate::Or(..)))
            .count()
    }

    /// Edge slots referenced by Input gates, ascending and deduplicated.
    pub fn referenced_slots(&self) -> Vec<usize> {
        let mut slots: Vec<usize> = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Input(s) => Some(*s),
                _ => None,
            })
            .collect();
        slots.sort_unstable();
        slots.dedup();
        slots
    }

    /// Forward evaluation over the topological order.
    pub fn evaluate(&self, g: &Graph) -> Result<bool> {
        if g.n() != self.n_vertices {
            return Err(Error::VertexCountMismatch {
                expected: self.n_vertices,
                actual: g.n(),
            });
        }
        let mut vals = vec![false; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            vals[i] = match *gate {
                Gate::Input(slot) => g.has_slot(slot),
                Gate::And(a, b) => vals[a] && vals[b],
                Gate::Or(a, b) => vals[a] || vals[b],
                Gate::Const(c) => c,
            };
        }
        Ok(vals[self.output])
    }

    /// Evaluation against an arbitrary slot assignment (used by the exact
    /// acceptance enumerators; slots absent from the map read as false).
    pub(crate) fn evaluate_assignment(&self, lookup: &dyn Fn(usize) -> bool) -> bool {
        let mut vals = vec![false; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            vals[i] = match *gate {
                Gate::Input(slot) => lookup(slot),
                Gate::And(a, b) => vals[a] && vals[b],
                Gate::Or(a, b) => vals[a] || vals[b],
                Gate::Const(c) => c,
            };
        }
        vals[self.output]
    }

    /// Full structural validation (acyclicity is structural: references must
    /// point at earlier gates).
    pub fn validate(&self) -> Result<()> {
        let slots = edge_slot_count(self.n_vertices);
        for (i, gate) in self.gates.iter().enumerate() {
            match *gate {
                Gate::Input(s) if s >= slots => {
                    return Err(Error::InvalidParameter(format!(
                        "gate {i}: input slot {s} out of range"
                    )))
                }
                Gate::And(a, b) | Gate::Or(a, b) if a >= i || b >= i => {
                    return Err(Error::InvalidParameter(format!(
                        "gate {i}: forward reference ({a}, {b})"
                    )))
                }
                _ => {}
            }
        }
        if self.output >= self.gates.len() {
            return Err(Error::InvalidParameter(format!(
                "output {} out of range",
                self.output
            )));
        }
        Ok(())
    }

    // -- MONO v1 text format --------------------------------------------

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "MONO v1 n={} gates={}\n",
            self.n_vertices,
            self.gates.len()
        );
        for (i, gate) in self.gates.iter().enumerate() {
            let id = i + 1;
            match *gate {
                Gate::Input(slot) => {
                    let (u, v) = slot_to_edge(self.n_vertices, slot);
                    out.push_str(&format!("{} INPUT {} {}\n", id, u + 1, v + 1));
                }
                Gate::And(a, b) => out.push_str(&format!("{} AND {} {}\n", id, a + 1, b + 1)),
                Gate::Or(a, b) => out.push_str(&format!("{} OR {} {}\n", id, a + 1, b + 1)),
                Gate::Const(c) => out.push_str(&format!("{} CONST {}\n", id, c as u8)),
            }
        }
        out.push_str(&format!("OUTPUT {}\n", self.output + 1));
        out
    }

    pub fn parse_text(text: &str) -> Result<MonotoneCircuit> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let bad_header = || Error::Parse {
            line: 1,
            msg: format!("expected 'MONO v1 n=<n> gates=<g>', got '{header}'"),
        };
        let rest = header.strip_prefix("MONO v1 n=").ok_or_else(bad_header)?;
        let (n_str, g_str) = rest.split_once(" gates=").ok_or_else(bad_header)?;
        let n: usize = n_str.trim().parse().map_err(|_| bad_header())?;
        let gate_count: usize = g_str.trim().parse().map_err(|_| bad_header())?;

        let mut gates = Vec::with_capacity(gate_count);
        let mut output = None;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "OUTPUT" {
                if toks.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "expected 'OUTPUT <id>'".into(),
                    });
                }
                let id: usize = toks[1].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad gate id '{}'", toks[1]),
                })?;
                if id == 0 || id > gates.len() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("output id {id} out of range 1..={}", gates.len()),
                    });
                }
                output = Some(id - 1);
                continue;
            }
            let id: usize = toks[0].parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad gate id '{}'", toks[0]),
            })?;
            if id != gates.len() + 1 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("gate ids must ascend from 1; expected {}, got {id}", gates.len() + 1),
                });
            }
            let parse_ref = |tok: &str| -> Result<GateId> {
                let r: usize = tok.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad gate reference '{tok}'"),
                })?;
                if r == 0 || r >= id {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("gate {id} references gate {r} not defined yet"),
                    });
                }
                Ok(r - 1)
            };
            let gate = match (toks.get(1).copied(), toks.len()) {
                (Some("INPUT"), 4) => {
                    let u: usize = toks[2].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad vertex '{}'", toks[2]),
                    })?;
                    let v: usize = toks[3].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad vertex '{}'", toks[3]),
                    })?;
                    if u == 0 || v == 0 || u > n || v > n || u == v {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("bad edge {u} {v} for n={n}"),
                        });
                    }
                    Gate::Input(edge_slot(n, u - 1, v - 1))
                }
                (Some("AND"), 4) => Gate::And(parse_ref(toks[2])?, parse_ref(toks[3])?),
                (Some("OR"), 4) => Gate::Or(parse_ref(toks[2])?, parse_ref(toks[3])?),
                (Some("CONST"), 3) => match toks[2] {
                    "0" => Gate::Const(false),
                    "1" => Gate::Const(true),
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("bad constant '{other}'"),
                        })
                    }
                },
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unrecognized gate line '{line}'"),
                    })
                }
            };
            gates.push(gate);
        }
        if gates.len() != gate_count {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("header declared {gate_count} gates, found {}", gates.len()),
            });
        }
        let output = output.ok_or_else(|| Error::Parse {
            line: text.lines().count(),
            msg: "missing OUTPUT line".into(),
        })?;
        let c = MonotoneCircuit {
            n_vertices: n,
            gates,
            output,
        };
        c.validate()?;
        Ok(c)
    }
}

/// Incremental circuit builder. Input gates are cached per slot so repeated
/// indicators share them.
pub struct CircuitBuilder {
    n_vertices: usize,
    gates: Vec<Gate>,
    input_cache: std::collections::HashMap<usize, GateId>,
}

impl CircuitBuilder {
    pub fn new(n_vertices: usize) -> Self {
        CircuitBuilder {
            n_vertices,
            gates: Vec::new(),
            input_cache: Default::default(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn input(&mut self, u: usize, v: usize) -> GateId {
        let slot = edge_slot(self.n_vertices, u, v);
        self.input_slot(slot)
    }

    pub fn input_slot(&mut self, slot: usize) -> GateId {
        debug_assert!(slot < edge_slot_count(self.n_vertices));
        if let Some(&id) = self.input_cache.get(&slot) {
            return id;
        }
        let id = self.push(Gate::Input(slot));
        self.input_cache.insert(slot, id);
        id
    }

    pub fn constant(&mut self, value: bool) -> GateId {
        self.push(Gate::Const(value))
    }

    pub fn and(&mut self, a: GateId, b: GateId) -> GateId {
        debug_assert!(a < self.gates.len() && b < self.gates.len());
        self.push(Gate::And(a, b))
    }

    pub fn or(&mut self, a: GateId, b: GateId) -> GateId {
        debug_assert!(a < self.gates.len() && b < self.gates.len());
        self.push(Gate::Or(a, b))
    }

    fn push(&mut self, gate: Gate) -> GateId {
        self.gates.push(gate);
        self.gates.len() - 1
    }

    /// Balanced binary AND over the given gates. Empty input yields Const(1)
    /// (the empty conjunction).
    pub fn and_tree(&mut self, mut layer: Vec<GateId>) -> GateId {
        if layer.is_empty() {
            return self.constant(true);
        }
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len().div_ceil(2));
            for pair in layer.chunks(2) {
                next.push(if pair.len() == 2 {
                    self.and(pair[0], pair[1])
                } else {
                    pair[0]
                });
            }
            layer = next;
        }
        layer[0]
    }

    /// Balanced binary OR; empty input yields Const(0).
    pub fn or_tree(&mut self, mut layer: Vec<GateId>) -> GateId {
        if layer.is_empty() {
            return self.constant(false);
        }
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len().div_ceil(2));
            for pair in layer.chunks(2) {
                next.push(if pair.len() == 2 {
                    self.or(pair[0], pair[1])
                } else {
                    pair[0]
                });
            }
            layer = next;
        }
        layer[0]
    }

    /// AND of all edge variables inside `a`: the clique indicator.
    /// Sets of size <= 1 are the empty conjunction, Const(1).
    pub fn clique_indicator(&mut self, a: &VertexSet) -> GateId {
        let members = a.members();
        if members.len() <= 1 {
            return self.constant(true);
        }
        let mut slots = Vec::with_capacity(crate::combinat::choose2(members.len()));
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                slots.push(edge_slot(self.n_vertices, members[i], members[j]));
            }
        }
        slots.sort_unstable();
        let inputs: Vec<GateId> = slots.into_iter().map(|s| self.input_slot(s)).collect();
        self.and_tree(inputs)
    }

    /// Threshold over `inputs`: output is 1 iff at least `tau` of them are 1.
    /// Compiled as a Batcher sorting network with each comparator realized as
    /// one OR (max) and one AND (min); the result is the tau-th sorted wire.
    pub fn threshold(&mut self, inputs: &[GateId], tau: usize) -> Result<GateId> {
        let m = inputs.len();
        if tau == 0 || tau > m {
            return Err(Error::InvalidParameter(format!(
                "tau={tau} out of range 1..={m}"
            )));
        }
        let net = batcher_network(m);
        let mut wires = inputs.to_vec();
        for &(i, j) in net.comparators() {
            let hi = self.or(wires[i], wires[j]);
            let lo = self.and(wires[i], wires[j]);
            wires[i] = hi;
            wires[j] = lo;
        }
        Ok(wires[tau - 1])
    }

    pub fn finish(self, output: GateId) -> MonotoneCircuit {
        assert!(output < self.gates.len(), "output gate out of range");
        MonotoneCircuit {
            n_vertices: self.n_vertices,
            gates: self.gates,
            output,
        }
    }
}

/// Standalone clique indicator circuit for `A` within `[n]`.
pub fn build_clique_indicator(a: &VertexSet, n: usize) -> MonotoneCircuit {
    assert_eq!(a.universe(), n, "set universe must match n");
    let mut b = CircuitBuilder::new(n);
    let out = b.clique_indicator(a);
    b.finish(out)
}

/// Standalone threshold circuit: reads the given edge slots as its m inputs.
pub fn build_threshold_over_slots(n: usize, slots: &[usize], tau: usize) -> Result<MonotoneCircuit> {
    let mut b = CircuitBuilder::new(n);
    let inputs: Vec<GateId> = slots.iter().map(|&s| b.input_slot(s)).collect();
    let out = b.threshold(&inputs, tau)?;
    Ok(b.finish(out))
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::{CircuitBuilder, MonotoneCircuit};
    use rand::Rng;

    /// Random monotone circuit over a subset of the edge variables.
    pub(crate) fn random_circuit<R: Rng>(n: usize, max_gates: usize, rng: &mut R) -> MonotoneCircuit {
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
}

#[cfg(test)]
mod tests {
    use super::testutil::random_circuit;
    use super::*;
    use crate::combinat::choose2;
    use crate::graph::NegDistParams;
    use crate::seed::SeedSpec;
    use rand::Rng;

    #[test]
    fn const_circuits() {
        let c1 = MonotoneCircuit::constant(4, true);
        let c0 = MonotoneCircuit::constant(4, false);
        let g = Graph::empty(4);
        assert!(c1.evaluate(&g).unwrap());
        assert!(!c0.evaluate(&g).unwrap());
    }

    #[test]
    fn vertex_count_mismatch_is_an_error() {
        let c = MonotoneCircuit::constant(4, true);
        assert!(matches!(
            c.evaluate(&Graph::empty(5)),
            Err(Error::VertexCountMismatch { .. })
        ));
    }

    #[test]
    fn indicator_on_pair_is_single_input() {
        let a = VertexSet::from_members(4, [0, 1]);
        let c = build_clique_indicator(&a, 4);
        assert_eq!(c.size(), 0);
        assert_eq!(c.gates().len(), 1);
        assert!(matches!(c.gates()[0], Gate::Input(_)));
        let mut g = Graph::empty(4);
        assert!(!c.evaluate(&g).unwrap());
        g.add_edge(0, 1);
        assert!(c.evaluate(&g).unwrap());
    }

    #[test]
    fn indicator_on_small_sets_is_const_one() {
        for a in [
            VertexSet::empty(5),
            VertexSet::from_members(5, [3]),
        ] {
            let c = build_clique_indicator(&a, 5);
            assert_eq!(c.size(), 0);
            assert!(c.evaluate(&Graph::empty(5)).unwrap());
        }
    }

    #[test]
    fn indicator_truth_table_on_triangle() {
        // A = {0,1,2}: accepts exactly the graphs containing edges 01, 02, 12,
        // over all 8 patterns of those three edges.
        let a = VertexSet::from_members(4, [0, 1, 2]);
        let c = build_clique_indicator(&a, 4);
        let pairs = [(0, 1), (0, 2), (1, 2)];
        for mask in 0u32..8 {
            let mut g = Graph::empty(4);
            for (b, &(u, v)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
            assert_eq!(c.evaluate(&g).unwrap(), mask == 7);
        }
    }

    #[test]
    fn indicator_size_accounting() {
        for k in 0..=8usize {
            let a = VertexSet::from_members(10, 0..k);
            let c = build_clique_indicator(&a, 10);
            assert_eq!(c.size(), choose2(k).saturating_sub(1), "k={k}");
        }
    }

    /// Plain recursive evaluator used as a reference oracle.
    fn eval_recursive(c: &MonotoneCircuit, g: &Graph, id: GateId) -> bool {
        match c.gates()[id] {
            Gate::Input(slot) => g.has_slot(slot),
            Gate::And(a, b) => eval_recursive(c, g, a) && eval_recursive(c, g, b),
            Gate::Or(a, b) => eval_recursive(c, g, a) || eval_recursive(c, g, b),
            Gate::Const(v) => v,
        }
    }

    #[test]
    fn evaluate_agrees_with_recursive_reference() {
        let seed = SeedSpec::new(31, 0);
        let mut rng = seed.rng(0);
        let params = NegDistParams::with_forced_p(6, 4, 0.5).unwrap();
        for trial in 0..20 {
            let c = random_circuit(6, 50, &mut rng);
            for t in 0..50 {
                let g = crate::graph::sample_negative(&params, &seed, trial * 100 + t);
                assert_eq!(
                    c.evaluate(&g).unwrap(),
                    eval_recursive(&c, &g, c.output())
                );
            }
        }
    }

    #[test]
    fn evaluation_is_monotone() {
        // For random circuits and random G ⊆ G', eval(G) <= eval(G').
        let seed = SeedSpec::new(37, 1);
        let mut rng = seed.rng(0);
        for _ in 0..100 {
            let c = random_circuit(6, 30, &mut rng);
            for t in 0..10 {
                let _ = t;
                let uniforms = crate::graph::draw_uniforms(6, &mut rng);
                let p_lo: f64 = rng.gen();
                let p_hi = p_lo + (1.0 - p_lo) * rng.gen::<f64>();
                let g_lo = crate::graph::graph_from_uniforms(6, p_lo, &uniforms);
                let g_hi = crate::graph::graph_from_uniforms(6, p_hi, &uniforms);
                assert!(c.evaluate(&g_lo).unwrap() <= c.evaluate(&g_hi).unwrap());
            }
        }
    }

    #[test]
    fn or_of_indicators() {
        let mut b = CircuitBuilder::new(4);
        let k12 = b.clique_indicator(&VertexSet::from_members(4, [0, 1]));
        let k34 = b.clique_indicator(&VertexSet::from_members(4, [2, 3]));
        let out = b.or(k12, k34);
        let c = b.finish(out);
        let mut g = Graph::empty(4);
        g.add_edge(2, 3);
        assert!(c.evaluate(&g).unwrap());
        assert!(!c.evaluate(&Graph::empty(4)).unwrap());
    }

    #[test]
    fn golden_serialization_of_triangle_indicator() {
        let a = VertexSet::from_members(3, [0, 1, 2]);
        let c = build_clique_indicator(&a, 3);
        let expected = "MONO v1 n=3 gates=5\n\
                        1 INPUT 1 2\n\
                        2 INPUT 1 3\n\
                        3 INPUT 2 3\n\
                        4 AND 1 2\n\
                        5 AND 4 3\n\
                        OUTPUT 5\n";
        assert_eq!(c.to_text(), expected);
        assert_eq!(MonotoneCircuit::parse_text(expected).unwrap(), c);
    }

    #[test]
    fn parse_rejects_forward_and_dangling_references() {
        let text = "MONO v1 n=3 gates=2\n1 INPUT 1 2\n2 AND 1 7\nOUTPUT 2\n";
        match MonotoneCircuit::parse_text(text).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains('7'), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
        let bad_header = MonotoneCircuit::parse_text("MONO v2 n=3 gates=0\nOUTPUT 1\n");
        assert!(matches!(bad_header, Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn serialization_roundtrip_random() {
        let mut rng = SeedSpec::new(41, 0).rng(0);
        for _ in 0..20 {
            let c = random_circuit(7, 40, &mut rng);
            let text = c.to_text();
            let back = MonotoneCircuit::parse_text(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn threshold_matches_popcount() {
        // tau=1 is OR, tau=m is AND, and generally popcount >= tau,
        // exhaustively over all inputs for m <= 10.
        for m in 1..=10usize {
            let slots: Vec<usize> = (0..m).collect();
            for tau in 1..=m {
                let c = build_threshold_over_slots(6, &slots, tau).unwrap();
                for mask in 0u32..1 << m {
                    let mut g = Graph::empty(6);
                    for (b, &slot) in slots.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            g.set_slot(slot);
                        }
                    }
                    let expect = mask.count_ones() as usize >= tau;
                    assert_eq!(
                        c.evaluate(&g).unwrap(),
                        expect,
                        "m={m}, tau={tau}, mask={mask:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn threshold_counting_example() {
        // m=5, tau=3: (1,0,1,1,0) -> 1; (1,0,0,1,0) -> 0.
        let slots: Vec<usize> = (0..5).collect();
        let c = build_threshold_over_slots(5, &slots, 3).unwrap();
        let make = |bits: [u8; 5]| {
            let mut g = Graph::empty(5);
            for (i, &b) in bits.iter().enumerate() {
                if b == 1 {
                    g.set_slot(slots[i]);
                }
            }
            g
        };
        assert!(c.evaluate(&make([1, 0, 1, 1, 0])).unwrap());
        assert!(!c.evaluate(&make([1, 0, 0, 1, 0])).unwrap());
    }

    #[test]
    fn threshold_rejects_bad_tau() {
        let slots: Vec<usize> = (0..4).collect();
        assert!(build_threshold_over_slots(5, &slots, 0).is_err());
        assert!(build_threshold_over_slots(5, &slots, 5).is_err());
    }
}
