//! QAOA for all-to-all Ising problems on a linear chain and on a two-rail ladder.
//!
//! The initial `|+⟩^⊗n` is invariant under CNOTs, so the starting label
//! frame is free and is chosen as the zig-zag path. The cost layer walks
//! `n` consecutive path lines, which between them hold every single and
//! pair label; each term is rotated where it first appears. The mixer
//! localizes every logical X line (at most two neighbouring qubits) with a
//! CNOT pair.

use std::collections::HashSet;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Topology};
use crate::gf2;
use crate::labels::LabelSet;
use crate::layout::{round_cnots, round_parity, Path, SpanningLine};
use crate::sim::StateVector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QaoaError {
    #[error("need at least 2 logical qubits, got {0}")]
    TooSmall(usize),
    #[error("at most {max} logical qubits supported here, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("coupling ({0},{1}) is invalid")]
    BadCoupling(usize, usize),
    #[error("coupling ({0},{1}) is given twice")]
    DuplicateCoupling(usize, usize),
    #[error("expected {expected} local fields, got {got}")]
    FieldCount { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("betas and gammas must have equal nonzero length, got {0} and {1}")]
    ParamLengths(usize, usize),
    #[error("problem has {problem} qubits, state has {state}")]
    SizeMismatch { problem: usize, state: usize },
    #[error("logical line of {j} is {line:?}, not one qubit or two neighbours")]
    NonLocalLine { j: usize, line: Vec<usize> },
    #[error("expected {expected} mixer angles, got {got}")]
    BetaCount { expected: usize, got: usize },
    #[error("rail labels are rank deficient")]
    RankDeficient,
}

/// `H_P = Σ J_jk Z_j Z_k + Σ h_j Z_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingProblem {
    pub n: usize,
    #[serde(rename = "J")]
    pub couplings: Vec<(usize, usize, f64)>,
    pub h: Vec<f64>,
}

impl IsingProblem {
    pub fn new(n: usize, couplings: Vec<(usize, usize, f64)>, h: Vec<f64>) -> Result<Self, QaoaError> {
        let p = IsingProblem { n, couplings, h };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), QaoaError> {
        if self.n > 63 {
            return Err(QaoaError::TooLarge { n: self.n, max: 63 });
        }
        if self.h.len() != self.n {
            return Err(QaoaError::FieldCount { expected: self.n, got: self.h.len() });
        }
        if self.h.iter().any(|v| !v.is_finite()) {
            return Err(QaoaError::NonFinite("h"));
        }
        let mut seen = HashSet::new();
        for &(j, k, v) in &self.couplings {
            if j == k || j >= self.n || k >= self.n {
                return Err(QaoaError::BadCoupling(j, k));
            }
            if !v.is_finite() {
                return Err(QaoaError::NonFinite("J"));
            }
            if !seen.insert((j.min(k), j.max(k))) {
                return Err(QaoaError::DuplicateCoupling(j, k));
            }
        }
        Ok(())
    }

    /// Coefficient of the term with this label: `h_j` for `{j}`, `J_jk` for `{j,k}`.
    pub fn coefficient(&self, label: LabelSet) -> f64 {
        if let Some(j) = label.as_single() {
            return self.h.get(j).copied().unwrap_or(0.0);
        }
        if let Some((a, b)) = label.as_pair() {
            return self
                .couplings
                .iter()
                .filter(|&&(j, k, _)| (j.min(k), j.max(k)) == (a, b))
                .map(|&(_, _, v)| v)
                .sum();
        }
        0.0
    }

    /// Classical energy of bit assignment `x` (bit 0 ↦ spin +1).
    pub fn energy_of(&self, x: usize) -> f64 {
        let z = |j: usize| if (x >> j) & 1 == 0 { 1.0 } else { -1.0 };
        let fields: f64 = self.h.iter().enumerate().map(|(j, &h)| h * z(j)).sum();
        let pairs: f64 = self.couplings.iter().map(|&(j, k, v)| v * z(j) * z(k)).sum();
        fields + pairs
    }

    /// All pairs and fields drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut couplings = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                couplings.push((j, k, rng.gen_range(-1.0..=1.0)));
            }
        }
        let h = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        IsingProblem { n, couplings, h }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self, QaoaError> {
        let p = QaoaParams { betas, gammas };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), QaoaError> {
        if self.betas.is_empty() || self.betas.len() != self.gammas.len() {
            return Err(QaoaError::ParamLengths(self.betas.len(), self.gammas.len()));
        }
        if self.betas.iter().chain(&self.gammas).any(|v| !v.is_finite()) {
            return Err(QaoaError::NonFinite("params"));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub fn random<R: Rng>(p: usize, rng: &mut R) -> Self {
        use std::f64::consts::PI;
        QaoaParams {
            betas: (0..p).map(|_| rng.gen_range(-PI..PI)).collect(),
            gammas: (0..p).map(|_| rng.gen_range(-PI..PI)).collect(),
        }
    }
}

pub const MAX_REFERENCE_QUBITS: usize = 12;

/// `∏_l e^{iβ_l H_X} e^{iγ_l H_P} |+⟩^⊗n` by direct evaluation.
pub fn reference_state(problem: &IsingProblem, params: &QaoaParams) -> Result<StateVector, QaoaError> {
    let n = problem.n;
    if n > MAX_REFERENCE_QUBITS {
        return Err(QaoaError::TooLarge { n, max: MAX_REFERENCE_QUBITS });
    }
    let dim = 1usize << n;
    let energies: Vec<f64> = (0..dim).map(|x| problem.energy_of(x)).collect();
    let mut amps = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
        for (a, &e) in amps.iter_mut().zip(&energies) {
            *a *= Complex64::from_polar(1.0, gamma * e);
        }
        // e^{iβX} on each qubit; the X terms commute
        let (c, s) = (beta.cos(), Complex64::new(0.0, beta.sin()));
        for q in 0..n {
            let m = 1usize << q;
            for x in 0..dim {
                if x & m == 0 {
                    let (a0, a1) = (amps[x], amps[x | m]);
                    amps[x] = a0 * c + s * a1;
                    amps[x | m] = s * a0 + a1 * c;
                }
            }
        }
    }
    Ok(StateVector::from_amplitudes(amps))
}

/// `⟨ψ|H_P|ψ⟩`.
pub fn energy(problem: &IsingProblem, state: &StateVector) -> Result<f64, QaoaError> {
    if state.n_qubits() != problem.n {
        return Err(QaoaError::SizeMismatch { problem: problem.n, state: state.n_qubits() });
    }
    Ok(state.amplitudes().iter().enumerate().map(|(x, a)| a.norm_sqr() * problem.energy_of(x)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QaoaTopology {
    Linear,
    Ladder,
}

/// A synthesized QAOA circuit with what is needed to decode its output.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaSynthesis {
    pub circuit: Circuit,
    pub topology: Topology,
    /// Physical qubits holding the logical state at the end.
    pub data_qubits: Vec<usize>,
    /// Z labels of `data_qubits` at the end.
    pub final_labels: Vec<LabelSet>,
    /// Labels of the free starting frame.
    pub initial_labels: Vec<LabelSet>,
    /// Gate index ranges of each part, for per-part accounting.
    pub parts: Vec<Part>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartKind {
    Init,
    Reset,
    Copy,
    CostLayer,
    Decode,
    Mixer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Part {
    pub kind: PartKind,
    pub layer: usize,
    pub start: usize,
    pub end: usize,
}

impl QaoaSynthesis {
    /// The gates of one part as a standalone circuit, for resource accounting.
    pub fn part_circuit(&self, part: &Part) -> Circuit {
        Circuit::from_gates_unchecked(
            self.circuit.n_qubits(),
            self.circuit.n_cbits(),
            self.circuit.gates()[part.start..part.end].to_vec(),
        )
    }

    /// Gates of every part of `kind` in `layer`, concatenated.
    pub fn parts_circuit(&self, kinds: &[PartKind], layer: usize) -> Circuit {
        let gates = self
            .parts
            .iter()
            .filter(|p| p.layer == layer && kinds.contains(&p.kind))
            .flat_map(|p| self.circuit.gates()[p.start..p.end].iter().copied())
            .collect();
        Circuit::from_gates_unchecked(self.circuit.n_qubits(), self.circuit.n_cbits(), gates)
    }

    /// Decode the state of a finished run into the logical basis.
    pub fn decode_state(&self, state: &StateVector) -> StateVector {
        let data = if self.data_qubits.len() == state.n_qubits() { state.clone() } else { state.factor_out(&self.data_qubits) };
        data.frame_decode(&self.final_labels).expect("final labels are a valid frame")
    }
}

/// Emits RZ rotations for cost terms the first time they are seen.
struct CostRotations<'a> {
    problem: &'a IsingProblem,
    gamma: f64,
    done: HashSet<LabelSet>,
}

impl CostRotations<'_> {
    fn visit(&mut self, qubit: usize, label: LabelSet, out: &mut Vec<Gate>) {
        if label.is_empty() || !self.done.insert(label) {
            return;
        }
        let angle = self.gamma * self.problem.coefficient(label);
        if angle.abs() > crate::qft::ELIDE_EPS {
            out.push(Gate::Rz { qubit, angle });
        }
    }

    fn visit_line(&mut self, offset: usize, labels: &[LabelSet], out: &mut Vec<Gate>) {
        for (a, &l) in labels.iter().enumerate() {
            self.visit(offset + a, l, out);
        }
    }
}

/// Path at index `t` of the linear sequence starting at the zig-zag path.
pub fn path_at(n: usize, t: usize) -> Path {
    let mut p = Path::zigzag(n);
    for r in 0..t {
        p.apply_round(round_parity(r));
    }
    p
}

/// Round CNOTs moving from path `t` to path `t+1` (or back; rounds are involutions).
fn round_between(n: usize, t: usize, offset: usize) -> Vec<Gate> {
    round_cnots(n, round_parity(t))
        .into_iter()
        .map(|(c, tg)| Gate::Cnot { control: offset + c, target: offset + tg })
        .collect()
}

/// Moves along the path sequence, one index per round.
#[derive(Debug, Clone, Copy)]
struct Walk {
    from: usize,
    rounds: usize,
    forward: bool,
}

impl Walk {
    fn index_after(&self, r: usize) -> usize {
        if self.forward {
            self.from + r
        } else {
            self.from - r
        }
    }

    fn round_index(&self, r: usize) -> usize {
        if self.forward {
            self.from + r
        } else {
            self.from - r - 1
        }
    }
}

/// Cost layer on one or two rails walking in lockstep, rotations after every two rounds.
///
/// With `half_first` the first rotations wait for one round. Two rails
/// leaving the same line in opposite directions move disjoint position
/// parities, so the start line is still seen between them.
/// Returns the number of rotation layers that emitted gates.
fn emit_cost_layer(n: usize, walks: &[(usize, Walk)], rot: &mut CostRotations, half_first: bool, out: &mut Vec<Gate>) -> usize {
    let mut layers = 0;
    let mut visit = |r: usize, rot: &mut CostRotations, out: &mut Vec<Gate>| {
        let before = out.len();
        for &(offset, w) in walks {
            rot.visit_line(offset, &path_at(n, w.index_after(r.min(w.rounds))).labels(), out);
        }
        if out.len() > before {
            layers += 1;
        }
    };
    if !half_first {
        visit(0, rot, out);
    }
    let steps = walks.iter().map(|(_, w)| w.rounds).max().unwrap_or(0);
    let phase = if half_first { 0 } else { 1 };
    for r in 0..steps {
        for &(offset, w) in walks {
            if r < w.rounds {
                out.extend(round_between(n, w.round_index(r), offset));
            }
        }
        if r % 2 == phase || r + 1 == steps {
            visit(r + 1, rot, out);
        }
    }
    if steps == 0 && half_first {
        visit(0, rot, out);
    }
    layers
}

/// Mixer `∏_j exp(iβ_j X̄_j)` on a line whose logical lines are local.
pub fn synth_ux_linear(line: &SpanningLine, betas: &[f64]) -> Result<Circuit, QaoaError> {
    let n = line.n();
    let mut c = Circuit::new(n, 0);
    for g in ux_gates(line, betas, 0)? {
        c.push(g).expect("in range");
    }
    Ok(c)
}

fn ux_gates(line: &SpanningLine, betas: &[f64], offset: usize) -> Result<Vec<Gate>, QaoaError> {
    let (mut lead, rest) = ux_split(line, betas, offset)?;
    lead.extend(rest);
    Ok(lead)
}

/// The mixer as its first CNOT layer and everything after it.
fn ux_split(line: &SpanningLine, betas: &[f64], offset: usize) -> Result<(Vec<Gate>, Vec<Gate>), QaoaError> {
    let n = line.n();
    if betas.len() != n {
        return Err(QaoaError::BetaCount { expected: n, got: betas.len() });
    }
    let mut singles: Vec<(usize, f64)> = Vec::new();
    let mut pairs: [Vec<(usize, f64)>; 2] = [Vec::new(), Vec::new()];
    for (j, &beta) in betas.iter().enumerate() {
        let l = line.logical_line(j);
        match l.as_slice() {
            [a] => singles.push((*a, beta)),
            [a, b] if b - a == 1 => pairs[a % 2].push((*a, beta)),
            _ => return Err(QaoaError::NonLocalLine { j, line: l }),
        }
    }
    let in_stage = |q: usize, s: usize| pairs[s].iter().any(|&(a, _)| a == q || a + 1 == q);
    let rx = |q: usize, angle: f64| Gate::Rx { qubit: offset + q, angle };
    let cx = |a: usize| Gate::Cnot { control: offset + a, target: offset + a + 1 };
    let lead = pairs[0].iter().map(|&(a, _)| cx(a)).collect();
    let mut out = Vec::new();
    let (early, late): (Vec<_>, Vec<_>) = singles.iter().partition(|&&(q, _)| !in_stage(q, 0));
    out.extend(early.iter().map(|&&(q, b)| rx(q, b)));
    for (s, stage) in pairs.iter().enumerate() {
        if s > 0 {
            out.extend(stage.iter().map(|&(a, _)| cx(a)));
        }
        out.extend(stage.iter().map(|&(a, b)| rx(a, b)));
        out.extend(stage.iter().map(|&(a, _)| cx(a)));
        if s == 0 {
            out.extend(late.iter().map(|&&(q, b)| rx(q, b)));
        }
    }
    Ok((lead, out))
}

fn push_all(c: &mut Circuit, gates: Vec<Gate>) {
    for g in gates {
        c.push(g).expect("synthesized gates are valid");
    }
}

/// Cost layer `exp(iγ H_P)` on a linear chain starting from the zig-zag frame.
pub fn synth_up_linear(problem: &IsingProblem, gamma: f64) -> Result<Circuit, QaoaError> {
    problem.validate()?;
    let n = problem.n;
    if n < 2 {
        return Err(QaoaError::TooSmall(n));
    }
    let mut rot = CostRotations { problem, gamma, done: HashSet::new() };
    let mut gates = Vec::new();
    emit_cost_layer(n, &[(0, Walk { from: 0, rounds: n - 1, forward: true })], &mut rot, false, &mut gates);
    let mut c = Circuit::new(n, 0);
    push_all(&mut c, gates);
    Ok(c)
}

/// Starting labels of the linear chain.
pub fn linear_start_labels(n: usize) -> Vec<LabelSet> {
    Path::zigzag(n).labels()
}

pub fn synth_qaoa(problem: &IsingProblem, params: &QaoaParams, topology: QaoaTopology) -> Result<QaoaSynthesis, QaoaError> {
    problem.validate()?;
    params.validate()?;
    let n = problem.n;
    if n < 2 {
        return Err(QaoaError::TooSmall(n));
    }
    match topology {
        QaoaTopology::Linear => synth_linear(problem, params),
        QaoaTopology::Ladder => synth_ladder(problem, params),
    }
}

struct Builder {
    c: Circuit,
    parts: Vec<Part>,
}

impl Builder {
    fn part(&mut self, kind: PartKind, layer: usize, gates: Vec<Gate>) {
        let start = self.c.len();
        push_all(&mut self.c, gates);
        self.parts.push(Part { kind, layer, start, end: self.c.len() });
    }
}

fn synth_linear(problem: &IsingProblem, params: &QaoaParams) -> Result<QaoaSynthesis, QaoaError> {
    let n = problem.n;
    let mut b = Builder { c: Circuit::new(n, 0), parts: Vec::new() };
    b.part(PartKind::Init, 0, (0..n).map(|q| Gate::H { qubit: q }).collect());
    let mut at = 0usize;
    for (layer, (&beta, &gamma)) in params.betas.iter().zip(&params.gammas).enumerate() {
        let forward = layer % 2 == 0;
        let walk = Walk { from: at, rounds: n - 1, forward };
        let mut rot = CostRotations { problem, gamma, done: HashSet::new() };
        let mut gates = Vec::new();
        emit_cost_layer(n, &[(0, walk)], &mut rot, false, &mut gates);
        b.part(PartKind::CostLayer, layer, gates);
        at = walk.index_after(n - 1);
        let line = path_at(n, at).line();
        b.part(PartKind::Mixer, layer, ux_gates(&line, &vec![beta; n], 0)?);
    }
    Ok(QaoaSynthesis {
        circuit: b.c,
        topology: Topology::Linear(n),
        data_qubits: (0..n).collect(),
        final_labels: path_at(n, at).labels(),
        initial_labels: linear_start_labels(n),
        parts: b.parts,
    })
}

/// Rung CNOTs copying rail 1 onto the empty rail 2.
pub fn ladder_copy(n: usize) -> Vec<Gate> {
    (0..n).map(|k| Gate::Cnot { control: k, target: n + k }).collect()
}

/// For every rail-2 position, the rail-1 positions whose labels sum to its label.
pub fn correction_supports(rail1: &[LabelSet], rail2: &[LabelSet]) -> Result<Vec<Vec<usize>>, QaoaError> {
    let rows: Vec<u64> = rail1.iter().map(|l| l.0).collect();
    rail2
        .iter()
        .map(|l| {
            let combo = gf2::express(&rows, l.0).ok_or(QaoaError::RankDeficient)?;
            Ok((0..rail1.len()).filter(|&a| (combo >> a) & 1 == 1).collect())
        })
        .collect()
}

/// X measurement of rail 2 and the conditional Z corrections on rail 1.
pub fn ladder_decode(rail1: &[LabelSet], rail2: &[LabelSet], cbit_base: usize) -> Result<Vec<Gate>, QaoaError> {
    let n = rail1.len();
    let supports = correction_supports(rail1, rail2)?;
    let mut out: Vec<Gate> = (0..n).map(|k| Gate::MeasureX { qubit: n + k, cbit: cbit_base + k }).collect();
    for (k, s) in supports.iter().enumerate() {
        out.extend(s.iter().map(|&a| Gate::CondZ { qubit: a, cbit: cbit_base + k }));
    }
    Ok(out)
}

/// Rounds taken by rail 1 and rail 2 in one ladder cost layer.
///
/// Rail 2 takes the longer walk so the first CNOT layer of the mixer on
/// rail 1 can run alongside its last round.
pub fn ladder_split(n: usize) -> (usize, usize) {
    let a = (n - 1) / 2;
    (a, n - 1 - a)
}

/// Both rails' cost layer, with the initial half step taken only when it
/// saves a rotation layer.
fn ladder_cost_layer(n: usize, problem: &IsingProblem, gamma: f64, w1: Walk, w2: Walk) -> Vec<Gate> {
    let walks = [(0, w1), (n, w2)];
    let mut best: Option<(usize, Vec<Gate>)> = None;
    for half_first in [false, true] {
        let mut rot = CostRotations { problem, gamma, done: HashSet::new() };
        let mut gates = Vec::new();
        let layers = emit_cost_layer(n, &walks, &mut rot, half_first, &mut gates);
        if best.as_ref().is_none_or(|(l, _)| layers < *l) {
            best = Some((layers, gates));
        }
    }
    best.expect("two candidates").1
}

fn synth_ladder(problem: &IsingProblem, params: &QaoaParams) -> Result<QaoaSynthesis, QaoaError> {
    let n = problem.n;
    let p = params.p();
    let mut b = Builder { c: Circuit::new(2 * n, 0), parts: Vec::new() };
    let (ra, rb) = ladder_split(n);
    // rail 1 starts where `ra` forward rounds end on the last path of the linear walk
    let mut at = rb;
    b.part(PartKind::Init, 0, (0..n).map(|q| Gate::H { qubit: q }).collect());
    let initial = path_at(n, at).labels();
    let mut prev_cbits: Option<usize> = None;
    for layer in 0..p {
        let (beta, gamma) = (params.betas[layer], params.gammas[layer]);
        if let Some(base) = prev_cbits {
            let mut g: Vec<Gate> = (0..n).map(|k| Gate::CondZ { qubit: n + k, cbit: base + k }).collect();
            g.extend((0..n).map(|k| Gate::H { qubit: n + k }));
            b.part(PartKind::Reset, layer, g);
        }
        b.part(PartKind::Copy, layer, ladder_copy(n));
        let forward = layer % 2 == 0;
        let w1 = Walk { from: at, rounds: ra, forward };
        let w2 = Walk { from: at, rounds: rb, forward: !forward };
        b.part(PartKind::CostLayer, layer, ladder_cost_layer(n, problem, gamma, w1, w2));
        let end1 = w1.index_after(ra);
        let end2 = w2.index_after(rb);
        let base = b.c.add_cbits(n);
        let rail1 = path_at(n, end1).labels();
        let rail2 = path_at(n, end2).labels();
        let (lead, rest) = ux_split(&SpanningLine { labels: rail1.clone() }, &vec![beta; n], 0)?;
        // corrections are Z strings and pass through the lead CNOTs as a frame change
        let mut shifted = rail1;
        for g in &lead {
            if let Gate::Cnot { control, target } = *g {
                let lc = shifted[control];
                shifted[target] ^= lc;
            }
        }
        let (measure, correct): (Vec<Gate>, Vec<Gate>) =
            ladder_decode(&shifted, &rail2, base)?.into_iter().partition(|g| matches!(g, Gate::MeasureX { .. }));
        b.part(PartKind::Decode, layer, measure);
        b.part(PartKind::Mixer, layer, lead);
        b.part(PartKind::Decode, layer, correct);
        b.part(PartKind::Mixer, layer, rest);
        prev_cbits = Some(base);
        at = end1;
    }
    Ok(QaoaSynthesis {
        circuit: b.c,
        topology: Topology::Ladder(n),
        data_qubits: (0..n).collect(),
        final_labels: path_at(n, at).labels(),
        initial_labels: initial,
        parts: b.parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_of_bell_state() {
        let p = IsingProblem::new(2, vec![(0, 1, 1.0)], vec![0.0, 0.0]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(vec![
            Complex64::new(r, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(r, 0.0),
        ]);
        assert!((energy(&p, &s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_single_field() {
        let p = IsingProblem { n: 1, couplings: vec![], h: vec![1.0] };
        let g = 0.4;
        let s = reference_state(&p, &QaoaParams { betas: vec![0.0], gammas: vec![g] }).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - Complex64::from_polar(r, g)).norm() < 1e-14);
        assert!((s.amplitudes()[1] - Complex64::from_polar(r, -g)).norm() < 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(QaoaParams::new(vec![0.1], vec![]).is_err());
        assert!(QaoaParams::new(vec![], vec![]).is_err());
        assert!(IsingProblem::new(2, vec![(0, 0, 1.0)], vec![0.0, 0.0]).is_err());
        assert!(IsingProblem::new(2, vec![(0, 1, 1.0), (1, 0, 2.0)], vec![0.0, 0.0]).is_err());
    }
}
