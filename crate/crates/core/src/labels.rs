//! Parity labels and their evolution under CNOT circuits.
//!
//! Every physical qubit carries a [`LabelSet`]: the logical indices whose
//! Z-parity it holds. A CNOT replaces the target label by the symmetric
//! difference with the control label.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::gf2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("CNOT control and target are both qubit {0}")]
    SameQubit(usize),
    #[error("qubit {qubit} out of range for {n} qubits")]
    OutOfRange { qubit: usize, n: usize },
    #[error("label matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("label matrix is singular over GF(2)")]
    Singular,
    #[error("at most 64 qubits can be tracked, got {0}")]
    TooManyQubits(usize),
    #[error("gate {index} ({name}) cannot be tracked as a parity-label update")]
    UnsupportedGate { index: usize, name: &'static str },
    #[error("expected {expected} measured bits, got {got}")]
    BitCount { expected: usize, got: usize },
    #[error("measured bits are inconsistent with the stabilizers")]
    Inconsistent,
    #[error("logical index {j} out of range for {n} logical qubits")]
    LogicalOutOfRange { j: usize, n: usize },
}

/// A subset of logical indices `{0..63}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn single(i: usize) -> Self {
        LabelSet(1 << i)
    }

    pub fn pair(i: usize, j: usize) -> Self {
        LabelSet((1 << i) | (1 << j))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        LabelSet(it.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && (self.0 >> i) & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Symmetric difference.
    pub fn sym_diff(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 ^ other.0)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| (self.0 >> i) & 1 == 1)
    }

    /// The two members of a weight-2 label, smaller first.
    pub fn as_pair(self) -> Option<(usize, usize)> {
        if self.weight() != 2 {
            return None;
        }
        let a = self.0.trailing_zeros() as usize;
        let b = 63 - self.0.leading_zeros() as usize;
        Some((a, b))
    }

    pub fn as_single(self) -> Option<usize> {
        (self.weight() == 1).then(|| self.0.trailing_zeros() as usize)
    }
}

impl std::ops::BitXor for LabelSet {
    type Output = LabelSet;
    fn bitxor(self, rhs: LabelSet) -> LabelSet {
        self.sym_diff(rhs)
    }
}

impl std::ops::BitXorAssign for LabelSet {
    fn bitxor_assign(&mut self, rhs: LabelSet) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for LabelSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i >= 64) {
            return Err(serde::de::Error::custom(format!("label index {bad} >= 64")));
        }
        Ok(LabelSet::from_indices(v))
    }
}

/// Labels at one point of the timeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub lambda: usize,
    pub labels: Vec<LabelSet>,
}

/// One stabilizer generator seeded by an empty qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    /// Physical qubits of the Z-string.
    pub support: Vec<usize>,
    /// The empty qubit whose initial Z the string descends from.
    pub seed: usize,
}

/// How often [`track_circuit`] records a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Granularity {
    /// After every ASAP layer of CNOTs.
    #[default]
    Layer,
    /// After every CNOT.
    Gate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tracker {
    n_logical: usize,
    labels: Vec<LabelSet>,
    // labels over the initial physical frame, used for stabilizers
    ext: Vec<u64>,
    seeds: Vec<usize>,
    history: Vec<Snapshot>,
}

impl Tracker {
    /// Identity labels `{a}` on `n` qubits.
    pub fn new(n: usize) -> Result<Self, LabelError> {
        Self::from_labels(n, (0..n).map(LabelSet::single).collect())
    }

    /// `n_logical` active qubits followed by empty qubits up to `n_physical`.
    pub fn with_empties(n_logical: usize, n_physical: usize) -> Result<Self, LabelError> {
        let labels = (0..n_physical)
            .map(|a| if a < n_logical { LabelSet::single(a) } else { LabelSet::EMPTY })
            .collect();
        Self::from_labels(n_logical, labels)
    }

    /// Arbitrary starting frame. Qubits with an empty label are stabilizer seeds.
    pub fn from_labels(n_logical: usize, labels: Vec<LabelSet>) -> Result<Self, LabelError> {
        if labels.len() > 64 || n_logical > 64 {
            return Err(LabelError::TooManyQubits(labels.len().max(n_logical)));
        }
        let seeds = (0..labels.len()).filter(|&a| labels[a].is_empty()).collect();
        Ok(Tracker {
            n_logical,
            ext: (0..labels.len()).map(|a| 1u64 << a).collect(),
            history: vec![Snapshot { lambda: 0, labels: labels.clone() }],
            labels,
            seeds,
        })
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn n_physical(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[LabelSet] {
        &self.labels
    }

    pub fn history(&self) -> &[Snapshot] {
        &self.history
    }

    pub fn stabilizer_seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<(), LabelError> {
        let n = self.labels.len();
        for q in [control, target] {
            if q >= n {
                return Err(LabelError::OutOfRange { qubit: q, n });
            }
        }
        if control == target {
            return Err(LabelError::SameQubit(control));
        }
        let c = self.labels[control];
        self.labels[target] ^= c;
        self.ext[target] ^= self.ext[control];
        Ok(())
    }

    /// Record the current labels as the next timeline entry.
    pub fn snapshot(&mut self) {
        let lambda = self.history.len();
        self.history.push(Snapshot { lambda, labels: self.labels.clone() });
    }

    pub fn logical_z_support(&self, qubit: usize) -> LabelSet {
        self.labels[qubit]
    }

    /// Physical qubits whose label contains `j`.
    pub fn logical_line(&self, j: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&b| self.labels[b].contains(j)).collect()
    }

    fn rows(&self) -> Vec<u64> {
        self.labels.iter().map(|l| l.0).collect()
    }

    pub fn rank(&self) -> usize {
        gf2::rank(&self.rows())
    }

    /// X-basis labels: the GF(2) inverse-transpose of the Z-label matrix.
    pub fn x_basis_labels(&self) -> Result<Vec<LabelSet>, LabelError> {
        x_basis_labels(&self.labels, self.n_logical)
    }

    pub fn stabilizer_supports(&self) -> Vec<Stabilizer> {
        self.seeds
            .iter()
            .map(|&e| {
                let combo = gf2::express(&self.ext, 1 << e)
                    .expect("initial-frame labels stay invertible under CNOTs");
                Stabilizer { support: (0..self.ext.len()).filter(|&a| (combo >> a) & 1 == 1).collect(), seed: e }
            })
            .collect()
    }

    /// Logical bits `x` with `labels · x = bits` over GF(2).
    pub fn decode_bitstring(&self, bits: &[bool]) -> Result<Vec<bool>, LabelError> {
        decode_bitstring(&self.labels, self.n_logical, bits)
    }
}

/// Inverse-transpose of a square label matrix.
pub fn x_basis_labels(labels: &[LabelSet], n_logical: usize) -> Result<Vec<LabelSet>, LabelError> {
    if labels.len() != n_logical {
        return Err(LabelError::NotSquare { rows: labels.len(), cols: n_logical });
    }
    let rows: Vec<u64> = labels.iter().map(|l| l.0).collect();
    let inv = gf2::inverse(&rows).ok_or(LabelError::Singular)?;
    Ok(gf2::transpose(&inv, n_logical).into_iter().map(LabelSet).collect())
}

pub fn decode_bitstring(labels: &[LabelSet], n_logical: usize, bits: &[bool]) -> Result<Vec<bool>, LabelError> {
    if bits.len() != labels.len() {
        return Err(LabelError::BitCount { expected: labels.len(), got: bits.len() });
    }
    let rows: Vec<u64> = labels.iter().map(|l| l.0).collect();
    if gf2::rank(&rows) < n_logical {
        return Err(LabelError::Singular);
    }
    let x = gf2::solve(&rows, n_logical, bits).ok_or(LabelError::Inconsistent)?;
    Ok((0..n_logical).map(|j| (x >> j) & 1 == 1).collect())
}

/// Track a circuit from identity labels on all of its qubits.
pub fn track_circuit(circuit: &Circuit, granularity: Granularity) -> Result<Tracker, LabelError> {
    let mut t = Tracker::new(circuit.n_qubits())?;
    track_into(&mut t, circuit, granularity)?;
    Ok(t)
}

/// Continue tracking `circuit` on an existing tracker.
///
/// Diagonal and single-qubit gates leave the Z labels alone and are skipped.
/// Entangling gates other than CNOT are rejected.
pub fn track_into(t: &mut Tracker, circuit: &Circuit, granularity: Granularity) -> Result<(), LabelError> {
    let mut ready = vec![0usize; circuit.n_qubits()];
    let mut current_layer = 0usize;
    let mut pending = false;
    for (index, g) in circuit.gates().iter().enumerate() {
        match *g {
            Gate::Cnot { control, target } => {
                if granularity == Granularity::Layer {
                    let layer = ready[control].max(ready[target]) + 1;
                    if layer > current_layer && pending {
                        t.snapshot();
                    }
                    current_layer = current_layer.max(layer);
                    ready[control] = current_layer;
                    ready[target] = current_layer;
                }
                t.apply_cnot(control, target)?;
                pending = true;
                if granularity == Granularity::Gate {
                    t.snapshot();
                    pending = false;
                }
            }
            Gate::Cz { .. } | Gate::Cp { .. } | Gate::Iswap { .. } | Gate::IswapDg { .. } => {
                return Err(LabelError::UnsupportedGate { index, name: g.name() });
            }
            _ => {}
        }
    }
    if pending {
        t.snapshot();
    }
    Ok(())
}

/// Track explicit CNOT rounds, one snapshot per round.
pub fn track_rounds(t: &mut Tracker, rounds: &[Vec<(usize, usize)>]) -> Result<(), LabelError> {
    for round in rounds {
        for &(c, tg) in round {
            t.apply_cnot(c, tg)?;
        }
        t.snapshot();
    }
    Ok(())
}
