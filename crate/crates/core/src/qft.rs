//! QFT on a linear chain without SWAP gates.
//!
//! The CNOT skeleton is a staircase in, a bubble network of
//! CNOT(k→k-1)·CNOT(k→k+1) pairs and a staircase out. It carries every pair
//! label `{i,j}` across the chain exactly once and leaves the qubits in
//! reversed order. Each controlled phase is split into three Z rotations
//! (two singles and one pair). Every middle Hadamard becomes RZ·RX·RZ with
//! the RX applied while the logical line is a single qubit.

use std::collections::HashMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::circuit::{normalize_angle, Circuit, Gate};
use crate::labels::LabelSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QftError {
    #[error("QFT synthesis needs n >= 2, got {0}")]
    TooSmall(usize),
    #[error("QFT synthesis supports n <= 64, got {0}")]
    TooLarge(usize),
}

/// Angles below this are dropped after merging.
pub const ELIDE_EPS: f64 = 1e-14;

/// Controlled-phase angle between logical `i < j`.
pub fn cp_angle(i: usize, j: usize) -> f64 {
    PI / (1u64 << (j - i)) as f64
}

/// The all-to-all textbook QFT: `H_i` followed by `CP_{ij}(π/2^{j-i})` for `j > i`.
/// Output qubits come out bit-reversed relative to the DFT.
pub fn reference_qft(n: usize) -> Circuit {
    let mut c = Circuit::new(n, 0);
    for i in 0..n {
        c.push(Gate::H { qubit: i }).expect("in range");
        for j in i + 1..n {
            c.push(Gate::Cp { a: i, b: j, angle: cp_angle(i, j) }).expect("in range");
        }
    }
    c
}

/// Named position in the CNOT skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// `CNOT(k+1 → k)` on the way in.
    In(usize),
    /// `CNOT(k → k-1)` of bubble pass `i`.
    Left(usize, usize),
    /// `CNOT(k → k+1)` of bubble pass `i`.
    Right(usize, usize),
    /// `CNOT(k+1 → k)` on the way out.
    Out(usize),
}

/// The skeleton as `(slot, control, target)`, `n² - 1` CNOTs.
pub fn skeleton(n: usize) -> Vec<(Slot, usize, usize)> {
    let mut v = Vec::with_capacity(n * n);
    for k in 0..n - 1 {
        v.push((Slot::In(k), k + 1, k));
    }
    for i in 0..n - 1 {
        for k in 0..n - 1 - i {
            if k >= 1 {
                v.push((Slot::Left(i, k), k, k - 1));
            }
            v.push((Slot::Right(i, k), k, k + 1));
        }
    }
    for k in (0..n - 1).rev() {
        v.push((Slot::Out(k), k + 1, k));
    }
    v
}

/// What a single-qubit gate in the plan implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Item {
    /// Physical Hadamard on logical 0 at the start.
    FirstH,
    /// Z shares of logical `j` due before its Hadamard.
    Pre(usize),
    /// Pair share of `CP_{ij}`.
    Pair(usize, usize),
    /// The X rotation of the decomposed Hadamard of logical `j`.
    HalfH(usize),
    /// Z shares of logical `i` due after its Hadamard.
    Post(usize),
    /// Physical Hadamard on logical `n-1` at the end.
    LastH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    Before,
    After,
}

fn item_gates(n: usize, qubit: usize, item: Item) -> Vec<Gate> {
    let rz = |angle: f64| Gate::Rz { qubit, angle };
    // H ∝ RZ(-π/4)·RX(-π/4)·RZ(-π/4)
    let h_part = -PI / 4.0;
    match item {
        Item::FirstH | Item::LastH => vec![Gate::H { qubit }],
        Item::HalfH(_) => vec![Gate::Rx { qubit, angle: h_part }],
        Item::Pair(i, j) => vec![rz(cp_angle(i, j) / 4.0)],
        Item::Pre(j) => {
            let mut g: Vec<Gate> = (0..j).map(|i| rz(-cp_angle(i, j) / 4.0)).collect();
            if j < n - 1 {
                g.push(rz(h_part));
            }
            g
        }
        Item::Post(i) => {
            let mut g = Vec::new();
            if i > 0 {
                g.push(rz(h_part));
            }
            g.extend((i + 1..n).map(|j| rz(-cp_angle(i, j) / 4.0)));
            g
        }
    }
}

/// Single-qubit attachments of the skeleton, keyed by skeleton slot.
fn attachments(n: usize) -> HashMap<(Slot, Side), Vec<(usize, Item)>> {
    let mut att: HashMap<(Slot, Side), Vec<(usize, Item)>> = HashMap::new();
    let mut put = |slot: Slot, side: Side, q: usize, item: Item| att.entry((slot, side)).or_default().push((q, item));
    put(Slot::In(0), Side::Before, 0, Item::FirstH);
    for j in 1..n {
        // logical 1 waits one stair step so its rotation shares a layer with the first pair
        if j == 1 && n > 2 {
            put(Slot::In(1), Side::Before, 1, Item::Pre(1));
        } else {
            put(Slot::In(j - 1), Side::Before, j, Item::Pre(j));
        }
    }
    for i in 0..n - 1 {
        for k in 0..n - 1 - i {
            let item = Item::Pair(i, i + k + 1);
            if (2 * i + k) % 2 == 0 {
                let slot = if k >= 1 { Slot::Left(i, k) } else { Slot::Right(i, 0) };
                put(slot, Side::Before, k, item);
            } else {
                put(Slot::Right(i, k), Side::After, k, item);
            }
        }
    }
    for i in 0..n.saturating_sub(2) {
        put(Slot::Left(i, 1), Side::After, 0, Item::HalfH(i + 1));
    }
    put(Slot::Out(n - 2), Side::After, n - 1, Item::Post(0));
    for i in 1..n - 1 {
        let q = n - 1 - i;
        put(Slot::Out(q - 1), Side::After, q, Item::Post(i));
    }
    put(Slot::Out(0), Side::After, 0, Item::LastH);
    att
}

/// The ordered gate plan before rotation merging.
pub fn rotation_plan(n: usize) -> Result<Vec<Gate>, QftError> {
    if n < 2 {
        return Err(QftError::TooSmall(n));
    }
    if n > 64 {
        return Err(QftError::TooLarge(n));
    }
    let att = attachments(n);
    let mut out = Vec::new();
    let emit = |slot: Slot, side: Side, out: &mut Vec<Gate>| {
        if let Some(list) = att.get(&(slot, side)) {
            for &(q, item) in list {
                out.extend(item_gates(n, q, item));
            }
        }
    };
    for (slot, c, t) in skeleton(n) {
        emit(slot, Side::Before, &mut out);
        out.push(Gate::Cnot { control: c, target: t });
        emit(slot, Side::After, &mut out);
    }
    Ok(out)
}

/// Plan entries with the labels they rely on, for inspection and tests.
pub fn planned_items(n: usize) -> Vec<(usize, Item, LabelSet)> {
    let att = attachments(n);
    let mut labels: Vec<LabelSet> = (0..n).map(LabelSet::single).collect();
    let mut out = Vec::new();
    for (slot, c, t) in skeleton(n) {
        if let Some(list) = att.get(&(slot, Side::Before)) {
            out.extend(list.iter().map(|&(q, item)| (q, item, labels[q])));
        }
        let lc = labels[c];
        labels[t] ^= lc;
        if let Some(list) = att.get(&(slot, Side::After)) {
            out.extend(list.iter().map(|&(q, item)| (q, item, labels[q])));
        }
    }
    out
}

/// Sum runs of consecutive RZ gates on the same qubit.
///
/// Sums are reduced to `(-π, π]`; rotations within [`ELIDE_EPS`] of zero are dropped.
pub fn merge_rotations(c: &Circuit) -> Circuit {
    let n = c.n_qubits();
    let mut pending: Vec<Option<f64>> = vec![None; n];
    let mut out = Circuit::new(n, c.n_cbits());
    let flush = |q: usize, pending: &mut Vec<Option<f64>>, out: &mut Circuit| {
        if let Some(a) = pending[q].take() {
            let a = normalize_angle(a);
            if a.abs() > ELIDE_EPS {
                out.push(Gate::Rz { qubit: q, angle: a }).expect("valid input");
            }
        }
    };
    for g in c.gates() {
        if let Gate::Rz { qubit, angle } = *g {
            *pending[qubit].get_or_insert(0.0) += angle;
            continue;
        }
        for q in g.qubits() {
            flush(q, &mut pending, &mut out);
        }
        out.push(*g).expect("valid input");
    }
    for q in 0..n {
        flush(q, &mut pending, &mut out);
    }
    out
}

/// The linear-chain QFT. Its output equals `reference_qft(n)` followed by
/// reversing the qubit order, up to global phase.
pub fn synth_qft(n: usize) -> Result<Circuit, QftError> {
    let plan = rotation_plan(n)?;
    let raw = Circuit::from_gates(n, 0, plan).expect("plan indices are in range");
    Ok(merge_rotations(&raw))
}
