//! Rewriting CNOT circuits into other entangling gate sets.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RebaseError {
    #[error("gate {index} is a {name}; only CNOT may be entangling in the input")]
    NonCnotEntangling { index: usize, name: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GateSetTarget {
    /// CNOT = H(t)·CZ·H(t).
    CzH,
    /// CNOT = H(t)·CP(π)·H(t).
    CpY,
    /// Back-to-back CNOT pairs become one ISWAP; the rest go through CZ.
    IswapPairing,
}

impl std::str::FromStr for GateSetTarget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cz" => Ok(GateSetTarget::CzH),
            "cp" => Ok(GateSetTarget::CpY),
            "iswap" => Ok(GateSetTarget::IswapPairing),
            _ => Err(format!("unknown gate set {s:?}, expected cz, cp or iswap")),
        }
    }
}

/// `CNOT(a→b)·CNOT(b→a)` (first `a→b`) equals, up to global phase,
/// `H(a)` then `ISWAP(a,b)` then `RZ(a, π/4)`, `RX(b, -π/4)`, `RZ(b, -π/4)`.
/// Found by exhaustive search over single-qubit Clifford dressings.
pub fn iswap_pair(a: usize, b: usize) -> [Gate; 5] {
    [
        Gate::H { qubit: a },
        Gate::Iswap { a, b },
        Gate::Rz { qubit: a, angle: PI / 4.0 },
        Gate::Rx { qubit: b, angle: -PI / 4.0 },
        Gate::Rz { qubit: b, angle: -PI / 4.0 },
    ]
}

fn check_input(c: &Circuit) -> Result<(), RebaseError> {
    for (index, g) in c.gates().iter().enumerate() {
        if g.is_entangling() && !matches!(g, Gate::Cnot { .. }) {
            return Err(RebaseError::NonCnotEntangling { index, name: g.name() });
        }
    }
    Ok(())
}

/// Greedy left-to-right matching of back-to-back CNOT pairs with exchanged roles.
///
/// Two CNOTs are back-to-back when no gate between them touches either qubit.
/// Returns `(first, second)` gate indices.
pub fn match_pairs(c: &Circuit) -> Vec<(usize, usize)> {
    let gates = c.gates();
    let mut used = vec![false; gates.len()];
    let mut out = Vec::new();
    for i in 0..gates.len() {
        let Gate::Cnot { control: a, target: b } = gates[i] else { continue };
        if used[i] {
            continue;
        }
        let next = (i + 1..gates.len()).find(|&j| gates[j].qubits().into_iter().any(|q| q == a || q == b));
        if let Some(j) = next {
            if !used[j] && gates[j] == (Gate::Cnot { control: b, target: a }) {
                used[i] = true;
                used[j] = true;
                out.push((i, j));
            }
        }
    }
    out
}

fn cz_h(control: usize, target: usize, target_set: GateSetTarget) -> [Gate; 3] {
    let mid = match target_set {
        GateSetTarget::CpY => Gate::Cp { a: control, b: target, angle: PI },
        _ => Gate::Cz { a: control, b: target },
    };
    [Gate::H { qubit: target }, mid, Gate::H { qubit: target }]
}

pub fn rebase(c: &Circuit, target: GateSetTarget) -> Result<Circuit, RebaseError> {
    check_input(c)?;
    let pairs = if target == GateSetTarget::IswapPairing { match_pairs(c) } else { Vec::new() };
    let mut first = vec![false; c.len()];
    let mut second = vec![false; c.len()];
    for &(i, j) in &pairs {
        first[i] = true;
        second[j] = true;
    }
    let mut out = Vec::with_capacity(c.len() * 3);
    for (k, g) in c.gates().iter().enumerate() {
        match *g {
            Gate::Cnot { control, target: t } => {
                if first[k] {
                    out.extend(iswap_pair(control, t));
                } else if !second[k] {
                    out.extend(cz_h(control, t, target));
                }
            }
            g => out.push(g),
        }
    }
    Ok(Circuit::from_gates(c.n_qubits(), c.n_cbits(), out).expect("rebased gates stay in range"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SavingsReport {
    pub entangling_before: usize,
    pub pairs: usize,
    pub projected_cz: usize,
    pub projected_cp: usize,
    pub projected_iswap: usize,
}

pub fn entangling_savings(c: &Circuit) -> SavingsReport {
    let before = c.gates().iter().filter(|g| g.is_entangling()).count();
    let pairs = match_pairs(c).len();
    SavingsReport {
        entangling_before: before,
        pairs,
        projected_cz: before,
        projected_cp: before,
        projected_iswap: before - pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(c: usize, t: usize) -> Gate {
        Gate::Cnot { control: c, target: t }
    }

    #[test]
    fn single_cnot_to_cz() {
        let c = Circuit::from_gates(2, 0, [cx(0, 1)]).unwrap();
        let r = rebase(&c, GateSetTarget::CzH).unwrap();
        assert_eq!(r.gates(), &[Gate::H { qubit: 1 }, Gate::Cz { a: 0, b: 1 }, Gate::H { qubit: 1 }]);
    }

    #[test]
    fn greedy_tie_break() {
        let c = Circuit::from_gates(2, 0, [cx(0, 1), cx(1, 0), cx(0, 1)]).unwrap();
        assert_eq!(match_pairs(&c), vec![(0, 1)]);
        let none = Circuit::from_gates(3, 0, [cx(0, 1), cx(1, 2)]).unwrap();
        assert_eq!(entangling_savings(&none).pairs, 0);
    }

    #[test]
    fn rejects_other_entanglers() {
        let c = Circuit::from_gates(2, 0, [Gate::Cz { a: 0, b: 1 }]).unwrap();
        assert!(rebase(&c, GateSetTarget::CzH).is_err());
    }
}
