//! Gate-level circuit representation, topology checks and resource accounting.
//!
//! Rotation convention: `Rz(φ) = exp(iφZ)` and `Rx(θ) = exp(iθX)`.
//! `Cp(θ) = diag(1, 1, 1, e^{iθ})`.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {gate}: qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { gate: String, qubit: usize, n: usize },
    #[error("gate {gate}: cbit {cbit} out of range for {n} cbits")]
    CbitOutOfRange { gate: String, cbit: usize, n: usize },
    #[error("gate {0}: qubit indices must be distinct")]
    RepeatedQubit(String),
    #[error("gate {0}: angle is not finite")]
    NonFiniteAngle(String),
    #[error("COND_Z reads cbit {0} before any MEASURE_X wrote it")]
    UnwrittenCbit(usize),
    #[error("cbit {0} is written twice")]
    CbitReassigned(usize),
    #[error("circuit with measurements is not invertible")]
    NotInvertible,
    #[error("cannot compose circuits of {0} and {1} qubits")]
    SizeMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Rz { qubit: usize, angle: f64 },
    Rx { qubit: usize, angle: f64 },
    H { qubit: usize },
    Cp { a: usize, b: usize, angle: f64 },
    Cz { a: usize, b: usize },
    Iswap { a: usize, b: usize },
    /// Inverse of [`Gate::Iswap`].
    IswapDg { a: usize, b: usize },
    MeasureX { qubit: usize, cbit: usize },
    CondZ { qubit: usize, cbit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateClass {
    Entangling,
    SingleQubit,
    Measurement,
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Cnot { .. } => "CNOT",
            Gate::Rz { .. } => "RZ",
            Gate::Rx { .. } => "RX",
            Gate::H { .. } => "H",
            Gate::Cp { .. } => "CP",
            Gate::Cz { .. } => "CZ",
            Gate::Iswap { .. } => "ISWAP",
            Gate::IswapDg { .. } => "ISWAPDG",
            Gate::MeasureX { .. } => "MEASURE_X",
            Gate::CondZ { .. } => "COND_Z",
        }
    }

    /// Qubits touched, in gate order (control first for CNOT).
    pub fn qubits(&self) -> Qubits {
        match *self {
            Gate::Cnot { control, target } => Qubits::Two(control, target),
            Gate::Cp { a, b, .. } | Gate::Cz { a, b } | Gate::Iswap { a, b } | Gate::IswapDg { a, b } => Qubits::Two(a, b),
            Gate::Rz { qubit, .. }
            | Gate::Rx { qubit, .. }
            | Gate::H { qubit }
            | Gate::MeasureX { qubit, .. }
            | Gate::CondZ { qubit, .. } => Qubits::One(qubit),
        }
    }

    pub fn cbit(&self) -> Option<usize> {
        match *self {
            Gate::MeasureX { cbit, .. } | Gate::CondZ { cbit, .. } => Some(cbit),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rz { angle, .. } | Gate::Rx { angle, .. } | Gate::Cp { angle, .. } => Some(angle),
            _ => None,
        }
    }

    pub fn class(&self) -> GateClass {
        match self {
            Gate::Cnot { .. } | Gate::Cp { .. } | Gate::Cz { .. } | Gate::Iswap { .. } | Gate::IswapDg { .. } => {
                GateClass::Entangling
            }
            Gate::MeasureX { .. } => GateClass::Measurement,
            _ => GateClass::SingleQubit,
        }
    }

    pub fn is_entangling(&self) -> bool {
        self.class() == GateClass::Entangling
    }

    /// The inverse gate, `None` for measurement and feedforward.
    pub fn inverse(&self) -> Option<Gate> {
        Some(match *self {
            Gate::Rz { qubit, angle } => Gate::Rz { qubit, angle: -angle },
            Gate::Rx { qubit, angle } => Gate::Rx { qubit, angle: -angle },
            Gate::Cp { a, b, angle } => Gate::Cp { a, b, angle: -angle },
            Gate::Iswap { a, b } => Gate::IswapDg { a, b },
            Gate::IswapDg { a, b } => Gate::Iswap { a, b },
            Gate::MeasureX { .. } | Gate::CondZ { .. } => return None,
            g => g,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cnot { control, target } => write!(f, "CNOT({control}->{target})"),
            Gate::Rz { qubit, angle } => write!(f, "RZ({qubit}, {angle})"),
            Gate::Rx { qubit, angle } => write!(f, "RX({qubit}, {angle})"),
            Gate::H { qubit } => write!(f, "H({qubit})"),
            Gate::Cp { a, b, angle } => write!(f, "CP({a}, {b}, {angle})"),
            Gate::Cz { a, b } => write!(f, "CZ({a}, {b})"),
            Gate::Iswap { a, b } => write!(f, "ISWAP({a}, {b})"),
            Gate::IswapDg { a, b } => write!(f, "ISWAPDG({a}, {b})"),
            Gate::MeasureX { qubit, cbit } => write!(f, "MEASURE_X({qubit}, c{cbit})"),
            Gate::CondZ { qubit, cbit } => write!(f, "COND_Z({qubit}, c{cbit})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubits {
    One(usize),
    Two(usize, usize),
}

impl IntoIterator for Qubits {
    type Item = usize;
    type IntoIter = std::iter::Flatten<std::array::IntoIter<Option<usize>, 2>>;
    fn into_iter(self) -> Self::IntoIter {
        match self {
            Qubits::One(a) => [Some(a), None].into_iter().flatten(),
            Qubits::Two(a, b) => [Some(a), Some(b)].into_iter().flatten(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_cbits: usize,
    gates: Vec<Gate>,
    written: Vec<bool>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_cbits: usize) -> Self {
        Circuit { n_qubits, n_cbits, gates: Vec::new(), written: vec![false; n_cbits] }
    }

    /// Build from a gate list, validating every gate.
    pub fn from_gates(n_qubits: usize, n_cbits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(n_qubits, n_cbits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Build without validation. Used for slices of valid circuits whose
    /// `COND_Z` gates may read cbits written outside the slice.
    pub fn from_gates_unchecked(n_qubits: usize, n_cbits: usize, gates: Vec<Gate>) -> Self {
        Circuit { n_qubits, n_cbits, gates, written: vec![true; n_cbits] }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_cbits(&self) -> usize {
        self.n_cbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let label = || gate.to_string();
        let qs = gate.qubits();
        for q in qs {
            if q >= self.n_qubits {
                return Err(CircuitError::QubitOutOfRange { gate: label(), qubit: q, n: self.n_qubits });
            }
        }
        if let Qubits::Two(a, b) = qs {
            if a == b {
                return Err(CircuitError::RepeatedQubit(label()));
            }
        }
        if gate.angle().is_some_and(|a| !a.is_finite()) {
            return Err(CircuitError::NonFiniteAngle(label()));
        }
        match gate {
            Gate::MeasureX { cbit, .. } => {
                if cbit >= self.n_cbits {
                    return Err(CircuitError::CbitOutOfRange { gate: label(), cbit, n: self.n_cbits });
                }
                if self.written[cbit] {
                    return Err(CircuitError::CbitReassigned(cbit));
                }
                self.written[cbit] = true;
            }
            Gate::CondZ { cbit, .. } => {
                if cbit >= self.n_cbits {
                    return Err(CircuitError::CbitOutOfRange { gate: label(), cbit, n: self.n_cbits });
                }
                if !self.written[cbit] {
                    return Err(CircuitError::UnwrittenCbit(cbit));
                }
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Builder-style [`Circuit::push`].
    pub fn append(mut self, gate: Gate) -> Result<Self, CircuitError> {
        self.push(gate)?;
        Ok(self)
    }

    /// Append all gates of `other`, which must act on the same qubits.
    /// Its cbits are shifted past this circuit's cbits.
    pub fn extend(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.n_qubits != self.n_qubits {
            return Err(CircuitError::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        let shift = self.n_cbits;
        self.n_cbits += other.n_cbits;
        self.written.extend(std::iter::repeat_n(false, other.n_cbits));
        for g in &other.gates {
            let g = match *g {
                Gate::MeasureX { qubit, cbit } => Gate::MeasureX { qubit, cbit: cbit + shift },
                Gate::CondZ { qubit, cbit } => Gate::CondZ { qubit, cbit: cbit + shift },
                g => g,
            };
            self.push(g)?;
        }
        Ok(())
    }

    /// Reserve `k` more classical bits and return the first new index.
    pub fn add_cbits(&mut self, k: usize) -> usize {
        let first = self.n_cbits;
        self.n_cbits += k;
        self.written.extend(std::iter::repeat_n(false, k));
        first
    }

    pub fn has_measurements(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::MeasureX { .. } | Gate::CondZ { .. }))
    }

    pub fn inverse(&self) -> Result<Circuit, CircuitError> {
        let mut out = Circuit::new(self.n_qubits, 0);
        for g in self.gates.iter().rev() {
            out.gates.push(g.inverse().ok_or(CircuitError::NotInvertible)?);
        }
        Ok(out)
    }

    /// Two-qubit gates whose pair is not an edge of `topology`.
    pub fn check_topology(&self, topology: &Topology) -> Vec<Violation> {
        self.gates
            .iter()
            .enumerate()
            .filter_map(|(index, g)| match g.qubits() {
                Qubits::Two(a, b) if !topology.has_edge(a, b) => Some(Violation { index, a, b }),
                _ => None,
            })
            .collect()
    }

    pub fn resource_report(&self) -> ResourceReport {
        resource_report(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Linear(usize),
    /// Two rails of `n` qubits; qubit `(rail, k)` has index `rail * n + k`.
    Ladder(usize),
    AllToAll(usize),
}

impl Topology {
    pub fn n_qubits(&self) -> usize {
        match *self {
            Topology::Linear(n) | Topology::AllToAll(n) => n,
            Topology::Ladder(n) => 2 * n,
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (lo, hi) = (a.min(b), a.max(b));
        if lo == hi || hi >= self.n_qubits() {
            return false;
        }
        match *self {
            Topology::AllToAll(_) => true,
            Topology::Linear(_) => hi == lo + 1,
            Topology::Ladder(n) => (hi == lo + 1 && hi % n != 0) || hi == lo + n,
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let m = self.n_qubits();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Gate counts and depths.
///
/// `cnot_depth` is the longest dependency chain counted in entangling gates;
/// `meas_depth` the same counted in measurements. `total_depth_parallel_sq`
/// is the ASAP schedule length with one gate per qubit per step, where a
/// `COND_Z` also waits for the measurement of its cbit. `sq_depth` is the
/// number of steps left over for single-qubit gates. `total_depth_serial_sq`
/// keeps entangling and measurement layers fixed and inserts the fewest
/// single-qubit-only layers between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ResourceReport {
    pub cnot_count: usize,
    pub sq_count: usize,
    pub entangling_count: usize,
    pub measurement_count: usize,
    pub cnot_depth: usize,
    pub sq_depth: usize,
    pub meas_depth: usize,
    pub total_depth_parallel_sq: usize,
    pub total_depth_serial_sq: usize,
}

/// Longest path through the dependency graph where gates satisfying `weight`
/// count 1 and all others 0. Returns the per-gate level and the maximum.
fn weighted_levels(c: &Circuit, weight: impl Fn(&Gate) -> bool) -> (Vec<usize>, usize) {
    let mut q_level = vec![0usize; c.n_qubits()];
    let mut c_level = vec![0usize; c.n_cbits()];
    let mut levels = Vec::with_capacity(c.len());
    let mut max = 0;
    for g in c.gates() {
        let mut l = g.qubits().into_iter().map(|q| q_level[q]).max().unwrap_or(0);
        if let Gate::CondZ { cbit, .. } = g {
            l = l.max(c_level[*cbit]);
        }
        if weight(g) {
            l += 1;
        }
        for q in g.qubits() {
            q_level[q] = l;
        }
        if let Gate::MeasureX { cbit, .. } = g {
            c_level[*cbit] = l;
        }
        max = max.max(l);
        levels.push(l);
    }
    (levels, max)
}

pub fn resource_report(c: &Circuit) -> ResourceReport {
    let mut r = ResourceReport::default();
    for g in c.gates() {
        match g.class() {
            GateClass::Entangling => r.entangling_count += 1,
            GateClass::SingleQubit => r.sq_count += 1,
            GateClass::Measurement => r.measurement_count += 1,
        }
        if matches!(g, Gate::Cnot { .. }) {
            r.cnot_count += 1;
        }
    }
    r.cnot_depth = weighted_levels(c, Gate::is_entangling).1;
    r.meas_depth = weighted_levels(c, |g| g.class() == GateClass::Measurement).1;
    r.total_depth_parallel_sq = weighted_levels(c, |_| true).1;
    r.sq_depth = r.total_depth_parallel_sq.saturating_sub(r.cnot_depth + r.meas_depth);
    r.total_depth_serial_sq = serial_depth(c);
    r
}

/// Structural layers plus the minimum number of inserted single-qubit layers.
///
/// Layer boundaries are numbered `0..=D`; boundary `p` sits after structural
/// layer `p`. A run of `r` single-qubit gates on one qubit between structural
/// gates at levels `a` and `b` needs `r` inserted layers at boundaries in
/// `[a, b-1]`. The fewest boundary layers covering all runs is found greedily
/// by right endpoint.
fn serial_depth(c: &Circuit) -> usize {
    let structural = |g: &Gate| g.class() != GateClass::SingleQubit;
    let (levels, d) = weighted_levels(c, structural);
    let mut meas_level = vec![0usize; c.n_cbits()];
    // (lo, hi, count)
    let mut runs: Vec<(usize, usize, usize)> = Vec::new();
    let mut lo = vec![0usize; c.n_qubits()];
    let mut count = vec![0usize; c.n_qubits()];
    for (g, &l) in c.gates().iter().zip(&levels) {
        if structural(g) {
            for q in g.qubits() {
                if count[q] > 0 {
                    runs.push((lo[q], l - 1, count[q]));
                }
                count[q] = 0;
                lo[q] = l;
            }
            if let Gate::MeasureX { cbit, .. } = g {
                meas_level[*cbit] = l;
            }
        } else {
            for q in g.qubits() {
                if let Gate::CondZ { cbit, .. } = g {
                    lo[q] = lo[q].max(meas_level[*cbit]);
                }
                count[q] += 1;
            }
        }
    }
    for q in 0..c.n_qubits() {
        if count[q] > 0 {
            runs.push((lo[q], d, count[q]));
        }
    }
    runs.sort_by_key(|&(_, hi, _)| hi);
    // multiplicity of inserted layers at each boundary
    let mut points = vec![0usize; d + 1];
    let mut total = 0;
    for (lo, hi, need) in runs {
        let have: usize = points[lo..=hi].iter().sum();
        if need > have {
            points[hi] += need - have;
            total += need - have;
        }
    }
    d + total
}

/// Reduce an angle into `(-π, π]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_and_cond_z_rule() {
        let c = Circuit::new(2, 1).append(Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(c.len(), 1);
        let err = c.clone().append(Gate::CondZ { qubit: 0, cbit: 0 }).unwrap_err();
        assert_eq!(err, CircuitError::UnwrittenCbit(0));
        let ok = c
            .append(Gate::MeasureX { qubit: 1, cbit: 0 })
            .unwrap()
            .append(Gate::CondZ { qubit: 0, cbit: 0 })
            .unwrap();
        assert_eq!(ok.len(), 3);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(Circuit::new(2, 0).append(Gate::H { qubit: 2 }).is_err());
        assert!(Circuit::new(2, 0).append(Gate::Cz { a: 1, b: 1 }).is_err());
        assert!(Circuit::new(1, 0).append(Gate::Rz { qubit: 0, angle: f64::NAN }).is_err());
    }

    #[test]
    fn inverse_negates_rotations() {
        let c = Circuit::from_gates(1, 0, [Gate::Rz { qubit: 0, angle: 0.3 }]).unwrap();
        assert_eq!(c.inverse().unwrap().gates(), &[Gate::Rz { qubit: 0, angle: -0.3 }]);
        let cx = Circuit::from_gates(2, 0, [Gate::Cnot { control: 0, target: 1 }]).unwrap();
        assert_eq!(cx.inverse().unwrap(), cx);
    }

    #[test]
    fn topology_edges() {
        let c = Circuit::from_gates(3, 0, [Gate::Cnot { control: 0, target: 2 }]).unwrap();
        assert_eq!(c.check_topology(&Topology::Linear(3)), vec![Violation { index: 0, a: 0, b: 2 }]);
        assert!(c.check_topology(&Topology::AllToAll(3)).is_empty());
        let lad = Topology::Ladder(3);
        assert_eq!(lad.edges(), vec![(0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5)]);
        assert!(!lad.has_edge(2, 3));
    }

    #[test]
    fn round_of_commuting_cnots_has_depth_two() {
        let c = Circuit::from_gates(
            5,
            0,
            [
                Gate::Cnot { control: 1, target: 2 },
                Gate::Cnot { control: 3, target: 4 },
                Gate::Cnot { control: 1, target: 0 },
                Gate::Cnot { control: 3, target: 2 },
            ],
        )
        .unwrap();
        let r = c.resource_report();
        assert_eq!(r.cnot_depth, 2);
        assert_eq!(r.cnot_count, 4);
    }

    #[test]
    fn empty_report_is_zero() {
        assert_eq!(Circuit::new(3, 0).resource_report(), ResourceReport::default());
    }

    #[test]
    fn serial_layers_pack_runs() {
        // one SQ gate before and after a CNOT on each qubit: 2 inserted layers
        let c = Circuit::from_gates(
            2,
            0,
            [
                Gate::H { qubit: 0 },
                Gate::H { qubit: 1 },
                Gate::Cnot { control: 0, target: 1 },
                Gate::Rz { qubit: 0, angle: 0.1 },
            ],
        )
        .unwrap();
        let r = c.resource_report();
        assert_eq!(r.total_depth_parallel_sq, 3);
        assert_eq!(r.total_depth_serial_sq, 3);
        assert_eq!(r.sq_depth, 2);
    }

    #[test]
    fn cond_z_waits_for_measurement() {
        let c = Circuit::from_gates(
            2,
            1,
            [
                Gate::H { qubit: 1 },
                Gate::H { qubit: 1 },
                Gate::MeasureX { qubit: 1, cbit: 0 },
                Gate::CondZ { qubit: 0, cbit: 0 },
            ],
        )
        .unwrap();
        let r = c.resource_report();
        assert_eq!(r.total_depth_parallel_sq, 4);
        assert_eq!(r.meas_depth, 1);
    }

    #[test]
    fn normalize_range() {
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_angle(-PI) - PI).abs() < 1e-12);
        assert!(normalize_angle(2.0 * PI).abs() < 1e-12);
    }
}
