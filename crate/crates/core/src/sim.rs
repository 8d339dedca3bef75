//! Dense statevector simulation.
//!
//! Basis index bit `q` is the value of qubit `q` (qubit 0 least significant).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::labels::LabelSet;

pub const MAX_RUN_QUBITS: usize = 14;
pub const MAX_UNITARY_QUBITS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{n} qubits exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("state has {got} qubits, circuit needs {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("fixed outcome for cbit {0} has zero probability")]
    ZeroProbability(usize),
    #[error("fixed outcomes cover {got} cbits, circuit has {want}")]
    OutcomeCount { got: usize, want: usize },
    #[error("unitary requested for a circuit with measurements")]
    HasMeasurement,
    #[error("frame labels do not form an invertible {0}x{0} matrix")]
    BadFrame(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut s = StateVector { n, amps: vec![Complex64::new(0.0, 0.0); 1 << n] };
        s.amps[index] = Complex64::new(1.0, 0.0);
        s
    }

    /// `|+⟩^⊗n`.
    pub fn plus(n: usize) -> Self {
        let a = Complex64::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0);
        StateVector { n, amps: vec![a; 1 << n] }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two());
        StateVector { n: amps.len().trailing_zeros() as usize, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// Apply a unitary gate. Measurement and feedforward are handled by [`run`].
    pub fn apply(&mut self, g: &Gate) {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match *g {
            Gate::Cnot { control, target } => {
                let (cm, tm) = (1usize << control, 1usize << target);
                for x in 0..self.amps.len() {
                    if x & cm != 0 && x & tm == 0 {
                        self.amps.swap(x, x | tm);
                    }
                }
            }
            Gate::Rz { qubit, angle } => {
                let (p0, p1) = (Complex64::from_polar(1.0, angle), Complex64::from_polar(1.0, -angle));
                let m = 1usize << qubit;
                for (x, a) in self.amps.iter_mut().enumerate() {
                    *a *= if x & m == 0 { p0 } else { p1 };
                }
            }
            Gate::Rx { qubit, angle } => {
                let (c, s) = (angle.cos(), angle.sin());
                self.pairs(qubit, |a0, a1| (a0 * c + i * s * a1, i * s * a0 + a1 * c));
            }
            Gate::H { qubit } => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                self.pairs(qubit, |a0, a1| ((a0 + a1) * r, (a0 - a1) * r));
            }
            Gate::Cp { a, b, angle } => self.phase_both(a, b, Complex64::from_polar(1.0, angle)),
            Gate::Cz { a, b } => self.phase_both(a, b, -one),
            Gate::Iswap { a, b } => self.swap_phase(a, b, i),
            Gate::IswapDg { a, b } => self.swap_phase(a, b, -i),
            Gate::MeasureX { .. } | Gate::CondZ { .. } => panic!("{} is not a unitary gate", g.name()),
        }
    }

    fn pairs(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let m = 1usize << q;
        for x in 0..self.amps.len() {
            if x & m == 0 {
                let (b0, b1) = f(self.amps[x], self.amps[x | m]);
                self.amps[x] = b0;
                self.amps[x | m] = b1;
            }
        }
    }

    fn phase_both(&mut self, a: usize, b: usize, p: Complex64) {
        let m = (1usize << a) | (1usize << b);
        for (x, amp) in self.amps.iter_mut().enumerate() {
            if x & m == m {
                *amp *= p;
            }
        }
    }

    fn swap_phase(&mut self, a: usize, b: usize, p: Complex64) {
        let (ma, mb) = (1usize << a, 1usize << b);
        for x in 0..self.amps.len() {
            if x & ma != 0 && x & mb == 0 {
                let y = x ^ ma ^ mb;
                let (u, v) = (self.amps[x], self.amps[y]);
                self.amps[x] = p * v;
                self.amps[y] = p * u;
            }
        }
    }

    fn z(&mut self, q: usize) {
        let m = 1usize << q;
        for (x, a) in self.amps.iter_mut().enumerate() {
            if x & m != 0 {
                *a = -*a;
            }
        }
    }

    /// Project qubit `q` onto the X eigenstate for `outcome` (false = +1).
    /// Returns the probability; the state is renormalized when it is nonzero.
    fn project_x(&mut self, q: usize, outcome: bool) -> f64 {
        let s = if outcome { -1.0 } else { 1.0 };
        self.pairs(q, |a0, a1| {
            let v = (a0 + a1 * s) * 0.5;
            (v, v * s)
        });
        let p = self.norm().powi(2);
        if p > 0.0 {
            self.scale(1.0 / p.sqrt());
        }
        p
    }

    /// Reorder amplitudes from the physical frame with Z labels `labels`
    /// to the logical basis: logical `x` reads physical `y` with `y_a = ⟨labels[a], x⟩`.
    pub fn frame_decode(&self, labels: &[LabelSet]) -> Result<StateVector, SimError> {
        let n = self.n;
        if labels.len() != n {
            return Err(SimError::BadFrame(n));
        }
        let rows: Vec<u64> = labels.iter().map(|l| l.0).collect();
        if crate::gf2::rank(&rows) != n || rows.iter().any(|r| r >> n != 0) {
            return Err(SimError::BadFrame(n));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (x, slot) in out.iter_mut().enumerate() {
            let y = rows
                .iter()
                .enumerate()
                .fold(0usize, |acc, (a, r)| acc | ((((*r as usize) & x).count_ones() as usize & 1) << a));
            *slot = self.amps[y];
        }
        Ok(StateVector { n, amps: out })
    }

    /// State of the qubits in `keep` assuming the rest factor out as a product.
    ///
    /// Takes the slice at the basis pattern of the largest amplitude on the
    /// other qubits and renormalizes it.
    pub fn factor_out(&self, keep: &[usize]) -> StateVector {
        let (imax, _) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("nonempty state");
        let keep_mask: usize = keep.iter().map(|&q| 1usize << q).sum();
        let rest = imax & !keep_mask;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << keep.len()];
        for (x, slot) in amps.iter_mut().enumerate() {
            let y = keep.iter().enumerate().fold(rest, |acc, (k, &q)| acc | (((x >> k) & 1) << q));
            *slot = self.amps[y];
        }
        let mut s = StateVector { n: keep.len(), amps };
        let nrm = s.norm();
        s.scale(1.0 / nrm);
        s
    }
}

/// How measurement outcomes are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum OutcomePolicy {
    /// One outcome per cbit, `true` meaning the −1 eigenvalue.
    Fixed(Vec<bool>),
    EnumerateAll,
    Random(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcomes: Vec<bool>,
    pub state: StateVector,
    pub probability: f64,
}

const ZERO_BRANCH: f64 = 1e-14;

pub fn run(circuit: &Circuit, initial: &StateVector, policy: &OutcomePolicy) -> Result<Vec<Branch>, SimError> {
    if circuit.n_qubits() > MAX_RUN_QUBITS {
        return Err(SimError::TooLarge { n: circuit.n_qubits(), max: MAX_RUN_QUBITS });
    }
    if initial.n != circuit.n_qubits() {
        return Err(SimError::SizeMismatch { got: initial.n, want: circuit.n_qubits() });
    }
    let start = Branch { outcomes: vec![false; circuit.n_cbits()], state: initial.clone(), probability: 1.0 };
    match policy {
        OutcomePolicy::Fixed(bits) => {
            if bits.len() != circuit.n_cbits() {
                return Err(SimError::OutcomeCount { got: bits.len(), want: circuit.n_cbits() });
            }
            let mut b = start;
            b.outcomes = bits.clone();
            run_fixed(circuit, b).map(|b| vec![b])
        }
        OutcomePolicy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            run_random(circuit, start, &mut rng).map(|b| vec![b])
        }
        OutcomePolicy::EnumerateAll => {
            let mut out = Vec::new();
            enumerate(circuit, 0, start, &mut out);
            Ok(out)
        }
    }
}

fn run_fixed(circuit: &Circuit, mut b: Branch) -> Result<Branch, SimError> {
    for g in circuit.gates() {
        match *g {
            Gate::MeasureX { qubit, cbit } => {
                let p = b.state.project_x(qubit, b.outcomes[cbit]);
                if p < ZERO_BRANCH {
                    return Err(SimError::ZeroProbability(cbit));
                }
                b.probability *= p;
            }
            Gate::CondZ { qubit, cbit } => {
                if b.outcomes[cbit] {
                    b.state.z(qubit);
                }
            }
            ref g => b.state.apply(g),
        }
    }
    Ok(b)
}

fn run_random(circuit: &Circuit, mut b: Branch, rng: &mut ChaCha8Rng) -> Result<Branch, SimError> {
    for g in circuit.gates() {
        match *g {
            Gate::MeasureX { qubit, cbit } => {
                let mut trial = b.state.clone();
                let p_plus = trial.project_x(qubit, false);
                let o = rng.gen::<f64>() >= p_plus;
                let p = if o { b.state.project_x(qubit, true) } else {
                    b.state = trial;
                    p_plus
                };
                if p < ZERO_BRANCH {
                    return Err(SimError::ZeroProbability(cbit));
                }
                b.outcomes[cbit] = o;
                b.probability *= p;
            }
            Gate::CondZ { qubit, cbit } => {
                if b.outcomes[cbit] {
                    b.state.z(qubit);
                }
            }
            ref g => b.state.apply(g),
        }
    }
    Ok(b)
}

fn enumerate(circuit: &Circuit, from: usize, mut b: Branch, out: &mut Vec<Branch>) {
    let gates = circuit.gates();
    let mut k = from;
    while k < gates.len() {
        match gates[k] {
            Gate::MeasureX { qubit, cbit } => {
                for o in [false, true] {
                    let mut nb = b.clone();
                    let p = nb.state.project_x(qubit, o);
                    if p < ZERO_BRANCH {
                        continue;
                    }
                    nb.outcomes[cbit] = o;
                    nb.probability *= p;
                    enumerate(circuit, k + 1, nb, out);
                }
                return;
            }
            Gate::CondZ { qubit, cbit } => {
                if b.outcomes[cbit] {
                    b.state.z(qubit);
                }
            }
            ref g => b.state.apply(g),
        }
        k += 1;
    }
    out.push(b);
}

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Matrix { dim: d, data }
    }

    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        Matrix { dim: d, data }
    }

    /// Permute qubit order: output qubit `perm[q]` receives input qubit `q`.
    pub fn permute_rows(&self, n: usize, perm: &[usize]) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for x in 0..d {
            let y = (0..n).fold(0usize, |acc, q| acc | (((x >> q) & 1) << perm[q]));
            data[y * d..(y + 1) * d].copy_from_slice(&self.data[x * d..(x + 1) * d]);
        }
        Matrix { dim: d, data }
    }
}

pub fn unitary_of(circuit: &Circuit) -> Result<Matrix, SimError> {
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(SimError::TooLarge { n, max: MAX_UNITARY_QUBITS });
    }
    if circuit.has_measurements() {
        return Err(SimError::HasMeasurement);
    }
    let d = 1usize << n;
    let mut data = vec![Complex64::new(0.0, 0.0); d * d];
    for col in 0..d {
        let mut s = StateVector::basis(n, col);
        for g in circuit.gates() {
            s.apply(g);
        }
        for (row, a) in s.amps.iter().enumerate() {
            data[row * d + col] = *a;
        }
    }
    Ok(Matrix { dim: d, data })
}

/// Outcome of a global-phase comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub phase: f64,
    pub max_deviation: f64,
}

/// Whether `a = e^{iφ} b` entrywise within `tol`; `φ` comes from the largest entry of `b`.
pub fn equiv_global_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> Equivalence {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    let k = (0..b.len()).max_by(|&i, &j| b[i].norm_sqr().total_cmp(&b[j].norm_sqr()));
    let phase = match k {
        Some(k) if b[k].norm() > 0.0 && a[k].norm() > 0.0 => (a[k] / b[k]).arg(),
        _ => 0.0,
    };
    let p = Complex64::from_polar(1.0, phase);
    let max_deviation = a.iter().zip(b).map(|(x, y)| (x - p * y).norm()).fold(0.0, f64::max);
    Equivalence { equivalent: max_deviation <= tol, phase, max_deviation }
}

pub fn matrices_equiv(a: &Matrix, b: &Matrix, tol: f64) -> Equivalence {
    equiv_global_phase(&a.data, &b.data, tol)
}

pub fn states_equiv(a: &StateVector, b: &StateVector, tol: f64) -> Equivalence {
    equiv_global_phase(&a.amps, &b.amps, tol)
}

/// Run a measurement-free circuit on a state.
pub fn evolve(circuit: &Circuit, state: &StateVector) -> StateVector {
    let mut s = state.clone();
    for g in circuit.gates() {
        s.apply(g);
    }
    s
}
