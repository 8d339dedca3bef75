//! Re-simulation against the reference constructions.

use num_complex::Complex64;
use paritylane::circuit::Circuit;
use paritylane::qaoa::{reference_state, synth_qaoa, IsingProblem, QaoaParams, QaoaSynthesis, QaoaTopology};
use paritylane::qft::{reference_qft, synth_qft};
use paritylane::rebase::{rebase, GateSetTarget};
use paritylane::sim::{evolve, matrices_equiv, run, states_equiv, unitary_of, OutcomePolicy, StateVector, MAX_RUN_QUBITS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Largest n checked through full unitaries; beyond it random states are used.
const UNITARY_MAX: usize = 8;
const STATE_MAX: usize = 20;
const RANDOM_STATES: usize = 3;
const LADDER_BRANCHES: u64 = 50;

pub fn finish(deviation: f64, tol: f64) -> Result<String, CliError> {
    if deviation <= tol {
        Ok(format!("max deviation {deviation:.3e}\npass\n"))
    } else {
        Err(CliError::Failed(format!("max deviation {deviation:.3e} exceeds tolerance {tol:.1e}")))
    }
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
}

fn reversed(s: &StateVector) -> StateVector {
    let n = s.n_qubits();
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (i, &a) in s.amplitudes().iter().enumerate() {
        let r = if n == 0 { 0 } else { i.reverse_bits() >> (usize::BITS as usize - n) };
        out[r] = a;
    }
    StateVector::from_amplitudes(out)
}

fn check_size(n: usize, max: usize) -> Result<(), CliError> {
    if n > max {
        return Err(CliError::Usage(format!("verification supports n <= {max}, got {n}")));
    }
    Ok(())
}

/// Worst deviation of the chain QFT from the reversed reference.
pub fn qft(n: usize, seed: u64) -> Result<f64, CliError> {
    let c = synth_qft(n)?;
    check_size(n, STATE_MAX)?;
    let reference = reference_qft(n);
    if n <= UNITARY_MAX {
        let perm: Vec<usize> = (0..n).rev().collect();
        let want = unitary_of(&reference)?.permute_rows(n, &perm);
        return Ok(matrices_equiv(&unitary_of(&c)?, &want, 0.0).max_deviation);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_STATES {
        let psi = random_state(n, &mut rng);
        let want = reversed(&evolve(&reference, &psi));
        worst = worst.max(states_equiv(&evolve(&c, &psi), &want, 0.0).max_deviation);
    }
    Ok(worst)
}

/// Worst deviation of one synthesized instance from the reference QAOA state.
pub fn qaoa_instance(problem: &IsingProblem, params: &QaoaParams, s: &QaoaSynthesis) -> Result<f64, CliError> {
    let nq = s.circuit.n_qubits();
    check_size(nq, if s.circuit.has_measurements() { MAX_RUN_QUBITS } else { STATE_MAX })?;
    let want = reference_state(problem, params)?;
    let zero = StateVector::zero(nq);
    if !s.circuit.has_measurements() {
        return Ok(states_equiv(&s.decode_state(&evolve(&s.circuit, &zero)), &want, 0.0).max_deviation);
    }
    let branches = if s.data_qubits.len() <= 4 {
        run(&s.circuit, &zero, &OutcomePolicy::EnumerateAll)?
    } else {
        let mut all = Vec::new();
        for seed in 0..LADDER_BRANCHES {
            all.extend(run(&s.circuit, &zero, &OutcomePolicy::Random(seed))?);
        }
        all
    };
    Ok(branches.iter().map(|b| states_equiv(&s.decode_state(&b.state), &want, 0.0).max_deviation).fold(0.0, f64::max))
}

pub fn qaoa(n: usize, p: usize, seed: u64, topology: QaoaTopology) -> Result<f64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = IsingProblem::random(n, &mut rng);
    let params = QaoaParams::random(p, &mut rng);
    let s = synth_qaoa(&problem, &params, topology)?;
    qaoa_instance(&problem, &params, &s)
}

fn rebase_deviation(c: &Circuit, rng: &mut ChaCha8Rng) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for t in [GateSetTarget::CzH, GateSetTarget::CpY, GateSetTarget::IswapPairing] {
        let r = rebase(c, t)?;
        if c.has_measurements() {
            for seed in 0..8 {
                let zero = StateVector::zero(c.n_qubits());
                let a = run(c, &zero, &OutcomePolicy::Random(seed))?;
                let b = run(&r, &zero, &OutcomePolicy::Random(seed))?;
                for (x, y) in a.iter().zip(&b) {
                    if x.outcomes != y.outcomes {
                        return Ok(f64::INFINITY);
                    }
                    worst = worst.max(states_equiv(&x.state, &y.state, 0.0).max_deviation);
                }
            }
        } else {
            let psi = random_state(c.n_qubits(), rng);
            worst = worst.max(states_equiv(&evolve(&r, &psi), &evolve(c, &psi), 0.0).max_deviation);
        }
    }
    Ok(worst)
}

/// Rebased QFT and QAOA circuits against their CNOT originals.
pub fn rebase_all(n: usize, p: usize, seed: u64) -> Result<f64, CliError> {
    check_size(n, STATE_MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = IsingProblem::random(n, &mut rng);
    let params = QaoaParams::random(p, &mut rng);
    let mut circuits = vec![synth_qft(n)?, synth_qaoa(&problem, &params, QaoaTopology::Linear)?.circuit];
    if 2 * n <= MAX_RUN_QUBITS {
        circuits.push(synth_qaoa(&problem, &params, QaoaTopology::Ladder)?.circuit);
    }
    let mut worst = 0.0f64;
    for c in &circuits {
        worst = worst.max(rebase_deviation(c, &mut rng)?);
    }
    Ok(worst)
}
