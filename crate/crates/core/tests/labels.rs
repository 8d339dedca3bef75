use std::collections::BTreeSet;

use num_complex::Complex64;
use paritylane::circuit::{Circuit, Gate};
use paritylane::labels::{track_circuit, Granularity, LabelSet, Tracker};
use paritylane::qaoa::ladder_copy;
use paritylane::sim::{evolve, unitary_of, Matrix, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cnots(n: usize, len: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut c = Circuit::new(n, 0);
    for _ in 0..len {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        c.push(Gate::Cnot { control: a, target: b }).unwrap();
    }
    c
}

fn z_string(n: usize, s: u64) -> Matrix {
    let d = 1 << n;
    let mut m = Matrix::identity(d);
    for x in 0..d {
        if ((x as u64) & s).count_ones() % 2 == 1 {
            m.data[x * d + x] = Complex64::new(-1.0, 0.0);
        }
    }
    m
}

fn x_string(n: usize, s: u64) -> Matrix {
    let d = 1 << n;
    let mut m = Matrix { dim: d, data: vec![Complex64::new(0.0, 0.0); d * d] };
    for x in 0..d {
        m.data[(x ^ s as usize) * d + x] = Complex64::new(1.0, 0.0);
    }
    m
}

fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn mask(qubits: &[usize]) -> u64 {
    qubits.iter().map(|&q| 1u64 << q).sum()
}

#[test]
fn conjugation_oracle_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let n = 2 + k % 4;
        let len = rng.gen_range(0..=3 * n);
        let c = random_cnots(n, len, &mut rng);
        let t = track_circuit(&c, Granularity::Gate).unwrap();
        let u = unitary_of(&c).unwrap();
        let ud = u.adjoint();
        for a in 0..n {
            let lhs = ud.mul(&z_string(n, 1 << a)).mul(&u);
            let want = z_string(n, t.logical_z_support(a).0);
            assert!(max_diff(&lhs, &want) < 1e-12, "circuit {k} qubit {a}");
        }
        for j in 0..n {
            let lhs = ud.mul(&x_string(n, mask(&t.logical_line(j)))).mul(&u);
            assert!(max_diff(&lhs, &x_string(n, 1 << j)) < 1e-12, "circuit {k} line {j}");
        }
        let q = t.x_basis_labels().unwrap();
        for a in 0..n {
            let lhs = ud.mul(&x_string(n, 1 << a)).mul(&u);
            assert!(max_diff(&lhs, &x_string(n, q[a].0)) < 1e-12, "circuit {k} Q label {a}");
        }
    }
}

#[test]
fn rank_never_drops() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=12 {
        let c = random_cnots(n, 40, &mut rng);
        let mut t = Tracker::new(n).unwrap();
        for g in c.gates() {
            if let Gate::Cnot { control, target } = *g {
                t.apply_cnot(control, target).unwrap();
                assert_eq!(t.rank(), n);
            }
        }
    }
}

#[test]
fn q_labels_are_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=8 {
        let t = track_circuit(&random_cnots(n, 20, &mut rng), Granularity::Layer).unwrap();
        let q = t.x_basis_labels().unwrap();
        assert_eq!(paritylane::labels::x_basis_labels(&q, n).unwrap(), t.labels());
    }
}

#[test]
fn decode_recovers_every_basis_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        for _ in 0..10 {
            let c = if n == 1 { Circuit::new(1, 0) } else { random_cnots(n, 6, &mut rng) };
            let t = track_circuit(&c, Granularity::Layer).unwrap();
            for b in 0..1usize << n {
                let out = evolve(&c, &StateVector::basis(n, b));
                let y = out.amplitudes().iter().position(|a| a.norm() > 0.5).unwrap();
                let bits: Vec<bool> = (0..n).map(|q| (y >> q) & 1 == 1).collect();
                let x = t.decode_bitstring(&bits).unwrap();
                let want: Vec<bool> = (0..n).map(|q| (b >> q) & 1 == 1).collect();
                assert_eq!(x, want);
            }
        }
    }
}

/// Basis states of the encoded subspace versus the common +1 eigenspace of the stabilizers.
fn check_stabilizers(c: &Circuit, n_logical: usize) {
    let n = c.n_qubits();
    let mut t = Tracker::with_empties(n_logical, n).unwrap();
    paritylane::labels::track_into(&mut t, c, Granularity::Layer).unwrap();
    let stabs = t.stabilizer_supports();
    assert_eq!(stabs.len(), n - n_logical);
    let encoded: BTreeSet<usize> = (0..1usize << n_logical)
        .map(|x| {
            let out = evolve(c, &StateVector::basis(n, x));
            out.amplitudes().iter().position(|a| a.norm() > 0.5).unwrap()
        })
        .collect();
    let plus: BTreeSet<usize> = (0..1usize << n)
        .filter(|&y| stabs.iter().all(|s| ((y as u64) & mask(&s.support)).count_ones().is_multiple_of(2)))
        .collect();
    assert_eq!(encoded, plus);
}

#[test]
fn three_body_encoding_stabilizers() {
    let cx = |c, t| Gate::Cnot { control: c, target: t };
    let c = Circuit::from_gates(6, 0, [cx(0, 3), cx(1, 3), cx(1, 4), cx(2, 4), cx(0, 5), cx(2, 5)]).unwrap();
    let mut t = Tracker::with_empties(3, 6).unwrap();
    paritylane::labels::track_into(&mut t, &c, Granularity::Layer).unwrap();
    let mut supports: Vec<Vec<usize>> = t.stabilizer_supports().into_iter().map(|s| s.support).collect();
    supports.sort();
    assert_eq!(supports, vec![vec![0, 1, 3], vec![0, 2, 5], vec![1, 2, 4]]);
    check_stabilizers(&c, 3);
    // one more round turns a triangle into a four-body plaquette
    let c4 = Circuit::from_gates(6, 0, c.gates().iter().copied().chain([cx(3, 4)])).unwrap();
    let mut t4 = Tracker::with_empties(3, 6).unwrap();
    paritylane::labels::track_into(&mut t4, &c4, Granularity::Layer).unwrap();
    assert!(t4.stabilizer_supports().iter().any(|s| s.support.len() == 4));
    check_stabilizers(&c4, 3);
}

#[test]
fn random_encodings_stay_in_code_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let n = rng.gen_range(3..=6);
        let k = rng.gen_range(1..n);
        check_stabilizers(&random_cnots(n, 10, &mut rng), k);
    }
}

#[test]
fn rung_copy_gives_rung_stabilizers() {
    let n = 6;
    let c = Circuit::from_gates(2 * n, 0, ladder_copy(n)).unwrap();
    assert_eq!(c.resource_report().cnot_depth, 1);
    let mut t = Tracker::with_empties(n, 2 * n).unwrap();
    paritylane::labels::track_into(&mut t, &c, Granularity::Layer).unwrap();
    for k in 0..n {
        assert_eq!(t.labels()[n + k], t.labels()[k]);
    }
    let stabs = t.stabilizer_supports();
    assert_eq!(stabs.len(), n);
    for s in stabs {
        assert_eq!(s.support, vec![s.seed - n, s.seed]);
    }
}

#[test]
fn four_qubit_history() {
    let cx = |c, t| Gate::Cnot { control: c, target: t };
    let c = Circuit::from_gates(3, 0, [cx(0, 1), cx(1, 2), cx(2, 1), cx(0, 2)]).unwrap();
    let t = track_circuit(&c, Granularity::Gate).unwrap();
    let h = t.history();
    assert_eq!(h[2].labels, vec![LabelSet::single(0), LabelSet::pair(0, 1), LabelSet::from_indices([0, 1, 2])]);
    assert_eq!(h[4].labels[2], LabelSet::pair(1, 2));
    assert_eq!(h[4].labels[1], LabelSet::single(2));
    assert_eq!(track_circuit(&Circuit::new(3, 0), Granularity::Layer).unwrap().history().len(), 1);
}

#[test]
fn rejects_other_entangling_gates() {
    let c = Circuit::from_gates(2, 0, [Gate::Cz { a: 0, b: 1 }]).unwrap();
    assert!(track_circuit(&c, Granularity::Layer).is_err());
}
