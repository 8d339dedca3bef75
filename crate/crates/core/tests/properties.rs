use num_complex::Complex64;
use paritylane::circuit::{Circuit, CircuitError, Gate, Topology};
use paritylane::gf2;
use paritylane::labels::{LabelSet, Tracker};
use paritylane::qasm::{parse_qasm, to_qasm};
use paritylane::sim::{equiv_global_phase, matrices_equiv, run, unitary_of, Matrix, OutcomePolicy, StateVector};
use proptest::prelude::*;

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    (0..8u8, 0..n, 1..n, -4.0..4.0f64).prop_map(move |(kind, a, off, angle)| {
        let b = (a + off) % n;
        match kind {
            0 | 1 => Gate::Cnot { control: a, target: b },
            2 => Gate::Rz { qubit: a, angle },
            3 => Gate::Rx { qubit: a, angle },
            4 => Gate::H { qubit: a },
            5 => Gate::Cp { a, b, angle },
            6 => Gate::Cz { a, b },
            _ => Gate::Iswap { a, b },
        }
    })
}

fn circuit(max_n: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_n).prop_flat_map(|n| prop::collection::vec(gate(n), 0..24).prop_map(move |g| Circuit::from_gates(n, 0, g).unwrap()))
}

fn cnot_circuit(max_n: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 1..n), 0..30)
            .prop_map(move |v| Circuit::from_gates(n, 0, v.into_iter().map(|(a, o)| Gate::Cnot { control: a, target: (a + o) % n })).unwrap())
    })
}

fn id_dev(m: &Matrix) -> f64 {
    matrices_equiv(m, &Matrix::identity(m.dim), 0.0).max_deviation
}

proptest! {
    #[test]
    fn inverse_undoes_circuit(c in circuit(4)) {
        let inv = c.inverse().unwrap();
        let u = unitary_of(&inv).unwrap().mul(&unitary_of(&c).unwrap());
        prop_assert!(id_dev(&u) < 1e-10);
        prop_assert_eq!(inv.inverse().unwrap(), c);
    }

    #[test]
    fn composition_multiplies(c1 in circuit(4), extra in prop::collection::vec(gate(4), 0..10)) {
        let n = c1.n_qubits();
        let g2: Vec<Gate> = extra.into_iter().filter(|g| g.qubits().into_iter().all(|q| q < n)).collect();
        let c2 = Circuit::from_gates(n, 0, g2).unwrap();
        let mut both = c1.clone();
        both.extend(&c2).unwrap();
        let lhs = unitary_of(&both).unwrap();
        let rhs = unitary_of(&c2).unwrap().mul(&unitary_of(&c1).unwrap());
        let dev = lhs.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-10);
    }

    #[test]
    fn unitarity_and_norm(c in circuit(4)) {
        let u = unitary_of(&c).unwrap();
        prop_assert!(id_dev(&u.adjoint().mul(&u)) < 1e-10);
        let mut s = StateVector::plus(c.n_qubits());
        for g in c.gates() {
            s.apply(g);
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn depth_orderings(c in circuit(6)) {
        let r = c.resource_report();
        prop_assert!(r.cnot_depth <= r.total_depth_parallel_sq);
        prop_assert!(r.total_depth_parallel_sq <= r.total_depth_serial_sq);
        prop_assert!(c.check_topology(&Topology::AllToAll(c.n_qubits())).is_empty());
    }

    #[test]
    fn qasm_roundtrip(c in circuit(6)) {
        prop_assert_eq!(parse_qasm(&to_qasm(&c)).unwrap(), c);
    }

    #[test]
    fn rank_invariant_under_cnots(c in cnot_circuit(10)) {
        let mut t = Tracker::new(c.n_qubits()).unwrap();
        for g in c.gates() {
            if let Gate::Cnot { control, target } = *g {
                t.apply_cnot(control, target).unwrap();
            }
        }
        prop_assert_eq!(t.rank(), c.n_qubits());
        let q = t.x_basis_labels().unwrap();
        prop_assert_eq!(paritylane::labels::x_basis_labels(&q, c.n_qubits()).unwrap(), t.labels().to_vec());
    }

    #[test]
    fn express_and_solve(rows in prop::collection::vec(any::<u64>().prop_map(|x| x & 0xff), 1..10), pick in any::<u64>()) {
        let combo = pick & ((1u64 << rows.len()) - 1);
        let target = (0..rows.len()).filter(|i| (combo >> i) & 1 == 1).fold(0, |acc, i| acc ^ rows[i]);
        let c = gf2::express(&rows, target).unwrap();
        let back = (0..rows.len()).filter(|i| (c >> i) & 1 == 1).fold(0, |acc, i| acc ^ rows[i]);
        prop_assert_eq!(back, target);
        // rows plus unit rows as equations over 8 unknowns with a known solution
        let x = pick >> 56;
        let eqs: Vec<u64> = rows.iter().copied().chain((0..8).map(|i| 1u64 << i)).collect();
        let rhs: Vec<bool> = eqs.iter().map(|r| (r & x).count_ones() % 2 == 1).collect();
        let sol = gf2::solve(&eqs, 8, &rhs).unwrap();
        prop_assert_eq!(sol, x);
        for (r, &b) in eqs.iter().zip(&rhs) {
            prop_assert_eq!((r & sol).count_ones() % 2 == 1, b);
        }
    }

    #[test]
    fn enumerated_probabilities_sum_to_one(c in circuit(3), which in prop::collection::vec(0..3usize, 1..4)) {
        let n = c.n_qubits();
        let mut m = c.clone();
        let base = m.add_cbits(which.len());
        for (k, &q) in which.iter().enumerate() {
            m.push(Gate::MeasureX { qubit: q % n, cbit: base + k }).unwrap();
            m.push(Gate::CondZ { qubit: (q + 1) % n, cbit: base + k }).unwrap();
        }
        let branches = run(&m, &StateVector::zero(n), &OutcomePolicy::EnumerateAll).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn labelset_json_roundtrip(bits in any::<u64>()) {
        let l = LabelSet(bits);
        let s = serde_json::to_string(&l).unwrap();
        prop_assert_eq!(serde_json::from_str::<LabelSet>(&s).unwrap(), l);
    }
}

#[test]
fn construction_rules() {
    let mut c = Circuit::new(2, 0);
    c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
    assert_eq!(c.len(), 1);
    let mut m = Circuit::new(1, 1);
    assert!(matches!(m.push(Gate::CondZ { qubit: 0, cbit: 0 }), Err(CircuitError::UnwrittenCbit(0))));
    m.push(Gate::MeasureX { qubit: 0, cbit: 0 }).unwrap();
    assert!(m.push(Gate::MeasureX { qubit: 0, cbit: 0 }).is_err());
    m.push(Gate::CondZ { qubit: 0, cbit: 0 }).unwrap();
    assert!(Circuit::new(2, 0).push(Gate::Rz { qubit: 0, angle: f64::NAN }).is_err());
    assert!(Circuit::new(2, 0).push(Gate::Cz { a: 1, b: 1 }).is_err());
}

#[test]
fn inverses_of_single_gates() {
    let cx = Circuit::from_gates(2, 0, [Gate::Cnot { control: 0, target: 1 }]).unwrap();
    assert_eq!(cx.inverse().unwrap(), cx);
    let rz = Circuit::from_gates(1, 0, [Gate::Rz { qubit: 0, angle: 0.3 }]).unwrap();
    assert_eq!(rz.inverse().unwrap().gates(), &[Gate::Rz { qubit: 0, angle: -0.3 }]);
}

#[test]
fn topology_violation() {
    let c = Circuit::from_gates(3, 0, [Gate::Cnot { control: 0, target: 2 }]).unwrap();
    assert_eq!(c.check_topology(&Topology::Linear(3)).len(), 1);
    assert!(c.check_topology(&Topology::AllToAll(3)).is_empty());
}

#[test]
fn little_endian_matrices() {
    let one = Complex64::new(1.0, 0.0);
    let u = unitary_of(&Circuit::from_gates(2, 0, [Gate::Cnot { control: 0, target: 1 }]).unwrap()).unwrap();
    // control is bit 0: |01> (index 1) goes to |11> (index 3)
    for (r, c) in [(0, 0), (3, 1), (2, 2), (1, 3)] {
        assert_eq!(u.get(r, c), one);
    }
    let theta = 0.7;
    let p = unitary_of(&Circuit::from_gates(2, 0, [Gate::Cp { a: 0, b: 1, angle: theta }]).unwrap()).unwrap();
    for k in 0..3 {
        assert_eq!(p.get(k, k), one);
    }
    assert!((p.get(3, 3) - Complex64::from_polar(1.0, theta)).norm() < 1e-15);
}

#[test]
fn global_phase_detection() {
    let v = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let e = equiv_global_phase(&v, &v, 1e-12);
    assert!(e.equivalent && e.phase.abs() < 1e-15);
    let iv: Vec<Complex64> = v.iter().map(|x| x * Complex64::new(0.0, 1.0)).collect();
    let e = equiv_global_phase(&iv, &v, 1e-12);
    assert!(e.equivalent && (e.phase - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}
