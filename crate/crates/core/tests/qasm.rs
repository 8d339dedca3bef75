use std::f64::consts::PI;

use num_complex::Complex64;
use paritylane::circuit::{Circuit, Gate};
use paritylane::qaoa::{synth_qaoa, IsingProblem, QaoaParams, QaoaTopology};
use paritylane::qasm::{parse_qasm, parse_qasm_bytes, to_qasm};
use paritylane::qft::synth_qft;
use paritylane::rebase::{rebase, GateSetTarget};
use paritylane::sim::{matrices_equiv, unitary_of, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut out = Vec::new();
    for n in 2..=5 {
        let problem = IsingProblem::random(n, &mut rng);
        let params = QaoaParams::random(2, &mut rng);
        out.push(synth_qft(n).unwrap());
        out.push(synth_qaoa(&problem, &params, QaoaTopology::Linear).unwrap().circuit);
        out.push(synth_qaoa(&problem, &params, QaoaTopology::Ladder).unwrap().circuit);
        for t in [GateSetTarget::CzH, GateSetTarget::CpY, GateSetTarget::IswapPairing] {
            out.push(rebase(&synth_qft(n).unwrap(), t).unwrap());
        }
    }
    out
}

#[test]
fn roundtrip_preserves_gate_list() {
    for c in corpus() {
        let text = to_qasm(&c);
        let back = parse_qasm(&text).unwrap();
        assert_eq!(back, c, "{text}");
        assert_eq!(to_qasm(&back), text);
    }
}

#[test]
fn simple_emission() {
    let c = Circuit::from_gates(1, 0, [Gate::H { qubit: 0 }]).unwrap();
    assert_eq!(to_qasm(&c), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nh q[0];\n");
    let r = Circuit::from_gates(1, 0, [Gate::Rz { qubit: 0, angle: 0.25 }]).unwrap();
    assert!(to_qasm(&r).ends_with("rz(-0.5) q[0];\n"));
}

// Standard qelib1 semantics, written independently of the library simulator.
fn mat1(n: usize, q: usize, u: [[Complex64; 2]; 2]) -> Matrix {
    let d = 1 << n;
    let mut m = Matrix { dim: d, data: vec![Complex64::new(0.0, 0.0); d * d] };
    for x in 0..d {
        let b = (x >> q) & 1;
        for (b2, row) in u.iter().enumerate() {
            let y = (x & !(1 << q)) | (b2 << q);
            m.data[y * d + x] += row[b];
        }
    }
    m
}

fn mat_perm_phase(n: usize, f: impl Fn(usize) -> (usize, Complex64)) -> Matrix {
    let d = 1 << n;
    let mut m = Matrix { dim: d, data: vec![Complex64::new(0.0, 0.0); d * d] };
    for x in 0..d {
        let (y, ph) = f(x);
        m.data[y * d + x] = ph;
    }
    m
}

fn interpret(text: &str, n: usize) -> Matrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]];
    let sg = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]];
    let bit = |x: usize, q: usize| (x >> q) & 1;
    let cx = |a: usize, b: usize| mat_perm_phase(n, move |x| (x ^ (bit(x, a) << b), c(1.0, 0.0)));
    let mut u = Matrix::identity(1 << n);
    for line in text.lines() {
        let line = line.trim_end_matches(';');
        if line.starts_with("OPENQASM") || line.starts_with("include") || line.starts_with("qreg") || line.starts_with("gate") {
            continue;
        }
        let (head, args) = line.split_once(' ').unwrap();
        let qs: Vec<usize> = args.split(',').map(|a| a.trim_start_matches("q[").trim_end_matches(']').parse().unwrap()).collect();
        let (name, param) = match head.split_once('(') {
            Some((nm, p)) => (nm, p.trim_end_matches(')').parse::<f64>().unwrap()),
            None => (head, 0.0),
        };
        let g = match name {
            "h" => mat1(n, qs[0], h),
            "rz" => mat1(n, qs[0], [[Complex64::from_polar(1.0, -param / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, param / 2.0)]]),
            "rx" => {
                let (co, si) = ((param / 2.0).cos(), (param / 2.0).sin());
                mat1(n, qs[0], [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]])
            }
            "cx" => cx(qs[0], qs[1]),
            "cz" => mat_perm_phase(n, |x| (x, c(if bit(x, qs[0]) & bit(x, qs[1]) == 1 { -1.0 } else { 1.0 }, 0.0))),
            "cu1" => mat_perm_phase(n, |x| (x, Complex64::from_polar(1.0, if bit(x, qs[0]) & bit(x, qs[1]) == 1 { param } else { 0.0 }))),
            "iswap" => {
                // s a; s b; h a; cx a,b; cx b,a; h b
                let (a, b) = (qs[0], qs[1]);
                [mat1(n, a, sg), mat1(n, b, sg), mat1(n, a, h), cx(a, b), cx(b, a), mat1(n, b, h)]
                    .into_iter()
                    .fold(Matrix::identity(1 << n), |acc, m| m.mul(&acc))
            }
            other => panic!("unexpected instruction {other}"),
        };
        u = g.mul(&u);
    }
    u
}

#[test]
fn emitted_text_has_the_right_meaning() {
    for c in corpus().into_iter().filter(|c| !c.has_measurements()) {
        let n = c.n_qubits();
        let eq = matrices_equiv(&interpret(&to_qasm(&c), n), &unitary_of(&c).unwrap(), 1e-10);
        assert!(eq.equivalent, "deviation {}", eq.max_deviation);
    }
}

#[test]
fn iswap_definition_is_standard() {
    let c = Circuit::from_gates(2, 0, [Gate::Iswap { a: 0, b: 1 }]).unwrap();
    let u = unitary_of(&c).unwrap();
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    assert_eq!(u.get(0, 0), one);
    assert!((u.get(1, 2) - i).norm() < 1e-15 && (u.get(2, 1) - i).norm() < 1e-15);
    assert!(matrices_equiv(&interpret(&to_qasm(&c), 2), &u, 1e-12).equivalent);
}

#[test]
fn reader_accepts_expressions_and_comments() {
    let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n// comment\nqreg q[2];\nrz(-pi/4) q[1];\nrx(2*(pi - pi/2)) q[0];\ncx q[0],q[1];\n";
    let c = parse_qasm(text).unwrap();
    assert_eq!(c.len(), 3);
    assert!((c.gates()[0].angle().unwrap() - PI / 8.0).abs() < 1e-15);
    assert!((c.gates()[1].angle().unwrap() + PI / 2.0).abs() < 1e-15);
}

#[test]
fn reader_rejects_bad_input() {
    let bad: [&[u8]; 8] = [
        b"",
        b"qreg q[2];",
        b"OPENQASM 2.0;\ncx q[0],q[1];",
        b"OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[5];",
        b"OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];",
        b"OPENQASM 2.0;\nqreg q[1];\ncreg c0[1];\nif(c0==1) z q[0];",
        b"OPENQASM 2.0;\nqreg q[1];\nrz(1/0) q[0];",
        b"\xff\xfe",
    ];
    for b in bad {
        assert!(parse_qasm_bytes(b).is_err(), "{:?}", String::from_utf8_lossy(b));
    }
}
