//! OpenQASM 2.0 export and a reader for the same subset.
//!
//! Angles: internal `RZ(φ) = exp(iφZ)` is written `rz(-2φ)`, which is the
//! same operator up to global phase; likewise `RX(θ)` becomes `rx(-2θ)`.
//! `MEASURE_X` is written as `h; measure; h` into a one-bit register per
//! cbit, and `COND_Z` as `if(c==1) z`.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("input is not UTF-8")]
    Utf8,
    #[error("missing OPENQASM 2.0 header")]
    Header,
    #[error("no qreg declared")]
    NoQreg,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

const MAX_QUBITS: usize = 1 << 16;

pub fn to_qasm(c: &Circuit) -> String {
    let mut s = String::new();
    s.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if c.gates().iter().any(|g| matches!(g, Gate::Iswap { .. })) {
        s.push_str("gate iswap a,b { s a; s b; h a; cx a,b; cx b,a; h b; }\n");
    }
    if c.gates().iter().any(|g| matches!(g, Gate::IswapDg { .. })) {
        s.push_str("gate iswapdg a,b { h b; cx b,a; cx a,b; h a; sdg b; sdg a; }\n");
    }
    let _ = writeln!(s, "qreg q[{}];", c.n_qubits());
    for k in 0..c.n_cbits() {
        let _ = writeln!(s, "creg c{k}[1];");
    }
    for g in c.gates() {
        let _ = match *g {
            Gate::Cnot { control, target } => writeln!(s, "cx q[{control}],q[{target}];"),
            Gate::Rz { qubit, angle } => writeln!(s, "rz({}) q[{qubit}];", -2.0 * angle),
            Gate::Rx { qubit, angle } => writeln!(s, "rx({}) q[{qubit}];", -2.0 * angle),
            Gate::H { qubit } => writeln!(s, "h q[{qubit}];"),
            Gate::Cp { a, b, angle } => writeln!(s, "cu1({angle}) q[{a}],q[{b}];"),
            Gate::Cz { a, b } => writeln!(s, "cz q[{a}],q[{b}];"),
            Gate::Iswap { a, b } => writeln!(s, "iswap q[{a}],q[{b}];"),
            Gate::IswapDg { a, b } => writeln!(s, "iswapdg q[{a}],q[{b}];"),
            Gate::MeasureX { qubit, cbit } => {
                writeln!(s, "h q[{qubit}];\nmeasure q[{qubit}] -> c{cbit}[0];\nh q[{qubit}];")
            }
            Gate::CondZ { qubit, cbit } => writeln!(s, "if(c{cbit}==1) z q[{qubit}];"),
        };
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Sym(&'static str),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, QasmError> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut out = Vec::new();
    let err = |line: usize, msg: String| QasmError::Syntax { line, msg };
    while i < b.len() {
        let ch = b[i];
        match ch {
            b'\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            b'/' if b.get(i + 1) == Some(&b'/') => {
                while i < b.len() && b[i] != b'\n' {
                    i += 1;
                }
            }
            b'"' => {
                let start = i + 1;
                i += 1;
                while i < b.len() && b[i] != b'"' {
                    if b[i] == b'\n' {
                        return Err(err(line, "unterminated string".into()));
                    }
                    i += 1;
                }
                if i >= b.len() {
                    return Err(err(line, "unterminated string".into()));
                }
                out.push((Tok::Str(src[start..i].to_string()), line));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), line));
            }
            c if c.is_ascii_digit() || c == b'.' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let save = i;
                    i += 1;
                    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
                        i += 1;
                    }
                    if i < b.len() && b[i].is_ascii_digit() {
                        while i < b.len() && b[i].is_ascii_digit() {
                            i += 1;
                        }
                    } else {
                        i = save;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| err(line, format!("bad number {text:?}")))?;
                out.push((Tok::Num(v), line));
            }
            _ => {
                let two = src.get(i..i + 2);
                let sym = match two {
                    Some("->") => Some("->"),
                    Some("==") => Some("=="),
                    _ => None,
                };
                if let Some(s) = sym {
                    out.push((Tok::Sym(s), line));
                    i += 2;
                    continue;
                }
                let s = match ch {
                    b';' => ";",
                    b',' => ",",
                    b'(' => "(",
                    b')' => ")",
                    b'[' => "[",
                    b']' => "]",
                    b'{' => "{",
                    b'}' => "}",
                    b'+' => "+",
                    b'-' => "-",
                    b'*' => "*",
                    b'/' => "/",
                    _ => {
                        let c = src[i..].chars().next().unwrap_or('?');
                        return Err(err(line, format!("unexpected character {c:?}")));
                    }
                };
                out.push((Tok::Sym(s), line));
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

enum Raw {
    Gate(Gate),
    Measure { qubit: usize, cbit: usize },
}

impl Parser {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(0, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, QasmError> {
        Err(QasmError::Syntax { line: self.line(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, s: &'static str) -> Result<(), QasmError> {
        match self.next() {
            Some(Tok::Sym(x)) if x == s => Ok(()),
            other => {
                self.pos -= 1;
                self.err(format!("expected {s:?}, found {other:?}"))
            }
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn ident(&mut self) -> Result<String, QasmError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            other => {
                self.pos -= 1;
                self.err(format!("expected identifier, found {other:?}"))
            }
        }
    }

    fn index(&mut self) -> Result<usize, QasmError> {
        match self.next() {
            Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v < 1e15 => Ok(v as usize),
            other => {
                self.pos -= 1;
                self.err(format!("expected index, found {other:?}"))
            }
        }
    }

    fn expr(&mut self, depth: usize) -> Result<f64, QasmError> {
        if depth > 64 {
            return self.err("expression nested too deeply");
        }
        let mut v = self.term(depth)?;
        loop {
            if self.is_sym("+") {
                self.pos += 1;
                v += self.term(depth)?;
            } else if self.is_sym("-") {
                self.pos += 1;
                v -= self.term(depth)?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<f64, QasmError> {
        let mut v = self.factor(depth)?;
        loop {
            if self.is_sym("*") {
                self.pos += 1;
                v *= self.factor(depth)?;
            } else if self.is_sym("/") {
                self.pos += 1;
                v /= self.factor(depth)?;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self, depth: usize) -> Result<f64, QasmError> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(v),
            Some(Tok::Ident(s)) if s == "pi" => Ok(std::f64::consts::PI),
            Some(Tok::Sym("-")) => Ok(-self.factor(depth + 1)?),
            Some(Tok::Sym("+")) => self.factor(depth + 1),
            Some(Tok::Sym("(")) => {
                let v = self.expr(depth + 1)?;
                self.eat_sym(")")?;
                Ok(v)
            }
            other => {
                self.pos -= 1;
                self.err(format!("expected number, found {other:?}"))
            }
        }
    }
}

/// Parse bytes; non-UTF-8 input is an error.
pub fn parse_qasm_bytes(data: &[u8]) -> Result<Circuit, QasmError> {
    parse_qasm(std::str::from_utf8(data).map_err(|_| QasmError::Utf8)?)
}

pub fn parse_qasm(src: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    match (p.next(), p.next()) {
        (Some(Tok::Ident(h)), Some(Tok::Num(v))) if h == "OPENQASM" && v == 2.0 => {}
        _ => return Err(QasmError::Header),
    }
    p.eat_sym(";")?;
    let mut qreg: Option<(String, usize)> = None;
    let mut cregs: HashMap<String, usize> = HashMap::new();
    let mut raw: Vec<(Raw, usize)> = Vec::new();
    while p.peek().is_some() {
        let line = p.line();
        let name = p.ident()?;
        match name.as_str() {
            "include" => {
                match p.next() {
                    Some(Tok::Str(_)) => {}
                    _ => return p.err("expected file name"),
                }
                p.eat_sym(";")?;
            }
            "gate" => {
                // definitions of the named gates are accepted and skipped
                while !p.is_sym("{") {
                    if p.next().is_none() {
                        return p.err("unterminated gate definition");
                    }
                }
                let mut depth = 0usize;
                loop {
                    match p.next() {
                        Some(Tok::Sym("{")) => depth += 1,
                        Some(Tok::Sym("}")) => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        Some(_) => {}
                        None => return p.err("unterminated gate body"),
                    }
                }
            }
            "qreg" => {
                let r = p.ident()?;
                p.eat_sym("[")?;
                let n = p.index()?;
                p.eat_sym("]")?;
                p.eat_sym(";")?;
                if qreg.is_some() {
                    return p.err("only one qreg is supported");
                }
                if n > MAX_QUBITS {
                    return p.err(format!("qreg of {n} qubits is too large"));
                }
                qreg = Some((r, n));
            }
            "creg" => {
                let r = p.ident()?;
                p.eat_sym("[")?;
                let size = p.index()?;
                p.eat_sym("]")?;
                p.eat_sym(";")?;
                if size != 1 {
                    return p.err("only one-bit cregs are supported");
                }
                let k = cregs.len();
                if cregs.insert(r, k).is_some() {
                    return p.err("creg declared twice");
                }
            }
            "if" => {
                p.eat_sym("(")?;
                let r = p.ident()?;
                p.eat_sym("==")?;
                let v = p.index()?;
                p.eat_sym(")")?;
                if v != 1 {
                    return p.err("only if(c==1) is supported");
                }
                let cbit = *cregs.get(&r).ok_or_else(|| QasmError::Syntax { line, msg: format!("unknown creg {r}") })?;
                let op = p.ident()?;
                if op != "z" {
                    return p.err("only z may be conditioned");
                }
                let q = qubit_arg(&mut p, &qreg)?;
                p.eat_sym(";")?;
                raw.push((Raw::Gate(Gate::CondZ { qubit: q, cbit }), line));
            }
            "measure" => {
                let q = qubit_arg(&mut p, &qreg)?;
                p.eat_sym("->")?;
                let r = p.ident()?;
                p.eat_sym("[")?;
                let bit = p.index()?;
                p.eat_sym("]")?;
                p.eat_sym(";")?;
                let cbit = *cregs.get(&r).ok_or_else(|| QasmError::Syntax { line, msg: format!("unknown creg {r}") })?;
                if bit != 0 {
                    return p.err("creg index out of range");
                }
                raw.push((Raw::Measure { qubit: q, cbit }, line));
            }
            op => {
                let angle = if p.is_sym("(") {
                    p.pos += 1;
                    let v = p.expr(0)?;
                    p.eat_sym(")")?;
                    Some(v)
                } else {
                    None
                };
                let a = qubit_arg(&mut p, &qreg)?;
                let b = if p.is_sym(",") {
                    p.pos += 1;
                    Some(qubit_arg(&mut p, &qreg)?)
                } else {
                    None
                };
                p.eat_sym(";")?;
                let g = match (op, angle, b) {
                    ("cx", None, Some(b)) => Gate::Cnot { control: a, target: b },
                    ("rz", Some(t), None) => Gate::Rz { qubit: a, angle: -t / 2.0 },
                    ("rx", Some(t), None) => Gate::Rx { qubit: a, angle: -t / 2.0 },
                    ("h", None, None) => Gate::H { qubit: a },
                    ("cu1" | "cp", Some(t), Some(b)) => Gate::Cp { a, b, angle: t },
                    ("cz", None, Some(b)) => Gate::Cz { a, b },
                    ("iswap", None, Some(b)) => Gate::Iswap { a, b },
                    ("iswapdg", None, Some(b)) => Gate::IswapDg { a, b },
                    _ => return Err(QasmError::Syntax { line, msg: format!("unsupported statement {op}") }),
                };
                raw.push((Raw::Gate(g), line));
            }
        }
    }
    let (_, n) = qreg.ok_or(QasmError::NoQreg)?;
    let mut gates: Vec<Gate> = Vec::with_capacity(raw.len());
    let mut k = 0;
    while k < raw.len() {
        match &raw[k] {
            (Raw::Measure { qubit, cbit }, line) => {
                let wrapped = matches!(gates.last(), Some(Gate::H { qubit: a }) if a == qubit)
                    && matches!(raw.get(k + 1), Some((Raw::Gate(Gate::H { qubit: b }), _)) if b == qubit);
                if !wrapped {
                    return Err(QasmError::Syntax { line: *line, msg: "measure must be wrapped as h; measure; h".into() });
                }
                gates.pop();
                gates.push(Gate::MeasureX { qubit: *qubit, cbit: *cbit });
                k += 2;
            }
            (Raw::Gate(g), _) => {
                gates.push(*g);
                k += 1;
            }
        }
    }
    Ok(Circuit::from_gates(n, cregs.len(), gates)?)
}

fn qubit_arg(p: &mut Parser, qreg: &Option<(String, usize)>) -> Result<usize, QasmError> {
    let r = p.ident()?;
    p.eat_sym("[")?;
    let i = p.index()?;
    p.eat_sym("]")?;
    match qreg {
        Some((name, _)) if *name == r => Ok(i),
        _ => p.err(format!("unknown qreg {r}")),
    }
}
