use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use paritylane::circuit::{Circuit, ResourceReport};
use paritylane::io::{parse_params, parse_problem, IoError, LabelTrace};
use paritylane::labels::{Granularity, LabelError};
use paritylane::qaoa::{synth_qaoa, PartKind, QaoaError, QaoaTopology};
use paritylane::qasm::{parse_qasm_bytes, to_qasm, QasmError};
use paritylane::qft::{synth_qft, QftError};
use paritylane::rebase::{entangling_savings, rebase, GateSetTarget, RebaseError};
use paritylane::sim::SimError;
use thiserror::Error;

mod report;
mod verify;

const USAGE: &str = "usage: paritylane <qft|qaoa|track|verify|report|rebase> [flags]; see `paritylane --help`";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: IoError },
    #[error("{path}: {source}")]
    Qasm { path: PathBuf, source: QasmError },
    #[error(transparent)]
    Qft(#[from] QftError),
    #[error(transparent)]
    Qaoa(#[from] QaoaError),
    #[error(transparent)]
    Labels(#[from] LabelError),
    #[error(transparent)]
    Rebase(#[from] RebaseError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "paritylane", version, about = "Parity-frame circuit synthesis for linear and ladder chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Topo {
    Linear,
    Ladder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Gran {
    Layer,
    Gate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Alg {
    Qft,
    QaoaLinear,
    QaoaLadder,
    Rebase,
}

#[derive(Debug, clap::Args)]
struct Emit {
    /// Write QASM here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a resource table.
    #[arg(long)]
    report: bool,
    /// Write the JSON label trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Rewrite CNOTs into another entangling gate set.
    #[arg(long, value_parser = parse_target)]
    rebase: Option<GateSetTarget>,
    /// Simulate against the reference and fail on mismatch.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear-chain QFT.
    Qft {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        emit: Emit,
    },
    /// QAOA for an Ising problem.
    Qaoa {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long, value_enum, default_value = "linear")]
        topology: Topo,
        #[command(flatten)]
        emit: Emit,
    },
    /// Label trace of a CNOT circuit as JSON.
    Track {
        #[arg(long)]
        qasm: PathBuf,
        #[arg(long, value_enum, default_value = "layer")]
        granularity: Gran,
    },
    /// Re-simulate a synthesized circuit against its reference.
    Verify {
        #[arg(long, value_enum)]
        alg: Alg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Closed-form resource counts next to measured ones.
    Report {
        #[arg(long, value_enum)]
        alg: Option<Alg>,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 32)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Exit 1 if any measured value differs from its formula.
        #[arg(long)]
        check: bool,
    },
    /// Rewrite a QASM circuit into another gate set.
    Rebase {
        #[arg(long)]
        qasm: PathBuf,
        #[arg(long, value_parser = parse_target)]
        to: GateSetTarget,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: bool,
    },
}

fn parse_target(s: &str) -> Result<GateSetTarget, String> {
    s.parse()
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Read { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write { path: path.to_owned(), source })
}

fn read_qasm(path: &Path) -> Result<Circuit, CliError> {
    parse_qasm_bytes(&read(path)?).map_err(|source| CliError::Qasm { path: path.to_owned(), source })
}

const REPORT_FIELDS: [&str; 9] = [
    "cnots",
    "sq",
    "entangling",
    "measurements",
    "cnot_depth",
    "sq_depth",
    "meas_depth",
    "depth",
    "depth_serial_sq",
];

fn report_values(r: &ResourceReport) -> [usize; 9] {
    [
        r.cnot_count,
        r.sq_count,
        r.entangling_count,
        r.measurement_count,
        r.cnot_depth,
        r.sq_depth,
        r.meas_depth,
        r.total_depth_parallel_sq,
        r.total_depth_serial_sq,
    ]
}

/// Rows of `(part, report)` rendered as a table.
fn render_reports(rows: &[(String, ResourceReport)], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(name, r)| (name.clone(), serde_json::to_value(r).expect("plain data serializes")))
                .collect();
            s.push_str(&serde_json::to_string_pretty(&obj).expect("plain data serializes"));
            s.push('\n');
        }
        Format::Csv => {
            s.push_str("part,");
            s.push_str(&REPORT_FIELDS.join(","));
            s.push('\n');
            for (name, r) in rows {
                let vals: Vec<String> = report_values(r).iter().map(usize::to_string).collect();
                s.push_str(&format!("{name},{}\n", vals.join(",")));
            }
        }
        Format::Text => {
            s.push_str(&format!("{:<16}", "part"));
            for f in REPORT_FIELDS {
                s.push_str(&format!(" {f:>15}"));
            }
            s.push('\n');
            for (name, r) in rows {
                s.push_str(&format!("{name:<16}"));
                for v in report_values(r) {
                    s.push_str(&format!(" {v:>15}"));
                }
                s.push('\n');
            }
        }
    }
    s
}

fn part_name(kind: PartKind) -> &'static str {
    match kind {
        PartKind::Init => "init",
        PartKind::Reset => "reset",
        PartKind::Copy => "copy",
        PartKind::CostLayer => "cost",
        PartKind::Decode => "decode",
        PartKind::Mixer => "mixer",
    }
}

/// Write QASM, trace and report for a synthesized circuit.
fn emit(circuit: &Circuit, trace: Option<LabelTrace>, parts: Vec<(String, ResourceReport)>, opts: &Emit) -> Result<String, CliError> {
    let mut stdout = String::new();
    let out_circuit = match opts.rebase {
        Some(t) => rebase(circuit, t)?,
        None => circuit.clone(),
    };
    let qasm = to_qasm(&out_circuit);
    match &opts.out {
        Some(path) => write(path, &qasm)?,
        None if !opts.report && !opts.verify => stdout.push_str(&qasm),
        None => {}
    }
    if let (Some(path), Some(trace)) = (&opts.trace, trace) {
        write(path, &(trace.to_json() + "\n"))?;
    }
    if opts.report {
        let mut rows = parts;
        if opts.rebase.is_some() {
            rows.push(("rebased".into(), out_circuit.resource_report()));
        }
        stdout.push_str(&render_reports(&rows, opts.format));
    }
    Ok(stdout)
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Qft { n, emit: opts } => {
            let c = synth_qft(n)?;
            let trace = opts.trace.is_some().then(|| LabelTrace::of_circuit(&c, Granularity::Layer)).transpose()?;
            let mut stdout = emit(&c, trace, vec![("total".into(), c.resource_report())], &opts)?;
            if opts.verify {
                stdout.push_str(&verify::finish(verify::qft(n, 0)?, 1e-9)?);
            }
            Ok(stdout)
        }
        Command::Qaoa { problem, params, topology, emit: opts } => {
            let pr = parse_problem(&read(&problem)?).map_err(|source| CliError::Input { path: problem.clone(), source })?;
            let pa = parse_params(&read(&params)?).map_err(|source| CliError::Input { path: params.clone(), source })?;
            let topology = match topology {
                Topo::Linear => QaoaTopology::Linear,
                Topo::Ladder => QaoaTopology::Ladder,
            };
            let s = synth_qaoa(&pr, &pa, topology)?;
            let trace = opts.trace.is_some().then(|| LabelTrace::of_qaoa(&s, Granularity::Layer)).transpose()?;
            let mut rows = vec![("total".to_string(), s.circuit.resource_report())];
            for part in &s.parts {
                rows.push((format!("{}[{}]", part_name(part.kind), part.layer), s.part_circuit(part).resource_report()));
            }
            let mut stdout = emit(&s.circuit, trace, rows, &opts)?;
            if opts.verify {
                stdout.push_str(&verify::finish(verify::qaoa_instance(&pr, &pa, &s)?, 1e-9)?);
            }
            Ok(stdout)
        }
        Command::Track { qasm, granularity } => {
            let c = read_qasm(&qasm)?;
            let g = match granularity {
                Gran::Layer => Granularity::Layer,
                Gran::Gate => Granularity::Gate,
            };
            Ok(LabelTrace::of_circuit(&c, g)?.to_json() + "\n")
        }
        Command::Verify { alg, n, seed, p, tol } => {
            if p == 0 {
                return Err(CliError::Usage("--p must be at least 1".into()));
            }
            let dev = match alg {
                Alg::Qft => verify::qft(n, seed)?,
                Alg::QaoaLinear => verify::qaoa(n, p, seed, QaoaTopology::Linear)?,
                Alg::QaoaLadder => verify::qaoa(n, p, seed, QaoaTopology::Ladder)?,
                Alg::Rebase => verify::rebase_all(n, p, seed)?,
            };
            verify::finish(dev, tol)
        }
        Command::Report { alg, n_min, n_max, format, check } => {
            if n_min < 2 || n_min > n_max || n_max > 64 {
                return Err(CliError::Usage(format!("need 2 <= n-min <= n-max <= 64, got {n_min}..{n_max}")));
            }
            let algs = match alg {
                Some(Alg::Rebase) => return Err(CliError::Usage("report covers qft, qaoa-linear and qaoa-ladder".into())),
                Some(a) => vec![a],
                None => vec![Alg::Qft, Alg::QaoaLinear, Alg::QaoaLadder],
            };
            let rows = report::rows(&algs, n_min..=n_max)?;
            let mut out = report::render(&rows, format);
            let mismatches = rows.iter().filter(|r| r.formula != r.measured).count();
            if check {
                if mismatches > 0 {
                    print!("{out}");
                    return Err(CliError::Failed(format!("{mismatches} of {} values differ from their formula", rows.len())));
                }
                out.push_str(&format!("all {} values match\n", rows.len()));
            }
            Ok(out)
        }
        Command::Rebase { qasm, to, out, report } => {
            let c = read_qasm(&qasm)?;
            let r = rebase(&c, to)?;
            let text = to_qasm(&r);
            let mut stdout = String::new();
            match &out {
                Some(path) => write(path, &text)?,
                None => stdout.push_str(&text),
            }
            if report {
                let s = entangling_savings(&c);
                stdout.push_str(&format!(
                    "entangling before {} pairs {} cz {} cp {} iswap {}\n",
                    s.entangling_before, s.pairs, s.projected_cz, s.projected_cp, s.projected_iswap
                ));
            }
            Ok(stdout)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("{USAGE}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
