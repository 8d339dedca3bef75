//! Closed-form resource counts next to measured values.

use std::ops::RangeInclusive;

use paritylane::qaoa::{synth_qaoa, IsingProblem, PartKind, QaoaParams, QaoaTopology};
use paritylane::qft::synth_qft;

use crate::{Alg, CliError, Format};

pub struct Row {
    pub alg: &'static str,
    pub n: usize,
    pub metric: &'static str,
    pub formula: usize,
    pub measured: usize,
}

/// Every coupling and field set to one, so every term is rotated.
fn dense_problem(n: usize) -> IsingProblem {
    let couplings = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k, 1.0))).collect();
    IsingProblem::new(n, couplings, vec![1.0; n]).expect("valid by construction")
}

pub fn rows(algs: &[Alg], ns: RangeInclusive<usize>) -> Result<Vec<Row>, CliError> {
    let params = QaoaParams::new(vec![0.3], vec![0.7])?;
    let mut out = Vec::new();
    for &alg in algs {
        for n in ns.clone() {
            let mut push = |alg, metric, formula, measured| out.push(Row { alg, n, metric, formula, measured });
            match alg {
                Alg::Qft => {
                    let r = synth_qft(n)?.resource_report();
                    push("qft", "cnots", n * n - 1, r.cnot_count);
                    push("qft", "sq", (n * n + 5 * n) / 2 - 2, r.sq_count);
                    push("qft", "cnot_depth", 4 * n - 4, r.cnot_depth);
                    push("qft", "sq_depth", n + 1, r.sq_depth);
                    push("qft", "depth", 5 * n - 3, r.total_depth_parallel_sq);
                    push("qft", "depth_serial_sq", 6 * n - 5, r.total_depth_serial_sq);
                }
                Alg::QaoaLinear => {
                    let s = synth_qaoa(&dense_problem(n), &params, QaoaTopology::Linear)?;
                    let up = s.parts_circuit(&[PartKind::CostLayer], 0).resource_report();
                    let ux = s.parts_circuit(&[PartKind::Mixer], 0).resource_report();
                    let all = s.circuit.resource_report();
                    push("qaoa-linear", "up_cnots", (n - 1) * (n - 1), up.cnot_count);
                    push("qaoa-linear", "up_cnot_depth", 2 * n - 2, up.cnot_depth);
                    push("qaoa-linear", "ux_cnots", 2 * n - 2, ux.cnot_count);
                    push("qaoa-linear", "ux_cnot_depth", 4, ux.cnot_depth);
                    push("qaoa-linear", "cnots", n * n - 1, all.cnot_count);
                    push("qaoa-linear", "cnot_depth", 2 * n + 2, all.cnot_depth);
                }
                Alg::QaoaLadder => {
                    let r = synth_qaoa(&dense_problem(n), &params, QaoaTopology::Ladder)?.circuit.resource_report();
                    push("qaoa-ladder", "cnots", n * n + n - 1, r.cnot_count);
                    push("qaoa-ladder", "cnot_depth", 2 * n.div_ceil(2) + 4, r.cnot_depth);
                    push("qaoa-ladder", "measurements", n, r.measurement_count);
                    push("qaoa-ladder", "meas_depth", 1, r.meas_depth);
                }
                Alg::Rebase => unreachable!("filtered by the caller"),
            }
        }
    }
    Ok(out)
}

fn mark(r: &Row) -> &'static str {
    if r.formula == r.measured {
        "ok"
    } else {
        "DIFF"
    }
}

pub fn render(rows: &[Row], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("alg,n,metric,formula,measured,match\n");
            for r in rows {
                s.push_str(&format!("{},{},{},{},{},{}\n", r.alg, r.n, r.metric, r.formula, r.measured, r.formula == r.measured));
            }
        }
        Format::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "alg": r.alg, "n": r.n, "metric": r.metric,
                        "formula": r.formula, "measured": r.measured,
                    })
                })
                .collect();
            s.push_str(&serde_json::to_string_pretty(&v).expect("plain data serializes"));
            s.push('\n');
        }
        Format::Text => {
            s.push_str(&format!("{:<12} {:>3} {:<16} {:>8} {:>8}  match\n", "alg", "n", "metric", "formula", "measured"));
            for r in rows {
                s.push_str(&format!("{:<12} {:>3} {:<16} {:>8} {:>8}  {}\n", r.alg, r.n, r.metric, r.formula, r.measured, mark(r)));
            }
        }
    }
    s
}
