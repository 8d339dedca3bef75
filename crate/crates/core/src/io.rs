//! JSON formats: problems, parameters and label traces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::labels::{track_into, Granularity, LabelError, LabelSet, Snapshot, Tracker};
use crate::qaoa::{IsingProblem, PartKind, QaoaError, QaoaParams, QaoaSynthesis};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] QaoaError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemJson {
    n: usize,
    #[serde(rename = "J", default)]
    couplings: Vec<(usize, usize, f64)>,
    h: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsJson {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

/// `{"n": int, "J": [[j, k, value], ...], "h": [value, ...]}`
pub fn parse_problem(data: &[u8]) -> Result<IsingProblem, IoError> {
    let p: ProblemJson = serde_json::from_slice(data)?;
    Ok(IsingProblem::new(p.n, p.couplings, p.h)?)
}

/// `{"betas": [...], "gammas": [...]}`
pub fn parse_params(data: &[u8]) -> Result<QaoaParams, IoError> {
    let p: ParamsJson = serde_json::from_slice(data)?;
    Ok(QaoaParams::new(p.betas, p.gammas)?)
}

pub fn problem_to_json(p: &IsingProblem) -> String {
    serde_json::to_string_pretty(p).expect("plain data serializes")
}

pub fn params_to_json(p: &QaoaParams) -> String {
    serde_json::to_string_pretty(p).expect("plain data serializes")
}

/// `{"n_logical": n, "steps": [{"lambda": 0, "labels": [[0], [1, 2]]}, ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTrace {
    pub n_logical: usize,
    pub steps: Vec<Snapshot>,
}

impl LabelTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn final_labels(&self) -> Option<&[LabelSet]> {
        self.steps.last().map(|s| s.labels.as_slice())
    }
}

impl LabelTrace {
    /// Trace of a measurement-free CNOT-based circuit from the identity frame.
    pub fn of_circuit(c: &Circuit, granularity: Granularity) -> Result<LabelTrace, LabelError> {
        let t = crate::labels::track_circuit(c, granularity)?;
        Ok(LabelTrace { n_logical: c.n_qubits(), steps: t.history().to_vec() })
    }

    /// Trace of a QAOA circuit from its starting frame. Qubits measured in a
    /// decode step return to the empty label.
    pub fn of_qaoa(s: &QaoaSynthesis, granularity: Granularity) -> Result<LabelTrace, LabelError> {
        let n = s.data_qubits.len();
        let mut labels = s.initial_labels.clone();
        labels.resize(s.circuit.n_qubits(), LabelSet::EMPTY);
        let mut t = Tracker::from_labels(n, labels)?;
        let mut steps: Vec<Snapshot> = Vec::new();
        let flush = |t: &Tracker, steps: &mut Vec<Snapshot>| {
            let skip = usize::from(!steps.is_empty());
            for snap in &t.history()[skip..] {
                steps.push(Snapshot { lambda: steps.len(), labels: snap.labels.clone() });
            }
        };
        for part in &s.parts {
            let piece = s.part_circuit(part);
            track_into(&mut t, &piece, granularity)?;
            if part.kind == PartKind::Decode && piece.has_measurements() {
                flush(&t, &mut steps);
                let mut reset = t.labels().to_vec();
                for l in reset.iter_mut().skip(n) {
                    *l = LabelSet::EMPTY;
                }
                t = Tracker::from_labels(n, reset)?;
            }
        }
        t.snapshot();
        flush(&t, &mut steps);
        steps.dedup_by(|b, a| a.labels == b.labels);
        for (i, s) in steps.iter_mut().enumerate() {
            s.lambda = i;
        }
        Ok(LabelTrace { n_logical: n, steps })
    }
}
