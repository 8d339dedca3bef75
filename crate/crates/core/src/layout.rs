//! Spanning lines of the extended LHZ layout and the CNOT rounds moving between them.
//!
//! A line whose labels all have weight at most 2 is a spanning tree on the
//! vertices `{*, 0, .., n-1}`: label `{j,k}` is the edge `j-k` and `{j}` the
//! edge `j-*`. The lines used for QAOA are paths through all `n+1` vertices.
//! A round of CNOTs into every position of one parity swaps the two
//! endpoints of every edge of the other parity, so consecutive rounds run an
//! odd-even transposition network on the vertex order.

use serde::Serialize;
use thiserror::Error;

use crate::gf2;
use crate::labels::LabelSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("a chain needs at least 2 qubits, got {0}")]
    TooSmall(usize),
    #[error("at most 64 logical qubits are supported, got {0}")]
    TooLarge(usize),
    #[error("label {label:?} at position {position} has weight {weight}, not 1 or 2")]
    BadWeight { position: usize, label: LabelSet, weight: u32 },
    #[error("line has GF(2) rank {rank}, expected {n}")]
    RankDeficient { rank: usize, n: usize },
    #[error("position {position} has no chain neighbour {neighbor}")]
    NotNeighbor { position: usize, neighbor: usize },
    #[error("deformation needs one or two distinct neighbours")]
    BadNeighborSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningLine {
    pub labels: Vec<LabelSet>,
}

impl SpanningLine {
    pub fn new(labels: Vec<LabelSet>) -> Result<Self, LayoutError> {
        let line = SpanningLine { labels };
        line.validate()?;
        Ok(line)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn validate(&self) -> Result<(), LayoutError> {
        let n = self.n();
        for (position, &label) in self.labels.iter().enumerate() {
            let weight = label.weight();
            if !(1..=2).contains(&weight) || label.indices().any(|j| j >= n) {
                return Err(LayoutError::BadWeight { position, label, weight });
            }
        }
        let rows: Vec<u64> = self.labels.iter().map(|l| l.0).collect();
        let rank = gf2::rank(&rows);
        if rank != n {
            return Err(LayoutError::RankDeficient { rank, n });
        }
        Ok(())
    }

    /// Chain positions whose label contains `j`.
    pub fn logical_line(&self, j: usize) -> Vec<usize> {
        (0..self.n()).filter(|&a| self.labels[a].contains(j)).collect()
    }

    pub fn mirrored(&self) -> SpanningLine {
        SpanningLine { labels: self.labels.iter().rev().copied().collect() }
    }
}

pub fn base_line(n: usize) -> Result<SpanningLine, LayoutError> {
    check_n(n)?;
    Ok(SpanningLine { labels: (0..n).map(LabelSet::single).collect() })
}

pub fn mirrored_line(line: &SpanningLine) -> SpanningLine {
    line.mirrored()
}

fn check_n(n: usize) -> Result<(), LayoutError> {
    if n < 2 {
        return Err(LayoutError::TooSmall(n));
    }
    if n > 64 {
        return Err(LayoutError::TooLarge(n));
    }
    Ok(())
}

/// Deform `position` by CNOTs from the given chain neighbours.
pub fn deform(line: &SpanningLine, position: usize, neighbors: &[usize]) -> Result<(Vec<(usize, usize)>, SpanningLine), LayoutError> {
    let n = line.n();
    if neighbors.is_empty() || neighbors.len() > 2 || (neighbors.len() == 2 && neighbors[0] == neighbors[1]) {
        return Err(LayoutError::BadNeighborSet);
    }
    for &nb in neighbors {
        if nb >= n || position.abs_diff(nb) != 1 {
            return Err(LayoutError::NotNeighbor { position, neighbor: nb });
        }
    }
    let mut labels = line.labels.clone();
    let mut cnots = Vec::new();
    for &nb in neighbors {
        labels[position] ^= line.labels[nb];
        cnots.push((nb, position));
    }
    let next = SpanningLine::new(labels)?;
    Ok((cnots, next))
}

/// A chain of `n` qubits viewed as a path over `n+1` vertices, `None` being `*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<Option<usize>>,
}

impl Path {
    /// The zig-zag start `0, *, 1, 2, .., n-1`.
    pub fn zigzag(n: usize) -> Path {
        let mut vertices = vec![Some(0), None];
        vertices.extend((1..n).map(Some));
        Path { vertices }
    }

    pub fn n(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn labels(&self) -> Vec<LabelSet> {
        self.vertices
            .windows(2)
            .map(|w| w.iter().flatten().fold(LabelSet::EMPTY, |acc, &j| acc ^ LabelSet::single(j)))
            .collect()
    }

    pub fn line(&self) -> SpanningLine {
        SpanningLine { labels: self.labels() }
    }

    pub fn star_position(&self) -> usize {
        self.vertices.iter().position(Option::is_none).expect("path contains *")
    }

    /// Apply the round targeting positions of `parity`.
    pub fn apply_round(&mut self, parity: usize) {
        let mut v = 1 - parity;
        while v + 1 < self.vertices.len() {
            self.vertices.swap(v, v + 1);
            v += 2;
        }
    }
}

/// CNOTs of the round targeting chain positions `a ≡ parity (mod 2)`.
///
/// Listed as two layers: all left-neighbour CNOTs, then all right-neighbour ones.
pub fn round_cnots(n: usize, parity: usize) -> Vec<(usize, usize)> {
    let targets: Vec<usize> = (0..n).filter(|a| a % 2 == parity).collect();
    let left = targets.iter().filter(|&&a| a >= 1).map(|&a| (a - 1, a));
    let right = targets.iter().filter(|&&a| a + 1 < n).map(|&a| (a + 1, a));
    left.chain(right).collect()
}

/// Parity of the positions targeted by round `t` of the linear schedule.
pub fn round_parity(t: usize) -> usize {
    t % 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgressionStep {
    pub rounds: Vec<Vec<(usize, usize)>>,
    pub line: SpanningLine,
}

impl ProgressionStep {
    pub fn cnot_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    QaoaLinear,
    Qft,
}

/// Start line and steps of a progression schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub start: SpanningLine,
    pub steps: Vec<ProgressionStep>,
}

impl Schedule {
    pub fn cnot_count(&self) -> usize {
        self.steps.iter().map(ProgressionStep::cnot_count).sum()
    }

    pub fn lines(&self) -> impl Iterator<Item = &SpanningLine> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.line))
    }

    pub fn rounds(&self) -> impl Iterator<Item = &Vec<(usize, usize)>> {
        self.steps.iter().flat_map(|s| s.rounds.iter())
    }
}

/// Paths `L_0 .. L_{n-1}` of the linear QAOA schedule.
pub fn linear_paths(n: usize) -> Vec<Path> {
    let mut p = Path::zigzag(n);
    let mut out = vec![p.clone()];
    for t in 0..n - 1 {
        p.apply_round(round_parity(t));
        out.push(p.clone());
    }
    out
}

pub fn progression_schedule(n: usize, variant: Variant) -> Result<Schedule, LayoutError> {
    check_n(n)?;
    match variant {
        Variant::QaoaLinear => {
            let paths = linear_paths(n);
            let start = paths[0].line();
            let mut steps = Vec::new();
            let mut t = 0;
            while t < n - 1 {
                let k = if t + 2 < n { 2 } else { 1 };
                let rounds = (t..t + k).map(|r| round_cnots(n, round_parity(r))).collect();
                steps.push(ProgressionStep { rounds, line: paths[t + k].line() });
                t += k;
            }
            Ok(Schedule { start, steps })
        }
        Variant::Qft => {
            let cnots = crate::qft::skeleton(n).into_iter().map(|(_, c, t)| (c, t)).collect::<Vec<_>>();
            let mut ready = vec![0usize; n];
            let mut layers: Vec<Vec<(usize, usize)>> = Vec::new();
            for (c, t) in cnots {
                let l = ready[c].max(ready[t]);
                ready[c] = l + 1;
                ready[t] = l + 1;
                if layers.len() <= l {
                    layers.push(Vec::new());
                }
                layers[l].push((c, t));
            }
            let start = base_line(n)?;
            let mut labels = start.labels.clone();
            let steps = layers
                .into_iter()
                .map(|round| {
                    for &(c, t) in &round {
                        let lc = labels[c];
                        labels[t] ^= lc;
                    }
                    ProgressionStep { rounds: vec![round], line: SpanningLine { labels: labels.clone() } }
                })
                .collect();
            Ok(Schedule { start, steps })
        }
    }
}
