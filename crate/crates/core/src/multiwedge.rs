//! The simplicial multiwedge `K(J)`: vertex `i` is replaced by `j_i` copies and
//! each minimal non-face is inflated by all copies of its vertices.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct WedgeVector(Vec<usize>);

impl WedgeVector {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|&j| j == 0) {
            return Err(Error::invalid(format!("wedge entry {} is zero; entries must be positive", pos + 1)));
        }
        Ok(WedgeVector(entries))
    }

    pub fn ones(m: usize) -> Self {
        WedgeVector(vec![1; m])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `d(J) = j_1 + ... + j_m`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// The new vertices standing in for original vertex `i` (1-indexed).
    pub fn copies(&self, i: usize) -> VertexSet {
        let offset: usize = self.0[..i - 1].iter().sum();
        (offset + 1..=offset + self.0[i - 1]).collect()
    }

    /// `I(J)` for a vertex set `I` of the original complex.
    pub fn inflate(&self, set: VertexSet) -> VertexSet {
        set.iter().fold(VertexSet::EMPTY, |acc, i| acc.union(self.copies(i)))
    }

    /// The wedge vector `J''` with `K(J)(J') = K(J'')`, where `next` has length `d(J)`.
    pub fn compose(&self, next: &WedgeVector) -> Result<WedgeVector> {
        if next.len() != self.total() {
            return Err(Error::LengthMismatch { expected: self.total(), got: next.len() });
        }
        let mut out = Vec::with_capacity(self.len());
        let mut cursor = 0;
        for &j in &self.0 {
            out.push(next.0[cursor..cursor + j].iter().sum());
            cursor += j;
        }
        Ok(WedgeVector(out))
    }
}

impl TryFrom<Vec<usize>> for WedgeVector {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        WedgeVector::new(v)
    }
}

impl From<WedgeVector> for Vec<usize> {
    fn from(w: WedgeVector) -> Self {
        w.0
    }
}

/// `K(J)` on `d(J)` vertices ordered `11, 12, ..., 1j_1, 21, ...`.
pub fn j_construction(k: &SimplicialComplex, wedge: &WedgeVector) -> Result<SimplicialComplex> {
    if wedge.len() != k.m() {
        return Err(Error::LengthMismatch { expected: k.m(), got: wedge.len() });
    }
    let total = wedge.total();
    if total > MAX_VERTICES {
        return Err(Error::Capacity { guard: "vertex count", value: total, bound: MAX_VERTICES });
    }
    let mf: Vec<VertexSet> = k.minimal_nonfaces().iter().map(|&s| wedge.inflate(s)).collect();
    let mut labels = Vec::with_capacity(total);
    for (label, &j) in k.labels().iter().zip(wedge.entries()) {
        if j == 1 {
            labels.push(label.clone());
        } else {
            labels.extend((1..=j).map(|c| format!("{label}{c}")));
        }
    }
    SimplicialComplex::from_minimal_nonfaces(total, mf)?.with_labels(labels)
}
