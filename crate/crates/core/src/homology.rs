//! Reduced simplicial cohomology over exact rationals.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{Fp, Rational, Scalar, SparseMatrix};
use crate::vertex_set::VertexSet;

/// Ranks of `H̃^d` for `d = -1 ..= dim K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyProfile {
    ranks: Vec<usize>,
}

impl CohomologyProfile {
    /// Rank in degree `d`; zero outside `-1 ..= dim`.
    pub fn rank(&self, d: i64) -> usize {
        if d < -1 {
            return 0;
        }
        self.ranks.get((d + 1) as usize).copied().unwrap_or(0)
    }

    /// Ranks indexed from degree `-1`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.total() == 0
    }

    /// `(degree, rank)` pairs with nonzero rank.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.ranks.iter().enumerate().filter(|(_, r)| **r > 0).map(|(i, r)| (i as i64 - 1, *r))
    }
}

/// Matrix of `δ: C̃^d → C̃^{d+1}` for `K_J`; rows index the `(d+1)`-faces and
/// columns the `d`-faces, both in lexicographic order.
///
/// A face is an ascending vertex list and inserting `v` at position `k`
/// (0-based) carries the sign `(-1)^k`.
fn coboundary_between<T: Scalar>(sources: &[VertexSet], targets: &[VertexSet]) -> SparseMatrix<T> {
    let index: HashMap<VertexSet, usize> = targets.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let universe = targets.iter().fold(VertexSet::EMPTY, |a, &f| a.union(f));
    let mut triplets = Vec::new();
    for (col, &sigma) in sources.iter().enumerate() {
        for v in universe.difference(sigma) {
            if let Some(&row) = index.get(&sigma.with(v)) {
                let sign = if sigma.count_below(v) % 2 == 0 { 1 } else { -1 };
                triplets.push((row, col, T::from_i64(sign)));
            }
        }
    }
    SparseMatrix::from_triplets(targets.len(), sources.len(), triplets)
}

pub fn coboundary_matrix(k: &SimplicialComplex, d: i64) -> Result<SparseMatrix<Rational>> {
    let dim = k.dim();
    if d < -1 || d > dim {
        return Err(Error::DegreeOutOfRange { degree: d, min: -1, max: dim });
    }
    let faces = k.faces();
    let size = (d + 1) as usize;
    let empty = Vec::new();
    let sources = faces.get(size).unwrap_or(&empty);
    let targets = faces.get(size + 1).unwrap_or(&empty);
    Ok(coboundary_between(sources, targets))
}

fn profile_within<T: Scalar>(k: &SimplicialComplex, within: VertexSet) -> CohomologyProfile {
    let faces = k.faces_within(within);
    // ranks[s] = rank of δ from s-element faces to (s+1)-element faces.
    let ranks: Vec<usize> = (0..faces.len())
        .map(|s| match faces.get(s + 1) {
            Some(next) => coboundary_between::<T>(&faces[s], next).rank(),
            None => 0,
        })
        .collect();
    let betti = (0..faces.len())
        .map(|s| {
            let incoming = if s == 0 { 0 } else { ranks[s - 1] };
            faces[s].len() - ranks[s] - incoming
        })
        .collect();
    CohomologyProfile { ranks: betti }
}

pub fn reduced_cohomology_ranks(k: &SimplicialComplex) -> CohomologyProfile {
    profile_within::<Rational>(k, k.vertices())
}

/// Reduced cohomology of the induced subcomplex `K_J`, computed in place.
pub fn reduced_cohomology_within(k: &SimplicialComplex, within: VertexSet) -> CohomologyProfile {
    profile_within::<Rational>(k, within)
}

/// Coefficient field used for rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Coefficients {
    #[default]
    Rational,
    /// `Z/2`, for cross-checking only.
    F2,
    /// `Z/3`, for cross-checking only.
    F3,
}

pub fn reduced_cohomology_with(k: &SimplicialComplex, within: VertexSet, field: Coefficients) -> CohomologyProfile {
    match field {
        Coefficients::Rational => profile_within::<Rational>(k, within),
        Coefficients::F2 => profile_within::<Fp<2>>(k, within),
        Coefficients::F3 => profile_within::<Fp<3>>(k, within),
    }
}
