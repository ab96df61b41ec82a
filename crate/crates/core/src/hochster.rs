//! Bigraded and multigraded Betti numbers of Stanley–Reisner rings through
//! Hochster's formula, and the Betti vectors of `Z_K` and `R_K`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::{reduced_cohomology_within, CohomologyProfile};
use crate::vertex_set::VertexSet;

/// Default bound on `m` for full `2^m` enumeration.
pub const DEFAULT_CAPACITY: usize = 22;

/// `β^{-i,2J}`: the rank of `H̃^{|J|-i-1}(K_J)`.
pub fn multigraded_betti(k: &SimplicialComplex, i: usize, multidegree: VertexSet) -> Result<usize> {
    if !multidegree.is_subset(k.vertices()) {
        let vertex = multidegree.difference(k.vertices()).min_vertex().unwrap_or(0);
        return Err(Error::OutOfRange { vertex, m: k.m() });
    }
    if i > multidegree.len() {
        return Err(Error::invalid(format!("homological degree {i} exceeds |J| = {}", multidegree.len())));
    }
    let degree = multidegree.len() as i64 - i as i64 - 1;
    Ok(reduced_cohomology_within(k, multidegree).rank(degree))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    /// `(i, j) -> β^{-i,2j}`, nonzero entries only.
    #[serde(serialize_with = "serialize_bigraded")]
    pub bigraded: BTreeMap<(usize, usize), usize>,
    /// Betti numbers of `Z_K`, indexed by degree.
    pub zk_poincare: Vec<usize>,
    /// Betti numbers of `R_K`, indexed by degree.
    pub rk_poincare: Vec<usize>,
}

fn serialize_bigraded<S: serde::Serializer>(
    map: &BTreeMap<(usize, usize), usize>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(map.iter().map(|(&(i, j), &r)| [i, j, r]))
}

impl BettiTable {
    pub fn beta(&self, i: usize, j: usize) -> usize {
        self.bigraded.get(&(i, j)).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct BettiOptions {
    pub capacity: usize,
    /// Restrict the sum to these multidegrees; no capacity bound applies.
    pub filter: Option<Vec<VertexSet>>,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions { capacity: DEFAULT_CAPACITY, filter: None }
    }
}

fn add_at(v: &mut Vec<usize>, index: usize, amount: usize) {
    if v.len() <= index {
        v.resize(index + 1, 0);
    }
    v[index] += amount;
}

pub fn bigraded_betti_table(k: &SimplicialComplex) -> Result<BettiTable> {
    bigraded_betti_table_with(k, &BettiOptions::default())
}

pub fn bigraded_betti_table_with(k: &SimplicialComplex, options: &BettiOptions) -> Result<BettiTable> {
    let multidegrees: Vec<VertexSet> = match &options.filter {
        Some(list) => {
            for j in list {
                if !j.is_subset(k.vertices()) {
                    let vertex = j.difference(k.vertices()).min_vertex().unwrap_or(0);
                    return Err(Error::OutOfRange { vertex, m: k.m() });
                }
            }
            list.clone()
        }
        None => {
            if k.m() > options.capacity {
                return Err(Error::Capacity { guard: "full Hochster enumeration", value: k.m(), bound: options.capacity });
            }
            k.vertices().all_subsets().collect()
        }
    };
    let profiles: Vec<(VertexSet, CohomologyProfile)> =
        multidegrees.par_iter().map(|&j| (j, reduced_cohomology_within(k, j))).collect();

    let mut table = BettiTable { bigraded: BTreeMap::new(), zk_poincare: Vec::new(), rk_poincare: Vec::new() };
    for (j, profile) in &profiles {
        for (q, rank) in profile.nonzero() {
            let size = j.len() as i64;
            let i = (size - q - 1) as usize;
            *table.bigraded.entry((i, j.len())).or_insert(0) += rank;
            add_at(&mut table.zk_poincare, (q + size + 1) as usize, rank);
            add_at(&mut table.rk_poincare, (q + 1) as usize, rank);
        }
    }
    Ok(table)
}

/// `β^{-i,2(i+1)} = Σ_{|J|=i+1} (cc(K_J) - 1)`.
pub fn component_count_betti(k: &SimplicialComplex, i: usize) -> Result<usize> {
    if i == 0 {
        return Err(Error::invalid("component-count formula needs i >= 1"));
    }
    Ok(k.vertices()
        .subsets_of_size(i + 1)
        .par_iter()
        .map(|&j| k.component_count(j) - 1)
        .sum())
}
