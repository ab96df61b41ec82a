//! Named complexes: `K(n)`, `K̄(n)`, their multiwedges, polygons and the
//! degree-prescribed wedges `K(n)(d_1, ..., d_n, 1, ..., 1)`.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::multiwedge::{j_construction, WedgeVector};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilySpec {
    K { n: usize },
    Kbar { n: usize },
    Kns { n: usize, s: usize },
    Kbarns { n: usize, s: usize },
    Polygon { m: usize },
    /// Odd degrees `k_i >= 3`.
    Degrees { degrees: Vec<usize> },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let check_n = |n: usize| {
            if n < 2 {
                Err(Error::invalid(format!("n = {n}; the family needs n >= 2")))
            } else {
                Ok(())
            }
        };
        let check_s = |s: usize| if s == 0 { Err(Error::invalid("s must be positive")) } else { Ok(()) };
        match self {
            FamilySpec::K { n } | FamilySpec::Kbar { n } => check_n(*n),
            FamilySpec::Kns { n, s } | FamilySpec::Kbarns { n, s } => check_n(*n).and(check_s(*s)),
            FamilySpec::Polygon { m } if *m < 4 => Err(Error::invalid(format!("polygon needs m >= 4, got {m}"))),
            FamilySpec::Polygon { .. } => Ok(()),
            FamilySpec::Degrees { degrees } => {
                check_n(degrees.len())?;
                match degrees.iter().find(|&&k| k < 3 || k % 2 == 0) {
                    Some(k) => Err(Error::invalid(format!("degree {k} is not an odd integer >= 3"))),
                    None => Ok(()),
                }
            }
        }
    }

    /// The wedge vector applied to `K(n)` or `K̄(n)`, if any.
    pub fn wedge(&self) -> Option<WedgeVector> {
        let padded = |head: Vec<usize>| {
            let n = head.len();
            let mut v = head;
            v.extend(std::iter::repeat_n(1, n));
            WedgeVector::new(v).expect("positive entries")
        };
        match self {
            FamilySpec::Kns { n, s } | FamilySpec::Kbarns { n, s } => Some(padded(vec![*s; *n])),
            FamilySpec::Degrees { degrees } => Some(padded(degrees.iter().map(|k| (k - 1) / 2).collect())),
            _ => None,
        }
    }
}

fn truncation_nonfaces(n: usize, closed: bool) -> Vec<VertexSet> {
    let top = if closed { n - 1 } else { n - 2 };
    let mut mf = Vec::new();
    for i in 0..=top {
        for k in 1..=n - i {
            mf.push(VertexSet::singleton(k).with(n + k + i));
        }
    }
    mf
}

/// `K(n)` on `2n` vertices.
pub fn truncation_complex(n: usize) -> Result<SimplicialComplex> {
    FamilySpec::K { n }.validate()?;
    SimplicialComplex::from_minimal_nonfaces(2 * n, truncation_nonfaces(n, false))
}

/// `K̄(n)`: `K(n)` with the extra non-face `{1, 2n}`.
pub fn closed_truncation_complex(n: usize) -> Result<SimplicialComplex> {
    FamilySpec::Kbar { n }.validate()?;
    SimplicialComplex::from_minimal_nonfaces(2 * n, truncation_nonfaces(n, true))
}

/// Nerve of the `m`-gon: the `m`-cycle.
pub fn polygon_nerve(m: usize) -> Result<SimplicialComplex> {
    FamilySpec::Polygon { m }.validate()?;
    let mut mf = Vec::new();
    for a in 1..=m {
        for b in a + 2..=m {
            if !(a == 1 && b == m) {
                mf.push(VertexSet::singleton(a).with(b));
            }
        }
    }
    SimplicialComplex::from_minimal_nonfaces(m, mf)
}

pub fn family_complex(spec: &FamilySpec) -> Result<SimplicialComplex> {
    spec.validate()?;
    match spec {
        FamilySpec::K { n } => truncation_complex(*n),
        FamilySpec::Kbar { n } => closed_truncation_complex(*n),
        FamilySpec::Polygon { m } => polygon_nerve(*m),
        FamilySpec::Kns { n, .. } => j_construction(&truncation_complex(*n)?, &spec.wedge().expect("wedged")),
        FamilySpec::Kbarns { n, .. } => {
            j_construction(&closed_truncation_complex(*n)?, &spec.wedge().expect("wedged"))
        }
        FamilySpec::Degrees { degrees } => {
            j_construction(&truncation_complex(degrees.len())?, &spec.wedge().expect("wedged"))
        }
    }
}
