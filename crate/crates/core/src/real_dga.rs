//! The finite model `r(K)` for the cohomology of the real moment-angle complex.
//!
//! Generators `u_i` (degree 1) and `t_i` (degree 0) satisfy the Stanley–Reisner
//! relations in the `u`'s, `u_i² = 0`, `t_i² = t_i`, `u_i t_i = u_i`,
//! `t_i u_i = 0`, and `u_i`, `t_j` commute for `i ≠ j`. Every word rewrites to
//! `± u_σ t_τ` with `σ ∈ K` and `σ ∩ τ = ∅`; `d t_i = u_i`, `d u_i = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::hochster::DEFAULT_CAPACITY;
use crate::koszul::{shuffle_sign, KoszulCochain, KoszulMonomial};
use crate::linalg::{ColumnEchelon, Rational, SparseMatrix, SparseVec};
use crate::vertex_set::VertexSet;

/// `u_σ t_τ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RealMonomial {
    pub sigma: VertexSet,
    pub tau: VertexSet,
}

impl RealMonomial {
    pub const ONE: RealMonomial = RealMonomial { sigma: VertexSet::EMPTY, tau: VertexSet::EMPTY };

    pub fn degree(self) -> usize {
        self.sigma.len()
    }

    pub fn support(self) -> VertexSet {
        self.sigma.union(self.tau)
    }
}

impl fmt::Display for RealMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support().is_empty() {
            return write!(f, "1");
        }
        for v in self.sigma {
            write!(f, "u{v}")?;
        }
        for v in self.tau {
            write!(f, "t{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RealCochain {
    ambient: Arc<SimplicialComplex>,
    terms: BTreeMap<RealMonomial, Rational>,
}

fn same_ambient(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for RealCochain {
    fn eq(&self, other: &Self) -> bool {
        same_ambient(&self.ambient, &other.ambient) && self.terms == other.terms
    }
}

impl RealCochain {
    pub fn zero(ambient: &Arc<SimplicialComplex>) -> Self {
        RealCochain { ambient: Arc::clone(ambient), terms: BTreeMap::new() }
    }

    pub fn from_terms(
        ambient: &Arc<SimplicialComplex>,
        terms: impl IntoIterator<Item = (RealMonomial, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ambient);
        for (mono, coeff) in terms {
            if !mono.support().is_subset(ambient.vertices()) {
                let vertex = mono.support().difference(ambient.vertices()).min_vertex().unwrap_or(0);
                return Err(Error::OutOfRange { vertex, m: ambient.m() });
            }
            if !mono.sigma.is_disjoint(mono.tau) {
                return Err(Error::invalid(format!("{mono} is not in normal form")));
            }
            if !ambient.is_face(mono.sigma) {
                return Err(Error::invalid(format!("u-part of {mono} is not a face")));
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    pub fn monomial(ambient: &Arc<SimplicialComplex>, sigma: &[usize], tau: &[usize]) -> Result<Self> {
        let m = ambient.m();
        let mono = RealMonomial { sigma: VertexSet::from_checked(sigma, m)?, tau: VertexSet::from_checked(tau, m)? };
        Self::from_terms(ambient, [(mono, Rational::one())])
    }

    fn add_term(&mut self, mono: RealMonomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn ambient(&self) -> &Arc<SimplicialComplex> {
        &self.ambient
    }

    pub fn terms(&self) -> &BTreeMap<RealMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &RealCochain) -> Result<RealCochain> {
        if !same_ambient(&self.ambient, &other.ambient) {
            return Err(Error::AmbientMismatch);
        }
        let mut out = self.clone();
        for (&mono, coeff) in &other.terms {
            out.add_term(mono, coeff.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> RealCochain {
        let mut out = Self::zero(&self.ambient);
        for (&mono, coeff) in &self.terms {
            out.add_term(mono, coeff * factor);
        }
        out
    }

    pub fn sub(&self, other: &RealCochain) -> Result<RealCochain> {
        self.add(&other.scale(&-Rational::one()))
    }
}

impl fmt::Display for RealCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if coeff.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({coeff})*{mono}")?;
            }
        }
        Ok(())
    }
}

fn multiply_monomials(k: &SimplicialComplex, a: RealMonomial, b: RealMonomial) -> Option<(RealMonomial, bool)> {
    if !a.sigma.is_disjoint(b.sigma) || !a.tau.is_disjoint(b.sigma) {
        return None;
    }
    let sigma = a.sigma.union(b.sigma);
    if !k.is_face(sigma) {
        return None;
    }
    let tau = a.tau.union(b.tau).difference(sigma);
    Some((RealMonomial { sigma, tau }, shuffle_sign(a.sigma, b.sigma)))
}

pub fn real_multiply(a: &RealCochain, b: &RealCochain) -> Result<RealCochain> {
    if !same_ambient(&a.ambient, &b.ambient) {
        return Err(Error::AmbientMismatch);
    }
    let mut out = RealCochain::zero(&a.ambient);
    for (&ma, ca) in &a.terms {
        for (&mb, cb) in &b.terms {
            if let Some((mono, negative)) = multiply_monomials(&a.ambient, ma, mb) {
                let c = ca * cb;
                out.add_term(mono, if negative { -c } else { c });
            }
        }
    }
    Ok(out)
}

fn differential_terms(k: &SimplicialComplex, mono: RealMonomial) -> impl Iterator<Item = (RealMonomial, bool)> + '_ {
    mono.tau.iter().filter_map(move |i| {
        let sigma = mono.sigma.with(i);
        k.is_face(sigma)
            .then(|| (RealMonomial { sigma, tau: mono.tau.without(i) }, mono.sigma.count_below(i) % 2 == 1))
    })
}

/// `d(u_σ t_τ) = Σ_{i∈τ} (-1)^{#{s∈σ : s<i}} u_{σ∪i} t_{τ∖i}`.
pub fn real_differential(c: &RealCochain) -> RealCochain {
    let mut out = RealCochain::zero(&c.ambient);
    for (&mono, coeff) in &c.terms {
        for (target, negative) in differential_terms(&c.ambient, mono) {
            out.add_term(target, if negative { -coeff.clone() } else { coeff.clone() });
        }
    }
    out
}

/// Basis of the support-`J`, degree-`p` piece: `u_σ t_{J∖σ}` for `σ ∈ K_J`, `|σ| = p`.
fn component_monomials(faces: &[Vec<VertexSet>], j: VertexSet, p: usize) -> Vec<RealMonomial> {
    faces
        .get(p)
        .map(|fs| fs.iter().map(|&sigma| RealMonomial { sigma, tau: j.difference(sigma) }).collect())
        .unwrap_or_default()
}

fn matrix_between(k: &SimplicialComplex, sources: &[RealMonomial], targets: &[RealMonomial]) -> SparseMatrix<Rational> {
    let index: std::collections::HashMap<RealMonomial, usize> =
        targets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let columns = sources
        .iter()
        .map(|&mono| {
            SparseVec::from_entries(
                differential_terms(k, mono)
                    .map(|(t, negative)| (index[&t], if negative { -Rational::one() } else { Rational::one() }))
                    .collect(),
            )
        })
        .collect();
    SparseMatrix::from_columns(targets.len(), columns)
}

/// Ranks of `H^p[r(K), d]`, indexed by `p`.
pub fn real_cohomology_ranks(k: &SimplicialComplex) -> Result<Vec<usize>> {
    real_cohomology_ranks_with(k, DEFAULT_CAPACITY)
}

pub fn real_cohomology_ranks_with(k: &SimplicialComplex, capacity: usize) -> Result<Vec<usize>> {
    if k.m() > capacity {
        return Err(Error::Capacity { guard: "real model enumeration", value: k.m(), bound: capacity });
    }
    let mut out: Vec<usize> = Vec::new();
    for j in k.vertices().all_subsets() {
        let faces = k.faces_within(j);
        let pieces: Vec<Vec<RealMonomial>> = (0..faces.len()).map(|p| component_monomials(&faces, j, p)).collect();
        let ranks: Vec<usize> = (0..pieces.len())
            .map(|p| match pieces.get(p + 1) {
                Some(next) => matrix_between(k, &pieces[p], next).rank(),
                None => 0,
            })
            .collect();
        for p in 0..pieces.len() {
            let incoming = if p == 0 { 0 } else { ranks[p - 1] };
            let h = pieces[p].len() - ranks[p] - incoming;
            if h > 0 {
                if out.len() <= p {
                    out.resize(p + 1, 0);
                }
                out[p] += h;
            }
        }
    }
    Ok(out)
}

/// Number of linearly independent classes among the given cocycles, all in
/// support `J` and degree `p` of `r(K)`.
pub fn independent_classes(k: &SimplicialComplex, j: VertexSet, p: usize, cocycles: &[RealCochain]) -> Result<usize> {
    let faces = k.faces_within(j);
    let here = component_monomials(&faces, j, p);
    let index: std::collections::HashMap<RealMonomial, usize> = here.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut columns: Vec<SparseVec<Rational>> = match p.checked_sub(1) {
        Some(q) => matrix_between(k, &component_monomials(&faces, j, q), &here).columns().to_vec(),
        None => Vec::new(),
    };
    let boundary_rank = ColumnEchelon::new(&SparseMatrix::from_columns(here.len(), columns.clone())).rank();
    for c in cocycles {
        if !real_differential(c).is_zero() {
            return Err(Error::NotACocycle);
        }
        let mut entries = Vec::new();
        for (mono, x) in c.terms() {
            let &i = index.get(mono).ok_or(Error::NotHomogeneous)?;
            entries.push((i, x.clone()));
        }
        columns.push(SparseVec::from_entries(entries));
    }
    Ok(ColumnEchelon::new(&SparseMatrix::from_columns(here.len(), columns)).rank() - boundary_rank)
}

/// The DGA map `R(K) → r(K(2,...,2))` with `u_i ↦ u_{i2} t_{i1}` and
/// `v_i ↦ u_{i1} u_{i2}`, where `i1 = 2i-1` and `i2 = 2i`.
pub fn doubling_image(c: &KoszulCochain, target: &Arc<SimplicialComplex>) -> Result<RealCochain> {
    let m = c.ambient().m();
    if target.m() != 2 * m {
        return Err(Error::LengthMismatch { expected: 2 * m, got: target.m() });
    }
    let mut out = RealCochain::zero(target);
    for (mono, coeff) in c.terms() {
        let image = doubling_monomial(*mono, target)?;
        out = out.add(&image.scale(coeff))?;
    }
    Ok(out)
}

fn doubling_monomial(mono: KoszulMonomial, target: &Arc<SimplicialComplex>) -> Result<RealCochain> {
    let mut acc = RealCochain::from_terms(target, [(RealMonomial::ONE, Rational::one())])?;
    for i in mono.sigma {
        let gen = RealMonomial { sigma: VertexSet::singleton(2 * i), tau: VertexSet::singleton(2 * i - 1) };
        acc = real_multiply(&acc, &RealCochain::from_terms(target, [(gen, Rational::one())])?)?;
    }
    for i in mono.tau {
        let pair = VertexSet::singleton(2 * i - 1).with(2 * i);
        if !target.is_face(pair) {
            return Ok(RealCochain::zero(target));
        }
        let gen = RealMonomial { sigma: pair, tau: VertexSet::EMPTY };
        acc = real_multiply(&acc, &RealCochain::from_terms(target, [(gen, Rational::one())])?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::polygon_nerve;
    use crate::hochster::bigraded_betti_table;
    use crate::koszul::{differential, multiply, KoszulAlgebra};
    use crate::multiwedge::{j_construction, WedgeVector};

    fn complex(m: usize, mf: &[&[usize]]) -> Arc<SimplicialComplex> {
        let lists: Vec<Vec<usize>> = mf.iter().map(|s| s.to_vec()).collect();
        Arc::new(SimplicialComplex::from_nonface_lists(m, &lists).unwrap())
    }

    #[derive(Clone, Copy, Debug)]
    enum Letter {
        U(usize),
        T(usize),
    }

    fn letter(k: &Arc<SimplicialComplex>, l: Letter) -> RealCochain {
        match l {
            Letter::U(i) => RealCochain::monomial(k, &[i], &[]).unwrap(),
            Letter::T(i) => RealCochain::monomial(k, &[], &[i]).unwrap(),
        }
    }

    /// Direct reading of a word: zero on a repeated `u`, a `t_i` left of `u_i`,
    /// or a non-face; otherwise the sign of sorting the `u`'s.
    fn read_word(k: &Arc<SimplicialComplex>, word: &[Letter]) -> RealCochain {
        let mut us: Vec<usize> = Vec::new();
        let mut ts = VertexSet::EMPTY;
        for &l in word {
            match l {
                Letter::U(i) => {
                    if us.contains(&i) || ts.contains(i) {
                        return RealCochain::zero(k);
                    }
                    us.push(i);
                }
                Letter::T(i) => ts.insert(i),
            }
        }
        let sigma: VertexSet = us.iter().copied().collect();
        if !k.is_face(sigma) {
            return RealCochain::zero(k);
        }
        let inversions = (0..us.len()).flat_map(|a| (a + 1..us.len()).map(move |b| (a, b))).filter(|&(a, b)| us[a] > us[b]).count();
        let coeff = if inversions % 2 == 1 { -Rational::one() } else { Rational::one() };
        RealCochain::from_terms(k, [(RealMonomial { sigma, tau: ts.difference(sigma) }, coeff)]).unwrap()
    }

    #[test]
    fn relations() {
        let k = complex(2, &[]);
        let (u1, t1) = (letter(&k, Letter::U(1)), letter(&k, Letter::T(1)));
        assert_eq!(real_multiply(&u1, &t1).unwrap(), u1);
        assert!(real_multiply(&t1, &u1).unwrap().is_zero());
        assert_eq!(real_multiply(&t1, &t1).unwrap(), t1);
        let u2 = letter(&k, Letter::U(2));
        let t2 = letter(&k, Letter::T(2));
        assert_eq!(real_multiply(&u1, &t2).unwrap(), real_multiply(&t2, &u1).unwrap());
        assert_eq!(real_multiply(&u2, &u1).unwrap(), real_multiply(&u1, &u2).unwrap().scale(&-Rational::one()));
    }

    #[test]
    fn differential_examples() {
        let k = complex(2, &[]);
        assert_eq!(real_differential(&letter(&k, Letter::T(1))), letter(&k, Letter::U(1)));
        let d = real_differential(&RealCochain::monomial(&k, &[1], &[2]).unwrap());
        assert_eq!(d, RealCochain::monomial(&k, &[1, 2], &[]).unwrap().scale(&-Rational::one()));
        let d = real_differential(&RealCochain::monomial(&k, &[], &[1, 2]).unwrap());
        let expect = RealCochain::monomial(&k, &[1], &[2]).unwrap().add(&RealCochain::monomial(&k, &[2], &[1]).unwrap()).unwrap();
        assert_eq!(d, expect);
        let s0 = complex(2, &[&[1, 2]]);
        assert!(real_differential(&RealCochain::monomial(&s0, &[1], &[2]).unwrap()).is_zero());
    }

    #[test]
    fn words_are_confluent() {
        for k in [complex(3, &[]), complex(3, &[&[1, 2]]), complex(3, &[&[1, 3], &[2, 3]])] {
            let letters: Vec<Letter> = (1..=3).flat_map(|i| [Letter::U(i), Letter::T(i)]).collect();
            for a in &letters {
                for b in &letters {
                    let ab = real_multiply(&letter(&k, *a), &letter(&k, *b)).unwrap();
                    assert_eq!(ab, read_word(&k, &[*a, *b]));
                    for c in &letters {
                        let left = real_multiply(&ab, &letter(&k, *c)).unwrap();
                        let bc = real_multiply(&letter(&k, *b), &letter(&k, *c)).unwrap();
                        let right = real_multiply(&letter(&k, *a), &bc).unwrap();
                        assert_eq!(left, right, "{a:?}{b:?}{c:?}");
                        assert_eq!(left, read_word(&k, &[*a, *b, *c]));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(real_cohomology_ranks(&complex(2, &[&[1, 2]])).unwrap(), vec![1, 1]);
        assert_eq!(real_cohomology_ranks(&complex(2, &[])).unwrap(), vec![1]);
        assert_eq!(real_cohomology_ranks(&polygon_nerve(4).unwrap()).unwrap(), vec![1, 2, 1]);
        for m in 4..=7 {
            let k = polygon_nerve(m).unwrap();
            assert_eq!(real_cohomology_ranks(&k).unwrap(), bigraded_betti_table(&k).unwrap().rk_poincare);
        }
        assert!(real_cohomology_ranks_with(&polygon_nerve(6).unwrap(), 5).unwrap_err().is_capacity());
    }

    #[test]
    fn doubling_is_a_multiplicative_chain_map() {
        let k = complex(4, &[&[1, 3], &[2, 4], &[1, 4]]);
        let alg = KoszulAlgebra::from_arc(Arc::clone(&k));
        let doubled = Arc::new(j_construction(&k, &WedgeVector::new(vec![2; 4]).unwrap()).unwrap());
        let mut monomials = Vec::new();
        for j in k.vertices().all_subsets() {
            for degree in j.len()..=2 * j.len() {
                monomials.extend(alg.component(j, degree).unwrap().monomials.clone());
            }
        }
        let as_cochain = |m: KoszulMonomial| KoszulCochain::from_terms(&k, [(m, Rational::one())]).unwrap();
        for &a in &monomials {
            let ca = as_cochain(a);
            let phi_a = doubling_image(&ca, &doubled).unwrap();
            assert_eq!(real_differential(&phi_a), doubling_image(&differential(&ca), &doubled).unwrap(), "{a}");
            for &b in monomials.iter().step_by(3) {
                let cb = as_cochain(b);
                let lhs = doubling_image(&multiply(&ca, &cb).unwrap(), &doubled).unwrap();
                let rhs = real_multiply(&phi_a, &doubling_image(&cb, &doubled).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{a} * {b}");
            }
        }
    }

    #[test]
    fn doubling_is_injective_on_cohomology() {
        let k = Arc::new(polygon_nerve(5).unwrap());
        let alg = KoszulAlgebra::from_arc(Arc::clone(&k));
        let wedge = WedgeVector::new(vec![2; 5]).unwrap();
        let doubled = Arc::new(j_construction(&k, &wedge).unwrap());
        assert_eq!(real_cohomology_ranks(&doubled).unwrap(), alg.total_ranks().unwrap());
        for j in k.vertices().all_subsets() {
            for degree in j.len()..=2 * j.len() {
                let basis = alg.cohomology_basis(j, degree).unwrap();
                if basis.is_empty() {
                    continue;
                }
                let images: Vec<RealCochain> = basis.iter().map(|c| doubling_image(c, &doubled).unwrap()).collect();
                let n = independent_classes(&doubled, wedge.inflate(j), degree, &images).unwrap();
                assert_eq!(n, basis.len());
            }
        }
    }
}
