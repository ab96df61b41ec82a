//! The finite Koszul model `R(K) = Λ[u] ⊗ 𝕜[K] / (v_i² = u_i v_i = 0)` of the
//! cellular cochains of `Z_K`.
//!
//! A basis monomial `u_σ v_τ` has `σ ∩ τ = ∅` and `τ ∈ K`; it sits in total
//! degree `|σ| + 2|τ|` and multidegree `σ ∪ τ`. The differential preserves the
//! multidegree, so all linear algebra happens inside a single component
//! `(J, D)`, which is isomorphic to the cochains `C̃^{D-|J|-1}(K_J)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{ColumnEchelon, Rational, SparseMatrix, SparseVec};
use crate::vertex_set::VertexSet;

/// `u_σ v_τ`. Ordered lexicographically by `(σ, τ)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct KoszulMonomial {
    pub sigma: VertexSet,
    pub tau: VertexSet,
}

impl KoszulMonomial {
    pub const ONE: KoszulMonomial = KoszulMonomial { sigma: VertexSet::EMPTY, tau: VertexSet::EMPTY };

    pub fn new(sigma: VertexSet, tau: VertexSet) -> Self {
        debug_assert!(sigma.is_disjoint(tau));
        KoszulMonomial { sigma, tau }
    }

    pub fn degree(self) -> usize {
        self.sigma.len() + 2 * self.tau.len()
    }

    pub fn multidegree(self) -> VertexSet {
        self.sigma.union(self.tau)
    }

    /// `(-|σ|, 2|σ| + 2|τ|)`.
    pub fn bidegree(self) -> (i64, i64) {
        let s = self.sigma.len() as i64;
        (-s, 2 * s + 2 * self.tau.len() as i64)
    }

    fn check(self, k: &SimplicialComplex) -> Result<()> {
        let support = self.multidegree();
        if !support.is_subset(k.vertices()) {
            let vertex = support.difference(k.vertices()).min_vertex().unwrap_or(0);
            return Err(Error::OutOfRange { vertex, m: k.m() });
        }
        if !self.sigma.is_disjoint(self.tau) {
            return Err(Error::invalid(format!("u and v parts of {self} overlap")));
        }
        if !k.is_face(self.tau) {
            return Err(Error::invalid(format!("v-part {} of {self} is not a face", self.tau)));
        }
        Ok(())
    }
}

impl fmt::Display for KoszulMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sigma.is_empty() && self.tau.is_empty() {
            return write!(f, "1");
        }
        for v in self.sigma {
            write!(f, "u{v}")?;
        }
        for v in self.tau {
            write!(f, "v{v}")?;
        }
        Ok(())
    }
}

/// Sign of the shuffle that sorts the concatenation `a, b` of two disjoint sets.
pub(crate) fn shuffle_sign(a: VertexSet, b: VertexSet) -> bool {
    let inversions: usize = b.iter().map(|x| a.len() - a.count_below(x)).sum();
    inversions % 2 == 1
}

fn signed(negative: bool, x: Rational) -> Rational {
    if negative {
        -x
    } else {
        x
    }
}

/// A rational combination of basis monomials of `R(K)`.
#[derive(Clone, Debug)]
pub struct KoszulCochain {
    ambient: Arc<SimplicialComplex>,
    terms: BTreeMap<KoszulMonomial, Rational>,
}

impl PartialEq for KoszulCochain {
    fn eq(&self, other: &Self) -> bool {
        same_ambient(&self.ambient, &other.ambient) && self.terms == other.terms
    }
}

fn same_ambient(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl KoszulCochain {
    pub fn zero(ambient: &Arc<SimplicialComplex>) -> Self {
        KoszulCochain { ambient: Arc::clone(ambient), terms: BTreeMap::new() }
    }

    pub fn from_terms(
        ambient: &Arc<SimplicialComplex>,
        terms: impl IntoIterator<Item = (KoszulMonomial, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ambient);
        for (mono, coeff) in terms {
            mono.check(ambient)?;
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    /// `u_σ v_τ` with coefficient one.
    pub fn monomial(ambient: &Arc<SimplicialComplex>, sigma: &[usize], tau: &[usize]) -> Result<Self> {
        let m = ambient.m();
        let mono = KoszulMonomial { sigma: VertexSet::from_checked(sigma, m)?, tau: VertexSet::from_checked(tau, m)? };
        Self::from_terms(ambient, [(mono, Rational::one())])
    }

    fn add_term(&mut self, mono: KoszulMonomial, coeff: Rational) {
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

    pub fn terms(&self) -> &BTreeMap<KoszulMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn ensure_same(&self, other: &KoszulCochain) -> Result<()> {
        if same_ambient(&self.ambient, &other.ambient) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn add(&self, other: &KoszulCochain) -> Result<KoszulCochain> {
        self.ensure_same(other)?;
        let mut out = self.clone();
        for (&mono, coeff) in &other.terms {
            out.add_term(mono, coeff.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KoszulCochain) -> Result<KoszulCochain> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &Rational) -> KoszulCochain {
        let mut out = Self::zero(&self.ambient);
        for (&mono, coeff) in &self.terms {
            out.add_term(mono, coeff * factor);
        }
        out
    }

    pub fn neg(&self) -> KoszulCochain {
        self.scale(&-Rational::one())
    }

    /// `c̄ = (-1)^{deg c} c`, applied termwise.
    pub fn bar(&self) -> KoszulCochain {
        let terms = self.terms.iter().map(|(&m, c)| (m, signed(m.degree() % 2 == 1, c.clone()))).collect();
        KoszulCochain { ambient: Arc::clone(&self.ambient), terms }
    }

    /// `(multidegree, total degree)` shared by all terms, if any.
    pub fn component(&self) -> Option<(VertexSet, usize)> {
        let mut keys = self.terms.keys().map(|m| (m.multidegree(), m.degree()));
        let first = keys.next()?;
        keys.all(|k| k == first).then_some(first)
    }

    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for KoszulCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff < &Rational::zero();
            let abs = if negative { -coeff } else { coeff.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson {
    u: Vec<usize>,
    v: Vec<usize>,
    coefficient: String,
}

impl Serialize for KoszulCochain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (mono, coeff) in &self.terms {
            seq.serialize_element(&TermJson { u: mono.sigma.to_vec(), v: mono.tau.to_vec(), coefficient: coeff.to_string() })?;
        }
        seq.end()
    }
}

fn differential_terms(k: &SimplicialComplex, mono: KoszulMonomial) -> impl Iterator<Item = (KoszulMonomial, bool)> + '_ {
    mono.sigma.iter().enumerate().filter_map(move |(pos, i)| {
        let tau = mono.tau.with(i);
        k.is_face(tau).then(|| (KoszulMonomial { sigma: mono.sigma.without(i), tau }, pos % 2 == 1))
    })
}

/// `d(u_σ v_τ) = Σ_{i∈σ} (-1)^{pos(i,σ)-1} u_{σ∖i} v_{τ∪i}`, extended linearly.
pub fn differential(c: &KoszulCochain) -> KoszulCochain {
    let mut out = KoszulCochain::zero(&c.ambient);
    for (&mono, coeff) in &c.terms {
        for (target, negative) in differential_terms(&c.ambient, mono) {
            out.add_term(target, signed(negative, coeff.clone()));
        }
    }
    out
}

/// Product of two monomials, `None` when it vanishes in `R(K)`.
pub fn multiply_monomials(k: &SimplicialComplex, a: KoszulMonomial, b: KoszulMonomial) -> Option<(KoszulMonomial, bool)> {
    if !a.multidegree().is_disjoint(b.multidegree()) {
        return None;
    }
    let tau = a.tau.union(b.tau);
    if !k.is_face(tau) {
        return None;
    }
    Some((KoszulMonomial { sigma: a.sigma.union(b.sigma), tau }, shuffle_sign(a.sigma, b.sigma)))
}

pub fn multiply(a: &KoszulCochain, b: &KoszulCochain) -> Result<KoszulCochain> {
    a.ensure_same(b)?;
    let mut out = KoszulCochain::zero(&a.ambient);
    for (&ma, ca) in &a.terms {
        for (&mb, cb) in &b.terms {
            if let Some((mono, negative)) = multiply_monomials(&a.ambient, ma, mb) {
                out.add_term(mono, signed(negative, ca * cb));
            }
        }
    }
    Ok(out)
}

/// Basis monomials of component `(J, D)` in `(σ, τ)` order.
fn component_monomials(k: &SimplicialComplex, faces_by_size: &[Vec<VertexSet>], j: VertexSet, degree: usize) -> Vec<KoszulMonomial> {
    let Some(t) = degree.checked_sub(j.len()) else { return Vec::new() };
    let mut out: Vec<KoszulMonomial> = faces_by_size
        .get(t)
        .map(|faces| faces.iter().map(|&tau| KoszulMonomial { sigma: j.difference(tau), tau }).collect())
        .unwrap_or_default();
    debug_assert!(out.iter().all(|m| k.is_face(m.tau)));
    out.sort();
    out
}

fn matrix_between(k: &SimplicialComplex, sources: &[KoszulMonomial], targets: &[KoszulMonomial]) -> SparseMatrix<Rational> {
    let index: HashMap<KoszulMonomial, usize> = targets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let columns = sources
        .iter()
        .map(|&mono| {
            SparseVec::from_entries(
                differential_terms(k, mono)
                    .map(|(t, negative)| (index[&t], signed(negative, Rational::one())))
                    .collect(),
            )
        })
        .collect();
    SparseMatrix::from_columns(targets.len(), columns)
}

/// One `(multidegree, total degree)` component of `R(K)` with its cohomology.
pub struct ComponentBasis {
    pub multidegree: VertexSet,
    pub degree: usize,
    pub monomials: Vec<KoszulMonomial>,
    index: HashMap<KoszulMonomial, usize>,
    /// `d` out of this component, rows indexed by the next component.
    pub differential: SparseMatrix<Rational>,
    incoming: ColumnEchelon<Rational>,
    previous: Vec<KoszulMonomial>,
    pub cocycle_basis: Vec<SparseVec<Rational>>,
    pub coboundary_basis: Vec<SparseVec<Rational>>,
    /// Cocycles whose classes form the cohomology basis.
    pub representatives: Vec<SparseVec<Rational>>,
    reducer: ColumnEchelon<Rational>,
}

impl fmt::Debug for ComponentBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComponentBasis")
            .field("multidegree", &self.multidegree)
            .field("degree", &self.degree)
            .field("monomials", &self.monomials.len())
            .field("cohomology_dim", &self.cohomology_dim())
            .finish()
    }
}

impl ComponentBasis {
    fn build(k: &SimplicialComplex, j: VertexSet, degree: usize) -> Self {
        let faces = k.faces_within(j);
        let monomials = component_monomials(k, &faces, j, degree);
        let next = component_monomials(k, &faces, j, degree + 1);
        let previous = match degree.checked_sub(1) {
            Some(d) => component_monomials(k, &faces, j, d),
            None => Vec::new(),
        };
        let differential = matrix_between(k, &monomials, &next);
        let incoming_matrix = matrix_between(k, &previous, &monomials);
        let incoming = ColumnEchelon::new(&incoming_matrix);
        let coboundary_basis: Vec<SparseVec<Rational>> =
            incoming.pivot_columns().iter().map(|&c| incoming_matrix.column(c).clone()).collect();
        let cocycle_basis = ColumnEchelon::new(&differential).nullspace().to_vec();
        let mut columns = coboundary_basis.clone();
        columns.extend(cocycle_basis.iter().cloned());
        let reducer = ColumnEchelon::new(&SparseMatrix::from_columns(monomials.len(), columns));
        let representatives = reducer
            .pivot_columns()
            .iter()
            .filter(|&&c| c >= coboundary_basis.len())
            .map(|&c| cocycle_basis[c - coboundary_basis.len()].clone())
            .collect();
        let index = monomials.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        ComponentBasis {
            multidegree: j,
            degree,
            monomials,
            index,
            differential,
            incoming,
            previous,
            cocycle_basis,
            coboundary_basis,
            representatives,
            reducer,
        }
    }

    pub fn cohomology_dim(&self) -> usize {
        self.representatives.len()
    }

    /// Homological degree `i = |σ|` of every monomial here.
    pub fn homological_degree(&self) -> i64 {
        2 * self.multidegree.len() as i64 - self.degree as i64
    }

    pub fn to_vector(&self, c: &KoszulCochain) -> Result<SparseVec<Rational>> {
        let mut entries = Vec::with_capacity(c.terms.len());
        for (mono, coeff) in &c.terms {
            match self.index.get(mono) {
                Some(&i) => entries.push((i, coeff.clone())),
                None => {
                    return Err(Error::NotHomogeneous);
                }
            }
        }
        Ok(SparseVec::from_entries(entries))
    }

    pub fn to_cochain(&self, ambient: &Arc<SimplicialComplex>, v: &SparseVec<Rational>) -> KoszulCochain {
        let terms = v.iter().map(|(i, x)| (self.monomials[i], x.clone())).collect();
        KoszulCochain { ambient: Arc::clone(ambient), terms }
    }

    fn coordinates(&self, v: &SparseVec<Rational>) -> Result<Vec<Rational>> {
        if !self.differential.mul_vec(v).is_zero() {
            return Err(Error::NotACocycle);
        }
        let x = self.reducer.solve(v).expect("cocycles lie in the span of the reducer columns");
        let offset = self.coboundary_basis.len();
        let mut coords = vec![Rational::zero(); self.representatives.len()];
        let rep_columns = self.reducer.pivot_columns().iter().filter(|&&c| c >= offset);
        for (slot, &col) in rep_columns.enumerate() {
            if let Some(value) = x.get(col) {
                coords[slot] = value.clone();
            }
        }
        Ok(coords)
    }
}

/// Class coordinates of a homogeneous cocycle in its component's basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassCoordinates {
    pub multidegree: VertexSet,
    pub degree: usize,
    #[serde(serialize_with = "serialize_rationals")]
    pub coordinates: Vec<Rational>,
}

pub(crate) fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }

    /// Whether `self` and `other` span the same line (both nonzero) or are both zero.
    pub fn proportional(&self, other: &ClassCoordinates) -> bool {
        if (self.multidegree, self.degree) != (other.multidegree, other.degree) {
            return self.is_zero() && other.is_zero();
        }
        let pivot = self.coordinates.iter().zip(&other.coordinates).find(|(a, _)| !a.is_zero());
        match pivot {
            None => other.is_zero(),
            Some((a, b)) => {
                if b.is_zero() {
                    return false;
                }
                let ratio = b / a;
                self.coordinates.iter().zip(&other.coordinates).all(|(x, y)| &(x * &ratio) == y)
            }
        }
    }
}

/// `R(K)` with a component cache.
pub struct KoszulAlgebra {
    ambient: Arc<SimplicialComplex>,
    memo: RwLock<HashMap<(VertexSet, usize), Arc<ComponentBasis>>>,
}

impl KoszulAlgebra {
    pub fn new(k: SimplicialComplex) -> Self {
        Self::from_arc(Arc::new(k))
    }

    pub fn from_arc(ambient: Arc<SimplicialComplex>) -> Self {
        KoszulAlgebra { ambient, memo: RwLock::new(HashMap::new()) }
    }

    pub fn ambient(&self) -> &Arc<SimplicialComplex> {
        &self.ambient
    }

    pub fn component(&self, j: VertexSet, degree: usize) -> Result<Arc<ComponentBasis>> {
        if !j.is_subset(self.ambient.vertices()) {
            let vertex = j.difference(self.ambient.vertices()).min_vertex().unwrap_or(0);
            return Err(Error::OutOfRange { vertex, m: self.ambient.m() });
        }
        if let Some(found) = self.memo.read().expect("memo lock").get(&(j, degree)) {
            return Ok(Arc::clone(found));
        }
        let built = Arc::new(ComponentBasis::build(&self.ambient, j, degree));
        let mut memo = self.memo.write().expect("memo lock");
        Ok(Arc::clone(memo.entry((j, degree)).or_insert(built)))
    }

    pub fn monomial(&self, sigma: &[usize], tau: &[usize]) -> Result<KoszulCochain> {
        KoszulCochain::monomial(&self.ambient, sigma, tau)
    }

    pub fn zero(&self) -> KoszulCochain {
        KoszulCochain::zero(&self.ambient)
    }

    fn check_ambient(&self, c: &KoszulCochain) -> Result<()> {
        if same_ambient(&self.ambient, &c.ambient) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// Class coordinates of `c`, a homogeneous cocycle, read off its own component.
    pub fn cohomology_class(&self, c: &KoszulCochain) -> Result<ClassCoordinates> {
        let (j, degree) = c.component().ok_or(Error::NotHomogeneous)?;
        self.cohomology_class_in(c, j, degree)
    }

    /// As [`KoszulAlgebra::cohomology_class`], for a cochain that may be zero.
    pub fn cohomology_class_in(&self, c: &KoszulCochain, j: VertexSet, degree: usize) -> Result<ClassCoordinates> {
        self.check_ambient(c)?;
        let comp = self.component(j, degree)?;
        let coordinates = comp.coordinates(&comp.to_vector(c)?)?;
        Ok(ClassCoordinates { multidegree: j, degree, coordinates })
    }

    /// Cocycles whose classes form the basis of `H` in component `(J, D)`.
    pub fn cohomology_basis(&self, j: VertexSet, degree: usize) -> Result<Vec<KoszulCochain>> {
        let comp = self.component(j, degree)?;
        Ok(comp.representatives.iter().map(|v| comp.to_cochain(&self.ambient, v)).collect())
    }

    /// Deterministic `x` in component `(J, D-1)` with `dx = target`, if one exists.
    pub fn solve_coboundary(&self, target: &KoszulCochain, j: VertexSet, degree: usize) -> Result<Option<KoszulCochain>> {
        self.check_ambient(target)?;
        let comp = self.component(j, degree)?;
        let b = comp.to_vector(target)?;
        Ok(comp.incoming.solve(&b).map(|x| {
            let terms = x.iter().map(|(i, v)| (comp.previous[i], v.clone())).collect();
            KoszulCochain { ambient: Arc::clone(&self.ambient), terms }
        }))
    }

    /// Cocycles spanning the kernel of `d` on component `(J, D)`.
    pub fn cocycles(&self, j: VertexSet, degree: usize) -> Result<Vec<KoszulCochain>> {
        let comp = self.component(j, degree)?;
        Ok(comp.cocycle_basis.iter().map(|v| comp.to_cochain(&self.ambient, v)).collect())
    }

    /// `(i, |J|) -> dim H^{-i,2J}` summed over `|J|`, from the DGA itself.
    pub fn bigraded_ranks(&self) -> Result<BTreeMap<(usize, usize), usize>> {
        let mut out = BTreeMap::new();
        for j in self.ambient.vertices().all_subsets() {
            for degree in j.len()..=2 * j.len() {
                let dim = self.component(j, degree)?.cohomology_dim();
                if dim > 0 {
                    *out.entry((2 * j.len() - degree, j.len())).or_insert(0) += dim;
                }
            }
        }
        Ok(out)
    }

    /// Betti numbers of `Z_K` from the DGA, indexed by total degree.
    pub fn total_ranks(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for ((i, j), rank) in self.bigraded_ranks()? {
            let degree = 2 * j - i;
            if out.len() <= degree {
                out.resize(degree + 1, 0);
            }
            out[degree] += rank;
        }
        Ok(out)
    }
}
