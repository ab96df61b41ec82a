//! Higher Massey products in `H[R(K), d]`: defining systems, values,
//! strictness certification, triple-product value sets and witness search.
//!
//! Classes are `α_j ∈ H̃^{d(j)}(K_{I_j})` on pairwise disjoint supports, sitting
//! in total degree `m(j) = d(j) + |I_j| + 1`. A defining system has cells
//! `c_{i,j}` (`1 ≤ i < j ≤ k+1`, `j - i < k`) with `c_{i,i+1} = a_i` and
//! `d c_{i,j} = Σ_{p=i+1}^{j-1} c̄_{i,p} c_{p,j}`; cell `(i,j)` lives in the
//! component with support `I_i ∪ ... ∪ I_{j-1}`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::reduced_cohomology_within;
use crate::koszul::{differential, multiply, ClassCoordinates, KoszulAlgebra, KoszulCochain};
use crate::linalg::{rat, Rational, SparseMatrix, SparseVec};
use crate::multiwedge::WedgeVector;
use crate::families::truncation_complex;
use crate::multiwedge::j_construction;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub struct MasseyClass {
    pub support: VertexSet,
    /// `d(j)`: the class lives in `H̃^{d(j)}(K_{I_j})`.
    pub reduced_degree: usize,
    pub representative: KoszulCochain,
}

impl MasseyClass {
    /// `m(j) = d(j) + |I_j| + 1`.
    pub fn total_degree(&self) -> usize {
        self.reduced_degree + self.support.len() + 1
    }
}

#[derive(Clone, Debug)]
pub struct MasseyInput {
    classes: Vec<MasseyClass>,
}

impl MasseyInput {
    pub fn new(alg: &KoszulAlgebra, classes: Vec<MasseyClass>) -> Result<Self> {
        if classes.len() < 2 {
            return Err(Error::invalid("a Massey product needs at least two classes"));
        }
        let mut seen = VertexSet::EMPTY;
        for (idx, class) in classes.iter().enumerate() {
            if class.support.is_empty() {
                return Err(Error::invalid(format!("class {} has an empty support", idx + 1)));
            }
            if !class.support.is_disjoint(seen) {
                return Err(Error::invalid("supports must be pairwise disjoint"));
            }
            seen = seen.union(class.support);
            // Validates range, homogeneity and closedness in one go.
            alg.cohomology_class_in(&class.representative, class.support, class.total_degree())?;
        }
        Ok(MasseyInput { classes })
    }

    /// Uses the first cohomology basis element of each `(I_j, m(j))` component.
    pub fn from_supports(alg: &KoszulAlgebra, supports: &[VertexSet], reduced_degrees: &[usize]) -> Result<Self> {
        if supports.len() != reduced_degrees.len() {
            return Err(Error::LengthMismatch { expected: supports.len(), got: reduced_degrees.len() });
        }
        let mut classes = Vec::with_capacity(supports.len());
        for (&support, &d) in supports.iter().zip(reduced_degrees) {
            let total = d + support.len() + 1;
            let basis = alg.cohomology_basis(support, total)?;
            let representative = basis.into_iter().next().ok_or_else(|| {
                Error::invalid(format!("H̃^{d} of the subcomplex on {support} vanishes; there is no class to take"))
            })?;
            classes.push(MasseyClass { support, reduced_degree: d, representative });
        }
        Self::new(alg, classes)
    }

    pub fn classes(&self) -> &[MasseyClass] {
        &self.classes
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    /// Support of cell `(i, j)`: `I_i ∪ ... ∪ I_{j-1}`.
    pub fn cell_support(&self, i: usize, j: usize) -> VertexSet {
        self.classes[i - 1..j - 1].iter().fold(VertexSet::EMPTY, |acc, c| acc.union(c.support))
    }

    /// Degree of cell `(i, j)`: `m(i) + ... + m(j-1) - (j - i) + 1`.
    pub fn cell_degree(&self, i: usize, j: usize) -> usize {
        self.classes[i - 1..j - 1].iter().map(MasseyClass::total_degree).sum::<usize>() + 1 - (j - i)
    }

    /// `m(1) + ... + m(k) - k + 2`.
    pub fn value_degree(&self) -> usize {
        self.cell_degree(1, self.order() + 1) + 1
    }

    pub fn value_support(&self) -> VertexSet {
        self.cell_support(1, self.order() + 1)
    }

    /// `d(s, t) = d(s) + ... + d(t) + 1`, classes indexed from 1.
    pub fn joint_reduced_degree(&self, s: usize, t: usize) -> usize {
        self.classes[s - 1..t].iter().map(|c| c.reduced_degree).sum::<usize>() + 1
    }

    fn sub_input(&self, range: std::ops::Range<usize>) -> MasseyInput {
        MasseyInput { classes: self.classes[range].to_vec() }
    }
}

/// Off-corner cells of a defining system, keyed by `(i, j)`.
#[derive(Clone, Debug)]
pub struct DefiningSystem {
    order: usize,
    cells: BTreeMap<(usize, usize), KoszulCochain>,
}

impl DefiningSystem {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cell(&self, i: usize, j: usize) -> &KoszulCochain {
        &self.cells[&(i, j)]
    }

    pub fn cells(&self) -> &BTreeMap<(usize, usize), KoszulCochain> {
        &self.cells
    }

    /// Replaces one cell; used to explore other systems. Relations are not rechecked.
    pub fn set_cell(&mut self, i: usize, j: usize, c: KoszulCochain) {
        assert!(j > i + 1 && j - i < self.order, "only inner cells can be replaced");
        self.cells.insert((i, j), c);
    }

    /// `Σ_{p=i+1}^{j-1} c̄_{i,p} c_{p,j}`.
    fn cell_rhs(&self, alg: &KoszulAlgebra, i: usize, j: usize) -> Result<KoszulCochain> {
        let mut acc = alg.zero();
        for p in i + 1..j {
            acc = acc.add(&multiply(&self.cells[&(i, p)].bar(), &self.cells[&(p, j)])?)?;
        }
        Ok(acc)
    }

    /// `d c_{i,j} - Σ c̄_{i,p} c_{p,j}` for every inner cell.
    pub fn residuals(&self, alg: &KoszulAlgebra) -> Result<Vec<((usize, usize), KoszulCochain)>> {
        let mut out = Vec::new();
        for (&(i, j), c) in &self.cells {
            if j > i + 1 {
                out.push(((i, j), differential(c).sub(&self.cell_rhs(alg, i, j)?)?));
            }
        }
        Ok(out)
    }

    pub fn relations_hold(&self, alg: &KoszulAlgebra) -> Result<bool> {
        Ok(self.residuals(alg)?.iter().all(|(_, r)| r.is_zero()))
    }
}

/// A cell whose right-hand side is not a coboundary.
#[derive(Clone, Debug, Serialize)]
pub struct CellFailure {
    pub cell: (usize, usize),
    /// Class of the right-hand side, the obstruction to solving the cell.
    pub obstruction: ClassCoordinates,
}

#[derive(Clone, Debug)]
pub enum BuildOutcome {
    Built(DefiningSystem),
    Failed(CellFailure),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SystemOptions {
    /// Adds seeded random cocycles to every solved cell.
    pub perturbation_seed: Option<u64>,
}

pub fn build_defining_system(alg: &KoszulAlgebra, input: &MasseyInput) -> Result<BuildOutcome> {
    build_defining_system_with(alg, input, SystemOptions::default())
}

/// Fills cells in increasing `j - i`, each with the solution that sets every
/// free variable to zero (plus seeded cocycles when requested).
pub fn build_defining_system_with(alg: &KoszulAlgebra, input: &MasseyInput, options: SystemOptions) -> Result<BuildOutcome> {
    let k = input.order();
    let mut rng = options.perturbation_seed.map(ChaCha8Rng::seed_from_u64);
    let mut system = DefiningSystem { order: k, cells: BTreeMap::new() };
    for (idx, class) in input.classes().iter().enumerate() {
        system.cells.insert((idx + 1, idx + 2), class.representative.clone());
    }
    for width in 2..k {
        for i in 1..=k + 1 - width {
            let j = i + width;
            let support = input.cell_support(i, j);
            let degree = input.cell_degree(i, j);
            let rhs = system.cell_rhs(alg, i, j)?;
            let Some(mut solution) = alg.solve_coboundary(&rhs, support, degree + 1)? else {
                let obstruction = alg.cohomology_class_in(&rhs, support, degree + 1)?;
                return Ok(BuildOutcome::Failed(CellFailure { cell: (i, j), obstruction }));
            };
            if let Some(rng) = rng.as_mut() {
                for z in alg.cocycles(support, degree)? {
                    let coeff: i64 = rng.gen_range(-3..=3);
                    solution = solution.add(&z.scale(&rat(coeff)))?;
                }
            }
            system.cells.insert((i, j), solution);
        }
    }
    Ok(BuildOutcome::Built(system))
}

/// `a = d(corner) - Σ_{p=2}^{k} c̄_{1,p} c_{p,k+1}` and its class.
pub fn massey_value(alg: &KoszulAlgebra, input: &MasseyInput, system: &DefiningSystem) -> Result<ClassCoordinates> {
    massey_value_with_corner(alg, input, system, None)
}

pub fn massey_value_with_corner(
    alg: &KoszulAlgebra,
    input: &MasseyInput,
    system: &DefiningSystem,
    corner: Option<&KoszulCochain>,
) -> Result<ClassCoordinates> {
    let a = value_cochain(alg, input, system, corner)?;
    alg.cohomology_class_in(&a, input.value_support(), input.value_degree())
}

pub fn value_cochain(
    alg: &KoszulAlgebra,
    input: &MasseyInput,
    system: &DefiningSystem,
    corner: Option<&KoszulCochain>,
) -> Result<KoszulCochain> {
    let k = input.order();
    let mut a = system.cell_rhs(alg, 1, k + 1)?.neg();
    if let Some(c) = corner {
        a = a.add(&differential(c))?;
    }
    assert!(differential(&a).is_zero(), "Massey value cochain is not closed; defining system is inconsistent");
    Ok(a)
}

/// One `(r, s)` entry of the strictness conditions.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionEntry {
    pub r: usize,
    pub s: usize,
    pub support: VertexSet,
    /// `d(s, r+s)`.
    pub degree: usize,
    /// `rank H̃^{d(s,r+s)-1}`, condition (1) asks for zero.
    pub rank_below: usize,
    /// `rank H̃^{d(s,r+s)}`, condition (2b) asks for zero.
    pub rank_at: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionTable {
    pub entries: Vec<ConditionEntry>,
    pub condition_1: bool,
    pub condition_2b: bool,
    /// Both conditions: the product is defined and strictly defined.
    pub guarantees_strict: bool,
}

pub fn strict_conditions_check(alg: &KoszulAlgebra, input: &MasseyInput) -> Result<ConditionTable> {
    let k = input.order();
    if k < 3 {
        return Err(Error::invalid("the strictness conditions concern products of order at least 3"));
    }
    let k_ref = alg.ambient();
    let mut entries = Vec::new();
    for r in 1..=k - 2 {
        for s in 1..=k - r {
            let support = input.cell_support(s, r + s + 1);
            let degree = input.joint_reduced_degree(s, r + s);
            let profile = reduced_cohomology_within(k_ref, support);
            entries.push(ConditionEntry {
                r,
                s,
                support,
                degree,
                rank_below: profile.rank(degree as i64 - 1),
                rank_at: profile.rank(degree as i64),
            });
        }
    }
    let condition_1 = entries.iter().all(|e| e.rank_below == 0);
    let condition_2b = entries.iter().all(|e| e.rank_at == 0);
    Ok(ConditionTable { entries, condition_1, condition_2b, guarantees_strict: condition_1 && condition_2b })
}

/// Value set `representative + span(indeterminacy)` of a defined triple product,
/// computed inside the target component.
#[derive(Clone, Debug, Serialize)]
pub struct TripleValueSet {
    pub representative: ClassCoordinates,
    #[serde(serialize_with = "serialize_basis")]
    pub indeterminacy: Vec<Vec<Rational>>,
    pub target_dim: usize,
    pub contains_zero: bool,
    pub strictly_defined: bool,
    pub nontrivial: bool,
}

fn serialize_basis<S: serde::Serializer>(v: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

fn coordinates_matrix(rows: usize, vectors: &[Vec<Rational>]) -> SparseMatrix<Rational> {
    SparseMatrix::from_columns(rows, vectors.iter().map(|v| SparseVec::from_dense(v)).collect())
}

/// Independent subset of `vectors`, in order.
fn independent(rows: usize, vectors: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let echelon = crate::linalg::ColumnEchelon::new(&coordinates_matrix(rows, &vectors));
    echelon.pivot_columns().iter().map(|&c| vectors[c].clone()).collect()
}

fn in_span(rows: usize, span: &[Vec<Rational>], v: &[Rational]) -> bool {
    let base = coordinates_matrix(rows, span).rank();
    let mut with = span.to_vec();
    with.push(v.to_vec());
    coordinates_matrix(rows, &with).rank() == base
}

impl TripleValueSet {
    /// Whether `class` lies in the value set.
    pub fn contains(&self, class: &ClassCoordinates) -> bool {
        let diff: Vec<Rational> =
            class.coordinates.iter().zip(&self.representative.coordinates).map(|(a, b)| a - b).collect();
        in_span(self.target_dim, &self.indeterminacy, &diff)
    }
}

/// Value set of a triple product from an already built system.
pub fn triple_value_set_from(alg: &KoszulAlgebra, input: &MasseyInput, system: &DefiningSystem) -> Result<TripleValueSet> {
    if input.order() != 3 {
        return Err(Error::invalid("triple value sets need exactly three classes"));
    }
    let representative = massey_value(alg, input, system)?;
    let (target, degree) = (input.value_support(), input.value_degree());
    let target_dim = representative.coordinates.len();
    let a1 = &input.classes()[0].representative;
    let a3 = &input.classes()[2].representative;
    let mut generators = Vec::new();
    for z in alg.cohomology_basis(input.cell_support(2, 4), input.cell_degree(2, 4))? {
        generators.push(alg.cohomology_class_in(&multiply(a1, &z)?, target, degree)?.coordinates);
    }
    for w in alg.cohomology_basis(input.cell_support(1, 3), input.cell_degree(1, 3))? {
        generators.push(alg.cohomology_class_in(&multiply(&w, a3)?, target, degree)?.coordinates);
    }
    generators.retain(|g| g.iter().any(|x| !x.is_zero()));
    let indeterminacy = independent(target_dim, generators);
    let contains_zero = in_span(target_dim, &indeterminacy, &representative.coordinates);
    Ok(TripleValueSet {
        strictly_defined: indeterminacy.is_empty(),
        nontrivial: !contains_zero,
        contains_zero,
        indeterminacy,
        target_dim,
        representative,
    })
}

pub fn triple_value_set(alg: &KoszulAlgebra, input: &MasseyInput) -> Result<TripleValueSet> {
    match build_defining_system(alg, input)? {
        BuildOutcome::Built(system) => triple_value_set_from(alg, input, &system),
        BuildOutcome::Failed(_) => Err(Error::NotDefined),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MasseyStatus {
    DefinedStrict,
    Defined,
    DefinedUnknownStrictness,
    NotDefined,
    GreedyFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubProduct {
    pub start: usize,
    pub order: usize,
    pub status: MasseyStatus,
    pub value_zero: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MasseyReport {
    pub order: usize,
    pub supports: Vec<VertexSet>,
    pub reduced_degrees: Vec<usize>,
    pub status: MasseyStatus,
    pub value_degree: usize,
    pub value_multidegree: VertexSet,
    pub value: Option<ClassCoordinates>,
    pub value_cochain: Option<KoszulCochain>,
    /// `Some(true)` when `0` is certainly not in the product.
    pub nontrivial: Option<bool>,
    pub conditions: Option<ConditionTable>,
    pub triple: Option<TripleValueSet>,
    pub failure: Option<CellFailure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_products: Vec<SubProduct>,
}

/// Runs the full analysis: conditions, greedy system, value and status.
pub fn analyze_massey(alg: &KoszulAlgebra, input: &MasseyInput) -> Result<MasseyReport> {
    let k = input.order();
    let conditions = if k >= 3 { Some(strict_conditions_check(alg, input)?) } else { None };
    let mut report = MasseyReport {
        order: k,
        supports: input.classes().iter().map(|c| c.support).collect(),
        reduced_degrees: input.classes().iter().map(|c| c.reduced_degree).collect(),
        status: MasseyStatus::NotDefined,
        value_degree: input.value_degree(),
        value_multidegree: input.value_support(),
        value: None,
        value_cochain: None,
        nontrivial: None,
        conditions,
        triple: None,
        failure: None,
        sub_products: Vec::new(),
    };
    let system = match build_defining_system(alg, input)? {
        BuildOutcome::Built(system) => system,
        BuildOutcome::Failed(failure) => {
            report.status = if k == 3 { MasseyStatus::NotDefined } else { MasseyStatus::GreedyFailed };
            report.failure = Some(failure);
            return Ok(report);
        }
    };
    let cochain = value_cochain(alg, input, &system, None)?;
    let value = alg.cohomology_class_in(&cochain, input.value_support(), input.value_degree())?;
    report.value_cochain = Some(cochain);
    let condition_1 = report.conditions.as_ref().map(|c| c.condition_1);
    match k {
        2 => {
            report.status = MasseyStatus::DefinedStrict;
            report.nontrivial = Some(!value.is_zero());
        }
        3 => {
            let triple = triple_value_set_from(alg, input, &system)?;
            report.status = if triple.strictly_defined { MasseyStatus::DefinedStrict } else { MasseyStatus::Defined };
            report.nontrivial = Some(triple.nontrivial);
            report.triple = Some(triple);
        }
        _ => {
            if condition_1 == Some(true) {
                report.status = MasseyStatus::DefinedStrict;
                report.nontrivial = Some(!value.is_zero());
            } else {
                report.status = MasseyStatus::DefinedUnknownStrictness;
                if !value.is_zero() {
                    report.nontrivial = None;
                } else {
                    report.nontrivial = Some(false);
                }
            }
        }
    }
    report.value = Some(value);
    Ok(report)
}

/// Reports on every consecutive sub-product of orders `2..k`.
pub fn consecutive_sub_products(alg: &KoszulAlgebra, input: &MasseyInput) -> Result<Vec<SubProduct>> {
    let k = input.order();
    let mut out = Vec::new();
    for order in 2..k {
        for start in 1..=k + 1 - order {
            let sub = input.sub_input(start - 1..start - 1 + order);
            let report = analyze_massey(alg, &sub)?;
            out.push(SubProduct {
                start,
                order,
                status: report.status,
                value_zero: report.value.as_ref().map(ClassCoordinates::is_zero),
            });
        }
    }
    Ok(out)
}

/// Canonical classes `u_{j1} v_{j2} ... v_{j d_j} v_{n+j}` on `K(n)(d_1, ..., d_n, 1, ..., 1)`.
pub fn canonical_wedge_input(heads: &[usize]) -> Result<(KoszulAlgebra, MasseyInput)> {
    let n = heads.len();
    let mut entries = heads.to_vec();
    entries.extend(std::iter::repeat_n(1, n));
    let wedge = WedgeVector::new(entries)?;
    let k = j_construction(&truncation_complex(n)?, &wedge)?;
    let alg = KoszulAlgebra::new(k);
    let mut classes = Vec::with_capacity(n);
    for j in 1..=n {
        let copies = wedge.copies(j);
        let tail = wedge.copies(n + j);
        let first = copies.min_vertex().expect("positive wedge entry");
        let sigma = [first];
        let tau: Vec<usize> = copies.without(first).union(tail).to_vec();
        let representative = alg.monomial(&sigma, &tau)?;
        classes.push(MasseyClass { support: copies.union(tail), reduced_degree: heads[j - 1] - 1, representative });
    }
    let input = MasseyInput::new(&alg, classes)?;
    Ok((alg, input))
}

/// Full certification of the canonical `n`-fold product on `K(n,s)`.
pub fn verify_family_massey(n: usize, s: usize) -> Result<MasseyReport> {
    if n < 2 {
        return Err(Error::invalid("the family needs n >= 2"));
    }
    if s == 0 {
        return Err(Error::invalid("s must be positive"));
    }
    if n > FAMILY_CAPACITY {
        return Err(Error::Capacity { guard: "family Massey order", value: n, bound: FAMILY_CAPACITY });
    }
    verify_wedge_massey(&vec![s; n])
}

pub const FAMILY_CAPACITY: usize = 5;

/// As [`verify_family_massey`] for arbitrary heads `d_1, ..., d_n`.
pub fn verify_wedge_massey(heads: &[usize]) -> Result<MasseyReport> {
    let (alg, input) = canonical_wedge_input(heads)?;
    let mut report = analyze_massey(&alg, &input)?;
    report.sub_products = consecutive_sub_products(&alg, &input)?;
    Ok(report)
}

/// Which classes a search enumerates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DegreeProfile {
    /// Total degree 3: supports are two-vertex minimal non-faces.
    ThreeDimensional,
    /// Prescribed total degrees `m(1), m(2), m(3)`.
    Total([usize; 3]),
}

impl DegreeProfile {
    fn degrees(&self) -> [usize; 3] {
        match self {
            DegreeProfile::ThreeDimensional => [3, 3, 3],
            DegreeProfile::Total(d) => *d,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Only accept witnesses with zero indeterminacy.
    pub require_strict: bool,
    /// Only accept witnesses satisfying both strictness conditions.
    pub require_conditions: bool,
    /// Bound on enumerated support triples.
    pub max_candidates: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { require_strict: true, require_conditions: false, max_candidates: 50_000_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleWitness {
    pub supports: [VertexSet; 3],
    pub total_degrees: [usize; 3],
    pub reduced_degrees: [usize; 3],
    pub representatives: Vec<KoszulCochain>,
    pub value_set: TripleValueSet,
    pub conditions: ConditionTable,
}

/// Supports carrying exactly one class in total degree `degree`, lexicographic.
fn rank_one_supports(alg: &KoszulAlgebra, degree: usize, max_candidates: usize) -> Result<Vec<(VertexSet, usize)>> {
    let k = alg.ambient();
    let vertices = k.vertices();
    let mut subsets = Vec::new();
    for size in 2..degree {
        let count = binomial(k.m(), size);
        if count > max_candidates as u128 {
            return Err(Error::Capacity { guard: "support enumeration", value: count.min(usize::MAX as u128) as usize, bound: max_candidates });
        }
        subsets.extend(vertices.subsets_of_size(size));
    }
    let mut found: Vec<(VertexSet, usize)> = subsets
        .par_iter()
        .filter_map(|&s| {
            let d = degree - s.len() - 1;
            (reduced_cohomology_within(k, s).rank(d as i64) == 1).then_some((s, d))
        })
        .collect();
    found.sort();
    Ok(found)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Whether `[a] [b] = 0` for the unique classes on two disjoint supports.
fn product_vanishes(alg: &KoszulAlgebra, a: &MasseyClass, b: &MasseyClass) -> Result<bool> {
    let p = multiply(&a.representative, &b.representative)?;
    let class = alg.cohomology_class_in(&p, a.support.union(b.support), a.total_degree() + b.total_degree())?;
    Ok(class.is_zero())
}

fn unique_class(alg: &KoszulAlgebra, support: VertexSet, d: usize) -> Result<MasseyClass> {
    let representative = alg.cohomology_basis(support, d + support.len() + 1)?.remove(0);
    Ok(MasseyClass { support, reduced_degree: d, representative })
}

/// First nontrivial triple product, in lexicographic order of `(I_1, I_2, I_3)`.
pub fn search_triple_products(
    alg: &KoszulAlgebra,
    profile: &DegreeProfile,
    options: &SearchOptions,
) -> Result<Option<TripleWitness>> {
    let degrees = profile.degrees();
    let mut lists = Vec::with_capacity(3);
    for &deg in &degrees {
        let supports = rank_one_supports(alg, deg, options.max_candidates)?;
        let classes: Vec<MasseyClass> =
            supports.par_iter().map(|&(s, d)| unique_class(alg, s, d)).collect::<Result<_>>()?;
        lists.push(classes);
    }
    let pair_table = |left: &[MasseyClass], right: &[MasseyClass]| -> Result<Vec<Vec<bool>>> {
        left.par_iter()
            .map(|a| {
                right
                    .iter()
                    .map(|b| Ok(a.support.is_disjoint(b.support) && product_vanishes(alg, a, b)?))
                    .collect::<Result<Vec<bool>>>()
            })
            .collect()
    };
    let first_pair = pair_table(&lists[0], &lists[1])?;
    let second_pair = pair_table(&lists[1], &lists[2])?;
    let target_degree: i64 = degrees.iter().map(|&m| m as i64).sum::<i64>() - 1;
    let mut target_rank: HashMap<VertexSet, usize> = HashMap::new();
    let mut candidates = Vec::new();
    let mut visited = 0usize;
    for (i1, c1) in lists[0].iter().enumerate() {
        for (i2, c2) in lists[1].iter().enumerate() {
            if !first_pair[i1][i2] {
                continue;
            }
            let left = c1.support.union(c2.support);
            for (i3, c3) in lists[2].iter().enumerate() {
                visited += 1;
                if visited > options.max_candidates {
                    return Err(Error::Capacity { guard: "triple enumeration", value: visited, bound: options.max_candidates });
                }
                if !second_pair[i2][i3] || !c3.support.is_disjoint(left) {
                    continue;
                }
                let union = left.union(c3.support);
                let reduced = target_degree - union.len() as i64 - 1;
                let rank = *target_rank
                    .entry(union)
                    .or_insert_with(|| reduced_cohomology_within(alg.ambient(), union).rank(reduced));
                if rank > 0 {
                    candidates.push((i1, i2, i3));
                }
            }
        }
    }
    let accept = |&(i1, i2, i3): &(usize, usize, usize)| -> Option<Result<TripleWitness>> {
        let classes = vec![lists[0][i1].clone(), lists[1][i2].clone(), lists[2][i3].clone()];
        let run = || -> Result<Option<TripleWitness>> {
            let input = MasseyInput::new(alg, classes.clone())?;
            let value_set = match triple_value_set(alg, &input) {
                Ok(v) => v,
                Err(Error::NotDefined) => return Ok(None),
                Err(e) => return Err(e),
            };
            if !value_set.nontrivial || (options.require_strict && !value_set.strictly_defined) {
                return Ok(None);
            }
            let conditions = strict_conditions_check(alg, &input)?;
            if options.require_conditions && !conditions.guarantees_strict {
                return Ok(None);
            }
            Ok(Some(TripleWitness {
                supports: [classes[0].support, classes[1].support, classes[2].support],
                total_degrees: degrees,
                reduced_degrees: [classes[0].reduced_degree, classes[1].reduced_degree, classes[2].reduced_degree],
                representatives: classes.iter().map(|c| c.representative.clone()).collect(),
                value_set,
                conditions,
            }))
        };
        run().transpose()
    };
    candidates.par_iter().find_map_first(accept).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::polygon_nerve;

    fn hexagon_input() -> (KoszulAlgebra, MasseyInput) {
        let alg = KoszulAlgebra::new(polygon_nerve(6).unwrap());
        let classes = (1..=3)
            .map(|j| MasseyClass {
                support: VertexSet::from_iter([j, j + 3]),
                reduced_degree: 0,
                representative: alg.monomial(&[j + 3], &[j]).unwrap(),
            })
            .collect();
        let input = MasseyInput::new(&alg, classes).unwrap();
        (alg, input)
    }

    #[test]
    fn hexagon_triple_is_defined_not_strict() {
        let (alg, input) = hexagon_input();
        assert_eq!(input.value_degree(), 8);
        let BuildOutcome::Built(system) = build_defining_system(&alg, &input).unwrap() else { panic!("not built") };
        assert!(system.relations_hold(&alg).unwrap());
        assert_eq!(input.cell_support(1, 3), VertexSet::from_iter([1, 2, 4, 5]));
        assert_eq!(input.cell_support(2, 4), VertexSet::from_iter([2, 3, 5, 6]));
        let table = strict_conditions_check(&alg, &input).unwrap();
        assert!(!table.condition_1);
        let ranks: Vec<usize> = table.entries.iter().filter(|e| e.r == 1).map(|e| e.rank_below).collect();
        assert_eq!(ranks, vec![1, 1]);
        let set = triple_value_set(&alg, &input).unwrap();
        assert_eq!(set.target_dim, 1);
        assert_eq!(set.indeterminacy.len(), 1);
        assert!(set.contains_zero && !set.nontrivial && !set.strictly_defined);
        let report = analyze_massey(&alg, &input).unwrap();
        assert_eq!(report.status, MasseyStatus::Defined);
    }

    #[test]
    fn hexagon_cell_choice_moves_the_value() {
        let (alg, input) = hexagon_input();
        let BuildOutcome::Built(system) = build_defining_system(&alg, &input).unwrap() else { panic!() };
        let base = massey_value(&alg, &input, &system).unwrap();
        let w = alg.cohomology_basis(input.cell_support(1, 3), input.cell_degree(1, 3)).unwrap().remove(0);
        let mut moved = system.clone();
        moved.set_cell(1, 3, system.cell(1, 3).add(&w).unwrap());
        assert!(moved.relations_hold(&alg).unwrap());
        let other = massey_value(&alg, &input, &moved).unwrap();
        assert_ne!(base, other);
        assert!(base.is_zero() != other.is_zero() || (!base.is_zero() && !other.is_zero()));
        let set = triple_value_set(&alg, &input).unwrap();
        assert!(set.contains(&base) && set.contains(&other));
    }

    #[test]
    fn corner_changes_only_by_coboundary() {
        let (alg, input) = hexagon_input();
        let BuildOutcome::Built(system) = build_defining_system(&alg, &input).unwrap() else { panic!() };
        let base = massey_value(&alg, &input, &system).unwrap();
        let comp = alg.component(input.value_support(), input.value_degree() - 1).unwrap();
        for (i, &mono) in comp.monomials.iter().enumerate() {
            let corner = KoszulCochain::from_terms(alg.ambient(), [(mono, rat(i as i64 + 1))]).unwrap();
            assert_eq!(massey_value_with_corner(&alg, &input, &system, Some(&corner)).unwrap(), base);
        }
    }

    #[test]
    fn square_cup_product() {
        let alg = KoszulAlgebra::new(polygon_nerve(4).unwrap());
        let classes = vec![
            MasseyClass { support: VertexSet::from_iter([1, 3]), reduced_degree: 0, representative: alg.monomial(&[3], &[1]).unwrap() },
            MasseyClass { support: VertexSet::from_iter([2, 4]), reduced_degree: 0, representative: alg.monomial(&[4], &[2]).unwrap() },
        ];
        let input = MasseyInput::new(&alg, classes).unwrap();
        let report = analyze_massey(&alg, &input).unwrap();
        assert_eq!(report.status, MasseyStatus::DefinedStrict);
        assert_eq!(report.nontrivial, Some(true));
        assert_eq!(report.value_degree, 6);
    }

    #[test]
    fn family_three_one() {
        let report = verify_family_massey(3, 1).unwrap();
        assert_eq!(report.status, MasseyStatus::DefinedStrict);
        assert_eq!(report.nontrivial, Some(true));
        assert!(report.conditions.as_ref().unwrap().guarantees_strict);
        let (alg, _) = canonical_wedge_input(&[1, 1, 1]).unwrap();
        let named = alg.monomial(&[2, 3, 4, 5], &[1, 6]).unwrap();
        let named_class = alg.cohomology_class(&named).unwrap();
        assert!(report.value.as_ref().unwrap().proportional(&named_class));
        assert!(report.sub_products.iter().all(|s| s.status == MasseyStatus::DefinedStrict && s.value_zero == Some(true)));
    }

    #[test]
    fn family_three_two_degree() {
        let report = verify_family_massey(3, 2).unwrap();
        assert_eq!(report.value_degree, 3 * 5 - 3 + 2);
        assert_eq!(report.status, MasseyStatus::DefinedStrict);
        assert_eq!(report.nontrivial, Some(true));
    }

    #[test]
    fn seeded_perturbation_keeps_strict_value() {
        let (alg, input) = canonical_wedge_input(&[2, 1, 2]).unwrap();
        let BuildOutcome::Built(base) = build_defining_system(&alg, &input).unwrap() else { panic!() };
        let expect = massey_value(&alg, &input, &base).unwrap();
        for seed in 0..5 {
            let opts = SystemOptions { perturbation_seed: Some(seed) };
            let BuildOutcome::Built(sys) = build_defining_system_with(&alg, &input, opts).unwrap() else { panic!() };
            assert!(sys.relations_hold(&alg).unwrap());
            assert_eq!(massey_value(&alg, &input, &sys).unwrap(), expect);
        }
    }

    #[test]
    fn undefined_triple() {
        // On the square, [u3 v1][u4 v2] is the nonzero top class, so <a, b, a'> cannot be defined.
        let alg = KoszulAlgebra::new(crate::complex::SimplicialComplex::from_nonface_lists(6, &[vec![1, 3], vec![2, 4], vec![5, 6]]).unwrap());
        let classes = vec![
            MasseyClass { support: VertexSet::from_iter([1, 3]), reduced_degree: 0, representative: alg.monomial(&[3], &[1]).unwrap() },
            MasseyClass { support: VertexSet::from_iter([2, 4]), reduced_degree: 0, representative: alg.monomial(&[4], &[2]).unwrap() },
            MasseyClass { support: VertexSet::from_iter([5, 6]), reduced_degree: 0, representative: alg.monomial(&[6], &[5]).unwrap() },
        ];
        let input = MasseyInput::new(&alg, classes).unwrap();
        let report = analyze_massey(&alg, &input).unwrap();
        assert_eq!(report.status, MasseyStatus::NotDefined);
        assert_eq!(report.failure.unwrap().cell, (1, 3));
        assert!(matches!(triple_value_set(&alg, &input), Err(Error::NotDefined)));
    }

    #[test]
    fn input_validation() {
        let (alg, _) = hexagon_input();
        let bad = vec![
            MasseyClass { support: VertexSet::from_iter([1, 4]), reduced_degree: 0, representative: alg.monomial(&[4], &[1]).unwrap() },
            MasseyClass { support: VertexSet::from_iter([1, 5]), reduced_degree: 0, representative: alg.monomial(&[5], &[1]).unwrap() },
        ];
        assert!(MasseyInput::new(&alg, bad).is_err());
        let not_closed = vec![
            MasseyClass { support: VertexSet::from_iter([1, 2]), reduced_degree: 0, representative: alg.monomial(&[1, 2], &[]).unwrap() },
            MasseyClass { support: VertexSet::from_iter([4, 5]), reduced_degree: 0, representative: alg.monomial(&[5], &[4]).unwrap() },
        ];
        assert!(MasseyInput::new(&alg, not_closed).is_err());
        assert!(MasseyInput::from_supports(&alg, &[VertexSet::from_iter([1, 2])], &[0]).is_err());
    }

    #[test]
    fn pentagon_has_no_three_dimensional_witness() {
        let alg = KoszulAlgebra::new(polygon_nerve(5).unwrap());
        let relaxed = SearchOptions { require_strict: false, ..SearchOptions::default() };
        assert!(search_triple_products(&alg, &DegreeProfile::ThreeDimensional, &relaxed).unwrap().is_none());
    }
}
