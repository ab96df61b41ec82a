//! Exact sparse linear algebra.
//!
//! Everything here is generic over [`Scalar`], with exact rationals as the
//! working field and small prime fields available for cross-checking ranks.
//! Elimination is column-oriented: columns are inserted left to right into an
//! echelon basis, so pivot columns, particular solutions and nullspace bases
//! coincide with the ones read off a reduced row-echelon form with the same
//! column order and all free variables set to zero.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational coefficients in canonical form.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; callers guarantee `self` is nonzero.
    fn inv(&self) -> Self;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        rat(n)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Element of the prime field `Z/P`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> Scalar for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn from_i64(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u32)
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 + other.0 as u64) % P as u64) as u32)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 + P as u64 - other.0 as u64) % P as u64) as u32)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 * other.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Self {
        // Fermat: a^(P-2).
        let mut base = self.0 as u64;
        let mut exp = P - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Fp(acc as u32)
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct SparseVec<T> {
    entries: Vec<(usize, T)>,
}

impl<T: Scalar> SparseVec<T> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_entries(mut entries: Vec<(usize, T)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, T)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w = w.add(&v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(values: &[T]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<T> {
        let mut out = vec![T::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn lead(&self) -> Option<(usize, &T)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn scale(&self, factor: &T) -> Self {
        if factor.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.mul(factor))).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: &T, other: &SparseVec<T>) -> Self {
        if factor.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.mul(factor)));
                        b.next();
                    } else {
                        let s = x.add(&y.mul(factor));
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.mul(factor)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }
}

/// Sparse matrix stored by columns.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMatrix<T = Rational> {
    rows: usize,
    columns: Vec<SparseVec<T>>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![SparseVec::new(); cols] }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec<T>>) -> Self {
        debug_assert!(columns.iter().all(|c| c.iter().all(|(i, _)| i < rows)));
        SparseMatrix { rows, columns }
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut per_col: Vec<Vec<(usize, T)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            per_col[c].push((r, v));
        }
        SparseMatrix { rows, columns: per_col.into_iter().map(SparseVec::from_entries).collect() }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &SparseVec<T> {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec<T>] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.columns[c].get(r).cloned().unwrap_or_else(T::zero)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols()]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col.iter() {
                out[r][c] = v.clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &SparseVec<T>) -> SparseVec<T> {
        x.iter().fold(SparseVec::new(), |acc, (c, v)| acc.axpy(v, &self.columns[c]))
    }

    pub fn mul(&self, other: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.cols(), other.rows, "dimension mismatch in product");
        SparseMatrix {
            rows: self.rows,
            columns: other.columns.iter().map(|col| self.mul_vec(col)).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .map(|c| SparseVec::from_entries(c.iter().map(|(i, v)| (i, f(v))).collect()))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        ColumnEchelon::new(self).rank()
    }
}

struct BasisVector<T> {
    /// Reduced vector with leading coefficient 1.
    vector: SparseVec<T>,
    /// Expression of `vector` in the original columns.
    combination: SparseVec<T>,
}

/// Column-by-column echelon decomposition of a matrix.
pub struct ColumnEchelon<T> {
    rows: usize,
    cols: usize,
    basis: Vec<BasisVector<T>>,
    /// Row index of each basis vector's lead, mapped to its basis slot.
    lead_slot: Vec<Option<usize>>,
    pivot_columns: Vec<usize>,
    kernel: Vec<SparseVec<T>>,
}

impl<T: Scalar> ColumnEchelon<T> {
    pub fn new(matrix: &SparseMatrix<T>) -> Self {
        let mut this = ColumnEchelon {
            rows: matrix.rows(),
            cols: matrix.cols(),
            basis: Vec::new(),
            lead_slot: vec![None; matrix.rows()],
            pivot_columns: Vec::new(),
            kernel: Vec::new(),
        };
        for (c, col) in matrix.columns().iter().enumerate() {
            let unit = SparseVec { entries: vec![(c, T::one())] };
            let (rest, combination) = this.reduce(col.clone(), unit);
            match rest.lead() {
                None => this.kernel.push(combination),
                Some((lead_row, lead_val)) => {
                    let inv = lead_val.inv();
                    let slot = this.basis.len();
                    this.basis.push(BasisVector { vector: rest.scale(&inv), combination: combination.scale(&inv) });
                    this.lead_slot[lead_row] = Some(slot);
                    this.pivot_columns.push(c);
                }
            }
        }
        this
    }

    /// Reduces `v` against the basis, tracking `v`'s original combination.
    fn reduce(&self, mut v: SparseVec<T>, mut combination: SparseVec<T>) -> (SparseVec<T>, SparseVec<T>) {
        // Work through entries in increasing row order; eliminated rows never reappear
        // because every basis vector has no entries above its lead.
        let mut cursor = 0usize;
        loop {
            let next = v.iter().find(|(r, _)| *r >= cursor && self.lead_slot[*r].is_some()).map(|(r, x)| (r, x.clone()));
            let Some((row, coeff)) = next else { break };
            let b = &self.basis[self.lead_slot[row].expect("pivot")];
            let factor = coeff.neg();
            v = v.axpy(&factor, &b.vector);
            combination = combination.axpy(&factor, &b.combination);
            cursor = row + 1;
        }
        (v, combination)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_columns
    }

    /// Nullspace basis: one vector per non-pivot column, in column order.
    pub fn nullspace(&self) -> &[SparseVec<T>] {
        &self.kernel
    }

    /// Solves `A x = b` with every free variable zero, or `None` if inconsistent.
    pub fn solve(&self, b: &SparseVec<T>) -> Option<SparseVec<T>> {
        debug_assert!(b.iter().all(|(r, _)| r < self.rows));
        let (rest, combination) = self.reduce(b.clone(), SparseVec::new());
        rest.is_zero().then(|| combination.scale(&T::one().neg()))
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Outcome of [`solve_linear`]: a deterministic particular solution plus the
/// nullspace basis, or a marker that the system is inconsistent.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<T> {
    Solved { particular: Vec<T>, nullspace: Vec<Vec<T>> },
    NoSolution,
}

pub fn solve_linear<T: Scalar>(a: &SparseMatrix<T>, b: &[T]) -> Solution<T> {
    assert_eq!(a.rows(), b.len(), "right-hand side length must equal row count");
    let echelon = ColumnEchelon::new(a);
    match echelon.solve(&SparseVec::from_dense(b)) {
        None => Solution::NoSolution,
        Some(x) => Solution::Solved {
            particular: x.to_dense(a.cols()),
            nullspace: echelon.nullspace().iter().map(|k| k.to_dense(a.cols())).collect(),
        },
    }
}
