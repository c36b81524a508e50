//! Finitely-describable countable matrices.
//!
//! An [`FdVector`] is a countable vector given by a default value plus a
//! finite map of exceptions. An [`FdMatrix`] is a finite sum of outer products
//! `u ⊗ v` of such vectors, `u` indexed by rows and `v` by columns. The
//! representation is closed under addition, scaling, Hadamard product and the
//! scalar/row/column lifts, and entrywise maps stay finitely describable
//! because every matrix is constant on finitely many index classes.
//!
//! Index classes: a row key is *exceptional* if some `u_k` has an exception
//! there; all other rows behave identically and are represented by `None`
//! ("generic row"). Likewise for columns. Every semantic question (equality,
//! masks, finite support) reduces to evaluating the matrix on the finite set
//! of class representatives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dense::DenseMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FdError {
    #[error("operand of {0} is not a 0/1 mask")]
    NotAMask(&'static str),
    #[error("{0} requires finite support")]
    InfiniteSupport(&'static str),
}

/// Keys usable as row or column indices.
pub trait IndexKey: Ord + Clone + Debug {}
impl<T: Ord + Clone + Debug> IndexKey for T {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "K: Serialize + Ord",
    deserialize = "K: Deserialize<'de> + Ord"
))]
pub struct FdVector<K: Ord> {
    default: f64,
    #[serde(rename = "except", default = "BTreeMap::new")]
    exceptions: BTreeMap<K, f64>,
}

impl<K: IndexKey> FdVector<K> {
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(value: f64) -> Self {
        FdVector {
            default: value,
            exceptions: BTreeMap::new(),
        }
    }

    pub fn ones() -> Self {
        Self::constant(1.0)
    }

    /// Builds a vector in canonical form: exceptions equal to the default are
    /// dropped. Later duplicates overwrite earlier ones.
    pub fn new(default: f64, exceptions: impl IntoIterator<Item = (K, f64)>) -> Self {
        let exceptions = exceptions
            .into_iter()
            .collect::<BTreeMap<_, _>>()
            .into_iter()
            .filter(|(_, v)| *v != default)
            .collect();
        FdVector {
            default,
            exceptions,
        }
    }

    /// Finite-support vector with the given entries.
    pub fn sparse(entries: impl IntoIterator<Item = (K, f64)>) -> Self {
        Self::new(0.0, entries)
    }

    pub fn unit(key: K) -> Self {
        Self::sparse([(key, 1.0)])
    }

    pub fn default_value(&self) -> f64 {
        self.default
    }

    pub fn exceptions(&self) -> &BTreeMap<K, f64> {
        &self.exceptions
    }

    pub fn get(&self, key: &K) -> f64 {
        self.exceptions.get(key).copied().unwrap_or(self.default)
    }

    /// Value at a class representative; `None` is a generic index.
    pub fn get_class(&self, key: Option<&K>) -> f64 {
        key.map_or(self.default, |k| self.get(k))
    }

    pub fn is_zero(&self) -> bool {
        self.default == 0.0 && self.exceptions.is_empty()
    }

    pub fn has_finite_support(&self) -> bool {
        self.default == 0.0
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.exceptions.keys()
    }

    /// Pointwise combination.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let default = f(self.default, other.default);
        let keys: BTreeSet<&K> = self.keys().chain(other.keys()).collect();
        let exceptions = keys
            .into_iter()
            .filter_map(|k| {
                let v = f(self.get(k), other.get(k));
                (v != default).then(|| (k.clone(), v))
            })
            .collect();
        FdVector {
            default,
            exceptions,
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let default = f(self.default);
        let exceptions = self
            .exceptions
            .iter()
            .filter_map(|(k, v)| {
                let v = f(*v);
                (v != default).then(|| (k.clone(), v))
            })
            .collect();
        FdVector {
            default,
            exceptions,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|a| c * a)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn is_mask(&self) -> bool {
        let ok = |x: f64| x == 0.0 || x == 1.0;
        ok(self.default) && self.exceptions.values().all(|v| ok(*v))
    }

    /// `Σ c_k x_k` for finitely many vectors.
    pub fn lincomb<'a>(parts: impl IntoIterator<Item = (f64, &'a Self)>) -> Self
    where
        K: 'a,
    {
        parts
            .into_iter()
            .fold(Self::zero(), |acc, (c, x)| acc.add(&x.scale(c)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "K: Serialize + Ord",
    deserialize = "K: Deserialize<'de> + Ord"
))]
pub struct FdTerm<K: Ord> {
    pub u: FdVector<K>,
    pub v: FdVector<K>,
}

impl<K: IndexKey> FdTerm<K> {
    pub fn new(u: FdVector<K>, v: FdVector<K>) -> Self {
        FdTerm { u, v }
    }
}

/// Countable matrix `A[i, j] = Σ_k u_k(i) · v_k(j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "K: Serialize + Ord",
    deserialize = "K: Deserialize<'de> + Ord"
))]
pub struct FdMatrix<K: Ord> {
    terms: Vec<FdTerm<K>>,
}

impl<K: IndexKey> Default for FdMatrix<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: IndexKey> FdMatrix<K> {
    pub fn zero() -> Self {
        FdMatrix { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<FdTerm<K>>) -> Self {
        FdMatrix { terms }
    }

    pub fn outer(u: FdVector<K>, v: FdVector<K>) -> Self {
        FdMatrix {
            terms: vec![FdTerm::new(u, v)],
        }
    }

    pub fn terms(&self) -> &[FdTerm<K>] {
        &self.terms
    }

    /// Every entry equal to `x`.
    pub fn lift_scalar(x: f64) -> Self {
        Self::outer(FdVector::ones(), FdVector::constant(x))
    }

    /// Row vector over columns, repeated down every row.
    pub fn lift_row(alpha: &FdVector<K>) -> Self {
        Self::outer(FdVector::ones(), alpha.clone())
    }

    /// Column vector over rows, repeated across every column.
    pub fn lift_col(beta: &FdVector<K>) -> Self {
        Self::outer(beta.clone(), FdVector::ones())
    }

    /// Finite-support matrix from `(row, col, value)` entries. Repeated
    /// positions are summed.
    pub fn from_triplets(entries: impl IntoIterator<Item = (K, K, f64)>) -> Self {
        let mut rows: BTreeMap<K, BTreeMap<K, f64>> = BTreeMap::new();
        for (r, c, w) in entries {
            *rows.entry(r).or_default().entry(c).or_insert(0.0) += w;
        }
        let terms = rows
            .into_iter()
            .map(|(r, cols)| FdTerm::new(FdVector::unit(r), FdVector::sparse(cols)))
            .filter(|t| !t.v.is_zero())
            .collect();
        FdMatrix { terms }
    }

    pub fn value(&self, i: &K, j: &K) -> f64 {
        self.value_at(Some(i), Some(j))
    }

    /// Entry at a pair of class representatives (`None` = generic index).
    pub fn value_at(&self, i: Option<&K>, j: Option<&K>) -> f64 {
        self.terms
            .iter()
            .map(|t| t.u.get_class(i) * t.v.get_class(j))
            .sum()
    }

    pub fn row_keys(&self) -> BTreeSet<K> {
        self.terms
            .iter()
            .flat_map(|t| t.u.keys().cloned())
            .collect()
    }

    pub fn col_keys(&self) -> BTreeSet<K> {
        self.terms
            .iter()
            .flat_map(|t| t.v.keys().cloned())
            .collect()
    }

    fn row_reps(&self) -> Vec<Option<K>> {
        std::iter::once(None)
            .chain(self.row_keys().into_iter().map(Some))
            .collect()
    }

    fn col_reps(&self) -> Vec<Option<K>> {
        std::iter::once(None)
            .chain(self.col_keys().into_iter().map(Some))
            .collect()
    }

    /// Row `i` (or the generic row) as a vector over columns.
    pub fn row(&self, i: Option<&K>) -> FdVector<K> {
        FdVector::lincomb(self.terms.iter().map(|t| (t.u.get_class(i), &t.v)))
    }

    /// Column `j` (or the generic column) as a vector over rows.
    pub fn col(&self, j: Option<&K>) -> FdVector<K> {
        FdVector::lincomb(self.terms.iter().map(|t| (t.v.get_class(j), &t.u)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FdMatrix { terms }
    }

    pub fn scale(&self, c: f64) -> Self {
        FdMatrix {
            terms: self
                .terms
                .iter()
                .map(|t| FdTerm::new(t.u.clone(), t.v.scale(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Entrywise product. The term count is the product of the operands'
    /// term counts.
    pub fn hadamard(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(FdTerm::new(a.u.mul(&b.u), a.v.mul(&b.v)));
            }
        }
        FdMatrix { terms }
    }

    /// Entrywise `f`, built column class by column class so that every entry
    /// of the result is exactly `f` of the corresponding entry.
    pub fn map_entries(&self, f: impl Fn(f64) -> f64) -> Self {
        let rows = self.row_keys();
        let cols = self.col_keys();
        let row_vec = |j: Option<&K>| {
            FdVector::new(
                f(self.value_at(None, j)),
                rows.iter()
                    .map(|r| (r.clone(), f(self.value_at(Some(r), j)))),
            )
        };
        let mut terms = vec![FdTerm::new(
            row_vec(None),
            FdVector::new(1.0, cols.iter().map(|c| (c.clone(), 0.0))),
        )];
        for c in &cols {
            terms.push(FdTerm::new(row_vec(Some(c)), FdVector::unit(c.clone())));
        }
        FdMatrix { terms }.compact()
    }

    /// `Some(x)` if every entry equals `x`.
    pub fn constant_value(&self) -> Option<f64> {
        let x = self.value_at(None, None);
        let rows = self.row_reps();
        let cols = self.col_reps();
        rows.iter()
            .all(|r| {
                cols.iter()
                    .all(|c| self.value_at(r.as_ref(), c.as_ref()) == x)
            })
            .then_some(x)
    }

    /// The row vector `α` if this matrix equals `lift_row(α)`.
    pub fn as_lifted_row(&self) -> Option<FdVector<K>> {
        let alpha = self.row(None);
        let cols = self.col_reps();
        self.row_keys()
            .iter()
            .all(|r| {
                cols.iter()
                    .all(|c| self.value_at(Some(r), c.as_ref()) == alpha.get_class(c.as_ref()))
            })
            .then_some(alpha)
    }

    /// The column vector `β` if this matrix equals `lift_col(β)`.
    pub fn as_lifted_col(&self) -> Option<FdVector<K>> {
        let beta = self.col(None);
        let rows = self.row_reps();
        self.col_keys()
            .iter()
            .all(|c| {
                rows.iter()
                    .all(|r| self.value_at(r.as_ref(), Some(c)) == beta.get_class(r.as_ref()))
            })
            .then_some(beta)
    }

    pub fn is_boolean_mask(&self) -> bool {
        let rows = self.row_reps();
        let cols = self.col_reps();
        rows.iter().all(|r| {
            cols.iter().all(|c| {
                let x = self.value_at(r.as_ref(), c.as_ref());
                x == 0.0 || x == 1.0
            })
        })
    }

    /// Entrywise maximum of two 0/1 masks, `A + B - A .* B`.
    pub fn ewise_max(&self, other: &Self) -> Result<Self, FdError> {
        if !self.is_boolean_mask() || !other.is_boolean_mask() {
            return Err(FdError::NotAMask("ewise_max"));
        }
        Ok(self.add(other).sub(&self.hadamard(other)))
    }

    pub fn finite_support(&self) -> bool {
        if self.value_at(None, None) != 0.0 {
            return false;
        }
        self.row_keys()
            .iter()
            .all(|r| self.value_at(Some(r), None) == 0.0)
            && self
                .col_keys()
                .iter()
                .all(|c| self.value_at(None, Some(c)) == 0.0)
    }

    /// Exact semantic equality, checked on every pair of class
    /// representatives of both operands. NaN equals NaN.
    pub fn semantically_equal(&self, other: &Self) -> bool {
        self.compare_classes(other, |a, b| a == b || (a.is_nan() && b.is_nan()))
    }

    pub fn approx_equal(&self, other: &Self, tol: f64) -> bool {
        self.compare_classes(other, |a, b| (a - b).abs() <= tol)
    }

    fn compare_classes(&self, other: &Self, eq: impl Fn(f64, f64) -> bool) -> bool {
        let rows: Vec<Option<K>> = std::iter::once(None)
            .chain(self.row_keys().union(&other.row_keys()).cloned().map(Some))
            .collect();
        let cols: Vec<Option<K>> = std::iter::once(None)
            .chain(self.col_keys().union(&other.col_keys()).cloned().map(Some))
            .collect();
        rows.iter().all(|r| {
            cols.iter().all(|c| {
                eq(
                    self.value_at(r.as_ref(), c.as_ref()),
                    other.value_at(r.as_ref(), c.as_ref()),
                )
            })
        })
    }

    pub fn to_dense(&self, row_keys: &[K], col_keys: &[K]) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(row_keys.len(), col_keys.len());
        for (i, r) in row_keys.iter().enumerate() {
            for (j, c) in col_keys.iter().enumerate() {
                d.set(i, j, self.value(r, c));
            }
        }
        d
    }

    /// Nonzero entries, sorted by `(row, col)`.
    pub fn triplets(&self) -> Result<Vec<(K, K, f64)>, FdError> {
        if !self.finite_support() {
            return Err(FdError::InfiniteSupport("support"));
        }
        let cols = self.col_keys();
        let mut out = Vec::new();
        for r in self.row_keys() {
            for c in &cols {
                let x = self.value(&r, c);
                if x != 0.0 {
                    out.push((r.clone(), c.clone(), x));
                }
            }
        }
        Ok(out)
    }

    pub fn support(&self) -> Result<BTreeSet<(K, K)>, FdError> {
        Ok(self
            .triplets()?
            .into_iter()
            .map(|(r, c, _)| (r, c))
            .collect())
    }

    /// Replaces row `key` by `values`.
    pub fn with_row(&self, key: &K, values: &FdVector<K>) -> Self {
        let keep = FdVector::new(1.0, [(key.clone(), 0.0)]);
        let mut out = Self::lift_col(&keep).hadamard(self);
        out.terms
            .push(FdTerm::new(FdVector::unit(key.clone()), values.clone()));
        out.compact()
    }

    /// Row-canonical form: one term carrying the generic row on every row
    /// that is not listed, plus one term per row key whose row differs from
    /// the generic one. Entries keep their values and the term count is at
    /// most one more than the number of row keys.
    pub fn canonical(&self) -> Self {
        let generic = self.row(None);
        let mut listed = BTreeMap::new();
        let mut terms = Vec::new();
        for r in self.row_keys() {
            let row = self.row(Some(&r));
            if row != generic {
                listed.insert(r.clone(), 0.0);
                if !row.is_zero() {
                    terms.push(FdTerm::new(FdVector::unit(r), row));
                }
            }
        }
        if !generic.is_zero() {
            terms.insert(0, FdTerm::new(FdVector::new(1.0, listed), generic));
        }
        FdMatrix { terms }
    }

    /// Drops zero terms and merges terms that share an identical `u` or `v`
    /// factor. Semantics are preserved up to floating-point rounding of the
    /// merged factors.
    pub fn compact(&self) -> Self {
        let mut terms: Vec<FdTerm<K>> = Vec::with_capacity(self.terms.len());
        'next: for t in &self.terms {
            if t.u.is_zero() || t.v.is_zero() {
                continue;
            }
            for existing in terms.iter_mut() {
                if existing.u == t.u {
                    existing.v = existing.v.add(&t.v);
                    continue 'next;
                }
                if existing.v == t.v {
                    existing.u = existing.u.add(&t.u);
                    continue 'next;
                }
            }
            terms.push(t.clone());
        }
        terms.retain(|t| !t.u.is_zero() && !t.v.is_zero());
        FdMatrix { terms }
    }
}

pub fn fd_value<K: IndexKey>(a: &FdMatrix<K>, i: &K, j: &K) -> f64 {
    a.value(i, j)
}

pub fn lift_scalar<K: IndexKey>(x: f64) -> FdMatrix<K> {
    FdMatrix::lift_scalar(x)
}

pub fn lift_row<K: IndexKey>(alpha: &FdVector<K>) -> FdMatrix<K> {
    FdMatrix::lift_row(alpha)
}

pub fn lift_col<K: IndexKey>(beta: &FdVector<K>) -> FdMatrix<K> {
    FdMatrix::lift_col(beta)
}

pub fn fd_add<K: IndexKey>(a: &FdMatrix<K>, b: &FdMatrix<K>) -> FdMatrix<K> {
    a.add(b)
}

pub fn fd_scale<K: IndexKey>(c: f64, a: &FdMatrix<K>) -> FdMatrix<K> {
    a.scale(c)
}

pub fn hadamard<K: IndexKey>(a: &FdMatrix<K>, b: &FdMatrix<K>) -> FdMatrix<K> {
    a.hadamard(b)
}

/// `βᵀA` as a vector over columns.
///
/// Only rows that are exceptional in `β` or `A` need to be summed when the
/// remaining rows contribute nothing. If `β` has a nonzero default and the
/// generic row of `A` is not identically zero, the sum has infinitely many
/// nonzero addends and the whole result is the zero vector.
pub fn row_combine<K: IndexKey>(beta: &FdVector<K>, a: &FdMatrix<K>) -> FdVector<K> {
    if beta.default_value() != 0.0 && !a.row(None).is_zero() {
        return FdVector::zero();
    }
    let rows: BTreeSet<K> = beta.keys().cloned().chain(a.row_keys()).collect();
    let coeffs: Vec<f64> = a
        .terms()
        .iter()
        .map(|t| rows.iter().map(|r| beta.get(r) * t.u.get(r)).sum())
        .collect();
    FdVector::lincomb(coeffs.into_iter().zip(a.terms().iter().map(|t| &t.v)))
}

pub fn is_boolean_mask<K: IndexKey>(a: &FdMatrix<K>) -> bool {
    a.is_boolean_mask()
}

pub fn ewise_max<K: IndexKey>(a: &FdMatrix<K>, b: &FdMatrix<K>) -> Result<FdMatrix<K>, FdError> {
    a.ewise_max(b)
}

/// The increment `(γ→) .* (↑α) .* (↑(βᵀA))`, i.e. entry `(i, j)` is
/// `γ_i · α_j · Σ_k β_k a_kj`.
pub fn update_delta<K: IndexKey>(
    a: &FdMatrix<K>,
    alpha: &FdVector<K>,
    beta: &FdVector<K>,
    gamma: &FdVector<K>,
) -> Result<FdMatrix<K>, FdError> {
    if !beta.has_finite_support() || !gamma.has_finite_support() {
        return Err(FdError::InfiniteSupport("matrix_update"));
    }
    let combined = row_combine(beta, a);
    Ok(lift_col(gamma).hadamard(&lift_row(alpha).hadamard(&lift_row(&combined))))
}

/// `a_ij := a_ij + γ_i · α_j · Σ_k β_k a_kj`.
pub fn matrix_update<K: IndexKey>(
    a: &FdMatrix<K>,
    alpha: &FdVector<K>,
    beta: &FdVector<K>,
    gamma: &FdVector<K>,
) -> Result<FdMatrix<K>, FdError> {
    Ok(a.add(&update_delta(a, alpha, beta, gamma)?))
}

/// Connectivity touching the selected outputs `α` or inputs `β`.
pub fn subgraph_overall<K: IndexKey>(
    a: &FdMatrix<K>,
    alpha: &FdVector<K>,
    beta: &FdVector<K>,
) -> Result<FdMatrix<K>, FdError> {
    if !alpha.is_mask() || !beta.is_mask() {
        return Err(FdError::NotAMask("subgraph_overall"));
    }
    Ok(lift_row(alpha).ewise_max(&lift_col(beta))?.hadamard(a))
}

/// Connectivity between the selected outputs `α` and inputs `β`.
pub fn subgraph_internal<K: IndexKey>(
    a: &FdMatrix<K>,
    alpha: &FdVector<K>,
    beta: &FdVector<K>,
) -> Result<FdMatrix<K>, FdError> {
    if !alpha.is_mask() || !beta.is_mask() {
        return Err(FdError::NotAMask("subgraph_internal"));
    }
    Ok(lift_row(alpha).hadamard(&lift_col(beta)).hadamard(a))
}

pub fn finite_support<K: IndexKey>(a: &FdMatrix<K>) -> bool {
    a.finite_support()
}

pub fn semantically_equal<K: IndexKey>(a: &FdMatrix<K>, b: &FdMatrix<K>) -> bool {
    a.semantically_equal(b)
}

pub fn to_dense<K: IndexKey>(a: &FdMatrix<K>, row_keys: &[K], col_keys: &[K]) -> DenseMatrix {
    a.to_dense(row_keys, col_keys)
}

pub fn support<K: IndexKey>(a: &FdMatrix<K>) -> Result<BTreeSet<(K, K)>, FdError> {
    a.support()
}
