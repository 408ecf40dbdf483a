//! Exact rational linear algebra.
//!
//! Every elimination runs over primitive integer rows: rational input rows are
//! scaled by the lcm of their denominators, combined fraction-free and divided
//! by their content after each step. Results are converted back to reduced
//! fractions only when a [`Subspace`] or a solution vector is produced, so the
//! reduced row echelon form is the canonical output everywhere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. `BigRational` keeps itself in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zeros(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = zeros(n);
    v[k] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `y += c * x`
pub fn axpy(y: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}

pub fn scaled(c: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|xi| c * xi).collect()
}

pub fn add_vec(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

fn check_len(v: &[Scalar], expected: usize) -> Result<(), LinalgError> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch {
            expected,
            found: v.len(),
        })
    }
}

/// Sparse matrix in sorted triplet form. Entries are row-major, unique per
/// position and never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, Scalar::one())).collect(),
        }
    }

    /// Builds a matrix from triplets. Repeated positions are summed and zero
    /// results are dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if v.is_zero() {
                continue;
            }
            *acc.entry((r, c)).or_insert_with(Scalar::zero) += v;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_dense(cols: usize, dense: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let mut triplets = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            check_len(row, cols)?;
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((r, c, v.clone()));
                }
            }
        }
        Self::from_triplets(dense.len(), cols, triplets)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let mut triplets = Vec::new();
        for (c, col) in columns.iter().enumerate() {
            check_len(col, rows)?;
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((r, c, v.clone()));
                }
            }
        }
        Self::from_triplets(rows, columns.len(), triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        match self
            .entries
            .binary_search_by(|(r, c, _)| (*r, *c).cmp(&(row, col)))
        {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![zeros(self.cols); self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    /// Sparse rows, each sorted by column.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        check_len(v, self.cols)?;
        let mut out = zeros(self.rows);
        for (r, c, x) in &self.entries {
            if !v[*c].is_zero() {
                out[*r] += x * &v[*c];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let other_rows = other.sparse_rows();
        let mut triplets = Vec::new();
        for (r, k, a) in &self.entries {
            for (c, b) in &other_rows[*k] {
                triplets.push((*r, *c, a * b));
            }
        }
        Self::from_triplets(self.rows, other.cols, triplets)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for row in self.sparse_rows() {
            ech.insert(to_int_row(&row));
        }
        ech.len()
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination on primitive integer rows.

type IntRow = Vec<(usize, BigInt)>;

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

fn to_int_row(row: &[(usize, Scalar)]) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        if !v.is_zero() {
            lcm = lcm.lcm(v.denom());
        }
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

fn entry_at(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// Returns the primitive part of `p * target - t * pivot`, where `p` and `t`
/// are the entries of `pivot` and `target` at `col`. The column is cleared.
fn eliminate(target: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let t = entry_at(target, col).expect("target has an entry at the pivot column");
    let p = entry_at(pivot, col).expect("pivot row has an entry at its column");
    let g = t.gcd(p);
    let a = p / &g;
    let b = t / &g;
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, &a * &target[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&b * &pivot[j].1)));
            j += 1;
        } else {
            let v = &a * &target[i].1 - &b * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

/// Incremental row echelon form over the integers.
struct Echelon {
    ncols: usize,
    rows: Vec<IntRow>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots and keeps it if it is
    /// independent. Returns whether the rank grew.
    fn insert(&mut self, mut row: IntRow) -> bool {
        loop {
            let Some(&(lead, _)) = row.first() else {
                return false;
            };
            debug_assert!(lead < self.ncols);
            match self.pivot_row.get(&lead) {
                Some(&i) => row = eliminate(&row, &self.rows[i], lead),
                None => {
                    make_primitive(&mut row);
                    self.pivot_row.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
    }

    /// Back-substitutes into reduced echelon form, rows sorted by pivot.
    fn into_rref(self) -> Vec<IntRow> {
        let mut rows: Vec<IntRow> = self
            .pivot_row
            .values()
            .map(|&i| self.rows[i].clone())
            .collect();
        for idx in (0..rows.len()).rev() {
            let col = rows[idx][0].0;
            let (upper, rest) = rows.split_at_mut(idx);
            let pivot = &rest[0];
            for row in upper.iter_mut() {
                if entry_at(row, col).is_some() {
                    *row = eliminate(row, pivot, col);
                }
            }
        }
        rows
    }
}

fn rref_rational(ncols: usize, rows: impl IntoIterator<Item = IntRow>) -> Vec<Vec<(usize, Scalar)>> {
    let mut ech = Echelon::new(ncols);
    for row in rows {
        ech.insert(row);
    }
    ech.into_rref()
        .into_iter()
        .map(|row| {
            let lead = row[0].1.clone();
            row.into_iter()
                .map(|(c, v)| (c, Scalar::new(v, lead.clone())))
                .collect()
        })
        .collect()
}

fn dense_to_sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

// ---------------------------------------------------------------------------

/// A linear subspace of `Q^n`, stored as the rows of its reduced row echelon
/// basis. Two subspaces are equal iff their representations are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<(usize, Scalar)>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    pub fn from_spanning<I>(ambient: usize, vectors: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut sparse = Vec::new();
        for v in vectors {
            check_len(&v, ambient)?;
            sparse.push(dense_to_sparse(&v));
        }
        Ok(Self::from_sparse_spanning(ambient, sparse))
    }

    /// Spanning rows must have column indices below `ambient`; repeated
    /// indices within a row are summed.
    pub fn from_sparse_spanning<I>(ambient: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<(usize, Scalar)>>,
    {
        let int_rows = rows.into_iter().map(|r| {
            let mut r = r;
            r.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(r.len());
            for (c, v) in r {
                match merged.last_mut() {
                    Some((last, acc)) if *last == c => *acc += v,
                    _ => merged.push((c, v)),
                }
            }
            to_int_row(&merged)
        });
        Subspace {
            ambient,
            rows: rref_rational(ambient, int_rows),
        }
    }

    /// Row space of a matrix.
    pub fn row_space(m: &SparseMatrix) -> Self {
        Self::from_sparse_spanning(m.cols(), m.sparse_rows())
    }

    /// Column space (image) of a matrix.
    pub fn column_space(m: &SparseMatrix) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn sparse_basis(&self) -> &[Vec<(usize, Scalar)>] {
        &self.rows
    }

    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = zeros(self.ambient);
                for (c, x) in r {
                    v[*c] = x.clone();
                }
                v
            })
            .collect()
    }

    /// Basis vectors as the rows of a matrix.
    pub fn basis_matrix(&self) -> SparseMatrix {
        let triplets = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(c, x)| (i, *c, x.clone())));
        SparseMatrix::from_triplets(self.dim(), self.ambient, triplets)
            .expect("echelon rows are in range")
    }

    /// Subtracts the unique element of the subspace that makes the result
    /// vanish on every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        check_len(v, self.ambient)?;
        let mut out = v.to_vec();
        for row in &self.rows {
            let c = out[row[0].0].clone();
            if c.is_zero() {
                continue;
            }
            for (col, x) in row {
                out[*col] -= &c * x;
            }
        }
        Ok(out)
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        let residual = self.reduce(v)?;
        if !is_zero_vec(&residual) {
            return Ok(None);
        }
        Ok(Some(self.rows.iter().map(|r| v[r[0].0].clone()).collect()))
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        Ok(is_zero_vec(&self.reduce(v)?))
    }

    pub fn combination(&self, coords: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        check_len(coords, self.dim())?;
        let mut out = zeros(self.ambient);
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (col, x) in row {
                out[*col] += c * x;
            }
        }
        Ok(out)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.basis().iter().all(|v| other.contains(v).unwrap_or(false))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(Self::from_sparse_spanning(
            self.ambient,
            self.rows.iter().chain(&other.rows).cloned(),
        ))
    }
}

/// Full solution space of `m * v = 0`.
pub fn kernel_basis(m: &SparseMatrix) -> Subspace {
    let n = m.cols();
    let rref = rref_rational(n, m.sparse_rows().iter().map(|r| to_int_row(r)));
    let pivots: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut spanning = Vec::new();
    for free in (0..n).filter(|c| !is_pivot[*c]) {
        let mut v = vec![(free, Scalar::one())];
        for row in &rref {
            if let Ok(i) = row.binary_search_by_key(&free, |e| e.0) {
                v.push((row[0].0, -row[i].1.clone()));
            }
        }
        spanning.push(v);
    }
    Subspace::from_sparse_spanning(n, spanning)
}

/// Canonical solution of `m * v = b`: free coordinates are zero. `Ok(None)`
/// means `b` is not in the image of `m`.
pub fn solve_linear(m: &SparseMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    let mut sols = solve_many(m, std::slice::from_ref(&b.to_vec()))?;
    Ok(sols.pop().expect("one right-hand side"))
}

/// Solves `m * v = b` for several right-hand sides with one elimination.
pub fn solve_many(
    m: &SparseMatrix,
    rhs: &[Vec<Scalar>],
) -> Result<Vec<Option<Vec<Scalar>>>, LinalgError> {
    for b in rhs {
        check_len(b, m.rows())?;
    }
    let n = m.cols();
    let k = rhs.len();
    let mut rows = m.sparse_rows();
    for (j, b) in rhs.iter().enumerate() {
        for (r, x) in b.iter().enumerate() {
            if !x.is_zero() {
                rows[r].push((n + j, x.clone()));
            }
        }
    }
    let rref = rref_rational(n + k, rows.iter().map(|r| to_int_row(r)));
    let mut consistent = vec![true; k];
    let mut solutions = vec![zeros(n); k];
    for row in &rref {
        let lead = row[0].0;
        if lead >= n {
            for (c, _) in row {
                consistent[c - n] = false;
            }
            continue;
        }
        for (c, x) in row {
            if *c >= n {
                // pivot entry is normalised to one
                solutions[c - n][lead] = x.clone();
            }
        }
    }
    Ok(solutions
        .into_iter()
        .zip(consistent)
        .map(|(s, ok)| ok.then_some(s))
        .collect())
}

/// Quotient `Q^n / S` with coordinates on the non-pivot columns of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    ambient: usize,
    sub: Subspace,
    representatives: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(ambient: usize, sub: Subspace) -> Result<Self, LinalgError> {
        if sub.ambient_dim() != ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient,
                found: sub.ambient_dim(),
            });
        }
        let mut is_pivot = vec![false; ambient];
        for p in sub.pivots() {
            is_pivot[p] = true;
        }
        let representatives = (0..ambient).filter(|c| !is_pivot[*c]).collect();
        Ok(QuotientSpace {
            ambient,
            sub,
            representatives,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn denominator(&self) -> &Subspace {
        &self.sub
    }

    /// Ambient coordinates that carry the quotient basis.
    pub fn representative_columns(&self) -> &[usize] {
        &self.representatives
    }

    pub fn project(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        let r = self.sub.reduce(v)?;
        Ok(self.representatives.iter().map(|&c| r[c].clone()).collect())
    }

    pub fn lift(&self, coords: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        check_len(coords, self.dim())?;
        let mut v = zeros(self.ambient);
        for (&c, x) in self.representatives.iter().zip(coords) {
            v[c] = x.clone();
        }
        Ok(v)
    }

    /// `project` as a `dim x ambient` matrix.
    pub fn project_matrix(&self) -> SparseMatrix {
        let mut position = vec![None; self.ambient];
        for (k, &c) in self.representatives.iter().enumerate() {
            position[c] = Some(k);
        }
        let mut triplets = Vec::new();
        for (k, &c) in self.representatives.iter().enumerate() {
            triplets.push((k, c, Scalar::one()));
        }
        for row in self.sub.sparse_basis() {
            let pivot = row[0].0;
            for (c, x) in &row[1..] {
                if let Some(k) = position[*c] {
                    triplets.push((k, pivot, -x.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(self.dim(), self.ambient, triplets).expect("in range")
    }

    /// `lift` as an `ambient x dim` matrix.
    pub fn lift_matrix(&self) -> SparseMatrix {
        let triplets = self
            .representatives
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, k, Scalar::one()));
        SparseMatrix::from_triplets(self.ambient, self.dim(), triplets).expect("in range")
    }
}

pub fn quotient_space(ambient: usize, sub: Subspace) -> Result<QuotientSpace, LinalgError> {
    QuotientSpace::new(ambient, sub)
}
