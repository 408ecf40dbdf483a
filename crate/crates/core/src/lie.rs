//! Finite-dimensional Lie algebras given by rational structure constants.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{
    self, axpy, is_zero_vec, kernel_basis, q, zeros, LinalgError, QuotientSpace, Scalar,
    SparseMatrix, Subspace,
};

/// One failed axiom, as found by [`validate_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { i: usize, j: usize, k: usize },
    /// `[b_i, b_i] != 0`
    SelfBracket { i: usize, value: Vec<Scalar> },
    /// `[b_i, b_j] + [b_j, b_i] != 0`
    Antisymmetry { i: usize, j: usize, defect: Vec<Scalar> },
    /// `[b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]] != 0`
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        defect: Vec<Scalar>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Vec<Scalar>| {
            v.iter()
                .map(linalg::format_scalar)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Violation::IndexOutOfRange { i, j, k } => {
                write!(f, "index out of range in entry ({i}, {j}, {k})")
            }
            Violation::SelfBracket { i, value } => {
                write!(f, "bracket of basis element {i} with itself is ({})", show(value))
            }
            Violation::Antisymmetry { i, j, defect } => {
                write!(f, "antisymmetry fails at ({i}, {j}): defect ({})", show(defect))
            }
            Violation::Jacobi { i, j, k, defect } => {
                write!(f, "Jacobi identity fails at ({i}, {j}, {k}): defect ({})", show(defect))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("invalid Lie algebra: {}", .0.violations.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(ValidationReport),
    #[error("expected {expected} basis labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("element is not in the derived algebra; defect class in L/[L,L] is {defect:?}")]
    NotInDerivedAlgebra { defect: Vec<Scalar> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Checks a raw bracket table `[b_i, b_j] = sum_k c b_k` given as entries
/// `(i, j, k, c)`. A pair given in one orientation only has the other
/// implied by antisymmetry; when both orientations are given they must be
/// negatives of each other.
pub fn validate_table(dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut given: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
    for (i, j, k, c) in entries {
        if *i >= dim || *j >= dim || *k >= dim {
            report.violations.push(Violation::IndexOutOfRange { i: *i, j: *j, k: *k });
            continue;
        }
        given.entry((*i, *j)).or_insert_with(|| zeros(dim))[*k] += c;
    }
    if !report.is_valid() {
        return report;
    }
    let mut table: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
    for ((i, j), v) in &given {
        if i == j {
            if !is_zero_vec(v) {
                report.violations.push(Violation::SelfBracket { i: *i, value: v.clone() });
            }
            continue;
        }
        table.insert((*i, *j), v.clone());
        match given.get(&(*j, *i)) {
            Some(w) => {
                if i < j {
                    let defect = linalg::add_vec(v, w);
                    if !is_zero_vec(&defect) {
                        report.violations.push(Violation::Antisymmetry { i: *i, j: *j, defect });
                    }
                }
            }
            None => {
                table.insert((*j, *i), v.iter().map(|x| -x).collect());
            }
        }
    }
    let bracket = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = zeros(dim);
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                if let Some(v) = table.get(&(a, b)) {
                    axpy(&mut out, &(xa * yb), v);
                }
            }
        }
        out
    };
    let basis = |i: usize| linalg::unit_vector(dim, i);
    for i in 0..dim {
        for j in i + 1..dim {
            for k in j + 1..dim {
                let (bi, bj, bk) = (basis(i), basis(j), basis(k));
                let mut defect = bracket(&bi, &bracket(&bj, &bk));
                defect = linalg::add_vec(&defect, &bracket(&bj, &bracket(&bk, &bi)));
                defect = linalg::add_vec(&defect, &bracket(&bk, &bracket(&bi, &bj)));
                if !is_zero_vec(&defect) {
                    report.violations.push(Violation::Jacobi { i, j, k, defect });
                }
            }
        }
    }
    report
}

/// A Lie algebra with basis `b_0, ..., b_{n-1}`. Only brackets `[b_i, b_j]`
/// with `i < j` are stored; the rest follow from antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

/// Killing form together with the Cartan criterion verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingForm {
    pub matrix: Vec<Vec<Scalar>>,
    pub semisimple: bool,
}

/// Basis of `der(L)`, each derivation as a dense matrix `D` with
/// `D b_c = sum_r D[r][c] b_r`.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub basis: Vec<Vec<Vec<Scalar>>>,
    /// The same space as a subspace of flattened matrices (index `r * n + c`).
    pub space: Subspace,
    /// Span of the inner derivations `ad(b_i)`.
    pub inner: Subspace,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn all_inner(&self) -> bool {
        self.space == self.inner
    }
}

/// Pairs `(u, v)` whose brackets sum to a given element.
pub type Commutators = Vec<(Vec<Scalar>, Vec<Scalar>)>;

pub fn flatten_matrix(m: &[Vec<Scalar>]) -> Vec<Scalar> {
    m.iter().flat_map(|row| row.iter().cloned()).collect()
}

pub fn mat_vec(m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

impl LieAlgebra {
    /// Builds an algebra from a raw bracket table, see [`validate_table`].
    pub fn new(labels: Vec<String>, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self, LieError> {
        let dim = labels.len();
        let report = validate_table(dim, entries);
        if !report.is_valid() {
            return Err(LieError::Invalid(report));
        }
        Ok(Self::from_validated(labels, entries))
    }

    fn from_validated(labels: Vec<String>, entries: &[(usize, usize, usize, Scalar)]) -> Self {
        let dim = labels.len();
        let mut acc: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i == j {
                continue;
            }
            let (key, sign) = if i < j { ((*i, *j), q(1)) } else { ((*j, *i), q(-1)) };
            // when both orientations are present they agree, keep one
            if i > j && entries.iter().any(|(a, b, _, _)| a == j && b == i) {
                continue;
            }
            acc.entry(key).or_insert_with(|| zeros(dim))[*k] += sign * c;
        }
        let brackets = acc
            .into_iter()
            .map(|(key, v)| {
                let sparse: Vec<(usize, Scalar)> = v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect();
                (key, sparse)
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        LieAlgebra { labels, brackets }
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebra {
            labels: (1..=n).map(|i| format!("a{i}")).collect(),
            brackets: BTreeMap::new(),
        }
    }

    /// Algebra spanned by the given square matrices under the commutator.
    /// The matrices must be linearly independent and closed under brackets.
    pub fn from_matrix_basis(labels: Vec<String>, mats: &[Vec<Vec<Scalar>>]) -> Result<Self, LieError> {
        if labels.len() != mats.len() {
            return Err(LieError::LabelCount {
                expected: mats.len(),
                found: labels.len(),
            });
        }
        let n = mats.len();
        let flat: Vec<Vec<Scalar>> = mats.iter().map(|m| flatten_matrix(m)).collect();
        let width = flat.first().map(Vec::len).unwrap_or(0);
        let basis_cols = SparseMatrix::from_columns(width, &flat)?;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let comm = matrix_commutator(&mats[i], &mats[j]);
                let coords = linalg::solve_linear(&basis_cols, &flatten_matrix(&comm))?
                    .ok_or_else(|| {
                        LieError::Invalid(ValidationReport {
                            violations: vec![Violation::Jacobi {
                                i,
                                j,
                                k: i,
                                defect: flatten_matrix(&comm),
                            }],
                        })
                    })?;
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        Self::new(labels, &entries)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LieError> {
        if labels.len() != self.dim() {
            return Err(LieError::LabelCount {
                expected: self.dim(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Stored brackets `[b_i, b_j]` for `i < j`.
    pub fn upper_brackets(&self) -> impl Iterator<Item = ((usize, usize), &[(usize, Scalar)])> {
        self.brackets.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// `[b_i, b_j]` as a sparse coordinate list.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Scalar)> {
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else if i > j {
            self.brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|(k, c)| (*k, -c)).collect())
                .unwrap_or_default()
        } else {
            Vec::new()
        }
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.bracket_basis(i, j)
            .into_iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c)
            .unwrap_or_else(Scalar::zero)
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = zeros(n);
        for (&(i, j), terms) in &self.brackets {
            let c = &x[i] * &y[j] - &x[j] * &y[i];
            if c.is_zero() {
                continue;
            }
            for (k, v) in terms {
                out[*k] += &c * v;
            }
        }
        out
    }

    /// Matrix of `ad(x)`.
    pub fn ad(&self, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut m = vec![zeros(n); n];
        for c in 0..n {
            let col = self.bracket(x, &linalg::unit_vector(n, c));
            for r in 0..n {
                m[r][c] = col[r].clone();
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Vec<Vec<Scalar>> {
        self.ad(&linalg::unit_vector(self.dim(), i))
    }

    /// Checks antisymmetry and the Jacobi identity on all basis triples.
    pub fn validate(&self) -> ValidationReport {
        let entries: Vec<_> = self
            .brackets
            .iter()
            .flat_map(|(&(i, j), v)| v.iter().map(move |(k, c)| (i, j, *k, c.clone())))
            .collect();
        validate_table(self.dim(), &entries)
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let shift = self.dim();
        let mut brackets = self.brackets.clone();
        for (&(i, j), v) in &other.brackets {
            brackets.insert(
                (i + shift, j + shift),
                v.iter().map(|(k, c)| (k + shift, c.clone())).collect(),
            );
        }
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut label = l.clone();
            while labels.contains(&label) {
                label.push('\'');
            }
            labels.push(label);
        }
        LieAlgebra { labels, brackets }
    }

    /// Reorders the basis: new basis element `k` is old basis element `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> LieAlgebra {
        let n = self.dim();
        assert_eq!(perm.len(), n, "permutation length");
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let mut entries = Vec::new();
        for (&(i, j), v) in &self.brackets {
            for (k, c) in v {
                entries.push((inverse[i], inverse[j], inverse[*k], c.clone()));
            }
        }
        let labels = perm.iter().map(|&old| self.labels[old].clone()).collect();
        Self::from_validated(labels, &entries)
    }

    /// Treats the structure constants as those of a complex Lie algebra and
    /// returns its realification with basis `b_0..b_{n-1}, i b_0..i b_{n-1}`.
    pub fn realified(&self) -> LieAlgebra {
        let n = self.dim();
        let mut entries = Vec::new();
        for (&(a, b), v) in &self.brackets {
            for (k, c) in v {
                entries.push((a, b, *k, c.clone()));
                // [i x, y] = i [x, y] and [x, i y] = i [x, y]
                entries.push((a + n, b, k + n, c.clone()));
                entries.push((a, b + n, k + n, c.clone()));
                // [i x, i y] = -[x, y]
                entries.push((a + n, b + n, *k, -c.clone()));
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(self.labels.iter().map(|l| format!("i{l}")));
        // mixed pairs (a+n, b) with a > b have to be stored as (b, a+n)
        let normalized: Vec<_> = entries
            .into_iter()
            .map(|(i, j, k, c)| if i < j { (i, j, k, c) } else { (j, i, k, -c) })
            .collect();
        Self::from_validated(labels, &normalized)
    }

    pub fn killing_form(&self) -> KillingForm {
        let n = self.dim();
        let ads: Vec<_> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut matrix = vec![zeros(n); n];
        for i in 0..n {
            for j in i..n {
                let mut t = Scalar::zero();
                for a in 0..n {
                    for b in 0..n {
                        if !ads[i][a][b].is_zero() && !ads[j][b][a].is_zero() {
                            t += &ads[i][a][b] * &ads[j][b][a];
                        }
                    }
                }
                matrix[i][j] = t.clone();
                matrix[j][i] = t;
            }
        }
        let rank = SparseMatrix::from_dense(n, &matrix)
            .expect("square matrix")
            .rank();
        KillingForm {
            matrix,
            semisimple: rank == n,
        }
    }

    pub fn is_semisimple(&self) -> bool {
        self.killing_form().semisimple
    }

    /// Solves `D[b_i, b_j] = [D b_i, b_j] + [b_i, D b_j]` over all `n x n`
    /// matrices `D`.
    pub fn derivations(&self) -> DerivationSpace {
        let n = self.dim();
        let var = |r: usize, c: usize| r * n + c;
        let mut triplets = Vec::new();
        let mut eq = 0;
        for i in 0..n {
            for j in i + 1..n {
                for l in 0..n {
                    // D[b_i, b_j] component l
                    for (k, c) in self.bracket_basis(i, j) {
                        triplets.push((eq, var(l, k), c));
                    }
                    // [D b_i, b_j] component l
                    for m in 0..n {
                        let c = self.structure_constant(m, j, l);
                        if !c.is_zero() {
                            triplets.push((eq, var(m, i), -c));
                        }
                        let c = self.structure_constant(i, m, l);
                        if !c.is_zero() {
                            triplets.push((eq, var(m, j), -c));
                        }
                    }
                    eq += 1;
                }
            }
        }
        let system = SparseMatrix::from_triplets(eq, n * n, triplets).expect("in range");
        let space = kernel_basis(&system);
        let basis = space
            .basis()
            .into_iter()
            .map(|flat| flat.chunks(n.max(1)).map(|r| r.to_vec()).collect())
            .collect();
        let inner = Subspace::from_spanning(n * n, (0..n).map(|i| flatten_matrix(&self.ad_basis(i))))
            .expect("n*n vectors");
        DerivationSpace { basis, space, inner }
    }

    /// Basis pairs `(i, j)`, `i < j`, in lexicographic order; this indexes
    /// the columns of [`LieAlgebra::bracket_matrix`].
    pub fn basis_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    /// Matrix of the bracket `Λ²L → L`.
    pub fn bracket_matrix(&self) -> SparseMatrix {
        let pairs = self.basis_pairs();
        let mut triplets = Vec::new();
        for (col, &(i, j)) in pairs.iter().enumerate() {
            for (k, c) in self.bracket_basis(i, j) {
                triplets.push((k, col, c));
            }
        }
        SparseMatrix::from_triplets(self.dim(), pairs.len(), triplets).expect("in range")
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        Subspace::column_space(&self.bracket_matrix())
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().dim() == self.dim()
    }

    /// Writes `x` as a sum of commutators `sum_j [mu_j, nu_j]`.
    pub fn perfect_witness(&self, x: &[Scalar]) -> Result<Commutators, LieError> {
        let n = self.dim();
        if x.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: x.len(),
            }
            .into());
        }
        let m = self.bracket_matrix();
        match linalg::solve_linear(&m, x)? {
            Some(coeffs) => Ok(self
                .basis_pairs()
                .into_iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|((i, j), c)| {
                    let mut mu = zeros(n);
                    mu[i] = c;
                    (mu, linalg::unit_vector(n, j))
                })
                .collect()),
            None => {
                let quotient = QuotientSpace::new(n, self.derived_subalgebra())?;
                Err(LieError::NotInDerivedAlgebra {
                    defect: quotient.project(x)?,
                })
            }
        }
    }
}

fn matrix_commutator(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let mut out = vec![zeros(n); n];
    for i in 0..n {
        for j in 0..n {
            let mut s = Scalar::zero();
            for k in 0..n {
                s += &a[i][k] * &b[k][j] - &b[i][k] * &a[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

/// Elementary matrix `E_{ij}` of size `n`.
pub fn elementary(n: usize, i: usize, j: usize) -> Vec<Vec<Scalar>> {
    let mut m = vec![zeros(n); n];
    m[i][j] = Scalar::one();
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::qf;

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        linalg::unit_vector(n, i)
    }

    #[test]
    fn sl2_is_valid() {
        let sl2 = catalog::sl2();
        assert!(sl2.validate().is_valid());
        // basis h, e, f
        assert_eq!(sl2.bracket(&e(3, 0), &e(3, 1)), linalg::scaled(&q(2), &e(3, 1)));
        assert_eq!(sl2.bracket(&e(3, 0), &e(3, 2)), linalg::scaled(&q(-2), &e(3, 2)));
        assert_eq!(sl2.bracket(&e(3, 1), &e(3, 2)), e(3, 0));
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let entries = vec![(1, 2, 1, q(1)), (2, 1, 1, q(1))];
        let report = validate_table(3, &entries);
        assert!(report.violations.contains(&Violation::Antisymmetry {
            i: 1,
            j: 2,
            defect: vec![q(0), q(2), q(0)],
        }));
        assert!(LieAlgebra::new(vec!["a".into(), "b".into(), "c".into()], &entries).is_err());
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [x,y]=z, [y,z]=x, [x,z]=x. Expanding by hand:
        // [x,[y,z]] = [x,x] = 0, [y,[z,x]] = [y,-x] = [x,y] = z, [z,[x,y]] = [z,z] = 0.
        let entries = vec![(0, 1, 2, q(1)), (1, 2, 0, q(1)), (0, 2, 0, q(1))];
        let report = validate_table(3, &entries);
        assert_eq!(
            report.violations,
            vec![Violation::Jacobi {
                i: 0,
                j: 1,
                k: 2,
                defect: vec![q(0), q(0), q(1)],
            }]
        );
    }

    #[test]
    fn self_bracket_is_rejected() {
        let report = validate_table(2, &[(0, 0, 1, q(1))]);
        assert!(matches!(report.violations[0], Violation::SelfBracket { i: 0, .. }));
    }

    #[test]
    fn killing_form_of_sl2() {
        // ad(h) = diag(0, 2, -2); ad(e): h -> -2e, f -> h; ad(f): h -> 2f, e -> -h
        // tr(ad h ad h) = 4 + 4 = 8, tr(ad e ad f) = 2 + 2 = 4.
        let kf = catalog::sl2().killing_form();
        assert!(kf.semisimple);
        let (h, ee, f) = (0, 1, 2);
        assert_eq!(kf.matrix[h][h], q(8));
        assert_eq!(kf.matrix[ee][f], q(4));
        assert_eq!(kf.matrix[f][ee], q(4));
        for (a, b) in [(ee, ee), (f, f), (h, ee), (h, f)] {
            assert!(kf.matrix[a][b].is_zero());
        }
    }

    #[test]
    fn killing_form_degenerate_cases() {
        let kf = LieAlgebra::abelian(4).killing_form();
        assert!(!kf.semisimple);
        assert!(kf.matrix.iter().flatten().all(Zero::is_zero));
        let kf = catalog::heis3().killing_form();
        assert!(!kf.semisimple);
        assert!(kf.matrix.iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn derivation_dimensions() {
        assert_eq!(LieAlgebra::abelian(2).derivations().dim(), 4);
        let der = catalog::sl2().derivations();
        assert_eq!(der.dim(), 3);
        assert!(der.all_inner());
        let der = catalog::heis3().derivations();
        assert_eq!(der.dim(), 6);
        assert!(!der.all_inner());
    }

    #[test]
    fn heis3_derivations_match_enumerated_constraints() {
        // Oracle: with [x,y]=z, D is a derivation iff
        //   D z = [D x, y] + [x, D y] = (D_xx + D_yy) z,
        //   [D x, z] + [x, D z] = 0 and [D y, z] + [y, D z] = 0 hold automatically except
        //   that D z must be central: D_xz = D_yz = 0.
        // So the free parameters are D_xx, D_yx, D_zx, D_xy, D_yy, D_zy and D_zz = D_xx + D_yy.
        let der = catalog::heis3().derivations();
        let n = 3;
        for d in &der.basis {
            assert!(d[0][2].is_zero() && d[1][2].is_zero());
            assert_eq!(d[2][2], &d[0][0] + &d[1][1]);
        }
        let mut generic = vec![zeros(n); n];
        generic[0][0] = q(2);
        generic[1][0] = q(-1);
        generic[2][0] = qf(1, 3);
        generic[0][1] = q(5);
        generic[1][1] = q(7);
        generic[2][1] = q(4);
        generic[2][2] = q(9);
        assert!(der.space.contains(&flatten_matrix(&generic)).unwrap());
    }

    #[test]
    fn derivation_law_holds_for_every_basis_element() {
        for alg in [catalog::sl2(), catalog::heis3(), catalog::gl2(), catalog::so3()] {
            let n = alg.dim();
            for d in alg.derivations().basis {
                for i in 0..n {
                    for j in 0..n {
                        let lhs = mat_vec(&d, &alg.bracket(&e(n, i), &e(n, j)));
                        let r1 = alg.bracket(&mat_vec(&d, &e(n, i)), &e(n, j));
                        let r2 = alg.bracket(&e(n, i), &mat_vec(&d, &e(n, j)));
                        assert_eq!(lhs, linalg::add_vec(&r1, &r2));
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_in_sl2() {
        let sl2 = catalog::sl2();
        let w = sl2.perfect_witness(&e(3, 0)).unwrap();
        assert_eq!(w, vec![(e(3, 1), e(3, 2))]);
        let w = sl2.perfect_witness(&e(3, 1)).unwrap();
        assert_eq!(w, vec![(linalg::scaled(&qf(1, 2), &e(3, 0)), e(3, 1))]);
    }

    #[test]
    fn heis3_generator_is_not_a_commutator_sum() {
        match catalog::heis3().perfect_witness(&e(3, 0)) {
            Err(LieError::NotInDerivedAlgebra { defect }) => {
                assert_eq!(defect.len(), 2);
                assert!(!is_zero_vec(&defect));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn realified_sl2_has_dimension_six() {
        let alg = catalog::sl2c();
        assert_eq!(alg.dim(), 6);
        assert!(alg.validate().is_valid());
        assert!(alg.is_semisimple());
        assert_eq!(alg.derivations().dim(), 6);
    }

    #[test]
    fn permutation_preserves_validity() {
        let alg = catalog::sl3().permuted(&[7, 3, 0, 5, 1, 6, 2, 4]);
        assert!(alg.validate().is_valid());
        assert!(alg.is_semisimple());
    }
}
