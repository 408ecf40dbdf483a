//! Finite-dimensional commutative associative algebras, the coefficient
//! rings of current algebras. Orthogonal idempotents labelled by points play
//! the role of characteristic functions of the points of a finite space.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, axpy, is_zero_vec, q, zeros, LinalgError, Scalar, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommError {
    #[error("expected {expected} basis labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("index out of range in product entry ({i}, {j}, {k})")]
    IndexOutOfRange { i: usize, j: usize, k: usize },
    #[error("product is not commutative at ({i}, {j})")]
    NotCommutative { i: usize, j: usize },
    #[error("product is not associative at ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("declared unit does not act as the identity on basis element {0}")]
    BadUnit(usize),
    #[error("invalid idempotent decomposition: {0}")]
    BadIdempotents(String),
    #[error("algebra has no unit")]
    NonUnital,
    #[error("algebra has no idempotent decomposition")]
    NoIdempotents,
    #[error("unknown point index {0}")]
    UnknownPoint(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Idempotent {
    pub point: String,
    pub coords: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommAlgebra {
    labels: Vec<String>,
    /// `b_i b_j` for `i <= j`
    products: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
    unit: Option<Vec<Scalar>>,
    idempotents: Vec<Idempotent>,
}

impl CommAlgebra {
    /// Builds and validates an algebra from product entries `(i, j, k, c)`
    /// meaning `b_i b_j` has coefficient `c` on `b_k`. A pair given in one
    /// order implies the other.
    pub fn new(
        labels: Vec<String>,
        entries: &[(usize, usize, usize, Scalar)],
        unit: Option<Vec<Scalar>>,
        idempotents: Vec<Idempotent>,
    ) -> Result<Self, CommError> {
        let n = labels.len();
        let mut given: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            if *i >= n || *j >= n || *k >= n {
                return Err(CommError::IndexOutOfRange { i: *i, j: *j, k: *k });
            }
            given.entry((*i, *j)).or_insert_with(|| zeros(n))[*k] += c;
        }
        let mut products = BTreeMap::new();
        for (&(i, j), v) in &given {
            if let Some(w) = given.get(&(j, i)) {
                if v != w {
                    return Err(CommError::NotCommutative { i: i.min(j), j: i.max(j) });
                }
            }
            let key = (i.min(j), i.max(j));
            let sparse: Vec<(usize, Scalar)> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k, x.clone()))
                .collect();
            if !sparse.is_empty() {
                products.insert(key, sparse);
            }
        }
        let alg = CommAlgebra {
            labels,
            products,
            unit,
            idempotents,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn validate(&self) -> Result<(), CommError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let left = self.mul(&ij, &linalg::unit_vector(n, k));
                    let right = self.mul(&linalg::unit_vector(n, i), &self.basis_product(j, k));
                    if left != right {
                        return Err(CommError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        if let Some(u) = &self.unit {
            if u.len() != n {
                return Err(LinalgError::DimensionMismatch {
                    expected: n,
                    found: u.len(),
                }
                .into());
            }
            for i in 0..n {
                let b = linalg::unit_vector(n, i);
                if self.mul(u, &b) != b {
                    return Err(CommError::BadUnit(i));
                }
            }
        }
        let mut sum = zeros(n);
        for (s, es) in self.idempotents.iter().enumerate() {
            if es.coords.len() != n {
                return Err(CommError::BadIdempotents(format!(
                    "idempotent {} has {} coordinates",
                    es.point,
                    es.coords.len()
                )));
            }
            if is_zero_vec(&es.coords) {
                return Err(CommError::BadIdempotents(format!("idempotent {} is zero", es.point)));
            }
            for (t, et) in self.idempotents.iter().enumerate() {
                let prod = self.mul(&es.coords, &et.coords);
                let expected = if s == t { es.coords.clone() } else { zeros(n) };
                if prod != expected {
                    return Err(CommError::BadIdempotents(format!(
                        "e_{} e_{} has the wrong value",
                        es.point, et.point
                    )));
                }
            }
            sum = linalg::add_vec(&sum, &es.coords);
        }
        if let (Some(u), false) = (&self.unit, self.idempotents.is_empty()) {
            if &sum != u {
                return Err(CommError::BadIdempotents("idempotents do not sum to the unit".into()));
            }
        }
        let mut points = BTreeSet::new();
        for e in &self.idempotents {
            if !points.insert(e.point.clone()) {
                return Err(CommError::BadIdempotents(format!("duplicate point {}", e.point)));
            }
        }
        Ok(())
    }

    /// The zero-dimensional algebra; it is unital with unit 0.
    pub fn zero() -> Self {
        CommAlgebra {
            labels: Vec::new(),
            products: BTreeMap::new(),
            unit: Some(Vec::new()),
            idempotents: Vec::new(),
        }
    }

    /// `Q[t]/(t^n)` with basis `1, t, ..., t^{n-1}`.
    pub fn jets(n: usize) -> Self {
        let labels = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            })
            .collect();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in a..n {
                if a + b < n {
                    entries.push((a, b, a + b, q(1)));
                }
            }
        }
        let unit = (n > 0).then(|| linalg::unit_vector(n, 0)).or(Some(Vec::new()));
        Self::new(labels, &entries, unit, Vec::new()).expect("truncated polynomial ring")
    }

    /// `Q[x,y]/(x^2, y^2)` with basis `1, x, y, xy`.
    pub fn sq2() -> Self {
        let labels = ["1", "x", "y", "xy"].map(String::from).to_vec();
        let one = q(1);
        let entries = vec![
            (0, 0, 0, one.clone()),
            (0, 1, 1, one.clone()),
            (0, 2, 2, one.clone()),
            (0, 3, 3, one.clone()),
            (1, 2, 3, one),
        ];
        Self::new(labels, &entries, Some(linalg::unit_vector(4, 0)), Vec::new()).expect("sq2")
    }

    /// Pointwise functions on `{1, ..., n}`.
    pub fn fun(n: usize) -> Self {
        let labels = (1..=n).map(|s| format!("e{s}")).collect();
        let entries: Vec<_> = (0..n).map(|s| (s, s, s, q(1))).collect();
        let unit = vec![q(1); n];
        let idempotents = (0..n)
            .map(|s| Idempotent {
                point: (s + 1).to_string(),
                coords: linalg::unit_vector(n, s),
            })
            .collect();
        Self::new(labels, &entries, Some(unit), idempotents).expect("function algebra")
    }

    /// Tensor product with basis `a ⊗ b` at index `a * dim(other) + b`.
    /// Idempotents are taken from `self` (tensored with the unit of
    /// `other`), or from `other` when `self` has none.
    pub fn tensor(&self, other: &CommAlgebra) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut labels = Vec::with_capacity(n * m);
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("{a}⊗{b}"));
            }
        }
        let kron = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
            let mut out = zeros(n * m);
            for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    out[a * m + b] = xa * yb;
                }
            }
            out
        };
        let mut products = BTreeMap::new();
        for a1 in 0..n {
            for b1 in 0..m {
                for a2 in 0..n {
                    for b2 in 0..m {
                        let (i, j) = (a1 * m + b1, a2 * m + b2);
                        if i > j {
                            continue;
                        }
                        let v = kron(&self.basis_product(a1, a2), &other.basis_product(b1, b2));
                        let sparse: Vec<_> = v
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect();
                        if !sparse.is_empty() {
                            products.insert((i, j), sparse);
                        }
                    }
                }
            }
        }
        let unit = match (&self.unit, &other.unit) {
            (Some(u), Some(v)) => Some(kron(u, v)),
            _ => None,
        };
        let idempotents = match (&self.idempotents[..], &other.unit, &other.idempotents[..], &self.unit) {
            (ids, Some(v), _, _) if !ids.is_empty() => ids
                .iter()
                .map(|e| Idempotent {
                    point: e.point.clone(),
                    coords: kron(&e.coords, v),
                })
                .collect(),
            (_, _, ids, Some(u)) if !ids.is_empty() => ids
                .iter()
                .map(|e| Idempotent {
                    point: e.point.clone(),
                    coords: kron(u, &e.coords),
                })
                .collect(),
            _ => Vec::new(),
        };
        CommAlgebra {
            labels,
            products,
            unit,
            idempotents,
        }
    }

    /// `Q·1 ⊕ A`; the new unit is basis element 0 and `b_k` moves to `k + 1`.
    /// Idempotents of `A` are kept and completed by `1 - Σ e_s`.
    pub fn adjoin_unit(&self) -> Self {
        let n = self.dim();
        let shift = |v: &[Scalar]| {
            let mut out = zeros(n + 1);
            for (k, c) in v.iter().enumerate() {
                out[k + 1] = c.clone();
            }
            out
        };
        let mut labels = vec!["1".to_string()];
        let mut taken: BTreeSet<String> = BTreeSet::new();
        for l in &self.labels {
            taken.insert(l.clone());
            labels.push(l.clone());
        }
        if taken.contains("1") {
            labels[0] = "1⁺".into();
        }
        let mut products = BTreeMap::new();
        products.insert((0, 0), vec![(0, q(1))]);
        for k in 0..n {
            products.insert((0, k + 1), vec![(k + 1, q(1))]);
        }
        for (&(i, j), v) in &self.products {
            products.insert((i + 1, j + 1), v.iter().map(|(k, c)| (k + 1, c.clone())).collect());
        }
        let mut idempotents: Vec<Idempotent> = self
            .idempotents
            .iter()
            .map(|e| Idempotent {
                point: e.point.clone(),
                coords: shift(&e.coords),
            })
            .collect();
        if !idempotents.is_empty() {
            let mut rest = linalg::unit_vector(n + 1, 0);
            for e in &idempotents {
                rest = linalg::sub_vec(&rest, &e.coords);
            }
            let mut point = "∞".to_string();
            while idempotents.iter().any(|e| e.point == point) {
                point.push('\'');
            }
            idempotents.push(Idempotent { point, coords: rest });
        }
        CommAlgebra {
            labels,
            products,
            unit: Some(linalg::unit_vector(n + 1, 0)),
            idempotents,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> Option<&[Scalar]> {
        self.unit.as_deref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn idempotents(&self) -> &[Idempotent] {
        &self.idempotents
    }

    pub fn points(&self) -> Vec<String> {
        self.idempotents.iter().map(|e| e.point.clone()).collect()
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.idempotents.iter().position(|e| e.point == label)
    }

    /// Stored products `b_i b_j` with `i <= j`.
    pub fn upper_products(&self) -> impl Iterator<Item = ((usize, usize), &[(usize, Scalar)])> {
        self.products.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = zeros(self.dim());
        if let Some(v) = self.products.get(&(i.min(j), i.max(j))) {
            for (k, c) in v {
                out[*k] = c.clone();
            }
        }
        out
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = zeros(self.dim());
        for (&(i, j), v) in &self.products {
            let mut c = &x[i] * &y[j];
            if i != j {
                c += &x[j] * &y[i];
            }
            if c.is_zero() {
                continue;
            }
            for (k, a) in v {
                out[*k] += &c * a;
            }
        }
        out
    }

    /// Matrix of multiplication by `a`, columns indexed by the basis.
    pub fn mult_matrix(&self, a: &[Scalar]) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut m = vec![zeros(n); n];
        for c in 0..n {
            let col = self.mul(a, &linalg::unit_vector(n, c));
            for r in 0..n {
                m[r][c] = col[r].clone();
            }
        }
        m
    }

    /// Sum of the idempotents of the given points.
    pub fn indicator(&self, points: &BTreeSet<usize>) -> Result<Vec<Scalar>, CommError> {
        if self.idempotents.is_empty() {
            return Err(CommError::NoIdempotents);
        }
        let mut out = zeros(self.dim());
        for &p in points {
            let e = self.idempotents.get(p).ok_or(CommError::UnknownPoint(p))?;
            axpy(&mut out, &Scalar::one(), &e.coords);
        }
        Ok(out)
    }

    /// Points `s` with `e_s a != 0`.
    pub fn support(&self, a: &[Scalar]) -> Result<BTreeSet<usize>, CommError> {
        if self.idempotents.is_empty() {
            return Err(CommError::NoIdempotents);
        }
        Ok(self
            .idempotents
            .iter()
            .enumerate()
            .filter(|(_, e)| !is_zero_vec(&self.mul(&e.coords, a)))
            .map(|(s, _)| s)
            .collect())
    }

    /// The corner `e_U A` for a set of points `U`.
    pub fn corner(&self, points: &BTreeSet<usize>) -> Result<Corner, CommError> {
        let n = self.dim();
        let e = self.indicator(points)?;
        let span = Subspace::from_spanning(n, (0..n).map(|i| self.mul(&e, &linalg::unit_vector(n, i))))?;
        let basis = span.basis();
        let k = basis.len();
        let labels = basis
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let support: Vec<usize> = (0..n).filter(|&c| !v[c].is_zero()).collect();
                if support.len() == 1 && v[support[0]].is_one() {
                    self.labels[support[0]].clone()
                } else {
                    format!("c{idx}")
                }
            })
            .collect();
        let coords = |v: &[Scalar]| -> Vec<Scalar> {
            span.coordinates(v)
                .expect("ambient length")
                .expect("product stays in the corner")
        };
        let mut entries = Vec::new();
        for i in 0..k {
            for j in i..k {
                for (c, x) in coords(&self.mul(&basis[i], &basis[j])).into_iter().enumerate() {
                    if !x.is_zero() {
                        entries.push((i, j, c, x));
                    }
                }
            }
        }
        let idempotents = points
            .iter()
            .map(|&p| Idempotent {
                point: self.idempotents[p].point.clone(),
                coords: coords(&self.idempotents[p].coords),
            })
            .collect();
        let algebra = CommAlgebra::new(labels, &entries, Some(coords(&e)), idempotents)?;
        Ok(Corner {
            points: points.clone(),
            idempotent: e,
            span,
            algebra,
        })
    }
}

/// A corner `e_U A`, unital with unit `e_U`.
#[derive(Clone, Debug)]
pub struct Corner {
    pub points: BTreeSet<usize>,
    /// `e_U` in the coordinates of the ambient algebra
    pub idempotent: Vec<Scalar>,
    span: Subspace,
    pub algebra: CommAlgebra,
}

impl Corner {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Extension by zero: corner coordinates to ambient coordinates.
    pub fn include(&self, c: &[Scalar]) -> Vec<Scalar> {
        self.span.combination(c).expect("corner coordinates")
    }

    /// Ambient element to corner coordinates; `None` if it does not lie in
    /// the corner.
    pub fn coordinates(&self, a: &[Scalar]) -> Option<Vec<Scalar>> {
        self.span.coordinates(a).expect("ambient length")
    }

    /// Basis of the corner as ambient vectors.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.span.basis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_algebras_validate() {
        for alg in [
            CommAlgebra::jets(3),
            CommAlgebra::sq2(),
            CommAlgebra::fun(3),
            CommAlgebra::fun(2).tensor(&CommAlgebra::sq2()),
        ] {
            alg.validate().unwrap();
            assert!(alg.is_unital());
        }
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a*a = b, a*b = a, b*b = 0: (a a) b = b b = 0 but a (a b) = a a = b
        let entries = vec![(0, 0, 1, q(1)), (0, 1, 0, q(1))];
        let err = CommAlgebra::new(vec!["a".into(), "b".into()], &entries, None, Vec::new()).unwrap_err();
        assert!(matches!(err, CommError::NotAssociative { .. }));
    }

    #[test]
    fn inconsistent_orientations_are_not_commutative() {
        let entries = vec![(0, 1, 1, q(1)), (1, 0, 1, q(2))];
        let err = CommAlgebra::new(vec!["a".into(), "b".into()], &entries, None, Vec::new()).unwrap_err();
        assert_eq!(err, CommError::NotCommutative { i: 0, j: 1 });
    }

    #[test]
    fn augmentation_ideal_plus_unit_is_jets() {
        // t Q[t]/(t^3) = span{t, t^2}
        let ideal = CommAlgebra::new(vec!["t".into(), "t^2".into()], &[(0, 0, 1, q(1))], None, Vec::new())
            .unwrap();
        let plus = ideal.adjoin_unit();
        plus.validate().unwrap();
        let jets = CommAlgebra::jets(3);
        assert_eq!(plus.dim(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(plus.basis_product(i, j), jets.basis_product(i, j));
            }
        }
    }

    #[test]
    fn corners_of_function_tensor() {
        let a = CommAlgebra::fun(3).tensor(&CommAlgebra::jets(2));
        let corner = a.corner(&BTreeSet::from([0, 2])).unwrap();
        assert_eq!(corner.dim(), 4);
        assert_eq!(corner.algebra.points(), vec!["1".to_string(), "3".to_string()]);
        let e = &corner.idempotent;
        for b in corner.basis() {
            assert_eq!(a.mul(e, &b), b);
        }
        assert_eq!(a.support(&corner.basis()[3]).unwrap(), BTreeSet::from([2]));
    }
}
