//! The universal invariant symmetric bilinear form.
//!
//! `V(g)` is the quotient of the symmetric square `S²(g)` by the span of
//! `D·(x ⊙ y) = Dx ⊙ y + x ⊙ Dy` over a basis of derivations `D`, and
//! `kappa(x, y)` is the class of `x ⊙ y`. Every symmetric bilinear form that
//! is killed by the derivation action factors through `kappa`.

use num_traits::Zero;
use thiserror::Error;

use crate::lie::{DerivationSpace, LieAlgebra};
use crate::linalg::{self, axpy, zeros, LinalgError, QuotientSpace, Scalar, SparseMatrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("form is not symmetric at ({x}, {y})")]
    NotSymmetric { x: usize, y: usize },
    #[error("form is not invariant under derivation {derivation} at ({x}, {y})")]
    NotInvariant { derivation: usize, x: usize, y: usize },
    #[error("form has shape {found:?}, expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("factorization does not reproduce the form at ({x}, {y})")]
    Inconsistent { x: usize, y: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Index map for the basis `b_i ⊙ b_j`, `i <= j`, of `S²(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymSquare {
    n: usize,
}

impl SymSquare {
    pub fn new(n: usize) -> Self {
        SymSquare { n }
    }

    pub fn dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        i * (2 * self.n - i + 1) / 2 + (j - i)
    }

    pub fn pair(&self, idx: usize) -> (usize, usize) {
        let mut i = 0;
        let mut start = 0;
        while start + (self.n - i) <= idx {
            start += self.n - i;
            i += 1;
        }
        (i, i + idx - start)
    }

    /// Coordinates of `x ⊙ y` in `S²`.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = zeros(self.dim());
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                out[self.index(i, j)] += xi * yj;
            }
        }
        out
    }
}

/// A bilinear map `g × g → Q^w` given on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub dim: usize,
    pub target_dim: usize,
    /// `values[i][j]` is the value on `(b_i, b_j)`
    pub values: Vec<Vec<Vec<Scalar>>>,
}

impl BilinearForm {
    pub fn zero(dim: usize, target_dim: usize) -> Self {
        BilinearForm {
            dim,
            target_dim,
            values: vec![vec![zeros(target_dim); dim]; dim],
        }
    }

    /// Scalar-valued form from a matrix.
    pub fn from_matrix(m: &[Vec<Scalar>]) -> Self {
        BilinearForm {
            dim: m.len(),
            target_dim: 1,
            values: m
                .iter()
                .map(|row| row.iter().map(|x| vec![x.clone()]).collect())
                .collect(),
        }
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = zeros(self.target_dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(&mut out, &(xi * yj), &self.values[i][j]);
            }
        }
        out
    }
}

/// `V(g)` together with `kappa`.
#[derive(Clone, Debug)]
pub struct UniversalFormSpace {
    pub sym: SymSquare,
    pub derivations: DerivationSpace,
    /// `S²(g) / <der(g)·S²(g)>`
    pub v_space: QuotientSpace,
    /// `kappa(b_i, b_j)` in the coordinates of `V(g)`
    kappa_table: Vec<Vec<Vec<Scalar>>>,
}

impl UniversalFormSpace {
    pub fn dim(&self) -> usize {
        self.v_space.dim()
    }

    pub fn fibre_dim(&self) -> usize {
        self.kappa_table.len()
    }

    pub fn kappa_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.kappa_table[i][j]
    }

    pub fn kappa(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = zeros(self.dim());
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(&mut out, &(xi * yj), &self.kappa_table[i][j]);
            }
        }
        out
    }

    /// `kappa` as a [`BilinearForm`] with values in `V(g)`.
    pub fn kappa_form(&self) -> BilinearForm {
        BilinearForm {
            dim: self.fibre_dim(),
            target_dim: self.dim(),
            values: self.kappa_table.clone(),
        }
    }

    /// Dimension of the span of all `kappa(x, y)`.
    pub fn kappa_image_dim(&self) -> usize {
        let vectors = self.kappa_table.iter().flatten().cloned();
        Subspace::from_spanning(self.dim(), vectors)
            .expect("kappa values live in V")
            .dim()
    }
}

pub fn v_space_and_kappa(alg: &LieAlgebra) -> UniversalFormSpace {
    let n = alg.dim();
    let sym = SymSquare::new(n);
    let derivations = alg.derivations();
    let mut spanning = Vec::new();
    for d in &derivations.basis {
        for idx in 0..sym.dim() {
            let (i, j) = sym.pair(idx);
            let mut v = vec![Scalar::zero(); sym.dim()];
            for r in 0..n {
                if !d[r][i].is_zero() {
                    v[sym.index(r, j)] += &d[r][i];
                }
                if !d[r][j].is_zero() {
                    v[sym.index(i, r)] += &d[r][j];
                }
            }
            spanning.push(v);
        }
    }
    let relations = Subspace::from_spanning(sym.dim(), spanning).expect("S² vectors");
    let v_space = QuotientSpace::new(sym.dim(), relations).expect("same ambient");
    let kappa_table = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    v_space
                        .project(&linalg::unit_vector(sym.dim(), sym.index(i, j)))
                        .expect("S² vector")
                })
                .collect()
        })
        .collect();
    UniversalFormSpace {
        sym,
        derivations,
        v_space,
        kappa_table,
    }
}

/// The linear map `phi: V(g) → Q^w` with `beta = phi ∘ kappa`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `w x dim V` matrix
    pub matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
    pub source_dim: usize,
}

impl Factorization {
    pub fn kernel_dim(&self) -> usize {
        self.source_dim - self.rank
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        crate::lie::mat_vec(&self.matrix, v)
    }
}

pub fn factor_through(forms: &UniversalFormSpace, beta: &BilinearForm) -> Result<Factorization, FormError> {
    let n = forms.fibre_dim();
    let w = beta.target_dim;
    let rows_ok = beta.values.len() == n && beta.values.iter().all(|r| r.len() == n && r.iter().all(|v| v.len() == w));
    if beta.dim != n || !rows_ok {
        return Err(FormError::Shape {
            expected: (n, w),
            found: (beta.dim, beta.target_dim),
        });
    }
    for x in 0..n {
        for y in x + 1..n {
            if beta.values[x][y] != beta.values[y][x] {
                return Err(FormError::NotSymmetric { x, y });
            }
        }
    }
    for (k, d) in forms.derivations.basis.iter().enumerate() {
        for x in 0..n {
            for y in x..n {
                let dx: Vec<Scalar> = (0..n).map(|r| d[r][x].clone()).collect();
                let dy: Vec<Scalar> = (0..n).map(|r| d[r][y].clone()).collect();
                let s = linalg::add_vec(
                    &beta.eval(&dx, &linalg::unit_vector(n, y)),
                    &beta.eval(&linalg::unit_vector(n, x), &dy),
                );
                if !linalg::is_zero_vec(&s) {
                    return Err(FormError::NotInvariant { derivation: k, x, y });
                }
            }
        }
    }
    let dim_v = forms.dim();
    let mut matrix = vec![zeros(dim_v); w];
    for k in 0..dim_v {
        let rep = forms.v_space.lift(&linalg::unit_vector(dim_v, k))?;
        let mut col = zeros(w);
        for (idx, c) in rep.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (i, j) = forms.sym.pair(idx);
            axpy(&mut col, c, &beta.values[i][j]);
        }
        for r in 0..w {
            matrix[r][k] = col[r].clone();
        }
    }
    let fact = Factorization {
        rank: SparseMatrix::from_dense(dim_v, &matrix)?.rank(),
        matrix,
        source_dim: dim_v,
    };
    for x in 0..n {
        for y in x..n {
            if fact.apply(forms.kappa_basis(x, y)) != beta.values[x][y] {
                return Err(FormError::Inconsistent { x, y });
            }
        }
    }
    Ok(fact)
}
