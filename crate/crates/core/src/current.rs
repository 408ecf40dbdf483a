//! Current algebras `g ⊗ A`, the universal cocycle
//! `ω(x⊗a, y⊗b) = κ(x,y) ⊗ [a·db]` with values in `V(g) ⊗ Ω̄¹_A`, connection
//! twists and the universality map `φ ↦ [φ∘ω]`.
//!
//! Flat index of `x ⊗ a` is `x * dim A + a`. Coefficients of `ω` are indexed
//! by `v * dim Ω̄¹ + w`.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::cohomology::{self, Cochain1, Cocycle2, CohomologyError, CohomologyOptions};
use crate::comm::{CommAlgebra, CommError};
use crate::forms::{v_space_and_kappa, UniversalFormSpace};
use crate::kaehler::{kaehler_module, KaehlerError, KaehlerModule};
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{axpy, is_zero_vec, q, unit_vector, zeros, LinalgError, Scalar, SparseMatrix};
use crate::locality::{self, SupportStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurrentError {
    #[error("coefficient algebra has no unit")]
    NonUnital,
    #[error("fibre is not semisimple")]
    NotSemisimple,
    #[error("no local unit: no sum of idempotents fixes basis element {basis}")]
    NoLocalUnit { basis: usize },
    #[error("cocycle is not diagonal: {0}")]
    NotDiagonal(String),
    #[error("one-form has {found} coordinates, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Comm(#[from] CommError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<KaehlerError> for CurrentError {
    fn from(e: KaehlerError) -> Self {
        match e {
            KaehlerError::NonUnital => CurrentError::NonUnital,
            KaehlerError::Linalg(l) => CurrentError::Linalg(l),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CurrentAlgebra {
    pub fibre: LieAlgebra,
    pub coeffs: CommAlgebra,
    pub total: LieAlgebra,
}

impl CurrentAlgebra {
    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    pub fn flat(&self, x: usize, a: usize) -> usize {
        x * self.coeffs.dim() + a
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.coeffs.dim(), i % self.coeffs.dim())
    }

    /// `Σ x_i b_i ⊗ a` in flat coordinates.
    pub fn tensor(&self, x: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        let da = self.coeffs.dim();
        let mut out = zeros(self.dim());
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (k, ak) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                out[i * da + k] = xi * ak;
            }
        }
        out
    }

    /// `x ↦ x ⊗ 1`.
    pub fn constant(&self, x: &[Scalar]) -> Result<Vec<Scalar>, CurrentError> {
        let unit = self.coeffs.unit().ok_or(CurrentError::NonUnital)?.to_vec();
        Ok(self.tensor(x, &unit))
    }

    /// The `A`-component of fibre index `x` of an element.
    pub fn component<'a>(&self, u: &'a [Scalar], x: usize) -> &'a [Scalar] {
        let da = self.coeffs.dim();
        &u[x * da..(x + 1) * da]
    }
}

pub fn current_algebra(g: &LieAlgebra, a: &CommAlgebra) -> Result<CurrentAlgebra, CurrentError> {
    let (dg, da) = (g.dim(), a.dim());
    let mut labels = Vec::with_capacity(dg * da);
    for x in g.labels() {
        for b in a.labels() {
            labels.push(format!("{x}⊗{b}"));
        }
    }
    let products: Vec<Vec<Vec<Scalar>>> = (0..da)
        .map(|i| (0..da).map(|j| a.basis_product(i, j)).collect())
        .collect();
    let mut entries = Vec::new();
    for ((x, y), bracket) in g.upper_brackets() {
        for p in 0..da {
            for r in 0..da {
                for (c, m) in products[p][r].iter().enumerate().filter(|(_, m)| !m.is_zero()) {
                    for (z, s) in bracket {
                        entries.push((x * da + p, y * da + r, z * da + c, s * m));
                    }
                }
            }
        }
    }
    let total = LieAlgebra::new(labels, &entries)?;
    Ok(CurrentAlgebra {
        fibre: g.clone(),
        coeffs: a.clone(),
        total,
    })
}

/// `ω` together with everything needed to interpret its values.
#[derive(Clone, Debug)]
pub struct UniversalCocycle {
    pub current: CurrentAlgebra,
    pub forms: UniversalFormSpace,
    pub kaehler: KaehlerModule,
    pub omega: Cocycle2,
    pub note: Option<String>,
}

impl UniversalCocycle {
    pub fn v_dim(&self) -> usize {
        self.forms.dim()
    }

    pub fn bar_dim(&self) -> usize {
        self.kaehler.omega1bar_dim()
    }

    pub fn coeff_dim(&self) -> usize {
        self.v_dim() * self.bar_dim()
    }

    /// `ω(b_i, b_j)` straight from the defining formula, in either order.
    pub fn evaluate_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let (x, a) = self.current.split(i);
        let (y, b) = self.current.split(j);
        tensor_vec(self.forms.kappa_basis(x, y), self.kaehler.bar_basis(a, b))
    }
}

/// `v ⊗ w` with index `i * len(w) + j`.
pub fn tensor_vec(v: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
    let mut out = zeros(v.len() * w.len());
    for (i, x) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, y) in w.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out[i * w.len() + j] = x * y;
        }
    }
    out
}

pub fn universal_cocycle(g: &LieAlgebra, a: &CommAlgebra) -> Result<UniversalCocycle, CurrentError> {
    let kaehler = kaehler_module(a)?;
    let current = current_algebra(g, a)?;
    let forms = v_space_and_kappa(g);
    let m = forms.dim() * kaehler.omega1bar_dim();
    let note = if kaehler.omega1bar_dim() == 0 {
        Some("Ω̄¹ = 0, so the universal cocycle is zero".to_string())
    } else if forms.dim() == 0 {
        Some("V(g) = 0, so the universal cocycle is zero".to_string())
    } else {
        None
    };
    let n = current.dim();
    let omega = Cocycle2::from_fn(n, m, |i, j| {
        let (x, p) = current.split(i);
        let (y, r) = current.split(j);
        tensor_vec(forms.kappa_basis(x, y), kaehler.bar_basis(p, r))
    });
    Ok(UniversalCocycle {
        current,
        forms,
        kaehler,
        omega,
        note,
    })
}

/// An element of `g ⊗ Ω¹_A`, coordinates at `x * dim Ω¹ + r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GValuedOneForm {
    pub fibre_dim: usize,
    pub omega_dim: usize,
    pub coords: Vec<Scalar>,
}

impl GValuedOneForm {
    pub fn new(fibre_dim: usize, omega_dim: usize, coords: Vec<Scalar>) -> Result<Self, CurrentError> {
        if coords.len() != fibre_dim * omega_dim {
            return Err(CurrentError::Shape {
                expected: fibre_dim * omega_dim,
                found: coords.len(),
            });
        }
        Ok(GValuedOneForm {
            fibre_dim,
            omega_dim,
            coords,
        })
    }

    pub fn zero(fibre_dim: usize, omega_dim: usize) -> Self {
        GValuedOneForm {
            fibre_dim,
            omega_dim,
            coords: zeros(fibre_dim * omega_dim),
        }
    }

    /// `x ⊗ w` for a fibre element `x` and `w ∈ Ω¹`.
    pub fn simple(x: &[Scalar], w: &[Scalar]) -> Self {
        GValuedOneForm {
            fibre_dim: x.len(),
            omega_dim: w.len(),
            coords: tensor_vec(x, w),
        }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        let od = self.omega_dim;
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / od, idx % od, c))
    }
}

/// The difference of the cocycles of two connections differing by `ad Ξ`,
/// and its primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    pub tau: Cocycle2,
    pub beta: Cochain1,
}

/// `τ(ξ, η) = [κ(ξ, [Ξ, η])]` and `β(χ) = [κ(Ξ, χ)]`, with `δβ = τ`
/// verified on every basis pair.
pub fn twist_difference(uc: &UniversalCocycle, xi: &GValuedOneForm) -> Result<Twist, CurrentError> {
    let cur = &uc.current;
    let g = &cur.fibre;
    let dg = g.dim();
    let da = cur.coeffs.dim();
    let od = uc.kaehler.omega1_dim();
    if xi.fibre_dim != dg || xi.omega_dim != od {
        return Err(CurrentError::Shape {
            expected: dg * od,
            found: xi.coords.len(),
        });
    }
    let m = uc.coeff_dim();
    // [b_c · ω_r] in Ω̄¹
    let acted: Vec<Vec<Vec<Scalar>>> = (0..da)
        .map(|c| {
            (0..od)
                .map(|r| uc.kaehler.bar(&uc.kaehler.act(&unit_vector(da, c), &unit_vector(od, r))))
                .collect()
        })
        .collect();
    // Σ_c coeff_c [b_c · ω_r]
    let acted_by = |a: &[Scalar], r: usize| -> Vec<Scalar> {
        let mut out = zeros(uc.bar_dim());
        for (c, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            axpy(&mut out, x, &acted[c][r]);
        }
        out
    };
    let beta_values: Vec<Vec<Scalar>> = (0..cur.dim())
        .map(|j| {
            let (y, b) = cur.split(j);
            let eb = unit_vector(da, b);
            let mut out = zeros(m);
            for (z, r, c) in xi.terms() {
                let v = tensor_vec(uc.forms.kappa_basis(z, y), &acted_by(&eb, r));
                axpy(&mut out, c, &v);
            }
            out
        })
        .collect();
    let beta = Cochain1::from_basis_values(cur.dim(), m, &beta_values);
    let tau = Cocycle2::from_fn(cur.dim(), m, |i, j| {
        let (x, p) = cur.split(i);
        let (y, r2) = cur.split(j);
        let ab = cur.coeffs.basis_product(p, r2);
        let ex = unit_vector(dg, x);
        let mut out = zeros(m);
        for (z, r, c) in xi.terms() {
            let zy = g.bracket(&unit_vector(dg, z), &unit_vector(dg, y));
            let v = tensor_vec(&uc.forms.kappa(&ex, &zy), &acted_by(&ab, r));
            axpy(&mut out, c, &v);
        }
        out
    });
    if beta.coboundary(&cur.total) != tau {
        return Err(CurrentError::Internal("twist is not the coboundary of its primitive".into()));
    }
    Ok(Twist { tau, beta })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universality {
    pub v_dim: usize,
    pub bar_dim: usize,
    pub coeff_dim: usize,
    pub h2_dim: usize,
    /// Columns indexed by `r * m + s` for the elementary map sending
    /// coordinate `r` of `V(g) ⊗ Ω̄¹` to the `s`-th unit vector.
    pub matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
    pub bijective: bool,
}

impl Universality {
    pub fn source_dim(&self) -> usize {
        self.v_dim * self.bar_dim * self.coeff_dim
    }
}

/// Matrix of `Hom(V(g) ⊗ Ω̄¹_A, Q^m) → H²(g ⊗ A, Q^m)`, `φ ↦ [φ∘ω]`.
pub fn universality_map(
    g: &LieAlgebra,
    a: &CommAlgebra,
    m: usize,
    opts: &CohomologyOptions,
) -> Result<Universality, CurrentError> {
    if !g.is_semisimple() {
        return Err(CurrentError::NotSemisimple);
    }
    if !a.is_unital() {
        return Err(CurrentError::NonUnital);
    }
    let n = g.dim() * a.dim();
    let c3 = cohomology::binomial(n, 3).saturating_mul(m);
    if c3 > opts.max_cochain {
        return Err(CohomologyError::ResourceLimit {
            needed: c3,
            ceiling: opts.max_cochain,
        }
        .into());
    }
    let uc = universal_cocycle(g, a)?;
    universality_for(&uc, m, opts)
}

pub fn universality_for(uc: &UniversalCocycle, m: usize, opts: &CohomologyOptions) -> Result<Universality, CurrentError> {
    let h2 = cohomology::cohomology(&uc.current.total, 2, m, opts)?;
    let k = uc.coeff_dim();
    let mut columns = Vec::with_capacity(k * m);
    for r in 0..k {
        for s in 0..m {
            let mut phi = vec![zeros(k); m];
            phi[s][r] = q(1);
            let composed = uc.omega.compose(&phi);
            columns.push(h2.class_of(composed.as_cochain())?);
        }
    }
    let rows = h2.dim();
    let matrix: Vec<Vec<Scalar>> = (0..rows)
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect();
    let rank = SparseMatrix::from_columns(rows, &columns)?.rank();
    Ok(Universality {
        v_dim: uc.v_dim(),
        bar_dim: uc.bar_dim(),
        coeff_dim: m,
        h2_dim: rows,
        matrix,
        rank,
        bijective: rank == rows && rank == k * m,
    })
}

/// Adjoins a unit to `A` and extends a cocycle on `g ⊗ A` to `g ⊗ A⁺` by
/// `ψ⁺(f, x⊗1) = ψ(f, x⊗λ)` with `λ` a sum of idempotents fixing `f`.
/// In `g ⊗ A⁺` the unit is coefficient index 0 and `b_k` sits at `k + 1`.
pub fn adjoin_unit_extend(
    g: &LieAlgebra,
    a: &CommAlgebra,
    psi: Option<&Cocycle2>,
) -> Result<(CommAlgebra, Option<Cocycle2>), CurrentError> {
    let plus = a.adjoin_unit();
    let Some(psi) = psi else {
        return Ok((plus, None));
    };
    let (dg, da) = (g.dim(), a.dim());
    let m = psi.coeff_dim;
    if psi.dim != dg * da {
        return Err(CurrentError::Shape {
            expected: dg * da,
            found: psi.dim,
        });
    }
    let n_plus = dg * (da + 1);
    if psi.is_zero() {
        return Ok((plus, Some(Cocycle2::zero(n_plus, m))));
    }
    if a.idempotents().is_empty() {
        return Err(CurrentError::NoLocalUnit { basis: 0 });
    }
    let ss = SupportStructure::new(dg, a)?;
    if let Err(v) = locality::is_diagonal(psi, &ss) {
        return Err(CurrentError::NotDiagonal(v.to_string()));
    }
    // local unit for each basis element of A
    let mut local_units = Vec::with_capacity(da);
    for k in 0..da {
        let ek = unit_vector(da, k);
        let support: BTreeSet<usize> = a.support(&ek)?;
        let lambda = a.indicator(&support)?;
        if a.mul(&lambda, &ek) != ek {
            return Err(CurrentError::NoLocalUnit { basis: k });
        }
        local_units.push(lambda);
    }
    let old = |x: usize, k: usize| x * da + k;
    let extended = Cocycle2::from_fn(n_plus, m, |i, j| {
        let (x, p) = (i / (da + 1), i % (da + 1));
        let (y, r) = (j / (da + 1), j % (da + 1));
        match (p, r) {
            (0, 0) => zeros(m),
            (0, r) => {
                let u = unit_vector(dg * da, old(y, r - 1));
                let v = spread(dg, da, unit_vector(dg, x), &local_units[r - 1]);
                psi.eval(&v, &u)
            }
            (p, 0) => {
                let u = unit_vector(dg * da, old(x, p - 1));
                let v = spread(dg, da, unit_vector(dg, y), &local_units[p - 1]);
                psi.eval(&u, &v)
            }
            (p, r) => psi.value(old(x, p - 1), old(y, r - 1)),
        }
    });
    Ok((plus, Some(extended)))
}

fn spread(dg: usize, da: usize, x: Vec<Scalar>, a: &[Scalar]) -> Vec<Scalar> {
    let mut out = zeros(dg * da);
    for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (k, ak) in a.iter().enumerate() {
            out[i * da + k] = xi * ak;
        }
    }
    out
}

/// Checks alternation of the raw formula and the cocycle identity of `ω`.
pub fn check_universal_cocycle(uc: &UniversalCocycle) -> Result<(), String> {
    let n = uc.current.dim();
    for i in 0..n {
        for j in i..n {
            let s = crate::linalg::add_vec(&uc.evaluate_basis(i, j), &uc.evaluate_basis(j, i));
            if !is_zero_vec(&s) {
                return Err(format!("not alternating at ({i}, {j})"));
            }
        }
    }
    match uc.omega.cocycle_defect(&uc.current.total) {
        None => Ok(()),
        Some((i, j, k, _)) => Err(format!("cocycle identity fails at ({i}, {j}, {k})")),
    }
}
