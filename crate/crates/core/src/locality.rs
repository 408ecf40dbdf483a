//! Locality for current algebras `g ⊗ A` whose coefficient algebra carries
//! orthogonal idempotents `e_s` indexed by points `s`.
//!
//! Supports, diagonal cocycles, restriction to corners `e_U A` by extension
//! by zero, partitions of unity subordinate to a cover, gluing of local
//! primitives, and extension by zero of classes in `Ω̄¹`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::cohomology::{self, CoboundaryWitness, Cochain1, Cocycle2, CohomologyError, CohomologyOptions};
use crate::comm::{CommAlgebra, CommError, Corner};
use crate::current::{current_algebra, CurrentAlgebra, CurrentError};
use crate::kaehler::{kaehler_module, KaehlerError, KaehlerModule};
use crate::lie::LieAlgebra;
use crate::linalg::{self, axpy, format_scalar, is_zero_vec, q, sub_vec, unit_vector, zeros, Scalar, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalityError {
    #[error("coefficient algebra has no unit")]
    NonUnital,
    #[error("invalid cover: {0}")]
    BadCover(String),
    #[error("cocycle is not diagonal: {0}")]
    NotDiagonal(DiagonalViolation),
    #[error("bad primitive for cover element {index}: coboundary differs at basis pair ({i}, {j})")]
    BadPrimitive { index: usize, i: usize, j: usize },
    #[error("point set {inner:?} is not contained in {outer:?}")]
    NotNested { inner: Vec<usize>, outer: Vec<usize> },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Comm(#[from] CommError),
    #[error(transparent)]
    Current(#[from] CurrentError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Kaehler(#[from] KaehlerError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

/// Supports of elements of `g ⊗ A` (flat coordinates `x * dim A + a`).
#[derive(Clone, Debug)]
pub struct SupportStructure {
    pub fibre_dim: usize,
    pub algebra: CommAlgebra,
}

impl SupportStructure {
    pub fn new(fibre_dim: usize, algebra: &CommAlgebra) -> Result<Self, CommError> {
        if algebra.idempotents().is_empty() {
            return Err(CommError::NoIdempotents);
        }
        Ok(SupportStructure {
            fibre_dim,
            algebra: algebra.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.fibre_dim * self.algebra.dim()
    }

    fn times(&self, e: &[Scalar], u: &[Scalar]) -> Vec<Scalar> {
        let da = self.algebra.dim();
        let mut out = zeros(u.len());
        for x in 0..self.fibre_dim {
            let part = &u[x * da..(x + 1) * da];
            if is_zero_vec(part) {
                continue;
            }
            out[x * da..(x + 1) * da].clone_from_slice(&self.algebra.mul(e, part));
        }
        out
    }

    /// Points `s` with `(1 ⊗ e_s) u != 0`.
    pub fn support_of(&self, u: &[Scalar]) -> BTreeSet<usize> {
        self.algebra
            .idempotents()
            .iter()
            .enumerate()
            .filter(|(_, e)| !is_zero_vec(&self.times(&e.coords, u)))
            .map(|(s, _)| s)
            .collect()
    }

    /// Nonzero pieces `(1 ⊗ e_s) u`, plus the remainder `u − Σ_s (1 ⊗ e_s) u`
    /// (tagged `None`, empty support) when the idempotents do not sum to 1.
    pub fn components(&self, u: &[Scalar]) -> Vec<(Option<usize>, Vec<Scalar>)> {
        let mut out = Vec::new();
        let mut rest = u.to_vec();
        for (s, e) in self.algebra.idempotents().iter().enumerate() {
            let piece = self.times(&e.coords, u);
            if !is_zero_vec(&piece) {
                rest = sub_vec(&rest, &piece);
                out.push((Some(s), piece));
            }
        }
        if !is_zero_vec(&rest) {
            out.push((None, rest));
        }
        out
    }
}

/// A pair of elements with disjoint supports on which a cocycle is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalViolation {
    /// Basis indices the two elements were cut out of.
    pub basis: (usize, usize),
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
    pub value: Vec<Scalar>,
}

impl fmt::Display for DiagonalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Scalar]| v.iter().map(format_scalar).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "psi(u, v) = [{}] for u = [{}], v = [{}] with disjoint supports (from basis pair {:?})",
            show(&self.value),
            show(&self.u),
            show(&self.v),
            self.basis
        )
    }
}

/// `ψ(u, v) = 0` whenever `supp u ∩ supp v = ∅`. By bilinearity it suffices
/// to test the point components of basis elements, which is what is done;
/// for algebras like `fun:n ⊗ B` these are the basis elements themselves.
pub fn is_diagonal(psi: &Cocycle2, ss: &SupportStructure) -> Result<(), DiagonalViolation> {
    let n = ss.dim();
    assert_eq!(psi.dim, n, "cocycle lives on g ⊗ A");
    let comps: Vec<Vec<(Option<usize>, Vec<Scalar>)>> =
        (0..n).map(|i| ss.components(&unit_vector(n, i))).collect();
    for i in 0..n {
        for j in i..n {
            for (s, u) in &comps[i] {
                for (t, v) in &comps[j] {
                    let disjoint = s.is_none() || t.is_none() || s != t;
                    if !disjoint {
                        continue;
                    }
                    let value = psi.eval(u, v);
                    if !is_zero_vec(&value) {
                        return Err(DiagonalViolation {
                            basis: (i, j),
                            u: u.clone(),
                            v: v.clone(),
                            value,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The current algebra of a corner `e_U A` and its extension-by-zero map
/// into `g ⊗ A`.
#[derive(Clone, Debug)]
pub struct CornerCurrent {
    pub corner: Corner,
    pub current: CurrentAlgebra,
    /// Image in `g ⊗ A` of each flat basis element of `g ⊗ e_U A`.
    pub extension: Vec<Vec<Scalar>>,
}

impl CornerCurrent {
    pub fn new(g: &LieAlgebra, a: &CommAlgebra, points: &BTreeSet<usize>) -> Result<Self, LocalityError> {
        let corner = a.corner(points)?;
        let current = current_algebra(g, &corner.algebra)?;
        let (dg, da, du) = (g.dim(), a.dim(), corner.dim());
        let included: Vec<Vec<Scalar>> = corner.basis();
        let mut extension = Vec::with_capacity(dg * du);
        for x in 0..dg {
            for inc in &included {
                let mut v = zeros(dg * da);
                v[x * da..(x + 1) * da].clone_from_slice(inc);
                extension.push(v);
            }
        }
        Ok(CornerCurrent {
            corner,
            current,
            extension,
        })
    }

    pub fn dim(&self) -> usize {
        self.extension.len()
    }

    /// Flat corner coordinates of an element of `g ⊗ e_U A`, or `None` if the
    /// element is not supported in `U`.
    pub fn coordinates(&self, u: &[Scalar]) -> Option<Vec<Scalar>> {
        let da = self.corner.idempotent.len();
        let dg = self.current.fibre.dim();
        let mut out = Vec::with_capacity(self.dim());
        for x in 0..dg {
            out.extend(self.corner.coordinates(&u[x * da..(x + 1) * da])?);
        }
        Some(out)
    }
}

/// `ψ_U(ξ, η) = ψ(ξ̃, η̃)` with `~` the extension by zero.
pub fn restrict_cocycle(psi: &Cocycle2, cc: &CornerCurrent) -> Cocycle2 {
    Cocycle2::from_fn(cc.dim(), psi.coeff_dim, |i, j| psi.eval(&cc.extension[i], &cc.extension[j]))
}

pub fn restrict_cochain1(beta: &Cochain1, cc: &CornerCurrent) -> Cochain1 {
    let values: Vec<Vec<Scalar>> = cc.extension.iter().map(|v| beta.apply(v)).collect();
    Cochain1::from_basis_values(cc.dim(), beta.coeff_dim, &values)
}

/// A cover of the point set with an idempotent partition of unity.
#[derive(Clone, Debug)]
pub struct Cover {
    pub sets: Vec<BTreeSet<usize>>,
    /// Disjoint refinement `S_i' ⊆ S_i`: each point goes to the first set
    /// containing it.
    pub refinement: Vec<BTreeSet<usize>>,
    /// `λ_i = Σ_{s ∈ S_i'} e_s`
    pub lambda: Vec<Vec<Scalar>>,
    /// `λ_i' = Σ_{s ∈ S_i} e_s`, equal to 1 on the support of `λ_i`
    pub bump: Vec<Vec<Scalar>>,
    pub corners: Vec<CornerCurrent>,
}

impl Cover {
    pub fn new(g: &LieAlgebra, a: &CommAlgebra, sets: Vec<BTreeSet<usize>>) -> Result<Self, LocalityError> {
        let unit = a.unit().ok_or(LocalityError::NonUnital)?.to_vec();
        let npoints = a.idempotents().len();
        if npoints == 0 {
            return Err(CommError::NoIdempotents.into());
        }
        if sets.is_empty() {
            return Err(LocalityError::BadCover("no sets".into()));
        }
        let mut refinement = vec![BTreeSet::new(); sets.len()];
        for s in 0..npoints {
            let i = sets
                .iter()
                .position(|set| set.contains(&s))
                .ok_or_else(|| LocalityError::BadCover(format!("point {} is not covered", a.points()[s])))?;
            refinement[i].insert(s);
        }
        if let Some(bad) = sets.iter().flatten().find(|&&s| s >= npoints) {
            return Err(LocalityError::BadCover(format!("unknown point index {bad}")));
        }
        let lambda: Vec<Vec<Scalar>> = refinement.iter().map(|r| a.indicator(r)).collect::<Result<_, _>>()?;
        let bump: Vec<Vec<Scalar>> = sets.iter().map(|r| a.indicator(r)).collect::<Result<_, _>>()?;
        let mut total = zeros(a.dim());
        for l in &lambda {
            axpy(&mut total, &q(1), l);
        }
        if total != unit {
            return Err(LocalityError::Internal("partition of unity does not sum to 1".into()));
        }
        for (l, b) in lambda.iter().zip(&bump) {
            if &a.mul(l, b) != l {
                return Err(LocalityError::Internal("bump function is not 1 on the support".into()));
            }
        }
        let corners = sets
            .iter()
            .map(|set| CornerCurrent::new(g, a, set))
            .collect::<Result<_, _>>()?;
        Ok(Cover {
            sets,
            refinement,
            lambda,
            bump,
            corners,
        })
    }
}

/// `β(χ) = Σ_i β_i(λ_i χ)` for local primitives `δβ_i = ψ|_{S_i}`; checks
/// diagonality and the primitives first and `δβ = ψ` at the end.
pub fn glue_primitives(
    psi: &Cocycle2,
    ss: &SupportStructure,
    cover: &Cover,
    primitives: &[Cochain1],
) -> Result<Cochain1, LocalityError> {
    if primitives.len() != cover.corners.len() {
        return Err(LocalityError::Shape(format!(
            "{} primitives for {} cover elements",
            primitives.len(),
            cover.corners.len()
        )));
    }
    is_diagonal(psi, ss).map_err(LocalityError::NotDiagonal)?;
    for (index, (cc, beta)) in cover.corners.iter().zip(primitives).enumerate() {
        if beta.dim != cc.dim() || beta.coeff_dim != psi.coeff_dim {
            return Err(LocalityError::Shape(format!("primitive {index} has the wrong shape")));
        }
        let local = restrict_cocycle(psi, cc);
        let d = beta.coboundary(&cc.current.total);
        if d != local {
            let (i, j) = first_difference(&d, &local);
            return Err(LocalityError::BadPrimitive { index, i, j });
        }
    }
    let a = &ss.algebra;
    let (dg, da) = (ss.fibre_dim, a.dim());
    let m = psi.coeff_dim;
    let mut values = Vec::with_capacity(dg * da);
    for x in 0..dg {
        for k in 0..da {
            let ek = unit_vector(da, k);
            let mut out = zeros(m);
            for ((lambda, cc), beta) in cover.lambda.iter().zip(&cover.corners).zip(primitives) {
                let piece = a.mul(lambda, &ek);
                if is_zero_vec(&piece) {
                    continue;
                }
                let mut chi = zeros(dg * da);
                chi[x * da..(x + 1) * da].clone_from_slice(&piece);
                let coords = cc
                    .coordinates(&chi)
                    .ok_or_else(|| LocalityError::Internal("λ_i χ left the corner".into()))?;
                axpy(&mut out, &q(1), &beta.apply(&coords));
            }
            values.push(out);
        }
    }
    let beta = Cochain1::from_basis_values(dg * da, m, &values);
    let total = current_algebra(&cover.corners[0].current.fibre, a)?;
    if &beta.coboundary(&total.total) != psi {
        return Err(LocalityError::Internal("glued primitive does not bound the cocycle".into()));
    }
    Ok(beta)
}

fn first_difference(a: &Cocycle2, b: &Cocycle2) -> (usize, usize) {
    let n = a.dim;
    for i in 0..n {
        for j in i + 1..n {
            if a.value(i, j) != b.value(i, j) {
                return (i, j);
            }
        }
    }
    (0, 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalIdentity {
    /// Every restriction was exact; the glued primitive.
    GloballyExact(Cochain1),
    /// The restriction to this cover element has a nonzero class.
    LocallyNontrivial { index: usize, class: Vec<Scalar> },
}

/// Restricts `ψ` to every cover element, finds local primitives and glues
/// them when all restrictions are exact.
pub fn local_identity(
    psi: &Cocycle2,
    ss: &SupportStructure,
    cover: &Cover,
    opts: &CohomologyOptions,
) -> Result<LocalIdentity, LocalityError> {
    let mut primitives = Vec::with_capacity(cover.corners.len());
    for (index, cc) in cover.corners.iter().enumerate() {
        let local = restrict_cocycle(psi, cc);
        match cohomology::coboundary_witness(&cc.current.total, &local, opts)? {
            CoboundaryWitness::Exact(beta) => primitives.push(beta),
            CoboundaryWitness::Nontrivial { class } => {
                return Ok(LocalIdentity::LocallyNontrivial { index, class });
            }
        }
    }
    Ok(LocalIdentity::GloballyExact(glue_primitives(psi, ss, cover, &primitives)?))
}

// ---------------------------------------------------------------------------
// One-form classes on corners.

/// `Ω̄¹` of a corner.
#[derive(Clone, Debug)]
pub struct CornerForms {
    pub corner: Corner,
    pub kaehler: KaehlerModule,
}

impl CornerForms {
    pub fn new(a: &CommAlgebra, points: &BTreeSet<usize>) -> Result<Self, LocalityError> {
        let corner = a.corner(points)?;
        let kaehler = kaehler_module(&corner.algebra)?;
        Ok(CornerForms { corner, kaehler })
    }

    pub fn dim(&self) -> usize {
        self.kaehler.omega1bar_dim()
    }
}

/// Applies `f ⊗ f` to a tensor in `B ⊗ B`, `f` given by its columns.
fn tensor_map(t: &[Scalar], f: &[Vec<Scalar>], target: usize) -> Vec<Scalar> {
    let src = f.len();
    let mut out = zeros(target * target);
    for (idx, c) in t.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let (p, r) = (idx / src, idx % src);
        for (p2, x) in f[p].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (r2, y) in f[r].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out[p2 * target + r2] += c * x * y;
            }
        }
    }
    out
}

fn class_of_tensor(k: &KaehlerModule, t: &[Scalar]) -> Vec<Scalar> {
    k.bar(&k.omega1.project(t).expect("tensor length"))
}

fn points_of(set: &BTreeSet<usize>) -> Vec<usize> {
    set.iter().copied().collect()
}

/// Linear map `Ω̄¹(e_W A) → Ω̄¹(e_V A)` induced by extension by zero,
/// `W ⊆ V`.
#[derive(Clone, Debug)]
pub struct FormExtension {
    pub source: CornerForms,
    pub target: CornerForms,
    /// `dim Ω̄¹_V x dim Ω̄¹_W`
    pub matrix: Vec<Vec<Scalar>>,
    inclusion: Vec<Vec<Scalar>>,
}

impl FormExtension {
    pub fn new(a: &CommAlgebra, w: &BTreeSet<usize>, v: &BTreeSet<usize>) -> Result<Self, LocalityError> {
        if !w.is_subset(v) {
            return Err(LocalityError::NotNested {
                inner: points_of(w),
                outer: points_of(v),
            });
        }
        let source = CornerForms::new(a, w)?;
        let target = CornerForms::new(a, v)?;
        let inclusion: Vec<Vec<Scalar>> = source
            .corner
            .basis()
            .iter()
            .map(|b| target.corner.coordinates(b).expect("W-corner lies in the V-corner"))
            .collect();
        let (dw, dv) = (source.corner.dim(), target.corner.dim());
        // the relations of Ω¹_W and the exact forms d(A_W) must die in Ω̄¹_V;
        // for exact forms this is extending the primitive γ by zero
        let mut killed: Vec<Vec<Scalar>> = source.kaehler.omega1.denominator().basis();
        let unit_w = source.corner.algebra.unit().expect("corners are unital").to_vec();
        for b in 0..dw {
            let mut t = zeros(dw * dw);
            for (c, x) in unit_w.iter().enumerate() {
                t[c * dw + b] = x.clone();
            }
            killed.push(t);
        }
        for t in &killed {
            if !is_zero_vec(&class_of_tensor(&target.kaehler, &tensor_map(t, &inclusion, dv))) {
                return Err(LocalityError::Internal("extension by zero is not well defined".into()));
            }
        }
        let columns: Vec<Vec<Scalar>> = (0..source.dim())
            .map(|k| {
                let rep = source.kaehler.representative(&unit_vector(source.dim(), k));
                class_of_tensor(&target.kaehler, &tensor_map(&rep, &inclusion, dv))
            })
            .collect();
        let matrix = (0..target.dim())
            .map(|r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        Ok(FormExtension {
            source,
            target,
            matrix,
            inclusion,
        })
    }

    pub fn apply(&self, class: &[Scalar]) -> Vec<Scalar> {
        let rep = self.source.kaehler.representative(class);
        class_of_tensor(&self.target.kaehler, &tensor_map(&rep, &self.inclusion, self.target.corner.dim()))
    }

    pub fn rank(&self) -> usize {
        Subspace::from_spanning(self.target.dim(), (0..self.source.dim()).map(|k| self.column(k)))
            .expect("target length")
            .dim()
    }

    fn column(&self, k: usize) -> Vec<Scalar> {
        self.matrix.iter().map(|row| row[k].clone()).collect()
    }
}

/// Extension by zero of a class on the corner `W` to the corner `V ⊇ W`.
pub fn extend_form_class(
    a: &CommAlgebra,
    w: &BTreeSet<usize>,
    v: &BTreeSet<usize>,
    class: &[Scalar],
) -> Result<Vec<Scalar>, LocalityError> {
    let ext = FormExtension::new(a, w, v)?;
    if class.len() != ext.source.dim() {
        return Err(LocalityError::Shape(format!(
            "class has {} coordinates, expected {}",
            class.len(),
            ext.source.dim()
        )));
    }
    Ok(ext.apply(class))
}

/// Restriction `Ω̄¹(e_V A) → Ω̄¹(e_U A)`, `c·db ↦ (e_U c)·d(e_U b)`.
pub fn restrict_form_class(
    a: &CommAlgebra,
    v: &BTreeSet<usize>,
    u: &BTreeSet<usize>,
    class: &[Scalar],
) -> Result<Vec<Scalar>, LocalityError> {
    if !u.is_subset(v) {
        return Err(LocalityError::NotNested {
            inner: points_of(u),
            outer: points_of(v),
        });
    }
    let big = CornerForms::new(a, v)?;
    let small = CornerForms::new(a, u)?;
    if class.len() != big.dim() {
        return Err(LocalityError::Shape(format!(
            "class has {} coordinates, expected {}",
            class.len(),
            big.dim()
        )));
    }
    let restriction: Vec<Vec<Scalar>> = big
        .corner
        .basis()
        .iter()
        .map(|b| {
            small
                .corner
                .coordinates(&a.mul(&small.corner.idempotent, b))
                .expect("e_U b lies in the U-corner")
        })
        .collect();
    let rep = big.kaehler.representative(class);
    Ok(class_of_tensor(&small.kaehler, &tensor_map(&rep, &restriction, small.corner.dim())))
}

/// Result of splitting a class on `V ∪ W` into pieces extended from `V` and
/// from `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub union_dim: usize,
    /// Rank of the joint image of both extension maps.
    pub joint_rank: usize,
}

impl Decomposition {
    pub fn spans(&self) -> bool {
        self.joint_rank == self.union_dim
    }
}

/// Every class on `V ∪ W` is a sum of extensions from `V` and from `W`.
pub fn decomposition_check(a: &CommAlgebra, v: &BTreeSet<usize>, w: &BTreeSet<usize>) -> Result<Decomposition, LocalityError> {
    let union: BTreeSet<usize> = v.union(w).copied().collect();
    let ev = FormExtension::new(a, v, &union)?;
    let ew = FormExtension::new(a, w, &union)?;
    let columns = (0..ev.source.dim())
        .map(|k| ev.column(k))
        .chain((0..ew.source.dim()).map(|k| ew.column(k)));
    let joint = Subspace::from_spanning(ev.target.dim(), columns)?;
    Ok(Decomposition {
        union_dim: ev.target.dim(),
        joint_rank: joint.dim(),
    })
}

/// Splits a class `ω` on `V ∪ W` as `ι(λ_V ω) + ι(λ_W ω)` with the sharp
/// partition `λ_V = e_V`, `λ_W = e_{W \ V}`; the result is verified.
pub fn split_class(
    a: &CommAlgebra,
    v: &BTreeSet<usize>,
    w: &BTreeSet<usize>,
    class: &[Scalar],
) -> Result<(Vec<Scalar>, Vec<Scalar>), LocalityError> {
    let union: BTreeSet<usize> = v.union(w).copied().collect();
    let w_only: BTreeSet<usize> = w.difference(v).copied().collect();
    let on_v = restrict_form_class(a, &union, v, class)?;
    let on_w = if w_only.is_empty() {
        zeros(CornerForms::new(a, w)?.dim())
    } else {
        let piece = restrict_form_class(a, &union, &w_only, class)?;
        extend_form_class(a, &w_only, w, &piece)?
    };
    let back = linalg::add_vec(&extend_form_class(a, v, &union, &on_v)?, &extend_form_class(a, w, &union, &on_w)?);
    if back != class {
        return Err(LocalityError::Internal("split does not recover the class".into()));
    }
    Ok((on_v, on_w))
}

/// Given classes on `V` and `W` whose extensions to `V ∪ W` agree, returns
/// the common class on `V ∩ W` extending to both; `None` if the extensions
/// differ.
pub fn common_restriction(
    a: &CommAlgebra,
    v: &BTreeSet<usize>,
    w: &BTreeSet<usize>,
    on_v: &[Scalar],
    on_w: &[Scalar],
) -> Result<Option<Vec<Scalar>>, LocalityError> {
    let union: BTreeSet<usize> = v.union(w).copied().collect();
    let meet: BTreeSet<usize> = v.intersection(w).copied().collect();
    if extend_form_class(a, v, &union, on_v)? != extend_form_class(a, w, &union, on_w)? {
        return Ok(None);
    }
    if meet.is_empty() {
        // both extensions agree and live on disjoint corners, so both vanish
        if !is_zero_vec(on_v) || !is_zero_vec(on_w) {
            return Err(LocalityError::Internal("classes on disjoint corners should vanish".into()));
        }
        return Ok(Some(Vec::new()));
    }
    let common = restrict_form_class(a, v, &meet, on_v)?;
    if extend_form_class(a, &meet, v, &common)? != on_v || extend_form_class(a, &meet, w, &common)? != on_w {
        return Err(LocalityError::Internal("common restriction does not extend back".into()));
    }
    Ok(Some(common))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::current::universal_cocycle;

    fn set(points: &[usize]) -> BTreeSet<usize> {
        points.iter().copied().collect()
    }

    #[test]
    fn supports_of_simple_elements() {
        let a = CommAlgebra::fun(3);
        let ss = SupportStructure::new(3, &a).unwrap();
        let cur = current_algebra(&catalog::sl2(), &a).unwrap();
        // e ⊗ e1
        assert_eq!(ss.support_of(&unit_vector(9, cur.flat(1, 0))), set(&[0]));
        assert!(ss.support_of(&zeros(9)).is_empty());
        let u = linalg::add_vec(&unit_vector(9, cur.flat(1, 0)), &unit_vector(9, cur.flat(1, 1)));
        let v = unit_vector(9, cur.flat(2, 2));
        assert!(ss.support_of(&u).is_disjoint(&ss.support_of(&v)));
        assert!(is_zero_vec(&cur.total.bracket(&u, &v)));
    }

    #[test]
    fn planted_violation_is_reported() {
        let a = CommAlgebra::fun(2);
        let ss = SupportStructure::new(3, &a).unwrap();
        let cur = current_algebra(&catalog::sl2(), &a).unwrap();
        let (i, j) = (cur.flat(1, 0), cur.flat(2, 1));
        let psi = Cocycle2::from_fn(6, 1, |p, r| vec![if (p, r) == (i, j) { q(1) } else { q(0) }]);
        let v = is_diagonal(&psi, &ss).unwrap_err();
        assert_eq!(v.basis, (i, j));
        assert_eq!(v.value, vec![q(1)]);
    }

    #[test]
    fn universal_cocycle_is_diagonal() {
        let a = CommAlgebra::fun(2).tensor(&CommAlgebra::sq2());
        let uc = universal_cocycle(&catalog::sl2(), &a).unwrap();
        let ss = SupportStructure::new(3, &a).unwrap();
        assert!(is_diagonal(&uc.omega, &ss).is_ok());
    }

    #[test]
    fn restriction_commutes_with_coboundary() {
        let g = catalog::sl2();
        let a = CommAlgebra::fun(3).tensor(&CommAlgebra::jets(2));
        let cur = current_algebra(&g, &a).unwrap();
        let values: Vec<Vec<Scalar>> = (0..cur.dim()).map(|i| vec![q(i as i64 - 5), q(1)]).collect();
        let beta = Cochain1::from_basis_values(cur.dim(), 2, &values);
        let psi = beta.coboundary(&cur.total);
        let cc = CornerCurrent::new(&g, &a, &set(&[0, 2])).unwrap();
        assert_eq!(
            restrict_cocycle(&psi, &cc),
            restrict_cochain1(&beta, &cc).coboundary(&cc.current.total)
        );
        // restricting to everything changes nothing
        let all = CornerCurrent::new(&g, &a, &set(&[0, 1, 2])).unwrap();
        assert_eq!(restrict_cocycle(&psi, &all), psi);
    }

    #[test]
    fn cover_partition_of_unity() {
        let a = CommAlgebra::fun(4).tensor(&CommAlgebra::jets(2));
        let cover = Cover::new(&catalog::sl2(), &a, vec![set(&[0, 1]), set(&[1, 2]), set(&[2, 3])]).unwrap();
        assert_eq!(cover.refinement, vec![set(&[0, 1]), set(&[2]), set(&[3])]);
        for (l, b) in cover.lambda.iter().zip(&cover.bump) {
            assert_eq!(&a.mul(l, l), l);
            assert_eq!(&a.mul(l, b), l);
        }
        assert!(matches!(
            Cover::new(&catalog::sl2(), &a, vec![set(&[0, 1])]),
            Err(LocalityError::BadCover(_))
        ));
    }

    #[test]
    fn gluing_restricted_primitives() {
        let g = catalog::sl2();
        let a = CommAlgebra::fun(3).tensor(&CommAlgebra::jets(2));
        let cur = current_algebra(&g, &a).unwrap();
        let ss = SupportStructure::new(3, &a).unwrap();
        let cover = Cover::new(&g, &a, vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        let values: Vec<Vec<Scalar>> = (0..cur.dim()).map(|i| vec![q((i * i) as i64 % 7 - 3)]).collect();
        let beta0 = Cochain1::from_basis_values(cur.dim(), 1, &values);
        let psi = beta0.coboundary(&cur.total);
        let locals: Vec<Cochain1> = cover.corners.iter().map(|cc| restrict_cochain1(&beta0, cc)).collect();
        let beta = glue_primitives(&psi, &ss, &cover, &locals).unwrap();
        assert_eq!(beta.coboundary(&cur.total), psi);

        let zero = Cocycle2::zero(cur.dim(), 1);
        let zeros: Vec<Cochain1> = cover.corners.iter().map(|cc| Cochain1::zero(cc.dim(), 1)).collect();
        assert_eq!(glue_primitives(&zero, &ss, &cover, &zeros).unwrap(), Cochain1::zero(cur.dim(), 1));

        let mut wrong = locals.clone();
        wrong[1].values[0] += q(1);
        assert!(matches!(
            glue_primitives(&psi, &ss, &cover, &wrong),
            Err(LocalityError::BadPrimitive { index: 1, .. })
        ));
    }

    #[test]
    fn form_extension_identity_and_cosheaf_checks() {
        let a = CommAlgebra::fun(3).tensor(&CommAlgebra::sq2());
        let v = set(&[0, 1]);
        let w = set(&[1, 2]);
        let same = FormExtension::new(&a, &v, &v).unwrap();
        assert_eq!(same.matrix, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        let d = decomposition_check(&a, &v, &w).unwrap();
        assert_eq!(d.union_dim, 3);
        assert!(d.spans());
        let class = vec![q(2), q(-1), q(5)];
        let (on_v, on_w) = split_class(&a, &v, &w, &class).unwrap();
        assert_eq!(on_v.len(), 2);
        assert_eq!(on_w.len(), 2);
        // a class at point 2 (index 1) seen from both sides
        let at_two = extend_form_class(&a, &set(&[1]), &v, &[q(3)]).unwrap();
        let at_two_w = extend_form_class(&a, &set(&[1]), &w, &[q(3)]).unwrap();
        assert_eq!(common_restriction(&a, &v, &w, &at_two, &at_two_w).unwrap(), Some(vec![q(3)]));
        let other = extend_form_class(&a, &set(&[2]), &w, &[q(1)]).unwrap();
        assert_eq!(common_restriction(&a, &v, &w, &at_two, &other).unwrap(), None);
    }
}
