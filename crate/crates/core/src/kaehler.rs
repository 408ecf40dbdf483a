//! Kähler differentials of a finite-dimensional unital commutative algebra.
//!
//! `Ω¹ = (A ⊗ A) / span{c⊗ab − ca⊗b − cb⊗a}`, where the pair of basis
//! indices `(c, b)` stands for `b_c · d(b_b)` at flat index `c * n + b`.
//! `d(a) = [1 ⊗ a]` and `Ω̄¹ = Ω¹ / dA`.

use num_traits::Zero;
use thiserror::Error;

use crate::comm::CommAlgebra;
use crate::linalg::{axpy, is_zero_vec, q, unit_vector, zeros, LinalgError, QuotientSpace, Scalar, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KaehlerError {
    #[error("algebra has no unit; adjoin one first")]
    NonUnital,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug)]
pub struct KaehlerModule {
    pub parent: CommAlgebra,
    /// `Ω¹` as a quotient of `A ⊗ A`
    pub omega1: QuotientSpace,
    /// `d(b_i)` in `Ω¹` coordinates
    d_table: Vec<Vec<Scalar>>,
    /// `Ω̄¹` as a quotient of `Ω¹`
    pub omega1bar: QuotientSpace,
    /// `[b_a · d b_b]` in `Ω̄¹` coordinates
    bar_table: Vec<Vec<Vec<Scalar>>>,
}

pub fn kaehler_module(alg: &CommAlgebra) -> Result<KaehlerModule, KaehlerError> {
    let unit = alg.unit().ok_or(KaehlerError::NonUnital)?.to_vec();
    let n = alg.dim();
    let nn = n * n;
    let products: Vec<Vec<Vec<Scalar>>> = (0..n)
        .map(|i| (0..n).map(|j| alg.basis_product(i, j)).collect())
        .collect();
    let mut relations = Vec::new();
    for c in 0..n {
        for a in 0..n {
            for b in a..n {
                // c·d(ab) − (ca)·db − (cb)·da
                let mut row: Vec<(usize, Scalar)> = Vec::new();
                for (k, x) in products[a][b].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    row.push((c * n + k, x.clone()));
                }
                for (k, x) in products[c][a].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    row.push((k * n + b, -x));
                }
                for (k, x) in products[c][b].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    row.push((k * n + a, -x));
                }
                relations.push(row);
            }
        }
    }
    let leibniz = Subspace::from_sparse_spanning(nn, relations);
    let omega1 = QuotientSpace::new(nn, leibniz)?;
    let d_table: Vec<Vec<Scalar>> = (0..n)
        .map(|a| omega1.project(&one_form(n, &unit, &unit_vector(n, a))))
        .collect::<Result<_, _>>()?;
    let exact = Subspace::from_spanning(omega1.dim(), d_table.iter().cloned())?;
    let omega1bar = QuotientSpace::new(omega1.dim(), exact)?;
    let mut bar_table = Vec::with_capacity(n);
    for a in 0..n {
        let mut row = Vec::with_capacity(n);
        for b in 0..n {
            let w = omega1.project(&unit_vector(nn, a * n + b))?;
            row.push(omega1bar.project(&w)?);
        }
        bar_table.push(row);
    }
    Ok(KaehlerModule {
        parent: alg.clone(),
        omega1,
        d_table,
        omega1bar,
        bar_table,
    })
}

/// The tensor `c ⊗ b` in `A ⊗ A`.
fn one_form(n: usize, c: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = zeros(n * n);
    for (i, x) in c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i * n + j] += x * y;
        }
    }
    out
}

impl KaehlerModule {
    pub fn algebra_dim(&self) -> usize {
        self.parent.dim()
    }

    pub fn omega1_dim(&self) -> usize {
        self.omega1.dim()
    }

    pub fn omega1bar_dim(&self) -> usize {
        self.omega1bar.dim()
    }

    /// Labels `c·db` of the representative pairs spanning `Ω¹`.
    pub fn omega1_labels(&self) -> Vec<String> {
        let n = self.algebra_dim();
        let labels = self.parent.labels();
        let unit = self.parent.unit().map(|u| u.to_vec());
        self.omega1
            .representative_columns()
            .iter()
            .map(|&idx| {
                let (c, b) = (idx / n, idx % n);
                if unit.as_deref() == Some(&unit_vector(n, c)[..]) {
                    format!("d{}", labels[b])
                } else {
                    format!("{}·d{}", labels[c], labels[b])
                }
            })
            .collect()
    }

    /// `d(a)` in `Ω¹` coordinates.
    pub fn d(&self, a: &[Scalar]) -> Vec<Scalar> {
        let mut out = zeros(self.omega1_dim());
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            axpy(&mut out, x, &self.d_table[i]);
        }
        out
    }

    /// `c · db` in `Ω¹` coordinates.
    pub fn form(&self, c: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        self.omega1
            .project(&one_form(self.algebra_dim(), c, b))
            .expect("tensor has the ambient length")
    }

    /// Module action `a · w` on `Ω¹`, induced from the first tensor slot.
    pub fn act(&self, a: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
        let n = self.algebra_dim();
        let lifted = self.omega1.lift(w).expect("Ω¹ coordinates");
        let mut out = zeros(n * n);
        for (idx, x) in lifted.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let (c, b) = (idx / n, idx % n);
            let ac = self.parent.mul(a, &unit_vector(n, c));
            for (k, y) in ac.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out[k * n + b] += x * y;
            }
        }
        self.omega1.project(&out).expect("ambient length")
    }

    /// Class in `Ω̄¹` of an element of `Ω¹`.
    pub fn bar(&self, w: &[Scalar]) -> Vec<Scalar> {
        self.omega1bar.project(w).expect("Ω¹ coordinates")
    }

    /// `[b_a · d b_b]` in `Ω̄¹`.
    pub fn bar_basis(&self, a: usize, b: usize) -> &[Scalar] {
        &self.bar_table[a][b]
    }

    /// `[a · db]` in `Ω̄¹` for arbitrary elements.
    pub fn bar_form(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = zeros(self.omega1bar_dim());
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                axpy(&mut out, &(x * y), &self.bar_table[i][j]);
            }
        }
        out
    }

    /// A representative of an `Ω̄¹` class as a tensor in `A ⊗ A`.
    pub fn representative(&self, class: &[Scalar]) -> Vec<Scalar> {
        let w = self.omega1bar.lift(class).expect("Ω̄¹ coordinates");
        self.omega1.lift(&w).expect("Ω¹ coordinates")
    }

    /// Checks the Leibniz rule and `d(1) = 0` on all basis pairs.
    pub fn leibniz_holds(&self) -> bool {
        let n = self.algebra_dim();
        let unit = self.parent.unit().expect("unital").to_vec();
        if !is_zero_vec(&self.d(&unit)) {
            return false;
        }
        (0..n).all(|a| {
            (a..n).all(|b| {
                let ea = unit_vector(n, a);
                let eb = unit_vector(n, b);
                let lhs = self.d(&self.parent.mul(&ea, &eb));
                let mut rhs = self.act(&ea, &self.d(&eb));
                axpy(&mut rhs, &q(1), &self.act(&eb, &self.d(&ea)));
                lhs == rhs
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_polynomials_have_no_closed_forms_mod_exact() {
        let k = kaehler_module(&CommAlgebra::jets(3)).unwrap();
        assert_eq!(k.omega1_dim(), 2);
        assert_eq!(k.omega1bar_dim(), 0);
        assert!(k.leibniz_holds());
        // dt and t·dt are independent; 3t²dt = d(t³) = 0
        let t = unit_vector(3, 1);
        let t2 = unit_vector(3, 2);
        let dt = k.d(&t);
        assert!(!is_zero_vec(&dt));
        assert!(!is_zero_vec(&k.act(&t, &dt)));
        assert!(is_zero_vec(&k.act(&t2, &dt)));
    }

    #[test]
    fn functions_on_points_have_no_differentials() {
        let k = kaehler_module(&CommAlgebra::fun(2)).unwrap();
        assert_eq!(k.omega1_dim(), 0);
        assert_eq!(k.omega1bar_dim(), 0);
    }

    #[test]
    fn square_zero_plane() {
        let a = CommAlgebra::sq2();
        let k = kaehler_module(&a).unwrap();
        assert_eq!(k.omega1_dim(), 4);
        assert_eq!(k.omega1bar_dim(), 1);
        assert!(k.leibniz_holds());
        let (x, y) = (unit_vector(4, 1), unit_vector(4, 2));
        let x_dy = k.bar_form(&x, &y);
        let y_dx = k.bar_form(&y, &x);
        assert!(!is_zero_vec(&x_dy));
        assert_eq!(x_dy, y_dx.iter().map(|c| -c).collect::<Vec<_>>());
        assert_eq!(k.omega1_labels().len(), 4);
    }

    #[test]
    fn idempotent_splitting_multiplies_dimension() {
        for s in 1..=3 {
            let a = CommAlgebra::fun(s).tensor(&CommAlgebra::sq2());
            let k = kaehler_module(&a).unwrap();
            assert_eq!(k.omega1bar_dim(), s);
            assert_eq!(k.omega1_dim(), 4 * s);
        }
    }

    #[test]
    fn idempotents_are_closed() {
        let a = CommAlgebra::fun(3).tensor(&CommAlgebra::jets(2));
        let k = kaehler_module(&a).unwrap();
        for e in a.idempotents() {
            assert!(is_zero_vec(&k.d(&e.coords)));
        }
    }

    #[test]
    fn non_unital_is_rejected() {
        let ideal = CommAlgebra::new(vec!["t".into()], &[], None, Vec::new()).unwrap();
        assert_eq!(kaehler_module(&ideal).unwrap_err(), KaehlerError::NonUnital);
    }
}
