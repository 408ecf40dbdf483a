//! Built-in algebras, addressable by name.
//!
//! Lie algebras: `sl2`, `sl3`, `so3`, `heis3`, `abelian:n`, `sl2C` (sl2 over
//! the complex numbers viewed as a 6-dimensional rational algebra), `gl2`,
//! and direct sums `A+B`. Commutative algebras: `jets:n` = Q[t]/(t^n),
//! `sq2` = Q[x,y]/(x^2,y^2), `fun:n` = Q^n pointwise with its point
//! idempotents, and tensor products `A*B` such as `fun:2*sq2`.
//!
//! su(2) has no separate entry: its rational form is `so3`.

use crate::comm::CommAlgebra;
use crate::lie::{elementary, LieAlgebra};
use crate::linalg::{q, Scalar};

pub const LIE_NAMES: &[&str] = &["sl2", "sl3", "so3", "heis3", "abelian:n", "sl2C", "gl2", "A+B"];
pub const COMM_NAMES: &[&str] = &["jets:n", "sq2", "fun:n", "A*B"];

/// Basis `h, e, f` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2() -> LieAlgebra {
    let labels = ["h", "e", "f"].map(String::from).to_vec();
    LieAlgebra::new(labels, &[(0, 1, 1, q(2)), (0, 2, 2, q(-2)), (1, 2, 0, q(1))]).expect("sl2")
}

/// `[e1,e2] = e3` and cyclic.
pub fn so3() -> LieAlgebra {
    let labels = ["e1", "e2", "e3"].map(String::from).to_vec();
    LieAlgebra::new(labels, &[(0, 1, 2, q(1)), (1, 2, 0, q(1)), (2, 0, 1, q(1))]).expect("so3")
}

/// `[x,y] = z`.
pub fn heis3() -> LieAlgebra {
    let labels = ["x", "y", "z"].map(String::from).to_vec();
    LieAlgebra::new(labels, &[(0, 1, 2, q(1))]).expect("heis3")
}

pub fn gl2() -> LieAlgebra {
    let labels = ["E11", "E12", "E21", "E22"].map(String::from).to_vec();
    let mats = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(i, j)| elementary(2, i, j));
    LieAlgebra::from_matrix_basis(labels, &mats).expect("gl2")
}

/// Chevalley basis `h1, h2, e1, e2, e3, f1, f2, f3` of traceless 3x3 matrices.
pub fn sl3() -> LieAlgebra {
    let e = |i, j| elementary(3, i, j);
    let diff = |a: Vec<Vec<Scalar>>, b: Vec<Vec<Scalar>>| -> Vec<Vec<Scalar>> {
        a.iter()
            .zip(&b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
            .collect()
    };
    let mats = vec![
        diff(e(0, 0), e(1, 1)),
        diff(e(1, 1), e(2, 2)),
        e(0, 1),
        e(1, 2),
        e(0, 2),
        e(1, 0),
        e(2, 1),
        e(2, 0),
    ];
    let labels = ["h1", "h2", "e1", "e2", "e3", "f1", "f2", "f3"]
        .map(String::from)
        .to_vec();
    LieAlgebra::from_matrix_basis(labels, &mats).expect("sl3")
}

/// sl2 over C as a rational algebra with basis `h, e, f, ih, ie, if`.
pub fn sl2c() -> LieAlgebra {
    sl2().realified()
}

fn parse_count(s: &str) -> Option<usize> {
    s.parse().ok().filter(|n| *n <= 64)
}

/// Resolves a catalog name to a Lie algebra.
pub fn lie(name: &str) -> Option<LieAlgebra> {
    if let Some((a, b)) = name.split_once('+') {
        return Some(lie(a)?.direct_sum(&lie(b)?));
    }
    match name {
        "sl2" => Some(sl2()),
        "sl3" => Some(sl3()),
        "so3" => Some(so3()),
        "heis3" => Some(heis3()),
        "sl2C" => Some(sl2c()),
        "gl2" => Some(gl2()),
        _ => {
            let n = parse_count(name.strip_prefix("abelian:")?)?;
            Some(LieAlgebra::abelian(n))
        }
    }
}

/// Resolves a catalog name to a commutative algebra.
pub fn comm(name: &str) -> Option<CommAlgebra> {
    if let Some((a, b)) = name.split_once('*') {
        return Some(comm(a)?.tensor(&comm(b)?));
    }
    match name {
        "sq2" => Some(CommAlgebra::sq2()),
        _ => {
            if let Some(n) = name.strip_prefix("jets:") {
                let n = parse_count(n).filter(|n| *n >= 1)?;
                Some(CommAlgebra::jets(n))
            } else {
                let n = parse_count(name.strip_prefix("fun:")?).filter(|n| *n >= 1)?;
                Some(CommAlgebra::fun(n))
            }
        }
    }
}

/// Names exercised by `validate --all`.
pub fn self_test_names() -> (Vec<&'static str>, Vec<&'static str>) {
    (
        vec!["sl2", "sl3", "so3", "heis3", "abelian:3", "sl2C", "gl2", "sl2+so3"],
        vec!["jets:3", "sq2", "fun:3", "fun:2*sq2", "fun:3*jets:2"],
    )
}
