//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. All checks are exact.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ucext::catalog;
use ucext::cli::run_command;
use ucext::cohomology::{self, ce_differential, CoboundaryWitness, Cochain1, Cocycle2, CohomologyOptions};
use ucext::comm::CommAlgebra;
use ucext::current::{self, GValuedOneForm};
use ucext::forms::{factor_through, v_space_and_kappa, BilinearForm};
use ucext::lie::{mat_vec, LieAlgebra, LieError};
use ucext::linalg::{add_vec, is_zero_vec, q, unit_vector, Scalar, SparseMatrix};
use ucext::locality::{self, Cover, LocalIdentity, SupportStructure};

type Check = fn() -> Result<(), String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn opts() -> CohomologyOptions {
    CohomologyOptions::default()
}

fn h_dim(g: &LieAlgebra, p: usize) -> usize {
    cohomology::cohomology(g, p, 1, &opts()).expect("within ceiling").dim()
}

fn rand_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| q(rng.gen_range(-4..=4))).collect()
}

fn set(points: &[usize]) -> BTreeSet<usize> {
    points.iter().copied().collect()
}

fn whitehead() -> Result<(), String> {
    for name in ["sl2", "so3", "sl3", "sl2C"] {
        let g = catalog::lie(name).unwrap();
        let start = Instant::now();
        let (h1, h2) = (h_dim(&g, 1), h_dim(&g, 2));
        ensure(h1 == 0 && h2 == 0, format!("{name}: H¹ = {h1}, H² = {h2}"))?;
        ensure(start.elapsed() < Duration::from_secs(60), format!("{name} took {:?}", start.elapsed()))?;
    }
    Ok(())
}

fn universal_forms() -> Result<(), String> {
    for name in ["sl2", "so3"] {
        let g = catalog::lie(name).unwrap();
        let f = v_space_and_kappa(&g);
        ensure(f.dim() == 1, format!("dim V({name}) = {}", f.dim()))?;
        let fact = factor_through(&f, &BilinearForm::from_matrix(&g.killing_form().matrix)).map_err(|e| e.to_string())?;
        ensure(fact.rank == 1, format!("Killing factorization of {name} vanishes"))?;
    }
    let g = catalog::sl2c();
    let f = v_space_and_kappa(&g);
    ensure(f.dim() == 2, format!("dim V(sl2C) = {}", f.dim()))?;
    let fact = factor_through(&f, &BilinearForm::from_matrix(&g.killing_form().matrix)).map_err(|e| e.to_string())?;
    ensure(fact.kernel_dim() == 1, format!("Killing kernel on V(sl2C) has dim {}", fact.kernel_dim()))?;
    for n in 1..=4 {
        let d = v_space_and_kappa(&LieAlgebra::abelian(n)).dim();
        ensure(d == 0, format!("dim V(abelian:{n}) = {d}"))?;
    }
    for name in ["sl2", "so3", "sl2C", "heis3", "gl2", "abelian:3", "sl2+so3"] {
        let g = catalog::lie(name).unwrap();
        let f = v_space_and_kappa(&g);
        let n = g.dim();
        for d in &f.derivations.basis {
            for x in 0..n {
                for y in x..n {
                    let (ex, ey) = (unit_vector(n, x), unit_vector(n, y));
                    let s = add_vec(&f.kappa(&mat_vec(d, &ex), &ey), &f.kappa(&ex, &mat_vec(d, &ey)));
                    ensure(is_zero_vec(&s), format!("κ not invariant on {name} at ({x}, {y})"))?;
                }
            }
        }
    }
    Ok(())
}

const UNIVERSALITY_CASES: &[(&str, &str, usize)] = &[
    ("sl2", "sq2", 1),
    ("sl2", "fun:2*sq2", 2),
    ("sl2", "jets:3", 0),
    ("sl2", "fun:2", 0),
    ("sl2+so3", "sq2", 2),
];

fn universality() -> Result<(), String> {
    for &(g, a, expected) in UNIVERSALITY_CASES {
        let start = Instant::now();
        let u = current::universality_map(&catalog::lie(g).unwrap(), &catalog::comm(a).unwrap(), 1, &opts())
            .map_err(|e| e.to_string())?;
        ensure(u.h2_dim == expected, format!("({g}, {a}): dim H² = {}, expected {expected}", u.h2_dim))?;
        ensure(
            u.source_dim() == u.v_dim * u.bar_dim,
            format!("({g}, {a}): source dimension bookkeeping"),
        )?;
        ensure(u.h2_dim == u.v_dim * u.bar_dim, format!("({g}, {a}): dim H² ≠ dim V · dim Ω̄¹"))?;
        ensure(u.bijective, format!("({g}, {a}): map is not bijective"))?;
        ensure(start.elapsed() < Duration::from_secs(300), format!("({g}, {a}) took {:?}", start.elapsed()))?;
        match (g, a) {
            ("sl2", "sq2") => ensure(u.bar_dim == 1, "dim Ω̄¹(sq2) ≠ 1")?,
            ("sl2+so3", "sq2") => ensure(u.v_dim == 2, "dim V(sl2 ⊕ so3) ≠ 2")?,
            _ => {}
        }
    }
    Ok(())
}

fn cocycle_identities() -> Result<(), String> {
    let mut algebras: Vec<LieAlgebra> = catalog::self_test_names()
        .0
        .into_iter()
        .map(|n| catalog::lie(n).unwrap())
        .collect();
    for &(g, a, _) in UNIVERSALITY_CASES {
        let uc = current::universal_cocycle(&catalog::lie(g).unwrap(), &catalog::comm(a).unwrap())
            .map_err(|e| e.to_string())?;
        current::check_universal_cocycle(&uc).map_err(|e| format!("({g}, {a}): {e}"))?;
        algebras.push(uc.current.total.clone());
    }
    for g in &algebras {
        for p in 0..=2 {
            let d = ce_differential(g, p + 1, 1).mul(&ce_differential(g, p, 1)).unwrap();
            ensure(d.is_zero(), format!("δ∘δ ≠ 0 in degree {p} on a {}-dim algebra", g.dim()))?;
        }
    }
    Ok(())
}

fn connection_twist() -> Result<(), String> {
    let uc = current::universal_cocycle(&catalog::sl2(), &CommAlgebra::sq2()).map_err(|e| e.to_string())?;
    let total = &uc.current.total;
    let h2 = cohomology::cohomology(total, 2, uc.coeff_dim(), &opts()).map_err(|e| e.to_string())?;
    let base = h2.class_of(uc.omega.as_cochain()).map_err(|e| e.to_string())?;
    ensure(!is_zero_vec(&base), "[ω] vanishes on sl2 ⊗ sq2")?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let od = uc.kaehler.omega1_dim();
    for trial in 0..10 {
        let xi = GValuedOneForm::new(3, od, rand_vec(&mut rng, 3 * od)).unwrap();
        let t = current::twist_difference(&uc, &xi).map_err(|e| e.to_string())?;
        ensure(t.beta.coboundary(total) == t.tau, format!("trial {trial}: δβ ≠ τ"))?;
        let w = cohomology::coboundary_witness_in(total, &t.tau, &h2).map_err(|e| e.to_string())?;
        ensure(matches!(w, CoboundaryWitness::Exact(_)), format!("trial {trial}: τ not exact"))?;
        let moved = h2.class_of(uc.omega.add(&t.tau).as_cochain()).map_err(|e| e.to_string())?;
        ensure(moved == base, format!("trial {trial}: [ω + τ] ≠ [ω]"))?;
    }
    Ok(())
}

fn diagonality() -> Result<(), String> {
    for a in ["fun:3", "fun:2*jets:2"] {
        let alg = catalog::comm(a).unwrap();
        let cur = current::current_algebra(&catalog::sl2(), &alg).map_err(|e| e.to_string())?;
        let z = cohomology::cohomology(&cur.total, 2, 1, &opts()).map_err(|e| e.to_string())?.cocycles;
        ensure(z.dim() > 0, format!("Z²(sl2 ⊗ {a}) is empty"))?;
        let ss = SupportStructure::new(3, &alg).map_err(|e| e.to_string())?;
        for (k, b) in z.basis().into_iter().enumerate() {
            let psi = Cocycle2::from_cochain(cur.dim(), 1, b).map_err(|e| e.to_string())?;
            locality::is_diagonal(&psi, &ss).map_err(|v| format!("{a}: basis cocycle {k}: {v}"))?;
        }
    }
    Ok(())
}

fn gluing() -> Result<(), String> {
    let g = catalog::sl2();
    let a = catalog::comm("fun:4*jets:2").unwrap();
    let cur = current::current_algebra(&g, &a).map_err(|e| e.to_string())?;
    let ss = SupportStructure::new(3, &a).map_err(|e| e.to_string())?;
    let cover = Cover::new(&g, &a, vec![set(&[0, 1]), set(&[1, 2]), set(&[2, 3])]).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..10 {
        let beta0 = Cochain1 {
            dim: cur.dim(),
            coeff_dim: 1,
            values: rand_vec(&mut rng, cur.dim()),
        };
        let psi = beta0.coboundary(&cur.total);
        let mut primitives = Vec::new();
        for cc in &cover.corners {
            let local = locality::restrict_cocycle(&psi, cc);
            match cohomology::coboundary_witness(&cc.current.total, &local, &opts()).map_err(|e| e.to_string())? {
                CoboundaryWitness::Exact(b) => primitives.push(b),
                CoboundaryWitness::Nontrivial { .. } => return Err(format!("trial {trial}: local restriction not exact")),
            }
        }
        let beta = locality::glue_primitives(&psi, &ss, &cover, &primitives).map_err(|e| e.to_string())?;
        ensure(beta.coboundary(&cur.total) == psi, format!("trial {trial}: δβ ≠ ψ"))?;
    }
    // local identity on a general cocycle of this algebra
    let z = cohomology::cohomology(&cur.total, 2, 1, &opts()).map_err(|e| e.to_string())?.cocycles;
    let coeffs = rand_vec(&mut rng, z.dim());
    let psi = Cocycle2::from_cochain(cur.dim(), 1, z.combination(&coeffs).unwrap()).unwrap();
    match locality::local_identity(&psi, &ss, &cover, &opts()).map_err(|e| e.to_string())? {
        LocalIdentity::GloballyExact(beta) => ensure(beta.coboundary(&cur.total) == psi, "glued β does not bound ψ")?,
        LocalIdentity::LocallyNontrivial { index, .. } => {
            return Err(format!("cocycle has a nontrivial restriction to cover element {index}"))
        }
    }
    // both outcomes where H² is nonzero: ω composed to scalars stays nontrivial
    // locally, while an exact cocycle glues
    let b = catalog::comm("fun:2*sq2").unwrap();
    let uc = current::universal_cocycle(&g, &b).map_err(|e| e.to_string())?;
    let ssb = SupportStructure::new(3, &b).map_err(|e| e.to_string())?;
    let cover_b = Cover::new(&g, &b, vec![set(&[0]), set(&[0, 1])]).map_err(|e| e.to_string())?;
    let scalar = uc.omega.compose(&[vec![q(1), q(1)]]);
    match locality::local_identity(&scalar, &ssb, &cover_b, &opts()).map_err(|e| e.to_string())? {
        LocalIdentity::LocallyNontrivial { .. } => {}
        LocalIdentity::GloballyExact(_) => return Err("nontrivial class reported as exact".into()),
    }
    let beta0 = Cochain1 {
        dim: uc.current.dim(),
        coeff_dim: 1,
        values: rand_vec(&mut rng, uc.current.dim()),
    };
    let exact = beta0.coboundary(&uc.current.total);
    match locality::local_identity(&exact, &ssb, &cover_b, &opts()).map_err(|e| e.to_string())? {
        LocalIdentity::GloballyExact(beta) => ensure(beta.coboundary(&uc.current.total) == exact, "δβ ≠ ψ")?,
        LocalIdentity::LocallyNontrivial { .. } => return Err("exact cocycle reported as nontrivial".into()),
    }
    Ok(())
}

fn perfectness() -> Result<(), String> {
    let cur = current::current_algebra(&catalog::sl2(), &CommAlgebra::jets(4)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..25 {
        let x = rand_vec(&mut rng, cur.dim());
        let pairs = cur.total.perfect_witness(&x).map_err(|e| format!("trial {trial}: {e}"))?;
        let mut sum = vec![q(0); cur.dim()];
        for (u, v) in &pairs {
            sum = add_vec(&sum, &cur.total.bracket(u, v));
        }
        ensure(sum == x, format!("trial {trial}: brackets do not reconstruct the element"))?;
    }
    match catalog::heis3().perfect_witness(&unit_vector(3, 0)) {
        Err(LieError::NotInDerivedAlgebra { .. }) => Ok(()),
        other => Err(format!("heis3 x: expected not-in-derived-algebra, got {other:?}")),
    }
}

fn oracle_cross_checks() -> Result<(), String> {
    // heis3 with [x,y] = z. Pairs (x,y), (x,z), (y,z); δβ(u,v) = -β([u,v]) so
    // δ¹ has the single entry -1 at ((x,y), z); the only triple (x,y,z) sees
    // brackets landing on repeated or central arguments, so δ² = 0.
    let heis = catalog::heis3();
    let d1_oracle = SparseMatrix::from_triplets(3, 3, vec![(0, 2, q(-1))]).unwrap();
    ensure(ce_differential(&heis, 1, 1) == d1_oracle, "δ¹(heis3) differs from the hand matrix")?;
    ensure(ce_differential(&heis, 2, 1) == SparseMatrix::zeros(1, 3), "δ²(heis3) ≠ 0")?;
    // dim Z² − dim B² = (3 − 0) − 1
    let h = h_dim(&heis, 2);
    ensure(h == 2, format!("H²(heis3) = {h}, hand oracle 2"))?;
    // abelian: all differentials vanish, H² = Λ²(Q³)* has dimension 3
    let ab = LieAlgebra::abelian(3);
    ensure(ce_differential(&ab, 1, 1).is_zero() && ce_differential(&ab, 2, 1).is_zero(), "abelian δ ≠ 0")?;
    let h = h_dim(&ab, 2);
    ensure(h == 3, format!("H²(abelian:3) = {h}, hand oracle 3"))
}

const CLI_SUITE: &[&[&str]] = &[
    &["validate", "--all"],
    &["info", "sl3"],
    &["killing", "sl2"],
    &["derivations", "heis3"],
    &["witness", "sl2", "--element", "1,2,-1/3"],
    &["vform", "sl2C"],
    &["h2", "heis3"],
    &["kaehler", "sq2"],
    &["omegabar", "fun:2*sq2"],
    &["current", "sl2", "jets:2"],
    &["cocycle-check", "sl2", "fun:2*sq2"],
    &["universality", "sl2", "sq2"],
    &["twist", "sl2", "sq2", "--seed", "3"],
    &["glue-demo", "sl2", "fun:4*jets:2", "--cover", "1,2;2,3;3,4", "--seed", "9"],
];

fn determinism() -> Result<(), String> {
    let library_run = || -> Vec<String> {
        CLI_SUITE
            .iter()
            .map(|args| {
                let argv = std::iter::once("ucext").chain(args.iter().copied()).chain(["--format", "json"]);
                run_command(argv).stdout
            })
            .collect()
    };
    let binary_run = || -> Result<Vec<String>, String> {
        CLI_SUITE
            .iter()
            .map(|args| {
                let out = Command::new(env!("CARGO_BIN_EXE_ucext"))
                    .args(args.iter())
                    .args(["--format", "json"])
                    .output()
                    .map_err(|e| e.to_string())?;
                if !out.status.success() {
                    return Err(format!("{args:?} exited with {:?}", out.status.code()));
                }
                String::from_utf8(out.stdout).map_err(|e| e.to_string())
            })
            .collect()
    };
    let first = library_run();
    let second = library_run();
    ensure(first == second, "library reports differ between runs")?;
    let bin1 = binary_run()?;
    let bin2 = binary_run()?;
    ensure(bin1 == bin2, "binary reports differ between runs")?;
    ensure(bin1 == first, "binary and library reports differ")?;
    for (args, report) in CLI_SUITE.iter().zip(&first) {
        let v: serde_json::Value = serde_json::from_str(report).map_err(|e| e.to_string())?;
        ensure(v["status"] == "ok", format!("{args:?}: status {}", v["status"]))?;
    }
    Ok(())
}

fn main() {
    let criteria: &[(&str, Check)] = &[
        ("1 Whitehead: H¹ = H² = 0 for sl2, so3, sl3, sl2C", whitehead),
        ("2 universal invariant forms and κ-invariance", universal_forms),
        ("3 universality map for current algebras", universality),
        ("4 cocycle identities and δ∘δ = 0", cocycle_identities),
        ("5 connection twists are exact", connection_twist),
        ("6 cocycles are diagonal", diagonality),
        ("7 gluing local primitives and local identity", gluing),
        ("8 perfectness witnesses", perfectness),
        ("9 hand-computed cohomology oracles", oracle_cross_checks),
        ("10 byte-identical CLI reports", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS criterion {name} ({secs:.2}s)"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
