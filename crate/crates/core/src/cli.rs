//! Command-line front end. [`run_command`] does all the work and returns a
//! [`Report`]; the binary only prints it and exits with its code.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a checked property failed,
//! 3 resource ceiling hit, 64 usage error.

use std::collections::BTreeSet;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::catalog;
use crate::cohomology::{self, CoboundaryWitness, Cochain1, CochainSpace, CohomologyError, CohomologyOptions, DEFAULT_MAX_COCHAIN};
use crate::comm::CommAlgebra;
use crate::current::{self, CurrentError, GValuedOneForm};
use crate::document::{self, matrix_json, resolve, vector_json, Algebra, DocumentError};
use crate::forms::{factor_through, v_space_and_kappa, BilinearForm, FormError};
use crate::kaehler::{kaehler_module, KaehlerError};
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{format_scalar, is_zero_vec, q, unit_vector, Scalar};
use crate::locality::{self, Cover, LocalIdentity, LocalityError, SupportStructure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "ucext", version, about = "Exact invariant forms, Lie algebra cohomology and universal cocycles of current algebras")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Ceiling on the dimension of any cochain space
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COCHAIN)]
    max_cochain: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an algebra, or every catalog algebra with --all
    Validate {
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Basis, structure constants and basic properties
    Info { name: String },
    /// Killing form and the semisimplicity verdict
    Killing { name: String },
    /// Basis of the derivation algebra
    Derivations { name: String },
    /// Write an element of a perfect algebra as a sum of brackets
    Witness {
        name: String,
        /// Comma-separated coordinates or a basis label
        #[arg(long)]
        element: String,
    },
    /// Universal invariant form space V(g) and the Killing factorization
    Vform { name: String },
    /// Cohomology with trivial coefficients
    H2 {
        name: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Dimension of the coefficient space Q^m
        #[arg(long, default_value_t = 1)]
        coeff: usize,
    },
    /// Kähler differentials of a commutative algebra
    Kaehler { name: String },
    /// One-forms modulo exact forms
    Omegabar { name: String },
    /// The current algebra g ⊗ A
    Current { lie: String, comm: String },
    /// Check the universal cocycle of g ⊗ A
    CocycleCheck { lie: String, comm: String },
    /// Matrix of Hom(V(g) ⊗ Ω̄¹, Q^m) → H²(g ⊗ A, Q^m)
    Universality {
        lie: String,
        comm: String,
        #[arg(long, default_value_t = 1)]
        coeff: usize,
    },
    /// Random connection twists and their primitives
    Twist {
        lie: String,
        comm: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Glue local primitives of a random coboundary over a cover
    GlueDemo {
        lie: String,
        comm: String,
        /// Point sets separated by ';', points by ',', e.g. "1,2;2,3"
        #[arg(long)]
        cover: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Info { .. } => "info",
            Command::Killing { .. } => "killing",
            Command::Derivations { .. } => "derivations",
            Command::Witness { .. } => "witness",
            Command::Vform { .. } => "vform",
            Command::H2 { .. } => "h2",
            Command::Kaehler { .. } => "kaehler",
            Command::Omegabar { .. } => "omegabar",
            Command::Current { .. } => "current",
            Command::CocycleCheck { .. } => "cocycle-check",
            Command::Universality { .. } => "universality",
            Command::Twist { .. } => "twist",
            Command::GlueDemo { .. } => "glue-demo",
        }
    }
}

/// What one invocation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub exit_code: i32,
    /// Structured report; `None` for help, version and usage errors.
    pub json: Option<Value>,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Property(String),
    Resource(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Property(_) => EXIT_PROPERTY,
            Failure::Resource(_) => EXIT_RESOURCE,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input-error",
            Failure::Property(_) => "property-failure",
            Failure::Resource(_) => "resource-limit",
            Failure::Usage(_) => "usage-error",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Property(m) | Failure::Resource(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            CohomologyError::NotCocycle { .. } | CohomologyError::NotCocycleVector => Failure::Property(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<CurrentError> for Failure {
    fn from(e: CurrentError) -> Self {
        match e {
            CurrentError::Cohomology(c) => c.into(),
            CurrentError::Internal(_) | CurrentError::NotDiagonal(_) => Failure::Property(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<LocalityError> for Failure {
    fn from(e: LocalityError) -> Self {
        match e {
            LocalityError::Cohomology(c) => c.into(),
            LocalityError::Current(c) => c.into(),
            LocalityError::NotDiagonal(_) | LocalityError::BadPrimitive { .. } | LocalityError::Internal(_) => {
                Failure::Property(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<KaehlerError> for Failure {
    fn from(e: KaehlerError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<FormError> for Failure {
    fn from(e: FormError) -> Self {
        Failure::Property(e.to_string())
    }
}

/// Results of a successful command plus an optional failed property.
struct Outcome {
    results: Map<String, Value>,
    violated: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            results: Map::new(),
            violated: None,
        }
    }

    fn put(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    fn require(&mut self, ok: bool, what: &str) {
        if !ok && self.violated.is_none() {
            self.violated = Some(what.to_string());
        }
    }
}

pub fn run_command<I, T>(argv: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Report {
                    exit_code: EXIT_OK,
                    json: None,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Report {
                    exit_code: EXIT_USAGE,
                    json: None,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    let opts = CohomologyOptions {
        max_cochain: cli.max_cochain,
    };
    let name = cli.command.name();
    let inputs = inputs_of(&cli.command);
    let outcome = dispatch(&cli.command, &opts);
    let mut report = Map::new();
    report.insert("command".into(), json!(name));
    report.insert("inputs".into(), inputs);
    let (code, stderr) = match outcome {
        Ok(out) => {
            report.insert("results".into(), Value::Object(out.results));
            match out.violated {
                None => {
                    report.insert("status".into(), json!("ok"));
                    (EXIT_OK, String::new())
                }
                Some(what) => {
                    report.insert("status".into(), json!("property-failure"));
                    report.insert("error".into(), json!(what));
                    (EXIT_PROPERTY, format!("ucext {name}: property failed: {what}\n"))
                }
            }
        }
        Err(f) => {
            report.insert("status".into(), json!(f.status()));
            report.insert("error".into(), json!(f.message()));
            (f.code(), format!("ucext {name}: {}\n", f.message()))
        }
    };
    report.insert("exit_code".into(), json!(code));
    let value = Value::Object(report);
    let stdout = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(&value),
    };
    Report {
        exit_code: code,
        json: Some(value),
        stdout,
        stderr,
    }
}

fn inputs_of(cmd: &Command) -> Value {
    match cmd {
        Command::Validate { name, all } => json!({"name": name, "all": all}),
        Command::Info { name }
        | Command::Killing { name }
        | Command::Derivations { name }
        | Command::Vform { name }
        | Command::Kaehler { name }
        | Command::Omegabar { name } => json!({"name": name}),
        Command::Witness { name, element } => json!({"name": name, "element": element}),
        Command::H2 { name, degree, coeff } => json!({"name": name, "degree": degree, "coeff": coeff}),
        Command::Current { lie, comm } | Command::CocycleCheck { lie, comm } => json!({"lie": lie, "comm": comm}),
        Command::Universality { lie, comm, coeff } => json!({"lie": lie, "comm": comm, "coeff": coeff}),
        Command::Twist { lie, comm, seed, trials } => {
            json!({"lie": lie, "comm": comm, "seed": seed, "trials": trials})
        }
        Command::GlueDemo { lie, comm, cover, seed } => {
            json!({"lie": lie, "comm": comm, "cover": cover, "seed": seed})
        }
    }
}

fn dispatch(cmd: &Command, opts: &CohomologyOptions) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { name, all } => validate(name.as_deref(), *all),
        Command::Info { name } => info(name),
        Command::Killing { name } => killing(&document::resolve_lie(name)?),
        Command::Derivations { name } => derivations(&document::resolve_lie(name)?),
        Command::Witness { name, element } => witness(&document::resolve_lie(name)?, element),
        Command::Vform { name } => vform(&document::resolve_lie(name)?),
        Command::H2 { name, degree, coeff } => h2(&document::resolve_lie(name)?, *degree, *coeff, opts),
        Command::Kaehler { name } => kaehler(&document::resolve_comm(name)?),
        Command::Omegabar { name } => omegabar(&document::resolve_comm(name)?),
        Command::Current { lie, comm } => current_cmd(&document::resolve_lie(lie)?, &document::resolve_comm(comm)?),
        Command::CocycleCheck { lie, comm } => {
            cocycle_check(&document::resolve_lie(lie)?, &document::resolve_comm(comm)?, opts)
        }
        Command::Universality { lie, comm, coeff } => universality(
            &document::resolve_lie(lie)?,
            &document::resolve_comm(comm)?,
            *coeff,
            opts,
        ),
        Command::Twist { lie, comm, seed, trials } => twist(
            &document::resolve_lie(lie)?,
            &document::resolve_comm(comm)?,
            *seed,
            *trials,
            opts,
        ),
        Command::GlueDemo { lie, comm, cover, seed } => glue_demo(
            &document::resolve_lie(lie)?,
            &document::resolve_comm(comm)?,
            cover,
            *seed,
            opts,
        ),
    }
}

/// `2h - 1/2f` style rendering.
pub fn combination(labels: &[String], v: &[Scalar]) -> String {
    let mut out = String::new();
    for (label, c) in labels.iter().zip(v) {
        if c == &q(0) {
            continue;
        }
        let neg = c < &q(0);
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs != q(1) {
            out.push_str(&format_scalar(&abs));
            out.push('·');
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn lie_summary(g: &LieAlgebra) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("dim".into(), json!(g.dim()));
    m.insert("basis".into(), json!(g.labels()));
    let brackets: Vec<Value> = g
        .upper_brackets()
        .map(|((i, j), v)| {
            let mut vec = vec![q(0); g.dim()];
            for (k, c) in v {
                vec[*k] = c.clone();
            }
            json!(format!("[{}, {}] = {}", g.label(i), g.label(j), combination(g.labels(), &vec)))
        })
        .collect();
    m.insert("brackets".into(), Value::Array(brackets));
    m
}

fn validate(name: Option<&str>, all: bool) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    match (name, all) {
        (Some(_), true) | (None, false) => Err(Failure::Usage("give either an algebra or --all".into())),
        (None, true) => {
            let (lies, comms) = catalog::self_test_names();
            let mut lie_rows = Vec::new();
            for n in lies {
                let g = catalog::lie(n).expect("catalog name");
                let ok = g.validate().is_valid();
                out.require(ok, &format!("catalog algebra {n} fails validation"));
                lie_rows.push(json!({"name": n, "dim": g.dim(), "valid": ok}));
            }
            let mut comm_rows = Vec::new();
            for n in comms {
                let a = catalog::comm(n).expect("catalog name");
                let ok = a.validate().is_ok();
                out.require(ok, &format!("catalog algebra {n} fails validation"));
                comm_rows.push(json!({"name": n, "dim": a.dim(), "valid": ok, "points": a.points()}));
            }
            out.put("lie", Value::Array(lie_rows)).put("comm", Value::Array(comm_rows));
            Ok(out)
        }
        (Some(n), false) => {
            match resolve(n)? {
                Algebra::Lie(g) => {
                    let report = g.validate();
                    out.put("kind", json!("lie")).put("dim", json!(g.dim()));
                    out.put("valid", json!(report.is_valid()));
                    out.require(report.is_valid(), "Lie algebra axioms");
                }
                Algebra::Comm(a) => {
                    out.put("kind", json!("comm")).put("dim", json!(a.dim()));
                    out.put("valid", json!(a.validate().is_ok()));
                    out.put("unital", json!(a.is_unital())).put("points", json!(a.points()));
                    out.require(a.validate().is_ok(), "commutative algebra axioms");
                }
            }
            Ok(out)
        }
    }
}

fn info(name: &str) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    match resolve(name)? {
        Algebra::Lie(g) => {
            out.put("kind", json!("lie"));
            for (k, v) in lie_summary(&g) {
                out.put(&k, v);
            }
            out.put("semisimple", json!(g.is_semisimple()));
            out.put("perfect", json!(g.is_perfect()));
            out.put("derived_dim", json!(g.derived_subalgebra().dim()));
        }
        Algebra::Comm(a) => {
            out.put("kind", json!("comm")).put("dim", json!(a.dim())).put("basis", json!(a.labels()));
            let products: Vec<Value> = a
                .upper_products()
                .map(|((i, j), _)| {
                    let p = a.basis_product(i, j);
                    json!(format!("{} {} = {}", a.labels()[i], a.labels()[j], combination(a.labels(), &p)))
                })
                .collect();
            out.put("products", Value::Array(products));
            out.put("unital", json!(a.is_unital()));
            out.put(
                "unit",
                a.unit().map(|u| json!(combination(a.labels(), u))).unwrap_or(Value::Null),
            );
            let points: Vec<Value> = a
                .idempotents()
                .iter()
                .map(|e| json!({"point": e.point, "idempotent": combination(a.labels(), &e.coords)}))
                .collect();
            out.put("points", Value::Array(points));
        }
    }
    Ok(out)
}

fn killing(g: &LieAlgebra) -> Result<Outcome, Failure> {
    let k = g.killing_form();
    let rank = crate::linalg::SparseMatrix::from_dense(g.dim(), &k.matrix)
        .expect("square matrix")
        .rank();
    let mut out = Outcome::new();
    out.put("basis", json!(g.labels()))
        .put("matrix", matrix_json(&k.matrix))
        .put("rank", json!(rank))
        .put("semisimple", json!(k.semisimple));
    Ok(out)
}

fn derivations(g: &LieAlgebra) -> Result<Outcome, Failure> {
    let d = g.derivations();
    let mut out = Outcome::new();
    out.put("dim", json!(d.dim()))
        .put("inner_dim", json!(d.inner.dim()))
        .put("all_inner", json!(d.all_inner()))
        .put("basis", Value::Array(d.basis.iter().map(|m| matrix_json(m)).collect()));
    Ok(out)
}

fn parse_element(g: &LieAlgebra, text: &str) -> Result<Vec<Scalar>, Failure> {
    if let Some(i) = g.labels().iter().position(|l| l == text.trim()) {
        return Ok(unit_vector(g.dim(), i));
    }
    let coords: Vec<Scalar> = text
        .split(',')
        .map(document::parse_rational)
        .collect::<Result<_, _>>()?;
    if coords.len() != g.dim() {
        return Err(Failure::Input(format!(
            "element has {} coordinates, the algebra has dimension {}",
            coords.len(),
            g.dim()
        )));
    }
    Ok(coords)
}

fn witness(g: &LieAlgebra, element: &str) -> Result<Outcome, Failure> {
    let x = parse_element(g, element)?;
    let mut out = Outcome::new();
    out.put("element", vector_json(&x));
    match g.perfect_witness(&x) {
        Ok(pairs) => {
            let mut sum = vec![q(0); g.dim()];
            let rendered: Vec<Value> = pairs
                .iter()
                .map(|(a, b)| {
                    sum = crate::linalg::add_vec(&sum, &g.bracket(a, b));
                    json!({
                        "left": vector_json(a),
                        "right": vector_json(b),
                        "bracket": format!("[{}, {}]", combination(g.labels(), a), combination(g.labels(), b)),
                    })
                })
                .collect();
            out.put("pairs", Value::Array(rendered));
            out.put("reconstructed", json!(sum == x));
            out.require(sum == x, "brackets do not sum to the element");
            Ok(out)
        }
        Err(LieError::NotInDerivedAlgebra { defect }) => {
            out.put("defect", vector_json(&defect));
            out.require(false, "element is not in the derived algebra");
            Ok(out)
        }
        Err(e) => Err(Failure::Input(e.to_string())),
    }
}

fn vform(g: &LieAlgebra) -> Result<Outcome, Failure> {
    let forms = v_space_and_kappa(g);
    let n = g.dim();
    let mut table = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = forms.kappa_basis(i, j);
            if !is_zero_vec(v) {
                table.push(json!([g.label(i), g.label(j), vector_json(v)]));
            }
        }
    }
    let killing = BilinearForm::from_matrix(&g.killing_form().matrix);
    let fact = factor_through(&forms, &killing)?;
    let mut out = Outcome::new();
    out.put("dim_v", json!(forms.dim()))
        .put("derivations_dim", json!(forms.derivations.dim()))
        .put("kappa", Value::Array(table))
        .put(
            "killing_factorization",
            json!({
                "matrix": matrix_json(&fact.matrix),
                "rank": fact.rank,
                "kernel_dim": fact.kernel_dim(),
            }),
        );
    Ok(out)
}

fn h2(g: &LieAlgebra, degree: usize, coeff: usize, opts: &CohomologyOptions) -> Result<Outcome, Failure> {
    if coeff == 0 {
        return Err(Failure::Input("coefficient dimension must be positive".into()));
    }
    let h = cohomology::cohomology(g, degree, coeff, opts)?;
    let space = CochainSpace::new(g.dim(), degree, coeff);
    let mut out = Outcome::new();
    out.put("degree", json!(degree))
        .put("coeff_dim", json!(coeff))
        .put("cochain_dim", json!(h.mod_coboundaries.ambient_dim()))
        .put("cocycles_dim", json!(h.cocycles.dim()))
        .put("coboundaries_dim", json!(h.coboundary_dim()))
        .put("dim", json!(h.dim()))
        .put(
            "representatives",
            Value::Array(
                h.representatives
                    .iter()
                    .map(|r| sparse_cochain_json(&space, r))
                    .collect(),
            ),
        );
    Ok(out)
}

/// Nonzero entries as `[i, j, …, [coefficients]]`, one per basis tuple.
fn sparse_cochain_json(space: &CochainSpace, cochain: &[Scalar]) -> Value {
    let m = space.coeff_dim;
    let entries = space
        .tuples()
        .iter()
        .enumerate()
        .filter_map(|(t, tuple)| {
            let coeffs = &cochain[space.flat(t, 0)..space.flat(t, 0) + m];
            if is_zero_vec(coeffs) {
                return None;
            }
            let mut entry: Vec<Value> = tuple.iter().map(|i| json!(i)).collect();
            entry.push(vector_json(coeffs));
            Some(Value::Array(entry))
        })
        .collect();
    Value::Array(entries)
}

fn kaehler(a: &CommAlgebra) -> Result<Outcome, Failure> {
    let k = kaehler_module(a)?;
    let leibniz = k.leibniz_holds();
    let d: Vec<Value> = (0..a.dim())
        .map(|i| json!([a.labels()[i], vector_json(&k.d(&unit_vector(a.dim(), i)))]))
        .collect();
    let mut out = Outcome::new();
    out.put("dim_omega1", json!(k.omega1_dim()))
        .put("omega1_basis", json!(k.omega1_labels()))
        .put("d", Value::Array(d))
        .put("dim_exact", json!(k.omega1bar.denominator().dim()))
        .put("dim_omegabar", json!(k.omega1bar_dim()))
        .put("leibniz", json!(leibniz));
    out.require(leibniz, "Leibniz rule in Ω¹");
    Ok(out)
}

fn omegabar(a: &CommAlgebra) -> Result<Outcome, Failure> {
    let k = kaehler_module(a)?;
    let n = a.dim();
    let mut classes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = k.bar_basis(i, j);
            if !is_zero_vec(c) {
                classes.push(json!([format!("{}·d{}", a.labels()[i], a.labels()[j]), vector_json(c)]));
            }
        }
    }
    let mut out = Outcome::new();
    out.put("dim", json!(k.omega1bar_dim())).put("classes", Value::Array(classes));
    Ok(out)
}

fn current_cmd(g: &LieAlgebra, a: &CommAlgebra) -> Result<Outcome, Failure> {
    let c = current::current_algebra(g, a)?;
    let mut out = Outcome::new();
    out.put("dim", json!(c.dim()))
        .put("fibre_dim", json!(g.dim()))
        .put("coeff_algebra_dim", json!(a.dim()))
        .put("basis", json!(c.total.labels()))
        .put("valid", json!(c.total.validate().is_valid()))
        .put("semisimple", json!(c.total.is_semisimple()))
        .put("perfect", json!(c.total.is_perfect()));
    Ok(out)
}

fn cocycle_check(g: &LieAlgebra, a: &CommAlgebra, _opts: &CohomologyOptions) -> Result<Outcome, Failure> {
    let uc = current::universal_cocycle(g, a)?;
    let n = uc.current.dim();
    let mut alternating = true;
    for i in 0..n {
        for j in i..n {
            let s = crate::linalg::add_vec(&uc.evaluate_basis(i, j), &uc.evaluate_basis(j, i));
            alternating &= is_zero_vec(&s);
        }
    }
    let cocycle = uc.omega.cocycle_defect(&uc.current.total).is_none();
    let unit = a.unit().map(|u| u.to_vec());
    let constants_zero = match &unit {
        Some(u) => (0..g.dim()).all(|x| {
            (0..g.dim()).all(|y| {
                let cx = uc.current.tensor(&unit_vector(g.dim(), x), u);
                let cy = uc.current.tensor(&unit_vector(g.dim(), y), u);
                is_zero_vec(&uc.omega.eval(&cx, &cy))
            })
        }),
        None => true,
    };
    let diagonal = match SupportStructure::new(g.dim(), a) {
        Ok(ss) => Some(locality::is_diagonal(&uc.omega, &ss).is_ok()),
        Err(_) => None,
    };
    let mut out = Outcome::new();
    out.put("dim", json!(n))
        .put("dim_v", json!(uc.v_dim()))
        .put("dim_omegabar", json!(uc.bar_dim()))
        .put("coeff_dim", json!(uc.coeff_dim()))
        .put("alternating", json!(alternating))
        .put("cocycle", json!(cocycle))
        .put("vanishes_on_constants", json!(constants_zero))
        .put("diagonal", json!(diagonal))
        .put("note", json!(uc.note));
    out.require(alternating, "ω is alternating");
    out.require(cocycle, "cocycle identity");
    out.require(constants_zero, "ω vanishes on constants");
    out.require(diagonal != Some(false), "ω is diagonal");
    Ok(out)
}

fn universality(g: &LieAlgebra, a: &CommAlgebra, coeff: usize, opts: &CohomologyOptions) -> Result<Outcome, Failure> {
    if coeff == 0 {
        return Err(Failure::Input("coefficient dimension must be positive".into()));
    }
    let u = current::universality_map(g, a, coeff, opts)?;
    let mut out = Outcome::new();
    out.put("dim_v", json!(u.v_dim))
        .put("dim_omegabar", json!(u.bar_dim))
        .put("coeff_dim", json!(u.coeff_dim))
        .put("source_dim", json!(u.source_dim()))
        .put("dim_h2", json!(u.h2_dim))
        .put("matrix", matrix_json(&u.matrix))
        .put("rank", json!(u.rank))
        .put("bijective", json!(u.bijective));
    out.require(u.bijective, "universality map is bijective");
    Ok(out)
}

fn small_random(rng: &mut ChaCha8Rng, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| q(rng.gen_range(-3..=3))).collect()
}

fn twist(g: &LieAlgebra, a: &CommAlgebra, seed: u64, trials: usize, opts: &CohomologyOptions) -> Result<Outcome, Failure> {
    let uc = current::universal_cocycle(g, a)?;
    let total = &uc.current.total;
    let m = uc.coeff_dim();
    let h = if m > 0 {
        Some(cohomology::cohomology(total, 2, m, opts)?)
    } else {
        None
    };
    let base_class = match &h {
        Some(h) => h.class_of(uc.omega.as_cochain())?,
        None => Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut out = Outcome::new();
    for _ in 0..trials {
        let coords = small_random(&mut rng, g.dim() * uc.kaehler.omega1_dim());
        let xi = GValuedOneForm::new(g.dim(), uc.kaehler.omega1_dim(), coords)?;
        let t = current::twist_difference(&uc, &xi)?;
        let exact = t.beta.coboundary(total) == t.tau;
        let preserved = match &h {
            Some(h) => h.class_of(uc.omega.add(&t.tau).as_cochain())? == base_class,
            None => true,
        };
        let witnessed = match &h {
            Some(h) => matches!(
                cohomology::coboundary_witness_in(total, &t.tau, h)?,
                CoboundaryWitness::Exact(_)
            ),
            None => true,
        };
        out.require(exact, "τ = δβ");
        out.require(preserved && witnessed, "[ω + τ] = [ω]");
        rows.push(json!({
            "xi": vector_json(&xi.coords),
            "beta_is_primitive": exact,
            "tau_exact": witnessed,
            "class_preserved": preserved,
        }));
    }
    out.put("coeff_dim", json!(m))
        .put("class_of_omega", vector_json(&base_class))
        .put("trials", Value::Array(rows));
    Ok(out)
}

fn parse_cover(a: &CommAlgebra, text: &str) -> Result<Vec<BTreeSet<usize>>, Failure> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .map(|p| {
                    a.point_index(p.trim())
                        .ok_or_else(|| Failure::Input(format!("unknown point {:?}", p.trim())))
                })
                .collect()
        })
        .collect()
}

fn glue_demo(g: &LieAlgebra, a: &CommAlgebra, cover: &str, seed: u64, opts: &CohomologyOptions) -> Result<Outcome, Failure> {
    let sets = parse_cover(a, cover)?;
    let ss = SupportStructure::new(g.dim(), a).map_err(|e| Failure::Input(e.to_string()))?;
    let cover = Cover::new(g, a, sets)?;
    let cur = current::current_algebra(g, a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta0 = Cochain1 {
        dim: cur.dim(),
        coeff_dim: 1,
        values: small_random(&mut rng, cur.dim()),
    };
    let psi = beta0.coboundary(&cur.total);
    let points = a.points();
    let names = |s: &BTreeSet<usize>| -> Value { json!(s.iter().map(|&p| points[p].clone()).collect::<Vec<_>>()) };
    let mut out = Outcome::new();
    out.put("dim", json!(cur.dim()))
        .put("cover", Value::Array(cover.sets.iter().map(names).collect()))
        .put("refinement", Value::Array(cover.refinement.iter().map(names).collect()))
        .put("beta0", vector_json(&beta0.values));
    match locality::local_identity(&psi, &ss, &cover, opts)? {
        LocalIdentity::GloballyExact(beta) => {
            let ok = beta.coboundary(&cur.total) == psi;
            out.put("glued", vector_json(&beta.values)).put("verified", json!(ok));
            out.require(ok, "δβ = ψ for the glued primitive");
        }
        LocalIdentity::LocallyNontrivial { index, class } => {
            out.put("nontrivial_on", json!(index)).put("class", vector_json(&class));
            out.require(false, "a coboundary restricted to a nontrivial class");
        }
    }
    Ok(out)
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => format!("[{}]", items.iter().map(render_value).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn render_into(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                render_into(out, k, x, indent + 1);
            }
        }
        Value::Array(items) if has_object(v) || items.iter().any(Value::is_array) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for x in items {
                if let Value::Object(m) = x {
                    // YAML-style: the first field shares the "- " line
                    let mut item = String::new();
                    for (k, y) in m {
                        render_into(&mut item, k, y, indent + 2);
                    }
                    let inner = "  ".repeat(indent + 2);
                    out.push_str(&format!("{pad}  - {}", &item[inner.len().min(item.len())..]));
                } else if has_object(x) {
                    render_into(out, "-", x, indent + 1);
                } else {
                    out.push_str(&format!("{pad}  {}\n", render_value(x)));
                }
            }
        }
        _ => out.push_str(&format!("{pad}{key}: {}\n", render_value(v))),
    }
}

fn render_text(report: &Value) -> String {
    let mut out = String::new();
    let command = report["command"].as_str().unwrap_or("?");
    let status = report["status"].as_str().unwrap_or("?");
    out.push_str(&format!("{command}: {status}\n"));
    if let Some(e) = report.get("error").and_then(Value::as_str) {
        out.push_str(&format!("error: {e}\n"));
    }
    if let Some(Value::Object(results)) = report.get("results") {
        for (k, v) in results {
            render_into(&mut out, k, v, 0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Report {
        run_command(std::iter::once("ucext").chain(args.iter().copied()))
    }

    #[test]
    fn combinations_render() {
        let labels: Vec<String> = ["h", "e", "f"].map(String::from).to_vec();
        assert_eq!(combination(&labels, &[q(2), q(0), crate::linalg::qf(-1, 2)]), "2·h - 1/2·f");
        assert_eq!(combination(&labels, &[q(0), q(-1), q(0)]), "-e");
        assert_eq!(combination(&labels, &[q(0), q(0), q(0)]), "0");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["validate", "sl2"]).exit_code, EXIT_OK);
        assert_eq!(run(&["validate", "nonsense"]).exit_code, EXIT_INPUT);
        assert_eq!(run(&["frobnicate"]).exit_code, EXIT_USAGE);
        assert_eq!(run(&["validate", "sl2", "--bogus"]).exit_code, EXIT_USAGE);
        assert_eq!(run(&["validate"]).exit_code, EXIT_USAGE);
        assert_eq!(run(&["--help"]).exit_code, EXIT_OK);
        assert_eq!(run(&["witness", "heis3", "--element", "x"]).exit_code, EXIT_PROPERTY);
        assert_eq!(run(&["h2", "sl3", "--max-cochain", "10"]).exit_code, EXIT_RESOURCE);
    }

    #[test]
    fn json_reports_carry_results() {
        let r = run(&["h2", "heis3", "--format", "json"]);
        let v = r.json.unwrap();
        assert_eq!(v["results"]["dim"], json!(2));
        assert_eq!(v["results"]["representatives"].as_array().unwrap().len(), 2);
        assert!(r.stdout.starts_with('{'));
    }
}
