//! JSON session files: definitions, commands and reports.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::constructions::{koszul_complex, trivial_extension, KoszulExtension, TrivialExtension};
use crate::detect::{auto_axw, certify_kxw, verify_axw_split, SearchConfig, StructureVerdict};
use crate::dga::{AlgebraMorphism, DGAlgebra};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{homology, ChainComplex, GradedSpace};
use crate::linalg::{Matrix, SparseVec};
use crate::module::DGModule;
use crate::resolution::{certify_perfect, tor, tor_against_k, PerfectionVerdict};
use crate::ring::{monomial_label, parse_monomial, ArtinianLocalRing};
use crate::verify::{self, TheoremId, Verdict, VerificationReport};

pub const SCHEMA: &str = "dgtor/1";

fn schema() -> String {
    SCHEMA.to_string()
}

/// A coefficient written as an integer or as a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn value(&self, field: Field) -> Result<Scalar> {
        match self {
            Coeff::Int(n) => Ok(field.from_i64(*n)),
            Coeff::Text(s) => field.parse(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Definition {
    /// `k[vars]/(monomials)`.
    Ring {
        vars: Vec<String>,
        relations: Vec<String>,
    },
    /// The ground field as an algebra.
    Ground,
    /// A complex of vector spaces; `differential` lists `(source, target, coefficient)`.
    Complex {
        cells: Vec<(String, i32)>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        differential: Vec<(String, String, Coeff)>,
    },
    /// `base ⋉ w`; defines morphisms `<name>.alpha` and `<name>.beta`.
    TrivialExtension {
        base: String,
        w: String,
    },
    /// The Koszul complex of a ring; defines `<name>.inclusion`.
    Koszul {
        ring: String,
    },
    Residue {
        over: String,
    },
    Regular {
        over: String,
    },
    /// `R/I` for monomials spanning `I`.
    Cyclic {
        ring: String,
        ideal: Vec<String>,
    },
    /// Basis labels and, per ring variable, its action matrix by rows.
    Module {
        ring: String,
        labels: Vec<String>,
        actions: BTreeMap<String, Vec<Vec<Coeff>>>,
    },
    /// A complex made a module through the augmentation.
    ViaAugmentation {
        over: String,
        complex: String,
    },
    /// Restriction of scalars along a morphism.
    Restrict {
        module: String,
        along: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedDefinition {
    pub name: String,
    #[serde(flatten)]
    pub definition: Definition,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectMode {
    #[default]
    Auto,
    #[serde(rename = "kxw")]
    KxW,
    #[serde(rename = "axw")]
    AxW,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Command {
    Homology {
        of: String,
    },
    Koszul {
        ring: String,
    },
    Detect {
        algebra: String,
        #[serde(default)]
        mode: DetectMode,
        /// Labels spanning `W`, for the split search.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w: Option<Vec<String>>,
    },
    Poincare {
        module: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<i32>,
    },
    Tor {
        left: String,
        right: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<(i32, i32)>,
    },
    Perfect {
        module: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<i32>,
    },
    Verify(VerifyCommand),
}

/// Arguments of `verify`; which ones are needed depends on `id`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyCommand {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionFile {
    #[serde(default = "schema")]
    pub schema: String,
    pub field: String,
    #[serde(default)]
    pub definitions: Vec<NamedDefinition>,
    #[serde(default)]
    pub commands: Vec<Command>,
}

impl SessionFile {
    /// Parses JSON, reporting line and column on failure.
    pub fn parse(text: &str) -> Result<Self> {
        let s: SessionFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
        if s.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema `{}`", s.schema)));
        }
        let mut seen = HashSet::new();
        for d in &s.definitions {
            if !seen.insert(d.name.as_str()) {
                return Err(Error::Parse(format!("duplicate definition `{}`", d.name)));
            }
            if d.name.contains('.') {
                return Err(Error::Parse(format!("definition name `{}` contains `.`", d.name)));
            }
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("session serializes")
    }
}

/// Run-wide settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field: Option<Field>,
    pub max_degree: i32,
    pub window: Option<(i32, i32)>,
    pub strict: bool,
    pub seed: u64,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: None,
            max_degree: 10,
            window: None,
            strict: false,
            seed: 0,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug)]
enum Value {
    Ring(ArtinianLocalRing, Arc<DGAlgebra>),
    Algebra(Arc<DGAlgebra>),
    Complex(ChainComplex),
    Module(DGModule),
    Extension(Box<TrivialExtension>),
    Koszul(Box<KoszulExtension>),
}

/// Definitions resolved in dependency order.
pub struct Environment {
    field: Field,
    values: HashMap<String, Value>,
}

impl Environment {
    pub fn build(session: &SessionFile, field: Field) -> Result<Self> {
        let defs: HashMap<&str, &Definition> = session
            .definitions
            .iter()
            .map(|d| (d.name.as_str(), &d.definition))
            .collect();
        let mut env = Environment {
            field,
            values: HashMap::new(),
        };
        let mut visiting = Vec::new();
        for d in &session.definitions {
            env.resolve(&d.name, &defs, &mut visiting)?;
        }
        Ok(env)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn resolve(&mut self, name: &str, defs: &HashMap<&str, &Definition>, visiting: &mut Vec<String>) -> Result<()> {
        let base = name.split('.').next().unwrap_or(name);
        if self.values.contains_key(base) {
            return Ok(());
        }
        let Some(def) = defs.get(base) else {
            return Err(Error::Reference(base.to_string()));
        };
        if visiting.iter().any(|v| v == base) {
            visiting.push(base.to_string());
            return Err(Error::Parse(format!("cyclic definitions: {}", visiting.join(" → "))));
        }
        visiting.push(base.to_string());
        for dep in dependencies(def) {
            self.resolve(dep, defs, visiting)?;
        }
        visiting.pop();
        let value = self.construct(def).map_err(|e| match e {
            Error::Reference(_) | Error::Internal(_) => e,
            other => Error::Precondition(format!("definition `{base}`: {other}")),
        })?;
        self.values.insert(base.to_string(), value);
        Ok(())
    }

    fn construct(&self, def: &Definition) -> Result<Value> {
        let field = self.field;
        Ok(match def {
            Definition::Ring { vars, relations } => {
                let v: Vec<&str> = vars.iter().map(String::as_str).collect();
                let r: Vec<&str> = relations.iter().map(String::as_str).collect();
                let ring = ArtinianLocalRing::from_monomial_ideal(field, &v, &r)?;
                let alg = ring.as_dg_algebra();
                Value::Ring(ring, alg)
            }
            Definition::Ground => Value::Algebra(Arc::new(DGAlgebra::ground(field))),
            Definition::Complex { cells, differential } => Value::Complex(build_complex(field, cells, differential)?),
            Definition::TrivialExtension { base, w } => {
                let a = self.algebra(base)?;
                let eps = a.augmentation()?.clone();
                Value::Extension(Box::new(trivial_extension(&a, &eps, &self.complex(w)?)?))
            }
            Definition::Koszul { ring } => Value::Koszul(Box::new(koszul_complex(self.ring(ring)?)?)),
            Definition::Residue { over } => Value::Module(DGModule::residue_field(self.algebra(over)?)?),
            Definition::Regular { over } => Value::Module(DGModule::regular(self.algebra(over)?)),
            Definition::Cyclic { ring, ideal } => {
                let r = self.ring(ring)?;
                let gens = ideal.iter().map(|m| ring_element(r, m)).collect::<Result<Vec<_>>>()?;
                Value::Module(r.cyclic_quotient(&gens)?.dg)
            }
            Definition::Module { ring, labels, actions } => {
                let r = self.ring(ring)?;
                let mut mats = Vec::new();
                for v in r.vars() {
                    let rows = actions
                        .get(v)
                        .ok_or_else(|| Error::Parse(format!("no action given for `{v}`")))?;
                    let rows = rows
                        .iter()
                        .map(|row| row.iter().map(|c| c.value(field)).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    mats.push(Matrix::from_rows(field, labels.len(), rows)?);
                }
                if let Some(extra) = actions.keys().find(|k| !r.vars().contains(k)) {
                    return Err(Error::Parse(format!("action given for unknown variable `{extra}`")));
                }
                Value::Module(r.module(labels.clone(), mats)?.dg)
            }
            Definition::ViaAugmentation { over, complex } => Value::Module(DGModule::via_augmentation(
                self.algebra(over)?,
                &self.complex(complex)?,
            )?),
            Definition::Restrict { module, along } => {
                Value::Module(self.module(module)?.restrict(&self.morphism(along)?)?)
            }
        })
    }

    fn get(&self, name: &str) -> Result<&Value> {
        self.values.get(name).ok_or_else(|| Error::Reference(name.to_string()))
    }

    pub fn ring(&self, name: &str) -> Result<&ArtinianLocalRing> {
        match self.get(name)? {
            Value::Ring(r, _) => Ok(r),
            _ => Err(Error::Precondition(format!("`{name}` is not a ring"))),
        }
    }

    pub fn algebra(&self, name: &str) -> Result<Arc<DGAlgebra>> {
        match self.get(name)? {
            Value::Ring(_, a) | Value::Algebra(a) => Ok(a.clone()),
            Value::Extension(t) => Ok(t.algebra.clone()),
            Value::Koszul(k) => Ok(k.algebra.clone()),
            _ => Err(Error::Precondition(format!("`{name}` is not an algebra"))),
        }
    }

    pub fn complex(&self, name: &str) -> Result<ChainComplex> {
        match self.get(name)? {
            Value::Complex(c) => Ok(c.clone()),
            Value::Module(m) => Ok(m.complex().clone()),
            _ => Ok(self.algebra(name)?.complex().clone()),
        }
    }

    pub fn module(&self, name: &str) -> Result<DGModule> {
        match self.get(name)? {
            Value::Module(m) => Ok(m.clone()),
            _ => Err(Error::Precondition(format!("`{name}` is not a module"))),
        }
    }

    pub fn extension(&self, name: &str) -> Result<&TrivialExtension> {
        match self.get(name)? {
            Value::Extension(t) => Ok(t),
            _ => Err(Error::Precondition(format!("`{name}` is not a trivial extension"))),
        }
    }

    pub fn koszul(&self, name: &str) -> Result<&KoszulExtension> {
        match self.get(name)? {
            Value::Koszul(k) => Ok(k),
            _ => Err(Error::Precondition(format!("`{name}` is not a Koszul extension"))),
        }
    }

    /// `T.alpha`, `T.beta`, `K.inclusion`, `A.identity`, `A.augmentation` or `A.unit`.
    pub fn morphism(&self, name: &str) -> Result<AlgebraMorphism> {
        let Some((base, part)) = name.split_once('.') else {
            return Err(Error::Reference(name.to_string()));
        };
        match (self.get(base)?, part) {
            (Value::Extension(t), "alpha") => Ok(t.alpha.clone()),
            (Value::Extension(t), "beta") => Ok(t.beta.clone()),
            (Value::Koszul(k), "inclusion") => Ok(k.inclusion.clone()),
            (_, "augmentation") => AlgebraMorphism::augmentation(self.algebra(base)?),
            (_, "identity") => Ok(AlgebraMorphism::identity(self.algebra(base)?)),
            (_, "unit") => {
                let a = self.algebra(base)?;
                let k = Arc::new(DGAlgebra::ground(self.field));
                AlgebraMorphism::new(k, a.clone(), vec![a.unit_vec()])
            }
            _ => Err(Error::Reference(name.to_string())),
        }
    }
}

fn dependencies(def: &Definition) -> Vec<&str> {
    match def {
        Definition::Ring { .. } | Definition::Ground | Definition::Complex { .. } => Vec::new(),
        Definition::TrivialExtension { base, w } => vec![base, w],
        Definition::Koszul { ring } | Definition::Cyclic { ring, .. } | Definition::Module { ring, .. } => vec![ring],
        Definition::Residue { over } | Definition::Regular { over } => vec![over],
        Definition::ViaAugmentation { over, complex } => vec![over, complex],
        Definition::Restrict { module, along } => vec![module, along.split('.').next().unwrap_or(along)],
    }
}

fn build_complex(
    field: Field,
    cells: &[(String, i32)],
    differential: &[(String, String, Coeff)],
) -> Result<ChainComplex> {
    let mut seen = HashSet::new();
    for (l, _) in cells {
        if !seen.insert(l) {
            return Err(Error::Parse(format!("duplicate cell `{l}`")));
        }
    }
    let space = GradedSpace::from_pairs(field, cells)?;
    let mut images = vec![SparseVec::new(); space.total_dim()];
    for (s, t, c) in differential {
        let si = space.find(s).ok_or_else(|| Error::Reference(s.clone()))?;
        let ti = space.find(t).ok_or_else(|| Error::Reference(t.clone()))?;
        if space.degree_of(ti) != space.degree_of(si) - 1 {
            return Err(Error::Dimension(format!(
                "∂({s}) must land one degree lower than `{s}`, not at `{t}`"
            )));
        }
        images[si].axpy(&c.value(field)?, &SparseVec::unit(ti, field));
    }
    ChainComplex::from_global(space, &images)
}

fn ring_element(r: &ArtinianLocalRing, text: &str) -> Result<SparseVec> {
    let e = parse_monomial(text, r.vars())?;
    let label = monomial_label(&e, r.vars());
    Ok(match r.labels().iter().position(|l| *l == label) {
        Some(i) => SparseVec::unit(i, r.field()),
        None => SparseVec::new(),
    })
}

/// Outcome of one command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandResult {
    pub index: usize,
    pub op: String,
    pub status: String,
    pub body: Json,
    #[serde(skip)]
    pub exit_code: i32,
    #[serde(skip)]
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SessionReport {
    pub schema: &'static str,
    pub field: String,
    pub max_degree: i32,
    pub results: Vec<CommandResult>,
}

impl SessionReport {
    pub fn exit_code(&self, strict: bool) -> i32 {
        let mut code = 0;
        for r in &self.results {
            let c = if r.exit_code == 0 && strict && r.inconclusive {
                1
            } else {
                r.exit_code
            };
            code = worse(code, c);
        }
        code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("[{}] {} {}\n", r.index, r.op, r.status));
            if let Json::Object(map) = &r.body {
                for (k, v) in map {
                    let shown = match v {
                        Json::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("    {k}: {shown}\n"));
                }
            }
        }
        out
    }
}

fn worse(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        3 => 3,
        2 => 2,
        1 => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

/// Parses, builds and executes a session.
pub fn run_session(text: &str, config: &RunConfig) -> Result<SessionReport> {
    run_parsed(&SessionFile::parse(text)?, config)
}

/// Builds and executes an already parsed session.
pub fn run_parsed(session: &SessionFile, config: &RunConfig) -> Result<SessionReport> {
    let field = match config.field {
        Some(f) => f,
        None => Field::parse_spec(&session.field)?,
    };
    let env = Environment::build(session, field)?;
    let exec = |(i, c): (usize, &Command)| execute(&env, i, c, config);
    let results: Vec<CommandResult> = if config.threads <= 1 {
        session.commands.iter().enumerate().map(exec).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| session.commands.par_iter().enumerate().map(exec).collect())
    };
    Ok(SessionReport {
        schema: SCHEMA,
        field: field.spec(),
        max_degree: config.max_degree,
        results,
    })
}

fn op_name(c: &Command) -> String {
    match c {
        Command::Homology { .. } => "homology".into(),
        Command::Koszul { .. } => "koszul".into(),
        Command::Detect { .. } => "detect".into(),
        Command::Poincare { .. } => "poincare".into(),
        Command::Tor { .. } => "tor".into(),
        Command::Perfect { .. } => "perfect".into(),
        Command::Verify(v) => format!("verify {}", v.id),
    }
}

fn execute(env: &Environment, index: usize, c: &Command, config: &RunConfig) -> CommandResult {
    let op = op_name(c);
    match execute_inner(env, c, config) {
        Ok((status, body)) => {
            let exit_code = if status == Verdict::Fail.as_str() { 1 } else { 0 };
            let inconclusive = matches!(
                status.as_str(),
                "SKIPPED" | "UNDETERMINED" | "NOT-APPLICABLE" | "HYPOTHESIS-UNDETERMINED"
            );
            CommandResult {
                index,
                op,
                status,
                body,
                exit_code,
                inconclusive,
            }
        }
        Err(e) => CommandResult {
            index,
            op,
            status: "ERROR".into(),
            body: json!({ "error": e.to_string() }),
            exit_code: e.exit_code(),
            inconclusive: false,
        },
    }
}

fn degree_for(explicit: Option<i32>, config: &RunConfig) -> i32 {
    explicit.or(config.window.map(|w| w.1)).unwrap_or(config.max_degree)
}

fn dims_json(lo: i32, dims: &[usize]) -> Json {
    json!({ "lo": lo, "dims": dims })
}

fn homology_json(c: &ChainComplex) -> Result<Json> {
    let h = homology(c, None)?;
    Ok(dims_json(c.space().lo(), &h.dims()))
}

fn execute_inner(env: &Environment, c: &Command, config: &RunConfig) -> Result<(String, Json)> {
    let ok = |body: Json| Ok(("OK".to_string(), body));
    match c {
        Command::Homology { of } => {
            let cx = env.complex(of)?;
            ok(json!({
                "of": of,
                "chain_dims": dims_json(cx.space().lo(), &cx.space().dims()),
                "homology": homology_json(&cx)?,
            }))
        }
        Command::Koszul { ring } => {
            let k = koszul_complex(env.ring(ring)?)?;
            let h = k.algebra.homology_algebra()?;
            let vanish = crate::detect::products_vanish(&h.algebra).is_none();
            ok(json!({
                "ring": ring,
                "variables": k.variables.iter().map(|v| v.0.clone()).collect::<Vec<_>>(),
                "chain_dims": dims_json(k.algebra.space().lo(), &k.algebra.space().dims()),
                "homology": dims_json(h.homology.lo, &h.dims()),
                "positive_products_vanish": vanish,
            }))
        }
        Command::Detect { algebra, mode, w } => {
            let a = env.algebra(algebra)?;
            let search = SearchConfig {
                max_iters: 16,
                seed: config.seed,
            };
            let cert = match (mode, w) {
                (_, Some(labels)) => {
                    let vs = labels
                        .iter()
                        .map(|l| {
                            a.space()
                                .find(l)
                                .map(|g| SparseVec::unit(g, a.field()))
                                .ok_or_else(|| Error::Reference(l.clone()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    verify_axw_split(&a, &vs)?
                }
                (DetectMode::KxW, None) => certify_kxw(&a, search)?,
                (DetectMode::AxW, None) => {
                    if a.has_zero_differential() {
                        auto_axw(&a)?
                    } else {
                        auto_axw(&a.homology_algebra()?.algebra)?
                    }
                }
                (DetectMode::Auto, None) => {
                    if a.has_zero_differential() {
                        auto_axw(&a)?
                    } else {
                        certify_kxw(&a, search)?
                    }
                }
            };
            let status = match cert.verdict {
                StructureVerdict::Undetermined => "UNDETERMINED".to_string(),
                v => v.to_string(),
            };
            Ok((status, json!({ "algebra": algebra, "witness": cert.detail })))
        }
        Command::Poincare { module, degree } => {
            let n = degree_for(*degree, config);
            let s = tor_against_k(&env.module(module)?, n)?;
            ok(json!({ "module": module, "lo": s.lo, "coefficients": s.coefficients }))
        }
        Command::Tor { left, right, window } => {
            let (l, r) = (env.module(left)?, env.module(right)?);
            let lo = l.space().inf().unwrap_or(0) + r.space().inf().unwrap_or(0);
            let w = window.or(config.window).unwrap_or((lo, config.max_degree));
            let t = tor(&l, &r, w)?;
            ok(json!({
                "left": left,
                "right": right,
                "tor": dims_json(t.lo, &t.dims),
                "provenance": t.provenance,
            }))
        }
        Command::Perfect { module, degree } => {
            let n = degree_for(*degree, config);
            let v = certify_perfect(&env.module(module)?, n)?;
            let body = match &v {
                PerfectionVerdict::Perfect { top, counts } => json!({ "module": module, "top": top, "counts": counts }),
                PerfectionVerdict::NotPerfect { counts } => json!({ "module": module, "counts": counts }),
                PerfectionVerdict::Undetermined { reason, counts } => {
                    json!({ "module": module, "reason": reason, "counts": counts })
                }
            };
            Ok((v.name().to_string(), body))
        }
        Command::Verify(v) => {
            let rep = run_verification(env, v, config)?;
            let status = rep.verdict.as_str().to_string();
            Ok((status, serde_json::to_value(&rep).expect("report serializes")))
        }
    }
}

fn need<'a>(v: &'a Option<String>, what: &str, id: TheoremId) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::Parse(format!("verify {id} needs `{what}`")))
}

/// Dispatches a `verify` command to its check.
pub fn run_verification(env: &Environment, v: &VerifyCommand, config: &RunConfig) -> Result<VerificationReport> {
    let id = TheoremId::parse(&v.id)?;
    let n = degree_for(v.degree, config);
    match id {
        TheoremId::ThmTor | TheoremId::Nonvanishing => {
            let a = env.algebra(need(&v.base, "base", id)?)?;
            let eps = a.augmentation()?.clone();
            let w = env.complex(need(&v.w, "w", id)?)?;
            let m = env.module(need(&v.m, "m", id)?)?;
            let nm = env.module(need(&v.n, "n", id)?)?;
            if id == TheoremId::ThmTor {
                verify::verify_thm_tor(&a, &eps, &w, &m, &nm, n)
            } else {
                verify::nonvanishing_window(&a, &eps, &w, &m, &nm, n)
            }
        }
        TheoremId::PsProduct | TheoremId::Herzog => {
            let (alpha, beta) = retract_pair(env, v, id)?;
            let l = env.module(need(&v.l, "l", id)?)?;
            if id == TheoremId::PsProduct {
                verify::verify_poincare_product(&beta, &alpha, &l, n)
            } else {
                verify::verify_herzog(&alpha, &beta, &l, n)
            }
        }
        TheoremId::Decomposition => {
            let beta = match (&v.beta, &v.extension) {
                (Some(b), _) => env.morphism(b)?,
                (None, Some(t)) => env.extension(t)?.beta.clone(),
                _ => return Err(Error::Parse("verify decomposition needs `beta` or `extension`".into())),
            };
            verify::verify_decomposition(&beta, n)
        }
        TheoremId::Star => {
            let m = env.module(need(&v.m, "m", id)?)?;
            let nm = env.module(need(&v.n, "n", id)?)?;
            verify::star_property_check(&m, &nm, n)
        }
        TheoremId::ThLocal => {
            let r = env.ring(need(&v.ring, "ring", id)?)?;
            let m = env.module(need(&v.m, "m", id)?)?;
            let nm = env.module(need(&v.n, "n", id)?)?;
            let search = SearchConfig {
                max_iters: 16,
                seed: config.seed,
            };
            verify::th_local_pipeline(r, &m, &nm, n, search)
        }
        TheoremId::RetractSplit => {
            let (alpha, beta) = retract_pair(env, v, id)?;
            let l = env.module(need(&v.l, "l", id)?)?;
            let m = env.module(need(&v.m, "m", id)?)?;
            verify::verify_lemma_retract_splitting(&alpha, &beta, &l, &m)
        }
        TheoremId::KoszulTransfer => {
            let ext = env.koszul(need(&v.extension, "extension", id)?)?;
            let m = env.module(need(&v.m, "m", id)?)?;
            let nm = env.module(need(&v.n, "n", id)?)?;
            verify::verify_koszul_transfer(ext, &m, &nm, n)
        }
    }
}

fn retract_pair(env: &Environment, v: &VerifyCommand, id: TheoremId) -> Result<(AlgebraMorphism, AlgebraMorphism)> {
    if let Some(t) = &v.extension {
        let t = env.extension(t)?;
        return Ok((t.alpha.clone(), t.beta.clone()));
    }
    let alpha = env.morphism(need(&v.alpha, "alpha", id)?)?;
    let beta = env.morphism(need(&v.beta, "beta", id)?)?;
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQ: &str = r#"{
      "schema": "dgtor/1",
      "field": "fp:101",
      "definitions": [
        {"name": "R", "kind": "ring", "vars": ["x", "y"], "relations": ["x^2", "x*y", "y^2"]},
        {"name": "k", "kind": "residue", "over": "R"},
        {"name": "K", "kind": "koszul", "ring": "R"}
      ],
      "commands": [
        {"op": "koszul", "ring": "R"},
        {"op": "detect", "algebra": "K"},
        {"op": "poincare", "module": "k", "degree": 6}
      ]
    }"#;

    #[test]
    fn square_zero_session() {
        let rep = run_session(SQ, &RunConfig::default()).unwrap();
        assert_eq!(rep.exit_code(false), 0);
        assert_eq!(rep.results[1].status, "CERTIFIED-k⋉W");
        assert_eq!(rep.results[0].body["homology"]["dims"], json!([1, 3, 2]));
        assert_eq!(rep.results[2].body["coefficients"], json!([1, 2, 4, 8, 16, 32, 64]));
    }

    #[test]
    fn empty_session() {
        let rep = run_session(r#"{"field": "q"}"#, &RunConfig::default()).unwrap();
        assert!(rep.results.is_empty());
        assert_eq!(rep.exit_code(true), 0);
    }

    #[test]
    fn dangling_reference() {
        let text = r#"{"field": "fp:7", "definitions": [{"name": "k", "kind": "residue", "over": "S"}]}"#;
        let e = run_session(text, &RunConfig::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("`S`"));
    }

    #[test]
    fn cycles_and_duplicates() {
        let text = r#"{"field": "fp:7", "definitions": [
            {"name": "a", "kind": "residue", "over": "b"},
            {"name": "b", "kind": "koszul", "ring": "a"}]}"#;
        assert!(run_session(text, &RunConfig::default())
            .unwrap_err()
            .to_string()
            .contains("cyclic"));
        let text =
            r#"{"field": "fp:7", "definitions": [{"name": "a", "kind": "ground"}, {"name": "a", "kind": "ground"}]}"#;
        assert!(SessionFile::parse(text).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn parse_error_position() {
        let e = SessionFile::parse("{\n  \"field\": }").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }

    #[test]
    fn round_trip() {
        let s = SessionFile::parse(SQ).unwrap();
        assert_eq!(SessionFile::parse(&s.to_json()).unwrap(), s);
    }
}
