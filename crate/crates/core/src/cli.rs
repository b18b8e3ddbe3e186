//! Batch front end: one subcommand per computation, JSON payloads in, JSON or
//! text reports out.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::LocalityVerdict;
use crate::exactfield::{ExtElem, FieldTower, Rational};
use crate::linalg::Matrix;
use crate::pairs::{
    certificate_level, decompose, hom_pairs, is_indecomposable, is_isomorphic, psi_default,
    render_psi, PairError, PairJson, PairModule,
};
use crate::polymat::LPoly;
use crate::ringop::{
    comaximal_factorization, coprime_obstruction, crt_idempotents, factor_element, genus_of,
    genus_realizable, glue_submodule, iso_from_genus, min_generators, support,
    validate_trace_chain, verify_glue, GenusDescriptor, IdealOfR, LocalAssignment, LocalInvariant,
    MaximalIdealDesc, RModule, RingError,
};
use crate::semigroup::{NumericalSemigroup, SemigroupError};

pub const REPORT_SCHEMA: &str = "tfmodlab.report/v1";

#[derive(Debug, Parser)]
#[command(
    name = "tfmodlab",
    version,
    about = "Exact computations with torsion-free modules over K + xL[x]"
)]
pub struct Cli {
    /// Field tower: `builtin:theta7`, `poly:c0,c1,…`, or a file holding either.
    #[arg(long, global = true, default_value = "builtin:theta7")]
    pub tower: String,
    #[arg(long, global = true, env = "TFMODLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Truncation degree for ideal reports; must reach the computed bound.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Payload file; stdin when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the family Ψ_t of rank-n pairs and compare its members.
    Psi {
        #[arg(long)]
        n: usize,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "0,1,2,3"
        )]
        t: Vec<i64>,
    },
    /// Split a pair into indecomposables.
    Decompose,
    /// Decide whether two pairs are isomorphic.
    Iso,
    /// Build a module from prescribed localizations.
    Glue,
    /// Factorizations, CRT elements, local generator counts and trace chains.
    Ideal,
    /// Frobenius number, gaps and the overmodule check of a numerical semigroup.
    Semigroup {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<u64>,
    },
    /// Genus of a module, or realizability of a genus descriptor.
    Genus,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Psi { .. } => "psi",
            Command::Decompose => "decompose",
            Command::Iso => "iso",
            Command::Glue => "glue",
            Command::Ideal => "ideal",
            Command::Semigroup { .. } => "semigroup",
            Command::Genus => "genus",
        }
    }

    fn anchor(&self) -> &'static str {
        match self {
            Command::Psi { .. } => "Construction Ψ_t",
            Command::Decompose => "Krull–Schmidt decomposition of artinian pairs",
            Command::Iso => "Isomorphism of artinian pairs",
            Command::Glue => "Package deal for submodules",
            Command::Ideal => "Ideals of K + xL[x]",
            Command::Semigroup { .. } => "Numerical semigroup rings",
            Command::Genus => "Genus and realizability",
        }
    }

    fn needs_payload(&self) -> bool {
        !matches!(self, Command::Psi { .. } | Command::Semigroup { .. })
    }
}

/// Failure classes with their exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed or invalid input (exit 2).
    Schema { kind: String, message: String },
    /// The computation could not certify its answer (exit 3).
    Compute { kind: String, message: String },
}

impl CliError {
    fn schema(kind: &str, message: impl ToString) -> Self {
        CliError::Schema {
            kind: kind.to_string(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } => 2,
            CliError::Compute { .. } => 3,
        }
    }

    fn to_json(&self) -> Value {
        let (class, kind, message) = match self {
            CliError::Schema { kind, message } => ("SchemaError", kind, message),
            CliError::Compute { kind, message } => ("ComputeError", kind, message),
        };
        json!({ "class": class, "kind": kind, "message": message })
    }
}

fn variant_name<E: std::fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("")
        .to_string()
}

impl From<PairError> for CliError {
    fn from(e: PairError) -> Self {
        let (kind, message) = (variant_name(&e), e.to_string());
        match e {
            PairError::UncertifiedFactors
            | PairError::Singular
            | PairError::TruncationUnstable(_)
            | PairError::Algebra(_) => CliError::Compute { kind, message },
            _ => CliError::Schema { kind, message },
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::Pair(p) => p.into(),
            RingError::GenusMismatch => CliError::Compute {
                kind: variant_name(&e),
                message: e.to_string(),
            },
            _ => CliError::schema(&variant_name(&e), e),
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        CliError::schema(&variant_name(&e), e)
    }
}

/// Everything a run produced: exit code and the rendered report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

/// Parse arguments, read the payload if the subcommand takes one, and run.
pub fn run_from_args<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                report: e.render().to_string(),
            };
        }
    };
    let payload = if cli.command.needs_payload() {
        let mut buf = String::new();
        let read = match &cli.input {
            Some(p) => std::fs::read_to_string(p).map(|s| buf = s),
            None => stdin.read_to_string(&mut buf).map(|_| ()),
        };
        if let Err(e) = read {
            return finish(&cli, Err(CliError::schema("PayloadUnreadable", e)), None);
        }
        Some(buf)
    } else {
        None
    };
    dispatch(&cli, payload.as_deref())
}

/// Run one configured subcommand on its payload.
pub fn dispatch(cli: &Cli, payload: Option<&str>) -> Outcome {
    let tower = match load_tower(&cli.tower) {
        Ok(t) => t,
        Err(e) => return finish(cli, Err(e), None),
    };
    let result = match &cli.command {
        Command::Psi { n, t } => run_psi(&tower, *n, t, cli.seed),
        Command::Semigroup { gens } => run_semigroup(gens),
        cmd => {
            let text = payload.unwrap_or("");
            match cmd {
                Command::Decompose => parse(text).and_then(|p| run_decompose(&tower, p, cli.seed)),
                Command::Iso => parse(text).and_then(|p| run_iso(&tower, p)),
                Command::Glue => parse(text).and_then(|p| run_glue(&tower, p)),
                Command::Ideal => parse(text).and_then(|p| run_ideal(&tower, p, cli.truncation)),
                Command::Genus => parse(text).and_then(|p| run_genus(&tower, p, cli.seed)),
                _ => unreachable!(),
            }
        }
    };
    finish(cli, result, Some(&tower))
}

/// A report that may still fail: `partial` is kept alongside a compute error.
struct Partial {
    result: Value,
    error: Option<CliError>,
}

impl From<Value> for Partial {
    fn from(result: Value) -> Self {
        Partial {
            result,
            error: None,
        }
    }
}

fn finish(cli: &Cli, result: Result<Partial, CliError>, tower: Option<&FieldTower>) -> Outcome {
    let (result, error) = match result {
        Ok(p) => (Some(p.result), p.error),
        Err(e) => (None, Some(e)),
    };
    let mut report = BTreeMap::new();
    report.insert("schema", json!(REPORT_SCHEMA));
    report.insert("command", json!(cli.command.name()));
    report.insert("anchor", json!(cli.command.anchor()));
    report.insert("seed", json!(cli.seed));
    report.insert(
        "tower",
        json!(tower.map(|t| t.id()).unwrap_or_else(|| cli.tower.clone())),
    );
    report.insert(
        "status",
        json!(if error.is_some() { "error" } else { "ok" }),
    );
    if let Some(r) = result {
        report.insert("result", r);
    }
    if let Some(e) = &error {
        report.insert("error", e.to_json());
    }
    let value = serde_json::to_value(report).expect("report is plain JSON");
    let mut text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("report is plain JSON"),
        Format::Text => {
            let pretty = match tower {
                Some(t) => prettify(value, t),
                None => value,
            };
            render_text(&pretty, 0)
        }
    };
    text.push('\n');
    let code = error.as_ref().map_or(0, CliError::exit_code);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            return Outcome {
                code: 2,
                report: format!("cannot write {}: {e}\n", path.display()),
            };
        }
        return Outcome {
            code,
            report: String::new(),
        };
    }
    Outcome { code, report: text }
}

fn load_tower(spec: &str) -> Result<FieldTower, CliError> {
    let id = if spec.starts_with("builtin:") || spec.starts_with("poly:") {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| CliError::schema("TowerUnreadable", format!("{spec}: {e}")))?
            .trim()
            .to_string()
    };
    FieldTower::from_id(&id).map_err(|e| CliError::schema("BadTower", e))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::schema("SchemaError", e))
}

fn verdict_json(v: &LocalityVerdict) -> Value {
    let mut out = json!({
        "verdict": v.tag(),
        "certificate": certificate_level(v),
        "note": v.note(),
    });
    if matches!(v, LocalityVerdict::ProbablyLocal) {
        out["caveat"] = json!("locality not proven; splitting search was inconclusive");
    }
    out
}

fn matrix_json(m: &Matrix<ExtElem>) -> Value {
    json!(m.row_vecs())
}

fn local_json(inv: &LocalInvariant) -> Value {
    match inv {
        LocalInvariant::Pair(None) => json!({ "kind": "zero" }),
        LocalInvariant::Pair(Some(p)) => json!({
            "kind": "pair",
            "free": p.is_free(),
            "dim_k": p.dim_k(),
            "pair": p.to_json(),
        }),
        LocalInvariant::Free { rank, valuations } => json!({
            "kind": "free",
            "rank": rank,
            "valuations": valuations,
        }),
    }
}

fn run_psi(tower: &FieldTower, n: usize, ts: &[i64], seed: u64) -> Result<Partial, CliError> {
    if ts.is_empty() {
        return Err(CliError::schema("EmptyFamily", "no parameters given"));
    }
    let t_arc = Arc::new(tower.clone());
    let l = tower;
    let pairs = ts
        .iter()
        .map(|&t| psi_default(t_arc.clone(), n, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut members = Vec::new();
    for (&t, p) in ts.iter().zip(&pairs) {
        let verdict = is_indecomposable(p, seed)?;
        members.push(json!({
            "t": t,
            "dim_k": p.dim_k(),
            "free": p.is_free(),
            "end_dim": hom_pairs(p, p)?.len(),
            "indecomposable": verdict_json(&verdict),
            "matrix": render_psi(l, n, &Rational::from_int(t), &l.theta(), &l.theta_pow(3)),
            "pair": p.to_json(),
        }));
    }
    let mut comparisons = Vec::new();
    let mut distinct = true;
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let iso = is_isomorphic(&pairs[i], &pairs[j])?;
            distinct &= !iso.isomorphic;
            comparisons.push(json!({
                "t": [ts[i], ts[j]],
                "hom_dim": hom_pairs(&pairs[i], &pairs[j])?.len(),
                "isomorphic": iso.isomorphic,
            }));
        }
    }
    Ok(json!({
        "n": n,
        "alpha": l.theta(),
        "beta": l.theta_pow(3),
        "members": members,
        "comparisons": comparisons,
        "pairwise_nonisomorphic": distinct,
    })
    .into())
}

fn run_semigroup(gens: &[u64]) -> Result<Partial, CliError> {
    let s = NumericalSemigroup::new(gens)?;
    let dr = s.dr_check()?;
    let over = s.overmodule_min_gens()?;
    Ok(json!({
        "generators": s.generators(),
        "multiplicity": s.multiplicity(),
        "frobenius": s.frobenius()?,
        "gaps": s.gaps()?,
        "normalization_local": s.normalization_local(),
        "overmodule_min_gens": over.count,
        "overmodule_witnesses": over.witnesses.iter().map(|j| format!("t^{j}")).collect::<Vec<_>>(),
        "dr_check": dr,
        "dr1_convention": "the normalization needs at most 3 generators; that count equals the multiplicity",
    })
    .into())
}

fn pair_from(tower: &FieldTower, j: &PairJson) -> Result<PairModule, CliError> {
    Ok(PairModule::from_json(j, Arc::new(tower.clone()))?)
}

fn run_decompose(tower: &FieldTower, payload: PairJson, seed: u64) -> Result<Partial, CliError> {
    let p = pair_from(tower, &payload)?;
    let rep = decompose(&p, seed)?;
    let factors: Vec<Value> = rep
        .factors
        .iter()
        .zip(&rep.verdicts)
        .zip(rep.class_of())
        .map(|((f, v), c)| {
            json!({
                "rank": f.n(),
                "dim_k": f.dim_k(),
                "free": f.is_free(),
                "class": c,
                "indecomposable": verdict_json(v),
                "pair": f.to_json(),
            })
        })
        .collect();
    let certified = rep.all_certified();
    Ok(Partial {
        result: json!({
            "factor_count": rep.factors.len(),
            "factors": factors,
            "iso_classes": rep.iso_classes,
            "all_certified": certified,
            "witness": matrix_json(&rep.witness),
        }),
        error: (!certified).then(|| CliError::from(PairError::UncertifiedFactors)),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsoPayload {
    p: PairJson,
    q: PairJson,
}

fn run_iso(tower: &FieldTower, payload: IsoPayload) -> Result<Partial, CliError> {
    let p = pair_from(tower, &payload.p)?;
    let q = pair_from(tower, &payload.q)?;
    if p == q {
        return Ok(json!({
            "isomorphic": true,
            "method": "identical",
            "witness": matrix_json(&Matrix::identity(tower, p.n())),
        })
        .into());
    }
    let r = is_isomorphic(&p, &q)?;
    Ok(json!({
        "isomorphic": r.isomorphic,
        "method": if r.symbolic { "determinant" } else { "random" },
        "witness": r.witness.as_ref().map(matrix_json),
    })
    .into())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluePayload {
    n: usize,
    assignments: Vec<AssignmentJson>,
    #[serde(default)]
    variant: i64,
    /// Extra primes where the glued module must agree with the ambient one.
    #[serde(default)]
    probes: Option<Vec<MaximalIdealDesc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentJson {
    prime: MaximalIdealDesc,
    #[serde(default)]
    pair: Option<PairJson>,
    #[serde(default)]
    power: Option<usize>,
    #[serde(default)]
    module: Option<Vec<Vec<LPoly>>>,
}

fn prime_checked(tower: &FieldTower, p: &MaximalIdealDesc) -> Result<MaximalIdealDesc, CliError> {
    match p {
        MaximalIdealDesc::M0 => Ok(MaximalIdealDesc::M0),
        MaximalIdealDesc::Poly(q) => Ok(MaximalIdealDesc::poly(tower, q)?),
    }
}

fn run_glue(tower: &FieldTower, payload: GluePayload) -> Result<Partial, CliError> {
    let t = Arc::new(tower.clone());
    let l = tower;
    let ambient = RModule::free(t.clone(), payload.n);
    let mut assignments = Vec::new();
    for a in &payload.assignments {
        let prime = prime_checked(l, &a.prime)?;
        let local = match (&a.pair, a.power, &a.module) {
            (Some(pj), None, None) => {
                if prime != MaximalIdealDesc::M0 {
                    return Err(CliError::schema(
                        "PairAwayFromM0",
                        "pairs can only be assigned at M0",
                    ));
                }
                LocalAssignment::Submodule(crate::ringop::embed_pair(&pair_from(l, pj)?))
            }
            (None, Some(k), None) => LocalAssignment::Power(k),
            (None, None, Some(gens)) => {
                LocalAssignment::Submodule(RModule::span(t.clone(), payload.n, gens))
            }
            _ => {
                return Err(CliError::schema(
                    "AmbiguousAssignment",
                    "each assignment needs exactly one of pair, power, module",
                ))
            }
        };
        assignments.push((prime, local));
    }
    let probes = match &payload.probes {
        Some(ps) => ps
            .iter()
            .map(|p| prime_checked(l, p))
            .collect::<Result<Vec<_>, _>>()?,
        None => [2, 3, -1]
            .iter()
            .map(|&c| MaximalIdealDesc::linear(l, c))
            .collect(),
    };
    let glued = glue_submodule(&ambient, &assignments, payload.variant)?;
    let alternate = glue_submodule(&ambient, &assignments, payload.variant + 1)?;
    let verified = verify_glue(&ambient, &assignments, &glued.module, &probes);
    let local: Vec<Value> = assignments
        .iter()
        .map(|(p, _)| p)
        .chain(probes.iter().filter(|p| !assignments.iter().any(|(q, _)| q == *p)))
        .map(|p| json!({ "prime": p, "render": p.render(), "local": local_json(&glued.module.localize(p)) }))
        .collect();
    Ok(json!({
        "generators": glued.module.generators(),
        "rank": glued.module.rank(),
        "d": glued.d,
        "crt": {
            "targets": glued.crt.targets,
            "b": glued.crt.b,
            "complement": glued.crt.complement,
            "verified": glued.crt.verify(),
        },
        "localizations": local,
        "verified": verified,
        "alternate_variant": {
            "variant": payload.variant + 1,
            "isomorphic": iso_from_genus(&glued.module, &alternate.module)?.is_some(),
        },
    })
    .into())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealPayload {
    #[serde(default)]
    ideal: Option<Vec<LPoly>>,
    #[serde(default)]
    factor: Vec<LPoly>,
    #[serde(default)]
    crt: Option<CrtPayload>,
    #[serde(default)]
    trace_chain: Option<Vec<Vec<LPoly>>>,
    #[serde(default)]
    coprime: Option<(u64, u64)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrtPayload {
    modulus: Vec<LPoly>,
    targets: Vec<MaximalIdealDesc>,
}

/// Smallest degree past which an ideal `x^e·h·(W + xS)` agrees with `x^e·h·S`.
fn truncation_bound(i: &IdealOfR) -> usize {
    i.hull()
        .map_or(0, |(e, h, _)| e + h.degree().unwrap_or(0) + 2)
}

fn check_truncation(i: &IdealOfR, requested: Option<usize>) -> Result<usize, CliError> {
    let bound = truncation_bound(i);
    match requested {
        Some(t) if t < bound => Err(CliError::schema(
            "TruncationBelowBound",
            format!("truncation {t} is below the computed bound {bound}"),
        )),
        Some(t) => Ok(t),
        None => Ok(bound),
    }
}

fn ideal_summary(i: &IdealOfR, truncation: Option<usize>) -> Result<Value, CliError> {
    let trunc = check_truncation(i, truncation)?;
    let mut primes = Vec::new();
    if !i.is_zero() && !i.is_unit() {
        for (p, comp) in comaximal_factorization(i)? {
            primes.push(json!({
                "prime": p,
                "render": p.render(),
                "min_generators": min_generators(i, &p)?,
                "component": comp.to_json(),
            }));
        }
    }
    Ok(json!({
        "hull": i.to_json(),
        "unit": i.is_unit(),
        "truncation": trunc,
        "support": if i.is_zero() { vec![] } else { support(i).unwrap_or_default() },
        "components": primes,
    }))
}

fn run_ideal(
    tower: &FieldTower,
    payload: IdealPayload,
    truncation: Option<usize>,
) -> Result<Partial, CliError> {
    let t = Arc::new(tower.clone());
    let l = tower;
    let mut out = BTreeMap::new();
    if let Some(gens) = &payload.ideal {
        let i = IdealOfR::from_gens(t.clone(), gens)?;
        out.insert("ideal", ideal_summary(&i, truncation)?);
    }
    if !payload.factor.is_empty() {
        let mut rows = Vec::new();
        for r in &payload.factor {
            let f = factor_element(l, r)?;
            rows.push(json!({
                "element": r,
                "unit": f.unit,
                "x_exponent": f.e,
                "factors": f.factors,
                "round_trip": f.expand(l) == *r,
            }));
        }
        out.insert("factor", json!(rows));
    }
    if let Some(c) = &payload.crt {
        let modulus = IdealOfR::from_gens(t.clone(), &c.modulus)?;
        check_truncation(&modulus, truncation)?;
        let targets = c
            .targets
            .iter()
            .map(|p| prime_checked(l, p))
            .collect::<Result<Vec<_>, _>>()?;
        let e = crt_idempotents(&targets, &modulus)?;
        out.insert(
            "crt",
            json!({
                "targets": e.targets,
                "b": e.b,
                "complement": e.complement,
                "verified": e.verify(),
            }),
        );
    }
    if let Some(chain) = &payload.trace_chain {
        let ideals = chain
            .iter()
            .map(|g| IdealOfR::from_gens(t.clone(), g))
            .collect::<Result<Vec<_>, _>>()?;
        out.insert("trace_chain", json!(validate_trace_chain(&ideals)?));
    }
    if let Some((r1, r2)) = payload.coprime {
        out.insert("coprime", json!(coprime_obstruction(r1, r2)?));
    }
    if out.is_empty() {
        return Err(CliError::schema(
            "EmptyPayload",
            "no ideal computation requested",
        ));
    }
    Ok(json!(out).into())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenusPayload {
    #[serde(default)]
    descriptor: Option<GenusDescriptor>,
    #[serde(default)]
    module: Option<ModulePayload>,
    /// A second module to compare against `module`.
    #[serde(default)]
    compare: Option<ModulePayload>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ModulePayload {
    n: usize,
    gens: Vec<Vec<LPoly>>,
}

fn module_from(tower: &Arc<FieldTower>, m: &ModulePayload) -> Result<RModule, CliError> {
    if m.n == 0 {
        return Err(CliError::schema("ZeroRank", "module rank must be positive"));
    }
    if let Some(g) = m.gens.iter().find(|g| g.len() != m.n) {
        return Err(CliError::schema(
            "BadLength",
            format!("generator has {} entries, expected {}", g.len(), m.n),
        ));
    }
    let r = crate::ringop::RingR::new(tower.clone());
    if m.gens.iter().flatten().any(|f| !r.contains(f)) {
        return Err(CliError::schema(
            "NotInR",
            "generator entries must lie in R",
        ));
    }
    Ok(RModule::span(tower.clone(), m.n, &m.gens))
}

fn run_genus(tower: &FieldTower, payload: GenusPayload, seed: u64) -> Result<Partial, CliError> {
    let t = Arc::new(tower.clone());
    let mut out = BTreeMap::new();
    if let Some(d) = &payload.descriptor {
        out.insert("descriptor", json!({ "realizable": genus_realizable(d)? }));
    }
    if let Some(mj) = &payload.module {
        let m = module_from(&t, mj)?;
        let g = genus_of(&m, seed)?;
        let realizable = genus_realizable(&g)?;
        out.insert("module", json!({ "genus": g, "realizable": realizable }));
        if let Some(cj) = &payload.compare {
            let c = module_from(&t, cj)?;
            let witness = iso_from_genus(&m, &c)?;
            out.insert(
                "compare",
                json!({
                    "same_genus": witness.is_some(),
                    "pair_witness": witness.as_ref().map(matrix_json),
                }),
            );
        }
    } else if payload.compare.is_some() {
        return Err(CliError::schema("MissingModule", "compare needs module"));
    }
    if out.is_empty() {
        return Err(CliError::schema(
            "EmptyPayload",
            "genus needs descriptor or module",
        ));
    }
    Ok(json!(out).into())
}

/// Replace every coordinate vector of a field element by its rendering, so
/// text reports show `θ^3 + 2` rather than seven rationals.
fn prettify(v: Value, tower: &FieldTower) -> Value {
    let degree = tower.degree();
    match v {
        Value::Array(items) => {
            let coords: Option<Vec<Rational>> = (items.len() == degree)
                .then(|| {
                    items
                        .iter()
                        .map(|x| x.as_str().and_then(|s| s.parse().ok()))
                        .collect()
                })
                .flatten();
            match coords.and_then(|c| tower.elem(c).ok()) {
                Some(e) => Value::String(e.to_string()),
                None => Value::Array(items.into_iter().map(|x| prettify(x, tower)).collect()),
            }
        }
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, x)| (k, prettify(x, tower)))
                .collect(),
        ),
        other => other,
    }
}

/// Indented `key: value` rendering of a report; rationals and field
/// elements keep their JSON spelling.
fn render_text(v: &Value, depth: usize) -> String {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::Object(_) | Value::Array(_) if !is_leafy(x) => {
                    format!("{pad}{k}:\n{}", render_text(x, depth + 1))
                }
                _ => format!("{pad}{k}: {}", inline(x)),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if is_leafy(x) {
                    format!("{pad}- {}", inline(x))
                } else {
                    format!("{pad}[{i}]\n{}", render_text(x, depth + 1))
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => format!("{pad}{}", inline(v)),
    }
}

fn is_leafy(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.is_empty(),
        Value::Array(a) => a.iter().all(|x| !x.is_object()) && inline(v).len() <= 100,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains('\n') => format!("\n{s}"),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
