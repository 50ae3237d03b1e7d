use std::fmt;
use std::path::Path;
use std::sync::Arc;

use quivhom::evidence::{build_one_point_report, build_report, EvidenceReport, ReportVerdict};
use quivhom::exactlin::Field;
use quivhom::matrixcat::{one_point_extension, staircase, staircase_base_spec, staircase_spec};
use quivhom::modcat::{ext_dims, resolve, simple, yoneda_projective, Rep};
use quivhom::pathcat::{build_category, check_admissible, ideal_from_generators, IdealData, PathCategory};
use quivhom::quiver::{parse_spec_with, CheckDirective, ParseOptions, QuiverSpec};
use quivhom::sie::{check_strongly_idempotent, IdealContext, SieCertificate, TestModules, Verdict};
use quivhom::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::render;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug)]
pub struct Config {
    pub field: Option<Field>,
    pub degree: usize,
    pub truncate: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub status: Status,
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input.
    Input(String),
    /// A computation failed internally.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::LiftFailure(_) | Error::NoSolution(_) => CliError::Compute(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

struct Loaded {
    label: String,
    pc: PathCategory,
}

fn label_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load(cfg: &Config, path: &Path) -> Res<Loaded> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let spec = parse_spec_with(&bytes, ParseOptions { field_override: cfg.field })
        .map_err(|e| CliError::Input(format!("{}:{e}", path.display())))?;
    let pc = build_category(&spec).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded { label: label_of(path), pc })
}

fn config_json(cfg: &Config, field: Field) -> Value {
    json!({ "field": field.to_string(), "degree": cfg.degree, "truncate": cfg.truncate, "seed": cfg.seed })
}

fn envelope(command: &str, cfg: &Config, field: Field, body: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    out.insert("config".into(), config_json(cfg, field));
    out.extend(body);
    Value::Object(out)
}

fn vertex(pc: &PathCategory, name: &str) -> Res<usize> {
    pc.spec().vertex_index(name).ok_or_else(|| CliError::Input(format!("unknown vertex `{name}`")))
}

/// A declared module, `P(x)` (representable) or `S(x)` (simple).
pub fn module_ref(pc: &PathCategory, name: &str) -> Res<Rep> {
    if let Some(m) = pc.spec().module(name) {
        return Ok(Rep::from_spec(pc, m)?);
    }
    let inner = |p: &str| name.strip_prefix(p).and_then(|s| s.strip_suffix(')'));
    if let Some(x) = inner("P(") {
        return Ok(yoneda_projective(pc.category(), vertex(pc, x)?));
    }
    if let Some(x) = inner("S(") {
        return Ok(simple(pc.category(), vertex(pc, x)?)?);
    }
    Err(CliError::Input(format!("unknown module `{name}`")))
}

/// A declared ideal, or `zero`.
pub fn ideal_ref(pc: &PathCategory, name: &str) -> Res<IdealData> {
    match pc.spec().ideal(name) {
        Some(i) => Ok(pc.ideal(i)?),
        None if name == "zero" => Ok(IdealData::zero(pc.category())),
        None => Err(CliError::Input(format!("unknown ideal `{name}`"))),
    }
}

fn pair_dims(pc: &PathCategory, dim: impl Fn(usize, usize) -> usize) -> Map<String, Value> {
    let c = pc.category();
    let mut m = Map::new();
    for x in 0..c.num_objects() {
        for y in 0..c.num_objects() {
            m.insert(format!("{}->{}", c.object_name(x), c.object_name(y)), json!(dim(x, y)));
        }
    }
    m
}

fn build_body(l: &Loaded) -> Res<Map<String, Value>> {
    let pc = &l.pc;
    let c = pc.category();
    let cert = check_admissible(pc.spec())?;
    let mut ideals = Map::new();
    for i in &pc.spec().ideals {
        let data = pc.ideal(i)?;
        ideals.insert(i.name.clone(), Value::Object(pair_dims(pc, |x, y| data.dim(x, y))));
    }
    let mut modules = Map::new();
    for m in &pc.spec().modules {
        Rep::from_spec(pc, m)?;
        modules.insert(m.name.clone(), json!(m.dims));
    }
    let mut body = Map::new();
    body.insert("category".into(), json!(l.label));
    body.insert("objects".into(), json!(c.objects()));
    body.insert("hom_dims".into(), Value::Object(pair_dims(pc, |x, y| c.dim(x, y))));
    body.insert("total_dim".into(), json!(c.total_dim()));
    body.insert(
        "admissibility".into(),
        json!({ "l_max": cert.l_max, "paths_at_bound": cert.paths_at_bound, "ideal_dim": cert.ideal_dim }),
    );
    body.insert("ideals".into(), Value::Object(ideals));
    body.insert("modules".into(), Value::Object(modules));
    Ok(body)
}

pub fn build(cfg: &Config, path: &Path) -> Res<Outcome> {
    let l = load(cfg, path)?;
    let body = build_body(&l)?;
    let text = render::build(&l.pc, &body);
    Ok(Outcome { json: envelope("build", cfg, l.pc.spec().field, body), text, status: Status::Ok })
}

fn ext_body(cfg: &Config, pc: &PathCategory, left: &str, right: &str, max: usize) -> Res<Map<String, Value>> {
    let m = Arc::new(module_ref(pc, left)?);
    let n = module_ref(pc, right)?;
    let dims = ext_dims(&m, &n, max)?;
    let pd = resolve(&m, cfg.degree)?.projective_dimension();
    let mut body = Map::new();
    body.insert("left".into(), json!(left));
    body.insert("right".into(), json!(right));
    body.insert("dims".into(), json!(dims));
    body.insert("left_projective_dimension".into(), json!(pd.to_string()));
    Ok(body)
}

pub fn ext(cfg: &Config, path: &Path, left: &str, right: &str) -> Res<Outcome> {
    let l = load(cfg, path)?;
    let body = ext_body(cfg, &l.pc, left, right, cfg.degree)?;
    let text = render::ext(&body);
    Ok(Outcome { json: envelope("ext", cfg, l.pc.spec().field, body), text, status: Status::Ok })
}

fn sie_certificate(cfg: &Config, pc: &PathCategory, ideal: &str) -> Res<SieCertificate> {
    let data = ideal_ref(pc, ideal)?;
    let ctx = IdealContext::new(&data)?;
    Ok(check_strongly_idempotent(&ctx, cfg.degree, &TestModules::standard(&ctx))?)
}

fn sie_status(cert: &SieCertificate) -> Status {
    if cert.verdict == Verdict::Pass {
        Status::Ok
    } else {
        Status::Failed
    }
}

pub fn check_sie(cfg: &Config, path: &Path, ideal: &str) -> Res<Outcome> {
    let l = load(cfg, path)?;
    let cert = sie_certificate(cfg, &l.pc, ideal)?;
    let text = render::certificate(&l.label, ideal, &cert);
    let mut body = Map::new();
    body.insert("category".into(), json!(l.label));
    body.insert("ideal".into(), json!(ideal));
    body.insert("certificate".into(), serde_json::to_value(&cert).expect("serializable"));
    let status = sie_status(&cert);
    Ok(Outcome { json: envelope("check-sie", cfg, l.pc.spec().field, body), text, status })
}

fn report_status(r: &EvidenceReport) -> Status {
    if r.verdict == ReportVerdict::Supported {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn report_outcome(command: &str, cfg: &Config, field: Field, r: EvidenceReport) -> Outcome {
    let text = render::report(&r);
    let status = report_status(&r);
    let mut body = Map::new();
    body.insert("report".into(), serde_json::to_value(&r).expect("serializable"));
    Outcome { json: envelope(command, cfg, field, body), text, status }
}

fn one_point_report(cfg: &Config, pc: &PathCategory, label: &str, module: &str) -> Res<EvidenceReport> {
    let m = module_ref(pc, module)?;
    let tri = one_point_extension(pc.category(), &m)?;
    let presented = match cfg.truncate {
        Some(n) => Some(build_category(&staircase_spec(n, pc.spec().field))?),
        None => None,
    };
    Ok(build_one_point_report(&tri, label, cfg.degree, presented.as_ref())?)
}

pub fn one_point(cfg: &Config, path: Option<&Path>, module: Option<&str>) -> Res<Outcome> {
    let module = module.unwrap_or("M");
    let (label, pc) = match path {
        Some(p) => {
            let l = load(cfg, p)?;
            (l.label, l.pc)
        }
        None => {
            let n = cfg.truncate.ok_or_else(|| CliError::Input("one-point needs a spec or --truncate".into()))?;
            let field = cfg.field.unwrap_or(Field::Prime(Field::DEFAULT_PRIME));
            (format!("staircase-{n}"), build_category(&staircase_base_spec(n, field))?)
        }
    };
    let r = one_point_report(cfg, &pc, &label, module)?;
    Ok(report_outcome("one-point", cfg, pc.spec().field, r))
}

pub fn report(cfg: &Config, path: &Path, ideal: &str) -> Res<Outcome> {
    let l = load(cfg, path)?;
    let data = ideal_ref(&l.pc, ideal)?;
    let ctx = IdealContext::new(&data)?;
    let r = build_report(&ctx, &l.label, ideal, cfg.degree)?;
    Ok(report_outcome("report", cfg, l.pc.spec().field, r))
}

fn run_directive(cfg: &Config, l: &Loaded, d: &CheckDirective) -> Res<(Status, Value, String)> {
    let pc = &l.pc;
    Ok(match d.directive.as_str() {
        "admissible" => {
            let c = check_admissible(pc.spec())?;
            let text = format!("admissible: every path of length {} vanishes", c.l_max);
            (Status::Ok, json!({ "l_max": c.l_max }), text)
        }
        "build" => {
            let body = build_body(l)?;
            let text = render::build(pc, &body);
            (Status::Ok, Value::Object(body), text)
        }
        "ext" => {
            let i: usize = d.args[2].parse().map_err(|_| CliError::Input("bad degree".into()))?;
            let body = ext_body(cfg, pc, &d.args[0], &d.args[1], i)?;
            let text = render::ext(&body);
            (Status::Ok, Value::Object(body), text)
        }
        "sie" => {
            let cert = sie_certificate(cfg, pc, &d.args[0])?;
            let text = render::certificate(&l.label, &d.args[0], &cert);
            (sie_status(&cert), serde_json::to_value(&cert).expect("serializable"), text)
        }
        "report" => {
            let ctx = IdealContext::new(&ideal_ref(pc, &d.args[0])?)?;
            let r = build_report(&ctx, &l.label, &d.args[0], cfg.degree)?;
            (report_status(&r), serde_json::to_value(&r).expect("serializable"), render::report(&r))
        }
        "onepoint" => {
            let r = one_point_report(cfg, pc, &l.label, &d.args[0])?;
            (report_status(&r), serde_json::to_value(&r).expect("serializable"), render::report(&r))
        }
        other => return Err(CliError::Input(format!("unknown directive `{other}`"))),
    })
}

pub fn run_checks(cfg: &Config, path: &Path) -> Res<Outcome> {
    let l = load(cfg, path)?;
    let mut results = Vec::new();
    let mut text = String::new();
    let mut status = Status::Ok;
    for d in &l.pc.spec().checks {
        let (s, v, t) = run_directive(cfg, &l, d)?;
        if s == Status::Failed {
            status = Status::Failed;
        }
        let tag = if s == Status::Ok { "OK" } else { "FAILED" };
        text.push_str(&format!("== check {} {} [{tag}]\n{}\n", d.directive, d.args.join(" "), t.trim_end()));
        results.push(json!({ "directive": d.directive, "args": d.args, "status": tag, "result": v }));
    }
    if results.is_empty() {
        text.push_str("no check directives\n");
    }
    let mut body = Map::new();
    body.insert("category".into(), json!(l.label));
    body.insert("checks".into(), Value::Array(results));
    Ok(Outcome { json: envelope("run", cfg, l.pc.spec().field, body), text, status })
}

const DUAL_NUMBERS: &str = "\
# K[x]/(x^2) with the ideal generated by x: not idempotent.
truncate 2
vertices p
arrows
  x: p -> p
relations
  x*x
ideal X
  gen x
check sie X
";

const A3_ZERO_RELATION: &str = "\
# 1 -> 2 -> 3 with b*a = 0; killing vertex 2 loses Ext^2(S1, S3).
vertices 1 2 3
arrows
  a: 1 -> 2
  b: 2 -> 3
relations
  b*a
ideal E2
  gen id(2)
check sie E2
";

pub fn example(cfg: &Config, name: &str) -> Res<Outcome> {
    let field = cfg.field.unwrap_or(Field::Prime(Field::DEFAULT_PRIME));
    let mut text = match name {
        "staircase" => {
            let n = cfg.truncate.ok_or_else(|| CliError::Input("the staircase example needs --truncate".into()))?;
            let mut s: QuiverSpec = staircase_base_spec(n, field);
            s.checks.push(CheckDirective { directive: "onepoint".into(), args: vec!["M".into()] });
            s.render()
        }
        "dual-numbers" => DUAL_NUMBERS.to_string(),
        "a3-zero-relation" => A3_ZERO_RELATION.to_string(),
        other => return Err(CliError::Input(format!("unknown example `{other}`"))),
    };
    if cfg.field.is_some() && name != "staircase" {
        text = format!("field {field}\n{text}");
    }
    let mut body = Map::new();
    body.insert("name".into(), json!(name));
    body.insert("spec".into(), json!(text));
    Ok(Outcome { json: envelope("example", cfg, field, body), text, status: Status::Ok })
}

/// A random acyclic quiver on 2 to 4 vertices, forward arrows only.
fn random_quiver(rng: &mut ChaCha8Rng, field: Field) -> QuiverSpec {
    let n = rng.gen_range(2..=4);
    let mut src =
        format!("field {field}\nvertices {}\narrows\n", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
    let mut k = 0;
    for i in 1..n {
        for j in i + 1..=n {
            if rng.gen_bool(if j == i + 1 { 0.8 } else { 0.3 }) {
                k += 1;
                src.push_str(&format!("  c{k}: {i} -> {j}\n"));
            }
        }
    }
    if k == 0 {
        src.push_str("  c1: 1 -> 2\n");
    }
    parse_spec_with(src.as_bytes(), ParseOptions::default()).expect("generated spec parses")
}

pub fn self_check(cfg: &Config) -> Res<Outcome> {
    let field = cfg.field.unwrap_or(Field::Prime(Field::DEFAULT_PRIME));
    let n = cfg.degree.min(4);
    let mut lines = Vec::new();
    let mut all = true;
    let mut record = |name: String, ok: bool| {
        all &= ok;
        lines.push((name, ok));
    };

    for t in 2..=4 {
        let s = staircase(t, field)?;
        let r = build_one_point_report(&s.extension, &format!("staircase-{t}"), n, Some(&s.presented))?;
        record(format!("staircase-{t} report is SUPPORTED"), r.verdict == ReportVerdict::Supported);
    }
    let dn = build_category(
        &parse_spec_with(DUAL_NUMBERS.as_bytes(), ParseOptions { field_override: Some(field) })
            .map_err(|e| CliError::Compute(e.to_string()))?,
    )?;
    let cert = sie_certificate(cfg, &dn, "X")?;
    record(
        "dual numbers: <x> rejected with witness x".into(),
        cert.verdict == Verdict::Fail && cert.idempotency_witness.as_deref() == Some("x"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..4 {
        let spec = random_quiver(&mut rng, field);
        let pc = build_category(&spec)?;
        let c = pc.category();
        let x = rng.gen_range(0..c.num_objects());
        let ctx = IdealContext::new(&ideal_from_generators(c, &[(x, x, c.identity_vector(x))]))?;
        let cert = check_strongly_idempotent(&ctx, n, &TestModules::standard(&ctx))?;
        record(
            format!("random quiver {trial}: criteria agree for <id({})>", c.object_name(x)),
            cert.consistent && cert.idempotent,
        );
    }

    let text = lines
        .iter()
        .map(|(name, ok)| format!("[{}] {name}", if *ok { "PASS" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("\n");
    let mut body = Map::new();
    body.insert(
        "checks".into(),
        Value::Array(lines.iter().map(|(name, ok)| json!({ "name": name, "pass": ok })).collect()),
    );
    let status = if all { Status::Ok } else { Status::Failed };
    Ok(Outcome { json: envelope("self-check", cfg, field, body), text, status })
}
