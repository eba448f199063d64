//! Batch job documents: a line-oriented key/value format (with a JSON mirror
//! for machine use), validation, dispatch to the library operations and
//! deterministic structured reports.

use crate::determinacy::{self, GroupKind, MatrixSeries};
use crate::field::FieldSpec;
use crate::orbit::{self, OrbitMethod, OrbitOptions, OrbitReport};
use crate::ring::{parse_poly, Ordering, RingCtx, RingError};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JobError {
    #[error("job field `{field}`: {msg}")]
    Schema { field: String, msg: String },
    #[error("job line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("matrix entry ({row},{col}): {source}")]
    Poly {
        row: usize,
        col: usize,
        source: RingError,
    },
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Job(#[from] JobError),
    #[error("validation: {0}")]
    Validation(String),
    #[error("infinite codimension: {0}")]
    InfiniteCodimension(String),
    #[error("verification failed: {0}")]
    VerifyMismatch(String),
    #[error("{0}")]
    Internal(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Job(_) | RunError::Validation(_) => 2,
            RunError::InfiniteCodimension(_) => 3,
            RunError::VerifyMismatch(_) | RunError::Internal(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    TangentImage,
    Codim,
    Predeterm,
    Determ,
    OrbitEquations,
    Stabilizer,
    OrbitCodim,
    Separability,
}

impl Command {
    pub fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "tangent-image" => Command::TangentImage,
            "codim" => Command::Codim,
            "predeterm" => Command::Predeterm,
            "determ" => Command::Determ,
            "orbit-equations" => Command::OrbitEquations,
            "stabilizer" => Command::Stabilizer,
            "orbit-codim" => Command::OrbitCodim,
            "separability" => Command::Separability,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::TangentImage => "tangent-image",
            Command::Codim => "codim",
            Command::Predeterm => "predeterm",
            Command::Determ => "determ",
            Command::OrbitEquations => "orbit-equations",
            Command::Stabilizer => "stabilizer",
            Command::OrbitCodim => "orbit-codim",
            Command::Separability => "separability",
        }
    }
}

/// A validated job: ring data, the matrix, the group and the command.
#[derive(Debug, Clone)]
pub struct Job {
    pub characteristic: u64,
    pub vars: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub group_name: String,
    pub group: GroupKind,
    pub command: Command,
    pub jet_level_override: Option<u32>,
    pub orbit_method: Option<OrbitMethod>,
    pub param_cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct JsonOptions {
    jet_level: Option<u32>,
    orbit_method: Option<String>,
    param_cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct JsonJob {
    characteristic: u64,
    vars: Vec<String>,
    matrix: Vec<Vec<String>>,
    group: String,
    command: String,
    options: Option<JsonOptions>,
}

fn schema(field: &str, msg: impl Into<String>) -> JobError {
    JobError::Schema {
        field: field.to_string(),
        msg: msg.into(),
    }
}

fn parse_group(name: &str, m: usize, n: usize) -> Result<GroupKind, JobError> {
    let g = match name {
        "right" => GroupKind::RightR,
        "left" => GroupKind::Gl,
        "rightside" => GroupKind::Gr,
        "leftright" => GroupKind::Glr,
        "contact" => {
            if m != 1 || n != 1 {
                return Err(schema("group", "contact group requires a 1x1 matrix"));
            }
            GroupKind::Gl
        }
        other => {
            return Err(schema(
                "group",
                format!("unknown group `{other}` (expected right|left|rightside|leftright|contact)"),
            ))
        }
    };
    Ok(g)
}

fn parse_orbit_method(s: &str) -> Result<OrbitMethod, JobError> {
    match s {
        "eliminate" => Ok(OrbitMethod::Eliminate),
        "stabilizer" => Ok(OrbitMethod::Stabilizer),
        other => Err(schema(
            "orbit-method",
            format!("unknown method `{other}` (expected eliminate|stabilizer)"),
        )),
    }
}

/// Parses a job document: JSON when the first character is `{`, the
/// line-oriented format otherwise.
pub fn parse_job(text: &str) -> Result<Job, JobError> {
    if text.trim_start().starts_with('{') {
        parse_json_job(text)
    } else {
        parse_text_job(text)
    }
}

fn finish_job(
    characteristic: u64,
    vars: Vec<String>,
    matrix: Vec<Vec<String>>,
    group_name: String,
    command: &str,
    jet_level_override: Option<u32>,
    orbit_method: Option<String>,
    param_cap: Option<usize>,
) -> Result<Job, JobError> {
    if characteristic != 0 && FieldSpec::prime(characteristic).is_err() {
        return Err(schema(
            "characteristic",
            format!("{characteristic} is neither 0 nor prime"),
        ));
    }
    if vars.is_empty() {
        return Err(schema("vars", "at least one variable required"));
    }
    let m = matrix.len();
    if m == 0 {
        return Err(schema("matrix", "at least one row required"));
    }
    let n = matrix[0].len();
    if n == 0 || matrix.iter().any(|r| r.len() != n) {
        return Err(schema("matrix", "rows must be nonempty and of equal length"));
    }
    let group = parse_group(&group_name, m, n)?;
    let command = Command::parse(command)
        .ok_or_else(|| schema("command", format!("unknown command `{command}`")))?;
    let orbit_method = orbit_method.as_deref().map(parse_orbit_method).transpose()?;
    Ok(Job {
        characteristic,
        vars,
        matrix,
        group_name,
        group,
        command,
        jet_level_override,
        orbit_method,
        param_cap,
    })
}

fn parse_json_job(text: &str) -> Result<Job, JobError> {
    let doc: JsonJob =
        serde_json::from_str(text).map_err(|e| schema("(document)", e.to_string()))?;
    let opts = doc.options;
    finish_job(
        doc.characteristic,
        doc.vars,
        doc.matrix,
        doc.group,
        &doc.command,
        opts.as_ref().and_then(|o| o.jet_level),
        opts.as_ref().and_then(|o| o.orbit_method.clone()),
        opts.as_ref().and_then(|o| o.param_cap),
    )
}

fn parse_text_job(text: &str) -> Result<Job, JobError> {
    let mut characteristic: Option<u64> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut dims: Option<(usize, usize)> = None;
    let mut entries: Vec<(usize, usize, String)> = Vec::new();
    let mut group: Option<String> = None;
    let mut command: Option<String> = None;
    let mut jet_level: Option<u32> = None;
    let mut orbit_method: Option<String> = None;
    let mut param_cap: Option<usize> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(JobError::Syntax {
            line: lineno,
            msg: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim();
        let dup = |field: &str| JobError::Syntax {
            line: lineno,
            msg: format!("duplicate key `{field}`"),
        };
        match key {
            "characteristic" => {
                if characteristic.is_some() {
                    return Err(dup(key));
                }
                characteristic = Some(value.parse().map_err(|_| JobError::Syntax {
                    line: lineno,
                    msg: "characteristic must be a nonnegative integer".into(),
                })?);
            }
            "vars" => {
                if vars.is_some() {
                    return Err(dup(key));
                }
                vars = Some(
                    value
                        .split([' ', ','])
                        .filter(|s| !s.is_empty())
                        .map(|s| s.to_string())
                        .collect(),
                );
            }
            "matrix" => {
                if dims.is_some() {
                    return Err(dup(key));
                }
                let parts: Vec<&str> = value.split_whitespace().collect();
                let parsed: Option<(usize, usize)> = match parts.as_slice() {
                    [r, c] => r.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                dims = Some(parsed.ok_or(JobError::Syntax {
                    line: lineno,
                    msg: "expected `matrix = <rows> <cols>`".into(),
                })?);
            }
            "group" => {
                if group.is_some() {
                    return Err(dup(key));
                }
                group = Some(value.to_string());
            }
            "command" => {
                if command.is_some() {
                    return Err(dup(key));
                }
                command = Some(value.to_string());
            }
            "jet-level" => {
                jet_level = Some(value.parse().map_err(|_| JobError::Syntax {
                    line: lineno,
                    msg: "jet-level must be a nonnegative integer".into(),
                })?);
            }
            "orbit-method" => orbit_method = Some(value.to_string()),
            "param-cap" => {
                param_cap = Some(value.parse().map_err(|_| JobError::Syntax {
                    line: lineno,
                    msg: "param-cap must be a positive integer".into(),
                })?);
            }
            _ if key.starts_with("entry") => {
                let coords: Vec<&str> = key
                    .strip_prefix("entry")
                    .unwrap()
                    .split_whitespace()
                    .collect();
                let parsed: Option<(usize, usize)> = match coords.as_slice() {
                    [r, c] => r.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                let (r, c) = parsed.ok_or(JobError::Syntax {
                    line: lineno,
                    msg: "expected `entry <row> <col> = <polynomial>`".into(),
                })?;
                entries.push((r, c, value.to_string()));
            }
            other => {
                return Err(JobError::Syntax {
                    line: lineno,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let characteristic = characteristic.ok_or_else(|| schema("characteristic", "missing"))?;
    let vars = vars.ok_or_else(|| schema("vars", "missing"))?;
    let (m, n) = dims.ok_or_else(|| schema("matrix", "missing"))?;
    if m == 0 || n == 0 {
        return Err(schema("matrix", "dimensions must be positive"));
    }
    let mut matrix = vec![vec![String::new(); n]; m];
    let mut seen = vec![vec![false; n]; m];
    for (r, c, poly) in entries {
        if r < 1 || r > m || c < 1 || c > n {
            return Err(schema(
                "entry",
                format!("entry ({r},{c}) outside the {m}x{n} matrix"),
            ));
        }
        if seen[r - 1][c - 1] {
            return Err(schema("entry", format!("duplicate entry ({r},{c})")));
        }
        seen[r - 1][c - 1] = true;
        matrix[r - 1][c - 1] = poly;
    }
    if seen.iter().flatten().any(|s| !s) {
        return Err(schema("entry", "every matrix entry must be given"));
    }
    finish_job(
        characteristic,
        vars,
        matrix,
        group.ok_or_else(|| schema("group", "missing"))?,
        &command.ok_or_else(|| schema("command", "missing"))?,
        jet_level,
        orbit_method,
        param_cap,
    )
}

/// Canonical serialization of a job in the line-oriented format.
pub fn render_job(job: &Job) -> String {
    let mut out = String::new();
    out.push_str(&format!("characteristic = {}\n", job.characteristic));
    out.push_str(&format!("vars = {}\n", job.vars.join(" ")));
    out.push_str(&format!(
        "matrix = {} {}\n",
        job.matrix.len(),
        job.matrix[0].len()
    ));
    for (i, row) in job.matrix.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.push_str(&format!("entry {} {} = {}\n", i + 1, j + 1, e));
        }
    }
    out.push_str(&format!("group = {}\n", job.group_name));
    out.push_str(&format!("command = {}\n", job.command.name()));
    if let Some(k) = job.jet_level_override {
        out.push_str(&format!("jet-level = {k}\n"));
    }
    if let Some(m) = job.orbit_method {
        out.push_str(&format!(
            "orbit-method = {}\n",
            match m {
                OrbitMethod::Eliminate => "eliminate",
                OrbitMethod::Stabilizer => "stabilizer",
            }
        ));
    }
    if let Some(c) = job.param_cap {
        out.push_str(&format!("param-cap = {c}\n"));
    }
    out
}

/// Command-line overrides applied on top of a job document.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub verify: bool,
    pub jet_level: Option<u32>,
    pub orbit_method: Option<OrbitMethod>,
}

fn ring_echo(job: &Job) -> Value {
    json!({
        "characteristic": job.characteristic,
        "vars": job.vars,
        "ordering": "local-degree",
    })
}

fn orbit_report_value(r: &OrbitReport, with_equations: bool) -> Value {
    let mut map = Map::new();
    map.insert("k_used".into(), json!(r.k_used));
    map.insert("t".into(), json!(r.t));
    map.insert("dim_group".into(), json!(r.dim_group));
    map.insert("dim_orbit".into(), json!(r.dim_orbit));
    map.insert("dim_stab".into(), json!(r.dim_stab));
    map.insert("c_space".into(), json!(r.c_tangent_space));
    map.insert("c_image".into(), json!(r.c_tangent_image));
    map.insert(
        "difference".into(),
        json!(r.c_tangent_image as i64 - r.c_tangent_space),
    );
    map.insert("separable".into(), json!(r.separable));
    if with_equations {
        map.insert("equations".into(), json!(r.equations));
    }
    Value::Object(map)
}

/// Runs a validated job and produces the structured report.
pub fn run_job(job: &Job, overrides: &RunOverrides) -> Result<Value, RunError> {
    let field = if job.characteristic == 0 {
        FieldSpec::Rationals
    } else {
        FieldSpec::prime(job.characteristic).map_err(|e| RunError::Validation(e.to_string()))?
    };
    let ctx = RingCtx::new(field, job.vars.clone(), Ordering::local())
        .map_err(|e| RunError::Validation(e.to_string()))?;
    let (m, n) = (job.matrix.len(), job.matrix[0].len());
    let mut entries = Vec::with_capacity(m * n);
    for (i, row) in job.matrix.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let p = parse_poly(text, &ctx).map_err(|source| JobError::Poly {
                row: i + 1,
                col: j + 1,
                source,
            })?;
            entries.push(p);
        }
    }
    let a = MatrixSeries::new(m, n, entries);
    if !a.in_max_ideal() {
        return Err(RunError::Validation(
            "matrix entries must have zero constant term".into(),
        ));
    }

    let jet_override = overrides.jet_level.or(job.jet_level_override);
    let method = overrides
        .orbit_method
        .or(job.orbit_method)
        .unwrap_or(OrbitMethod::Stabilizer);
    let opts = OrbitOptions {
        jet_level_override: jet_override,
        param_cap: job.param_cap.unwrap_or(64),
        stab_ordering_global: false,
    };

    let mut report = Map::new();
    report.insert("ring".into(), ring_echo(job));
    report.insert("group".into(), json!(job.group_name));
    report.insert("command".into(), json!(job.command.name()));

    let det_err = |e: determinacy::DetError| RunError::Internal(e.to_string());
    let orbit_err = |e: orbit::OrbitError| match e {
        orbit::OrbitError::InfiniteCodimension => {
            RunError::InfiniteCodimension("tangent image has infinite codimension".into())
        }
        other => RunError::Validation(other.to_string()),
    };

    match job.command {
        Command::TangentImage => {
            let t = determinacy::tangent_image(&a, job.group, &ctx).map_err(det_err)?;
            let gens: Vec<String> = t.basis.gens.iter().map(|g| ctx.render_vect(g)).collect();
            let leads: Vec<String> = t
                .basis
                .staircase()
                .lead_monomials
                .iter()
                .map(|l| {
                    let p = ctx.monomial_poly(l.clone(), t.basis.rank);
                    ctx.render_vect(&p)
                })
                .collect();
            report.insert("standard_basis".into(), json!(gens));
            report.insert("leading_module".into(), json!(leads));
        }
        Command::Codim => {
            let t = determinacy::tangent_image(&a, job.group, &ctx).map_err(det_err)?;
            match determinacy::basis_codim(&t, &ctx) {
                Some((kb, c)) => {
                    let basis: Vec<String> = kb
                        .iter()
                        .map(|m| ctx.render_vect(&ctx.monomial_poly(m.clone(), t.basis.rank)))
                        .collect();
                    report.insert("codim".into(), json!(c));
                    report.insert("kbasis".into(), json!(basis));
                }
                None => {
                    report.insert("codim".into(), json!("infinite"));
                }
            }
        }
        Command::Predeterm => {
            match determinacy::predeterminacy(&a, job.group, &ctx).map_err(det_err)? {
                Some(p) => {
                    report.insert("p".into(), json!(p));
                }
                None => {
                    report.insert("p".into(), json!("infinite-codimension"));
                    report
                        .insert("verdict".into(), json!(determinacy::infinite_verdict(job.group, n)));
                }
            }
        }
        Command::Determ => {
            let r = determinacy::determinacy_bound(&a, job.group, &ctx).map_err(det_err)?;
            report.insert("ord".into(), json!(r.order));
            match (r.pre_bound, r.determ_bound) {
                (Some(p), Some(d)) => {
                    report.insert("p".into(), json!(p));
                    report.insert("d".into(), json!(d));
                }
                _ => {
                    report.insert("p".into(), json!("infinite-codimension"));
                    report.insert("d".into(), json!("infinite-codimension"));
                    report
                        .insert("verdict".into(), json!(determinacy::infinite_verdict(job.group, n)));
                }
            }
        }
        Command::OrbitEquations | Command::Stabilizer => {
            let k = match jet_override {
                Some(k) => k,
                None => determinacy::predeterminacy(&a, job.group, &ctx)
                    .map_err(det_err)?
                    .ok_or_else(|| {
                        RunError::InfiniteCodimension(
                            "no pre-determinacy bound; pass an explicit jet level".into(),
                        )
                    })?,
            };
            let cap = job.param_cap.unwrap_or(64);
            let needed = orbit::group_dim(job.group, m, n, ctx.nvars(), k);
            if needed > cap {
                return Err(orbit_err(orbit::OrbitError::ParamCapExceeded {
                    needed,
                    cap,
                }));
            }
            let (pres, b) =
                orbit::generic_element(k, job.group, &a, &ctx).map_err(orbit_err)?;
            report.insert("k_used".into(), json!(k));
            report.insert("parameters".into(), json!(pres.param_names));
            if job.command == Command::OrbitEquations {
                let (fs, u_ctx) = orbit::orbit_equations(&pres, &b).map_err(orbit_err)?;
                let eqs: Vec<String> = fs.iter().map(|f| u_ctx.render_poly(f)).collect();
                report.insert("orbit_equations".into(), json!(eqs));
            } else {
                let d = orbit::stabilizer_equations(&pres, &b, &a, &ctx).map_err(orbit_err)?;
                let eqs: Vec<String> = d
                    .iter()
                    .filter(|f| !f.is_zero())
                    .map(|f| pres.param_ctx.render_poly(f))
                    .collect();
                report.insert("stabilizer_equations".into(), json!(eqs));
            }
        }
        Command::OrbitCodim | Command::Separability => {
            let r = orbit::codim_tangent_space(&a, job.group, &ctx, method, &opts)
                .map_err(orbit_err)?;
            if overrides.verify {
                let other = match method {
                    OrbitMethod::Eliminate => OrbitMethod::Stabilizer,
                    OrbitMethod::Stabilizer => OrbitMethod::Eliminate,
                };
                let r2 = orbit::codim_tangent_space(&a, job.group, &ctx, other, &opts)
                    .map_err(orbit_err)?;
                if r2.c_tangent_space != r.c_tangent_space {
                    return Err(RunError::VerifyMismatch(format!(
                        "methods disagree: {} vs {}",
                        r.c_tangent_space, r2.c_tangent_space
                    )));
                }
                report.insert("verified".into(), json!(true));
            }
            let with_eqs = job.command == Command::OrbitCodim;
            if let Value::Object(fields) = orbit_report_value(&r, with_eqs) {
                report.extend(fields);
            }
        }
    }
    Ok(Value::Object(report))
}

/// Flat deterministic text rendering of a structured report.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_text_inner(value, "", &mut out);
    out
}

fn render_text_inner(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_text_inner(v, &key, out);
            }
        }
        Value::Array(items) => {
            let simple: Vec<String> = items
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&format!("{prefix}: [{}]\n", simple.join(", ")));
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Runs a job, applying the "finiteness required" exit-code contract.
pub fn run_job_text(text: &str, overrides: &RunOverrides) -> Result<Value, RunError> {
    let job = parse_job(text)?;
    run_job(&job, overrides)
}
