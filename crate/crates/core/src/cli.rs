//! Batch command-line front end behind the `hnkit` binary.
//!
//! Exit statuses: 0 success, 1 verification failure, 2 input error, 3 not converged.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::acceptance;
use crate::catalog::{entries, entry, EntrySummary};
use crate::conditions::{
    full_admissibility, AdmissibilityOptions, DEFAULT_DEGREE_CUTOFF, DEFAULT_SAMPLES,
};
use crate::domain::{classify, NonTangentialPath, OffRealPoint};
use crate::error::{HnError, Result};
use crate::measures::{Measure, QuadratureSpec};
use crate::representation::{
    evaluate_q_report, recover_a, recover_b, recover_c, recover_point_mass_1d,
    slope_at_infinity_1d, DataOracle, FunctionOracle, RecoveryReport, RepresentationData,
};
use crate::symmetry::{
    check_cplus_independence, independence_spec, symmetric_value_q, INDEPENDENCE_STEP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hnkit",
    version,
    about = "Herglotz-Nevanlinna functions of several variables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub rel_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, global = true)]
    pub max_panels: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate q = a + Σ b z + π⁻ⁿ ∫ K dμ at points of (ℂ∖ℝ)ⁿ.
    Evaluate {
        #[command(flatten)]
        source: Source,
        /// A point such as "[i, 1+2i, -0.5-i]"; repeatable.
        #[arg(long)]
        at: Vec<String>,
        /// JSON file with an array of points.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Check the growth and Nevanlinna conditions for a measure.
    VerifyMeasure {
        /// Measure, representation data, or catalog entry JSON.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Catalog entry whose measure to check.
        #[arg(long)]
        entry: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CUTOFF)]
        degree_cutoff: i32,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Also run the per-ρ and torus forms.
        #[arg(long)]
        all_forms: bool,
        /// Include the informational atom / total-mass probes.
        #[arg(long)]
        structural: bool,
    },
    /// Recover a, b, c (and for one variable the slope and a point mass) from a function.
    Recover {
        #[command(flatten)]
        source: Source,
        /// One variable only: location of the point-mass probe.
        #[arg(long)]
        t0: Option<f64>,
    },
    /// Compare the cross-component formula with direct evaluation.
    Symmetry {
        #[command(flatten)]
        source: Source,
        #[arg(long, required = true)]
        at: Vec<String>,
    },
    /// List the built-in examples.
    Catalog {
        /// Include the full representation data.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        entry: Option<String>,
    },
    /// Run the acceptance checks and print a scoreboard.
    Selftest {
        /// Run only these criteria (1-based); repeatable.
        #[arg(long)]
        criterion: Vec<usize>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Representation data or catalog entry JSON.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Built-in catalog entry (closed form used where known).
    #[arg(long)]
    pub entry: Option<String>,
}

/// A finished report: JSON body, CSV table and the exit status it implies.
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub status: i32,
}

pub fn exit_code(e: &HnError) -> i32 {
    match e {
        HnError::NotConverged { .. } | HnError::NoConvergence(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_INPUT,
    }
}

/// Parse a point literal: `[i, 1+2i, -0.5-1e-3i]` or JSON `[[re, im], …]`.
pub fn parse_point(s: &str) -> Result<OffRealPoint> {
    let t = s.trim();
    if t.starts_with("[[") {
        let v: Vec<Complex64> = serde_json::from_str(t)?;
        return OffRealPoint::new(v);
    }
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .unwrap_or(t);
    let coords = inner
        .split(',')
        .map(|c| {
            let c: String = c.chars().filter(|ch| !ch.is_whitespace()).collect();
            c.parse::<Complex64>()
                .map_err(|e| HnError::input(format!("bad complex number '{c}': {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    OffRealPoint::new(coords)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointLiteral {
    Pairs(Vec<Complex64>),
    Text(String),
}

fn read_points(path: &Path) -> Result<Vec<OffRealPoint>> {
    let raw: Vec<PointLiteral> = serde_json::from_str(&fs::read_to_string(path)?)?;
    raw.into_iter()
        .map(|p| match p {
            PointLiteral::Pairs(v) => OffRealPoint::new(v),
            PointLiteral::Text(s) => parse_point(&s),
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DataFile {
    Entry { data: RepresentationData },
    Data(RepresentationData),
    Measure(Measure),
}

fn read_data(path: &Path) -> Result<RepresentationData> {
    let text = fs::read_to_string(path)?;
    match serde_json::from_str::<DataFile>(&text) {
        Ok(DataFile::Entry { data }) | Ok(DataFile::Data(data)) => Ok(data),
        Ok(DataFile::Measure(mu)) => Ok(RepresentationData::measure_only(mu)),
        Err(_) => {
            // re-parse strictly for a useful message
            serde_json::from_str::<RepresentationData>(&text)
                .map_err(|e| HnError::input(format!("{}: {e}", path.display())))
        }
    }
}

struct Loaded {
    name: Option<String>,
    data: RepresentationData,
}

fn load(source: &Source) -> Result<Loaded> {
    match (&source.data, &source.entry) {
        (Some(p), _) => Ok(Loaded {
            name: None,
            data: read_data(p)?,
        }),
        (None, Some(name)) => Ok(Loaded {
            name: Some(name.clone()),
            data: entry(name)?.data,
        }),
        (None, None) => Err(HnError::input("pass --data or --entry")),
    }
}

fn spec_of(c: &Common) -> Result<QuadratureSpec> {
    let spec = QuadratureSpec {
        rel_tol: c.rel_tol,
        abs_tol: c.abs_tol,
        max_panels: c.max_panels,
        seed: c.seed,
    };
    spec.validate()?;
    Ok(spec)
}

fn cstr(z: Complex64) -> [String; 2] {
    [format!("{:e}", z.re), format!("{:e}", z.im)]
}

fn point_header(n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|l| [format!("re_z{l}"), format!("im_z{l}")])
        .collect()
}

fn evaluate(c: &Common, source: &Source, at: &[String], input: Option<&Path>) -> Result<Report> {
    let spec = spec_of(c)?;
    let loaded = load(source)?;
    let mut points: Vec<OffRealPoint> = at.iter().map(|s| parse_point(s)).collect::<Result<_>>()?;
    if let Some(p) = input {
        points.extend(read_points(p)?);
    }
    if points.is_empty() {
        return Err(HnError::input("no points: pass --at or --in"));
    }
    let known = loaded.name.as_deref().map(entry).transpose()?;
    let n = loaded.data.dim();
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut status = EXIT_OK;
    for z in &points {
        let e = evaluate_q_report(&loaded.data, z, &spec)?;
        if !e.converged {
            status = EXIT_NOT_CONVERGED;
        }
        let closed = known.as_ref().and_then(|k| k.closed_form(z.coords()));
        let mut row: Vec<String> = z.coords().iter().flat_map(|&w| cstr(w)).collect();
        row.extend(cstr(e.value));
        rows.push(row);
        results.push(json!({
            "z": z.coords(),
            "value": e.value,
            "error_estimate": e.error_estimate,
            "panels_used": e.panels_used,
            "converged": e.converged,
            "closed_form": closed,
        }));
    }
    let mut header = point_header(n);
    header.extend(["re_q".into(), "im_q".into()]);
    Ok(Report {
        json: json!({ "command": "evaluate", "entry": loaded.name, "spec": spec, "results": results }),
        header,
        rows,
        status,
    })
}

fn read_measure(path: &Path) -> Result<Measure> {
    Ok(read_data(path)?.mu)
}

#[allow(clippy::too_many_arguments)]
fn verify_measure(
    c: &Common,
    input: Option<&Path>,
    name: Option<&str>,
    degree_cutoff: i32,
    samples: usize,
    all_forms: bool,
    structural: bool,
) -> Result<Report> {
    let spec = spec_of(c)?;
    let mu = match (input, name) {
        (Some(p), _) => read_measure(p)?,
        (None, Some(n)) => entry(n)?.data.mu,
        (None, None) => return Err(HnError::input("pass --in or --entry")),
    };
    if degree_cutoff < 1 || samples == 0 {
        return Err(HnError::input(
            "--degree-cutoff and --samples must be positive",
        ));
    }
    let opts = AdmissibilityOptions {
        degree_cutoff,
        samples,
        seed: c.seed,
        all_forms,
        structural,
    };
    let rep = full_admissibility(&mu, &spec, &opts)?;
    let header = [
        "form",
        "rho",
        "max_residual",
        "max_raw_residual",
        "tolerance",
        "verdict",
        "unconverged",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = vec![vec![
        "growth".into(),
        String::new(),
        format!("{:e}", rep.growth.value),
        format!("{:e}", rep.growth.value),
        "finite".into(),
        if rep.growth.converged { "pass" } else { "fail" }.into(),
        usize::from(!rep.growth.converged).to_string(),
    ]];
    for r in &rep.reports {
        rows.push(vec![
            serde_json::to_value(r.form)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
            r.rho.as_ref().map(|v| format!("{v:?}")).unwrap_or_default(),
            format!("{:e}", r.max_residual),
            format!("{:e}", r.max_raw_residual),
            format!("{:e}", r.tolerance),
            if r.verdict.passed() { "pass" } else { "fail" }.into(),
            r.unconverged.to_string(),
        ]);
    }
    let status = if !rep.verdict.passed() {
        EXIT_FAIL
    } else if rep.unconverged_witnesses > 0 {
        EXIT_NOT_CONVERGED
    } else {
        EXIT_OK
    };
    Ok(Report {
        json: json!({ "command": "verify-measure", "measure": mu, "spec": spec, "report": rep }),
        header,
        rows,
        status,
    })
}

fn recover(c: &Common, source: &Source, t0: Option<f64>) -> Result<Report> {
    let spec = spec_of(c)?;
    let loaded = load(source)?;
    let known = loaded.name.as_deref().map(entry).transpose()?;
    let data_oracle;
    let closed;
    let q: &dyn FunctionOracle = match &known {
        Some(e) => {
            closed = e.oracle();
            &closed
        }
        None => {
            data_oracle = DataOracle::new(loaded.data.clone(), spec.clone());
            &data_oracle
        }
    };
    let n = q.dim();
    let a = recover_a(q)?;
    let mut reports: Vec<RecoveryReport> = Vec::new();
    for j in 1..=n {
        reports.push(recover_b(q, j, &NonTangentialPath::to_infinity())?);
        reports.push(recover_c(q, j, &NonTangentialPath::to_point(0.0))?);
    }
    if n == 1 {
        reports.push(slope_at_infinity_1d(q, &NonTangentialPath::to_infinity())?);
        if let Some(t) = t0 {
            reports.push(recover_point_mass_1d(
                q,
                t,
                &NonTangentialPath::to_point(t),
            )?);
        }
    } else if t0.is_some() {
        return Err(HnError::input(
            "--t0 applies to one-variable functions only",
        ));
    }
    let header = ["quantity", "value", "error_estimate", "order", "warnings"]
        .map(String::from)
        .to_vec();
    let mut rows = vec![vec![
        "a".into(),
        format!("{a:e}"),
        "0".into(),
        "0".into(),
        String::new(),
    ]];
    for r in &reports {
        rows.push(vec![
            r.quantity.clone(),
            format!("{:e}", r.value),
            format!("{:e}", r.error_estimate),
            r.extrapolation_order.to_string(),
            r.warnings.join("; "),
        ]);
    }
    Ok(Report {
        json: json!({
            "command": "recover",
            "entry": loaded.name,
            "oracle": if known.is_some() { "closed_form" } else { "quadrature" },
            "a": a,
            "limits": reports,
        }),
        header,
        rows,
        status: EXIT_OK,
    })
}

fn symmetry(c: &Common, source: &Source, at: &[String]) -> Result<Report> {
    let spec = spec_of(c)?;
    let loaded = load(source)?;
    let n = loaded.data.dim();
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut status = EXIT_OK;
    for s in at {
        let z = parse_point(s)?;
        let sym = symmetric_value_q(&loaded.data, &z, &spec)?;
        let direct = evaluate_q_report(&loaded.data, &z, &spec)?;
        if !direct.converged && status == EXIT_OK {
            status = EXIT_NOT_CONVERGED;
        }
        let diff = (sym - direct.value).norm();
        let agree = diff <= 1e-5 * (1.0 + direct.value.norm());
        let cls = classify(&z);
        let probe = !z.is_upper() && !(cls.c_plus.is_empty() && cls.i_plus.is_empty());
        let independence = if probe {
            Some(check_cplus_independence(
                &loaded.data,
                &z,
                &[INDEPENDENCE_STEP],
                &independence_spec(),
            )?)
        } else {
            None
        };
        let independent = independence.as_ref().is_none_or(|r| r.independent);
        if !(agree && independent) {
            status = EXIT_FAIL;
        }
        let mut row: Vec<String> = z.coords().iter().flat_map(|&w| cstr(w)).collect();
        row.extend(cstr(sym));
        row.extend(cstr(direct.value));
        row.push(format!("{diff:e}"));
        row.push(
            independence
                .as_ref()
                .map(|r| format!("{:e}", r.max_sensitivity))
                .unwrap_or_default(),
        );
        rows.push(row);
        results.push(json!({
            "z": z.coords(),
            "classification": cls,
            "symmetric_value": sym,
            "direct_value": direct.value,
            "direct_error_estimate": direct.error_estimate,
            "difference": diff,
            "agree": agree,
            "independence": independence,
        }));
    }
    let mut header = point_header(n);
    header.extend(
        [
            "re_symmetric",
            "im_symmetric",
            "re_direct",
            "im_direct",
            "difference",
            "max_sensitivity",
        ]
        .map(String::from),
    );
    Ok(Report {
        json: json!({ "command": "symmetry", "entry": loaded.name, "spec": spec, "results": results }),
        header,
        rows,
        status,
    })
}

#[derive(Serialize)]
struct Listing {
    name: String,
    n: usize,
    admissible: bool,
    closed_form_components: String,
    notes: String,
}

fn catalog(dump: bool, name: Option<&str>) -> Result<Report> {
    let chosen: Vec<EntrySummary> = match name {
        Some(n) => vec![entry(n)?.summary()],
        None => entries().iter().map(|e| e.summary()).collect(),
    };
    let header = ["name", "n", "admissible", "closed_form_components", "notes"]
        .map(String::from)
        .to_vec();
    let rows = chosen
        .iter()
        .map(|e| {
            vec![
                e.name.clone(),
                e.n.to_string(),
                e.admissible.to_string(),
                e.closed_form_components.clone(),
                e.notes.clone(),
            ]
        })
        .collect();
    let json = if dump {
        if name.is_some() {
            serde_json::to_value(&chosen[0])?
        } else {
            serde_json::to_value(&chosen)?
        }
    } else {
        let listing: Vec<Listing> = chosen
            .into_iter()
            .map(|e| Listing {
                name: e.name,
                n: e.n,
                admissible: e.admissible,
                closed_form_components: e.closed_form_components,
                notes: e.notes,
            })
            .collect();
        serde_json::to_value(listing)?
    };
    Ok(Report {
        json,
        header,
        rows,
        status: EXIT_OK,
    })
}

fn selftest(criteria: &[usize]) -> Result<Report> {
    let ids: Vec<usize> = if criteria.is_empty() {
        (1..=acceptance::CRITERIA.len()).collect()
    } else {
        criteria.to_vec()
    };
    if let Some(bad) = ids
        .iter()
        .find(|&&i| i == 0 || i > acceptance::CRITERIA.len())
    {
        return Err(HnError::input(format!(
            "no criterion {bad} (1..={})",
            acceptance::CRITERIA.len()
        )));
    }
    let mut outcomes = Vec::new();
    for id in ids {
        let o = acceptance::run(id);
        eprintln!("{}", o.line());
        outcomes.push(o);
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    eprintln!("{passed}/{} criteria passed", outcomes.len());
    let header = ["criterion", "name", "passed", "seconds", "detail"]
        .map(String::from)
        .to_vec();
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.id.to_string(),
                o.name.to_string(),
                o.passed.to_string(),
                format!("{:.2}", o.seconds),
                o.detail.clone(),
            ]
        })
        .collect();
    Ok(Report {
        json: json!({ "command": "selftest", "passed": passed, "total": outcomes.len(), "criteria": outcomes }),
        header,
        rows,
        status: if passed == outcomes.len() {
            EXIT_OK
        } else {
            EXIT_FAIL
        },
    })
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    match &cli.command {
        Command::Evaluate { source, at, input } => evaluate(c, source, at, input.as_deref()),
        Command::VerifyMeasure {
            input,
            entry,
            degree_cutoff,
            samples,
            all_forms,
            structural,
        } => verify_measure(
            c,
            input.as_deref(),
            entry.as_deref(),
            *degree_cutoff,
            *samples,
            *all_forms,
            *structural,
        ),
        Command::Recover { source, t0 } => recover(c, source, *t0),
        Command::Symmetry { source, at } => symmetry(c, source, at),
        Command::Catalog { dump, entry } => catalog(*dump, entry.as_deref()),
        Command::Selftest { criterion } => selftest(criterion),
    }
}

fn render(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&report.json)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| HnError::input(e.to_string());
            w.write_record(&report.header).map_err(io)?;
            for r in &report.rows {
                w.write_record(r).map_err(io)?;
            }
            w.into_inner().map_err(|e| HnError::input(e.to_string()))
        }
    }
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn error_report(e: &HnError, format: Format) -> Vec<u8> {
    let kind = match e {
        HnError::Domain(_) => "domain",
        HnError::DimensionMismatch { .. } => "dimension_mismatch",
        HnError::NotConverged { .. } => "not_converged",
        HnError::NoConvergence(_) => "no_convergence",
        HnError::Precondition(_) => "precondition",
        HnError::Input(_) => "input",
    };
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(
                &json!({ "error": { "kind": kind, "message": e.to_string() } }),
            )
            .unwrap_or_default();
            v.push(b'\n');
            v
        }
        Format::Csv => format!(
            "error,message\n{kind},\"{}\"\n",
            e.to_string().replace('"', "\"\"")
        )
        .into_bytes(),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("HNKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a pool may already exist when embedded; keep it
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Run a parsed command line and return the exit status.
pub fn run(cli: &Cli) -> i32 {
    configure_threads();
    let out = cli.common.out.as_deref();
    let result = dispatch(cli).and_then(|r| render(&r, cli.common.format).map(|b| (b, r.status)));
    match result {
        Ok((bytes, status)) => match emit(&bytes, out) {
            Ok(()) => status,
            Err(e) => {
                eprintln!("hnkit: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("hnkit: {e}");
            let _ = emit(&error_report(&e, cli.common.format), out);
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::I;

    #[test]
    fn parses_point_literals() {
        let p = parse_point("[i, 1+2i, -0.5-1e-3i]").unwrap();
        assert_eq!(
            p.coords(),
            &[I, Complex64::new(1.0, 2.0), Complex64::new(-0.5, -1e-3)]
        );
        let q = parse_point("[[0, 1], [2, -3]]").unwrap();
        assert_eq!(q.coords(), &[I, Complex64::new(2.0, -3.0)]);
        assert!(parse_point("[i, 2]").is_err());
        assert!(parse_point("[i, x]").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&HnError::input("x")), EXIT_INPUT);
        assert_eq!(
            exit_code(&HnError::NoConvergence("x".into())),
            EXIT_NOT_CONVERGED
        );
    }

    #[test]
    fn catalog_dump_round_trips_through_evaluate() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tv.json");
        let dumped = catalog(true, Some("three_var_inverse")).unwrap();
        fs::write(&path, serde_json::to_vec(&dumped.json).unwrap()).unwrap();
        let from_file = read_data(&path).unwrap();
        let z = parse_point("[i, i, i]").unwrap();
        let spec = QuadratureSpec::default();
        let a = evaluate_q_report(&from_file, &z, &spec).unwrap().value;
        let b = evaluate_q_report(&entry("three_var_inverse").unwrap().data, &z, &spec)
            .unwrap()
            .value;
        assert_eq!(a, b);
        assert!((a - Complex64::new(1.0, 1.0 / 3.0)).norm() < 1e-8);
    }
}
