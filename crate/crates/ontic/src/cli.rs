//! The `ontic` command line. [`run`] never touches the process: it returns
//! the exit code and both output streams, so it is testable in-process.
//!
//! Exit codes: 0 success or verdict true, 1 verdict false (invalid model,
//! Born mismatch, infeasible spec, independence failure), 2 usage or parse
//! error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format::{self, SCHEMA_VERSION};
use crate::hilbert::{MeasurementBasis, StateVector};
use crate::independence::{classical_overlap, independence_report, own_local_marginals, FactorSelection};
use crate::numerics::QSqrt2;
use crate::ontology::{
    check_born_agreement, predicted_statistics, simulate_parallel, validate_model, OntologicalModel,
};
use crate::scenarios::{
    build_lhv_restriction, build_pbr_quantum_scenario, build_toy_nlhv_model, pbr_basis, pbr_synthesis_spec,
    pbr_zero_spec, state_label_for, toy_subsystem_model, PRODUCT_LABELS, TOY_MEASUREMENT,
};
use crate::synthesis::{
    build_synthesis_lp, min_violation, solve_feasibility, verify_certificate, FeasibilityResult, LinearProgram,
    SynthesisSpec,
};

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(name = "ontic", version, about = "Exact finite ontological models of quantum systems")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    /// The non-local toy model on {H,T}² × {H,T}² × {1,2}.
    ToyNlhv,
    /// Its restriction to the local factors, without measurements.
    PbrLhv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Targets {
    /// Constrain only the cells the Born rule forbids.
    Zeros,
    /// Constrain every cell to its Born probability.
    Born,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisChoice {
    /// The antidistinguishing two-qubit basis.
    Pbr,
    Computational,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Model file.
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Args)]
#[group(multiple = false)]
struct OptionalSource {
    /// Model file (default: the built-in toy model).
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Subcommand)]
enum Command {
    /// Check normalization of every preparation and outcome completeness of
    /// every measurement.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Outcome probabilities by the law of total probability.
    Predict {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        prep: Option<String>,
        #[arg(long)]
        meas: Option<String>,
    },
    /// Compare model predictions with the Born rule. Preparation labels are
    /// mapped to states through their trailing `0`/`1`/`+`/`-` characters.
    BornCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = BasisChoice::Pbr)]
        basis: BasisChoice,
    },
    /// Preparation, local and full independence of every joint preparation,
    /// plus pairwise overlaps.
    Independence {
        #[command(flatten)]
        source: Source,
        /// Factors hidden from local measurements (default: as declared).
        #[arg(long, value_delimiter = ',')]
        inaccessible: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        preps: Vec<String>,
    },
    /// Classical overlap Σ min(μ, ν) of two preparations.
    Overlap {
        #[command(flatten)]
        source: Source,
        /// Two labels; with none, every pair is reported.
        #[arg(long, value_delimiter = ',')]
        preps: Vec<String>,
    },
    /// Solve for response functions meeting a target table, or certify that
    /// none exist.
    Synthesize {
        /// A synthesis spec file, or a model file combined with `--targets`.
        file: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "file")]
        builtin: Option<Builtin>,
        #[arg(long, value_enum, default_value_t = Targets::Zeros)]
        targets: Targets,
        /// Also write the result document here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Certify that the local restriction cannot reproduce the forbidden
    /// cells, and that the full model can.
    Nogo {
        #[command(flatten)]
        source: OptionalSource,
        #[arg(long, value_delimiter = ',')]
        inaccessible: Vec<String>,
    },
    /// Seeded Monte Carlo run of a preparation and measurement.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        prep: Option<String>,
        #[arg(long)]
        meas: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// The whole two-qubit walk-through on the built-ins.
    DemoPbr,
    /// Print a built-in in the model file format, or the synthesis spec
    /// derived from it.
    Dump {
        #[arg(long, value_enum)]
        builtin: Builtin,
        #[arg(long, value_enum)]
        spec: Option<Targets>,
    },
}

/// What a command produced before rendering.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(verdict: bool, text: String, json: Value) -> Self {
        Report {
            code: if verdict { 0 } else { 1 },
            text,
            json,
        }
    }
}

/// Parses `argv` (program name first) and runs one command.
pub fn run<I, S>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (rendered, String::new()) } else { (String::new(), rendered) };
            return CliOutcome { code, stdout, stderr };
        }
    };
    let name = command_name(&cli.command);
    match dispatch(cli.command) {
        Ok(report) => {
            let stdout = match cli.format {
                OutputFormat::Text => report.text,
                OutputFormat::Json => {
                    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": name });
                    if let (Value::Object(d), Value::Object(r)) = (&mut doc, report.json) {
                        d.extend(r);
                    }
                    let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
                    s.push('\n');
                    s
                }
            };
            CliOutcome {
                code: report.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => CliOutcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Validate { .. } => "validate",
        Command::Predict { .. } => "predict",
        Command::BornCheck { .. } => "born-check",
        Command::Independence { .. } => "independence",
        Command::Overlap { .. } => "overlap",
        Command::Synthesize { .. } => "synthesize",
        Command::Nogo { .. } => "nogo",
        Command::Simulate { .. } => "simulate",
        Command::DemoPbr => "demo-pbr",
        Command::Dump { .. } => "dump",
    }
}

fn dispatch(command: Command) -> Result<Report> {
    match command {
        Command::Validate { source } => {
            // Validation failures are the verdict here, not a load error.
            let model = match (&source.model, source.builtin) {
                (Some(path), _) => format::parse_model(&format::read_file(path)?)?,
                (None, Some(b)) => builtin(b)?,
                (None, None) => unreachable!("clap requires a source"),
            };
            validate(&model)
        }
        Command::Predict { source, prep, meas } => predict(&load(&source)?, prep.as_deref(), meas.as_deref()),
        Command::BornCheck { source, basis } => born_check(&load(&source)?, basis),
        Command::Independence {
            source,
            inaccessible,
            preps,
        } => independence(&load(&source)?, &inaccessible, &preps),
        Command::Overlap { source, preps } => overlap(&source, &load(&source)?, &preps),
        Command::Synthesize {
            file,
            builtin: b,
            targets,
            output,
        } => synthesize(file, b, targets, output),
        Command::Nogo { source, inaccessible } => {
            let model = match (&source.model, source.builtin) {
                (Some(path), _) => format::load_model(path)?,
                (None, Some(b)) => builtin(b)?,
                (None, None) => build_toy_nlhv_model(),
            };
            nogo(&model, &inaccessible)
        }
        Command::Simulate {
            source,
            prep,
            meas,
            samples,
            seed,
            jobs,
        } => simulate(&load(&source)?, prep.as_deref(), meas.as_deref(), samples, seed, jobs),
        Command::DemoPbr => demo_pbr(),
        Command::Dump { builtin: b, spec } => {
            let model = builtin(b)?;
            let text = match spec {
                Some(targets) => format::dump_spec(&spec_from_model(&model, targets)?.0),
                None => format::dump_model(&model),
            };
            Ok(Report::new(true, text.clone(), json!({ "document": text })))
        }
    }
}

fn builtin(b: Builtin) -> Result<OntologicalModel> {
    let toy = build_toy_nlhv_model();
    match b {
        Builtin::ToyNlhv => Ok(toy),
        Builtin::PbrLhv => build_lhv_restriction(&toy),
    }
}

fn load(source: &Source) -> Result<OntologicalModel> {
    match (&source.model, source.builtin) {
        (Some(path), _) => format::load_model(path),
        (None, Some(b)) => builtin(b),
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn v(q: &QSqrt2) -> String {
    q.display_with_approx()
}

fn row(values: &[QSqrt2]) -> String {
    values.iter().map(v).collect::<Vec<_>>().join(", ")
}

fn validate(model: &OntologicalModel) -> Result<Report> {
    let report = validate_model(model);
    let mut text = String::new();
    for (label, check) in &report.preparations {
        let _ = write!(text, "preparation {label}: total {}", v(&check.total));
        if check.valid {
            text.push_str(", valid\n");
        } else {
            let _ = write!(text, ", deficit {}", v(&check.deficit));
            if !check.out_of_range.is_empty() {
                let _ = write!(text, ", out of range at {}", check.out_of_range.join("; "));
            }
            text.push_str(", INVALID\n");
        }
    }
    for (label, check) in &report.measurements {
        let _ = write!(text, "measurement {label}: {} points checked", check.points_checked);
        if check.valid {
            text.push_str(", every point sums to 1, valid\n");
        } else {
            text.push_str(", INVALID\n");
            for p in &check.violations {
                let _ = writeln!(text, "  ({}) sums to {}", p.point, v(&p.sum));
            }
            for (k, p) in &check.out_of_range {
                let _ = writeln!(text, "  outcome {k} at ({p}) is outside [0, 1]");
            }
        }
    }
    let valid = report.valid();
    let _ = writeln!(text, "model {}", if valid { "valid" } else { "INVALID" });
    Ok(Report::new(valid, text, json!({ "valid": valid, "report": report })))
}

fn single_or_named<'a>(names: impl Iterator<Item = &'a String>, chosen: Option<&'a str>) -> Vec<&'a str> {
    match chosen {
        Some(c) => vec![c],
        None => names.map(String::as_str).collect(),
    }
}

fn predict(model: &OntologicalModel, prep: Option<&str>, meas: Option<&str>) -> Result<Report> {
    let preps = single_or_named(model.preparations().keys(), prep);
    let measurements = single_or_named(model.measurements().keys(), meas);
    if measurements.is_empty() {
        return Err(Error::UnknownMeasurement("(model has no measurements)".into()));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for m in &measurements {
        for p in &preps {
            let probs = predicted_statistics(model, p, m)?;
            let _ = writeln!(text, "{p} | {m}: {}", row(&probs));
            rows.push(json!({ "preparation": p, "measurement": m, "probabilities": probs }));
        }
    }
    Ok(Report::new(true, text, json!({ "predictions": rows })))
}

fn states_for(model: &OntologicalModel, dim: usize) -> Result<Vec<(String, StateVector)>> {
    model
        .preparations()
        .keys()
        .map(|label| {
            let state = state_label_for(label)
                .and_then(|s| StateVector::from_label(s).ok())
                .filter(|s| s.dim() == dim)
                .ok_or_else(|| Error::UnknownState(format!("no {dim}-dimensional state for preparation `{label}`")))?;
            Ok((label.clone(), state))
        })
        .collect()
}

fn born_check(model: &OntologicalModel, choice: BasisChoice) -> Result<Report> {
    if model.measurements().is_empty() {
        return Err(Error::UnknownMeasurement("(model has no measurements)".into()));
    }
    let mut text = String::new();
    let mut cells = Vec::new();
    let mut total = 0;
    let mut agree = 0;
    for (label, xi) in model.measurements() {
        let basis = match choice {
            BasisChoice::Pbr => pbr_basis(),
            BasisChoice::Computational => MeasurementBasis::computational(xi.outcome_count()),
        };
        let states = states_for(model, basis.dim())?;
        let refs: Vec<(&str, &StateVector)> = states.iter().map(|(l, s)| (l.as_str(), s)).collect();
        let report = check_born_agreement(model, &refs, &[(label.as_str(), &basis)])?;
        for cell in &report.cells {
            let _ = writeln!(
                text,
                "{} | {} outcome {}: model {}, Born {}{}",
                cell.preparation,
                cell.measurement,
                cell.outcome,
                v(&cell.predicted),
                v(&cell.target),
                if cell.matches { "" } else { "  MISMATCH" }
            );
        }
        total += report.cells.len();
        agree += report.matching();
        cells.extend(report.cells);
    }
    let all = agree == total;
    let _ = writeln!(text, "{agree}/{total} cells agree exactly");
    Ok(Report::new(all, text, json!({ "agree": all, "matching": agree, "total": total, "cells": cells })))
}

fn selection(model: &OntologicalModel, names: &[String]) -> Result<Option<FactorSelection>> {
    let names: Vec<String> = if names.is_empty() {
        model.space().inaccessible_factors().iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    if names.is_empty() {
        return Ok(None);
    }
    let sel = FactorSelection::new(names)?;
    sel.resolve(model.space())?;
    Ok(Some(sel))
}

fn independence(model: &OntologicalModel, inaccessible: &[String], preps: &[String]) -> Result<Report> {
    let sel = selection(model, inaccessible)?;
    let labels: Vec<&str> = if preps.is_empty() {
        model.preparations().keys().map(String::as_str).collect()
    } else {
        preps.iter().map(String::as_str).collect()
    };
    let mut locals = Vec::new();
    for label in &labels {
        let (mu, nu) = own_local_marginals(model.preparation(label)?, sel.as_ref())?;
        locals.push((*label, mu, nu));
    }
    let pairs: Vec<_> = locals.iter().map(|(l, mu, nu)| (*l, mu, nu)).collect();
    let report = independence_report(model, &pairs, sel.as_ref())?;

    let mut text = String::new();
    match &sel {
        Some(s) => {
            let _ = writeln!(text, "inaccessible: {}", s.names().join(", "));
        }
        None => text.push_str("inaccessible: none\n"),
    }
    let mark = |b: bool| if b { "holds" } else { "fails" };
    for j in &report.joints {
        let _ = write!(text, "{}: ", j.preparation);
        if let Some(p) = j.prep_independent {
            let _ = write!(text, "preparation independence {}, ", mark(p));
        }
        let _ = writeln!(
            text,
            "local independence {}, full independence {}",
            mark(j.locally_independent),
            mark(j.fully_independent)
        );
        for w in &j.witnesses {
            let _ = writeln!(text, "  witness ({}): joint {} vs product {}", w.point, v(&w.joint), v(&w.product));
        }
    }
    text.push_str("pairwise overlaps:\n");
    for o in &report.overlaps {
        let _ = writeln!(text, "  {} / {}: {}", o.first, o.second, v(o.overlap.value()));
    }
    let ok = report.all_locally_independent();
    Ok(Report::new(ok, text, json!({ "locally_independent": ok, "report": report })))
}

fn overlap(source: &Source, model: &OntologicalModel, preps: &[String]) -> Result<Report> {
    if preps.is_empty() {
        let mut text = String::new();
        let mut entries = Vec::new();
        let labels: Vec<&String> = model.preparations().keys().collect();
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                let o = classical_overlap(model.preparation(a)?, model.preparation(b)?)?;
                let _ = writeln!(text, "{a} / {b}: {}", v(o.value()));
                entries.push(json!({ "first": a, "second": b, "overlap": o }));
            }
        }
        return Ok(Report::new(true, text, json!({ "overlaps": entries })));
    }
    if preps.len() != 2 {
        return Err(Error::InvalidSelection(format!("--preps needs two labels, got {}", preps.len())));
    }
    // The single-system states of the toy model live on their own space.
    let sub = toy_subsystem_model();
    let pick = |m: &OntologicalModel| -> Option<(crate::ontology::EpistemicState, crate::ontology::EpistemicState)> {
        Some((m.preparation(&preps[0]).ok()?.clone(), m.preparation(&preps[1]).ok()?.clone()))
    };
    let (mu, nu) = match pick(model) {
        Some(pair) => pair,
        None if source.builtin == Some(Builtin::ToyNlhv) => {
            pick(&sub).ok_or_else(|| Error::UnknownPreparation(preps.join(",")))?
        }
        None => {
            let missing = preps.iter().find(|p| model.preparation(p).is_err()).expect("one is missing");
            return Err(Error::UnknownPreparation(missing.clone()));
        }
    };
    let o = classical_overlap(&mu, &nu)?;
    let positive = o.value().sign() > 0;
    let text = format!("overlap({}, {}) = {}\n", preps[0], preps[1], v(o.value()));
    Ok(Report::new(
        positive,
        text,
        json!({ "first": preps[0], "second": preps[1], "overlap": o }),
    ))
}

fn spec_from_model(model: &OntologicalModel, targets: Targets) -> Result<(SynthesisSpec, Vec<(usize, usize)>)> {
    match targets {
        Targets::Zeros => pbr_zero_spec(model),
        Targets::Born => Ok((pbr_synthesis_spec(model)?, Vec::new())),
    }
}

fn is_spec_document(text: &str) -> bool {
    text.parse::<toml::Table>().is_ok_and(|t| t.contains_key("outcomes"))
}

fn render_result(text: &mut String, lp: &LinearProgram, result: &FeasibilityResult) -> Value {
    let check = verify_certificate(lp, result);
    match result {
        FeasibilityResult::Feasible { witness } => {
            text.push_str("status: feasible\nwitness (non-zero entries):\n");
            let mut entries = serde_json::Map::new();
            for (name, x) in lp.variables.iter().zip(witness) {
                if !num_traits::Zero::is_zero(x) {
                    let x = QSqrt2::from_rational(x.clone());
                    let _ = writeln!(text, "  {name} = {}", v(&x));
                    entries.insert(name.clone(), json!(x.to_string()));
                }
            }
            let _ = writeln!(text, "witness check: {}", check.detail);
            json!({ "status": "feasible", "witness": entries, "check": check })
        }
        FeasibilityResult::Infeasible { certificate } => {
            text.push_str("status: infeasible\nFarkas certificate (constraint multipliers):\n");
            let mut multipliers = Vec::new();
            for (id, y) in &certificate.multipliers {
                let y = QSqrt2::from_rational(y.clone());
                let _ = writeln!(text, "  {id}: {}", v(&y));
                multipliers.push(json!({ "constraint": id, "multiplier": y.to_string() }));
            }
            let _ = writeln!(text, "certificate check: {}", check.detail);
            json!({ "status": "infeasible", "multipliers": multipliers, "check": check })
        }
    }
}

fn synthesize(file: Option<PathBuf>, b: Option<Builtin>, targets: Targets, output: Option<PathBuf>) -> Result<Report> {
    let (spec, forbidden) = match (file, b) {
        (Some(path), _) => {
            let text = format::read_file(&path)?;
            if is_spec_document(&text) {
                let spec = format::parse_spec(&text)?;
                let forbidden = spec
                    .targets()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, r)| {
                        r.iter()
                            .enumerate()
                            .filter(|(_, t)| t.as_ref().is_some_and(num_traits::Zero::is_zero))
                            .map(move |(k, _)| (i, k))
                    })
                    .collect();
                (spec, forbidden)
            } else {
                spec_from_model(&format::load_model_str(&text)?, targets)?
            }
        }
        (None, Some(b)) => spec_from_model(&builtin(b)?, targets)?,
        (None, None) => spec_from_model(&builtin(Builtin::PbrLhv)?, targets)?,
    };
    let lp = build_synthesis_lp(&spec)?;
    let result = solve_feasibility(&lp);
    let mut text = format!(
        "program: {} variables, {} equality constraints\n",
        lp.variables.len(),
        lp.constraints.len()
    );
    let mut doc = render_result(&mut text, &lp, &result);
    if !forbidden.is_empty() {
        let floor = min_violation(&spec, &forbidden)?;
        let _ = writeln!(text, "smallest achievable max forbidden-cell probability: {}", v(floor.value()));
        doc["min_violation"] = json!(floor);
    }
    if let Some(path) = output {
        std::fs::write(&path, format::dump_result(&lp, &result)).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(Report::new(result.is_feasible(), text, doc))
}

fn nogo(model: &OntologicalModel, inaccessible: &[String]) -> Result<Report> {
    let model = if inaccessible.is_empty() {
        model.clone()
    } else {
        model.with_inaccessible(&inaccessible.iter().map(String::as_str).collect::<Vec<_>>())?
    };
    let hidden = model.space().inaccessible_factors().iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let local = if hidden.is_empty() { model.clone() } else { build_lhv_restriction(&model)? };

    let (spec, forbidden) = pbr_zero_spec(&local)?;
    let lp = build_synthesis_lp(&spec)?;
    let result = solve_feasibility(&lp);
    let check = verify_certificate(&lp, &result);
    let floor = min_violation(&spec, &forbidden)?;

    let mut text = format!(
        "local space: {} points ({}), {} preparations, {} forbidden cells\n",
        local.space().size(),
        local.space().factors().iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(" × "),
        local.preparations().len(),
        forbidden.len()
    );
    text.push_str("local model, forbidden cells set to zero:\n");
    let local_doc = render_result(&mut text, &lp, &result);
    let _ = writeln!(text, "smallest achievable max forbidden-cell probability: {}", v(floor.value()));

    let mut doc = json!({
        "inaccessible": hidden,
        "local": local_doc,
        "min_violation": floor,
    });

    if !hidden.is_empty() {
        let (full_spec, _) = pbr_zero_spec(&model)?;
        let full_lp = build_synthesis_lp(&full_spec)?;
        let full = solve_feasibility(&full_lp);
        let _ = writeln!(
            text,
            "with {} restored: {}",
            hidden.join(", "),
            if full.is_feasible() { "feasible" } else { "infeasible" }
        );
        doc["restored_feasible"] = json!(full.is_feasible());
        if let Some(xi) = model.measurements().get(TOY_MEASUREMENT) {
            let witness = full_spec.witness_from_responses(xi)?;
            let own = verify_certificate(&full_lp, &FeasibilityResult::Feasible { witness });
            let _ = writeln!(text, "model measurement {TOY_MEASUREMENT} as witness: {}", own.detail);
            doc["model_witness"] = json!(own);
        }
    }

    let certified = !result.is_feasible() && check.valid;
    let _ = writeln!(text, "no-go {}", if certified { "certified" } else { "NOT certified" });
    doc["certified"] = json!(certified);
    Ok(Report::new(certified, text, doc))
}

fn simulate(
    model: &OntologicalModel,
    prep: Option<&str>,
    meas: Option<&str>,
    samples: u64,
    seed: u64,
    jobs: usize,
) -> Result<Report> {
    let preps = single_or_named(model.preparations().keys(), prep);
    let meas = match meas {
        Some(m) => m,
        None => match model.measurements().len() {
            1 => model.measurements().keys().next().expect("one measurement").as_str(),
            0 => return Err(Error::UnknownMeasurement("(model has no measurements)".into())),
            _ => return Err(Error::UnknownMeasurement("several measurements; pick one with --meas".into())),
        },
    };
    let mut text = format!("seed {seed}, {samples} samples per preparation\n");
    let mut runs = Vec::new();
    for p in preps {
        let counts = simulate_parallel(model, p, meas, samples, seed, jobs)?;
        let exact = predicted_statistics(model, p, meas)?;
        let _ = writeln!(text, "{p} | {meas}:");
        for (k, (c, e)) in counts.counts.iter().zip(&exact).enumerate() {
            let _ = writeln!(
                text,
                "  outcome {}: {c} ({:.5}), exact {}",
                k + 1,
                counts.frequency(k),
                v(e)
            );
        }
        runs.push(json!({ "preparation": p, "measurement": meas, "counts": counts.counts, "exact": exact }));
    }
    Ok(Report::new(true, text, json!({ "seed": seed, "samples": samples, "runs": runs })))
}

fn demo_pbr() -> Result<Report> {
    let scenario = build_pbr_quantum_scenario();
    let toy = build_toy_nlhv_model();
    let mut text = String::from("Born table (rows: states, columns: outcomes):\n");
    for ((label, _), probs) in scenario.product_states.iter().zip(&scenario.born_table) {
        let values: Vec<QSqrt2> = probs.iter().map(|p| p.value().clone()).collect();
        let _ = writeln!(text, "  |{label}>: {}", row(&values));
    }

    let refs: Vec<(&str, &StateVector)> = crate::scenarios::TOY_PREPARATIONS
        .iter()
        .zip(PRODUCT_LABELS)
        .map(|(p, s)| (*p, scenario.state(s).expect("product state")))
        .collect();
    let agreement = check_born_agreement(&toy, &refs, &[(TOY_MEASUREMENT, &scenario.basis)])?;
    let _ = writeln!(
        text,
        "toy model vs Born rule: {}/{} cells agree",
        agreement.matching(),
        agreement.cells.len()
    );

    let indep = independence(&toy, &[], &[])?;
    text.push_str("independence with Ls inaccessible:\n");
    for line in indep.text.lines().skip(1) {
        let _ = writeln!(text, "  {line}");
    }

    let sub = toy_subsystem_model();
    let single = classical_overlap(sub.preparation("nu0")?, sub.preparation("nu+")?)?;
    let _ = writeln!(text, "single-system overlap (nu0, nu+): {}", v(single.value()));

    let nogo = nogo(&toy, &[])?;
    text.push_str("no-go check:\n");
    for line in nogo.text.lines() {
        let _ = writeln!(text, "  {line}");
    }

    let ok = agreement.all_match() && indep.code == 0 && nogo.code == 0;
    let doc = json!({
        "born_table": scenario.born_table,
        "agreement": { "matching": agreement.matching(), "total": agreement.cells.len() },
        "independence": indep.json,
        "single_system_overlap": single,
        "nogo": nogo.json,
    });
    Ok(Report::new(ok, text, doc))
}
