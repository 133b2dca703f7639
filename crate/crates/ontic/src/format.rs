//! The structured text format for models, synthesis specs and synthesis
//! results.
//!
//! Documents are TOML. A model looks like
//!
//! ```toml
//! schema_version = 1
//!
//! [space]
//! factors = [
//!   { name = "L", labels = ["H", "T"] },
//! ]
//!
//! [[preparations]]
//! label = "mu"
//! weights = [
//!   ["H", "1/2"],
//!   ["T", "1/2"],
//! ]
//!
//! [[measurements]]
//! label = "M"
//! outcomes = 2
//! filler = "0"
//! entries = [
//!   [1, "H", "1"],
//!   [2, "T", "1"],
//! ]
//! ```
//!
//! Probabilities are strings in the `QSqrt2` text format (`"1/3 + sqrt2/7"`).
//! Measurement outcomes are 1-based. A point listed for some outcome takes 0
//! on its unlisted outcomes; a point listed for none takes `filler` on all.
//!
//! The `dump_*` functions write a canonical form (points in index order,
//! lowest-terms values), so `dump(parse(dump(x))) == dump(x)` byte for byte.

use std::fmt::Write as _;
use std::ops::Range;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::numerics::{QSqrt2, Rational};
use crate::ontology::{validate_model, EpistemicState, Factor, OnticSpace, OntologicalModel, ResponseFunctions};
use crate::synthesis::{FarkasCertificate, FeasibilityResult, LinearProgram, SynthesisSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    schema_version: Spanned<u32>,
    space: RawSpace,
    #[serde(default)]
    preparations: Vec<RawPreparation>,
    #[serde(default)]
    measurements: Vec<RawMeasurement>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    schema_version: Spanned<u32>,
    outcomes: Spanned<usize>,
    space: RawSpace,
    #[serde(default)]
    preparations: Vec<RawSpecPreparation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResult {
    schema_version: Spanned<u32>,
    status: Spanned<String>,
    #[serde(default)]
    witness: Vec<(Spanned<String>, Spanned<QSqrt2>)>,
    #[serde(default)]
    multipliers: Vec<(Spanned<String>, Spanned<QSqrt2>)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    factors: Spanned<Vec<RawFactor>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    name: String,
    labels: Vec<String>,
    #[serde(default)]
    inaccessible: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreparation {
    label: Spanned<String>,
    weights: Vec<(Spanned<String>, QSqrt2)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecPreparation {
    label: Spanned<String>,
    weights: Vec<(Spanned<String>, QSqrt2)>,
    #[serde(default)]
    targets: Vec<(Spanned<usize>, QSqrt2)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurement {
    label: Spanned<String>,
    outcomes: Spanned<usize>,
    filler: QSqrt2,
    #[serde(default)]
    entries: Vec<(Spanned<usize>, Spanned<String>, QSqrt2)>,
}

/// Converts byte spans into 1-based line/column positions.
struct Source<'a>(&'a str);

impl Source<'_> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.0[..offset.min(self.0.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        (line, column)
    }

    fn error(&self, span: Range<usize>, message: impl Into<String>) -> Error {
        let (line, column) = self.position(span.start);
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn decode<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        toml::from_str(self.0).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| self.position(s.start));
            Error::Syntax {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    fn check_version(&self, version: &Spanned<u32>) -> Result<()> {
        if *version.get_ref() != SCHEMA_VERSION {
            return Err(self.error(
                version.span(),
                format!("unsupported schema_version {}, expected {SCHEMA_VERSION}", version.get_ref()),
            ));
        }
        Ok(())
    }

    fn space(&self, raw: RawSpace) -> Result<Arc<OnticSpace>> {
        let span = raw.factors.span();
        let factors = raw
            .factors
            .into_inner()
            .into_iter()
            .map(|f| {
                let factor = Factor::new(f.name, f.labels);
                if f.inaccessible {
                    factor.inaccessible()
                } else {
                    factor
                }
            })
            .collect();
        OnticSpace::shared(factors).map_err(|e| self.error(span, e.to_string()))
    }

    fn point(&self, space: &OnticSpace, text: &Spanned<String>) -> Result<usize> {
        space
            .parse_point(text.get_ref())
            .map_err(|e| self.error(text.span(), e.to_string()))
    }

    fn state(
        &self,
        space: &Arc<OnticSpace>,
        label: &Spanned<String>,
        weights: Vec<(Spanned<String>, QSqrt2)>,
    ) -> Result<EpistemicState> {
        let mut seen = vec![false; space.size()];
        let mut entries = Vec::with_capacity(weights.len());
        for (point, weight) in weights {
            let index = self.point(space, &point)?;
            if std::mem::replace(&mut seen[index], true) {
                return Err(self.error(
                    point.span(),
                    format!("duplicate point `{}` in preparation `{}`", point.get_ref(), label.get_ref()),
                ));
            }
            entries.push((index, weight));
        }
        EpistemicState::new(space.clone(), entries).map_err(|e| self.error(label.span(), e.to_string()))
    }
}

/// Parses a model document. Structural problems (syntax, unknown labels,
/// duplicate points or names) are errors; normalization is not checked, see
/// [`load_model`].
pub fn parse_model(text: &str) -> Result<OntologicalModel> {
    let src = Source(text);
    let raw: RawModel = src.decode()?;
    src.check_version(&raw.schema_version)?;
    let space = src.space(raw.space)?;
    let mut model = OntologicalModel::new(space.clone());
    for prep in raw.preparations {
        let state = src.state(&space, &prep.label, prep.weights)?;
        model
            .add_preparation(prep.label.get_ref().clone(), state)
            .map_err(|e| src.error(prep.label.span(), e.to_string()))?;
    }
    for meas in raw.measurements {
        let count = *meas.outcomes.get_ref();
        if count == 0 {
            return Err(src.error(meas.outcomes.span(), "outcome count must be positive"));
        }
        let mut entries = Vec::with_capacity(meas.entries.len());
        for (outcome, point, value) in meas.entries {
            let k = *outcome.get_ref();
            if k == 0 || k > count {
                return Err(src.error(outcome.span(), format!("outcome {k} outside 1..={count}")));
            }
            let index = src.point(&space, &point)?;
            entries.push(((k - 1, index, value), point.span()));
        }
        for (i, ((k, index, _), span)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|((k2, i2, _), _)| k2 == k && i2 == index) {
                return Err(src.error(
                    span.clone(),
                    format!(
                        "duplicate point `{}` for outcome {} of measurement `{}`",
                        space.point_label(*index),
                        k + 1,
                        meas.label.get_ref()
                    ),
                ));
            }
        }
        let xi = ResponseFunctions::with_filler(space.clone(), count, meas.filler, entries.into_iter().map(|(e, _)| e))
            .map_err(|e| src.error(meas.label.span(), e.to_string()))?;
        model
            .add_measurement(meas.label.get_ref().clone(), xi)
            .map_err(|e| src.error(meas.label.span(), e.to_string()))?;
    }
    Ok(model)
}

/// Parses and fully validates. Validation failures name the offending
/// preparation, measurement or point.
pub fn load_model_str(text: &str) -> Result<OntologicalModel> {
    let model = parse_model(text)?;
    let report = validate_model(&model);
    match report.first_failure() {
        Some(failure) => Err(Error::InvalidModel(failure)),
        None => Ok(model),
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_model(path: &Path) -> Result<OntologicalModel> {
    load_model_str(&read_file(path)?)
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn write_space(out: &mut String, space: &OnticSpace) {
    out.push_str("[space]\nfactors = [\n");
    for f in space.factors() {
        let labels: Vec<String> = f.labels.iter().map(|l| quote(l)).collect();
        let _ = write!(out, "  {{ name = {}, labels = [{}]", quote(&f.name), labels.join(", "));
        if f.inaccessible {
            out.push_str(", inaccessible = true");
        }
        out.push_str(" },\n");
    }
    out.push_str("]\n");
}

fn write_rows(out: &mut String, key: &str, rows: &[String]) {
    if rows.is_empty() {
        let _ = writeln!(out, "{key} = []");
        return;
    }
    let _ = writeln!(out, "{key} = [");
    for row in rows {
        let _ = writeln!(out, "  [{row}],");
    }
    out.push_str("]\n");
}

fn weight_rows(mu: &EpistemicState) -> Vec<String> {
    let space = mu.space();
    mu.support()
        .map(|(p, w)| format!("{}, {}", quote(&space.point_label(p)), quote(&w.to_string())))
        .collect()
}

/// Canonical measurement entries: points whose column is all filler are
/// omitted, others list their non-zero outcomes (or an explicit `0` on
/// outcome 1 when the column is all zero).
fn entry_rows(xi: &ResponseFunctions) -> Vec<String> {
    let space = xi.space();
    let mut rows = Vec::new();
    for p in 0..space.size() {
        let column = xi.column(p);
        if column.iter().all(|v| v == xi.filler()) {
            continue;
        }
        let label = quote(&space.point_label(p));
        let mut any = false;
        for (k, v) in column.iter().enumerate() {
            if !v.is_zero() {
                rows.push(format!("{}, {label}, {}", k + 1, quote(&v.to_string())));
                any = true;
            }
        }
        if !any {
            rows.push(format!("1, {label}, \"0\""));
        }
    }
    rows
}

pub fn dump_model(model: &OntologicalModel) -> String {
    let mut out = format!("schema_version = {SCHEMA_VERSION}\n\n");
    write_space(&mut out, model.space());
    for (label, mu) in model.preparations() {
        let _ = write!(out, "\n[[preparations]]\nlabel = {}\n", quote(label));
        write_rows(&mut out, "weights", &weight_rows(mu));
    }
    for (label, xi) in model.measurements() {
        let _ = write!(
            out,
            "\n[[measurements]]\nlabel = {}\noutcomes = {}\nfiller = {}\n",
            quote(label),
            xi.outcome_count(),
            quote(&xi.filler().to_string())
        );
        write_rows(&mut out, "entries", &entry_rows(xi));
    }
    out
}

/// Synthesis specs share the model's `space` and `preparations` sections;
/// each preparation lists its constrained cells as `targets = [[outcome,
/// value], ...]`, and `outcomes` sets K.
pub fn dump_spec(spec: &SynthesisSpec) -> String {
    let mut out = format!("schema_version = {SCHEMA_VERSION}\noutcomes = {}\n\n", spec.outcome_count());
    write_space(&mut out, spec.space());
    for ((label, mu), row) in spec.preparations().iter().zip(spec.targets()) {
        let _ = write!(out, "\n[[preparations]]\nlabel = {}\n", quote(label));
        write_rows(&mut out, "weights", &weight_rows(mu));
        let targets: Vec<String> = row
            .iter()
            .enumerate()
            .filter_map(|(k, t)| t.as_ref().map(|t| format!("{}, {}", k + 1, quote(&t.to_string()))))
            .collect();
        write_rows(&mut out, "targets", &targets);
    }
    out
}

pub fn parse_spec(text: &str) -> Result<SynthesisSpec> {
    let src = Source(text);
    let raw: RawSpec = src.decode()?;
    src.check_version(&raw.schema_version)?;
    let space = src.space(raw.space)?;
    let count = *raw.outcomes.get_ref();
    if count == 0 {
        return Err(src.error(raw.outcomes.span(), "outcome count must be positive"));
    }
    let mut preparations = Vec::with_capacity(raw.preparations.len());
    let mut targets = Vec::with_capacity(raw.preparations.len());
    for prep in raw.preparations {
        if preparations.iter().any(|(l, _): &(String, _)| l == prep.label.get_ref()) {
            return Err(src.error(prep.label.span(), format!("duplicate label `{}`", prep.label.get_ref())));
        }
        let state = src.state(&space, &prep.label, prep.weights)?;
        let mut row = vec![None; count];
        for (outcome, value) in prep.targets {
            let k = *outcome.get_ref();
            if k == 0 || k > count {
                return Err(src.error(outcome.span(), format!("outcome {k} outside 1..={count}")));
            }
            if row[k - 1].replace(value).is_some() {
                return Err(src.error(outcome.span(), format!("outcome {k} targeted twice")));
            }
        }
        preparations.push((prep.label.into_inner(), state));
        targets.push(row);
    }
    SynthesisSpec::new(space, preparations, count, targets)
}

/// Feasible results list non-zero witness entries by variable name;
/// infeasible ones list the non-zero Farkas multipliers by constraint id.
pub fn dump_result(lp: &LinearProgram, result: &FeasibilityResult) -> String {
    let mut out = format!("schema_version = {SCHEMA_VERSION}\n");
    match result {
        FeasibilityResult::Feasible { witness } => {
            out.push_str("status = \"feasible\"\n");
            let rows: Vec<String> = lp
                .variables
                .iter()
                .zip(witness)
                .filter(|(_, v)| !v.is_zero())
                .map(|(name, v)| format!("{}, {}", quote(name), quote(&v.to_string())))
                .collect();
            write_rows(&mut out, "witness", &rows);
        }
        FeasibilityResult::Infeasible { certificate } => {
            out.push_str("status = \"infeasible\"\n");
            let rows: Vec<String> = certificate
                .multipliers
                .iter()
                .map(|(id, y)| format!("{}, {}", quote(id), quote(&y.to_string())))
                .collect();
            write_rows(&mut out, "multipliers", &rows);
        }
    }
    out
}

/// Reads a result back against the program it claims to solve. The result
/// is not verified here; pass it to `verify_certificate`.
pub fn parse_result(text: &str, lp: &LinearProgram) -> Result<FeasibilityResult> {
    let src = Source(text);
    let raw: RawResult = src.decode()?;
    src.check_version(&raw.schema_version)?;
    let rational = |v: &Spanned<QSqrt2>| -> Result<Rational> {
        if v.get_ref().is_rational() {
            Ok(v.get_ref().rat().clone())
        } else {
            Err(src.error(v.span(), "LP values must be rational"))
        }
    };
    match raw.status.get_ref().as_str() {
        "feasible" => {
            let mut witness = vec![Rational::zero(); lp.variables.len()];
            let mut seen = vec![false; lp.variables.len()];
            for (name, value) in &raw.witness {
                let j = lp
                    .variables
                    .iter()
                    .position(|v| v == name.get_ref())
                    .ok_or_else(|| src.error(name.span(), format!("unknown variable `{}`", name.get_ref())))?;
                if std::mem::replace(&mut seen[j], true) {
                    return Err(src.error(name.span(), format!("duplicate variable `{}`", name.get_ref())));
                }
                witness[j] = rational(value)?;
            }
            Ok(FeasibilityResult::Feasible { witness })
        }
        "infeasible" => {
            let mut multipliers: Vec<(String, Rational)> = Vec::with_capacity(raw.multipliers.len());
            for (id, value) in &raw.multipliers {
                if !lp.constraints.iter().any(|c| &c.id == id.get_ref()) {
                    return Err(src.error(id.span(), format!("unknown constraint `{}`", id.get_ref())));
                }
                if multipliers.iter().any(|(m, _)| m == id.get_ref()) {
                    return Err(src.error(id.span(), format!("duplicate constraint `{}`", id.get_ref())));
                }
                multipliers.push((id.get_ref().clone(), rational(value)?));
            }
            Ok(FeasibilityResult::Infeasible {
                certificate: FarkasCertificate { multipliers },
            })
        }
        other => Err(src.error(raw.status.span(), format!("unknown status `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QSqrt2;
    use crate::scenarios::{build_lhv_restriction, build_toy_nlhv_model, pbr_zero_spec};
    use crate::synthesis::{build_synthesis_lp, solve_feasibility};

    const SMALL: &str = r#"schema_version = 1

[space]
factors = [
  { name = "L", labels = ["H", "T"] },
]

[[preparations]]
label = "mu"
weights = [
  ["H", "1/3 + 1/7*sqrt2"],
  ["T", "2/3 - 1/7*sqrt2"],
]

[[measurements]]
label = "M"
outcomes = 2
filler = "1/2"
entries = [
  [1, "H", "1"],
]
"#;

    #[test]
    fn small_document() {
        let model = load_model_str(SMALL).unwrap();
        let mu = model.preparation("mu").unwrap();
        assert_eq!(mu.weight(0), "1/3 + sqrt2/7".parse::<QSqrt2>().unwrap());
        let xi = model.measurement("M").unwrap();
        assert_eq!(xi.column(0), vec![QSqrt2::one(), QSqrt2::zero()]);
        assert_eq!(xi.column(1), vec![QSqrt2::ratio(1, 2), QSqrt2::ratio(1, 2)]);
        assert_eq!(dump_model(&model), SMALL);
        let loose = SMALL.replace("1/3 + 1/7*sqrt2", "1/3 + sqrt2/7").replace("2/3 - 1/7*sqrt2", "2/3-√2/7");
        assert_eq!(load_model_str(&loose).unwrap(), model);
    }

    use num_traits::One;

    #[test]
    fn toy_model_round_trips() {
        let model = build_toy_nlhv_model();
        let text = dump_model(&model);
        let back = load_model_str(&text).unwrap();
        assert_eq!(back, model);
        assert_eq!(dump_model(&back), text);
        let lhv = build_lhv_restriction(&model).unwrap();
        assert_eq!(parse_model(&dump_model(&lhv)).unwrap(), lhv);
    }

    #[test]
    fn errors_carry_positions() {
        let bad = SMALL.replace("[\"T\", \"2/3", "[\"X\", \"2/3");
        match parse_model(&bad) {
            Err(Error::Syntax { line, column, message }) => {
                assert_eq!((line, column), (12, 4));
                assert!(message.contains("unknown label `X`"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let dup = SMALL.replace("[\"T\", \"2/3", "[\"H\", \"2/3");
        assert!(matches!(parse_model(&dup), Err(Error::Syntax { line: 12, .. })));
        let num = SMALL.replace("1/3 + 1/7*sqrt2", "1/0");
        assert!(matches!(parse_model(&num), Err(Error::Syntax { line: 11, .. })));
        assert!(matches!(parse_model(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_model("schema_version = 2\n[space]\nfactors = []\n"), Err(Error::Syntax { .. })));
        let extra = format!("{SMALL}\nbogus = 1\n");
        assert!(parse_model(&extra).is_err());
    }

    #[test]
    fn validation_is_separate_from_parsing() {
        let bad = SMALL.replace("2/3 - 1/7*sqrt2", "1/2");
        assert!(parse_model(&bad).is_ok());
        match load_model_str(&bad) {
            Err(Error::InvalidModel(msg)) => assert!(msg.contains("mu"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spec_and_result_round_trip() {
        let lhv = build_lhv_restriction(&build_toy_nlhv_model()).unwrap();
        let (spec, _) = pbr_zero_spec(&lhv).unwrap();
        let text = dump_spec(&spec);
        let back = parse_spec(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(dump_spec(&back), text);

        let lp = build_synthesis_lp(&spec).unwrap();
        let result = solve_feasibility(&lp);
        let dumped = dump_result(&lp, &result);
        assert!(dumped.contains("status = \"infeasible\""));
        assert_eq!(parse_result(&dumped, &lp).unwrap(), result);
    }

    #[test]
    fn witness_round_trip() {
        let spec = SynthesisSpec::with_targets(
            OnticSpace::shared(vec![Factor::new("L", ["a", "b"])]).unwrap(),
            vec![(
                "mu".into(),
                EpistemicState::new(
                    OnticSpace::shared(vec![Factor::new("L", ["a", "b"])]).unwrap(),
                    [(0, QSqrt2::ratio(1, 2)), (1, QSqrt2::ratio(1, 2))],
                )
                .unwrap(),
            )],
            2,
            vec![vec![QSqrt2::ratio(1, 4), QSqrt2::ratio(3, 4)]],
        )
        .unwrap();
        let lp = build_synthesis_lp(&spec).unwrap();
        let result = solve_feasibility(&lp);
        assert!(result.is_feasible());
        assert_eq!(parse_result(&dump_result(&lp, &result), &lp).unwrap(), result);
        let wrong = "schema_version = 1\nstatus = \"feasible\"\nwitness = [[\"nope\", \"1\"]]\n";
        assert!(matches!(parse_result(wrong, &lp), Err(Error::Syntax { line: 3, .. })));
    }
}
