//! Finite ontological models: an ontic space Λ, epistemic states μ over it,
//! and response functions ξ_k(λ), together with the validators for outcome
//! completeness and Born-rule agreement.

mod sampling;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{born_probabilities, MeasurementBasis, StateVector};
use crate::independence::classical_overlap;
use crate::numerics::{Probability, QSqrt2};

pub use sampling::{simulate, simulate_parallel, OutcomeCounts, SAMPLING_BLOCK};

/// One named coordinate of a factored ontic space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Factor {
    pub name: String,
    pub labels: Vec<String>,
    /// Relational variables hidden from local measurements.
    pub inaccessible: bool,
}

impl Factor {
    pub fn new<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> Self {
        Factor {
            name: name.into(),
            labels: labels.into_iter().map(Into::into).collect(),
            inaccessible: false,
        }
    }

    pub fn inaccessible(mut self) -> Self {
        self.inaccessible = true;
        self
    }
}

/// Cartesian product of finite label sets. Points are indexed in mixed radix
/// with the first factor varying slowest, so index order is lexicographic by
/// factor and then by label position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OnticSpace {
    factors: Vec<Factor>,
    strides: Vec<usize>,
    size: usize,
}

impl OnticSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|f| f.labels.is_empty()) {
            return Err(Error::EmptySpace);
        }
        for (i, f) in factors.iter().enumerate() {
            if factors[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::DuplicateFactor(f.name.clone()));
            }
            for (j, label) in f.labels.iter().enumerate() {
                if label.is_empty() || label.contains(|c: char| c == ',' || c.is_whitespace()) {
                    return Err(Error::InvalidPoint {
                        point: label.clone(),
                        reason: "labels must be non-empty and free of commas and whitespace".into(),
                    });
                }
                if f.labels[..j].contains(label) {
                    return Err(Error::DuplicateLabel {
                        factor: f.name.clone(),
                        label: label.clone(),
                    });
                }
            }
        }
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].labels.len();
        }
        let size = strides[0] * factors[0].labels.len();
        Ok(OnticSpace {
            factors,
            strides,
            size,
        })
    }

    pub fn shared(factors: Vec<Factor>) -> Result<Arc<Self>> {
        OnticSpace::new(factors).map(Arc::new)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn factor_index(&self, name: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    pub fn inaccessible_factors(&self) -> Vec<&str> {
        self.factors
            .iter()
            .filter(|f| f.inaccessible)
            .map(|f| f.name.as_str())
            .collect()
    }

    /// Label positions of a point, one per factor.
    pub fn coords(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.size);
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(f, stride)| (index / stride) % f.labels.len())
            .collect()
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    /// Comma-joined labels, e.g. `HH,TH,1`.
    pub fn point_label(&self, index: usize) -> String {
        self.coords(index)
            .iter()
            .zip(&self.factors)
            .map(|(&c, f)| f.labels[c].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_point(&self, text: &str) -> Result<usize> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != self.factors.len() {
            return Err(Error::InvalidPoint {
                point: text.to_string(),
                reason: format!("expected {} coordinates, found {}", self.factors.len(), parts.len()),
            });
        }
        let coords = parts
            .iter()
            .zip(&self.factors)
            .map(|(part, f)| {
                f.labels.iter().position(|l| l == part).ok_or_else(|| Error::InvalidPoint {
                    point: text.to_string(),
                    reason: format!("unknown label `{part}` for factor `{}`", f.name),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.index_of(&coords))
    }
}

/// A distribution μ over Λ, stored sparsely (absent points carry weight 0).
/// Construction does not require normalization; see [`validate_epistemic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicState {
    space: Arc<OnticSpace>,
    weights: BTreeMap<usize, QSqrt2>,
}

impl EpistemicState {
    pub fn new(space: Arc<OnticSpace>, entries: impl IntoIterator<Item = (usize, QSqrt2)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (index, w) in entries {
            if index >= space.size() {
                return Err(Error::InvalidPoint {
                    point: index.to_string(),
                    reason: format!("index out of range for a space of {} points", space.size()),
                });
            }
            if weights.insert(index, w).is_some() {
                return Err(Error::DuplicatePoint {
                    point: space.point_label(index),
                    context: "epistemic state".into(),
                });
            }
        }
        weights.retain(|_, w| !w.is_zero());
        Ok(EpistemicState { space, weights })
    }

    /// Entries keyed by point labels such as `HH,HT,1`.
    pub fn from_labels<'a>(
        space: Arc<OnticSpace>,
        entries: impl IntoIterator<Item = (&'a str, QSqrt2)>,
    ) -> Result<Self> {
        let indexed = entries
            .into_iter()
            .map(|(label, w)| Ok((space.parse_point(label)?, w)))
            .collect::<Result<Vec<_>>>()?;
        EpistemicState::new(space, indexed)
    }

    pub fn point_mass(space: Arc<OnticSpace>, index: usize) -> Result<Self> {
        EpistemicState::new(space, [(index, QSqrt2::one())])
    }

    pub fn space(&self) -> &Arc<OnticSpace> {
        &self.space
    }

    pub fn weight(&self, index: usize) -> QSqrt2 {
        self.weights.get(&index).cloned().unwrap_or_default()
    }

    /// Non-zero entries in canonical point order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &QSqrt2)> {
        self.weights.iter().map(|(&i, w)| (i, w))
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn total(&self) -> QSqrt2 {
        self.weights.values().sum()
    }
}

impl fmt::Display for EpistemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support()
            .map(|(i, w)| format!("({}) -> {}", self.space.point_label(i), w))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The conditional outcome table ξ_k(λ), dense over Λ.
#[derive(Clone, Debug)]
pub struct ResponseFunctions {
    space: Arc<OnticSpace>,
    /// `table[k][λ]`
    table: Vec<Vec<QSqrt2>>,
    filler: QSqrt2,
}

impl PartialEq for ResponseFunctions {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.table == other.table
    }
}

impl Eq for ResponseFunctions {}

impl ResponseFunctions {
    /// Dense table indexed `[outcome][point]`.
    pub fn from_table(space: Arc<OnticSpace>, table: Vec<Vec<QSqrt2>>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::OutcomeOutOfRange { outcome: 0, count: 0 });
        }
        if let Some(row) = table.iter().find(|row| row.len() != space.size()) {
            return Err(Error::DimensionMismatch {
                expected: space.size(),
                found: row.len(),
            });
        }
        Ok(ResponseFunctions {
            space,
            table,
            filler: QSqrt2::zero(),
        })
    }

    /// Sparse entries `(outcome, point, value)` with zero-based outcomes.
    /// A point listed for some outcome takes 0 on its unlisted outcomes; a
    /// point listed nowhere takes `filler` on every outcome.
    pub fn with_filler(
        space: Arc<OnticSpace>,
        outcomes: usize,
        filler: QSqrt2,
        entries: impl IntoIterator<Item = (usize, usize, QSqrt2)>,
    ) -> Result<Self> {
        if outcomes == 0 {
            return Err(Error::OutcomeOutOfRange { outcome: 0, count: 0 });
        }
        let n = space.size();
        let mut listed: Vec<Vec<Option<QSqrt2>>> = vec![vec![None; n]; outcomes];
        for (k, index, value) in entries {
            if k >= outcomes {
                return Err(Error::OutcomeOutOfRange {
                    outcome: k + 1,
                    count: outcomes,
                });
            }
            if index >= n {
                return Err(Error::InvalidPoint {
                    point: index.to_string(),
                    reason: format!("index out of range for a space of {n} points"),
                });
            }
            if listed[k][index].replace(value).is_some() {
                return Err(Error::DuplicatePoint {
                    point: space.point_label(index),
                    context: format!("response function for outcome {}", k + 1),
                });
            }
        }
        let mut table = vec![vec![QSqrt2::zero(); n]; outcomes];
        for index in 0..n {
            let mentioned = (0..outcomes).any(|k| listed[k][index].is_some());
            for k in 0..outcomes {
                table[k][index] = match listed[k][index].take() {
                    Some(v) => v,
                    None if mentioned => QSqrt2::zero(),
                    None => filler.clone(),
                };
            }
        }
        Ok(ResponseFunctions { space, table, filler })
    }

    /// Outcome `choice(λ)` with certainty at every point.
    pub fn deterministic(
        space: Arc<OnticSpace>,
        outcomes: usize,
        choice: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let n = space.size();
        let mut table = vec![vec![QSqrt2::zero(); n]; outcomes];
        for index in 0..n {
            let k = choice(index);
            if k >= outcomes {
                return Err(Error::OutcomeOutOfRange {
                    outcome: k + 1,
                    count: outcomes,
                });
            }
            table[k][index] = QSqrt2::one();
        }
        ResponseFunctions::from_table(space, table)
    }

    pub fn space(&self) -> &Arc<OnticSpace> {
        &self.space
    }

    pub fn outcome_count(&self) -> usize {
        self.table.len()
    }

    /// ξ_k(λ) with zero-based `k`.
    pub fn value(&self, outcome: usize, index: usize) -> &QSqrt2 {
        &self.table[outcome][index]
    }

    pub fn table(&self) -> &[Vec<QSqrt2>] {
        &self.table
    }

    /// The value declared for points that no outcome lists explicitly.
    pub fn filler(&self) -> &QSqrt2 {
        &self.filler
    }

    pub fn set_filler(&mut self, filler: QSqrt2) {
        self.filler = filler;
    }

    /// The outcome distribution at one point.
    pub fn column(&self, index: usize) -> Vec<QSqrt2> {
        self.table.iter().map(|row| row[index].clone()).collect()
    }
}

/// The triplet (Λ, {μ}, {ξ}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OntologicalModel {
    space: Arc<OnticSpace>,
    preparations: IndexMap<String, EpistemicState>,
    measurements: IndexMap<String, ResponseFunctions>,
}

impl OntologicalModel {
    pub fn new(space: Arc<OnticSpace>) -> Self {
        OntologicalModel {
            space,
            preparations: IndexMap::new(),
            measurements: IndexMap::new(),
        }
    }

    pub fn add_preparation(&mut self, label: impl Into<String>, state: EpistemicState) -> Result<()> {
        let label = label.into();
        if *state.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if self.preparations.contains_key(&label) {
            return Err(Error::DuplicateName(label));
        }
        self.preparations.insert(label, state);
        Ok(())
    }

    pub fn add_measurement(&mut self, label: impl Into<String>, xi: ResponseFunctions) -> Result<()> {
        let label = label.into();
        if *xi.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if self.measurements.contains_key(&label) {
            return Err(Error::DuplicateName(label));
        }
        self.measurements.insert(label, xi);
        Ok(())
    }

    /// The same model on a space whose inaccessible factors are exactly
    /// `names`.
    pub fn with_inaccessible(&self, names: &[&str]) -> Result<OntologicalModel> {
        for name in names {
            self.space.factor_index(name)?;
        }
        let factors = self
            .space
            .factors()
            .iter()
            .map(|f| Factor {
                inaccessible: names.contains(&f.name.as_str()),
                ..f.clone()
            })
            .collect();
        let space = OnticSpace::shared(factors)?;
        let mut model = OntologicalModel::new(space.clone());
        for (label, mu) in &self.preparations {
            let moved = EpistemicState::new(space.clone(), mu.support().map(|(i, w)| (i, w.clone())))?;
            model.add_preparation(label.clone(), moved)?;
        }
        for (label, xi) in &self.measurements {
            let mut moved = ResponseFunctions::from_table(space.clone(), xi.table.clone())?;
            moved.set_filler(xi.filler.clone());
            model.add_measurement(label.clone(), moved)?;
        }
        Ok(model)
    }

    pub fn space(&self) -> &Arc<OnticSpace> {
        &self.space
    }

    pub fn preparations(&self) -> &IndexMap<String, EpistemicState> {
        &self.preparations
    }

    pub fn measurements(&self) -> &IndexMap<String, ResponseFunctions> {
        &self.measurements
    }

    pub fn preparation(&self, label: &str) -> Result<&EpistemicState> {
        self.preparations
            .get(label)
            .ok_or_else(|| Error::UnknownPreparation(label.to_string()))
    }

    pub fn measurement(&self, label: &str) -> Result<&ResponseFunctions> {
        self.measurements
            .get(label)
            .ok_or_else(|| Error::UnknownMeasurement(label.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpistemicValidation {
    pub valid: bool,
    pub total: QSqrt2,
    /// `1 - total`.
    pub deficit: QSqrt2,
    /// Points whose weight lies outside `[0, 1]`.
    pub out_of_range: Vec<String>,
}

pub fn validate_epistemic(mu: &EpistemicState) -> EpistemicValidation {
    let total = mu.total();
    let out_of_range: Vec<String> = mu
        .support()
        .filter(|(_, w)| Probability::new((*w).clone()).is_err())
        .map(|(i, _)| mu.space.point_label(i))
        .collect();
    let deficit = QSqrt2::one() - &total;
    EpistemicValidation {
        valid: deficit.is_zero() && out_of_range.is_empty(),
        total,
        deficit,
        out_of_range,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSum {
    pub point: String,
    pub sum: QSqrt2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResponseValidation {
    pub valid: bool,
    pub points_checked: usize,
    /// Points where `Σ_k ξ_k(λ) ≠ 1`.
    pub violations: Vec<PointSum>,
    /// `(outcome, point)` entries outside `[0, 1]`, outcomes one-based.
    pub out_of_range: Vec<(usize, String)>,
}

pub fn validate_responses(xi: &ResponseFunctions) -> ResponseValidation {
    let n = xi.space.size();
    let mut violations = Vec::new();
    let mut out_of_range = Vec::new();
    for index in 0..n {
        let sum: QSqrt2 = xi.table.iter().map(|row| &row[index]).sum();
        if !sum.is_one() {
            violations.push(PointSum {
                point: xi.space.point_label(index),
                sum,
            });
        }
        for (k, row) in xi.table.iter().enumerate() {
            if Probability::new(row[index].clone()).is_err() {
                out_of_range.push((k + 1, xi.space.point_label(index)));
            }
        }
    }
    ResponseValidation {
        valid: violations.is_empty() && out_of_range.is_empty(),
        points_checked: n,
        violations,
        out_of_range,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelValidation {
    pub preparations: Vec<(String, EpistemicValidation)>,
    pub measurements: Vec<(String, ResponseValidation)>,
}

impl ModelValidation {
    pub fn valid(&self) -> bool {
        self.preparations.iter().all(|(_, v)| v.valid) && self.measurements.iter().all(|(_, v)| v.valid)
    }

    /// First failing component, named for error reporting.
    pub fn first_failure(&self) -> Option<String> {
        if let Some((label, v)) = self.preparations.iter().find(|(_, v)| !v.valid) {
            return Some(if v.out_of_range.is_empty() {
                format!("preparation `{label}` sums to {} (deficit {})", v.total, v.deficit)
            } else {
                format!("preparation `{label}` has weights outside [0,1] at {}", v.out_of_range.join("; "))
            });
        }
        self.measurements.iter().find(|(_, v)| !v.valid).map(|(label, v)| {
            match v.violations.first() {
                Some(p) => format!(
                    "measurement `{label}`: outcomes at ({}) sum to {}",
                    p.point, p.sum
                ),
                None => format!("measurement `{label}` has values outside [0,1]"),
            }
        })
    }
}

pub fn validate_model(model: &OntologicalModel) -> ModelValidation {
    ModelValidation {
        preparations: model
            .preparations
            .iter()
            .map(|(l, mu)| (l.clone(), validate_epistemic(mu)))
            .collect(),
        measurements: model
            .measurements
            .iter()
            .map(|(l, xi)| (l.clone(), validate_responses(xi)))
            .collect(),
    }
}

/// Law of total probability: `Pr(k) = Σ_λ ξ_k(λ) μ(λ)`.
pub fn predict(mu: &EpistemicState, xi: &ResponseFunctions) -> Result<Vec<QSqrt2>> {
    if mu.space != xi.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(xi
        .table
        .iter()
        .map(|row| mu.support().map(|(i, w)| &row[i] * w).sum())
        .collect())
}

pub fn predicted_statistics(model: &OntologicalModel, prep: &str, meas: &str) -> Result<Vec<QSqrt2>> {
    predict(model.preparation(prep)?, model.measurement(meas)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionCell {
    pub preparation: String,
    pub measurement: String,
    /// One-based.
    pub outcome: usize,
    pub predicted: QSqrt2,
    pub target: QSqrt2,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionReport {
    pub cells: Vec<PredictionCell>,
}

impl PredictionReport {
    pub fn all_match(&self) -> bool {
        self.cells.iter().all(|c| c.matches)
    }

    pub fn matching(&self) -> usize {
        self.cells.iter().filter(|c| c.matches).count()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &PredictionCell> {
        self.cells.iter().filter(|c| !c.matches)
    }
}

/// Exact comparison of model predictions with the Born rule for every
/// (preparation, measurement) pair.
pub fn check_born_agreement(
    model: &OntologicalModel,
    states: &[(&str, &StateVector)],
    bases: &[(&str, &MeasurementBasis)],
) -> Result<PredictionReport> {
    let mut cells = Vec::new();
    for (meas, basis) in bases {
        let xi = model.measurement(meas)?;
        if xi.outcome_count() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: xi.outcome_count(),
            });
        }
        for (prep, state) in states {
            let predicted = predicted_statistics(model, prep, meas)?;
            let born = born_probabilities(state, basis)?;
            for (k, (p, t)) in predicted.into_iter().zip(born).enumerate() {
                let target = t.into_value();
                cells.push(PredictionCell {
                    preparation: prep.to_string(),
                    measurement: meas.to_string(),
                    outcome: k + 1,
                    matches: p == target,
                    predicted: p,
                    target,
                });
            }
        }
    }
    Ok(PredictionReport { cells })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiEpistemicVerdict {
    pub psi_epistemic: bool,
    pub overlap: Probability,
    /// Points where both distributions are positive.
    pub region: Vec<String>,
}

/// Whether a pair of epistemic states for non-orthogonal quantum states
/// overlaps on a set of non-zero measure.
pub fn is_psi_epistemic(
    mu: &EpistemicState,
    nu: &EpistemicState,
    states_nonorthogonal: bool,
) -> Result<PsiEpistemicVerdict> {
    let overlap = classical_overlap(mu, nu)?;
    let region = mu
        .support()
        .filter(|(i, w)| w.sign() > 0 && nu.weight(*i).sign() > 0)
        .map(|(i, _)| mu.space.point_label(i))
        .collect();
    Ok(PsiEpistemicVerdict {
        psi_epistemic: states_nonorthogonal && overlap.value().sign() > 0,
        overlap,
        region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    fn coin_space() -> Arc<OnticSpace> {
        OnticSpace::shared(vec![Factor::new("L", ["HH", "HT", "TH", "TT"])]).unwrap()
    }

    #[test]
    fn mixed_radix_indexing() {
        let space = OnticSpace::new(vec![
            Factor::new("A", ["a", "b"]),
            Factor::new("B", ["x", "y", "z"]),
            Factor::new("S", ["1", "2"]).inaccessible(),
        ])
        .unwrap();
        assert_eq!(space.size(), 12);
        assert_eq!(space.point_label(0), "a,x,1");
        assert_eq!(space.point_label(1), "a,x,2");
        assert_eq!(space.point_label(2), "a,y,1");
        assert_eq!(space.point_label(11), "b,z,2");
        for i in 0..12 {
            assert_eq!(space.parse_point(&space.point_label(i)).unwrap(), i);
            assert_eq!(space.index_of(&space.coords(i)), i);
        }
        assert_eq!(space.inaccessible_factors(), vec!["S"]);
        assert!(space.parse_point("a,x").is_err());
        assert!(space.parse_point("a,w,1").is_err());
    }

    #[test]
    fn space_rejects_bad_factors() {
        assert_eq!(OnticSpace::new(vec![]), Err(Error::EmptySpace));
        assert!(matches!(
            OnticSpace::new(vec![Factor::new("A", ["x"]), Factor::new("A", ["y"])]),
            Err(Error::DuplicateFactor(_))
        ));
        assert!(matches!(
            OnticSpace::new(vec![Factor::new("A", ["x", "x"])]),
            Err(Error::DuplicateLabel { .. })
        ));
        assert!(OnticSpace::new(vec![Factor::new("A", ["x,y"])]).is_err());
    }

    #[test]
    fn epistemic_validation() {
        let space = coin_space();
        let nu0 = EpistemicState::from_labels(space.clone(), [("HH", q("1/2")), ("HT", q("1/2"))]).unwrap();
        assert!(validate_epistemic(&nu0).valid);
        assert!(validate_epistemic(&EpistemicState::point_mass(space.clone(), 3).unwrap()).valid);

        let bad = EpistemicState::from_labels(space.clone(), [("HH", q("1/2")), ("HT", q("1/3"))]).unwrap();
        let v = validate_epistemic(&bad);
        assert!(!v.valid);
        assert_eq!(v.deficit, q("1/6"));

        let negative =
            EpistemicState::from_labels(space.clone(), [("HH", q("3/2")), ("HT", q("-1/2"))]).unwrap();
        let v = validate_epistemic(&negative);
        assert!(!v.valid);
        assert_eq!(v.out_of_range.len(), 2);

        assert!(matches!(
            EpistemicState::from_labels(space, [("HH", q("1/2")), ("HH", q("1/2"))]),
            Err(Error::DuplicatePoint { .. })
        ));
    }

    #[test]
    fn response_validation() {
        let space = coin_space();
        let zeros = ResponseFunctions::from_table(space.clone(), vec![vec![QSqrt2::zero(); 4]; 2]).unwrap();
        let v = validate_responses(&zeros);
        assert!(!v.valid);
        assert_eq!(v.violations.len(), 4);

        let det = ResponseFunctions::deterministic(space.clone(), 3, |i| i % 3).unwrap();
        assert!(validate_responses(&det).valid);

        let filled = ResponseFunctions::with_filler(space, 2, q("1/2"), [(0, 0, QSqrt2::one())]).unwrap();
        assert!(validate_responses(&filled).valid);
        assert_eq!(filled.column(0), vec![QSqrt2::one(), QSqrt2::zero()]);
        assert_eq!(filled.column(2), vec![q("1/2"), q("1/2")]);
    }

    #[test]
    fn point_mass_with_deterministic_response() {
        let space = coin_space();
        let mut model = OntologicalModel::new(space.clone());
        model
            .add_preparation("delta", EpistemicState::point_mass(space.clone(), 2).unwrap())
            .unwrap();
        model
            .add_measurement("D", ResponseFunctions::deterministic(space.clone(), 3, |i| i % 3).unwrap())
            .unwrap();
        let stats = predicted_statistics(&model, "delta", "D").unwrap();
        assert_eq!(stats, vec![QSqrt2::zero(), QSqrt2::zero(), QSqrt2::one()]);
        assert_eq!(
            predicted_statistics(&model, "nope", "D"),
            Err(Error::UnknownPreparation("nope".into()))
        );
        assert_eq!(
            predicted_statistics(&model, "delta", "nope"),
            Err(Error::UnknownMeasurement("nope".into()))
        );
        let other = coin_space();
        let foreign = OnticSpace::shared(vec![Factor::new("X", ["a"])]).unwrap();
        assert!(model
            .add_preparation("x", EpistemicState::point_mass(foreign, 0).unwrap())
            .is_err());
        // Structurally equal spaces are the same space.
        assert!(model
            .add_preparation("y", EpistemicState::point_mass(other, 0).unwrap())
            .is_ok());
    }

    #[test]
    fn trivial_model_matches_born_rule() {
        // Λ = {ψ}, μ = δ, and ξ the Born probabilities of the single state.
        let space = OnticSpace::shared(vec![Factor::new("psi", ["0"])]).unwrap();
        let mut model = OntologicalModel::new(space.clone());
        model
            .add_preparation("zero", EpistemicState::point_mass(space.clone(), 0).unwrap())
            .unwrap();
        model
            .add_measurement(
                "X",
                ResponseFunctions::from_table(space, vec![vec![q("1/2")], vec![q("1/2")]]).unwrap(),
            )
            .unwrap();
        let x_basis = MeasurementBasis::new(vec![
            StateVector::named("+").unwrap(),
            StateVector::named("-").unwrap(),
        ])
        .unwrap();
        let zero = StateVector::named("0").unwrap();
        let report = check_born_agreement(&model, &[("zero", &zero)], &[("X", &x_basis)]).unwrap();
        assert!(report.all_match());
        assert_eq!(report.cells.len(), 2);

        let four = MeasurementBasis::computational(4);
        assert!(matches!(
            check_born_agreement(&model, &[("zero", &zero)], &[("X", &four)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn disjoint_point_masses_are_not_psi_epistemic() {
        let space = coin_space();
        let a = EpistemicState::point_mass(space.clone(), 0).unwrap();
        let b = EpistemicState::point_mass(space, 1).unwrap();
        let v = is_psi_epistemic(&a, &b, true).unwrap();
        assert!(!v.psi_epistemic);
        assert!(v.region.is_empty());
        let same = is_psi_epistemic(&a, &a, false).unwrap();
        assert!(!same.psi_epistemic, "orthogonality flag must be honored");
    }
}
