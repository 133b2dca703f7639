//! Built-in objects: the two-qubit antidistinguishing scenario over the
//! states |0⟩ and |+⟩, the non-local toy hidden-variable model reproducing
//! it, and the model's restriction to local variables.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{born_probabilities, inner_product, tensor_product, Amplitude, MeasurementBasis, StateVector};
use crate::independence::{marginalize, FactorSelection};
use crate::numerics::{Probability, QSqrt2};
use crate::ontology::{EpistemicState, Factor, OntologicalModel, OnticSpace, ResponseFunctions};
use crate::synthesis::SynthesisSpec;

/// Single-system state labels, in product order.
pub const SUBSYSTEM_LABELS: [&str; 2] = ["0", "+"];

/// Product state labels; outcome `k` of the measurement is the one that
/// never fires on the `k`-th of these.
pub const PRODUCT_LABELS: [&str; 4] = ["00", "0+", "+0", "++"];

/// Preparation labels of the toy model, aligned with [`PRODUCT_LABELS`].
pub const TOY_PREPARATIONS: [&str; 4] = ["nu00", "nu0+", "nu+0", "nu++"];

pub const TOY_MEASUREMENT: &str = "M";

/// Diagonal cells `(preparation, outcome)` that quantum theory forbids.
pub const FORBIDDEN_CELLS: [(usize, usize); 4] = [(0, 0), (1, 1), (2, 2), (3, 3)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PbrScenario {
    pub subsystem_states: Vec<(String, StateVector)>,
    pub product_states: Vec<(String, StateVector)>,
    pub basis: MeasurementBasis,
    /// `born_table[state][outcome]`
    pub born_table: Vec<Vec<Probability>>,
}

impl PbrScenario {
    pub fn state(&self, label: &str) -> Option<&StateVector> {
        self.product_states
            .iter()
            .chain(&self.subsystem_states)
            .find(|(l, _)| l == label)
            .map(|(_, s)| s)
    }

    /// `(ξ_{ab}, |ab⟩)` inner products for the four product states.
    pub fn diagonal_overlaps(&self) -> Vec<Amplitude> {
        self.product_states
            .iter()
            .zip(self.basis.outcomes())
            .map(|((_, s), xi)| inner_product(xi, s).expect("dimension 4"))
            .collect()
    }
}

fn named(label: &str) -> StateVector {
    StateVector::from_label(label).expect("built-in label")
}

fn entangled(pairs: [(&str, &str); 2]) -> StateVector {
    // (|a b⟩ + |c d⟩)/√2
    let first = tensor_product(&named(pairs[0].0), &named(pairs[0].1));
    let second = tensor_product(&named(pairs[1].0), &named(pairs[1].1));
    let h = Amplitude::real(QSqrt2::inv_sqrt2());
    let amplitudes = first
        .amplitudes()
        .iter()
        .zip(second.amplitudes())
        .map(|(x, y)| &h * &(x + y))
        .collect();
    StateVector::new(amplitudes).expect("orthogonal components")
}

/// The antidistinguishing basis
/// `(|01⟩+|10⟩)/√2, (|0−⟩+|1+⟩)/√2, (|+1⟩+|−0⟩)/√2, (|+−⟩+|−+⟩)/√2`.
pub fn pbr_basis() -> MeasurementBasis {
    MeasurementBasis::new(vec![
        entangled([("0", "1"), ("1", "0")]),
        entangled([("0", "-"), ("1", "+")]),
        entangled([("+", "1"), ("-", "0")]),
        entangled([("+", "-"), ("-", "+")]),
    ])
    .expect("orthonormal by construction")
}

pub fn build_pbr_quantum_scenario() -> PbrScenario {
    let basis = pbr_basis();
    let product_states: Vec<(String, StateVector)> =
        PRODUCT_LABELS.iter().map(|l| (l.to_string(), named(l))).collect();
    let born_table = product_states
        .iter()
        .map(|(_, s)| born_probabilities(s, &basis).expect("dimension 4"))
        .collect();
    PbrScenario {
        subsystem_states: SUBSYSTEM_LABELS.iter().map(|l| (l.to_string(), named(l))).collect(),
        product_states,
        basis,
        born_table,
    }
}

const COIN_LABELS: [&str; 4] = ["HH", "HT", "TH", "TT"];

/// `{H,T}²`, the ontic space of one system.
pub fn subsystem_space(name: &str) -> Arc<OnticSpace> {
    OnticSpace::shared(vec![Factor::new(name, COIN_LABELS)]).expect("static space")
}

/// `{H,T}² × {H,T}² × {1,2}` with the relational bit `Ls` inaccessible.
pub fn toy_space() -> Arc<OnticSpace> {
    OnticSpace::shared(vec![
        Factor::new("L1", COIN_LABELS),
        Factor::new("L2", COIN_LABELS),
        Factor::new("Ls", ["1", "2"]).inaccessible(),
    ])
    .expect("static space")
}

fn uniform(space: &Arc<OnticSpace>, points: &[&str]) -> EpistemicState {
    let w = QSqrt2::ratio(1, points.len() as i64);
    EpistemicState::from_labels(space.clone(), points.iter().map(|p| (*p, w.clone()))).expect("static table")
}

/// `ν_0` (support HH, HT) and `ν_+` (support HH, TH) on the factor `name`.
pub fn subsystem_states(name: &str) -> (EpistemicState, EpistemicState) {
    let space = subsystem_space(name);
    (uniform(&space, &["HH", "HT"]), uniform(&space, &["HH", "TH"]))
}

/// A model holding only `nu0` and `nu+` on a single `{H,T}²` factor.
pub fn toy_subsystem_model() -> OntologicalModel {
    let (nu0, nu_plus) = subsystem_states("L");
    let mut model = OntologicalModel::new(nu0.space().clone());
    model.add_preparation("nu0", nu0).expect("fresh label");
    model.add_preparation("nu+", nu_plus).expect("fresh label");
    model
}

/// Local states for each toy preparation, as `(ν_a on L1, ν_b on L2)`.
pub fn toy_local_states() -> Vec<(EpistemicState, EpistemicState)> {
    let (a0, ap) = subsystem_states("L1");
    let (b0, bp) = subsystem_states("L2");
    vec![
        (a0.clone(), b0.clone()),
        (a0, bp.clone()),
        (ap.clone(), b0),
        (ap, bp),
    ]
}

pub fn build_toy_nlhv_model() -> OntologicalModel {
    let space = toy_space();
    let mut model = OntologicalModel::new(space.clone());
    // The relational bit is 2 only when both systems show HH and were
    // prepared differently.
    let preparations: [[&str; 4]; 4] = [
        ["HH,HH,1", "HT,HH,1", "HH,HT,1", "HT,HT,1"],
        ["HH,HH,2", "HT,HH,1", "HH,TH,1", "HT,TH,1"],
        ["HH,HH,2", "HH,HT,1", "TH,HH,1", "TH,HT,1"],
        ["HH,HH,1", "HH,TH,1", "TH,HH,1", "TH,TH,1"],
    ];
    for (label, points) in TOY_PREPARATIONS.iter().zip(&preparations) {
        model.add_preparation(*label, uniform(&space, points)).expect("fresh label");
    }

    let halves: [[&str; 3]; 4] = [
        ["HH,HH,2", "HH,TH,1", "TH,HH,1"],
        ["HH,HH,1", "HH,HT,1", "TH,HH,1"],
        ["HH,HH,1", "HT,HH,1", "HH,TH,1"],
        ["HH,HH,2", "HT,HH,1", "HH,HT,1"],
    ];
    let certain: [&str; 4] = ["TH,TH,1", "TH,HT,1", "HT,TH,1", "HT,HT,1"];
    let mut entries = Vec::new();
    for k in 0..4 {
        for p in halves[k] {
            entries.push((k, space.parse_point(p).expect("static point"), QSqrt2::ratio(1, 2)));
        }
        entries.push((k, space.parse_point(certain[k]).expect("static point"), QSqrt2::ratio(1, 1)));
    }
    let xi = ResponseFunctions::with_filler(space, 4, QSqrt2::ratio(1, 4), entries).expect("static table");
    model.add_measurement(TOY_MEASUREMENT, xi).expect("fresh label");
    model
}

/// Marginalizes every preparation over the space's inaccessible factors.
/// The result carries no measurements.
pub fn build_lhv_restriction(model: &OntologicalModel) -> Result<OntologicalModel> {
    let hidden = model.space().inaccessible_factors();
    if hidden.is_empty() {
        return Err(Error::NoInaccessibleFactor);
    }
    let keep = FactorSelection::new(hidden)?.complement(model.space())?;
    let mut restricted: Option<OntologicalModel> = None;
    for (label, joint) in model.preparations() {
        let marginal = marginalize(joint, &keep)?;
        let target = restricted.get_or_insert_with(|| OntologicalModel::new(marginal.space().clone()));
        target.add_preparation(label.clone(), marginal)?;
    }
    match restricted {
        Some(m) => Ok(m),
        None => {
            let sub = OnticSpace::shared(
                model
                    .space()
                    .factors()
                    .iter()
                    .filter(|f| !f.inaccessible)
                    .cloned()
                    .collect(),
            )?;
            Ok(OntologicalModel::new(sub))
        }
    }
}

/// Quantum state label for a preparation label: the longest suffix made of
/// `0`, `1`, `+`, `-`, e.g. `nu0+` → `0+`.
pub fn state_label_for(prep: &str) -> Option<&str> {
    let start = prep
        .char_indices()
        .rev()
        .take_while(|(_, c)| matches!(c, '0' | '1' | '+' | '-'))
        .last()
        .map(|(i, _)| i)?;
    Some(&prep[start..])
}

/// Born table rows for the model's preparations, matched to product states
/// through [`state_label_for`], measured in [`pbr_basis`].
pub fn pbr_targets(model: &OntologicalModel) -> Result<Vec<(String, Vec<QSqrt2>)>> {
    let basis = pbr_basis();
    model
        .preparations()
        .keys()
        .map(|label| {
            let state = state_label_for(label)
                .and_then(|s| StateVector::from_label(s).ok())
                .filter(|s| s.dim() == basis.dim())
                .ok_or_else(|| Error::UnknownState(format!("no two-qubit state for preparation `{label}`")))?;
            let row = born_probabilities(&state, &basis)?
                .into_iter()
                .map(Probability::into_value)
                .collect();
            Ok((label.clone(), row))
        })
        .collect()
}

/// Forbidden `(preparation, outcome)` cells: every zero in the Born table.
pub fn forbidden_cells(targets: &[(String, Vec<QSqrt2>)]) -> Vec<(usize, usize)> {
    targets
        .iter()
        .enumerate()
        .flat_map(|(i, (_, row))| {
            row.iter()
                .enumerate()
                .filter(|(_, p)| p.is_zero())
                .map(move |(k, _)| (i, k))
        })
        .collect()
}

/// Synthesis spec asking for response functions that reproduce the full
/// Born table of the antidistinguishing measurement.
pub fn pbr_synthesis_spec(model: &OntologicalModel) -> Result<SynthesisSpec> {
    let targets = pbr_targets(model)?;
    let preps = model.preparations().iter().map(|(l, s)| (l.clone(), s.clone())).collect();
    SynthesisSpec::with_targets(model.space().clone(), preps, 4, targets.into_iter().map(|(_, r)| r).collect())
}

/// Synthesis spec constraining only the forbidden (zero-probability) cells.
pub fn pbr_zero_spec(model: &OntologicalModel) -> Result<(SynthesisSpec, Vec<(usize, usize)>)> {
    let targets = pbr_targets(model)?;
    let forbidden = forbidden_cells(&targets);
    let preps = model.preparations().iter().map(|(l, s)| (l.clone(), s.clone())).collect();
    let spec = SynthesisSpec::forbidden_zeros(model.space().clone(), preps, 4, &forbidden)?;
    Ok((spec, forbidden))
}
