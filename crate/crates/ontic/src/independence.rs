//! Composition and marginalization of epistemic states over factored ontic
//! spaces, and exact checks for product structure: preparation independence
//! on Λ₁×Λ₂, local (marginal) independence on Λ₁×Λ₂×Λ_s, full independence
//! across every factor, classical overlap, and Bell factorizability of joint
//! response functions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Probability, QSqrt2};
use crate::ontology::{EpistemicState, OntologicalModel, OnticSpace};

/// A non-empty set of factor names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSelection {
    names: Vec<String>,
}

impl FactorSelection {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.dedup();
        if names.is_empty() {
            return Err(Error::EmptySelection);
        }
        Ok(FactorSelection { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Factor positions in space order.
    pub fn resolve(&self, space: &OnticSpace) -> Result<Vec<usize>> {
        let mut idx = self
            .names
            .iter()
            .map(|n| space.factor_index(n))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    /// All factors of `space` except those in `self`.
    pub fn complement(&self, space: &OnticSpace) -> Result<FactorSelection> {
        self.resolve(space)?;
        FactorSelection::new(
            space
                .factors()
                .iter()
                .filter(|f| !self.contains(&f.name))
                .map(|f| f.name.clone()),
        )
    }
}

/// `(μ × ν)(λ₁, λ₂) = μ(λ₁) ν(λ₂)` on the concatenated space.
pub fn product_state(mu: &EpistemicState, nu: &EpistemicState) -> Result<EpistemicState> {
    let factors = mu
        .space()
        .factors()
        .iter()
        .chain(nu.space().factors())
        .cloned()
        .collect();
    let space = OnticSpace::shared(factors)?;
    let stride = nu.space().size();
    let entries: Vec<_> = mu
        .support()
        .flat_map(|(i, a)| nu.support().map(move |(j, b)| (i * stride + j, a * b)))
        .collect();
    EpistemicState::new(space, entries)
}

/// Sums out every factor not in `keep`. The result lives on the space made
/// of the kept factors, in their original order.
pub fn marginalize(joint: &EpistemicState, keep: &FactorSelection) -> Result<EpistemicState> {
    let space = joint.space();
    let kept = keep.resolve(space)?;
    if kept.len() == space.factors().len() {
        return Ok(joint.clone());
    }
    let sub = OnticSpace::shared(kept.iter().map(|&i| space.factors()[i].clone()).collect())?;
    let mut acc: BTreeMap<usize, QSqrt2> = BTreeMap::new();
    for (index, w) in joint.support() {
        let coords = space.coords(index);
        let projected: Vec<usize> = kept.iter().map(|&i| coords[i]).collect();
        *acc.entry(sub.index_of(&projected)).or_default() += w;
    }
    EpistemicState::new(sub, acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub point: String,
    pub joint: QSqrt2,
    pub product: QSqrt2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductVerdict {
    pub holds: bool,
    /// First failing point of the joint's support in canonical order, else
    /// the first failing point of the product's.
    pub counterexample: Option<Counterexample>,
}

fn compare_states(joint: &EpistemicState, product: &EpistemicState) -> Result<ProductVerdict> {
    if joint.space() != product.space() {
        return Err(Error::SpaceMismatch);
    }
    // Points the joint actually occupies come first.
    let points = joint.support().map(|(i, _)| i).chain(product.support().map(|(i, _)| i));
    let counterexample = points.into_iter().find_map(|i| {
        let (j, p) = (joint.weight(i), product.weight(i));
        (j != p).then(|| Counterexample {
            point: joint.space().point_label(i),
            joint: j,
            product: p,
        })
    });
    Ok(ProductVerdict {
        holds: counterexample.is_none(),
        counterexample,
    })
}

/// `joint(λ₁, λ₂) = μ(λ₁) ν(λ₂)` at every point.
pub fn check_preparation_independence(
    joint: &EpistemicState,
    mu: &EpistemicState,
    nu: &EpistemicState,
) -> Result<ProductVerdict> {
    compare_states(joint, &product_state(mu, nu)?)
}

/// Product structure after summing out the `inaccessible` factors.
pub fn check_local_independence(
    joint: &EpistemicState,
    mu: &EpistemicState,
    nu: &EpistemicState,
    inaccessible: &FactorSelection,
) -> Result<ProductVerdict> {
    inaccessible.resolve(joint.space())?;
    for local in mu.space().factors().iter().chain(nu.space().factors()) {
        if inaccessible.contains(&local.name) {
            return Err(Error::InvalidSelection(format!(
                "factor `{}` belongs to a local system",
                local.name
            )));
        }
    }
    let keep = inaccessible.complement(joint.space())?;
    check_preparation_independence(&marginalize(joint, &keep)?, mu, nu)
}

/// Whether the joint is the product of all of its single-factor marginals.
/// Those marginals are the only possible factors, so no search is needed.
pub fn check_full_independence(joint: &EpistemicState) -> Result<ProductVerdict> {
    let space = joint.space();
    let mut factors = space.factors().iter();
    let first = factors.next().expect("spaces are non-empty");
    let mut product = marginalize(joint, &FactorSelection::new([first.name.clone()])?)?;
    for f in factors {
        let marginal = marginalize(joint, &FactorSelection::new([f.name.clone()])?)?;
        product = product_state(&product, &marginal)?;
    }
    compare_states(joint, &product)
}

/// `Σ_λ min(μ(λ), ν(λ))`.
pub fn classical_overlap(mu: &EpistemicState, nu: &EpistemicState) -> Result<Probability> {
    if mu.space() != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    let total: QSqrt2 = mu.support().map(|(i, w)| w.min(&nu.weight(i))).sum();
    Probability::new(total).map_err(|e| Error::NotNormalizedTable(format!("overlap: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointIndependence {
    pub preparation: String,
    /// Product form μ(λ₁)ν(λ₂) on the whole space; only meaningful, and
    /// only reported, when the space has no inaccessible factors.
    pub prep_independent: Option<bool>,
    pub locally_independent: bool,
    pub fully_independent: bool,
    pub witnesses: Vec<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapEntry {
    pub first: String,
    pub second: String,
    pub overlap: Probability,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub inaccessible: Vec<String>,
    pub joints: Vec<JointIndependence>,
    pub overlaps: Vec<OverlapEntry>,
}

impl IndependenceReport {
    pub fn all_locally_independent(&self) -> bool {
        self.joints.iter().all(|j| j.locally_independent)
    }
}

/// Local states `(label, μ, ν)` for a joint preparation.
pub type LocalPair<'a> = (&'a str, &'a EpistemicState, &'a EpistemicState);

/// Runs every independence check for the listed preparations of `model`
/// and collects all pairwise overlaps.
pub fn independence_report(
    model: &OntologicalModel,
    locals: &[LocalPair<'_>],
    inaccessible: Option<&FactorSelection>,
) -> Result<IndependenceReport> {
    let mut joints = Vec::new();
    for (label, mu, nu) in locals {
        let joint = model.preparation(label)?;
        let mut witnesses = Vec::new();
        let (prep_independent, local) = match inaccessible {
            Some(sel) => (None, check_local_independence(joint, mu, nu, sel)?),
            None => {
                let v = check_preparation_independence(joint, mu, nu)?;
                (Some(v.holds), v)
            }
        };
        let full = check_full_independence(joint)?;
        witnesses.extend(local.counterexample.clone());
        witnesses.extend(full.counterexample.clone());
        joints.push(JointIndependence {
            preparation: label.to_string(),
            prep_independent,
            locally_independent: local.holds,
            fully_independent: full.holds,
            witnesses,
        });
    }
    let labels: Vec<&String> = model.preparations().keys().collect();
    let mut overlaps = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            overlaps.push(OverlapEntry {
                first: a.to_string(),
                second: b.to_string(),
                overlap: classical_overlap(model.preparation(a)?, model.preparation(b)?)?,
            });
        }
    }
    Ok(IndependenceReport {
        inaccessible: inaccessible.map(|s| s.names().to_vec()).unwrap_or_default(),
        joints,
        overlaps,
    })
}

/// Marginals of `joint` on each of its two accessible factors, for use as
/// the local states when none are supplied.
pub fn own_local_marginals(
    joint: &EpistemicState,
    inaccessible: Option<&FactorSelection>,
) -> Result<(EpistemicState, EpistemicState)> {
    let space = joint.space();
    let accessible: Vec<&str> = space
        .factors()
        .iter()
        .filter(|f| inaccessible.is_none_or(|s| !s.contains(&f.name)))
        .map(|f| f.name.as_str())
        .collect();
    if accessible.len() != 2 {
        return Err(Error::InvalidSelection(format!(
            "expected two accessible factors, found {}",
            accessible.len()
        )));
    }
    Ok((
        marginalize(joint, &FactorSelection::new([accessible[0]])?)?,
        marginalize(joint, &FactorSelection::new([accessible[1]])?)?,
    ))
}

/// Joint response `ξ(k_A, k_B | λ, M_A, M_B)` for two parties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointResponseTable {
    points: usize,
    settings: (usize, usize),
    outcomes: (usize, usize),
    values: Vec<QSqrt2>,
}

impl JointResponseTable {
    /// `f(λ, M_A, M_B, k_A, k_B)`, all indices zero-based.
    pub fn from_fn(
        points: usize,
        settings: (usize, usize),
        outcomes: (usize, usize),
        f: impl Fn(usize, usize, usize, usize, usize) -> QSqrt2,
    ) -> Self {
        let mut values = Vec::with_capacity(points * settings.0 * settings.1 * outcomes.0 * outcomes.1);
        for l in 0..points {
            for ma in 0..settings.0 {
                for mb in 0..settings.1 {
                    for ka in 0..outcomes.0 {
                        for kb in 0..outcomes.1 {
                            values.push(f(l, ma, mb, ka, kb));
                        }
                    }
                }
            }
        }
        JointResponseTable {
            points,
            settings,
            outcomes,
            values,
        }
    }

    pub fn get(&self, l: usize, ma: usize, mb: usize, ka: usize, kb: usize) -> &QSqrt2 {
        let (sa, sb) = self.settings;
        let (oa, ob) = self.outcomes;
        debug_assert!(l < self.points && ma < sa && mb < sb && ka < oa && kb < ob);
        &self.values[(((l * sa + ma) * sb + mb) * oa + ka) * ob + kb]
    }

    fn marginal_a(&self, l: usize, ma: usize, mb: usize, ka: usize) -> QSqrt2 {
        (0..self.outcomes.1).map(|kb| self.get(l, ma, mb, ka, kb)).sum()
    }

    fn marginal_b(&self, l: usize, ma: usize, mb: usize, kb: usize) -> QSqrt2 {
        (0..self.outcomes.0).map(|ka| self.get(l, ma, mb, ka, kb)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizabilityVerdict {
    pub factorizable: bool,
    /// A's marginal never depends on M_B, and B's never on M_A.
    pub parameter_independent: bool,
    /// The joint equals the product of its marginals at every (λ, M_A, M_B).
    pub outcome_independent: bool,
    pub failures: Vec<String>,
}

pub fn check_factorizability(table: &JointResponseTable) -> Result<FactorizabilityVerdict> {
    let (sa, sb) = table.settings;
    let (oa, ob) = table.outcomes;
    for l in 0..table.points {
        for ma in 0..sa {
            for mb in 0..sb {
                let mut sum = QSqrt2::zero();
                for ka in 0..oa {
                    for kb in 0..ob {
                        sum += table.get(l, ma, mb, ka, kb);
                    }
                }
                if !sum.is_one() {
                    return Err(Error::NotNormalizedTable(format!(
                        "joint response at λ={l}, M_A={ma}, M_B={mb} sums to {sum}"
                    )));
                }
            }
        }
    }

    let mut failures = Vec::new();
    let mut parameter_independent = true;
    for l in 0..table.points {
        for ma in 0..sa {
            for mb in 1..sb {
                if (0..oa).any(|ka| table.marginal_a(l, ma, mb, ka) != table.marginal_a(l, ma, 0, ka)) {
                    parameter_independent = false;
                    failures.push(format!("A's marginal at λ={l}, M_A={ma} changes with M_B ({mb} vs 0)"));
                }
            }
        }
        for mb in 0..sb {
            for ma in 1..sa {
                if (0..ob).any(|kb| table.marginal_b(l, ma, mb, kb) != table.marginal_b(l, 0, mb, kb)) {
                    parameter_independent = false;
                    failures.push(format!("B's marginal at λ={l}, M_B={mb} changes with M_A ({ma} vs 0)"));
                }
            }
        }
    }

    let mut outcome_independent = true;
    for l in 0..table.points {
        for ma in 0..sa {
            for mb in 0..sb {
                'cell: for ka in 0..oa {
                    for kb in 0..ob {
                        let product = table.marginal_a(l, ma, mb, ka) * table.marginal_b(l, ma, mb, kb);
                        if *table.get(l, ma, mb, ka, kb) != product {
                            outcome_independent = false;
                            failures.push(format!(
                                "outcomes correlated at λ={l}, M_A={ma}, M_B={mb}: \
                                 ξ({ka},{kb}) = {} but marginal product = {product}",
                                table.get(l, ma, mb, ka, kb)
                            ));
                            break 'cell;
                        }
                    }
                }
            }
        }
    }

    Ok(FactorizabilityVerdict {
        factorizable: parameter_independent && outcome_independent,
        parameter_independent,
        outcome_independent,
        failures,
    })
}
