//! Response-function synthesis as exact LP feasibility.
//!
//! Given preparations on a shared ontic space and a target outcome table,
//! the unknowns are `x_(k,λ) = ξ_k(λ) ≥ 0` subject to
//!
//! * completeness: `Σ_k x_(k,λ) = 1` for every point, and
//! * reproduction: `Σ_λ μ_i(λ) x_(k,λ) = target(i,k)` for every constrained cell.
//!
//! Coefficients in ℚ(√2) are split over the basis `{1, √2}` into two rational
//! rows. The solver either returns a witness table or a Farkas certificate,
//! and every result is re-checked by [`verify_certificate`], which shares no
//! code with the simplex, before it is handed back.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Probability, QSqrt2, Rational};
use crate::ontology::{validate_epistemic, EpistemicState, OnticSpace, ResponseFunctions};
use crate::simplex::{self, LpOutcome};

/// Preparations, outcome count and per-cell targets (`None` leaves a cell
/// unconstrained).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisSpec {
    space: Arc<OnticSpace>,
    preparations: Vec<(String, EpistemicState)>,
    outcomes: usize,
    targets: Vec<Vec<Option<QSqrt2>>>,
}

impl SynthesisSpec {
    /// Checks shapes, shared space, normalized preparations, and that every
    /// fully specified target row sums to 1 (partial rows to at most 1).
    pub fn new(
        space: Arc<OnticSpace>,
        preparations: Vec<(String, EpistemicState)>,
        outcomes: usize,
        targets: Vec<Vec<Option<QSqrt2>>>,
    ) -> Result<Self> {
        let spec = SynthesisSpec::new_unchecked(space, preparations, outcomes, targets)?;
        for ((label, mu), row) in spec.preparations.iter().zip(&spec.targets) {
            if !validate_epistemic(mu).valid {
                return Err(Error::MalformedSpec(format!("preparation `{label}` is not normalized")));
            }
            let mut sum = QSqrt2::zero();
            for t in row.iter().flatten() {
                if Probability::new(t.clone()).is_err() {
                    return Err(Error::MalformedSpec(format!("target {t} for `{label}` is not a probability")));
                }
                sum += t;
            }
            let full = row.iter().all(Option::is_some);
            if (full && !sum.is_one()) || sum > QSqrt2::one() {
                return Err(Error::MalformedSpec(format!("targets for `{label}` sum to {sum}")));
            }
        }
        Ok(spec)
    }

    /// Shape and space checks only; target rows may be inconsistent.
    pub fn new_unchecked(
        space: Arc<OnticSpace>,
        preparations: Vec<(String, EpistemicState)>,
        outcomes: usize,
        targets: Vec<Vec<Option<QSqrt2>>>,
    ) -> Result<Self> {
        if outcomes == 0 {
            return Err(Error::MalformedSpec("outcome count must be positive".into()));
        }
        if targets.len() != preparations.len() {
            return Err(Error::MalformedSpec(format!(
                "{} target rows for {} preparations",
                targets.len(),
                preparations.len()
            )));
        }
        if let Some(row) = targets.iter().find(|r| r.len() != outcomes) {
            return Err(Error::MalformedSpec(format!(
                "target row has {} entries, expected {outcomes}",
                row.len()
            )));
        }
        if preparations.iter().any(|(_, mu)| *mu.space() != space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(SynthesisSpec {
            space,
            preparations,
            outcomes,
            targets,
        })
    }

    /// Every cell constrained.
    pub fn with_targets(
        space: Arc<OnticSpace>,
        preparations: Vec<(String, EpistemicState)>,
        outcomes: usize,
        targets: Vec<Vec<QSqrt2>>,
    ) -> Result<Self> {
        let targets = targets
            .into_iter()
            .map(|row| row.into_iter().map(Some).collect())
            .collect();
        SynthesisSpec::new(space, preparations, outcomes, targets)
    }

    /// Only the listed `(preparation, outcome)` cells are constrained, each
    /// to zero.
    pub fn forbidden_zeros(
        space: Arc<OnticSpace>,
        preparations: Vec<(String, EpistemicState)>,
        outcomes: usize,
        forbidden: &[(usize, usize)],
    ) -> Result<Self> {
        let mut targets = vec![vec![None; outcomes]; preparations.len()];
        for &(i, k) in forbidden {
            let cell = targets
                .get_mut(i)
                .and_then(|row: &mut Vec<Option<QSqrt2>>| row.get_mut(k))
                .ok_or_else(|| Error::MalformedSpec(format!("forbidden cell ({i}, {k}) out of range")))?;
            *cell = Some(QSqrt2::zero());
        }
        SynthesisSpec::new(space, preparations, outcomes, targets)
    }

    pub fn space(&self) -> &Arc<OnticSpace> {
        &self.space
    }

    pub fn preparations(&self) -> &[(String, EpistemicState)] {
        &self.preparations
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes
    }

    pub fn targets(&self) -> &[Vec<Option<QSqrt2>>] {
        &self.targets
    }

    /// The same spec with preparations (and their target rows) reordered.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.preparations.len()];
        if order.len() != seen.len() || order.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::MalformedSpec("not a permutation".into()));
        }
        Ok(SynthesisSpec {
            space: self.space.clone(),
            preparations: order.iter().map(|&i| self.preparations[i].clone()).collect(),
            outcomes: self.outcomes,
            targets: order.iter().map(|&i| self.targets[i].clone()).collect(),
        })
    }

    pub fn variable_index(&self, outcome: usize, point: usize) -> usize {
        outcome * self.space.size() + point
    }

    /// The LP variable vector of an existing response table, for checking a
    /// hand-built ξ against the spec with [`verify_certificate`].
    pub fn witness_from_responses(&self, xi: &ResponseFunctions) -> Result<Vec<Rational>> {
        if *xi.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if xi.outcome_count() != self.outcomes {
            return Err(Error::DimensionMismatch {
                expected: self.outcomes,
                found: xi.outcome_count(),
            });
        }
        xi.table()
            .iter()
            .flatten()
            .map(|v| {
                if v.is_rational() {
                    Ok(v.rat().clone())
                } else {
                    Err(Error::MalformedSpec(format!("response value {v} is not rational")))
                }
            })
            .collect()
    }

    /// Reads a witness back as response functions.
    pub fn responses_from_witness(&self, witness: &[Rational]) -> Result<ResponseFunctions> {
        let n = self.space.size();
        if witness.len() != n * self.outcomes {
            return Err(Error::DimensionMismatch {
                expected: n * self.outcomes,
                found: witness.len(),
            });
        }
        let table = witness
            .chunks(n)
            .map(|row| row.iter().cloned().map(QSqrt2::from_rational).collect())
            .collect();
        ResponseFunctions::from_table(self.space.clone(), table)
    }
}

/// One equality `Σ coeffs·x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub id: String,
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// Rational equality system over non-negative variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    fn dense(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let n = self.variables.len();
        let rows = self
            .constraints
            .iter()
            .map(|c| {
                let mut row = vec![Rational::zero(); n];
                for (j, v) in &c.coeffs {
                    row[*j] += v;
                }
                row
            })
            .collect();
        let rhs = self.constraints.iter().map(|c| c.rhs.clone()).collect();
        (rows, rhs)
    }
}

pub fn build_synthesis_lp(spec: &SynthesisSpec) -> Result<LinearProgram> {
    let n = spec.space.size();
    let k_count = spec.outcomes;
    let mut variables = Vec::with_capacity(n * k_count);
    for k in 0..k_count {
        for p in 0..n {
            variables.push(format!("xi_{}({})", k + 1, spec.space.point_label(p)));
        }
    }
    let mut constraints = Vec::with_capacity(n + spec.preparations.len() * k_count);
    for p in 0..n {
        constraints.push(Constraint {
            id: format!("complete({})", spec.space.point_label(p)),
            coeffs: (0..k_count).map(|k| (spec.variable_index(k, p), Rational::one())).collect(),
            rhs: Rational::one(),
        });
    }
    for ((label, mu), row) in spec.preparations.iter().zip(&spec.targets) {
        for (k, target) in row.iter().enumerate() {
            let Some(target) = target else { continue };
            let id = format!("target({},{})", label, k + 1);
            let rat_coeffs = mu
                .support()
                .filter(|(_, w)| !w.rat().is_zero())
                .map(|(p, w)| (spec.variable_index(k, p), w.rat().clone()))
                .collect();
            constraints.push(Constraint {
                id: id.clone(),
                coeffs: rat_coeffs,
                rhs: target.rat().clone(),
            });
            let irr_coeffs: Vec<_> = mu
                .support()
                .filter(|(_, w)| !w.irr().is_zero())
                .map(|(p, w)| (spec.variable_index(k, p), w.irr().clone()))
                .collect();
            if !irr_coeffs.is_empty() || !target.irr().is_zero() {
                constraints.push(Constraint {
                    id: format!("{id}.sqrt2"),
                    coeffs: irr_coeffs,
                    rhs: target.irr().clone(),
                });
            }
        }
    }
    Ok(LinearProgram {
        variables,
        constraints,
    })
}

/// Constraint multipliers `y` with `Σ_i y_i·row_i ≤ 0` in every variable and
/// `Σ_i y_i·rhs_i > 0`. Any `x ≥ 0` satisfying all rows would give
/// `0 < yᵀb = yᵀAx ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    /// Non-zero multipliers only, keyed by constraint id.
    pub multipliers: Vec<(String, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible { witness: Vec<Rational> },
    Infeasible { certificate: FarkasCertificate },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            FeasibilityResult::Feasible { witness } => Some(witness),
            FeasibilityResult::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match self {
            FeasibilityResult::Infeasible { certificate } => Some(certificate),
            FeasibilityResult::Feasible { .. } => None,
        }
    }
}

/// Phase-one simplex. The returned witness or certificate has already passed
/// [`verify_certificate`].
pub fn solve_feasibility(lp: &LinearProgram) -> FeasibilityResult {
    let (a, b) = lp.dense();
    let result = match simplex::find_feasible(&a, &b) {
        LpOutcome::Optimal { x, .. } => FeasibilityResult::Feasible { witness: x },
        LpOutcome::Infeasible { farkas } => FeasibilityResult::Infeasible {
            certificate: FarkasCertificate {
                multipliers: lp
                    .constraints
                    .iter()
                    .zip(farkas)
                    .filter(|(_, y)| !y.is_zero())
                    .map(|(c, y)| (c.id.clone(), y))
                    .collect(),
            },
        },
        LpOutcome::Unbounded => unreachable!("phase one has a zero objective"),
    };
    let check = verify_certificate(lp, &result);
    assert!(check.valid, "solver produced an unverifiable result: {}", check.detail);
    result
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub valid: bool,
    /// First violated constraint or variable bound, by id.
    pub violated: Option<String>,
    pub detail: String,
}

impl CertificateCheck {
    fn ok(detail: String) -> Self {
        CertificateCheck {
            valid: true,
            violated: None,
            detail,
        }
    }

    fn fail(violated: String, detail: String) -> Self {
        CertificateCheck {
            valid: false,
            violated: Some(violated),
            detail,
        }
    }
}

/// Re-checks a witness constraint by constraint, or recombines Farkas
/// multipliers against the original rows.
pub fn verify_certificate(lp: &LinearProgram, result: &FeasibilityResult) -> CertificateCheck {
    match result {
        FeasibilityResult::Feasible { witness } => {
            if witness.len() != lp.variables.len() {
                return CertificateCheck::fail(
                    "witness".into(),
                    format!("{} values for {} variables", witness.len(), lp.variables.len()),
                );
            }
            if let Some((j, v)) = witness.iter().enumerate().find(|(_, v)| v.is_negative()) {
                return CertificateCheck::fail(lp.variables[j].clone(), format!("negative value {v}"));
            }
            for c in &lp.constraints {
                let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * &witness[*j]).sum();
                if lhs != c.rhs {
                    return CertificateCheck::fail(c.id.clone(), format!("left side {lhs} ≠ {}", c.rhs));
                }
            }
            CertificateCheck::ok(format!("all {} equalities hold", lp.constraints.len()))
        }
        FeasibilityResult::Infeasible { certificate } => {
            let by_id: HashMap<&str, &Constraint> = lp.constraints.iter().map(|c| (c.id.as_str(), c)).collect();
            let mut combined = vec![Rational::zero(); lp.variables.len()];
            let mut residual = Rational::zero();
            for (id, y) in &certificate.multipliers {
                let Some(c) = by_id.get(id.as_str()) else {
                    return CertificateCheck::fail(id.clone(), "unknown constraint".into());
                };
                for (j, a) in &c.coeffs {
                    combined[*j] += y * a;
                }
                residual += y * &c.rhs;
            }
            if let Some((j, v)) = combined.iter().enumerate().find(|(_, v)| v.is_positive()) {
                return CertificateCheck::fail(
                    lp.variables[j].clone(),
                    format!("combined coefficient {v} is positive"),
                );
            }
            if !residual.is_positive() {
                return CertificateCheck::fail("residual".into(), format!("combined right side {residual} is not positive"));
            }
            CertificateCheck::ok(format!(
                "{} multipliers give a non-positive combination with right side {residual} > 0",
                certificate.multipliers.len()
            ))
        }
    }
}

/// Smallest `t` such that some complete response table keeps every
/// forbidden cell's probability at or below `t`.
pub fn min_violation(spec: &SynthesisSpec, forbidden: &[(usize, usize)]) -> Result<Probability> {
    for &(i, k) in forbidden {
        match spec.targets.get(i).and_then(|row| row.get(k)) {
            None => return Err(Error::MalformedSpec(format!("forbidden cell ({i}, {k}) out of range"))),
            Some(Some(t)) if !t.is_zero() => {
                return Err(Error::MalformedSpec(format!("forbidden cell ({i}, {k}) has target {t}")))
            }
            _ => {}
        }
    }
    let n = spec.space.size();
    let k_count = spec.outcomes;
    let f = forbidden.len();
    // Columns: x_(k,λ), then t, then one slack per forbidden cell.
    let t_col = n * k_count;
    let width = t_col + 1 + f;
    let mut a = Vec::with_capacity(n + f);
    let mut b = Vec::with_capacity(n + f);
    for p in 0..n {
        let mut row = vec![QSqrt2::zero(); width];
        for k in 0..k_count {
            row[spec.variable_index(k, p)] = QSqrt2::one();
        }
        a.push(row);
        b.push(QSqrt2::one());
    }
    for (s, &(i, k)) in forbidden.iter().enumerate() {
        let mut row = vec![QSqrt2::zero(); width];
        for (p, w) in spec.preparations[i].1.support() {
            row[spec.variable_index(k, p)] = w.clone();
        }
        row[t_col] = -QSqrt2::one();
        row[t_col + 1 + s] = QSqrt2::one();
        a.push(row);
        b.push(QSqrt2::zero());
    }
    let mut c = vec![QSqrt2::zero(); width];
    c[t_col] = QSqrt2::one();
    match simplex::minimize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => Probability::new(value),
        // Uniform ξ is always feasible and t ≥ 0 bounds the objective.
        other => unreachable!("min-violation LP returned {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;
    use crate::ontology::Factor;

    fn line(n: usize) -> Arc<OnticSpace> {
        OnticSpace::shared(vec![Factor::new("L", (0..n).map(|i| format!("p{i}")))]).unwrap()
    }

    #[test]
    fn point_mass_forces_the_solution() {
        let space = line(1);
        let delta = EpistemicState::point_mass(space.clone(), 0).unwrap();
        let spec = SynthesisSpec::with_targets(
            space,
            vec![("d".into(), delta)],
            2,
            vec![vec![QSqrt2::one(), QSqrt2::zero()]],
        )
        .unwrap();
        let lp = build_synthesis_lp(&spec).unwrap();
        assert_eq!(lp.variables.len(), 2);
        assert_eq!(lp.constraints.len(), 3);
        let result = solve_feasibility(&lp);
        assert_eq!(result.witness().unwrap(), &[Rational::one(), Rational::zero()]);
    }

    #[test]
    fn inconsistent_targets_are_infeasible() {
        let space = line(2);
        let mu = EpistemicState::new(space.clone(), [(0, QSqrt2::ratio(1, 2)), (1, QSqrt2::ratio(1, 2))]).unwrap();
        let targets = vec![vec![Some(QSqrt2::ratio(1, 2)), Some(QSqrt2::ratio(1, 3))]];
        assert!(SynthesisSpec::new(space.clone(), vec![("m".into(), mu.clone())], 2, targets.clone()).is_err());
        let spec = SynthesisSpec::new_unchecked(space, vec![("m".into(), mu)], 2, targets).unwrap();
        let lp = build_synthesis_lp(&spec).unwrap();
        let result = solve_feasibility(&lp);
        assert!(!result.is_feasible());
        assert!(verify_certificate(&lp, &result).valid);
    }

    #[test]
    fn irrational_coefficients_split_into_two_rows() {
        let space = line(2);
        let w = QSqrt2::new(Rational::zero(), rational(1, 2));
        let mu = EpistemicState::new(space.clone(), [(0, w.clone()), (1, QSqrt2::one() - &w)]).unwrap();
        let spec = SynthesisSpec::with_targets(space, vec![("m".into(), mu)], 2, vec![vec![w.clone(), QSqrt2::one() - &w]])
            .unwrap();
        let lp = build_synthesis_lp(&spec).unwrap();
        assert_eq!(lp.constraints.len(), 2 + 4);
        assert!(lp.constraints.iter().any(|c| c.id == "target(m,1).sqrt2"));
        let result = solve_feasibility(&lp);
        let xi = spec.responses_from_witness(result.witness().unwrap()).unwrap();
        assert_eq!(crate::ontology::predict(&spec.preparations[0].1, &xi).unwrap()[0], w);
    }

    #[test]
    fn corrupted_witness_is_rejected() {
        let space = line(2);
        let mu = EpistemicState::new(space.clone(), [(0, QSqrt2::ratio(1, 2)), (1, QSqrt2::ratio(1, 2))]).unwrap();
        let spec = SynthesisSpec::with_targets(space, vec![("m".into(), mu)], 2, vec![vec![QSqrt2::ratio(1, 2); 2]]).unwrap();
        let lp = build_synthesis_lp(&spec).unwrap();
        let FeasibilityResult::Feasible { mut witness } = solve_feasibility(&lp) else { panic!() };
        witness[0] += rational(1, 100);
        let check = verify_certificate(&lp, &FeasibilityResult::Feasible { witness });
        assert!(!check.valid);
        assert_eq!(check.violated.as_deref(), Some("complete(p0)"));
    }

    #[test]
    fn bogus_certificate_is_rejected() {
        let space = line(1);
        let delta = EpistemicState::point_mass(space.clone(), 0).unwrap();
        let spec = SynthesisSpec::forbidden_zeros(space, vec![("d".into(), delta)], 2, &[(0, 0)]).unwrap();
        let lp = build_synthesis_lp(&spec).unwrap();
        let fake = FeasibilityResult::Infeasible {
            certificate: FarkasCertificate {
                multipliers: vec![("complete(p0)".into(), Rational::one())],
            },
        };
        assert!(!verify_certificate(&lp, &fake).valid);
        let unknown = FeasibilityResult::Infeasible {
            certificate: FarkasCertificate {
                multipliers: vec![("nope".into(), Rational::one())],
            },
        };
        assert_eq!(verify_certificate(&lp, &unknown).violated.as_deref(), Some("nope"));
    }

    #[test]
    fn disjoint_supports_have_zero_violation() {
        let space = line(4);
        let a = EpistemicState::new(space.clone(), [(0, QSqrt2::ratio(1, 2)), (1, QSqrt2::ratio(1, 2))]).unwrap();
        let b = EpistemicState::new(space.clone(), [(2, QSqrt2::ratio(1, 2)), (3, QSqrt2::ratio(1, 2))]).unwrap();
        let forbidden = [(0, 0), (1, 1)];
        let spec = SynthesisSpec::forbidden_zeros(space, vec![("a".into(), a), ("b".into(), b)], 2, &forbidden).unwrap();
        assert_eq!(min_violation(&spec, &forbidden).unwrap(), Probability::zero());
    }

    #[test]
    fn shared_point_forces_violation() {
        // Two preparations share p0 with weight 1/2; forbidding outcome 1 for
        // the first and outcome 2 for the second leaves max(ξ_1, ξ_2) ≥ 1/2
        // at p0, so the best split is 1/2 · 1/2.
        let space = line(3);
        let a = EpistemicState::new(space.clone(), [(0, QSqrt2::ratio(1, 2)), (1, QSqrt2::ratio(1, 2))]).unwrap();
        let b = EpistemicState::new(space.clone(), [(0, QSqrt2::ratio(1, 2)), (2, QSqrt2::ratio(1, 2))]).unwrap();
        let forbidden = [(0, 0), (1, 1)];
        let spec = SynthesisSpec::forbidden_zeros(space, vec![("a".into(), a), ("b".into(), b)], 2, &forbidden).unwrap();
        assert_eq!(min_violation(&spec, &forbidden).unwrap().value(), &QSqrt2::ratio(1, 4));
        assert!(min_violation(&spec, &[(5, 0)]).is_err());
    }

    #[test]
    fn rejects_malformed_specs() {
        let space = line(1);
        let delta = EpistemicState::point_mass(space.clone(), 0).unwrap();
        assert!(SynthesisSpec::with_targets(space.clone(), vec![("d".into(), delta.clone())], 2, vec![vec![QSqrt2::one()]]).is_err());
        assert!(SynthesisSpec::with_targets(space.clone(), vec![("d".into(), delta.clone())], 0, vec![vec![]]).is_err());
        let other = EpistemicState::point_mass(line(2), 0).unwrap();
        assert_eq!(
            SynthesisSpec::with_targets(space, vec![("d".into(), other)], 1, vec![vec![QSqrt2::one()]]),
            Err(Error::SpaceMismatch)
        );
    }
}
