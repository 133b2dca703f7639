#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use ontic::ontology::{EpistemicState, Factor, OnticSpace, OntologicalModel, ResponseFunctions};
use ontic::synthesis::SynthesisSpec;
use ontic::{QSqrt2, Rational};
use proptest::prelude::*;

pub fn q(s: &str) -> QSqrt2 {
    s.parse().unwrap()
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn line(n: usize) -> Arc<OnticSpace> {
    OnticSpace::shared(vec![Factor::new("L", (0..n).map(|i| format!("p{i}")))]).unwrap()
}

/// Small non-negative integer weights, at least one positive, normalized.
pub fn distribution(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(0i64..4, n)
        .prop_filter("needs mass", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: i64 = w.iter().sum();
            w.into_iter().map(|x| r(x, total)).collect()
        })
}

pub fn state(space: &Arc<OnticSpace>, weights: &[Rational]) -> EpistemicState {
    EpistemicState::new(
        space.clone(),
        weights.iter().cloned().enumerate().map(|(i, w)| (i, QSqrt2::from_rational(w))),
    )
    .unwrap()
}

pub fn qsqrt2() -> impl Strategy<Value = QSqrt2> {
    (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, b, c, d)| QSqrt2::new(r(a, b), r(c, d)))
}

/// A spec whose constrained cells all have target 0 or 1.
#[derive(Clone, Debug)]
pub struct DegenerateSpec {
    pub points: usize,
    pub outcomes: usize,
    pub weights: Vec<Vec<Rational>>,
    /// `targets[i][k]`: `None`, `Some(false)` for 0, `Some(true)` for 1.
    pub targets: Vec<Vec<Option<bool>>>,
}

impl DegenerateSpec {
    pub fn spec(&self) -> SynthesisSpec {
        let space = line(self.points);
        let preps = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("m{i}"), state(&space, w)))
            .collect();
        let targets = self
            .targets
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| t.map(|one| if one { QSqrt2::from_integer(1) } else { QSqrt2::from_integer(0) }))
                    .collect()
            })
            .collect();
        SynthesisSpec::new_unchecked(space, preps, self.outcomes, targets).unwrap()
    }

    /// The cells constrained to zero.
    pub fn zeros(&self) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for (i, row) in self.targets.iter().enumerate() {
            for (k, t) in row.iter().enumerate() {
                if *t == Some(false) {
                    cells.push((i, k));
                }
            }
        }
        cells
    }
}

pub fn degenerate_spec() -> impl Strategy<Value = DegenerateSpec> {
    (1usize..=8, 1usize..=3, 1usize..=3).prop_flat_map(|(points, outcomes, preps)| {
        (
            prop::collection::vec(distribution(points), preps),
            prop::collection::vec(
                prop::collection::vec(prop_oneof![3 => Just(None), 3 => Just(Some(false)), 1 => Just(Some(true))], outcomes),
                preps,
            ),
        )
            .prop_map(move |(weights, targets)| DegenerateSpec {
                points,
                outcomes,
                weights,
                targets,
            })
    })
}

/// Exhaustive search over the `K^n` deterministic response tables. With 0/1
/// targets a cell value of 1 forces `ξ_k = 1` on the whole support and 0
/// forces `ξ_k = 0` there, so a feasible table exists iff a deterministic
/// one does.
pub fn brute_force_feasible(spec: &DegenerateSpec) -> bool {
    let n = spec.points;
    let k = spec.outcomes;
    let total = k.pow(n as u32);
    (0..total).any(|code| {
        let choice: Vec<usize> = (0..n).map(|p| (code / k.pow(p as u32)) % k).collect();
        spec.weights.iter().zip(&spec.targets).all(|(w, row)| {
            row.iter().enumerate().all(|(outcome, t)| match t {
                None => true,
                Some(one) => {
                    let mass: Rational = (0..n).filter(|&p| choice[p] == outcome).map(|p| w[p].clone()).sum();
                    let expected = if *one { r(1, 1) } else { r(0, 1) };
                    mass == expected
                }
            })
        })
    })
}

/// A random model on one or two factors; weights need not be normalized.
pub fn model() -> impl Strategy<Value = OntologicalModel> {
    (1usize..=3, 1usize..=3, any::<bool>()).prop_flat_map(|(a, b, two)| {
        let factors = if two {
            vec![
                Factor::new("A", (0..a).map(|i| format!("a{i}"))),
                Factor::new("B", (0..b).map(|i| format!("b{i}"))).inaccessible(),
            ]
        } else {
            vec![Factor::new("A", (0..a).map(|i| format!("a{i}")))]
        };
        let space = OnticSpace::shared(factors).unwrap();
        let n = space.size();
        (
            Just(space),
            prop::collection::vec(prop::collection::vec(prop::option::of(qsqrt2()), n), 0..3),
            prop::collection::vec(
                (1usize..=3, qsqrt2(), prop::collection::vec(prop::option::of(qsqrt2()), n * 3)),
                0..3,
            ),
        )
            .prop_map(|(space, preps, meas)| {
                let mut model = OntologicalModel::new(space.clone());
                for (i, weights) in preps.into_iter().enumerate() {
                    let entries = weights.into_iter().enumerate().filter_map(|(p, w)| w.map(|w| (p, w)));
                    model
                        .add_preparation(format!("prep{i}"), EpistemicState::new(space.clone(), entries).unwrap())
                        .unwrap();
                }
                let n = space.size();
                for (i, (k, filler, cells)) in meas.into_iter().enumerate() {
                    let entries = cells
                        .into_iter()
                        .enumerate()
                        .filter(|(j, _)| j / n < k)
                        .filter_map(|(j, v)| v.map(|v| (j / n, j % n, v)));
                    let xi = ResponseFunctions::with_filler(space.clone(), k, filler, entries).unwrap();
                    model.add_measurement(format!("meas{i}"), xi).unwrap();
                }
                model
            })
    })
}
