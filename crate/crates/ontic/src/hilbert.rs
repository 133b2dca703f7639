//! Exact finite-dimensional pure states, projective measurements and the
//! Born rule, with amplitudes in ℚ(√2) + i·ℚ(√2).

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Probability, QSqrt2};

/// A complex amplitude `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize)]
pub struct Amplitude {
    pub re: QSqrt2,
    pub im: QSqrt2,
}

impl Amplitude {
    pub fn new(re: QSqrt2, im: QSqrt2) -> Self {
        Amplitude { re, im }
    }

    pub fn real(re: QSqrt2) -> Self {
        Amplitude {
            re,
            im: QSqrt2::zero(),
        }
    }

    pub fn zero() -> Self {
        Amplitude::default()
    }

    pub fn one() -> Self {
        Amplitude::real(QSqrt2::one())
    }

    pub fn conj(&self) -> Self {
        Amplitude::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> QSqrt2 {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add<&Amplitude> for &Amplitude {
    type Output = Amplitude;
    fn add(self, rhs: &Amplitude) -> Amplitude {
        Amplitude::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Mul<&Amplitude> for &Amplitude {
    type Output = Amplitude;
    fn mul(self, rhs: &Amplitude) -> Amplitude {
        Amplitude::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl fmt::Display for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "i*({})", self.im)
        } else {
            write!(f, "{} + i*({})", self.re, self.im)
        }
    }
}

/// A normalized pure state.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct StateVector {
    amplitudes: Vec<Amplitude>,
}

impl StateVector {
    /// Rejects empty vectors and vectors whose squared norm is not exactly 1.
    pub fn new(amplitudes: Vec<Amplitude>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let norm_sqr: QSqrt2 = amplitudes.iter().map(Amplitude::norm_sqr).sum();
        if norm_sqr != QSqrt2::one() {
            return Err(Error::NotNormalized {
                norm_sqr: norm_sqr.to_string(),
            });
        }
        Ok(StateVector { amplitudes })
    }

    pub fn from_real(amplitudes: Vec<QSqrt2>) -> Result<Self> {
        StateVector::new(amplitudes.into_iter().map(Amplitude::real).collect())
    }

    /// Computational basis vector `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let amplitudes = (0..dim)
            .map(|i| {
                if i == index {
                    Amplitude::one()
                } else {
                    Amplitude::zero()
                }
            })
            .collect();
        StateVector { amplitudes }
    }

    /// Single-qubit built-ins `0`, `1`, `+`, `-`.
    pub fn named(name: &str) -> Result<Self> {
        let h = QSqrt2::inv_sqrt2();
        match name {
            "0" => Ok(StateVector::basis(2, 0)),
            "1" => Ok(StateVector::basis(2, 1)),
            "+" => StateVector::from_real(vec![h.clone(), h]),
            "-" => StateVector::from_real(vec![h.clone(), -h]),
            _ => Err(Error::UnknownState(name.to_string())),
        }
    }

    /// Tensor product of single-qubit built-ins, e.g. `0+` = |0⟩⊗|+⟩.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut chars = label.chars();
        let first = chars
            .next()
            .ok_or_else(|| Error::UnknownState(label.to_string()))?;
        let mut state = StateVector::named(&first.to_string())
            .map_err(|_| Error::UnknownState(label.to_string()))?;
        for c in chars {
            let next = StateVector::named(&c.to_string())
                .map_err(|_| Error::UnknownState(label.to_string()))?;
            state = tensor_product(&state, &next);
        }
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// A projective measurement given by the vectors `|ξ_k⟩`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MeasurementBasis {
    outcomes: Vec<StateVector>,
}

impl MeasurementBasis {
    /// Complete orthonormal basis; anything else is rejected.
    pub fn new(outcomes: Vec<StateVector>) -> Result<Self> {
        let basis = MeasurementBasis::from_vectors(outcomes)?;
        let verdict = check_orthonormal(&basis);
        if !verdict.orthonormal {
            return Err(Error::NotOrthonormal(verdict.describe()));
        }
        if !verdict.complete {
            return Err(Error::NotOrthonormal(format!(
                "{} vectors cannot span dimension {}",
                basis.len(),
                basis.dim()
            )));
        }
        Ok(basis)
    }

    /// Only checks that all vectors share one dimension. Use
    /// [`check_orthonormal`] to inspect the result.
    pub fn from_vectors(outcomes: Vec<StateVector>) -> Result<Self> {
        let dim = outcomes
            .first()
            .map(StateVector::dim)
            .ok_or(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            })?;
        if let Some(bad) = outcomes.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(MeasurementBasis { outcomes })
    }

    pub fn computational(dim: usize) -> Self {
        MeasurementBasis {
            outcomes: (0..dim).map(|i| StateVector::basis(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].dim()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[StateVector] {
        &self.outcomes
    }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Amplitude> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .fold(Amplitude::zero(), |acc, (x, y)| &acc + &(&x.conj() * y)))
}

/// `|a⟩⊗|b⟩` in row-major order: the index into `a` varies slowest.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> StateVector {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector { amplitudes }
}

/// Born probabilities `|⟨ξ_k|ψ⟩|²` for every outcome, in basis order.
pub fn born_probabilities(state: &StateVector, basis: &MeasurementBasis) -> Result<Vec<Probability>> {
    basis
        .outcomes
        .iter()
        .map(|xi| {
            let amp = inner_product(xi, state)?;
            Probability::new(amp.norm_sqr())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthonormalityVerdict {
    pub orthonormal: bool,
    /// `K = dim`; together with orthonormality this makes the basis complete.
    pub complete: bool,
    /// `(i, j, ⟨ξ_i|ξ_j⟩)` for every pair violating `δ_ij`.
    pub failures: Vec<(usize, usize, Amplitude)>,
}

impl OrthonormalityVerdict {
    pub fn holds(&self) -> bool {
        self.orthonormal && self.complete
    }

    fn describe(&self) -> String {
        self.failures
            .iter()
            .map(|(i, j, v)| format!("<xi_{}|xi_{}> = {}", i + 1, j + 1, v))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn check_orthonormal(basis: &MeasurementBasis) -> OrthonormalityVerdict {
    let mut failures = Vec::new();
    for (i, a) in basis.outcomes.iter().enumerate() {
        for (j, b) in basis.outcomes.iter().enumerate().skip(i) {
            let ip = inner_product(a, b).expect("dimensions checked at construction");
            let expected = if i == j { Amplitude::one() } else { Amplitude::zero() };
            if ip != expected {
                failures.push((i, j, ip));
            }
        }
    }
    OrthonormalityVerdict {
        orthonormal: failures.is_empty(),
        complete: basis.len() == basis.dim(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    fn st(label: &str) -> StateVector {
        StateVector::from_label(label).unwrap()
    }

    #[test]
    fn inner_products() {
        assert_eq!(inner_product(&st("0"), &st("0")).unwrap(), Amplitude::one());
        assert_eq!(
            inner_product(&st("0"), &st("+")).unwrap(),
            Amplitude::real(q("sqrt2/2"))
        );
        assert_eq!(inner_product(&st("+"), &st("-")).unwrap(), Amplitude::zero());
        assert!(matches!(
            inner_product(&st("0"), &st("00")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conjugate_linearity_in_first_argument() {
        let i_plus = StateVector::new(vec![
            Amplitude::real(QSqrt2::inv_sqrt2()),
            Amplitude::new(QSqrt2::zero(), QSqrt2::inv_sqrt2()),
        ])
        .unwrap();
        // ⟨0|i+⟩ is real; ⟨1|i+⟩ = i/√2 and ⟨i+|1⟩ = -i/√2.
        let one = st("1");
        assert_eq!(
            inner_product(&one, &i_plus).unwrap(),
            Amplitude::new(QSqrt2::zero(), QSqrt2::inv_sqrt2())
        );
        assert_eq!(
            inner_product(&i_plus, &one).unwrap(),
            Amplitude::new(QSqrt2::zero(), -QSqrt2::inv_sqrt2())
        );
    }

    #[test]
    fn tensor_products() {
        let z = QSqrt2::zero;
        assert_eq!(
            st("00"),
            StateVector::from_real(vec![QSqrt2::one(), z(), z(), z()]).unwrap()
        );
        let h = q("sqrt2/2");
        assert_eq!(
            st("0+"),
            StateVector::from_real(vec![h.clone(), h, z(), z()]).unwrap()
        );
        assert_eq!(
            st("++"),
            StateVector::from_real(vec![q("1/2"); 4]).unwrap()
        );
        let abc = tensor_product(&tensor_product(&st("+"), &st("1")), &st("-"));
        let a_bc = tensor_product(&st("+"), &tensor_product(&st("1"), &st("-")));
        assert_eq!(abc, a_bc);
        assert_eq!(abc.dim(), 8);
    }

    #[test]
    fn basis_vectors_in_own_basis_give_indicators() {
        let basis = MeasurementBasis::computational(4);
        for k in 0..4 {
            let probs = born_probabilities(&StateVector::basis(4, k), &basis).unwrap();
            for (j, p) in probs.iter().enumerate() {
                let expected = if j == k { QSqrt2::one() } else { QSqrt2::zero() };
                assert_eq!(p.value(), &expected);
            }
        }
    }

    #[test]
    fn orthonormality() {
        assert!(check_orthonormal(&MeasurementBasis::computational(4)).holds());
        let bad = MeasurementBasis::from_vectors(vec![st("0"), st("+")]).unwrap();
        let verdict = check_orthonormal(&bad);
        assert!(!verdict.orthonormal);
        assert_eq!(verdict.failures.len(), 1);
        assert_eq!(verdict.failures[0].2, Amplitude::real(q("sqrt2/2")));
        assert!(MeasurementBasis::new(vec![st("0"), st("+")]).is_err());
        assert!(MeasurementBasis::new(vec![st("0")]).is_err());
        assert!(MeasurementBasis::new(vec![st("+"), st("-")]).is_ok());
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            StateVector::from_real(vec![QSqrt2::one(), QSqrt2::one()]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(StateVector::from_label("0x").is_err());
    }
}
