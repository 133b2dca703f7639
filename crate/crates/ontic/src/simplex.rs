//! Dense two-phase tableau simplex over an exact ordered field.
//!
//! Problems are in standard form: minimize `c·x` subject to `A x = b`,
//! `x ≥ 0`. Pivoting follows Bland's rule (lowest-index entering column,
//! lowest-index leaving basic variable on ratio ties), which cannot cycle.
//!
//! Phase one minimizes the sum of one artificial variable per row. When its
//! optimum is positive, the simplex multipliers of the final basis form a
//! Farkas certificate `y` with `yᵀA ≤ 0` and `yᵀb > 0`.

use crate::numerics::ExactField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    /// `yᵀA ≤ 0` componentwise and `yᵀb > 0`: no `x ≥ 0` solves `A x = b`.
    Infeasible { farkas: Vec<T> },
    Unbounded,
}

struct Tableau<T> {
    /// `m` rows of `n + m` columns (originals, then artificials).
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    reduced: Vec<T>,
    objective: T,
    n: usize,
}

impl<T: ExactField> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.checked_div(&p).expect("pivot element is non-zero");
        }
        self.rhs[row] = self.rhs[row].checked_div(&p).expect("pivot element is non-zero");
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - &(f.clone() * pv);
                }
            }
            self.rhs[r] = self.rhs[r].clone() - &(f * &pivot_rhs);
        }
        let f = self.reduced[col].clone();
        if !f.is_zero() {
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - &(f.clone() * pv);
                }
            }
            self.objective = self.objective.clone() + &(f * &pivot_rhs);
        }
        self.basis[row] = col;
    }

    /// Runs Bland pivots over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.reduced[j].lt_zero()) else {
                return true;
            };
            let mut best: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.gt_zero() {
                    continue;
                }
                let ratio = self.rhs[r].checked_div(a).expect("positive divisor");
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn remove_row(&mut self, row: usize) {
        self.rows.remove(row);
        self.rhs.remove(row);
        self.basis.remove(row);
    }
}

/// Minimizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn minimize<T: ExactField>(a: &[Vec<T>], b: &[T], c: &[T]) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length must match row count");
    assert!(a.iter().all(|row| row.len() == n), "rows must have one entry per variable");

    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.lt_zero();
        signs.push(flip);
        let mut full: Vec<T> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        full.extend((0..m).map(|j| if j == i { T::one() } else { T::zero() }));
        rows.push(full);
        rhs.push(if flip { -bi.clone() } else { bi.clone() });
    }

    let mut reduced = vec![T::zero(); n + m];
    for j in 0..n {
        reduced[j] = rows.iter().fold(T::zero(), |acc, r| acc - &r[j]);
    }
    let objective = rhs.iter().fold(T::zero(), |acc, v| acc + v);
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        reduced,
        objective,
        n,
    };

    // Phase one is bounded below by zero.
    t.optimize(n + m);

    if t.objective.gt_zero() {
        // Artificial column n+i has cost 1 and reduced cost 1 - y_i.
        let farkas = (0..m)
            .map(|i| {
                let y = T::one() - &t.reduced[n + i];
                if signs[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        return LpOutcome::Infeasible { farkas };
    }

    // Drive artificials out of the basis; rows where that is impossible are
    // linear combinations of the others.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= t.n {
            match (0..t.n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.remove_row(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let cost = |j: usize| if j < n { c[j].clone() } else { T::zero() };
    t.objective = t
        .basis
        .iter()
        .zip(&t.rhs)
        .fold(T::zero(), |acc, (&bj, v)| acc + &(cost(bj) * v));
    for j in 0..n + m {
        let mut rc = cost(j);
        for (row, &bj) in t.rows.iter().zip(&t.basis) {
            if !row[j].is_zero() {
                rc = rc - &(cost(bj) * &row[j]);
            }
        }
        t.reduced[j] = rc;
    }

    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![T::zero(); n];
    for (&bj, v) in t.basis.iter().zip(&t.rhs) {
        if bj < n {
            x[bj] = v.clone();
        }
    }
    LpOutcome::Optimal {
        x,
        value: t.objective,
    }
}

/// Phase one only: any `x ≥ 0` with `A x = b`, or a Farkas certificate.
pub fn find_feasible<T: ExactField>(a: &[Vec<T>], b: &[T]) -> LpOutcome<T> {
    let n = a.first().map_or(0, Vec::len);
    minimize(a, b, &vec![T::zero(); n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rational, QSqrt2, Rational};
    use num_traits::Zero;

    fn r(n: i64) -> Rational {
        rational(n, 1)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|row| row.iter().map(|&v| r(v)).collect()).collect()
    }

    fn vec_r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| r(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + y + s1 = 4, x + 3y + s2 = 6
        let a = mat(&[&[1, 1, 1, 0], &[1, 3, 0, 1]]);
        let out = minimize(&a, &vec_r(&[4, 6]), &vec_r(&[-1, -1, 0, 0]));
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, r(-4));
                assert_eq!(&x[0] + &x[1], r(4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fractional_vertex() {
        // min -x - 2y s.t. 2x + y ≤ 4, x + 3y ≤ 6 → (6/5, 8/5), value -22/5
        let a = mat(&[&[2, 1, 1, 0], &[1, 3, 0, 1]]);
        let out = minimize(&a, &vec_r(&[4, 6]), &vec_r(&[-1, -2, 0, 0]));
        let LpOutcome::Optimal { x, value } = out else { panic!() };
        assert_eq!(value, rational(-22, 5));
        assert_eq!((x[0].clone(), x[1].clone()), (rational(6, 5), rational(8, 5)));
    }

    #[test]
    fn infeasible_with_certificate() {
        // x + y = 1, x + y = 2
        let a = mat(&[&[1, 1], &[1, 1]]);
        let b = vec_r(&[1, 2]);
        let LpOutcome::Infeasible { farkas } = find_feasible(&a, &b) else { panic!() };
        for j in 0..2 {
            let s: Rational = (0..2).map(|i| &farkas[i] * &a[i][j]).sum();
            assert!(s <= Rational::zero());
        }
        let yb: Rational = (0..2).map(|i| &farkas[i] * &b[i]).sum();
        assert!(yb > Rational::zero());
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // -x = -3 → x = 3; x = -1 infeasible
        let a = mat(&[&[-1]]);
        let LpOutcome::Optimal { x, .. } = find_feasible(&a, &vec_r(&[-3])) else { panic!() };
        assert_eq!(x, vec_r(&[3]));
        let a = mat(&[&[1]]);
        let LpOutcome::Infeasible { farkas } = find_feasible(&a, &vec_r(&[-1])) else { panic!() };
        assert!(farkas[0] < Rational::zero());
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = mat(&[&[1, 1, 0], &[1, 1, 0], &[0, 1, 1]]);
        let LpOutcome::Optimal { x, .. } = minimize(&a, &vec_r(&[2, 2, 1]), &vec_r(&[0, 1, 0])) else {
            panic!()
        };
        assert_eq!(x, vec_r(&[2, 0, 1]));
    }

    #[test]
    fn unbounded() {
        // min -x s.t. x - y = 0
        let a = mat(&[&[1, -1]]);
        assert_eq!(minimize(&a, &vec_r(&[0]), &vec_r(&[-1, 0])), LpOutcome::Unbounded);
    }

    #[test]
    fn works_over_qsqrt2() {
        // min x s.t. √2·x - y = 1 → x = 1/√2
        let s = QSqrt2::sqrt2();
        let a = vec![vec![s, -QSqrt2::from_integer(1)]];
        let out = minimize(&a, &[QSqrt2::from_integer(1)], &[QSqrt2::from_integer(1), QSqrt2::zero()]);
        let LpOutcome::Optimal { value, .. } = out else { panic!() };
        assert_eq!(value, QSqrt2::inv_sqrt2());
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's classic cycling example for the textbook rule.
        let q = |n, d| rational(n, d);
        let a = vec![
            vec![q(1, 4), q(-8, 1), q(-1, 1), q(9, 1), r(1), r(0), r(0)],
            vec![q(1, 2), q(-12, 1), q(-1, 2), q(3, 1), r(0), r(1), r(0)],
            vec![r(0), r(0), r(1), r(0), r(0), r(0), r(1)],
        ];
        let c = vec![q(-3, 4), r(20), q(-1, 2), r(6), r(0), r(0), r(0)];
        let LpOutcome::Optimal { value, .. } = minimize(&a, &vec_r(&[0, 0, 1]), &c) else { panic!() };
        assert_eq!(value, q(-5, 4));
    }
}
