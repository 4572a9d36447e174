//! Dense exact linear feasibility: find `x >= 0` with `A x = b`, or a
//! Farkas certificate of infeasibility.
//!
//! Phase-1 simplex over any ordered field, with Bland's rule for
//! termination.  Instances here are tiny (tens of rows and columns), so a
//! full tableau is the right tool; over [`crate::Rational`] every
//! comparison is exact and the returned certificates re-check exactly.

use crate::scalar::Scalar;

/// Outcome of a feasibility solve.
#[derive(Debug, Clone)]
pub enum LinFeas<S> {
    /// `x >= 0` with `A x = b`, in column order.
    Feasible(Vec<S>),
    /// `y` with `y^T A <= 0` componentwise and `y^T b > 0`.
    Infeasible(Vec<S>),
}

/// Solves `A x = b, x >= 0` where `a` is given in row-major order.
///
/// Rows may be rank-deficient and `b` arbitrary; columns may be empty
/// (then feasibility means `b = 0`).
pub fn solve_eq_nonneg<S: Scalar>(a: &[Vec<S>], b: &[S]) -> LinFeas<S> {
    let m = a.len();
    assert_eq!(m, b.len(), "row/rhs count mismatch");
    let n = if m == 0 { 0 } else { a[0].len() };

    if m == 0 {
        return LinFeas::Feasible(vec![]);
    }

    // Normalize to b >= 0, remembering flipped rows so the Farkas vector
    // can be mapped back.
    let mut flip = vec![false; m];
    let mut tab: Vec<Vec<S>> = Vec::with_capacity(m);
    for i in 0..m {
        assert_eq!(a[i].len(), n, "ragged matrix");
        let neg = b[i] < S::zero();
        flip[i] = neg;
        let mut row: Vec<S> = Vec::with_capacity(n + m + 1);
        for v in &a[i] {
            row.push(if neg { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            row.push(if k == i { S::one() } else { S::zero() });
        }
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        tab.push(row);
    }
    let rhs_col = n + m;

    // Objective: minimize the sum of artificials. Reduced costs start at
    // c_j - sum_i a_ij for structural columns (artificial basis), and the
    // stored last entry is -objective.
    let mut zrow: Vec<S> = vec![S::zero(); n + m + 1];
    for j in 0..=n + m {
        let mut s = S::zero();
        for row in tab.iter() {
            s = s + row[j].clone();
        }
        let c_j = if (n..n + m).contains(&j) { S::one() } else { S::zero() };
        zrow[j] = c_j - s;
    }
    // zrow[rhs_col] currently holds -sum(b) = -objective. Correct as is.

    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering column = lowest index with negative reduced cost.
        let Some(enter) = (0..n + m).find(|&j| zrow[j] < S::zero()) else {
            break;
        };
        // Ratio test; Bland tie-break on the leaving basis variable index.
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab[i][enter] > S::zero() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        // Compare rhs_i / a_i vs rhs_l / a_l without division:
                        // both denominators positive.
                        let lhs = tab[i][rhs_col].clone() * tab[l][enter].clone();
                        let rhs = tab[l][rhs_col].clone() * tab[i][enter].clone();
                        lhs < rhs || (lhs == rhs && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // Phase-1 objective is bounded below by zero, so the LP can
            // never be unbounded.
            unreachable!("phase-1 simplex reported unbounded");
        };

        let pivot = tab[r][enter].clone();
        for v in tab[r].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        for i in 0..m {
            if i != r && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..=rhs_col {
                    let upd = tab[r][j].clone() * f.clone();
                    tab[i][j] = tab[i][j].clone() - upd;
                }
            }
        }
        if !zrow[enter].is_zero() {
            let f = zrow[enter].clone();
            for j in 0..=rhs_col {
                let upd = tab[r][j].clone() * f.clone();
                zrow[j] = zrow[j].clone() - upd;
            }
        }
        basis[r] = enter;
    }

    let objective = -zrow[rhs_col].clone();
    if objective.is_zero() {
        let mut x = vec![S::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = tab[i][rhs_col].clone();
            }
        }
        LinFeas::Feasible(x)
    } else {
        // Simplex multipliers: y_i = c_i - reduced_cost(artificial_i)
        // with c_i = 1, then undo the row flips.
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let yi = S::one() - zrow[n + i].clone();
            y.push(if flip[i] { -yi } else { yi });
        }
        LinFeas::Infeasible(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;
    use crate::Rational;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn rat_mat(rows: &[&[&str]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|s| rat(s)).collect()).collect()
    }

    fn check_feasible(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) {
        for (i, row) in a.iter().enumerate() {
            let mut s = Rational::from_integer(0.into());
            for (j, v) in row.iter().enumerate() {
                s += v * &x[j];
            }
            assert_eq!(s, b[i], "row {i} mismatch");
        }
        assert!(x.iter().all(|v| *v >= Rational::from_integer(0.into())));
    }

    fn check_farkas(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) {
        let zero = Rational::from_integer(0.into());
        let n = a[0].len();
        for j in 0..n {
            let mut s = zero.clone();
            for i in 0..a.len() {
                s += &a[i][j] * &y[i];
            }
            assert!(s <= zero, "column {j}: y^T A = {s} > 0");
        }
        let mut yb = zero.clone();
        for i in 0..a.len() {
            yb += &b[i] * &y[i];
        }
        assert!(yb > zero, "y^T b = {yb} not positive");
    }

    #[test]
    fn symmetric_pair_is_feasible() {
        // lambda1*(1,0) + lambda2*(-1,0) = 0, sum = 1.
        let a = rat_mat(&[&["1", "-1"], &["0", "0"], &["1", "1"]]);
        let b = vec![rat("0"), rat("0"), rat("1")];
        match solve_eq_nonneg(&a, &b) {
            LinFeas::Feasible(x) => {
                check_feasible(&a, &b, &x);
                assert_eq!(x, vec![rat("1/2"), rat("1/2")]);
            }
            LinFeas::Infeasible(_) => panic!("should be feasible"),
        }
    }

    #[test]
    fn positive_sum_points_are_infeasible() {
        // Convex combination of (1,1) and (2,3) equal to the origin.
        let a = rat_mat(&[&["1", "2"], &["1", "3"], &["1", "1"]]);
        let b = vec![rat("0"), rat("0"), rat("1")];
        match solve_eq_nonneg(&a, &b) {
            LinFeas::Feasible(_) => panic!("should be infeasible"),
            LinFeas::Infeasible(y) => check_farkas(&a, &b, &y),
        }
    }

    #[test]
    fn no_columns() {
        let a: Vec<Vec<Rational>> = vec![vec![], vec![]];
        let b = vec![rat("0"), rat("1")];
        match solve_eq_nonneg(&a, &b) {
            LinFeas::Feasible(_) => panic!("b != 0 with no columns"),
            LinFeas::Infeasible(y) => check_farkas(&a, &b, &y),
        }
    }

    #[test]
    fn works_over_f64() {
        let a = vec![vec![1.0, -1.0], vec![1.0, 1.0]];
        let b = vec![0.25, 1.0];
        match solve_eq_nonneg(&a, &b) {
            LinFeas::Feasible(x) => {
                assert!((x[0] - 0.625).abs() < 1e-12);
                assert!((x[1] - 0.375).abs() < 1e-12);
            }
            LinFeas::Infeasible(_) => panic!("should be feasible"),
        }
    }

    #[test]
    fn degenerate_rows_and_repeats() {
        // Duplicate and dependent rows must not confuse the solver.
        let a = rat_mat(&[&["1", "-1"], &["1", "-1"], &["2", "-2"], &["1", "1"]]);
        let b = vec![rat("0"), rat("0"), rat("0"), rat("1")];
        match solve_eq_nonneg(&a, &b) {
            LinFeas::Feasible(x) => check_feasible(&a, &b, &x),
            LinFeas::Infeasible(_) => panic!("should be feasible"),
        }
    }

    #[test]
    fn farkas_on_check_with_no_columns_infeasible_zero_rhs() {
        let a = rat_mat(&[&["1", "1"], &["1", "1"], &["1", "1"]]);
        let b = vec![rat("-1"), rat("0"), rat("1")];
        match solve_eq_nonneg(&a, &b) {
            LinFeas::Feasible(_) => panic!("rows conflict"),
            LinFeas::Infeasible(y) => check_farkas(&a, &b, &y),
        }
    }
}
