//! Exact phase-1 simplex for convex-domination feasibility.
//!
//! The only linear program this crate ever solves: given exponent vectors
//! `A_1..A_k` and a target `b`, decide whether
//!
//! ```text
//!   lambda >= 0,  sum lambda_i = 1,  sum lambda_i * A_i <= b   (componentwise)
//! ```
//!
//! has a solution, and produce one when it does. Everything runs over
//! `BigRational`; Bland's rule guarantees termination. Slack variables give
//! an immediate starting basis for the inequality rows, so only the
//! convexity row needs an artificial variable.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

use crate::budget;
use crate::ideal::ExponentVector;

fn ratio(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Find `lambda` with `lambda >= 0`, `sum = 1`, `sum lambda_i A_i <= b`,
/// or `None` when the system is infeasible. The result is aligned with
/// `points`.
pub(crate) fn convex_domination_certificate(
    points: &[ExponentVector],
    target: &ExponentVector,
) -> Option<Vec<BigRational>> {
    assert!(!points.is_empty(), "need at least one point");
    let n = target.len();
    let k = points.len();

    // cheap sufficient check first: any single point below the target
    for (i, p) in points.iter().enumerate() {
        if p.entries().iter().zip(target.entries()).all(|(a, b)| a <= b) {
            let mut lambda = vec![BigRational::zero(); k];
            lambda[i] = BigRational::one();
            return Some(lambda);
        }
    }

    // columns: k lambdas, n slacks, 1 artificial
    let cols = k + n + 1;
    let rows = n + 1;
    let mut tab: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); cols + 1]; rows];
    for j in 0..n {
        for (i, p) in points.iter().enumerate() {
            tab[j][i] = ratio(p.entry(j));
        }
        tab[j][k + j] = BigRational::one();
        tab[j][cols] = ratio(target.entry(j));
    }
    for i in 0..k {
        tab[n][i] = BigRational::one();
    }
    tab[n][k + n] = BigRational::one();
    tab[n][cols] = BigRational::one();

    let mut basis: Vec<usize> = (0..n).map(|j| k + j).collect();
    basis.push(k + n);

    // minimize the artificial variable; objective row = reduced costs
    let mut obj = vec![BigRational::zero(); cols];
    obj[k + n] = BigRational::one();
    let mut value = BigRational::zero();
    // canonicalize against the artificial's row
    {
        let f = obj[k + n].clone();
        for j in 0..cols {
            obj[j] -= &f * &tab[n][j];
        }
        value += &f * &tab[n][cols];
    }

    loop {
        budget::checkpoint();
        // Bland: smallest-index column with negative reduced cost
        let entering = match (0..cols).find(|&j| obj[j].is_negative()) {
            Some(j) => j,
            None => break,
        };
        // ratio test, Bland tie-break on the basic column index
        let mut leaving: Option<(usize, BigRational)> = None;
        for r in 0..rows {
            if tab[r][entering].is_positive() {
                let theta = &tab[r][cols] / &tab[r][entering];
                let better = match &leaving {
                    None => true,
                    Some((lr, lt)) => theta < *lt || (theta == *lt && basis[r] < basis[*lr]),
                };
                if better {
                    leaving = Some((r, theta));
                }
            }
        }
        let (r, _) = leaving.expect("phase-1 objective is bounded below by zero");

        // pivot at (r, entering)
        let pivot = tab[r][entering].clone();
        for j in 0..=cols {
            tab[r][j] /= &pivot;
        }
        for i in 0..rows {
            if i != r && !tab[i][entering].is_zero() {
                let f = tab[i][entering].clone();
                for j in 0..=cols {
                    let delta = &f * &tab[r][j];
                    tab[i][j] -= delta;
                }
            }
        }
        if !obj[entering].is_zero() {
            let f = obj[entering].clone();
            for j in 0..cols {
                let delta = &f * &tab[r][j];
                obj[j] -= delta;
            }
            value += &f * &tab[r][cols];
        }
        basis[r] = entering;
    }

    if !value.is_zero() {
        return None;
    }
    let mut lambda = vec![BigRational::zero(); k];
    for (r, &col) in basis.iter().enumerate() {
        if col < k {
            lambda[col] = tab[r][cols].clone();
        }
    }
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(entries: &[u64]) -> ExponentVector {
        ExponentVector::new(entries.to_vec())
    }

    fn check_certificate(points: &[ExponentVector], target: &ExponentVector, lambda: &[BigRational]) {
        assert_eq!(lambda.len(), points.len());
        assert!(lambda.iter().all(|l| !l.is_negative()));
        let total: BigRational = lambda.iter().sum();
        assert!(total.is_one(), "weights must sum to 1, got {total}");
        for j in 0..target.len() {
            let combo: BigRational = points
                .iter()
                .zip(lambda)
                .map(|(p, l)| l * ratio(p.entry(j)))
                .sum();
            assert!(combo <= ratio(target.entry(j)), "coordinate {j} exceeds target");
        }
    }

    #[test]
    fn midpoint_is_forced() {
        let points = [ev(&[2, 0]), ev(&[0, 2])];
        let lambda = convex_domination_certificate(&points, &ev(&[1, 1])).unwrap();
        check_certificate(&points, &ev(&[1, 1]), &lambda);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(lambda, vec![half.clone(), half]);
    }

    #[test]
    fn incompatible_scalar_bounds_are_infeasible() {
        // needs lambda_1 <= 1/2 and lambda_1 >= 2/3 simultaneously
        let points = [ev(&[2, 0]), ev(&[0, 3])];
        assert!(convex_domination_certificate(&points, &ev(&[1, 1])).is_none());
    }

    #[test]
    fn any_point_below_target_short_circuits() {
        let points = [ev(&[3, 1]), ev(&[1, 2])];
        let lambda = convex_domination_certificate(&points, &ev(&[1, 5])).unwrap();
        check_certificate(&points, &ev(&[1, 5]), &lambda);
    }

    #[test]
    fn interval_feasibility() {
        // lambda in [1/3, 1/2] works: simplex should land on some vertex
        let points = [ev(&[2, 0]), ev(&[0, 3])];
        let target = ev(&[1, 2]);
        let lambda = convex_domination_certificate(&points, &target).unwrap();
        check_certificate(&points, &target, &lambda);
    }

    #[test]
    fn three_point_degenerate_case() {
        let points = [ev(&[4, 0]), ev(&[2, 2]), ev(&[0, 4])];
        let target = ev(&[2, 2]);
        let lambda = convex_domination_certificate(&points, &target).unwrap();
        check_certificate(&points, &target, &lambda);
    }

    #[test]
    fn brute_force_agreement_on_small_grid() {
        // independent oracle: for two points the feasible set is an interval
        // whose endpoints have denominators 3 and 5, so a full sweep of the
        // 1/15 grid decides feasibility exactly
        let points = [ev(&[3, 0]), ev(&[0, 5])];
        for bx in 0..=4u64 {
            for by in 0..=6u64 {
                let target = ev(&[bx, by]);
                let lp = convex_domination_certificate(&points, &target);
                let grid = (0..=15).any(|num| {
                    let l1 = BigRational::new(BigInt::from(num), BigInt::from(15));
                    let l2 = BigRational::one() - &l1;
                    &l1 * ratio(3) <= ratio(bx) && &l2 * ratio(5) <= ratio(by)
                });
                assert_eq!(lp.is_some(), grid, "feasibility mismatch at ({bx},{by})");
                if let Some(l) = lp {
                    check_certificate(&points, &target, &l);
                }
            }
        }
    }
}
