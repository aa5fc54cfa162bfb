//! Chebyshev polynomials of the second kind U_n and the product identity
//! sin(nπx) = sin(πx) · U_{n−1}(cos(πx)).
//!
//! Coefficients are kept as exact integers (they grow like (1+√2)ⁿ, past the
//! i64 range near n = 47, hence i128). Pointwise values use the three-term
//! recurrence directly: expanding in the monomial basis and summing loses
//! roughly six digits to cancellation by n = 50, while the recurrence stays
//! near machine precision on [−1, 1].

use crate::modal::{sinpi, SubInterval};
use crate::{Error, Result};

/// Exact monomial coefficients of U_n, constant term first (length n+1).
///
/// U_0 = 1, U_1 = 2X, U_{n+1} = 2X·U_n − U_{n−1}.
pub fn chebyshev_u_coefficients(n: usize) -> Vec<i128> {
    if n == 0 {
        return vec![1];
    }
    let mut prev: Vec<i128> = vec![1];
    let mut curr: Vec<i128> = vec![0, 2];
    for _ in 1..n {
        let mut next = vec![0i128; curr.len() + 1];
        for (k, &c) in curr.iter().enumerate() {
            next[k + 1] += 2 * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = curr;
        curr = next;
    }
    curr
}

/// U_n(x) by the stable three-term recurrence.
pub fn chebyshev_u_value(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 2.0 * x;
    for _ in 1..n {
        (prev, curr) = (curr, 2.0 * x * curr - prev);
    }
    curr
}

/// Max over a uniform grid in ω of |sin(nπx) − sin(πx)·U_{n−1}(cos(πx))|.
///
/// The identity is exact in real arithmetic for every n ≥ 1; the returned
/// value measures only floating-point evaluation error and stays below 1e-9
/// through n = 50 on 10⁴-point grids.
pub fn sine_identity_check(n: usize, omega: SubInterval, grid_points: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "the sine product identity needs n >= 1".to_string(),
        });
    }
    if grid_points == 0 {
        return Err(Error::InvalidParameter {
            name: "grid_points",
            message: "need at least one grid point".to_string(),
        });
    }
    let (lo, hi) = (omega.lo(), omega.hi());
    let mut max_err: f64 = 0.0;
    for i in 0..grid_points {
        let x = if grid_points == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (grid_points - 1) as f64
        };
        let direct = sinpi(n as f64 * x);
        let via_poly = sinpi(x) * chebyshev_u_value(n - 1, (std::f64::consts::PI * x).cos());
        max_err = max_err.max((direct - via_poly).abs());
    }
    Ok(max_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficient_rows() {
        assert_eq!(chebyshev_u_coefficients(0), vec![1]);
        assert_eq!(chebyshev_u_coefficients(1), vec![0, 2]);
        assert_eq!(chebyshev_u_coefficients(2), vec![-1, 0, 4]);
        assert_eq!(chebyshev_u_coefficients(3), vec![0, -4, 0, 8]);
    }

    #[test]
    fn value_at_one_counts_degree_plus_one() {
        // U_n(1) = n + 1; check both the recurrence and the coefficient sum.
        assert_eq!(chebyshev_u_value(5, 1.0), 6.0);
        let sum: i128 = chebyshev_u_coefficients(5).iter().sum();
        assert_eq!(sum, 6);
        for n in 0..=50 {
            assert_eq!(chebyshev_u_value(n, 1.0), (n + 1) as f64);
            let sum: i128 = chebyshev_u_coefficients(n).iter().sum();
            assert_eq!(sum, (n + 1) as i128);
        }
    }

    #[test]
    fn leading_coefficient_is_power_of_two() {
        let c = chebyshev_u_coefficients(50);
        assert_eq!(c.len(), 51);
        assert_eq!(c[50], 1i128 << 50);
        // The largest coefficient exceeds i64 range well before n = 50 if the
        // recurrence were run in 64-bit; make sure the values are intact by
        // evaluating against the trigonometric definition at a generic angle.
        let theta: f64 = 0.3;
        let want = ((51.0) * theta).sin() / theta.sin();
        let x = theta.cos();
        let via_recurrence = chebyshev_u_value(50, x);
        assert!((via_recurrence - want).abs() < 1e-9 * want.abs().max(1.0));
    }

    #[test]
    fn coefficients_and_recurrence_agree_at_modest_degree() {
        for n in 0..=20 {
            let coeffs = chebyshev_u_coefficients(n);
            for &x in &[-0.9, -0.4, 0.0, 0.3, 0.77, 1.0] {
                let mut horner = 0.0;
                for &c in coeffs.iter().rev() {
                    horner = horner * x + c as f64;
                }
                let rec = chebyshev_u_value(n, x);
                assert!(
                    (horner - rec).abs() <= 1e-9 * rec.abs().max(1.0),
                    "n={n}, x={x}: {horner} vs {rec}"
                );
            }
        }
    }

    #[test]
    fn sine_identity_error_stays_tiny() {
        let full = SubInterval::new(0.0, 1.0).unwrap();
        assert_eq!(sine_identity_check(1, full, 101).unwrap(), 0.0);
        assert!(sine_identity_check(2, full, 1001).unwrap() <= 1e-12);
        let half = SubInterval::new(0.0, 0.5).unwrap();
        assert!(sine_identity_check(50, half, 10_000).unwrap() <= 1e-9);
        assert!(sine_identity_check(0, full, 10).is_err());
        assert!(sine_identity_check(3, full, 0).is_err());
    }
}
