//! Symmetric tridiagonal eigenvalue routines.
//!
//! Two independent algorithms live here: implicit QL with Wilkinson shifts
//! (all eigenvalues plus the first component of each eigenvector, which is
//! what Gauss quadrature needs) and Sturm-sequence bisection (any subset of
//! the lowest eigenvalues in `O(n)` memory, used by the radial solver).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;
const MAX_BISECTION_STEPS: usize = 400;

/// Eigenvalues (ascending) and the first component of the matching unit
/// eigenvectors of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `off` (`off.len() == diag.len() - 1`).
pub fn eigen_with_first_components(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    check_shape(n, off.len())?;
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.iter().copied().chain(core::iter::once(0.0)).collect();
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = libm::fabs(d[m]) + libm::fabs(d[m + 1]);
                if libm::fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::Eigensolver(format!(
                    "QL iteration did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok((order.iter().map(|&i| d[i]).collect(), order.iter().map(|&i| z[i]).collect()))
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let pivmin = f64::MIN_POSITIVE * 1e4;
    let mut count = 0;
    let mut q = diag[0] - x;
    if q <= 0.0 {
        if q == 0.0 {
            q = -pivmin;
        }
        count += 1;
    }
    for i in 1..diag.len() {
        let mut qi = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if libm::fabs(qi) < pivmin {
            qi = -pivmin;
        }
        if qi < 0.0 {
            count += 1;
        }
        q = qi;
    }
    count
}

/// The `count` smallest eigenvalues, ascending, by Sturm bisection.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    check_shape(n, off.len())?;
    if count > n {
        return Err(Error::Eigensolver(format!(
            "requested {count} eigenvalues of a {n}x{n} matrix"
        )));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    // Gershgorin interval
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let radius = if i > 0 { libm::fabs(off[i - 1]) } else { 0.0 }
            + if i + 1 < n { libm::fabs(off[i]) } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let pad = f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
    lo -= pad;
    hi += pad;

    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        // smallest x with at least k+1 eigenvalues below it
        let (mut a, mut b) = (values.last().copied().unwrap_or(lo), hi);
        let mut converged = false;
        for _ in 0..MAX_BISECTION_STEPS {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                converged = true;
                break;
            }
            if sturm_count(diag, off, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Eigensolver(format!("bisection for eigenvalue {k} stalled")));
        }
        values.push(0.5 * (a + b));
    }
    Ok(values)
}

fn check_shape(n: usize, off_len: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Eigensolver("empty matrix".into()));
    }
    if off_len + 1 != n {
        return Err(Error::Eigensolver(format!(
            "off-diagonal length {off_len} does not match dimension {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    // free-particle Laplacian: eigenvalues 2 − 2cos(kπ/(n+1))
    fn laplacian(n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let exact = (1..=n).map(|k| 2.0 - 2.0 * libm::cos(k as f64 * PI / (n as f64 + 1.0)));
        (vec![2.0; n], vec![-1.0; n - 1], exact.collect())
    }

    #[test]
    fn ql_matches_closed_form() {
        let (d, e, exact) = laplacian(40);
        let (vals, first) = eigen_with_first_components(&d, &e).unwrap();
        for (v, x) in vals.iter().zip(&exact) {
            assert_abs_diff_eq!(v, x, epsilon = 1e-13);
        }
        // first components of a unit-vector basis have unit sum of squares
        let s: f64 = first.iter().map(|z| z * z).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn bisection_matches_closed_form() {
        let (d, e, exact) = laplacian(500);
        let vals = lowest_eigenvalues(&d, &e, 5).unwrap();
        for (v, x) in vals.iter().zip(&exact) {
            assert_abs_diff_eq!(v, x, epsilon = 1e-14);
        }
    }

    #[test]
    fn bisection_agrees_with_ql_on_irregular_matrix() {
        let d: Vec<f64> = (0..30).map(|i| libm::sin(i as f64) * 3.0 + i as f64 * 0.1).collect();
        let e: Vec<f64> = (0..29).map(|i| 0.5 + libm::cos(i as f64 * 1.3)).collect();
        let (ql, _) = eigen_with_first_components(&d, &e).unwrap();
        let bis = lowest_eigenvalues(&d, &e, 30).unwrap();
        for (a, b) in ql.iter().zip(&bis) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn one_by_one_and_shape_errors() {
        assert_abs_diff_eq!(lowest_eigenvalues(&[3.0], &[], 1).unwrap()[0], 3.0, epsilon = 1e-15);
        assert!(lowest_eigenvalues(&[1.0, 2.0], &[], 1).is_err());
        assert!(lowest_eigenvalues(&[1.0], &[], 2).is_err());
        assert!(lowest_eigenvalues(&[1.0, 2.0], &[0.5], 0).unwrap().is_empty());
    }
}
