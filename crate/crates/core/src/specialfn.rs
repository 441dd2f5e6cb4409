//! Gegenbauer polynomials, associated Gegenbauer functions and the Kummer
//! function.
//!
//! Conventions: `C_l^{(α)}` is the standard Gegenbauer polynomial with
//! `C_1^{(α)}(x) = 2αx`. The associated function of order `m` is
//! `(1 − x²)^{m/2} dᵐ/dxᵐ C_l^{(α)}(x)`, with no Condon–Shortley phase, so it
//! is positive as `x → 1⁻` whenever `α > 0`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureRule, WeightFunction};
use crate::Residual;

/// Largest |x| for which a non-terminating Kummer series is evaluated.
pub const KUMMER_SERIES_MAX_ABS_X: f64 = 50.0;
const KUMMER_MAX_TERMS: usize = 2000;
/// Raw norms below this are treated as an identically vanishing function.
const NORM_FLOOR: f64 = 1e-280;

/// Degree `l`, order `α` and associated order `m` of an associated
/// Gegenbauer function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParam {
    degree: u32,
    alpha: f64,
    order: u32,
}

impl GegenbauerParam {
    pub fn new(degree: u32, alpha: f64, order: u32) -> Result<Self> {
        check_alpha(alpha)?;
        if order > degree {
            return Err(Error::InvalidGegenbauer(format!(
                "associated order m = {order} exceeds degree l = {degree}"
            )));
        }
        Ok(Self { degree, alpha, order })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `2^m (α)_m`, the constant produced by differentiating `m` times.
    pub fn ladder_prefactor(&self) -> f64 {
        (0..self.order).fold(1.0, |acc, i| acc * 2.0 * (self.alpha + f64::from(i)))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > -0.5) {
        return Err(Error::InvalidGegenbauer(format!(
            "order alpha = {alpha} must exceed -1/2"
        )));
    }
    Ok(())
}

fn check_closed(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
    }
    Ok(())
}

/// `C_l^{(α)}(x)` by the ascending three-term recurrence
/// `n C_n = 2x(n + α − 1) C_{n−1} − (n + 2α − 2) C_{n−2}`.
pub fn gegenbauer(l: u32, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_closed(x)?;
    Ok(gegenbauer_unchecked(l, alpha, x))
}

pub(crate) fn gegenbauer_unchecked(l: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if l == 0 {
        return prev;
    }
    let mut cur = 2.0 * alpha * x;
    for n in 2..=l {
        let n = f64::from(n);
        let next = (2.0 * x * (n + alpha - 1.0) * cur - (n + 2.0 * alpha - 2.0) * prev) / n;
        prev = cur;
        cur = next;
    }
    cur
}

/// `k`-th derivative of `C_l^{(α)}` via the ladder `C′_l^{(α)} = 2α C_{l−1}^{(α+1)}`.
pub(crate) fn gegenbauer_derivative(l: u32, alpha: f64, k: u32, x: f64) -> f64 {
    if k > l {
        return 0.0;
    }
    let prefactor = (0..k).fold(1.0, |acc, i| acc * 2.0 * (alpha + f64::from(i)));
    prefactor * gegenbauer_unchecked(l - k, alpha + f64::from(k), x)
}

/// `(1 − x²)^{m/2} dᵐ/dxᵐ C_l^{(α)}(x)`.
pub fn associated_gegenbauer(p: GegenbauerParam, x: f64) -> Result<f64> {
    check_closed(x)?;
    let m = p.order;
    let envelope = libm::pow(1.0 - x * x, f64::from(m) / 2.0);
    Ok(envelope * gegenbauer_derivative(p.degree, p.alpha, m, x))
}

/// `ln` of the constant `N` making `N (1 − x²)^{m/2} C_{l−m}^{(α+m)}(x)`
/// unit-norm under `(1 − x²)^{α − 1/2}`, i.e. the associated function with
/// its ladder prefactor stripped. Keeping the result in log form lets the
/// harmonics multiply many factors without under/overflow.
pub(crate) fn ln_scaled_norm(p: GegenbauerParam, rule: &QuadratureRule) -> Result<f64> {
    let absorbed = absorbed_power(p, rule)?;
    let (l, m, alpha) = (p.degree, p.order, p.alpha);
    let required = 2 * l + 2 * absorbed;
    if rule.exact_degree() < required {
        return Err(Error::InsufficientQuadrature(format!(
            "normalizing degree {l} needs exactness {required}, rule has {}",
            rule.exact_degree()
        )));
    }
    let power = i32::try_from(m + absorbed).unwrap_or(i32::MAX);
    let raw = rule.integrate(|x| {
        let c = gegenbauer_unchecked(l - m, alpha + f64::from(m), x);
        libm::pow(1.0 - x * x, f64::from(power)) * c * c
    });
    if raw.is_nan() || raw <= NORM_FLOOR {
        return Err(Error::Degenerate(format!(
            "raw norm {raw} of (l = {l}, m = {m}, alpha = {alpha}) below floor"
        )));
    }
    Ok(-0.5 * libm::log(raw))
}

/// Integer power `e` of `(1 − x²)` that must be absorbed into the integrand
/// when `rule` integrates against `(1 − x²)^{α_r − 1/2}` but the target
/// weight is `(1 − x²)^{α − 1/2}`.
fn absorbed_power(p: GegenbauerParam, rule: &QuadratureRule) -> Result<u32> {
    let WeightFunction::Gegenbauer(rule_alpha) = rule.weight() else {
        return Err(Error::InsufficientQuadrature(
            "normalization needs a rule on [-1, 1]".into(),
        ));
    };
    let excess = p.alpha - rule_alpha;
    let rounded = libm::round(excess);
    if excess < -1e-12 || libm::fabs(excess - rounded) > 1e-12 {
        return Err(Error::InsufficientQuadrature(format!(
            "rule weight alpha {rule_alpha} cannot absorb target alpha {}",
            p.alpha
        )));
    }
    Ok(rounded as u32)
}

/// Positive `N` with `∫ [N · associated_gegenbauer(p, x)]² (1 − x²)^{α − 1/2} dx = 1`.
///
/// `rule` may integrate against the target weight itself or against a
/// Gegenbauer weight whose exponent differs by a nonnegative integer (for
/// example Gauss–Legendre for half-integer `α`); the difference is absorbed
/// into the integrand and checked against the rule's exact degree.
pub fn normalize_angular_factor(p: GegenbauerParam, rule: &QuadratureRule) -> Result<f64> {
    let prefactor = p.ladder_prefactor();
    if prefactor == 0.0 {
        return Err(Error::Degenerate(format!(
            "alpha = 0 with m = {} gives the zero function",
            p.order
        )));
    }
    let ln_norm = ln_scaled_norm(p, rule)?;
    Ok(libm::exp(ln_norm) / libm::fabs(prefactor))
}

/// Residual of the associated Gegenbauer equation
///
/// ```text
/// (1 − x²) y″ − (2α + 1) x y′ + [l(l + 2α) − m(m + 2α − 1)/(1 − x²)] y = 0
/// ```
///
/// for `y = associated_gegenbauer(p, ·)`, with every derivative taken
/// analytically through the derivative ladder. `x` must be interior.
pub fn gegenbauer_ode_residual(p: GegenbauerParam, x: f64) -> Result<Residual> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} must lie strictly inside (-1, 1)")));
    }
    let (l, alpha) = (p.degree, p.alpha);
    let m = f64::from(p.order);
    let q = 1.0 - x * x;

    let g0 = gegenbauer_derivative(l, alpha, p.order, x);
    let g1 = gegenbauer_derivative(l, alpha, p.order + 1, x);
    let g2 = gegenbauer_derivative(l, alpha, p.order + 2, x);

    let w0 = libm::pow(q, m / 2.0);
    let (w1, w2) = if p.order == 0 {
        (0.0, 0.0)
    } else {
        let w1 = -m * x * libm::pow(q, m / 2.0 - 1.0);
        let w2 = -m * libm::pow(q, m / 2.0 - 1.0) + m * (m - 2.0) * x * x * libm::pow(q, m / 2.0 - 2.0);
        (w1, w2)
    };

    let y = w0 * g0;
    let dy = w1 * g0 + w0 * g1;
    let d2y = w2 * g0 + 2.0 * w1 * g1 + w0 * g2;

    let lf = f64::from(l);
    let terms = [
        q * d2y,
        -(2.0 * alpha + 1.0) * x * dy,
        lf * (lf + 2.0 * alpha) * y,
        -m * (m + 2.0 * alpha - 1.0) / q * y,
    ];
    Ok(Residual {
        value: terms.iter().sum(),
        scale: terms.iter().map(|t| libm::fabs(*t)).sum(),
    })
}

fn nonpositive_integer(v: f64) -> Option<u64> {
    (v <= 0.0 && libm::floor(v) == v && v > -(u32::MAX as f64)).then(|| (-v) as u64)
}

/// Coefficients `(−j)_i / ((c)_i i!)`, `i = 0..=j`, of the terminating
/// Kummer polynomial `M(−j, c, x)`.
pub fn kummer_polynomial(j: u32, c: f64) -> Result<Vec<f64>> {
    if let Some(pole) = nonpositive_integer(c) {
        if u64::from(j) > pole {
            return Err(Error::Domain(format!(
                "M(-{j}, {c}, x) hits the pole of (c)_i before terminating"
            )));
        }
    }
    let mut coeffs = Vec::with_capacity(j as usize + 1);
    let mut term = 1.0;
    coeffs.push(term);
    for i in 0..j {
        let i = f64::from(i);
        term *= (i - f64::from(j)) / ((c + i) * (i + 1.0));
        coeffs.push(term);
    }
    Ok(coeffs)
}

/// Horner evaluation of `Σ coeffs[i] xⁱ`.
pub(crate) fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Kummer's confluent hypergeometric function `M(a, c, x) = ₁F₁(a; c; x)`.
///
/// When `a` is a non-positive integer the series is summed exactly as a
/// polynomial. Otherwise the series is summed to convergence for
/// `|x| ≤ 50`, using `M(a, c, x) = eˣ M(c − a, c, −x)` for negative `x`;
/// arguments outside that region are refused.
pub fn kummer_m(a: f64, c: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && c.is_finite() && x.is_finite()) {
        return Err(Error::Domain("non-finite Kummer argument".into()));
    }
    if let Some(j) = nonpositive_integer(a) {
        let j = u32::try_from(j).map_err(|_| Error::Domain(format!("a = {a} too large")))?;
        return Ok(polyval(&kummer_polynomial(j, c)?, x));
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::Domain(format!("c = {c} is a pole of M(a, c, x)")));
    }
    if libm::fabs(x) > KUMMER_SERIES_MAX_ABS_X {
        return Err(Error::SeriesRegion(format!(
            "|x| = {} exceeds {KUMMER_SERIES_MAX_ABS_X} for non-terminating a = {a}",
            libm::fabs(x)
        )));
    }
    if x < 0.0 {
        return Ok(libm::exp(x) * kummer_series(c - a, c, -x)?);
    }
    kummer_series(a, c, x)
}

fn kummer_series(a: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 0..KUMMER_MAX_TERMS {
        let i = i as f64;
        term *= (a + i) * x / ((c + i) * (i + 1.0));
        sum += term;
        if libm::fabs(term) <= f64::EPSILON * 0.25 * libm::fabs(sum) {
            return Ok(sum);
        }
    }
    Err(Error::SeriesRegion(format!(
        "series M({a}, {c}, {x}) did not converge in {KUMMER_MAX_TERMS} terms"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn param(l: u32, alpha: f64, m: u32) -> GegenbauerParam {
        GegenbauerParam::new(l, alpha, m).unwrap()
    }

    /// Coefficients (ascending powers) of C_l^{(α)} from the explicit sum
    /// Σ_k (−1)^k (α)_{l−k} / (k! (l−2k)!) (2x)^{l−2k}, in exact rationals.
    fn explicit_coefficients(l: usize, alpha: &BigRational) -> Vec<BigRational> {
        let fact = |n: usize| (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i));
        let poch = |n: usize| {
            (0..n).fold(BigRational::one(), |a, i| a * (alpha + BigRational::from_integer(BigInt::from(i))))
        };
        let mut coeffs = vec![BigRational::zero(); l + 1];
        for k in 0..=l / 2 {
            let p = l - 2 * k;
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let two_p = BigInt::from(2u8).pow(p as u32);
            coeffs[p] = poch(l - k) * BigRational::new(sign * two_p, fact(k) * fact(p));
        }
        coeffs
    }

    /// Coefficients of d^l/dx^l (1 − x²)^{l} scaled to match C_l^{(1/2)} = P_l
    /// (Rodrigues: P_l = 1/(2^l l!) d^l/dx^l (x² − 1)^l).
    fn rodrigues_legendre(l: usize) -> Vec<BigRational> {
        // (x² − 1)^l = Σ_i binom(l, i) x^{2i} (−1)^{l−i}
        let binom = |n: usize, k: usize| {
            (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n - i)) / (1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i))
        };
        let mut poly = vec![BigInt::zero(); 2 * l + 1];
        for i in 0..=l {
            let sign = if (l - i).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
            poly[2 * i] = sign * binom(l, i);
        }
        for _ in 0..l {
            poly = poly.iter().enumerate().skip(1).map(|(p, c)| c * BigInt::from(p)).collect();
        }
        let scale = BigInt::from(2u8).pow(l as u32) * (1..=l).fold(BigInt::one(), |a, i| a * BigInt::from(i));
        poly.into_iter().map(|c| BigRational::new(c, scale.clone())).collect()
    }

    fn to_f64(r: &BigRational) -> f64 {
        use num_traits::ToPrimitive;
        r.to_f64().unwrap()
    }

    #[test]
    fn gegenbauer_examples() {
        for x in [-1.0, -0.3, 0.0, 0.9, 1.0] {
            assert_eq!(gegenbauer(0, 1.7, x).unwrap(), 1.0);
        }
        for x in [-1.0, 0.0, 0.5, 1.0] {
            assert_abs_diff_eq!(gegenbauer(2, 0.5, x).unwrap(), (3.0 * x * x - 1.0) / 2.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(gegenbauer(1, 1.0, 0.3).unwrap(), 0.6, epsilon = 1e-15);
        assert!(gegenbauer(2, 0.5, 1.01).is_err());
        assert!(gegenbauer(2, -0.5, 0.1).is_err());
    }

    #[test]
    fn recurrence_matches_rational_oracles() {
        let xs = [-0.93, -0.41, 0.0, 0.27, 0.66, 1.0];
        for (num, den) in [(1, 2), (1, 1), (3, 2), (2, 1)] {
            let alpha = BigRational::new(BigInt::from(num), BigInt::from(den));
            for l in 0..=6usize {
                let coeffs = explicit_coefficients(l, &alpha);
                if num == 1 && den == 2 {
                    assert_eq!(coeffs, rodrigues_legendre(l), "explicit vs Rodrigues at l = {l}");
                }
                let cf: Vec<f64> = coeffs.iter().map(to_f64).collect();
                for x in xs {
                    let want = polyval(&cf, x);
                    let got = gegenbauer(l as u32, to_f64(&alpha), x).unwrap();
                    assert_abs_diff_eq!(got, want, epsilon = 1e-12 * want.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn associated_examples() {
        // l = m: constant times (1 − x²)^{l/2}
        let p = param(3, 1.5, 3);
        let base = associated_gegenbauer(p, 0.0).unwrap();
        for x in [-0.8, 0.2, 0.6] {
            let want = base * libm::pow(1.0 - x * x, 1.5);
            assert_relative_eq!(associated_gegenbauer(p, x).unwrap(), want, max_relative = 1e-13);
        }
        // P_2^1 shape: d/dx (3x² − 1)/2 = 3x
        for x in [-0.7, 0.1, 0.55] {
            let want = 3.0 * x * libm::sqrt(1.0 - x * x);
            assert_abs_diff_eq!(associated_gegenbauer(param(2, 0.5, 1), x).unwrap(), want, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(associated_gegenbauer(param(1, 0.5, 0), 0.7).unwrap(), 0.7, epsilon = 1e-15);
        assert!(GegenbauerParam::new(2, 0.5, 3).is_err());
    }

    #[test]
    fn normalization_examples() {
        let gl = QuadratureRule::gauss_legendre(4).unwrap();
        assert_relative_eq!(normalize_angular_factor(param(0, 0.5, 0), &gl).unwrap(), 1.0 / 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(normalize_angular_factor(param(1, 0.5, 0), &gl).unwrap(), 1.5f64.sqrt(), max_relative = 1e-14);
        // Legendre rule absorbing (1 − x²)^1 for α = 3/2
        let p = param(3, 1.5, 1);
        let n = normalize_angular_factor(p, &QuadratureRule::gauss_legendre(8).unwrap()).unwrap();
        let own = QuadratureRule::gauss_gegenbauer(8, 1.5).unwrap();
        let n2 = normalize_angular_factor(p, &own).unwrap();
        assert_relative_eq!(n, n2, max_relative = 1e-13);
        let selfdot = own.integrate(|x| (n2 * associated_gegenbauer(p, x).unwrap()).powi(2));
        assert_abs_diff_eq!(selfdot, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn normalization_refusals() {
        let small = QuadratureRule::gauss_legendre(2).unwrap();
        assert!(matches!(
            normalize_angular_factor(param(3, 0.5, 0), &small),
            Err(Error::InsufficientQuadrature(_))
        ));
        // α = 1 is not reachable from the Legendre weight by an integer power
        let gl = QuadratureRule::gauss_legendre(10).unwrap();
        assert!(normalize_angular_factor(param(2, 1.0, 0), &gl).is_err());
        // α = 0, m ≥ 1 is identically zero
        let cheb = QuadratureRule::gauss_gegenbauer(10, 0.0).unwrap();
        assert!(matches!(normalize_angular_factor(param(2, 0.0, 1), &cheb), Err(Error::Degenerate(_))));
    }

    #[test]
    fn weighted_orthogonality() {
        for &alpha in &[0.5, 1.0, 1.5, 2.5] {
            let rule = QuadratureRule::gauss_gegenbauer(12, alpha).unwrap();
            for m in 0..=3u32 {
                for l in m..=8 {
                    for lp in (l + 1)..=8 {
                        let v = rule.integrate(|x| {
                            associated_gegenbauer(param(l, alpha, m), x).unwrap()
                                * associated_gegenbauer(param(lp, alpha, m), x).unwrap()
                        });
                        let na = normalize_angular_factor(param(l, alpha, m), &rule).unwrap();
                        let nb = normalize_angular_factor(param(lp, alpha, m), &rule).unwrap();
                        assert!((v * na * nb).abs() < 1e-10, "alpha {alpha} m {m} l {l} l' {lp}: {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn ode_residual_examples() {
        let r = gegenbauer_ode_residual(param(2, 0.5, 0), 0.4).unwrap();
        assert!(r.relative() < 1e-14);
        let r = gegenbauer_ode_residual(param(3, 1.0, 2), -0.2).unwrap();
        assert!(r.relative() < 1e-13);
        for alpha in [0.0, 0.5, 2.0] {
            assert_eq!(gegenbauer_ode_residual(param(0, alpha, 0), 0.37).unwrap().value, 0.0);
        }
        assert!(gegenbauer_ode_residual(param(2, 0.5, 1), 1.0).is_err());
    }

    #[test]
    fn ode_residual_sweep() {
        for k in 2..=8u32 {
            let alpha = f64::from(k - 2) / 2.0;
            for l in 0..=8 {
                for m in 0..=l {
                    for i in 1..=50 {
                        let x = -1.0 + 2.0 * f64::from(i) / 51.0;
                        let r = gegenbauer_ode_residual(param(l, alpha, m), x).unwrap();
                        assert!(r.relative() <= 1e-9, "k {k} l {l} m {m} x {x}: {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn kummer_examples() {
        for x in [-3.0, 0.0, 2.5] {
            assert_eq!(kummer_m(0.0, 1.3, x).unwrap(), 1.0);
            assert_abs_diff_eq!(kummer_m(-1.0, 2.0, x).unwrap(), 1.0 - x / 2.0, epsilon = 1e-15);
        }
        for a in [0.7, 2.0, 3.3] {
            for i in 0..=20 {
                let x = -5.0 + 0.5 * f64::from(i);
                assert_relative_eq!(kummer_m(a, a, x).unwrap(), libm::exp(x), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn kummer_refusals() {
        assert!(kummer_m(0.5, -2.0, 1.0).is_err());
        assert!(matches!(kummer_m(0.5, 1.0, 60.0), Err(Error::SeriesRegion(_))));
        // polynomial case with a pole later than termination is allowed
        assert_abs_diff_eq!(kummer_m(-1.0, -2.0, 3.0).unwrap(), 1.0 + 1.5, epsilon = 1e-15);
        assert!(kummer_m(-3.0, -2.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn kummer_terminates_as_degree_j_polynomial(j in 0u32..12, c in 0.5f64..9.0, x in -4.0f64..8.0) {
            let coeffs = kummer_polynomial(j, c).unwrap();
            prop_assert_eq!(coeffs.len(), j as usize + 1);
            prop_assert!(coeffs[j as usize] != 0.0);
            let direct = kummer_m(-f64::from(j), c, x).unwrap();
            prop_assert!((direct - polyval(&coeffs, x)).abs() <= 1e-12 * direct.abs().max(1.0));
        }

        #[test]
        fn derivative_ladder_matches_central_difference(l in 1u32..10, alpha in 0.25f64..3.0, x in -0.95f64..0.95) {
            let h = 1e-5;
            let fd = (gegenbauer(l, alpha, x + h).unwrap() - gegenbauer(l, alpha, x - h).unwrap()) / (2.0 * h);
            let ladder = 2.0 * alpha * gegenbauer(l - 1, alpha + 1.0, x).unwrap();
            prop_assert!((fd - ladder).abs() <= 1e-6 * ladder.abs().max(1.0), "fd {} ladder {}", fd, ladder);
        }
    }
}
