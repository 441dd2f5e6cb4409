//! Closed-form spectrum and degeneracy combinatorics.
//!
//! Levels are labelled by `n ≥ 0` with the ground level at `n = 0`, so the
//! familiar three-dimensional principal quantum number is `n + 1`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::hypersphere::{enumerate_chains, AngularChain};

/// Upper bound on the number of states [`enumerate_level_states`] will
/// materialize unless the caller passes its own cap.
pub const DEFAULT_STATE_CAP: u64 = 1_000_000;

/// Mass, Coulomb coupling and action quantum of `H = p²/2μ − k/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    mu: f64,
    k: f64,
    hbar: f64,
}

impl PhysicalParams {
    pub fn new(mu: f64, k: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mu", mu), ("k", k), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(Self { mu, k, hbar })
    }

    /// μ = k = ħ = 1.
    pub const fn atomic() -> Self {
        Self { mu: 1.0, k: 1.0, hbar: 1.0 }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::atomic()
    }
}

/// A bound level `n` of the `d`-dimensional problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelIndex {
    d: u32,
    n: u32,
}

impl LevelIndex {
    pub fn new(d: u32, n: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidLevel(format!("dimension d = {d} must be >= 2")));
        }
        Ok(Self { d, n })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Every `(j, l)` with `j + l = n`, ordered by increasing `l`.
    pub fn decompositions(&self) -> impl Iterator<Item = (u32, u32)> {
        let n = self.n;
        (0..=n).map(move |l| (n - l, l))
    }

    /// `n + (d − 1)/2`, the effective principal number.
    pub fn effective_n(&self) -> f64 {
        f64::from(self.n) + (f64::from(self.d) - 1.0) / 2.0
    }
}

/// `E_n = −μk² / (2ħ²(n + (d−1)/2)²)`.
pub fn energy_level(idx: LevelIndex, params: PhysicalParams) -> f64 {
    let nu = idx.effective_n();
    -params.mu * params.k * params.k / (2.0 * params.hbar * params.hbar * nu * nu)
}

/// Eigenvalue `n(n + d − 1)ħ²` of the SO(d+1) Casimir operator.
pub fn casimir_eigenvalue(idx: LevelIndex, params: PhysicalParams) -> f64 {
    let n = f64::from(idx.n);
    n * (n + f64::from(idx.d) - 1.0) * params.hbar * params.hbar
}

/// Exact residual of the Casimir/energy relation
///
/// ```text
/// n(n + d − 1)ħ² = −((d − 1)/2)² ħ² − μk² / (2 E_n)
/// ```
///
/// with `E_n` taken from the closed form and every quantity converted to an
/// exact rational (each `f64` parameter is a dyadic rational). The residual
/// is zero for every valid level and parameter triple.
pub fn casimir_energy_consistency(idx: LevelIndex, params: PhysicalParams) -> BigRational {
    let rat = |v: f64| BigRational::from_float(v).expect("validated parameters are finite");
    let mu = rat(params.mu);
    let k = rat(params.k);
    let hbar = rat(params.hbar);
    let hbar2 = &hbar * &hbar;
    let two = BigRational::from_integer(BigInt::from(2u8));

    let n = BigRational::from_integer(BigInt::from(idx.n));
    let half_dim = BigRational::new(BigInt::from(idx.d) - BigInt::one(), BigInt::from(2u8));
    let nu = &n + &half_dim;

    let coupling = &mu * &k * &k;
    let energy = -(&coupling / (&two * &hbar2 * &nu * &nu));

    let casimir = &n * (&n + BigRational::from_integer(BigInt::from(idx.d)) - BigRational::one())
        * &hbar2;
    let rhs = -(&half_dim * &half_dim * &hbar2) - coupling / (two * energy);
    casimir - rhs
}

/// `∏_{i=lo}^{hi} i`, or 1 for an empty range.
fn product(lo: u64, hi: u64) -> BigUint {
    (lo..=hi).fold(BigUint::one(), |acc, i| acc * i)
}

/// Dimension of the degree-`l` harmonic representation of SO(d):
/// `(2l + d − 2)(l + d − 3)! / ((d − 2)! l!)`, with the circle count
/// (1 for `l = 0`, 2 otherwise) at `d = 2`.
pub fn so_d_rep_dim(d: u32, l: u32) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::InvalidLevel(format!("dimension d = {d} must be >= 2")));
    }
    if d == 2 {
        return Ok(BigUint::from(if l == 0 { 1u8 } else { 2u8 }));
    }
    let (d, l) = (u64::from(d), u64::from(l));
    // (l + d − 3)! / l! = (l+1)(l+2)…(l+d−3)
    let numerator = BigUint::from(2 * l + d - 2) * product(l + 1, l + d - 3);
    Ok(numerator / product(1, d - 2))
}

/// Degeneracy `g = (2n + d − 1)(n + d − 2)! / (n! (d − 1)!)` of level `n`.
pub fn degeneracy(idx: LevelIndex) -> BigUint {
    let (d, n) = (u64::from(idx.d), u64::from(idx.n));
    // (n + d − 2)! / n! = (n+1)…(n+d−2)
    BigUint::from(2 * n + d - 1) * product(n + 1, n + d - 2) / product(1, d - 1)
}

/// All angular chains belonging to level `n`: every admissible ladder whose
/// top entry is at most `n`, ordered by top entry and then lexicographically.
///
/// Refuses when the degeneracy exceeds `cap`.
pub fn enumerate_level_states(idx: LevelIndex, cap: u64) -> Result<Vec<AngularChain>> {
    let g = degeneracy(idx);
    if g > BigUint::from(cap) {
        return Err(Error::TooManyStates { count: g.to_str_radix(10), cap });
    }
    let mut states = Vec::with_capacity(g.to_usize().unwrap_or(0));
    for l in 0..=idx.n {
        states.extend(enumerate_chains(idx.d, l)?);
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_traits::Zero;

    fn lvl(d: u32, n: u32) -> LevelIndex {
        LevelIndex::new(d, n).unwrap()
    }

    #[test]
    fn params_reject_nonpositive() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::NAN).is_err());
        assert_eq!(PhysicalParams::default(), PhysicalParams::new(1.0, 1.0, 1.0).unwrap());
    }

    #[test]
    fn level_rejects_low_dimension() {
        assert!(LevelIndex::new(1, 0).is_err());
        assert!(LevelIndex::new(0, 3).is_err());
        let decomps: Vec<_> = lvl(3, 2).decompositions().collect();
        assert_eq!(decomps, [(2, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn energy_examples() {
        let p = PhysicalParams::atomic();
        assert_eq!(energy_level(lvl(3, 0), p), -0.5);
        assert_eq!(energy_level(lvl(5, 0), p), -0.125);
        assert_eq!(energy_level(lvl(2, 0), p), -2.0);
        let far = energy_level(lvl(3, 100_000), p);
        assert!(far < 0.0 && far > -1e-10);
    }

    #[test]
    fn energy_scaling_law() {
        let base = energy_level(lvl(4, 2), PhysicalParams::atomic());
        let scaled = energy_level(lvl(4, 2), PhysicalParams::new(3.0, 2.0, 0.5).unwrap());
        assert_relative_eq!(scaled, base * 3.0 * 4.0 / 0.25, max_relative = 1e-15);
    }

    #[test]
    fn casimir_examples() {
        let p = PhysicalParams::atomic();
        assert_eq!(casimir_eigenvalue(lvl(7, 0), p), 0.0);
        assert_eq!(casimir_eigenvalue(lvl(3, 1), p), 3.0);
        assert_eq!(casimir_eigenvalue(lvl(4, 2), p), 10.0);
    }

    #[test]
    fn casimir_residual_examples() {
        let p = PhysicalParams::atomic();
        for (d, n) in [(3, 2), (7, 5), (4, 0)] {
            assert!(casimir_energy_consistency(lvl(d, n), p).is_zero());
        }
        let odd = PhysicalParams::new(0.3, 1.7, 2.9).unwrap();
        assert!(casimir_energy_consistency(lvl(6, 11), odd).is_zero());
    }

    #[test]
    fn rep_dim_examples() {
        for l in 0..=10u32 {
            assert_eq!(so_d_rep_dim(3, l).unwrap(), BigUint::from(2 * l + 1));
        }
        for d in 2..=12 {
            assert_eq!(so_d_rep_dim(d, 0).unwrap(), BigUint::one());
        }
        assert_eq!(so_d_rep_dim(4, 1).unwrap(), BigUint::from(4u8));
        assert_eq!(so_d_rep_dim(2, 5).unwrap(), BigUint::from(2u8));
        assert!(so_d_rep_dim(1, 0).is_err());
    }

    #[test]
    fn degeneracy_examples() {
        for n in 0..=10u32 {
            assert_eq!(degeneracy(lvl(3, n)), BigUint::from((n + 1) * (n + 1)));
        }
        for d in 2..=10 {
            assert_eq!(degeneracy(lvl(d, 0)), BigUint::one());
        }
        assert_eq!(degeneracy(lvl(4, 1)), BigUint::from(5u8));
        assert_eq!(degeneracy(lvl(2, 3)), BigUint::from(7u8));
    }

    #[test]
    fn large_degeneracy_is_exact() {
        // g(10, 20) = 49 · 28! / (20! · 9!) computed independently in u128
        let mut num: u128 = 49;
        for i in 21..=28u128 {
            num *= i;
        }
        let den: u128 = (1..=9u128).product();
        assert_eq!(degeneracy(lvl(10, 20)), BigUint::from(num / den));
    }

    #[test]
    fn enumerate_d3_n1() {
        let states = enumerate_level_states(lvl(3, 1), DEFAULT_STATE_CAP).unwrap();
        let labels: Vec<_> = states.iter().map(|c| alloc::format!("{c}")).collect();
        assert_eq!(labels, ["0,0,+", "1,0,+", "1,1,+", "1,1,-"]);
        assert_eq!(enumerate_level_states(lvl(2, 0), 10).unwrap().len(), 1);
        assert_eq!(enumerate_level_states(lvl(4, 1), 10).unwrap().len(), 5);
    }

    #[test]
    fn enumerate_respects_cap() {
        let err = enumerate_level_states(lvl(6, 6), 10).unwrap_err();
        assert!(matches!(err, Error::TooManyStates { cap: 10, .. }));
    }
}
