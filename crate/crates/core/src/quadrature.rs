//! One-dimensional Gauss rules built by the Golub–Welsch method, plus the
//! periodic trapezoid rule for the azimuthal circle.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::tridiag;

/// Weight function a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFunction {
    /// `(1 − x²)^{α − 1/2}` on `[−1, 1]`; `α = 1/2` is the Legendre weight.
    Gegenbauer(f64),
    /// `x^a e^{−x}` on `[0, ∞)`.
    Laguerre(f64),
    /// Uniform weight on the circle `[0, 2π)`.
    Periodic,
}

impl WeightFunction {
    /// `∫ w`, the total mass of the weight.
    pub fn total_mass(&self) -> f64 {
        match *self {
            WeightFunction::Gegenbauer(alpha) => {
                // B(1/2, α + 1/2)
                libm::sqrt(PI) * libm::exp(libm::lgamma(alpha + 0.5) - libm::lgamma(alpha + 1.0))
            }
            WeightFunction::Laguerre(a) => libm::tgamma(a + 1.0),
            WeightFunction::Periodic => 2.0 * PI,
        }
    }
}

/// Nodes and strictly positive weights of a quadrature rule.
///
/// `exact_degree` is the largest polynomial degree (trigonometric degree
/// for [`WeightFunction::Periodic`]) integrated exactly against `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    weight: WeightFunction,
    exact_degree: u32,
}

impl QuadratureRule {
    /// `n`-point Gauss–Legendre rule.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        Self::gauss_gegenbauer(n, 0.5)
    }

    /// `n`-point Gauss rule for the weight `(1 − x²)^{α − 1/2}`.
    pub fn gauss_gegenbauer(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > -0.5) {
            return Err(Error::Domain(format!("Gegenbauer weight needs alpha > -1/2, got {alpha}")));
        }
        check_points(n)?;
        let diag = alloc::vec![0.0; n];
        let off: Vec<f64> = (1..n)
            .map(|i| {
                let i = i as f64;
                let ratio = if i == 1.0 {
                    2.0 / (1.0 + alpha)
                } else {
                    i * (i + 2.0 * alpha - 1.0) / ((i + alpha) * (i + alpha - 1.0))
                };
                0.5 * libm::sqrt(ratio)
            })
            .collect();
        Self::golub_welsch(&diag, &off, WeightFunction::Gegenbauer(alpha))
    }

    /// `n`-point generalized Gauss–Laguerre rule for `x^a e^{−x}`.
    pub fn gauss_laguerre(n: usize, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > -1.0) {
            return Err(Error::Domain(format!("Laguerre weight needs a > -1, got {a}")));
        }
        check_points(n)?;
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + a + 1.0).collect();
        let off: Vec<f64> = (1..n).map(|i| libm::sqrt(i as f64 * (i as f64 + a))).collect();
        Self::golub_welsch(&diag, &off, WeightFunction::Laguerre(a))
    }

    /// `m` equally spaced points on `[0, 2π)`; exact for `e^{ijθ}`, `|j| < m`.
    pub fn periodic_trapezoid(m: usize) -> Result<Self> {
        check_points(m)?;
        let h = 2.0 * PI / m as f64;
        Ok(Self {
            nodes: (0..m).map(|i| i as f64 * h).collect(),
            weights: alloc::vec![h; m],
            weight: WeightFunction::Periodic,
            exact_degree: (m - 1) as u32,
        })
    }

    fn golub_welsch(diag: &[f64], off: &[f64], weight: WeightFunction) -> Result<Self> {
        let (nodes, first) = tridiag::eigen_with_first_components(diag, off)?;
        let mass = weight.total_mass();
        let weights: Vec<f64> = first.iter().map(|z| mass * z * z).collect();
        if weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::Eigensolver("non-positive quadrature weight".into()));
        }
        Ok(Self { exact_degree: (2 * nodes.len() - 1) as u32, nodes, weights, weight })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self) -> WeightFunction {
        self.weight
    }

    pub fn exact_degree(&self) -> u32 {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn check_points(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("quadrature rule needs at least one point".into()));
    }
    Ok(())
}
