//! The radial equation
//!
//! ```text
//! R″ + (d−1)/r R′ + [2μk/(ħ²r) + 2μE/ħ² − l(l+d−2)/r²] R = 0
//! ```
//!
//! solved two ways: in closed form, `R = A rˡ e^{−κr} M(−j, 2l+d−1, 2κr)`,
//! and numerically, by a finite-difference matrix whose lowest eigenvalues
//! must reproduce the closed-form spectrum.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::specialfn::{kummer_polynomial, polyval};
use crate::spectrum::{energy_level, LevelIndex, PhysicalParams};
use crate::tridiag;
use crate::Residual;

/// Decay containment: `r_max ≥ CONTAINMENT / κ` for the lowest targeted
/// state. Default grids extend this to the highest requested state.
pub const CONTAINMENT: f64 = 30.0;
/// Coarsest admissible spacing, in units of the decay length `1/κ` of the
/// lowest state of the channel.
pub const MAX_SPACING_KAPPA: f64 = 0.05;
/// Default spacing in units of `1/κ` of the lowest state of the channel.
pub const DEFAULT_SPACING_KAPPA: f64 = 0.01;
/// At most one requested state per this many interior grid points.
pub const POINTS_PER_STATE: usize = 10;

/// Quantum numbers and decay constant of an analytic bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    d: u32,
    l: u32,
    j: u32,
    kappa: f64,
    energy: f64,
    params: PhysicalParams,
}

impl RadialState {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Radial node count.
    pub fn j(&self) -> u32 {
        self.j
    }

    /// `n = j + l`.
    pub fn n(&self) -> u32 {
        self.j + self.l
    }

    /// `κ = √(−2μE)/ħ`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn params(&self) -> PhysicalParams {
        self.params
    }

    /// `c = 2l + d − 1`, the second Kummer parameter.
    pub fn kummer_c(&self) -> f64 {
        f64::from(2 * self.l + self.d - 1)
    }
}

/// Polynomial bound state with `j` radial nodes in angular channel `l`:
/// `κ = μk / (ħ²(j + l + (d−1)/2))`, energy from the closed-form spectrum.
pub fn quantization(d: u32, l: u32, j: u32, params: PhysicalParams) -> Result<RadialState> {
    let n = j.checked_add(l).ok_or_else(|| Error::InvalidLevel(format!("j + l overflows for j = {j}, l = {l}")))?;
    let idx = LevelIndex::new(d, n)?;
    let kappa = params.mu() * params.k() / (params.hbar() * params.hbar() * idx.effective_n());
    Ok(RadialState { d, l, j, kappa, energy: energy_level(idx, params), params })
}

/// Uniform cell-centred grid `r_i = (i − ½) h`, `h = r_max / num_points`,
/// `i = 1 … num_points`, with a Dirichlet wall at `r = r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    num_points: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, num_points: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::Grid(format!("r_max = {r_max} must be finite and > 0")));
        }
        if num_points < 100 {
            return Err(Error::Grid(format!("num_points = {num_points} must be >= 100")));
        }
        Ok(Self { r_max, num_points })
    }

    /// Default grid for the lowest `num_states` states of channel `(d, l)`:
    /// `r_max = 30/κ` of the highest state and spacing `0.01/κ` of the
    /// lowest one.
    pub fn default_for(d: u32, l: u32, num_states: u32, params: PhysicalParams) -> Result<Self> {
        let top = quantization(d, l, num_states.saturating_sub(1), params)?;
        let ground = quantization(d, l, 0, params)?;
        let r_max = CONTAINMENT / top.kappa;
        let spacing = DEFAULT_SPACING_KAPPA / ground.kappa;
        Self::new(r_max, (libm::ceil(r_max / spacing) as usize).max(100))
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / self.num_points as f64
    }

    /// Cell centres `r_1 … r_N`.
    pub fn interior(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (1..=self.num_points).map(move |i| (i as f64 - 0.5) * h)
    }

    /// Halves the spacing at fixed `r_max`.
    pub fn refined(&self) -> Self {
        Self { r_max: self.r_max, num_points: 2 * self.num_points }
    }

    fn check_containment(&self, kappa: f64) -> Result<()> {
        if self.r_max * (1.0 + 1e-12) < CONTAINMENT / kappa {
            return Err(Error::Grid(format!(
                "r_max = {} does not contain decay length 1/kappa = {} ({}x required)",
                self.r_max,
                1.0 / kappa,
                CONTAINMENT
            )));
        }
        Ok(())
    }

    fn check_resolution(&self, kappa: f64) -> Result<()> {
        if self.spacing() * kappa > MAX_SPACING_KAPPA * (1.0 + 1e-12) {
            return Err(Error::Grid(format!(
                "spacing {} exceeds {} / kappa = {}",
                self.spacing(),
                MAX_SPACING_KAPPA,
                MAX_SPACING_KAPPA / kappa
            )));
        }
        Ok(())
    }
}

/// Normalized closed-form radial function of a [`RadialState`].
#[derive(Debug, Clone)]
pub struct RadialWavefunction {
    state: RadialState,
    /// coefficients of M(−j, c, t) in t = 2κr
    poly: Vec<f64>,
    ln_amplitude: f64,
}

impl RadialWavefunction {
    /// Fixes `A > 0` so that `∫₀^∞ R² r^{d−1} dr = 1`, by generalized
    /// Gauss–Laguerre quadrature in `t = 2κr` (exact for this integrand).
    pub fn new(state: RadialState) -> Result<Self> {
        let poly = kummer_polynomial(state.j, state.kummer_c())?;
        let moment = Self::laguerre_moment(&state, &poly, 0)?;
        // ∫ R² r^{d−1} dr = A² (2κ)^{−(2l+d)} ∫ t^{2l+d−1} e^{−t} M² dt
        let exponent = f64::from(2 * state.l + state.d);
        let ln_integral = -exponent * libm::log(2.0 * state.kappa) + libm::log(moment);
        Ok(Self { state, poly, ln_amplitude: -0.5 * ln_integral })
    }

    /// `∫₀^∞ t^{c − shift} e^{−t} M(−j, c, t)² dt`.
    fn laguerre_moment(state: &RadialState, poly: &[f64], shift: u32) -> Result<f64> {
        let a = state.kummer_c() - f64::from(shift);
        let rule = QuadratureRule::gauss_laguerre(state.j as usize + 1, a)?;
        Ok(rule.integrate(|t| {
            let m = polyval(poly, t);
            m * m
        }))
    }

    pub fn state(&self) -> &RadialState {
        &self.state
    }

    /// Normalization constant `A`.
    pub fn amplitude(&self) -> f64 {
        libm::exp(self.ln_amplitude)
    }

    /// `R(r)` for `r > 0`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("radius {r} must be finite and > 0")));
        }
        Ok(self.eval_unchecked(r))
    }

    fn eval_unchecked(&self, r: f64) -> f64 {
        let p = polyval(&self.poly, 2.0 * self.state.kappa * r);
        if p == 0.0 {
            return 0.0;
        }
        let ln_mag = self.ln_amplitude + f64::from(self.state.l) * libm::log(r) - self.state.kappa * r
            + libm::log(libm::fabs(p));
        libm::copysign(libm::exp(ln_mag), p)
    }

    /// Residual of the radial equation at `r` from analytic derivatives of
    /// the closed form.
    pub fn ode_residual(&self, r: f64) -> Result<Residual> {
        let s = &self.state;
        if !(r.is_finite() && r >= 1e-6 / s.kappa) {
            return Err(Error::Domain(format!("radius {r} must be >= 1e-6 / kappa")));
        }
        let (l, kappa) = (f64::from(s.l), s.kappa);
        let t = 2.0 * kappa * r;
        let dpoly: Vec<f64> = self.poly.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        let d2poly: Vec<f64> = dpoly.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        let q0 = polyval(&self.poly, t);
        let q1 = 2.0 * kappa * polyval(&dpoly, t);
        let q2 = 4.0 * kappa * kappa * polyval(&d2poly, t);

        // R = F·Q with F = A rˡ e^{−κr}; F′/F = l/r − κ, F″/F = (l/r − κ)² − l/r²
        let envelope = libm::exp(self.ln_amplitude + l * libm::log(r) - kappa * r);
        let phi = l / r - kappa;
        let r0 = envelope * q0;
        let r1 = envelope * (phi * q0 + q1);
        let r2 = envelope * ((phi * phi - l / (r * r)) * q0 + 2.0 * phi * q1 + q2);

        let p = s.params;
        let hbar2 = p.hbar() * p.hbar();
        let dm1 = f64::from(s.d) - 1.0;
        let terms = [
            r2,
            dm1 / r * r1,
            2.0 * p.mu() * p.k() / (hbar2 * r) * r0,
            2.0 * p.mu() * s.energy / hbar2 * r0,
            -l * (l + dm1 - 1.0) / (r * r) * r0,
        ];
        Ok(Residual {
            value: terms.iter().sum(),
            scale: terms.iter().map(|t| libm::fabs(*t)).sum(),
        })
    }

    /// `⟨1/r⟩ = ∫ R² r^{d−2} dr`.
    pub fn expectation_inverse_r(&self) -> Result<f64> {
        let s = &self.state;
        let moment = Self::laguerre_moment(s, &self.poly, 1)?;
        let exponent = f64::from(2 * s.l + s.d - 1);
        Ok(libm::exp(2.0 * self.ln_amplitude - exponent * libm::log(2.0 * s.kappa) + libm::log(moment)))
    }

    /// Number of sign changes across the interior grid nodes.
    pub fn count_nodes(&self, grid: &RadialGrid) -> Result<u32> {
        grid.check_resolution(self.state.kappa)?;
        grid.check_containment(self.state.kappa)?;
        let mut last_sign = 0.0;
        let mut changes = 0;
        for r in grid.interior() {
            let v = self.eval_unchecked(r);
            if v == 0.0 {
                continue;
            }
            let sign = libm::copysign(1.0, v);
            if last_sign != 0.0 && sign != last_sign {
                changes += 1;
            }
            last_sign = sign;
        }
        Ok(changes)
    }
}

/// `R(r)` of `state`; see [`RadialWavefunction`] for repeated evaluation.
pub fn radial_wavefunction(state: RadialState, r: f64) -> Result<f64> {
    RadialWavefunction::new(state)?.eval(r)
}

/// Residual of the radial equation for the closed-form state at `r`.
pub fn radial_ode_residual(state: RadialState, r: f64) -> Result<Residual> {
    RadialWavefunction::new(state)?.ode_residual(r)
}

/// Sign changes of the closed-form state across `grid`.
pub fn count_radial_nodes(state: RadialState, grid: &RadialGrid) -> Result<u32> {
    RadialWavefunction::new(state)?.count_nodes(grid)
}

/// Lowest `num_states` eigenvalues, ascending, of the finite-volume
/// discretization of
///
/// ```text
/// −(ħ²/2μ) r^{1−d} (r^{d−1} R′)′ + [ħ²l(l+d−2)/(2μr²) − k/r] R = E R,   R(r_max) = 0
/// ```
///
/// on `grid`. The flux `r^{d−1} R′` vanishes at the origin, and the
/// generalized problem is symmetrized through `u = r^{(d−1)/2} R`, leaving a
/// symmetric tridiagonal matrix.
pub fn solve_radial_numeric(
    d: u32,
    l: u32,
    params: PhysicalParams,
    grid: &RadialGrid,
    num_states: u32,
) -> Result<Vec<f64>> {
    LevelIndex::new(d, l)?;
    if num_states == 0 {
        return Ok(Vec::new());
    }
    let cells = grid.num_points;
    if num_states as usize * POINTS_PER_STATE > cells {
        return Err(Error::Grid(format!(
            "{num_states} states exceed the resolvable count {} of {cells} grid points",
            cells / POINTS_PER_STATE
        )));
    }
    let ground = quantization(d, l, 0, params)?.kappa;
    grid.check_resolution(ground)?;
    grid.check_containment(ground)?;

    let h = grid.spacing();
    let kinetic = params.hbar() * params.hbar() / (2.0 * params.mu());
    let centrifugal = f64::from(l) * f64::from(l + d - 2);
    let power = f64::from(d - 1);
    // r^{d−1} at faces and at centres, relative to h^{d−1}
    let face = |i: usize| libm::pow(i as f64, power);
    let centre = |i: usize| libm::pow(i as f64 - 0.5, power);
    let diag: Vec<f64> = grid
        .interior()
        .enumerate()
        .map(|(i, r)| {
            let flux = face(i) + face(i + 1);
            kinetic * flux / (h * h * centre(i + 1)) + kinetic * centrifugal / (r * r) - params.k() / r
        })
        .collect();
    let off: Vec<f64> = (1..cells)
        .map(|i| -kinetic * face(i) / (h * h * libm::sqrt(centre(i) * centre(i + 1))))
        .collect();
    tridiag::lowest_eigenvalues(&diag, &off, num_states as usize)
}
