//! Hyperspherical coordinates on ℝ^d and the harmonics on S^{d−1}.
//!
//! Chart: `x₁ = r cos θ₁`, `x₂ = r sin θ₁ cos θ₂`, …,
//! `x_d = r sin θ₁ ⋯ sin θ_{d−2} sin θ_{d−1}`, with polar angles
//! `θ₁ … θ_{d−2} ∈ [0, π]` and the azimuth `θ_{d−1} ∈ [0, 2π)`.
//!
//! A harmonic is labelled by a ladder `l₁ ≤ l₂ ≤ … ≤ l_{d−1}` and an
//! azimuthal sign. Ladder level `k ≥ 2` contributes the normalized
//! associated Gegenbauer factor of degree `l_k`, order `l_{k−1}` and
//! `α = (k − 1)/2` in `cos θ_{d−k}`; level 1 contributes
//! `e^{±i l₁ θ_{d−1}} / √(2π)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::specialfn::{self, GegenbauerParam};

/// A point `(r, θ₁ … θ_{d−1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersphericalPoint {
    r: f64,
    angles: Vec<f64>,
}

impl HypersphericalPoint {
    /// `angles` holds `θ₁ … θ_{d−1}`; the azimuth is reduced into `[0, 2π)`.
    pub fn new(r: f64, angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::Domain("a point needs at least one angle (d >= 2)".into()));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Domain(format!("radius {r} must be finite and >= 0")));
        }
        let mut angles = angles;
        let last = angles.len() - 1;
        for (i, &t) in angles[..last].iter().enumerate() {
            if !(0.0..=PI).contains(&t) {
                return Err(Error::Domain(format!("polar angle theta_{} = {t} outside [0, pi]", i + 1)));
            }
        }
        if !angles[last].is_finite() {
            return Err(Error::Domain("azimuth must be finite".into()));
        }
        angles[last] = wrap_azimuth(angles[last]);
        Ok(Self { r, angles })
    }

    /// Unit-radius point.
    pub fn on_sphere(angles: Vec<f64>) -> Result<Self> {
        Self::new(1.0, angles)
    }

    pub fn dim(&self) -> usize {
        self.angles.len() + 1
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

/// Reduces an angle into `[0, 2π)`.
fn wrap_azimuth(t: f64) -> f64 {
    let mut w = libm::fmod(t, 2.0 * PI);
    if w < 0.0 {
        w += 2.0 * PI;
    }
    if w >= 2.0 * PI {
        w = 0.0;
    }
    w
}

/// Cartesian → hyperspherical. Where the chart degenerates (a vanishing
/// tail `x_i … x_d`) the undetermined trailing angles are set to 0.
pub fn to_hyperspherical(x: &[f64]) -> Result<HypersphericalPoint> {
    let d = x.len();
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} must be >= 2")));
    }
    // tail[i] = |(x_i, …, x_d)|, accumulated from the end with hypot
    let mut tail = vec![0.0; d + 1];
    for i in (0..d).rev() {
        tail[i] = libm::hypot(tail[i + 1], x[i]);
    }
    let mut angles = vec![0.0; d - 1];
    for i in 0..d - 2 {
        if tail[i] == 0.0 {
            break;
        }
        angles[i] = libm::atan2(tail[i + 1], x[i]);
    }
    if tail[d - 2] != 0.0 {
        angles[d - 2] = wrap_azimuth(libm::atan2(x[d - 1], x[d - 2]));
    }
    HypersphericalPoint::new(tail[0], angles)
}

/// Hyperspherical → Cartesian.
pub fn to_cartesian(p: &HypersphericalPoint) -> Vec<f64> {
    let d = p.dim();
    let mut out = Vec::with_capacity(d);
    let mut sines = p.r;
    for &t in &p.angles {
        out.push(sines * libm::cos(t));
        sines *= libm::sin(t);
    }
    out.push(sines);
    out
}

/// Diagonal metric `(1, r², r² sin²θ₁, …, r² sin²θ₁ ⋯ sin²θ_{d−2})`.
pub fn metric_diagonal(p: &HypersphericalPoint) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.dim());
    out.push(1.0);
    let mut g = p.r * p.r;
    out.push(g);
    for &t in &p.angles[..p.angles.len() - 1] {
        let s = libm::sin(t);
        g *= s * s;
        out.push(g);
    }
    out
}

/// Total surface measure of S^{d−1}: `Ω₂ = 2π`, `Ω₃ = 4π`,
/// `Ω_d = 2π Ω_{d−2} / (d − 2)`.
pub fn sphere_surface_measure(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} must be >= 2")));
    }
    let (mut omega, mut k) = if d.is_multiple_of(2) { (2.0 * PI, 2) } else { (4.0 * PI, 3) };
    while k < d {
        k += 2;
        omega *= 2.0 * PI / f64::from(k - 2);
    }
    Ok(omega)
}

/// Sign of the azimuthal quantum number `m = ±l₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AzimuthalSign {
    Plus,
    Minus,
}

/// Ladder `l₁ ≤ l₂ ≤ … ≤ l_{d−1}` plus azimuthal sign labelling one harmonic.
///
/// The sign is normalized to `Plus` when `l₁ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AngularChain {
    ladder: Vec<u32>,
    sign: AzimuthalSign,
}

impl AngularChain {
    /// `ladder` is given lowest-first: `[l₁, l₂, …, l_{d−1}]`.
    pub fn new(ladder: Vec<u32>, sign: AzimuthalSign) -> Result<Self> {
        if ladder.is_empty() {
            return Err(Error::InvalidChain("ladder needs d - 1 >= 1 entries".into()));
        }
        if let Some(w) = ladder.windows(2).find(|w| w[0] > w[1]) {
            return Err(Error::InvalidChain(format!(
                "ladder must be nondecreasing from l_1 upward, found {} above {}",
                w[1], w[0]
            )));
        }
        let sign = if ladder[0] == 0 { AzimuthalSign::Plus } else { sign };
        Ok(Self { ladder, sign })
    }

    /// `ladder` given highest-first, `[l_{d−1}, …, l₁]`.
    pub fn from_high_first(ladder: &[u32], sign: AzimuthalSign) -> Result<Self> {
        Self::new(ladder.iter().rev().copied().collect(), sign)
    }

    /// Parses `l_{d−1},…,l₁[,+|-]` (highest first, optional trailing sign).
    pub fn parse(s: &str, d: u32) -> Result<Self> {
        let chain: Self = s.parse()?;
        if chain.dim() != d {
            return Err(Error::DimensionMismatch { expected: d as usize, got: chain.dim() as usize });
        }
        Ok(chain)
    }

    pub fn dim(&self) -> u32 {
        self.ladder.len() as u32 + 1
    }

    /// `l_{d−1}`, the degree of the harmonic.
    pub fn top(&self) -> u32 {
        *self.ladder.last().expect("ladder is non-empty")
    }

    /// Ladder lowest-first.
    pub fn ladder(&self) -> &[u32] {
        &self.ladder
    }

    pub fn sign(&self) -> AzimuthalSign {
        self.sign
    }

    /// Signed azimuthal number `m = ±l₁`.
    pub fn azimuthal_m(&self) -> i64 {
        let l1 = i64::from(self.ladder[0]);
        match self.sign {
            AzimuthalSign::Plus => l1,
            AzimuthalSign::Minus => -l1,
        }
    }
}

impl fmt::Display for AngularChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.ladder.iter().rev() {
            write!(f, "{l},")?;
        }
        f.write_str(match self.sign {
            AzimuthalSign::Plus => "+",
            AzimuthalSign::Minus => "-",
        })
    }
}

impl FromStr for AngularChain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let sign = match parts.last() {
            Some(&"+") => {
                parts.pop();
                AzimuthalSign::Plus
            }
            Some(&"-") => {
                parts.pop();
                AzimuthalSign::Minus
            }
            _ => AzimuthalSign::Plus,
        };
        let ladder = parts
            .iter()
            .map(|p| p.parse::<u32>())
            .collect::<core::result::Result<Vec<u32>, _>>()
            .map_err(|e| Error::InvalidChain(format!("cannot parse {s:?}: {e}")))?;
        Self::from_high_first(&ladder, sign)
    }
}

/// Every chain in dimension `d` with top entry exactly `l`, in ascending
/// lexicographic order of the highest-first ladder, `+` before `−`.
/// The count equals `so_d_rep_dim(d, l)`.
pub fn enumerate_chains(d: u32, l: u32) -> Result<Vec<AngularChain>> {
    if d < 2 {
        return Err(Error::InvalidChain(format!("dimension {d} must be >= 2")));
    }
    let levels = (d - 1) as usize;
    let mut out = Vec::new();
    // high-first prefix; extend downward with entries ≤ previous
    fn recurse(prefix: &mut Vec<u32>, levels: usize, out: &mut Vec<AngularChain>) {
        if prefix.len() == levels {
            let low = *prefix.last().expect("non-empty");
            out.push(AngularChain::from_high_first(prefix, AzimuthalSign::Plus).expect("valid by construction"));
            if low > 0 {
                out.push(AngularChain::from_high_first(prefix, AzimuthalSign::Minus).expect("valid by construction"));
            }
            return;
        }
        let bound = *prefix.last().expect("non-empty");
        for v in 0..=bound {
            prefix.push(v);
            recurse(prefix, levels, out);
            prefix.pop();
        }
    }
    let mut prefix = vec![l];
    recurse(&mut prefix, levels, &mut out);
    Ok(out)
}

/// Normalized polar factor of ladder level `k`.
#[derive(Debug, Clone, Copy)]
struct PolarFactor {
    degree: u32,
    order: u32,
    alpha: f64,
    /// ln N for the ladder-prefactor-free form N (1 − x²)^{m/2} C_{l−m}^{(α+m)}(x)
    ln_norm: f64,
}

impl PolarFactor {
    fn new(degree: u32, order: u32, alpha: f64) -> Result<Self> {
        let p = GegenbauerParam::new(degree, alpha, order)?;
        let rule = QuadratureRule::gauss_gegenbauer(degree as usize + 1, alpha)?;
        let ln_norm = specialfn::ln_scaled_norm(p, &rule)?;
        Ok(Self { degree, order, alpha, ln_norm })
    }

    /// Value at `x = cos θ` given `s = |sin θ|`, assembled in log form.
    fn eval(&self, x: f64, s: f64) -> f64 {
        let c = specialfn::gegenbauer_unchecked(self.degree - self.order, self.alpha + f64::from(self.order), x);
        if c == 0.0 || (self.order > 0 && s == 0.0) {
            return 0.0;
        }
        let ln_mag = self.ln_norm + f64::from(self.order) * libm::log(s) + libm::log(libm::fabs(c));
        libm::copysign(libm::exp(ln_mag), c)
    }

    fn eval_x(&self, x: f64) -> f64 {
        self.eval(x, libm::sqrt((1.0 - x * x).max(0.0)))
    }
}

/// A normalized hyperspherical harmonic with its factor normalizations
/// precomputed.
#[derive(Debug, Clone)]
pub struct Harmonic {
    chain: AngularChain,
    /// index `k − 2` holds ladder level `k`
    factors: Vec<PolarFactor>,
}

impl Harmonic {
    pub fn new(chain: AngularChain) -> Result<Self> {
        let ladder = chain.ladder();
        let factors = (1..ladder.len())
            .map(|i| {
                let level = i + 1;
                PolarFactor::new(ladder[i], ladder[i - 1], (level as f64 - 1.0) / 2.0)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { chain, factors })
    }

    pub fn chain(&self) -> &AngularChain {
        &self.chain
    }

    pub fn dim(&self) -> u32 {
        self.chain.dim()
    }

    /// `Y(θ)`; the radius of `p` is ignored.
    pub fn eval(&self, p: &HypersphericalPoint) -> Result<Complex64> {
        self.check_dim(p.dim())?;
        Ok(self.eval_angles(p.angles()))
    }

    /// Evaluates at raw angles without chart validation; the azimuth may
    /// be any real number.
    fn eval_angles(&self, angles: &[f64]) -> Complex64 {
        let d = angles.len() + 1;
        let mut value = 1.0 / libm::sqrt(2.0 * PI);
        for (i, factor) in self.factors.iter().enumerate() {
            let level = i + 2;
            let theta = angles[d - level - 1];
            value *= factor.eval(libm::cos(theta), libm::fabs(libm::sin(theta)));
            if value == 0.0 {
                break;
            }
        }
        let phase = self.chain.azimuthal_m() as f64 * angles[d - 2];
        Complex64::new(value * libm::cos(phase), value * libm::sin(phase))
    }

    /// `L² Y` at `p` by nested second-order central differences of the
    /// angular operator
    ///
    /// ```text
    /// L² = −Σ_{i<d−1} [∏_{j<i} sin²θ_j]⁻¹ sin^{−(d−1−i)}θ_i ∂_i sin^{d−1−i}θ_i ∂_i
    ///      − [∏_{j<d−1} sin²θ_j]⁻¹ ∂²_{d−1}
    /// ```
    ///
    /// which should reproduce `l_{d−1}(l_{d−1} + d − 2) Y` up to `O(h²)`.
    pub fn laplacian_fd(&self, p: &HypersphericalPoint, h: f64) -> Result<Complex64> {
        self.check_dim(p.dim())?;
        if !(1e-5..=1e-2).contains(&h) {
            return Err(Error::Domain(format!("step h = {h} outside [1e-5, 1e-2]")));
        }
        let angles = p.angles();
        let d = p.dim();
        for (i, &t) in angles[..d - 2].iter().enumerate() {
            if libm::sin(t) < 10.0 * h {
                return Err(Error::Domain(format!(
                    "theta_{} = {t} too close to a chart degeneracy for step {h}",
                    i + 1
                )));
            }
        }

        let f0 = self.eval_angles(angles);
        let mut shifted = angles.to_vec();
        let mut at = |i: usize, delta: f64| {
            shifted[i] = angles[i] + delta;
            let v = self.eval_angles(&shifted);
            shifted[i] = angles[i];
            v
        };

        let mut total = Complex64::new(0.0, 0.0);
        let mut sin2_prefix = 1.0;
        for i in 0..d - 2 {
            let power = (d - 2 - i) as f64;
            let t = angles[i];
            let w = |theta: f64| libm::pow(libm::sin(theta), power);
            let (fp, fm) = (at(i, h), at(i, -h));
            let flux = (fp - f0) * w(t + 0.5 * h) - (f0 - fm) * w(t - 0.5 * h);
            total -= flux / (h * h * w(t) * sin2_prefix);
            let s = libm::sin(t);
            sin2_prefix *= s * s;
        }
        let last = d - 2;
        let (fp, fm) = (at(last, h), at(last, -h));
        total -= (fp - 2.0 * f0 + fm) / (h * h * sin2_prefix);
        Ok(total)
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() as usize {
            return Err(Error::DimensionMismatch { expected: self.dim() as usize, got: d });
        }
        Ok(())
    }
}

/// `Y_chain(p)`; builds the factor normalizations on every call, so prefer
/// [`Harmonic`] when evaluating repeatedly.
pub fn harmonic_eval(chain: &AngularChain, p: &HypersphericalPoint) -> Result<Complex64> {
    Harmonic::new(chain.clone())?.eval(p)
}

/// `L² Y_chain` at `p` by central differences with step `h`.
pub fn angular_laplacian_apply(chain: &AngularChain, p: &HypersphericalPoint, h: f64) -> Result<Complex64> {
    Harmonic::new(chain.clone())?.laplacian_fd(p, h)
}

/// Deterministic sample of `count` unit points with every polar angle in
/// `[π/6, 5π/6]` (a Kronecker sequence with irrational per-angle steps).
pub fn probe_points(d: u32, count: usize) -> Result<Vec<HypersphericalPoint>> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} must be >= 2")));
    }
    let azimuth = (d - 2) as usize;
    (1..=count)
        .map(|s| {
            let angles = (0..=azimuth)
                .map(|i| {
                    let step = 0.618_033_988_749_895 + core::f64::consts::SQRT_2 * i as f64;
                    let u = libm::fmod(s as f64 * step, 1.0);
                    if i == azimuth { 2.0 * PI * u } else { PI / 6.0 + u * 2.0 * PI / 3.0 }
                })
                .collect();
            HypersphericalPoint::on_sphere(angles)
        })
        .collect()
}

/// Relative eigenvalue-equation error of one harmonic at steps `h` and `h/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueCheck {
    pub point: HypersphericalPoint,
    pub error: f64,
    pub refined_error: f64,
}

impl EigenvalueCheck {
    /// `error / refined_error`, about 4 for a second-order stencil.
    pub fn convergence_ratio(&self) -> f64 {
        self.error / self.refined_error
    }
}

impl Harmonic {
    /// Compares `L² Y` by finite differences against `l(l + d − 2) Y` at the
    /// point of `points` where `|Y|` is largest.
    pub fn eigenvalue_check(&self, points: &[HypersphericalPoint], h: f64) -> Result<EigenvalueCheck> {
        let mut best: Option<(&HypersphericalPoint, Complex64)> = None;
        for p in points {
            let v = self.eval(p)?;
            if best.is_none_or(|(_, b)| v.norm() > b.norm()) {
                best = Some((p, v));
            }
        }
        let (p, y) = best.ok_or_else(|| Error::Domain("no sample points".into()))?;
        let l = f64::from(self.chain.top());
        let lambda = l * (l + f64::from(self.dim()) - 2.0);
        let rel = |step: f64| -> Result<f64> {
            Ok((self.laplacian_fd(p, step)? - y * lambda).norm() / y.norm())
        };
        Ok(EigenvalueCheck { point: p.clone(), error: rel(h)?, refined_error: rel(0.5 * h)? })
    }
}

/// One quadrature rule per polar ladder level plus the azimuthal rule.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    /// index `k − 2` integrates against `(1 − x²)^{(k−2)/2}`, i.e. `α = (k−1)/2`
    polar: Vec<QuadratureRule>,
    azimuth: QuadratureRule,
}

impl SphereQuadrature {
    /// Rules exact for products of two harmonics of degree at most `max_degree` on S^{d−1}.
    pub fn for_degree(d: u32, max_degree: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension {d} must be >= 2")));
        }
        let polar = (2..d)
            .map(|k| QuadratureRule::gauss_gegenbauer(max_degree as usize + 1, (f64::from(k) - 1.0) / 2.0))
            .collect::<Result<Vec<_>>>()?;
        let azimuth = QuadratureRule::periodic_trapezoid(2 * max_degree as usize + 1)?;
        Ok(Self { polar, azimuth })
    }

    pub fn dim(&self) -> u32 {
        self.polar.len() as u32 + 2
    }

    /// `∫ f dΩ` over S^{d−1} by the tensor product of the 1-D rules, for
    /// `f` given as a function of the angles `θ₁ … θ_{d−1}`. Cost is the
    /// product of the rule sizes; intended for checks in low dimension.
    pub fn integrate_product(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let d = self.dim() as usize;
        let mut angles = vec![0.0; d - 1];
        fn walk(
            q: &SphereQuadrature,
            level: usize,
            angles: &mut [f64],
            f: &mut dyn FnMut(&[f64]) -> f64,
        ) -> f64 {
            let d = angles.len() + 1;
            if level == 1 {
                let mut acc = 0.0;
                for (&t, &w) in q.azimuth.nodes().iter().zip(q.azimuth.weights()) {
                    angles[d - 2] = t;
                    acc += w * f(angles);
                }
                return acc;
            }
            let rule = &q.polar[level - 2];
            let mut acc = 0.0;
            for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
                angles[d - level - 1] = libm::acos(x);
                acc += w * walk(q, level - 1, angles, f);
            }
            acc
        }
        walk(self, d - 1, &mut angles, &mut f)
    }
}

/// `⟨Y_a, Y_b⟩ = ∫ Y_a* Y_b dΩ` as a product of one-dimensional integrals,
/// one per ladder level. Refused when a rule's exact degree is too low for
/// the pair.
pub fn harmonic_inner_product(a: &Harmonic, b: &Harmonic, rules: &SphereQuadrature) -> Result<Complex64> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d as usize, got: b.dim() as usize });
    }
    if rules.dim() != d {
        return Err(Error::DimensionMismatch { expected: d as usize, got: rules.dim() as usize });
    }
    let dm = a.chain.azimuthal_m() - b.chain.azimuthal_m();
    if dm.unsigned_abs() > u64::from(rules.azimuth.exact_degree()) {
        return Err(Error::InsufficientQuadrature(format!(
            "azimuthal rule exact to {} cannot resolve m difference {dm}",
            rules.azimuth.exact_degree()
        )));
    }
    let dm = -dm as f64;
    let re = rules.azimuth.integrate(|t| libm::cos(dm * t)) / (2.0 * PI);
    let im = rules.azimuth.integrate(|t| libm::sin(dm * t)) / (2.0 * PI);
    let mut total = Complex64::new(re, im);

    for (i, (fa, fb)) in a.factors.iter().zip(&b.factors).enumerate() {
        let rule = &rules.polar[i];
        let required = fa.degree + fb.degree;
        if rule.exact_degree() < required {
            return Err(Error::InsufficientQuadrature(format!(
                "level {} needs exactness {required}, rule has {}",
                i + 2,
                rule.exact_degree()
            )));
        }
        total *= rule.integrate(|x| fa.eval_x(x) * fb.eval_x(x));
    }
    Ok(total)
}

/// Gram matrix of every harmonic on S^{d−1} with degree at most `l_max`,
/// in [`enumerate_chains`] order by ascending degree.
pub fn gram_matrix(d: u32, l_max: u32) -> Result<(Vec<AngularChain>, Vec<Vec<Complex64>>)> {
    let mut harmonics = Vec::new();
    for l in 0..=l_max {
        for chain in enumerate_chains(d, l)? {
            harmonics.push(Harmonic::new(chain)?);
        }
    }
    let rules = SphereQuadrature::for_degree(d, l_max)?;
    let mut gram = Vec::with_capacity(harmonics.len());
    for a in &harmonics {
        let row = harmonics
            .iter()
            .map(|b| harmonic_inner_product(a, b, &rules))
            .collect::<Result<Vec<_>>>()?;
        gram.push(row);
    }
    Ok((harmonics.into_iter().map(|h| h.chain).collect(), gram))
}
