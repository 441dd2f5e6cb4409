//! Property suites behind `coulomb-nd verify`.

use std::collections::BTreeMap;
use std::fmt;

use clap::ValueEnum;
use coulomb_nd_core::hypersphere::{enumerate_chains, gram_matrix, probe_points, Harmonic};
use coulomb_nd_core::radial::{quantization, solve_radial_numeric, RadialGrid, RadialWavefunction};
use coulomb_nd_core::spectrum::{casimir_energy_consistency, degeneracy, energy_level, so_d_rep_dim};
use coulomb_nd_core::{LevelIndex, PhysicalParams, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Largest dimension for the exact combinatorial suites.
pub const MAX_EXACT_D: u32 = 10;
/// Largest dimension for the quadrature and eigensolver suites.
pub const MAX_NUMERIC_D: u32 = 6;

pub const LAPLACIAN_STEP: f64 = 1e-3;
pub const PROBE_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Suite {
    Spectrum,
    Casimir,
    Degeneracy,
    Eigenvalue,
    Orthonormality,
    RadialNumeric,
    RadialClosed,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Spectrum,
        Suite::Casimir,
        Suite::Degeneracy,
        Suite::Eigenvalue,
        Suite::Orthonormality,
        Suite::RadialNumeric,
        Suite::RadialClosed,
    ];

    pub fn is_numeric(self) -> bool {
        !matches!(self, Suite::Spectrum | Suite::Casimir | Suite::Degeneracy)
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectrum => "spectrum",
            Suite::Casimir => "casimir",
            Suite::Degeneracy => "degeneracy",
            Suite::Eigenvalue => "eigenvalue",
            Suite::Orthonormality => "orthonormality",
            Suite::RadialNumeric => "radial-numeric",
            Suite::RadialClosed => "radial-closed",
        }
    }
}

/// What to check and over which ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Restricts every suite to this one dimension.
    pub d: Option<u32>,
    pub n_max: u32,
    /// Overrides the angular degree cap of the eigenvalue and
    /// orthonormality suites (defaults 4 and 3).
    pub l_max: Option<u32>,
    pub suites: Vec<Suite>,
    pub params: PhysicalParams,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { d: None, n_max: 20, l_max: None, suites: Suite::ALL.to_vec(), params: PhysicalParams::atomic() }
    }
}

impl VerifyConfig {
    /// Rejects dimensions beyond the caps of the selected suites.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let Some(d) = self.d else { return Ok(()) };
        if d < 2 {
            return Err(format!("--d {d} must be >= 2"));
        }
        if d > MAX_EXACT_D {
            return Err(format!("--d {d} exceeds the cap {MAX_EXACT_D} for exact checks"));
        }
        if let Some(s) = self.suites.iter().find(|s| s.is_numeric()) {
            if d > MAX_NUMERIC_D {
                return Err(format!(
                    "--d {d} exceeds the cap {MAX_NUMERIC_D} for the {} suite",
                    s.name()
                ));
            }
        }
        Ok(())
    }

    fn dims(&self, lo: u32, hi: u32) -> Vec<u32> {
        match self.d {
            Some(d) => vec![d],
            None => (lo..=hi).collect(),
        }
    }
}

/// One measured quantity against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub suite: Suite,
    pub measured: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured.is_finite() && self.measured <= self.threshold
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} measured={:e} threshold={:e}", self.name, self.measured, self.threshold)
    }
}

/// Threshold overrides: a global value and per-check values by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tolerances {
    pub global: Option<f64>,
    pub by_name: BTreeMap<String, f64>,
}

impl Tolerances {
    /// Parses `VALUE` or `CHECK=VALUE`.
    pub fn add(&mut self, arg: &str) -> std::result::Result<(), String> {
        let parse = |s: &str| -> std::result::Result<f64, String> {
            match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
                _ => Err(format!("tolerance '{s}' must be a finite number >= 0")),
            }
        };
        match arg.split_once('=') {
            Some((name, value)) => {
                let name = name.trim();
                if !CHECK_NAMES.contains(&name) {
                    return Err(format!("unknown check '{name}'"));
                }
                self.by_name.insert(name.to_string(), parse(value)?);
            }
            None => self.global = Some(parse(arg)?),
        }
        Ok(())
    }

    fn apply(&self, check: &mut Check) {
        if let Some(v) = self.by_name.get(check.name).copied().or(self.global) {
            check.threshold = v;
        }
    }
}

pub const CHECK_NAMES: [&str; 12] = [
    "angular.convergence",
    "angular.eigenvalue",
    "angular.orthonormality",
    "casimir.residual",
    "degeneracy.branching",
    "radial.accidental_degeneracy",
    "radial.node_count",
    "radial.ode_residual",
    "radial.spectrum",
    "radial.spectrum_d2",
    "spectrum.closed_form",
    "spectrum.hydrogen",
];

/// Runs the selected suites; checks come back sorted by name.
pub fn run(cfg: &VerifyConfig, tolerances: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    for suite in suites {
        match suite {
            Suite::Spectrum => spectrum_suite(cfg, &mut checks)?,
            Suite::Casimir => casimir_suite(cfg, &mut checks)?,
            Suite::Degeneracy => degeneracy_suite(cfg, &mut checks)?,
            Suite::Eigenvalue => eigenvalue_suite(cfg, &mut checks)?,
            Suite::Orthonormality => orthonormality_suite(cfg, &mut checks)?,
            Suite::RadialNumeric => radial_numeric_suite(cfg, &mut checks)?,
            Suite::RadialClosed => radial_closed_suite(cfg, &mut checks)?,
        }
    }
    for c in &mut checks {
        tolerances.apply(c);
    }
    checks.sort_by(|a, b| a.name.cmp(b.name));
    Ok(checks)
}

fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite parameter")
}

fn spectrum_suite(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let p = cfg.params;
    let coupling = rational(p.mu()) * rational(p.k()) * rational(p.k());
    let hbar2 = rational(p.hbar()) * rational(p.hbar());
    let mut worst = 0.0f64;
    let mut hydrogen = None;
    for d in cfg.dims(2, MAX_EXACT_D) {
        for n in 0..=cfg.n_max {
            let idx = LevelIndex::new(d, n)?;
            let e = energy_level(idx, p);
            let nu = BigRational::new(BigInt::from(2 * n + d - 1), BigInt::from(2));
            let exact = -(&coupling / (BigRational::from_integer(2.into()) * &hbar2 * &nu * &nu));
            let rel = ((rational(e) - &exact) / &exact).abs();
            worst = worst.max(rel.to_f64().unwrap_or(f64::INFINITY));
            if d == 3 && p == PhysicalParams::atomic() {
                let h = -0.5 / f64::from((n + 1) * (n + 1));
                let diff = (e - h).abs();
                hydrogen = Some(hydrogen.map_or(diff, |w: f64| w.max(diff)));
            }
        }
    }
    out.push(Check { name: "spectrum.closed_form", suite: Suite::Spectrum, measured: worst, threshold: 4.0 * f64::EPSILON });
    if let Some(h) = hydrogen {
        out.push(Check { name: "spectrum.hydrogen", suite: Suite::Spectrum, measured: h, threshold: 0.0 });
    }
    Ok(())
}

fn casimir_suite(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let mut worst = 0.0f64;
    for d in cfg.dims(2, MAX_EXACT_D) {
        for n in 0..=cfg.n_max {
            let r = casimir_energy_consistency(LevelIndex::new(d, n)?, cfg.params);
            if !r.is_zero() {
                worst = worst.max(r.abs().to_f64().unwrap_or(f64::INFINITY));
            }
        }
    }
    out.push(Check { name: "casimir.residual", suite: Suite::Casimir, measured: worst, threshold: 0.0 });
    Ok(())
}

fn degeneracy_suite(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let mut mismatches = 0u32;
    for d in cfg.dims(2, MAX_EXACT_D) {
        for n in 0..=cfg.n_max {
            let g = degeneracy(LevelIndex::new(d, n)?);
            let sum: BigUint = (0..=n).map(|l| so_d_rep_dim(d, l)).sum::<Result<BigUint>>()?;
            let lifted = so_d_rep_dim(d + 1, n)?;
            let square = (d == 3).then(|| BigUint::from((n + 1) * (n + 1)));
            if sum != g || lifted != g || square.is_some_and(|s| s != g) {
                mismatches += 1;
            }
        }
    }
    out.push(Check {
        name: "degeneracy.branching",
        suite: Suite::Degeneracy,
        measured: f64::from(mismatches),
        threshold: 0.0,
    });
    Ok(())
}

fn eigenvalue_suite(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let l_max = cfg.l_max.unwrap_or(4);
    let (mut worst, mut worst_ratio) = (0.0f64, 0.0f64);
    for d in cfg.dims(2, MAX_NUMERIC_D) {
        let points = probe_points(d, PROBE_POINTS)?;
        for l in 0..=l_max {
            for chain in enumerate_chains(d, l)? {
                let check = Harmonic::new(chain)?.eigenvalue_check(&points, LAPLACIAN_STEP)?;
                worst = worst.max(check.error);
                if check.error > 1e-9 {
                    worst_ratio = worst_ratio.max((check.convergence_ratio() - 4.0).abs());
                }
            }
        }
    }
    out.push(Check { name: "angular.eigenvalue", suite: Suite::Eigenvalue, measured: worst, threshold: 1e-4 });
    out.push(Check { name: "angular.convergence", suite: Suite::Eigenvalue, measured: worst_ratio, threshold: 1.0 });
    Ok(())
}

fn orthonormality_suite(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let l_max = cfg.l_max.unwrap_or(3);
    let mut worst = 0.0f64;
    for d in cfg.dims(2, 5) {
        let (_, gram) = gram_matrix(d, l_max)?;
        for (i, row) in gram.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v.re - expected).abs()).max(v.im.abs());
            }
        }
    }
    out.push(Check {
        name: "angular.orthonormality",
        suite: Suite::Orthonormality,
        measured: worst,
        threshold: 1e-10,
    });
    Ok(())
}

fn radial_numeric_suite(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let p = cfg.params;
    let (mut worst, mut worst_d2) = (None::<f64>, None::<f64>);
    for d in cfg.dims(2, MAX_NUMERIC_D) {
        for l in 0..=2 {
            let grid = RadialGrid::default_for(d, l, 3, p)?;
            let values = solve_radial_numeric(d, l, p, &grid, 3)?;
            for (j, v) in (0u32..).zip(&values) {
                let exact = energy_level(LevelIndex::new(d, l + j)?, p);
                let rel = ((v - exact) / exact).abs();
                let slot = if d == 2 { &mut worst_d2 } else { &mut worst };
                *slot = Some(slot.map_or(rel, |w| w.max(rel)));
            }
        }
    }
    if let Some(w) = worst {
        out.push(Check { name: "radial.spectrum", suite: Suite::RadialNumeric, measured: w, threshold: 1e-4 });
    }
    if let Some(w) = worst_d2 {
        out.push(Check { name: "radial.spectrum_d2", suite: Suite::RadialNumeric, measured: w, threshold: 5e-4 });
    }
    if cfg.d.is_none_or(|d| d == 4) {
        let grid = RadialGrid::default_for(4, 0, 3, p)?;
        let s_wave = solve_radial_numeric(4, 0, p, &grid, 3)?[2];
        let d_wave = solve_radial_numeric(4, 2, p, &grid, 1)?[0];
        out.push(Check {
            name: "radial.accidental_degeneracy",
            suite: Suite::RadialNumeric,
            measured: ((s_wave - d_wave) / d_wave).abs(),
            threshold: 2e-4,
        });
    }
    Ok(())
}

fn radial_closed_suite(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let p = cfg.params;
    let mut worst = 0.0f64;
    let mut mismatches = 0u32;
    for d in cfg.dims(2, MAX_NUMERIC_D) {
        for l in 0..=3 {
            for j in 0..=5 {
                let state = quantization(d, l, j, p)?;
                let wf = RadialWavefunction::new(state)?;
                for i in 0..100 {
                    let r = 1e-3 * 10f64.powf(f64::from(i) * 5.0 / 99.0) / state.kappa();
                    worst = worst.max(wf.ode_residual(r)?.relative());
                }
                let grid = RadialGrid::default_for(d, l, j + 1, p)?;
                if wf.count_nodes(&grid)? != j {
                    mismatches += 1;
                }
            }
        }
    }
    out.push(Check { name: "radial.ode_residual", suite: Suite::RadialClosed, measured: worst, threshold: 1e-8 });
    out.push(Check {
        name: "radial.node_count",
        suite: Suite::RadialClosed,
        measured: f64::from(mismatches),
        threshold: 0.0,
    });
    Ok(())
}
