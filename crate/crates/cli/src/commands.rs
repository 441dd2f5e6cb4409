//! Subcommand implementations. Each returns a [`Report`] or a [`Failure`]
//! carrying the exit code.

use coulomb_nd_core::hypersphere::{enumerate_chains, gram_matrix, HypersphericalPoint};
use coulomb_nd_core::radial::{solve_radial_numeric, RadialGrid};
use coulomb_nd_core::spectrum::{
    casimir_eigenvalue, degeneracy, energy_level, enumerate_level_states, so_d_rep_dim, DEFAULT_STATE_CAP,
};
use coulomb_nd_core::{AngularChain, Error, Harmonic, LevelIndex, PhysicalParams};

use crate::report::{integer, text, Report, ReportConfig};
use crate::verify::{self, Check, Suite, Tolerances, VerifyConfig};

pub const MAX_SPECTRUM_N: u32 = 50;
pub const MAX_RADIAL_STATES: u32 = 20;
pub const MAX_GRID_POINTS: usize = 2_000_000;
pub const MAX_GRAM_CHAINS: usize = 500;

/// Why a command did not produce a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad arguments: exit 2.
    Usage(String),
    /// A refusal or failed verification: exit 1. The report, if any, is
    /// still printed.
    Refused(String, Option<String>),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Refused(..) => 1,
        }
    }
}

pub type Outcome = Result<Report, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn units(report: Report, cfg: &ReportConfig, p: PhysicalParams) -> Report {
    report
        .meta("mu", cfg.float(p.mu()))
        .meta("k", cfg.float(p.k()))
        .meta("hbar", cfg.float(p.hbar()))
}

pub fn spectrum(d: u32, n_max: u32, p: PhysicalParams, cfg: &ReportConfig) -> Outcome {
    if n_max > MAX_SPECTRUM_N {
        return Err(usage(format!("--n-max {n_max} exceeds {MAX_SPECTRUM_N}")));
    }
    let mut report = Report::new("spectrum", vec!["n", "energy", "degeneracy", "casimir"]).meta("d", integer(d));
    report = units(report, cfg, p);
    for n in 0..=n_max {
        let idx = LevelIndex::new(d, n).map_err(usage)?;
        report.push(vec![
            integer(n),
            cfg.float(energy_level(idx, p)),
            integer(degeneracy(idx)),
            cfg.float(casimir_eigenvalue(idx, p)),
        ]);
    }
    Ok(report)
}

pub fn degeneracy_table(d: u32, n: u32, list: bool) -> Outcome {
    let idx = LevelIndex::new(d, n).map_err(usage)?;
    let total = degeneracy(idx);
    let base = Report::new("degeneracy", Vec::new())
        .meta("d", integer(d))
        .meta("n", integer(n))
        .meta("degeneracy", integer(&total));
    if list {
        let states = enumerate_level_states(idx, DEFAULT_STATE_CAP).map_err(usage)?;
        let mut report = Report { columns: vec!["l", "chain"], ..base };
        for chain in states {
            report.push(vec![integer(chain.top()), text(chain.to_string())]);
        }
        return Ok(report);
    }
    let mut report = Report { columns: vec!["l", "multiplicity"], ..base };
    for l in 0..=n {
        report.push(vec![integer(l), integer(so_d_rep_dim(d, l).map_err(usage)?)]);
    }
    Ok(report)
}

/// Parses a comma-separated list of angles.
pub fn parse_angles(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| match t.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(usage(format!("invalid angle '{}' in --theta", t.trim()))),
        })
        .collect()
}

pub fn harmonic_point(d: u32, chain: &str, theta: &str, cfg: &ReportConfig) -> Outcome {
    let chain = AngularChain::parse(chain, d).map_err(usage)?;
    let angles = parse_angles(theta)?;
    if angles.len() + 1 != d as usize {
        return Err(usage(format!("--theta needs d - 1 = {} angles, got {}", d - 1, angles.len())));
    }
    let point = HypersphericalPoint::on_sphere(angles.clone()).map_err(usage)?;
    let y = Harmonic::new(chain.clone()).map_err(usage)?.eval(&point).map_err(usage)?;
    let mut report = Report::new("harmonic", vec!["chain", "re", "im", "abs"])
        .meta("d", integer(d))
        .meta("theta", serde_json::Value::Array(angles.iter().map(|&t| cfg.float(t)).collect()));
    report.push(vec![text(chain.to_string()), cfg.float(y.re), cfg.float(y.im), cfg.float(y.norm())]);
    Ok(report)
}

pub fn harmonic_gram(d: u32, l_max: u32, cfg: &ReportConfig) -> Outcome {
    let count: usize = (0..=l_max)
        .map(|l| enumerate_chains(d, l).map(|c| c.len()))
        .sum::<coulomb_nd_core::Result<usize>>()
        .map_err(usage)?;
    if count > MAX_GRAM_CHAINS {
        return Err(usage(format!("Gram matrix would have {count} chains, cap is {MAX_GRAM_CHAINS}")));
    }
    let (chains, gram) = gram_matrix(d, l_max).map_err(usage)?;
    let mut max_off = 0.0f64;
    let mut max_diag = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                max_diag = max_diag.max((v - 1.0).norm());
            } else {
                max_off = max_off.max(v.norm());
            }
        }
    }
    let mut report = Report::new("gram", vec!["bra", "ket", "re", "im", "max_off_diagonal"])
        .meta("d", integer(d))
        .meta("l_max", integer(l_max))
        .meta("size", integer(chains.len()))
        .meta("max_off_diagonal", cfg.float(max_off))
        .meta("max_diagonal_deviation", cfg.float(max_diag));
    for (a, row) in chains.iter().zip(&gram) {
        for (b, v) in chains.iter().zip(row) {
            report.push(vec![
                text(a.to_string()),
                text(b.to_string()),
                cfg.float(v.re),
                cfg.float(v.im),
                cfg.float(max_off),
            ]);
        }
    }
    Ok(report)
}

pub fn radial(
    d: u32,
    l: u32,
    states: u32,
    r_max: Option<f64>,
    grid_points: Option<usize>,
    p: PhysicalParams,
    cfg: &ReportConfig,
) -> Outcome {
    LevelIndex::new(d, l).map_err(usage)?;
    if states > MAX_RADIAL_STATES {
        return Err(usage(format!("--states {states} exceeds {MAX_RADIAL_STATES}")));
    }
    if grid_points.is_some_and(|n| n > MAX_GRID_POINTS) {
        return Err(usage(format!("--grid-points exceeds {MAX_GRID_POINTS}")));
    }
    let default = RadialGrid::default_for(d, l, states, p).map_err(usage)?;
    let grid = match (r_max, grid_points) {
        (None, None) => default,
        (r, n) => {
            let r_max = r.unwrap_or(default.r_max());
            let n = n.unwrap_or_else(|| {
                (r_max / default.spacing()).ceil().min(MAX_GRID_POINTS as f64) as usize
            });
            RadialGrid::new(r_max, n).map_err(usage)?
        }
    };
    let mut report = Report::new("radial", vec!["j", "n", "numeric_energy", "analytic_energy", "relative_error"])
        .meta("d", integer(d))
        .meta("l", integer(l))
        .meta("r_max", cfg.float(grid.r_max()))
        .meta("grid_points", integer(grid.num_points()));
    report = units(report, cfg, p);
    let values = match solve_radial_numeric(d, l, p, &grid, states) {
        Ok(v) => v,
        Err(e @ (Error::Grid(_) | Error::Eigensolver(_))) => return Err(Failure::Refused(e.to_string(), None)),
        Err(e) => return Err(usage(e)),
    };
    for (j, v) in (0u32..).zip(&values) {
        let exact = energy_level(LevelIndex::new(d, l + j).map_err(usage)?, p);
        report.push(vec![
            integer(j),
            integer(l + j),
            cfg.float(*v),
            cfg.float(exact),
            cfg.float(((v - exact) / exact).abs()),
        ]);
    }
    Ok(report)
}

pub fn verify(vcfg: &VerifyConfig, tolerances: &Tolerances, cfg: &ReportConfig) -> Outcome {
    vcfg.validate().map_err(Failure::Usage)?;
    let checks = verify::run(vcfg, tolerances).map_err(|e| Failure::Refused(e.to_string(), None))?;
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    let mut suites: Vec<Suite> = vcfg.suites.clone();
    suites.sort();
    suites.dedup();
    let mut report = Report::new("verify", vec!["check", "suite", "measured", "threshold", "pass"])
        .meta(
            "suites",
            serde_json::Value::Array(suites.iter().map(|s| text(s.name())).collect()),
        )
        .meta("passed", serde_json::Value::Bool(failed.is_empty()));
    report = units(report, cfg, vcfg.params);
    for c in &checks {
        report.push(vec![
            text(c.name),
            text(c.suite.name()),
            cfg.float(c.measured),
            cfg.float(c.threshold),
            serde_json::Value::Bool(c.passed()),
        ]);
    }
    if failed.is_empty() {
        Ok(report)
    } else {
        let names: Vec<&str> = failed.iter().map(|c| c.name).collect();
        Err(Failure::Refused(
            format!("{} check(s) failed: {}", names.len(), names.join(", ")),
            Some(report.render(cfg.format)),
        ))
    }
}
