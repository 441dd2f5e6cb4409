//! Acceptance criteria 1–8. Run with
//! `cargo test -p coulomb-nd --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::process::Command;
use std::time::{Duration, Instant};

use coulomb_nd_core::hypersphere::{enumerate_chains, gram_matrix, probe_points, Harmonic};
use coulomb_nd_core::radial::{quantization, solve_radial_numeric, RadialGrid, RadialWavefunction};
use coulomb_nd_core::spectrum::{casimir_energy_consistency, degeneracy, energy_level, so_d_rep_dim};
use coulomb_nd_core::{LevelIndex, PhysicalParams};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

const UNIT: PhysicalParams = PhysicalParams::atomic();

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn lvl(d: u32, n: u32) -> LevelIndex {
    LevelIndex::new(d, n).unwrap()
}

fn spectrum_closed_form() -> Outcome {
    let mut worst_rel = 0.0f64;
    let mut mismatched_bits = 0;
    for d in 2..=10u32 {
        for n in 0..=20u32 {
            let e = energy_level(lvl(d, n), UNIT);
            let nu = f64::from(n) + (f64::from(d) - 1.0) / 2.0;
            if e.to_bits() != (-1.0 / (2.0 * nu * nu)).to_bits() {
                mismatched_bits += 1;
            }
            if d == 3 && e.to_bits() != (-0.5 / f64::from((n + 1) * (n + 1))).to_bits() {
                mismatched_bits += 1;
            }
            let nu = BigRational::new(BigInt::from(2 * n + d - 1), BigInt::from(2));
            let exact = -(BigRational::new(1.into(), 2.into()) / (&nu * &nu));
            let rel = ((BigRational::from_float(e).unwrap() - &exact) / &exact).abs();
            worst_rel = worst_rel.max(rel.to_f64().unwrap());
        }
    }
    let bound = f64::EPSILON / 2.0;
    Outcome {
        passed: mismatched_bits == 0 && worst_rel <= bound,
        detail: format!("bit mismatches {mismatched_bits}, max rel error vs exact {worst_rel:e} (bound {bound:e})"),
    }
}

fn casimir_consistency() -> Outcome {
    let nonzero = (2..=10u32)
        .flat_map(|d| (0..=20u32).map(move |n| (d, n)))
        .filter(|&(d, n)| !casimir_energy_consistency(lvl(d, n), UNIT).is_zero())
        .count();
    Outcome { passed: nonzero == 0, detail: format!("{nonzero} nonzero residuals of 189") }
}

fn degeneracy_identity() -> Outcome {
    let mut bad = 0;
    for d in 2..=10u32 {
        for n in 0..=20u32 {
            let g = degeneracy(lvl(d, n));
            let sum: BigUint = (0..=n).map(|l| so_d_rep_dim(d, l).unwrap()).sum();
            if sum != g || so_d_rep_dim(d + 1, n).unwrap() != g {
                bad += 1;
            }
            if d == 3 && g != BigUint::from((n + 1) * (n + 1)) {
                bad += 1;
            }
        }
    }
    Outcome { passed: bad == 0, detail: format!("{bad} failed identities") }
}

fn angular_eigenvalue() -> Outcome {
    let (mut worst, mut lo, mut hi, mut chains) = (0.0f64, f64::INFINITY, 0.0f64, 0);
    for d in 2..=6u32 {
        let points = probe_points(d, 16).unwrap();
        for l in 0..=4 {
            for chain in enumerate_chains(d, l).unwrap() {
                let check = Harmonic::new(chain).unwrap().eigenvalue_check(&points, 1e-3).unwrap();
                worst = worst.max(check.error);
                if check.error > 1e-9 {
                    lo = lo.min(check.convergence_ratio());
                    hi = hi.max(check.convergence_ratio());
                }
                chains += 1;
            }
        }
    }
    Outcome {
        passed: worst <= 1e-4 && lo >= 3.0 && hi <= 5.0,
        detail: format!("{chains} chains, max rel error {worst:e} at h=1e-3, step-halving ratio in [{lo:.3}, {hi:.3}]"),
    }
}

fn orthonormality() -> Outcome {
    let (mut worst, mut size) = (0.0f64, 0);
    for d in 2..=5 {
        let (chains, gram) = gram_matrix(d, 3).unwrap();
        size += chains.len();
        for (i, row) in gram.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v.re - expected).abs()).max(v.im.abs());
            }
        }
    }
    Outcome { passed: worst <= 1e-10, detail: format!("{size} harmonics, max |G - I| {worst:e}") }
}

fn radial_spectrum() -> Outcome {
    let (mut worst, mut worst_d2) = (0.0f64, 0.0f64);
    for d in 2..=6 {
        for l in 0..=2 {
            let grid = RadialGrid::default_for(d, l, 3, UNIT).unwrap();
            let values = solve_radial_numeric(d, l, UNIT, &grid, 3).unwrap();
            for (j, v) in (0u32..).zip(&values) {
                let exact = energy_level(lvl(d, l + j), UNIT);
                let rel = ((v - exact) / exact).abs();
                if d == 2 {
                    worst_d2 = worst_d2.max(rel);
                } else {
                    worst = worst.max(rel);
                }
            }
        }
    }
    let grid = RadialGrid::default_for(4, 0, 3, UNIT).unwrap();
    let s_wave = solve_radial_numeric(4, 0, UNIT, &grid, 3).unwrap()[2];
    let d_wave = solve_radial_numeric(4, 2, UNIT, &grid, 1).unwrap()[0];
    let split = ((s_wave - d_wave) / d_wave).abs();
    Outcome {
        passed: worst <= 1e-4 && worst_d2 <= 5e-4 && split <= 2e-4,
        detail: format!("max rel error {worst:e} (d>=3), {worst_d2:e} (d=2), d=4 l=0/l=2 split {split:e}"),
    }
}

fn radial_closed_form() -> Outcome {
    let (mut worst, mut bad_nodes, mut states) = (0.0f64, 0, 0);
    for d in 2..=6 {
        for l in 0..=3 {
            for j in 0..=5 {
                let state = quantization(d, l, j, UNIT).unwrap();
                let wf = RadialWavefunction::new(state).unwrap();
                for i in 0..100 {
                    let r = 1e-3 * 10f64.powf(f64::from(i) * 5.0 / 99.0) / state.kappa();
                    worst = worst.max(wf.ode_residual(r).unwrap().relative());
                }
                let grid = RadialGrid::default_for(d, l, j + 1, UNIT).unwrap();
                if wf.count_nodes(&grid).unwrap() != j {
                    bad_nodes += 1;
                }
                states += 1;
            }
        }
    }
    Outcome {
        passed: worst <= 1e-8 && bad_nodes == 0,
        detail: format!("{states} states, max rel ODE residual {worst:e}, {bad_nodes} node-count mismatches"),
    }
}

fn verify_subcommand() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_coulomb-nd"))
        .args(["verify", "--format", "csv"])
        .output()
        .expect("binary runs");
    let failed = String::from_utf8_lossy(&out.stdout).lines().filter(|l| l.ends_with(",false")).count();
    Outcome {
        passed: out.status.code() == Some(0),
        detail: format!("exit {:?}, {failed} failed checks", out.status.code()),
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("spectrum closed form", spectrum_closed_form, Duration::from_secs(1)),
        ("Casimir consistency", casimir_consistency, Duration::from_secs(1)),
        ("degeneracy identity", degeneracy_identity, Duration::from_secs(1)),
        ("angular eigenvalue", angular_eigenvalue, Duration::from_secs(10)),
        ("orthonormality", orthonormality, Duration::from_secs(30)),
        ("numerical vs analytic spectrum", radial_spectrum, Duration::from_secs(60)),
        ("closed-form ODE residual and nodes", radial_closed_form, Duration::from_secs(30)),
        ("verify subcommand", verify_subcommand, Duration::from_secs(120)),
    ];
    let mut all = true;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let passed = outcome.passed && elapsed <= budget;
        all &= passed;
        println!(
            "{} criterion {}: {name}: {} [{:.2} s, budget {} s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    assert!(all, "at least one acceptance criterion failed");
}
