//! Acceptance suite: one PASS/FAIL line per criterion, with the tolerances
//! and runtime limits pinned below. Criterion 15 (byte-identical CLI output)
//! lives in the cli crate.

use hspec::constants::{Case, StabilityCase};
use hspec::verify::{
    default_sigma_grid, run_birman_schwinger, run_commutation, run_comparability, run_conformal_identity,
    run_convention, run_dawson, run_gronwall, run_hardy, run_homogeneity, run_kappa, run_kappa_ordering,
    run_lemma43, run_resolvent_sup, run_roundtrip, run_smoothing, run_soliton, BirmanSchwingerConfig,
    ConventionConfig, GWeightSpec, GronwallConfig, HClass, HardyWeight, InequalitySetup, ResolventConfig,
    RoundTripConfig, SandwichSetup, SmoothingConfig, SolitonConfig, VerificationReport,
};
use hspec::Result;
use num_complex::Complex64;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const KAPPA_GOLDEN: f64 = 6.42686;
const KAPPA_GOLDEN_TOL: f64 = 5e-4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn summarize(reports: &[VerificationReport]) -> Outcome {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            let gates: Vec<String> = r
                .gates
                .iter()
                .filter(|(k, g)| !r.residuals.get(*k).is_some_and(|v| v <= *g))
                .map(|(k, g)| format!("{k}={:.3e}>{g:.0e}", r.residuals.get(k).copied().unwrap_or(f64::NAN)))
                .collect();
            format!("{} measured={:.6e} bound={:.6e} {}", r.name, r.measured, r.bound, gates.join(" "))
        })
        .collect();
    let worst = reports.iter().map(|r| r.margin).filter(|m| !m.is_nan()).fold(f64::INFINITY, f64::min);
    Outcome {
        pass: failed.is_empty() && !reports.is_empty(),
        detail: if failed.is_empty() {
            format!("{} reports, min margin {worst:.3e}", reports.len())
        } else {
            format!("failing: {}", failed.join("; "))
        },
    }
}

fn criterion(
    results: &mut Vec<bool>,
    number: usize,
    title: &str,
    limit: Option<Duration>,
    run: impl FnOnce() -> Result<Vec<VerificationReport>>,
) {
    let start = Instant::now();
    let outcome = match run() {
        Ok(reports) => summarize(&reports),
        Err(e) => Outcome { pass: false, detail: format!("error: {e}") },
    };
    let elapsed = start.elapsed();
    let in_time = limit.map_or(true, |l| elapsed < l);
    let pass = outcome.pass && in_time;
    let timing = match limit {
        Some(l) => format!("{:.2}s of {}s", elapsed.as_secs_f64(), l.as_secs()),
        None => format!("{:.2}s", elapsed.as_secs_f64()),
    };
    println!(
        "{} criterion {number:>2} {title}: {} [{timing}]",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail
    );
    results.push(pass);
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn resolvent_configs() -> Result<Vec<(usize, GWeightSpec, HClass)>> {
    let mut out = Vec::new();
    let hs = [HClass::Pure(1.0), HClass::Pure(0.75), HClass::Conformal(0.75)];
    for (d, case) in [(1, Case::IV), (1, Case::III), (2, Case::IV), (1, Case::I), (2, Case::II)] {
        for h in hs {
            // The spectral factor of G carries the order of H.
            let s = h.s();
            let mu = match case {
                Case::I | Case::II => 1.0,
                Case::III | Case::IV => s,
            };
            out.push((d, GWeightSpec::new(case, s, mu, d)?, h));
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let mut results = Vec::new();

    criterion(&mut results, 1, "kappa golden value", secs(1), || {
        let r = run_kappa(1.0, 1.0, 1.0, 1.0)?;
        let golden =
            VerificationReport::residual_check("kappa_golden", (r.measured - KAPPA_GOLDEN).abs(), KAPPA_GOLDEN_TOL);
        Ok(vec![r, golden])
    });

    criterion(&mut results, 2, "kappa bound ordering", secs(10), || {
        let grid = [1.0, 0.9, 0.75, 0.6];
        run_kappa_ordering(&grid, &grid)
    });

    criterion(&mut results, 3, "Dawson integral", None, run_dawson);

    criterion(&mut results, 4, "transform round trip", secs(30), || {
        Ok(vec![run_roundtrip(&RoundTripConfig::default())?])
    });

    criterion(&mut results, 5, "soliton translation", secs(60), || {
        [1, 2].iter().map(|&d| run_soliton(&SolitonConfig::new(d, vec![0.1, 0.5, 1.0]))).collect()
    });

    criterion(&mut results, 6, "spectral vs finite-difference sublaplacian", None, || {
        [1, 2].iter().map(|&d| run_convention(&ConventionConfig::new(d))).collect()
    });

    criterion(&mut results, 7, "Hardy inequalities", None, || {
        let mut out = Vec::new();
        for d in 1..=3 {
            let setup = InequalitySetup::new(d)?;
            out.push(run_hardy(&setup, HardyWeight::W4, 100, 0)?);
            if d >= 2 {
                out.push(run_hardy(&setup, HardyWeight::InvZ, 100, 0)?);
            }
        }
        Ok(out)
    });

    criterion(&mut results, 8, "T versus L estimates", None, || {
        let mut out = Vec::new();
        for d in 1..=3 {
            out.extend(run_lemma43(&InequalitySetup::new(d)?, 100, 0)?);
        }
        Ok(out)
    });

    criterion(&mut results, 9, "conformal power one is the sublaplacian", None, || {
        (1..=3).map(|d| run_conformal_identity(d, 48)).collect()
    });

    criterion(&mut results, 10, "homogeneity, comparability, commutation", None, || {
        let s_list = [0.6, 1.0, 1.5];
        let mut out = Vec::new();
        for d in 1..=2 {
            out.push(run_homogeneity(&s_list, d, 0)?);
            out.push(run_comparability(&s_list, d, 48)?);
            out.push(run_commutation(&s_list, d, 0)?);
        }
        Ok(out)
    });

    criterion(&mut results, 11, "uniform resolvent sup", secs(600), || {
        let setups = [SandwichSetup::new(1)?, SandwichSetup::new(2)?];
        let sigmas = default_sigma_grid();
        resolvent_configs()?
            .into_iter()
            .map(|(d, g, h)| run_resolvent_sup(&setups[d - 1], &ResolventConfig::new(h, g, sigmas.clone(), 50, 0)))
            .collect()
    });

    criterion(&mut results, 12, "Kato smoothing integral", secs(120), || {
        let g = GWeightSpec::new(Case::IV, 1.0, 1.0, 1)?;
        Ok(vec![run_smoothing(&SmoothingConfig::new(1, HClass::Pure(1.0), g))?])
    });

    criterion(&mut results, 13, "Birman-Schwinger norm", None, || {
        let mut out = Vec::new();
        for (d, case) in [(1, StabilityCase::I), (2, StabilityCase::II)] {
            let setup = SandwichSetup::new(d)?;
            for sigma in [Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(10.0, 0.01)] {
                out.push(run_birman_schwinger(&setup, &BirmanSchwingerConfig::new(d, case, 0.5, sigma))?);
            }
        }
        Ok(out)
    });

    criterion(&mut results, 14, "Gronwall envelope", None, || Ok(vec![run_gronwall(&GronwallConfig::default())?]));

    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
