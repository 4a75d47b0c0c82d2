//! Argument parsing, dispatch and report writing for the `hspec` binary.

pub mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hspec::constants::{Case, StabilityCase};
use hspec::verify::{
    run_birman_schwinger, run_bounds, run_commutation, run_comparability, run_conformal_identity, run_convention,
    run_dawson, run_gronwall, run_hardy, run_homogeneity, run_kappa, run_kappa_ordering, run_lemma43,
    run_resolvent_sup, run_roundtrip, run_smoothing, run_soliton, run_thresholds, sigma_grid, default_sigma_args,
    BirmanSchwingerConfig, ConventionConfig, GWeightSpec, GronwallConfig, HClass, HardyWeight, InequalitySetup,
    Param, ResolventConfig, RoundTripConfig, SandwichSetup, SmoothingConfig, SolitonConfig, VerificationReport,
};
use hspec::Error;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOLUTION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "hspec", version, about = "Numerical checks for the Heisenberg sublaplacian spectral calculus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output path, or `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: String,

    /// Record wall-clock runtimes; without it they are written as 0 so that
    /// repeated runs produce identical bytes.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Generalized Dawson integral checks.
    Dawson(NoArgs),
    /// Optimal constant kappa of the weakly conjugate operator estimate.
    Kappa(KappaArgs),
    /// Explicit resolvent bounds for d = 1..d_max.
    Bounds(DimRange),
    /// Stability thresholds for d = 1..d_max.
    Thresholds(DimRange),
    /// Propagated soliton against its translate.
    Soliton(SolitonArgs),
    /// Hardy inequalities on seeded fields.
    Hardy(HardyArgs),
    /// ‖Tf‖ / ‖Lf‖ and ‖rTf‖ / ‖L^{1/2} f‖ against 1/2.
    Lemma43(FieldArgs),
    /// Sup of the sandwiched resolvent over a sigma grid.
    ResolventSup(ResolventArgs),
    /// Partial Kato smoothing integrals.
    Smoothing(SmoothingArgs),
    /// Birman-Schwinger norm for a subcritical potential.
    Stability(StabilityArgs),
    /// analyze(synthesize(c)) against c.
    Roundtrip(RoundTripArgs),
    /// Spectral sublaplacian against a finite-difference stencil.
    Convention(DimArg),
    /// Dilation homogeneity, comparability and resolvent commutation.
    Homogeneity(HomogeneityArgs),
    /// The full suite in dependency order.
    All(SeedArg),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NoArgs {}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KappaArgs {
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DimRange {
    #[arg(long, default_value_t = 10)]
    pub d_max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DimArg {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeedArg {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolitonArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Propagation times; repeat the flag for several.
    #[arg(long = "tau", default_values_t = vec![0.5])]
    pub taus: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HardyChoice {
    W4,
    Invz,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HardyArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = HardyChoice::W4)]
    pub weight: HardyChoice,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FieldArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseChoice {
    I,
    Ii,
    Iii,
    Iv,
}

impl CaseChoice {
    fn case(self) -> Case {
        match self {
            CaseChoice::I => Case::I,
            CaseChoice::Ii => Case::II,
            CaseChoice::Iii => Case::III,
            CaseChoice::Iv => Case::IV,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HChoice {
    /// L^s.
    Pure,
    /// The conformal power L_s.
    Conformal,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResolventArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = CaseChoice::Iv)]
    pub case: CaseChoice,
    /// Order of H, also the Sobolev order carried by G.
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, value_enum, default_value_t = HChoice::Pure)]
    pub h: HChoice,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-2)]
    pub sigma_min: f64,
    #[arg(long, default_value_t = 1e2)]
    pub sigma_max: f64,
    #[arg(long, default_value_t = 25)]
    pub magnitudes: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SmoothingArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub n_tau: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityChoice {
    I,
    Ii,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StabilityArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = StabilityChoice::I)]
    pub case: StabilityChoice,
    #[arg(long, default_value_t = 0.5)]
    pub c_factor: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub sigma_re: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma_im: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RoundTripArgs {
    #[arg(long, default_value_t = 48)]
    pub kmax: usize,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HomogeneityArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Orders to test; repeat the flag for several.
    #[arg(long = "s", default_values_t = vec![0.6, 1.0, 1.5])]
    pub s_list: Vec<f64>,
    #[arg(long, default_value_t = 48)]
    pub kmax: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dawson(_) => "dawson",
            Command::Kappa(_) => "kappa",
            Command::Bounds(_) => "bounds",
            Command::Thresholds(_) => "thresholds",
            Command::Soliton(_) => "soliton",
            Command::Hardy(_) => "hardy",
            Command::Lemma43(_) => "lemma43",
            Command::ResolventSup(_) => "resolvent-sup",
            Command::Smoothing(_) => "smoothing",
            Command::Stability(_) => "stability",
            Command::Roundtrip(_) => "roundtrip",
            Command::Convention(_) => "convention",
            Command::Homogeneity(_) => "homogeneity",
            Command::All(_) => "all",
        }
    }

    /// The command's arguments as report parameters.
    pub fn params(&self) -> BTreeMap<String, Param> {
        let value = serde_json::to_value(self).unwrap_or_default();
        let mut out = BTreeMap::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                out.insert(k, to_param(&v));
            }
        }
        out
    }

    /// Runs the command and returns its reports.
    pub fn run(&self) -> hspec::Result<Vec<VerificationReport>> {
        match self {
            Command::Dawson(_) => run_dawson(),
            Command::Kappa(a) => Ok(vec![run_kappa(a.c1, a.c2, a.s, a.mu)?]),
            Command::Bounds(a) => run_bounds(a.d_max),
            Command::Thresholds(a) => run_thresholds(a.d_max),
            Command::Soliton(a) => Ok(vec![run_soliton(&SolitonConfig::new(a.d, a.taus.clone()))?]),
            Command::Hardy(a) => {
                let which = match a.weight {
                    HardyChoice::W4 => HardyWeight::W4,
                    HardyChoice::Invz => HardyWeight::InvZ,
                };
                Ok(vec![run_hardy(&InequalitySetup::new(a.d)?, which, a.count, a.seed)?])
            }
            Command::Lemma43(a) => run_lemma43(&InequalitySetup::new(a.d)?, a.count, a.seed),
            Command::ResolventSup(a) => {
                let case = a.case.case();
                let g = GWeightSpec::new(case, a.s, a.mu, a.d)?;
                let h = match a.h {
                    HChoice::Pure => HClass::Pure(a.s),
                    HChoice::Conformal => HClass::Conformal(a.s),
                };
                let sigmas = sigma_grid(a.sigma_min, a.sigma_max, a.magnitudes, &default_sigma_args())?;
                let cfg = ResolventConfig::new(h, g, sigmas, a.count, a.seed);
                Ok(vec![run_resolvent_sup(&SandwichSetup::new(a.d)?, &cfg)?])
            }
            Command::Smoothing(a) => {
                let g = GWeightSpec::new(Case::IV, 1.0, 1.0, a.d)?;
                let mut cfg = SmoothingConfig::new(a.d, HClass::Pure(1.0), g);
                if let Some(t) = a.tau_max {
                    cfg.tau_max = t;
                }
                if let Some(n) = a.n_tau {
                    cfg.n_tau = n;
                }
                Ok(vec![run_smoothing(&cfg)?])
            }
            Command::Stability(a) => {
                let case = match a.case {
                    StabilityChoice::I => StabilityCase::I,
                    StabilityChoice::Ii => StabilityCase::II,
                };
                let mut cfg = BirmanSchwingerConfig::new(a.d, case, a.c_factor, Complex64::new(a.sigma_re, a.sigma_im));
                cfg.seed = a.seed;
                Ok(vec![run_birman_schwinger(&SandwichSetup::new(a.d)?, &cfg)?])
            }
            Command::Roundtrip(a) => {
                let cfg = RoundTripConfig { kmax: a.kmax, count: a.count, seed: a.seed, ..RoundTripConfig::default() };
                Ok(vec![run_roundtrip(&cfg)?])
            }
            Command::Convention(a) => Ok(vec![run_convention(&ConventionConfig::new(a.d))?]),
            Command::Homogeneity(a) => Ok(vec![
                run_homogeneity(&a.s_list, a.d, a.seed)?,
                run_comparability(&a.s_list, a.d, a.kmax)?,
                run_commutation(&a.s_list, a.d, a.seed)?,
            ]),
            Command::All(a) => run_all(a.seed),
        }
    }
}

fn to_param(v: &serde_json::Value) -> Param {
    match v {
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Param::Int(i),
            None => Param::Num(n.as_f64().unwrap_or(f64::NAN)),
        },
        serde_json::Value::String(s) => Param::Text(s.clone()),
        serde_json::Value::Array(xs) => {
            Param::Text(xs.iter().map(|x| output::param_string(&to_param(x))).collect::<Vec<_>>().join(","))
        }
        other => Param::Text(other.to_string()),
    }
}

/// The acceptance configurations of the resolvent check: each (d, case)
/// under L, L^{3/4} and L_{3/4}, with the order of H carried by G.
pub fn resolvent_suite() -> hspec::Result<Vec<(usize, GWeightSpec, HClass)>> {
    let mut out = Vec::new();
    let hs = [HClass::Pure(1.0), HClass::Pure(0.75), HClass::Conformal(0.75)];
    for (d, case) in [(1, Case::IV), (1, Case::III), (2, Case::IV), (1, Case::I), (2, Case::II)] {
        for h in hs {
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

/// Every check at acceptance scale: constants, transforms, soliton,
/// inequalities, resolvents, smoothing, stability.
pub fn run_all(seed: u64) -> hspec::Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    out.push(run_kappa(1.0, 1.0, 1.0, 1.0)?);
    let grid = [1.0, 0.9, 0.75, 0.6];
    out.extend(run_kappa_ordering(&grid, &grid)?);
    out.extend(run_dawson()?);
    out.extend(run_bounds(10)?);
    out.extend(run_thresholds(10)?);
    out.push(run_gronwall(&GronwallConfig { seed, ..GronwallConfig::default() })?);

    out.push(run_roundtrip(&RoundTripConfig { seed, ..RoundTripConfig::default() })?);
    for d in 1..=2 {
        out.push(run_convention(&ConventionConfig::new(d))?);
    }
    for d in 1..=3 {
        out.push(run_conformal_identity(d, 48)?);
    }
    let s_list = [0.6, 1.0, 1.5];
    for d in 1..=2 {
        out.push(run_homogeneity(&s_list, d, seed)?);
        out.push(run_comparability(&s_list, d, 48)?);
        out.push(run_commutation(&s_list, d, seed)?);
    }

    for d in 1..=2 {
        out.push(run_soliton(&SolitonConfig::new(d, vec![0.1, 0.5, 1.0]))?);
    }

    for d in 1..=3 {
        let setup = InequalitySetup::new(d)?;
        out.push(run_hardy(&setup, HardyWeight::W4, 100, seed)?);
        if d >= 2 {
            out.push(run_hardy(&setup, HardyWeight::InvZ, 100, seed)?);
        }
        out.extend(run_lemma43(&setup, 100, seed)?);
    }

    let setups = [SandwichSetup::new(1)?, SandwichSetup::new(2)?];
    let sigmas = hspec::verify::default_sigma_grid();
    for (d, g, h) in resolvent_suite()? {
        out.push(run_resolvent_sup(&setups[d - 1], &ResolventConfig::new(h, g, sigmas.clone(), 50, seed))?);
    }

    let g = GWeightSpec::new(Case::IV, 1.0, 1.0, 1)?;
    out.push(run_smoothing(&SmoothingConfig::new(1, HClass::Pure(1.0), g))?);

    for (d, case) in [(1, StabilityCase::I), (2, StabilityCase::II)] {
        for sigma in [Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(10.0, 0.01)] {
            let mut cfg = BirmanSchwingerConfig::new(d, case, 0.5, sigma);
            cfg.seed = seed;
            out.push(run_birman_schwinger(&setups[d - 1], &cfg)?);
        }
    }
    Ok(out)
}

/// Exit code for a finished run: 0 when everything passes, 1 when a bound
/// or tolerance is violated, 3 when only resolution gates fail.
pub fn exit_code(reports: &[VerificationReport]) -> u8 {
    if reports.iter().all(|r| r.pass) {
        EXIT_PASS
    } else if reports.iter().any(|r| !r.core_pass()) {
        EXIT_VIOLATION
    } else {
        EXIT_RESOLUTION
    }
}

/// Exit code for a run that stopped with an error.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Pole(_) | Error::Range(_) => EXIT_USAGE,
        Error::Resolution { .. } | Error::Convergence(_) | Error::Overflow(_) | Error::Optimization(_) => {
            EXIT_RESOLUTION
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_separate_violations_from_gates() {
        let ok = VerificationReport::bound_check("a", 1.0, 2.0, 0.0);
        let gate = VerificationReport::bound_check("b", 1.0, 2.0, 0.0).gated("tail_t", 1.0, 1e-9);
        let bad = VerificationReport::bound_check("c", 3.0, 2.0, 0.0);
        assert_eq!(exit_code(&[ok.clone()]), EXIT_PASS);
        assert_eq!(exit_code(&[ok.clone(), gate.clone()]), EXIT_RESOLUTION);
        assert_eq!(exit_code(&[gate, bad]), EXIT_VIOLATION);
        assert_eq!(error_code(&Error::Pole(1.0)), EXIT_USAGE);
        assert_eq!(error_code(&Error::Resolution { what: "x".into(), value: 1.0, gate: 0.0 }), EXIT_RESOLUTION);
    }

    #[test]
    fn params_follow_the_arguments() {
        let cli = Cli::try_parse_from(["hspec", "soliton", "--d", "2", "--tau", "0.1", "--tau", "1"]).unwrap();
        let p = cli.command.params();
        assert_eq!(p["d"], Param::Int(2));
        assert_eq!(p["taus"], Param::Text("1.0000000000000001e-1,1.0000000000000000e0".into()));
        assert!(Cli::try_parse_from(["hspec", "kappa", "--nope"]).is_err());
    }

    #[test]
    fn resolvent_suite_has_fifteen_configurations() {
        assert_eq!(resolvent_suite().unwrap().len(), 15);
    }
}
