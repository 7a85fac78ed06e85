//! Command-line front end: argument types, report builders and output
//! formatting for the `rellich` binary.
//!
//! JSON output is rendered through [`serde_json::Value`], so keys are sorted
//! and parsing then re-serializing a report reproduces it byte for byte.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    constant_for_gamma, critical_boundary_constant, critical_origin_constant, gap_analysis, subcritical_rellich_constant,
    ConstantRecord, ProblemParams,
};
use crate::harness::{
    run_harness, sample_transform_cases, transform_equivalence, HarnessConfig, InequalityId, TransformReport,
};
use crate::logterm::{coeff_table, verify_with, CoeffTable, VerifyReport};
use crate::minimizer::{refinement_study, RefinementSchedule};
use crate::quadrature::{epsilon_sweep, CutoffSpec, Family};
use crate::rational::{fmt as qfmt, parse as qparse, Q};

/// Relative tolerance applied to every transform-check case.
pub const TRANSFORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "rellich",
    version,
    about = "Optimal constants of critical Rellich inequalities on radial functions",
    after_help = "Defaults: R = 1, a = 1, tol = 1e-10, seed = 42. Exit status: 0 when every check passed, \
                  1 when a harness margin, table verification or transform check failed, 2 on invalid input."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact constants R^rad_{k,p}, R^rad_{k,N}, optionally A_{k,p} and the constant at gamma.
    Constants(ConstantsArgs),
    /// Coefficient table C/D of the polyharmonic log-power expansion, verified symbolically.
    Coeffs(CoeffsArgs),
    /// Rayleigh quotients of the phi/psi families along an epsilon list.
    Sweep(SweepArgs),
    /// Seeded randomized margins for the supporting inequalities.
    Harness(HarnessArgs),
    /// Refinement study of the discrete minimum of the quotient.
    Minimize(MinimizeArgs),
    /// Whole-space versus ball transformation identities on sampled cases.
    TransformCheck(TransformArgs),
    /// Comparison of R^rad_{2m,2} with A(4m,m)^2 and both constant chains.
    Gap(GapArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Dimension N.
    #[arg(long = "N")]
    pub n: u32,
    /// Derivative order k (p = N/k).
    #[arg(long)]
    pub k: u32,
    /// Weight exponent gamma, e.g. 2, 5/2 or 2.5 (defaults to p).
    #[arg(long)]
    pub gamma: Option<String>,
    /// Ball radius R.
    #[arg(long = "R", default_value = "1")]
    pub radius: String,
    /// Dilation a >= 1 inside log(aR/|x|).
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Subcritical exponent p in (1, N/k) for A_{k,p}.
    #[arg(long)]
    pub p: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    /// Dimension N.
    #[arg(long = "N")]
    pub n: u32,
    /// Highest level m.
    #[arg(long)]
    pub m: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Test-function family: phi (origin) or psi (boundary).
    #[arg(long, default_value = "phi")]
    pub family: String,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Strictly decreasing epsilon list.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
    pub eps: Vec<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct HarnessArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Test functions per inequality.
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Comma-separated inequality names (all when omitted).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Refinement levels (>= 3).
    #[arg(long, default_value_t = 8)]
    pub levels: usize,
    /// Tolerance for the never-below-exact check, value >= exact (1 - 5 tol).
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Sampled (p, alpha, w) cases; the first two use the special alphas.
    #[arg(long, default_value_t = 10)]
    pub cases: usize,
    /// Ball radius R.
    #[arg(long = "R", default_value = "1")]
    pub radius: String,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GapArgs {
    /// Level m >= 2 (N = 4m, k = 2m, p = 2).
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Rendered report and whether every check it contains passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
    pub out: Option<PathBuf>,
}

fn parse_q(name: &str, s: &str) -> Result<Q> {
    qparse(s).ok_or_else(|| Error::Invalid(format!("--{name}: cannot parse {s:?} as a rational")))
}

impl ParamArgs {
    pub fn to_params(&self) -> Result<ProblemParams> {
        let p = Q::new(self.n.into(), self.k.max(1).into());
        let gamma = match &self.gamma {
            Some(g) => parse_q("gamma", g)?,
            None => p,
        };
        ProblemParams::new(self.n, self.k, gamma, parse_q("R", &self.radius)?, self.a)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render<T: Serialize>(output: &OutputArgs, value: &T, csv: impl FnOnce() -> String, passed: bool) -> Result<Outcome> {
    let text = match output.format {
        Format::Json => to_json(value)?,
        Format::Csv => csv(),
    };
    Ok(Outcome { text, passed, out: output.out.clone() })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Constants(a) => cmd_constants(a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Harness(a) => cmd_harness(a),
        Command::Minimize(a) => cmd_minimize(a),
        Command::TransformCheck(a) => cmd_transform_check(a),
        Command::Gap(a) => cmd_gap(a),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    pub constant: Option<ConstantRecord>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub params: ProblemParams,
    pub entries: Vec<ConstantEntry>,
}

pub fn constants_report(args: &ConstantsArgs) -> Result<ConstantsReport> {
    let params = args.params.to_params()?;
    let (n, k) = (params.n, params.k);
    let p = params.p();
    let at = |gamma: Q| params.with_gamma(gamma);
    let mut entries = vec![
        ConstantEntry {
            name: format!("R_rad[k={k},gamma=p={}]", qfmt(&p)),
            constant: Some(ConstantRecord::from(&critical_origin_constant(&at(p.clone()))?)),
            note: "origin concentration".into(),
        },
        ConstantEntry {
            name: format!("R_rad[k={k},gamma=N={n}]"),
            constant: Some(ConstantRecord::from(&critical_boundary_constant(&at(Q::from_integer(n.into())))?)),
            note: "boundary concentration".into(),
        },
    ];
    if let Some(ps) = &args.p {
        let sub = parse_q("p", ps)?;
        let c = subcritical_rellich_constant(n, k, &sub)?;
        entries.push(ConstantEntry {
            name: format!("A[k={k},p={}]", qfmt(&sub)),
            constant: Some(ConstantRecord::from(&c)),
            note: "subcritical, power weight".into(),
        });
    }
    if args.params.gamma.is_some() {
        let g = &params.gamma;
        let (constant, note) = match constant_for_gamma(&params)? {
            Some(c) if c.value() == 0.0 => (Some(ConstantRecord::from(&c)), format!("0 (gamma outside [{}, {n}])", qfmt(&p))),
            Some(c) => (Some(ConstantRecord::from(&c)), "endpoint exponent".into()),
            None => (None, "no closed form for gamma strictly inside (p, N)".into()),
        };
        entries.push(ConstantEntry { name: format!("R_rad[k={k},gamma={}]", qfmt(g)), constant, note });
    }
    Ok(ConstantsReport { params, entries })
}

fn cmd_constants(args: &ConstantsArgs) -> Result<Outcome> {
    let report = constants_report(args)?;
    render(
        &args.output,
        &report,
        || {
            let mut s = String::from("name,exact,decimal,value,note\n");
            for e in &report.entries {
                let (exact, dec, val) = match &e.constant {
                    Some(c) => (c.exact.clone(), c.decimal.clone(), format!("{:e}", c.value)),
                    None => (String::new(), String::new(), String::new()),
                };
                s.push_str(&format!("{},{},{},{},{}\n", csv_field(&e.name), exact, dec, val, csv_field(&e.note)));
            }
            s
        },
        true,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffsReport {
    pub table: CoeffTable,
    pub verify: VerifyReport,
}

pub fn coeffs_report(args: &CoeffsArgs) -> Result<CoeffsReport> {
    let table = coeff_table(args.n, args.m)?;
    let verify = verify_with(&table);
    Ok(CoeffsReport { table, verify })
}

fn cmd_coeffs(args: &CoeffsArgs) -> Result<Outcome> {
    let report = coeffs_report(args)?;
    let passed = report.verify.passed;
    render(
        &args.output,
        &report,
        || {
            let mut s = String::from("kind,l,j,value\n");
            for ((l, j), v) in &report.table.c {
                s.push_str(&format!("C,{l},{j},{}\n", qfmt(v)));
            }
            for ((l, j), v) in &report.table.d {
                s.push_str(&format!("D,{l},{j},{}\n", qfmt(v)));
            }
            s.push_str(&format!("verified,{},,{}\n", report.table.m, report.verify.passed));
            s
        },
        passed,
    )
}

fn cmd_sweep(args: &SweepArgs) -> Result<Outcome> {
    let family: Family = args.family.parse()?;
    let params = args.params.to_params()?;
    let report = epsilon_sweep(family, &params, &args.eps, &CutoffSpec::standard(&params), args.tol)?;
    render(&args.output, &report, || report.to_csv(), true)
}

fn cmd_harness(args: &HarnessArgs) -> Result<Outcome> {
    let inequalities = if args.only.is_empty() {
        InequalityId::ALL.to_vec()
    } else {
        args.only.iter().map(|s| s.parse()).collect::<Result<Vec<InequalityId>>>()?
    };
    let config = HarnessConfig { seed: args.seed, cases: args.cases, tol: args.tol, inequalities };
    let report = run_harness(&config)?;
    render(&args.output, &report, || report.to_csv(), report.all_passed)
}

fn cmd_minimize(args: &MinimizeArgs) -> Result<Outcome> {
    let params = args.params.to_params()?;
    let schedule = RefinementSchedule { levels: args.levels, ..Default::default() };
    let study = refinement_study(&params, &schedule)?;
    let passed = study.never_below_exact(args.tol).unwrap_or(true);
    render(&args.output, &study, || study.to_csv(), passed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformCheckReport {
    pub seed: u64,
    pub tolerance: f64,
    pub all_passed: bool,
    pub cases: Vec<TransformReport>,
}

pub fn transform_check_report(args: &TransformArgs) -> Result<TransformCheckReport> {
    let radius = crate::rational::to_f64(&parse_q("R", &args.radius)?);
    let cases = sample_transform_cases(args.seed, args.cases)
        .into_iter()
        .map(|c| transform_equivalence(&c.w, c.n, c.p, c.alpha, radius, args.tol))
        .collect::<Result<Vec<_>>>()?;
    let all_passed = cases.iter().all(|c| c.max_rel_error() <= TRANSFORM_TOL);
    Ok(TransformCheckReport { seed: args.seed, tolerance: TRANSFORM_TOL, all_passed, cases })
}

fn cmd_transform_check(args: &TransformArgs) -> Result<Outcome> {
    let report = transform_check_report(args)?;
    render(
        &args.output,
        &report,
        || {
            let mut s = String::from("case,N,p,alpha,beta,laplacian_rel_error,potential_rel_error,quotient_rel_diff,passed\n");
            for (i, c) in report.cases.iter().enumerate() {
                s.push_str(&format!(
                    "{i},{},{},{:e},{:e},{:e},{:e},{:e},{}\n",
                    c.n,
                    c.p,
                    c.alpha,
                    c.beta,
                    c.laplacian_rel_error,
                    c.potential_rel_error,
                    c.quotient_rel_diff,
                    c.max_rel_error() <= TRANSFORM_TOL
                ));
            }
            s
        },
        report.all_passed,
    )
}

fn cmd_gap(args: &GapArgs) -> Result<Outcome> {
    let report = gap_analysis(args.m)?;
    render(
        &args.output,
        &report,
        || {
            let mut s = String::from("chain,step,inequality,factor,running_product\n");
            let mut push = |name: &str, steps: &[crate::exact::ChainStep]| {
                for (i, st) in steps.iter().enumerate() {
                    s.push_str(&format!(
                        "{name},{i},{},{},{}\n",
                        csv_field(&st.inequality),
                        st.factor,
                        st.running_product
                    ));
                }
            };
            if let Some(e) = &report.chains.earlier {
                push("earlier", e);
            }
            push("present", &report.chains.present);
            s.push_str(&format!("summary,,A_squared={},R_rad={},ratio={}\n", report.a_squared, report.r_rad, report.ratio));
            s
        },
        true,
    )
}

/// Writes the outcome and returns the process exit code.
pub fn emit(outcome: &Outcome) -> Result<i32> {
    match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    Ok(if outcome.passed { 0 } else { 1 })
}
