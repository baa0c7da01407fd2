//! Command-line front end: `sample`, `density`, `law`, `recursion` and
//! `compare`, each writing CSV/JSON files and a manifest.

pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::equilibrium::{build_spectral_curve, solve_auto, solve_one_cut, EquilibriumError, EquilibriumMeasure};
use crate::kernels::{
    cluster_w2, fredholm_det, gaudin_cdf, gaudin_density, tw_cdf_painleve, wigner_surmise, Ensemble, GapProblem,
    DEFAULT_ORDER, HM_MIN,
};
use crate::potentials::{critical_quartic, quadratic, singular_family, Potential};
use crate::recursion::{rescaled_curve, CorrelatorTable, RecursionError, RescaledCurveSpec, TopologicalRecursion};
use crate::sampler::{sample_chains, Ensemble as Samples, GasConfig, RunPlan};
use crate::stats::{histogram, ks_distance, unfold_pooled, Tabulated};
use output::{csv_rows, histogram_csv, OutputDir};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Unsolved(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Unsolved(_) => 4,
        }
    }
}

impl From<EquilibriumError> for CliError {
    fn from(e: EquilibriumError) -> Self {
        match e {
            EquilibriumError::Unsolved
            | EquilibriumError::NoOneCutSolution(_)
            | EquilibriumError::NoTwoCutSolution(_) => CliError::Unsolved(e.to_string()),
            EquilibriumError::BadTemperature(_) | EquilibriumError::DegreeMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<RecursionError> for CliError {
    fn from(e: RecursionError) -> Self {
        match e {
            RecursionError::Unstable { .. }
            | RecursionError::DepthExceeded(..)
            | RecursionError::SpectatorCount { .. }
            | RecursionError::BadSpectator(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "spectralgas", version, about = "Log-gas sampling, equilibrium densities and universal laws")]
pub struct Cli {
    /// Directory for all output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run Metropolis chains and write eigenvalue samples and a histogram.
    Sample(SampleArgs),
    /// Solve for the equilibrium density and write it on a grid.
    Density(DensityArgs),
    /// Tabulate a universal law.
    Law(LawArgs),
    /// Compute a correlator of the topological recursion.
    Recursion(RecursionArgs),
    /// Sample, solve, and report Kolmogorov–Smirnov distances.
    Compare(SampleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::Density(_) => "density",
            Command::Law(_) => "law",
            Command::Recursion(_) => "recursion",
            Command::Compare(_) => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Quadratic,
    CriticalQuartic,
    Singular,
    Custom,
}

/// A temperature, either absolute or a multiple of the family's `T_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TempSpec {
    Absolute(f64),
    Critical(f64),
}

impl FromStr for TempSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if let Some(f) = t.strip_suffix("tc") {
            let f = f.trim_end_matches('*');
            let factor = if f.is_empty() { 1.0 } else { f.parse::<f64>().map_err(|e| format!("{s}: {e}"))? };
            return Ok(TempSpec::Critical(factor));
        }
        t.parse::<f64>().map(TempSpec::Absolute).map_err(|e| format!("{s}: {e}"))
    }
}

impl TempSpec {
    pub fn resolve(self, v: &Potential) -> Result<f64, CliError> {
        let t = match self {
            TempSpec::Absolute(t) => t,
            TempSpec::Critical(f) => {
                f * v
                    .critical_temperature()
                    .ok_or_else(|| CliError::Usage(format!("potential {} has no critical temperature", v.name)))?
            }
        };
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("temperature {t} must be positive")));
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Ascending coefficients for `--potential custom`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<f64>,
    /// Temperature: a number, `tc`, or a multiple such as `0.5tc`.
    #[arg(long = "T", alias = "temperature")]
    pub temperature: Option<TempSpec>,
}

impl PotentialArgs {
    fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
    }

    pub fn build(&self) -> Result<Potential, CliError> {
        let kind = Self::need(self.potential, "potential")?;
        match kind {
            PotentialKind::Quadratic => Ok(quadratic()),
            PotentialKind::CriticalQuartic => critical_quartic(Self::need(self.epsilon, "epsilon")?).map_err(usage),
            PotentialKind::Singular => singular_family(
                Self::need(self.m, "m")?,
                Self::need(self.b, "b")?,
                self.epsilon.unwrap_or(0.0),
            )
            .map_err(usage),
            PotentialKind::Custom => Potential::from_coefficients("custom", &self.coeffs).map_err(usage),
        }
    }

    pub fn potential_and_temperature(&self) -> Result<(Potential, f64), CliError> {
        let v = self.build()?;
        let t = Self::need(self.temperature, "T")?.resolve(&v)?;
        Ok((v, t))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// GasConfig JSON; replaces the potential, temperature, size and seed flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Proposal standard deviation.
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Burn-in sweeps before the first recorded sample.
    #[arg(long, default_value_t = 50)]
    pub sweeps: usize,
    /// Recorded samples per chain.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    /// Sweeps between recorded samples.
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    /// Histogram range `lo,hi`; defaults to the sample range.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub range: Option<Vec<f64>>,
}

impl SampleArgs {
    pub fn gas_config(&self) -> Result<GasConfig, CliError> {
        let cfg = if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<GasConfig>(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        } else {
            let (v, t) = self.potential.potential_and_temperature()?;
            let n = PotentialArgs::need(self.n, "N")?;
            let mut cfg = GasConfig::new(n, t, self.beta, v, self.seed);
            cfg.proposal_sigma = self.sigma;
            cfg
        };
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }

    pub fn plan(&self) -> RunPlan {
        RunPlan {
            chains: self.chains,
            samples_per_chain: self.samples,
            burnin_sweeps: self.sweeps,
            thin_sweeps: self.thin,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawKind {
    Gaudin,
    Tw,
    Surmise,
    Cluster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Fredholm,
    Painleve,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    Hermitian,
    RealSymmetric,
    Quaternionic,
}

impl From<EnsembleArg> for Ensemble {
    fn from(e: EnsembleArg) -> Self {
        match e {
            EnsembleArg::Hermitian => Ensemble::Hermitian,
            EnsembleArg::RealSymmetric => Ensemble::RealSymmetric,
            EnsembleArg::Quaternionic => Ensemble::Quaternionic,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    #[arg(long, value_enum)]
    pub law: LawKind,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Tracy–Widom evaluation route.
    #[arg(long, value_enum, default_value = "fredholm")]
    pub route: Route,
    #[arg(long, value_enum, default_value = "hermitian")]
    pub ensemble: EnsembleArg,
    /// Nyström order for the Tracy–Widom determinant.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Gaussian,
    Rescaled,
    Potential,
}

#[derive(Debug, Clone, Args)]
pub struct RecursionArgs {
    #[arg(long, value_enum)]
    pub curve: CurveKind,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub g: u32,
    /// Order of the rescaled curve.
    #[arg(long = "m", id = "curve_m")]
    pub m: Option<u32>,
    #[arg(long = "b", id = "curve_b")]
    pub b: Option<f64>,
    #[arg(long = "eps", id = "curve_eps", allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// Potential for `--curve potential` (one-cut measures only).
    #[arg(long = "potential", id = "curve_potential", value_enum)]
    pub potential: Option<PotentialKind>,
    #[arg(long = "epsilon", id = "curve_epsilon")]
    pub epsilon: Option<f64>,
    #[arg(long = "coeffs", id = "curve_coeffs", value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<f64>,
    #[arg(long = "T", id = "curve_t")]
    pub temperature: Option<TempSpec>,
    /// Spectator points `re,im;re,im;...`; defaults to 3, 4, ...
    #[arg(long, allow_hyphen_values = true)]
    pub spectators: Option<String>,
}

fn parse_spectators(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let parts: Vec<&str> = p.split(',').map(str::trim).collect();
            let num = |t: &str| t.parse::<f64>().map_err(|e| CliError::Usage(format!("spectator {p}: {e}")));
            match parts.as_slice() {
                [re] => Ok(Complex64::new(num(re)?, 0.0)),
                [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
                _ => Err(CliError::Usage(format!("spectator {p}: expected re or re,im"))),
            }
        })
        .collect()
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 || !(lo < hi) {
        return Err(CliError::Usage(format!("need points >= 2 and from < to, got {points} on [{lo}, {hi}]")));
    }
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                let mut cmd = Cli::command();
                cmd.build();
                if let Some(sub) = cmd.find_subcommand_mut(cli.command.name()) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let mut out = OutputDir::create(&cli.out)?;
    let (config, seed) = match &cli.command {
        Command::Sample(a) => (cmd_sample(a, &mut out)?, a.seed),
        Command::Density(a) => (cmd_density(a, &mut out)?, 0),
        Command::Law(a) => (cmd_law(a, &mut out)?, 0),
        Command::Recursion(a) => (cmd_recursion(a, &mut out)?, 0),
        Command::Compare(a) => (cmd_compare(a, &mut out)?, a.seed),
    };
    let seed = config.get("seed").and_then(|s| s.as_u64()).unwrap_or(seed);
    out.finish(cli.command.name(), config, seed, start.elapsed().as_secs_f64())?;
    Ok(())
}

fn write_samples(cfg: &GasConfig, args: &SampleArgs, out: &mut OutputDir) -> Result<Samples, CliError> {
    let ens = sample_chains(cfg, &args.plan()).map_err(|e| match e {
        crate::sampler::SamplerError::InvalidConfig(m) => CliError::Usage(m),
        other => runtime(other),
    })?;
    let header: Vec<String> = (1..=cfg.n).map(|i| format!("lambda_{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    out.write("samples.csv", &csv_rows(&header, ens.samples.iter().map(Vec::as_slice)))?;

    let pooled = ens.pooled();
    let range = match &args.range {
        Some(r) => [r[0], r[1]],
        None => {
            let lo = pooled.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = pooled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            [lo, if hi > lo { hi } else { lo + 1.0 }]
        }
    };
    let h = histogram(&pooled, args.bins, range).map_err(usage)?;
    out.write("histogram.csv", &histogram_csv(&h))?;
    out.write_json(
        "samples.json",
        &json!({
            "config": cfg,
            "plan": args.plan(),
            "chains": ens.chains,
            "acceptance_rate": ens.acceptance_rate(),
        }),
    )?;
    Ok(ens)
}

fn cmd_sample(args: &SampleArgs, out: &mut OutputDir) -> Result<serde_json::Value, CliError> {
    let cfg = args.gas_config()?;
    write_samples(&cfg, args, out)?;
    Ok(json!({ "gas": cfg, "plan": args.plan(), "bins": args.bins, "range": args.range, "seed": cfg.seed }))
}

fn density_csv(m: &EquilibriumMeasure, xs: &[f64]) -> String {
    let rows: Vec<[f64; 2]> = xs.iter().map(|&x| [x, m.density(x)]).collect();
    csv_rows(&["x", "rho"], rows.iter().map(|r| &r[..]))
}

fn default_window(m: &EquilibriumMeasure) -> (f64, f64) {
    let (a, b) = m.support();
    let pad = 0.05 * (b - a);
    (a - pad, b + pad)
}

fn cmd_density(args: &DensityArgs, out: &mut OutputDir) -> Result<serde_json::Value, CliError> {
    let (v, t) = args.potential.potential_and_temperature()?;
    let m = solve_auto(&v, t)?;
    let (lo, hi) = default_window(&m);
    let xs = grid(args.from.unwrap_or(lo), args.to.unwrap_or(hi), args.points)?;
    out.write("density.csv", &density_csv(&m, &xs))?;
    out.write_json("measure.json", &m)?;
    println!("{} cut(s), T = {t}", m.q());
    for c in &m.cuts {
        println!("  [{}, {}]", c.a, c.b);
    }
    Ok(json!({ "potential": v, "T": t, "points": args.points, "from": xs[0], "to": xs[xs.len() - 1] }))
}

fn cmd_law(args: &LawArgs, out: &mut OutputDir) -> Result<serde_json::Value, CliError> {
    let (dlo, dhi) = match args.law {
        LawKind::Gaudin => (0.0, 4.0),
        LawKind::Tw => (-6.0, 4.0),
        LawKind::Surmise => (0.0, 4.0),
        LawKind::Cluster => (0.01, 4.0),
    };
    let xs = grid(args.from.unwrap_or(dlo), args.to.unwrap_or(dhi), args.points)?;
    let mut err: Option<f64> = None;
    let mut discrepancy: Option<f64> = None;
    let (kind, order, header, rows): (Option<&str>, Option<usize>, Vec<&str>, Vec<Vec<f64>>) = match args.law {
        LawKind::Gaudin => {
            if xs[0] < 0.0 {
                return Err(CliError::Usage("spacing law needs s >= 0".into()));
            }
            let mut worst: f64 = 0.0;
            let mut rows = Vec::with_capacity(xs.len());
            for &s in &xs {
                let e = fredholm_det(&GapProblem::sine(0.0, s, DEFAULT_ORDER)).map_err(runtime)?;
                worst = worst.max(e.err_estimate);
                rows.push(vec![s, gaudin_density(s), gaudin_cdf(s)]);
            }
            err = Some(worst);
            (Some("sine"), Some(DEFAULT_ORDER), vec!["s", "p", "cdf"], rows)
        }
        LawKind::Tw => {
            if args.route != Route::Fredholm && xs[0] < HM_MIN {
                return Err(CliError::Usage(format!("Painlevé route needs s >= {HM_MIN}")));
            }
            let mut worst: f64 = 0.0;
            let mut gap: f64 = 0.0;
            let mut rows = Vec::with_capacity(xs.len());
            for &s in &xs {
                let fred = || -> Result<f64, CliError> {
                    let r = fredholm_det(&GapProblem::airy(s, args.order)).map_err(usage)?;
                    Ok(r.value)
                };
                match args.route {
                    Route::Fredholm => rows.push(vec![s, fred()?]),
                    Route::Painleve => rows.push(vec![s, tw_cdf_painleve(s).map_err(runtime)?]),
                    Route::Both => {
                        let (f, p) = (fred()?, tw_cdf_painleve(s).map_err(runtime)?);
                        gap = gap.max((f - p).abs());
                        rows.push(vec![s, f, p]);
                    }
                }
                if args.route != Route::Painleve {
                    let r = fredholm_det(&GapProblem::airy(s, args.order)).map_err(usage)?;
                    worst = worst.max(r.err_estimate);
                }
            }
            if args.route != Route::Painleve {
                err = Some(worst);
            }
            let header = match args.route {
                Route::Both => {
                    discrepancy = Some(gap);
                    println!("max |fredholm - painleve| = {gap:e}");
                    vec!["s", "fredholm", "painleve"]
                }
                _ => vec!["s", "F"],
            };
            (Some("airy"), Some(args.order), header, rows)
        }
        LawKind::Surmise => (None, None, vec!["x", "p"], xs.iter().map(|&x| vec![x, wigner_surmise(x)]).collect()),
        LawKind::Cluster => {
            if xs[0] <= 0.0 {
                return Err(CliError::Usage("cluster function needs r > 0".into()));
            }
            let e = Ensemble::from(args.ensemble);
            (None, None, vec!["r", "W2"], xs.iter().map(|&r| vec![r, cluster_w2(r, e)]).collect())
        }
    };
    out.write("law.csv", &csv_rows(&header, rows.iter().map(Vec::as_slice)))?;
    let law = args.law.to_possible_value().map(|v| v.get_name().to_string());
    let route = args.route.to_possible_value().map(|v| v.get_name().to_string());
    let ensemble = args.ensemble.to_possible_value().map(|v| v.get_name().to_string());
    let sidecar = json!({
        "law": law,
        "kind": kind,
        "order": order,
        "lambda": kind.map(|_| 1.0),
        "err_estimate": err,
        "route": if args.law == LawKind::Tw { route.clone() } else { None },
        "ensemble": if args.law == LawKind::Cluster { ensemble.clone() } else { None },
        "max_discrepancy": discrepancy,
    });
    out.write_json("law.json", &sidecar)?;
    Ok(json!({
        "law": law, "from": xs[0], "to": xs[xs.len() - 1], "points": args.points,
        "route": route, "ensemble": ensemble, "order": args.order,
    }))
}

fn cmd_recursion(args: &RecursionArgs, out: &mut OutputDir) -> Result<serde_json::Value, CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let mut extra = json!({});
    let curve = match args.curve {
        CurveKind::Gaussian => build_spectral_curve(&solve_one_cut(&quadratic(), 1.0)?)?,
        CurveKind::Rescaled => {
            let m = args.m.ok_or_else(|| CliError::Usage("missing required flag --m".into()))?;
            let b = args.b.ok_or_else(|| CliError::Usage("missing required flag --b".into()))?;
            let eps = args.eps.unwrap_or(0.0);
            if m == 0 || !(b > 0.0) || !(eps.abs() < 1.0) {
                return Err(CliError::Usage(format!("need m >= 1, b > 0, |eps| < 1; got m={m}, b={b}, eps={eps}")));
            }
            let spec = RescaledCurveSpec::new(m, b, eps);
            let g2 = spec.gamma * spec.gamma;
            extra = json!({ "spec": spec, "gamma_squared": [g2.re, g2.im] });
            rescaled_curve(&spec)
        }
        CurveKind::Potential => {
            let pa = PotentialArgs {
                potential: args.potential,
                epsilon: args.epsilon,
                m: None,
                b: None,
                coeffs: args.coeffs.clone(),
                temperature: args.temperature,
            };
            let (v, t) = pa.potential_and_temperature()?;
            let m = solve_one_cut(&v, t)?;
            extra = json!({ "measure": m });
            build_spectral_curve(&m)?
        }
    };
    let spectators = match &args.spectators {
        Some(s) => parse_spectators(s)?,
        None => (1..args.n).map(|j| Complex64::new(2.0 + j as f64, 0.0)).collect(),
    };
    let tr = TopologicalRecursion::new(curve.clone());
    let r = tr.correlator_rational(args.n, args.g, &spectators)?;
    let table = CorrelatorTable::new(args.n, args.g, &spectators, &r);
    let mut doc = json!({
        "curve": args.curve.to_possible_value().map(|v| v.get_name().to_string()),
        "center": [curve.center.re, curve.center.im],
        "halfwidth": [curve.halfwidth.re, curve.halfwidth.im],
        "correlator": table,
    });
    if let (Some(d), Some(e)) = (doc.as_object_mut(), extra.as_object()) {
        d.extend(e.clone());
    }
    out.write_json("correlator.json", &doc)?;
    Ok(json!({ "curve": doc["curve"], "n": args.n, "g": args.g, "spectators": table.spectators }))
}

fn cmd_compare(args: &SampleArgs, out: &mut OutputDir) -> Result<serde_json::Value, CliError> {
    let cfg = args.gas_config()?;
    let m = solve_auto(&cfg.potential, cfg.temperature)?;
    let ens = write_samples(&cfg, args, out)?;
    let (lo, hi) = default_window(&m);
    out.write("density.csv", &density_csv(&m, &grid(lo, hi, 401)?))?;
    out.write_json("measure.json", &m)?;

    let pooled = ens.pooled();
    let ks_density = ks_distance(&pooled, |x| m.cdf(x)).map_err(runtime)?;
    let unfolded = unfold_pooled(&ens.samples, |x| m.density(x), cfg.n);
    let rows: Vec<[f64; 1]> = unfolded.spacings.iter().map(|&r| [r]).collect();
    out.write("spacings.csv", &csv_rows(&["r"], rows.iter().map(|r| &r[..])))?;
    let ks_spacing = if unfolded.spacings.is_empty() {
        None
    } else {
        let table = Tabulated::new(0.0, 6.0, 601, gaudin_cdf);
        Some(ks_distance(&unfolded.spacings, |s| table.eval(s)).map_err(runtime)?)
    };
    let report = json!({
        "ks_density": ks_density,
        "ks_spacing_gaudin": ks_spacing,
        "pooled_eigenvalues": pooled.len(),
        "spacings": unfolded.spacings.len(),
        "excluded_pairs": unfolded.excluded,
        "cuts": m.cuts,
        "acceptance_rate": ens.acceptance_rate(),
    });
    out.write_json("compare.json", &report)?;
    println!("KS(eigenvalues, rho_eq) = {ks_density:.6}");
    if let Some(k) = ks_spacing {
        println!("KS(spacings, Gaudin) = {k:.6}");
    }
    Ok(json!({ "gas": cfg, "plan": args.plan(), "bins": args.bins, "range": args.range, "seed": cfg.seed }))
}
