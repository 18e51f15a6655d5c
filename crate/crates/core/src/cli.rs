//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code: 0 on success, 2 for flag
//! or validation errors, 1 for numerical failures.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{exact_integrated_errors, exact_mse_curve, mise_terms};
use crate::boundary::{BoundaryKernelFamily, BoundaryVariant};
use crate::distributions::{BetaMixture, Distribution, Uniform};
use crate::error::Error;
use crate::estimator::{evaluate_grid, uniform_grid, EstimatorConfig, Sample};
use crate::kernel::BaseKernel;
use crate::simulation::{
    format_float, run_ise, summarize, write_records_csv, write_summary_csv, BandwidthRule,
    EstimatorKind, SimConfig,
};

/// K1 normalisers below this are reported as ill-conditioned.
const K1_CONDITIONING_WARNING: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "bkdf",
    version,
    about = "Boundary-corrected kernel distribution function estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an estimator on a grid for data read from a file
    Estimate(EstimateArgs),
    /// Boundary bias and variance coefficient functions over an α grid
    Coeffs(CoeffsArgs),
    /// Exact bias, variance and MSE across the left boundary strip
    MseCurve(MseCurveArgs),
    /// Exact MISE against its leading-term expansion over a bandwidth grid
    Mise(MiseArgs),
    /// MISE-optimal bandwidth for a known distribution
    Bandwidth(BandwidthArgs),
    /// Monte Carlo integrated squared errors
    Simulate(SimulateArgs),
    /// Check the moment conditions of the boundary kernels
    CheckKernels(CheckKernelsArgs),
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Mixture weight of B(1,2)
    #[arg(long, requires = "b", conflicts_with_all = ["d1_at_0", "d2_at_0", "uniform"])]
    pub w: Option<f64>,
    /// Shape parameter of B(2,b)
    #[arg(long, requires = "w")]
    pub b: Option<f64>,
    /// Target density at 0; solved together with --d2-at-0
    #[arg(long = "d1-at-0", requires = "d2_at_0", conflicts_with = "uniform")]
    pub d1_at_0: Option<f64>,
    /// Target second derivative of F at 0
    #[arg(long = "d2-at-0", requires = "d1_at_0")]
    pub d2_at_0: Option<f64>,
    /// Uniform distribution on [0, 1]
    #[arg(long, conflicts_with_all = ["w", "b", "d1_at_0", "d2_at_0"])]
    pub uniform: bool,
}

impl DistArgs {
    fn build(&self) -> Result<Distribution, Error> {
        if self.uniform {
            return Ok(Uniform::new(0.0, 1.0)?.into());
        }
        match (self.w, self.b, self.d1_at_0, self.d2_at_0) {
            (Some(w), Some(b), None, None) => Ok(BetaMixture::new(w, b)?.into()),
            (None, None, Some(d1), Some(d2)) => Ok(BetaMixture::solve_params(d1, d2)?.into()),
            _ => Err(Error::InvalidConfig(
                "specify a distribution: --w/--b, --d1-at-0/--d2-at-0 or --uniform".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Write CSV here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Newline-delimited observations
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long)]
    pub h: f64,
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: BaseKernel,
    /// k1, k2, k3 or classical
    #[arg(long, default_value = "k3")]
    pub family: EstimatorKind,
    /// Number of grid points spanning [a, b]
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: BaseKernel,
    #[arg(long, value_delimiter = ',', default_value = "k1,k2,k3")]
    pub families: Vec<BoundaryVariant>,
    /// Number of interior α points, α_i = i/(m+1)
    #[arg(long, default_value_t = 99)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct MseCurveArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Bandwidth, or "optimal" for h₀
    #[arg(long, default_value = "optimal")]
    pub h: BandwidthArg,
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: BaseKernel,
    #[arg(long, value_delimiter = ',', default_value = "k1,k2,k3")]
    pub families: Vec<BoundaryVariant>,
    #[arg(long, default_value_t = 99)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct MiseArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: BaseKernel,
    #[arg(long, value_delimiter = ',', default_value = "k3")]
    pub families: Vec<EstimatorKind>,
    /// Bandwidths to tabulate
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
    pub h: Vec<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct BandwidthArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: BaseKernel,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub reps: usize,
    #[arg(long, default_value_t = 20140101)]
    pub seed: u64,
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: BaseKernel,
    #[arg(long, value_delimiter = ',', default_value = "classical,k1,k2,k3")]
    pub families: Vec<EstimatorKind>,
    /// Bandwidth, or "optimal" for h₀
    #[arg(long, default_value = "optimal")]
    pub h: BandwidthArg,
    /// Integration region lo:hi; repeatable. Defaults to the two boundary
    /// strips and the whole support.
    #[arg(long = "region", value_parser = parse_region)]
    pub regions: Vec<(f64, f64)>,
    /// Worker threads for replicates (0 = all cores)
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Also write the per-family, per-region summary CSV here
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CheckKernelsArgs {
    /// Family to check; all three when omitted
    #[arg(long)]
    pub family: Option<BoundaryVariant>,
    /// Base kernel; all four when omitted
    #[arg(long)]
    pub kernel: Option<BaseKernel>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 99)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthArg(pub BandwidthRule);

impl std::str::FromStr for BandwidthArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("optimal") {
            return Ok(BandwidthArg(BandwidthRule::Optimal));
        }
        let h: f64 = s
            .parse()
            .map_err(|_| format!("expected a number or 'optimal', got '{s}'"))?;
        if !(h > 0.0) {
            return Err(format!("bandwidth must be positive, got {h}"));
        }
        Ok(BandwidthArg(BandwidthRule::Fixed(h)))
    }
}

fn parse_region(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad region start '{lo}'"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad region end '{hi}'"))?;
    if !(lo <= hi) {
        return Err(format!("region start {lo} exceeds end {hi}"));
    }
    Ok((lo, hi))
}

/// Interior α grid i/(m+1), i = 1..m.
pub fn alpha_grid(m: usize) -> Vec<f64> {
    (1..=m).map(|i| i as f64 / (m + 1) as f64).collect()
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<Vec<u8>, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (out, result) = match &cli.command {
        Command::Estimate(a) => (&a.out, estimate(a)),
        Command::Coeffs(a) => (&a.out, coeffs(a)),
        Command::MseCurve(a) => (&a.out, mse_curve(a)),
        Command::Mise(a) => (&a.out, mise(a)),
        Command::Bandwidth(a) => (&a.out, bandwidth(a)),
        Command::Simulate(a) => (&a.out, simulate(a)),
        Command::CheckKernels(a) => (&a.out, check_kernels(a)),
    };
    let (bytes, code) = match result {
        Ok(bytes) => (bytes, 0),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let written = match &out.out {
        Some(path) => fs::write(path, &bytes),
        None => io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: could not write output: {e}");
        return 1;
    }
    code
}

fn estimate(args: &EstimateArgs) -> CmdResult {
    let text = fs::read_to_string(&args.data)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.data.display())))?;
    let values = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Failure::Usage(format!("not a number: '{l}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sample = Sample::new(values)?;
    let cfg = EstimatorConfig::new(args.a, args.b, args.h, args.kernel, args.family.boundary())?;
    let grid = uniform_grid(args.a, args.b, args.grid);
    let values = evaluate_grid(&sample, &cfg, &grid)?;
    let mut out = Vec::new();
    writeln!(out, "x,Fhat")?;
    for (x, v) in grid.iter().zip(values) {
        writeln!(out, "{},{}", format_float(*x), format_float(v))?;
    }
    Ok(out)
}

fn warn_k1_conditioning(family: &BoundaryKernelFamily, alphas: &[f64]) {
    if family.variant != BoundaryVariant::K1 {
        return;
    }
    if let Some(alpha) = alphas.iter().copied().find(|&a| {
        family
            .section(a)
            .map(|s| s.normaliser() < K1_CONDITIONING_WARNING)
            .unwrap_or(false)
    }) {
        eprintln!(
            "warning: 2K̄(α)-1 < {K1_CONDITIONING_WARNING:e} for K1 at α = {alpha}; results lose precision"
        );
    }
}

fn coeffs(args: &CoeffsArgs) -> CmdResult {
    let alphas = alpha_grid(args.grid);
    let mut out = Vec::new();
    writeln!(out, "family,alpha,mu_l,mu_l_sq,nu_l,neg_nu_l")?;
    for &variant in &args.families {
        let family = BoundaryKernelFamily::new(variant, args.kernel);
        warn_k1_conditioning(&family, &alphas);
        for &alpha in &alphas {
            let s = family.section(alpha)?;
            let mu = s.mu_bias_coeff()?;
            let nu = s.nu_var_coeff()?;
            writeln!(
                out,
                "{variant},{},{},{},{},{}",
                format_float(alpha),
                format_float(mu),
                format_float(mu * mu),
                format_float(nu),
                format_float(-nu)
            )?;
        }
    }
    Ok(out)
}

fn resolve_h(
    rule: BandwidthRule,
    dist: &Distribution,
    base: BaseKernel,
    n: usize,
) -> Result<f64, Error> {
    match rule {
        BandwidthRule::Fixed(h) => Ok(h),
        BandwidthRule::Optimal => Ok(mise_terms(dist, base, n)?.h0),
    }
}

fn mse_curve(args: &MseCurveArgs) -> CmdResult {
    let dist = args.dist.build()?;
    let h = resolve_h(args.h.0, &dist, args.kernel, args.n)?;
    let (a, b) = dist.support();
    let alphas = alpha_grid(args.grid);
    let mut out = Vec::new();
    writeln!(out, "family,alpha,x,h,bias,variance,mse")?;
    for &variant in &args.families {
        warn_k1_conditioning(&BoundaryKernelFamily::new(variant, args.kernel), &alphas);
        let cfg = EstimatorConfig::new(a, b, h, args.kernel, Some(variant))?;
        let curve = exact_mse_curve(&dist, &cfg, args.n, &alphas)?;
        for (alpha, p) in alphas.iter().zip(curve) {
            writeln!(
                out,
                "{variant},{},{},{},{},{},{}",
                format_float(*alpha),
                format_float(p.x),
                format_float(h),
                format_float(p.bias),
                format_float(p.variance),
                format_float(p.mse)
            )?;
        }
    }
    Ok(out)
}

fn mise(args: &MiseArgs) -> CmdResult {
    let dist = args.dist.build()?;
    let terms = mise_terms(&dist, args.kernel, args.n)?;
    let (a, b) = dist.support();
    let nf = args.n as f64;
    let mut out = Vec::new();
    writeln!(
        out,
        "family,h,exact_variance,exact_bias_sq,exact_mise,leading,v0,v1_term,b4_term"
    )?;
    for &kind in &args.families {
        for &h in &args.h {
            let cfg = EstimatorConfig::new(a, b, h, args.kernel, kind.boundary())?;
            let e = exact_integrated_errors(&dist, &cfg, args.n, (a, b))?;
            writeln!(
                out,
                "{kind},{},{},{},{},{},{},{},{}",
                format_float(h),
                format_float(e.variance),
                format_float(e.bias_sq),
                format_float(e.mise()),
                format_float(terms.leading(h)),
                format_float(terms.v0),
                format_float(-h * terms.v1 / nf),
                format_float(terms.b4 * h.powi(4))
            )?;
        }
    }
    Ok(out)
}

fn bandwidth(args: &BandwidthArgs) -> CmdResult {
    let dist = args.dist.build()?;
    let t = mise_terms(&dist, args.kernel, args.n)?;
    let mut out = Vec::new();
    writeln!(out, "kernel,n,h0,delta_k,roughness,v0,v1,b4")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        args.kernel,
        args.n,
        format_float(t.h0),
        format_float(t.delta_k),
        format_float(t.roughness),
        format_float(t.v0),
        format_float(t.v1),
        format_float(t.b4)
    )?;
    Ok(out)
}

fn simulate(args: &SimulateArgs) -> CmdResult {
    let dist = args.dist.build()?;
    let mut cfg = SimConfig::new(dist, args.n, args.reps, args.seed, args.kernel);
    cfg.estimators = args.families.clone();
    cfg.bandwidth = args.h.0;
    cfg.regions = args.regions.clone();
    cfg.threads = args.threads;
    let res = run_ise(&cfg)?;
    if let Some(path) = &args.summary {
        let mut summary = Vec::new();
        write_summary_csv(&summarize(&res), &mut summary)?;
        fs::write(path, summary)?;
    }
    let mut out = Vec::new();
    write_records_csv(&res, &mut out)?;
    Ok(out)
}

fn check_kernels(args: &CheckKernelsArgs) -> CmdResult {
    let alphas = alpha_grid(args.grid);
    let variants: Vec<_> = args
        .family
        .map_or(BoundaryVariant::ALL.to_vec(), |v| vec![v]);
    let kernels: Vec<_> = args.kernel.map_or(BaseKernel::ALL.to_vec(), |k| vec![k]);
    let mut out = Vec::new();
    writeln!(out, "kernel,family,alpha,c1,c2,c1_residual,c2_residual")?;
    let mut c2_failures = 0;
    for &kernel in &kernels {
        for &variant in &variants {
            let family = BoundaryKernelFamily::new(variant, kernel);
            warn_k1_conditioning(&family, &alphas);
            let report = family.check_conditions(&alphas, args.tol)?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{kernel},{variant},{},{},{},{},{}",
                    format_float(r.alpha),
                    r.c1,
                    r.c2,
                    format_float(r.c1_residual),
                    format_float(r.c2_residual)
                )?;
            }
            c2_failures += report.rows.iter().filter(|r| !r.c2).count();
            eprintln!(
                "{kernel}/{variant}: C1 {} C2 {} (max C2 residual {:e})",
                if report.all_c1() { "holds" } else { "fails" },
                if report.all_c2() { "holds" } else { "fails" },
                report.max_c2_residual()
            );
        }
    }
    if c2_failures > 0 {
        return Err(Failure::Numerical(format!(
            "{c2_failures} grid points violate α(1-μ₀)+μ₁ = 0 at tol {}",
            args.tol
        )));
    }
    Ok(out)
}
