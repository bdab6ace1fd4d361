//! Batch experiment driver: searches point configurations across degree
//! sweeps, computes distortion and volume diagnostics, and writes plot-ready
//! CSV/JSON. All output is deterministic: identical runs produce
//! byte-identical files.

use clap::{Args, Parser, Subcommand};
use fekete::bergman::{bergman_measure, bm_growth_diagnostic, rho_field};
use fekete::design::{
    default_reference_measure, distortion, distortion_growth_report, node_average,
    optimal_measure_fixed_point, DistortionPair, OptimalOpts,
};
use fekete::gram::{l_functional, standard_reference, GramSystem};
use fekete::io::{
    fmt_f64, write_config_csv, write_json, write_measure_csv, write_rho_csv, OptimalSidecar,
    ReportRow, ReportSummary, SearchSidecar,
};
use fekete::measure::{harmonic_discrepancy, ks_distance, reference_equilibrium};
use fekete::model::default_oversample;
use fekete::search::{
    equilibrium_proxy, fekete_search, k_diameter, leja_result, recursively_extremal, FeketeOpts,
    FeketeResult,
};
use fekete::{Configuration, DiscreteMeasure, Error, Support, Weight, WeightedSet};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fekete",
    version,
    about = "Weighted extremal point sets, distortion functions, and optimal measures on model domains"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search point configurations across a degree sweep
    Points(RunArgs),
    /// Distortion-function fields and growth diagnostics for the reference measure
    Bergman(RunArgs),
    /// D-optimal measures by the multiplicative fixed-point iteration
    OptimalMeasure(RunArgs),
    /// Normalized volume functional and k-diameter of searched configurations
    Lfunc(RunArgs),
    /// Interpolation distortion of searched configurations in all pairings
    Distortion(RunArgs),
    /// Per-degree convergence report against the reference equilibrium
    Report(RunArgs),
    /// Run the internal identity suites
    Selftest {
        /// Deliberately perturb one identity to prove the suite can fail
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// interval | circle[:R] | disk[:R] | sphere
    #[arg(long)]
    domain: Option<String>,
    /// zero | quad:C | logshift:RE,IM
    #[arg(long)]
    weight: Option<String>,
    /// Comma-separated strictly increasing degrees, e.g. 5,10,20
    #[arg(long)]
    degrees: Option<String>,
    /// fekete | leja | greedy-extremal
    #[arg(long)]
    method: Option<String>,
    /// Candidate grid density multiplier (>= 2); default adapts to degree
    #[arg(long)]
    oversample: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON RunConfig file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Serializable run configuration; the `--config` file holds one of these.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    domain: String,
    weight: String,
    degrees: Vec<usize>,
    method: String,
    /// 0 selects the per-degree default.
    grid_oversample: usize,
    /// Metric names, informational: commands emit their full fixed metric
    /// sets; unknown names are rejected.
    metrics: Vec<String>,
    output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            domain: "interval".into(),
            weight: "zero".into(),
            degrees: vec![5, 10, 20],
            method: "fekete".into(),
            grid_oversample: 0,
            metrics: Vec::new(),
            output_dir: PathBuf::from("out"),
        }
    }
}

const KNOWN_METRICS: &[&str] = &[
    "ks",
    "harmonic-discrepancy",
    "k-diameter",
    "l-functional",
    "sup-rho",
    "lebesgue-constant",
    "distortion-inf-inf",
    "distortion-inf-2",
    "distortion-2-2",
    "distortion-inf-1",
];

enum CliFailure {
    Usage(String),
    Run(Error),
    Selftest,
}

impl CliFailure {
    fn report_and_code(&self) -> u8 {
        match self {
            CliFailure::Usage(msg) => {
                eprintln!("error: {msg}");
                1
            }
            CliFailure::Run(e) => {
                eprintln!("error: {e}");
                match e {
                    Error::Domain(_) | Error::Mismatch(_) => 1,
                    _ => 2,
                }
            }
            CliFailure::Selftest => 3,
        }
    }
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> CliFailure {
        CliFailure::Run(e)
    }
}

fn usage(msg: impl Into<String>) -> CliFailure {
    CliFailure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => ExitCode::from(f.report_and_code()),
    }
}

fn run(cli: Cli) -> Result<(), CliFailure> {
    match cli.cmd {
        Cmd::Points(a) => cmd_points(&load_config(&a)?),
        Cmd::Bergman(a) => cmd_bergman(&load_config(&a)?),
        Cmd::OptimalMeasure(a) => cmd_optimal_measure(&load_config(&a)?),
        Cmd::Lfunc(a) => cmd_lfunc(&load_config(&a)?),
        Cmd::Distortion(a) => cmd_distortion(&load_config(&a)?),
        Cmd::Report(a) => cmd_report(&load_config(&a)?),
        Cmd::Selftest { inject_fault } => cmd_selftest(inject_fault),
    }
}

/// Merge the config file (when given) with flag overrides, then validate.
fn load_config(a: &RunArgs) -> Result<RunConfig, CliFailure> {
    let mut cfg = match &a.config {
        Some(path) => {
            let body = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<RunConfig>(&body)
                .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(d) = &a.domain {
        cfg.domain = d.clone();
    }
    if let Some(w) = &a.weight {
        cfg.weight = w.clone();
    }
    if let Some(ds) = &a.degrees {
        cfg.degrees = ds
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("invalid degree '{s}'")))
            })
            .collect::<Result<_, _>>()?;
    }
    if let Some(m) = &a.method {
        cfg.method = m.clone();
    }
    if let Some(o) = a.oversample {
        cfg.grid_oversample = o;
    }
    if let Some(o) = &a.out {
        cfg.output_dir = o.clone();
    }
    validate_config(&cfg)?;
    Ok(cfg)
}

fn validate_config(cfg: &RunConfig) -> Result<(), CliFailure> {
    parse_domain(&cfg.domain)?;
    parse_weight(&cfg.weight)?;
    if cfg.degrees.is_empty() {
        return Err(usage("at least one degree is required"));
    }
    if cfg.degrees.iter().any(|&k| k == 0) {
        return Err(usage("degrees must be >= 1"));
    }
    if cfg.degrees.windows(2).any(|w| w[1] <= w[0]) {
        return Err(usage(format!(
            "degrees must be strictly increasing, got {:?}",
            cfg.degrees
        )));
    }
    if !matches!(cfg.method.as_str(), "fekete" | "leja" | "greedy-extremal") {
        return Err(usage(format!(
            "unknown method '{}' (expected fekete, leja, or greedy-extremal)",
            cfg.method
        )));
    }
    if cfg.grid_oversample == 1 {
        return Err(usage("oversample must be >= 2"));
    }
    for m in &cfg.metrics {
        if !KNOWN_METRICS.contains(&m.as_str()) {
            return Err(usage(format!(
                "unknown metric '{m}' (known: {})",
                KNOWN_METRICS.join(", ")
            )));
        }
    }
    Ok(())
}

fn parse_domain(s: &str) -> Result<Support, CliFailure> {
    let (name, param) = match s.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (s, None),
    };
    let radius = |p: Option<&str>| -> Result<f64, CliFailure> {
        match p {
            None => Ok(1.0),
            Some(p) => {
                let r: f64 = p
                    .parse()
                    .map_err(|_| usage(format!("invalid radius '{p}'")))?;
                if !(r.is_finite() && r > 0.0) {
                    return Err(usage(format!("radius must be positive, got {p}")));
                }
                Ok(r)
            }
        }
    };
    match name {
        "interval" => {
            if param.is_some() {
                return Err(usage("domain 'interval' takes no parameter"));
            }
            Ok(Support::Interval)
        }
        "circle" => Ok(Support::Circle(radius(param)?)),
        "disk" => Ok(Support::Disk(radius(param)?)),
        "sphere" => {
            if param.is_some() {
                return Err(usage("domain 'sphere' takes no parameter"));
            }
            Ok(Support::Sphere)
        }
        _ => Err(usage(format!(
            "unknown domain '{s}' (expected interval, circle[:R], disk[:R], or sphere)"
        ))),
    }
}

fn parse_weight(s: &str) -> Result<Weight, CliFailure> {
    let (name, param) = match s.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (s, None),
    };
    match name {
        "zero" => {
            if param.is_some() {
                return Err(usage("weight 'zero' takes no parameter"));
            }
            Ok(Weight::Zero)
        }
        "quad" => {
            let p = param.ok_or_else(|| usage("weight 'quad' needs a coefficient: quad:C"))?;
            let c: f64 = p
                .parse()
                .map_err(|_| usage(format!("invalid coefficient '{p}'")))?;
            if !c.is_finite() {
                return Err(usage("weight coefficient must be finite"));
            }
            Ok(Weight::Quadratic(c))
        }
        "logshift" => {
            let p =
                param.ok_or_else(|| usage("weight 'logshift' needs a shift: logshift:RE,IM"))?;
            let (re, im) = p
                .split_once(',')
                .ok_or_else(|| usage("weight 'logshift' needs RE,IM"))?;
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| usage(format!("invalid shift '{p}'")))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| usage(format!("invalid shift '{p}'")))?;
            Ok(Weight::LogAbsShift(Complex64::new(re, im)))
        }
        _ => Err(usage(format!(
            "unknown weight '{s}' (expected zero, quad:C, or logshift:RE,IM)"
        ))),
    }
}

/// Reject weights incompatible with the support before any numerics run.
fn check_weight_support(support: &Support, weight: &Weight) -> Result<(), CliFailure> {
    match (support, weight) {
        (Support::Sphere, Weight::LogAbsShift(_)) => {
            Err(usage("weight 'logshift' is not defined on the sphere"))
        }
        (Support::Interval, Weight::LogAbsShift(a)) => {
            if a.im == 0.0 && a.re.abs() <= 1.0 {
                Err(usage("logshift point must lie off the interval"))
            } else {
                Ok(())
            }
        }
        (Support::Circle(r), Weight::LogAbsShift(a)) | (Support::Disk(r), Weight::LogAbsShift(a)) => {
            let inside = match support {
                Support::Circle(_) => (a.norm() - r).abs() < 1e-9,
                _ => a.norm() <= r + 1e-9,
            };
            if inside {
                Err(usage("logshift point must lie off the support"))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

fn build_set(cfg: &RunConfig, k: usize) -> Result<WeightedSet, CliFailure> {
    let support = parse_domain(&cfg.domain)?;
    let weight = parse_weight(&cfg.weight)?;
    check_weight_support(&support, &weight)?;
    let oversample = if cfg.grid_oversample == 0 {
        default_oversample(k)
    } else {
        cfg.grid_oversample
    };
    Ok(WeightedSet::with_default_grid(support, weight, k, oversample)?)
}

fn search_by_method(cfg: &RunConfig, set: &WeightedSet, k: usize) -> Result<FeketeResult, Error> {
    match cfg.method.as_str() {
        "fekete" => fekete_search(set, k, &FeketeOpts::default()),
        "leja" => leja_result(set, k),
        "greedy-extremal" => {
            let mu = default_reference_measure(set, k)?;
            Ok(recursively_extremal(set, &mu, k)?.as_fekete_result())
        }
        other => Err(Error::Domain(format!("unknown method '{other}'"))),
    }
}

fn is_sphere(cfg: &RunConfig) -> bool {
    cfg.domain.starts_with("sphere")
}

/// Equidistribution metric of a discrete measure against the reference law
/// of the set: KS distance on 1-D supports, harmonic discrepancy (L = 4) on
/// the sphere.
fn discrepancy_metric(set: &WeightedSet, mu: &DiscreteMeasure) -> Result<f64, Error> {
    match set.support {
        Support::Sphere => harmonic_discrepancy(mu, 4),
        _ => {
            let law = reference_equilibrium(set)?;
            ks_distance(mu, &law)
        }
    }
}

fn metric_name(cfg: &RunConfig) -> &'static str {
    if is_sphere(cfg) {
        "harmonic_discrepancy_l4"
    } else {
        "ks"
    }
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<(), CliFailure> {
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| {
        usage(format!(
            "cannot create output directory {}: {e}",
            cfg.output_dir.display()
        ))
    })
}

fn out_path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

fn write_summary_csv(
    path: &Path,
    metric: &str,
    rows: &[(usize, usize, f64, f64, f64)],
) -> Result<(), Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "n", "log_abs_det_weighted", "k_diameter", metric])?;
    for (k, n, ld, kd, m) in rows {
        w.write_record([
            k.to_string(),
            n.to_string(),
            fmt_f64(*ld),
            fmt_f64(*kd),
            fmt_f64(*m),
        ])?;
    }
    w.flush().map_err(std::io::Error::from)?;
    Ok(())
}

fn cmd_points(cfg: &RunConfig) -> Result<(), CliFailure> {
    ensure_out_dir(cfg)?;
    let mut summary = Vec::new();
    for &k in &cfg.degrees {
        let set = build_set(cfg, k)?;
        let result = search_by_method(cfg, &set, k)?;
        let kd = k_diameter(&result)?;
        let delta = node_average(&result.config)?;
        let disc = discrepancy_metric(&set, &delta)?;
        write_config_csv(&out_path(cfg, &format!("points_k{k}.csv")), &result.config)?;
        write_json(
            &out_path(cfg, &format!("points_k{k}.json")),
            &SearchSidecar {
                method: result.method,
                k,
                n: result.n,
                log_abs_det_weighted: result.log_abs_det_weighted,
                k_diameter: Some(kd),
                sweeps: result.iterations,
                converged: result.converged,
            },
        )?;
        println!(
            "k={k} n={} log|det|_w={:.6} k_diameter={:.6} {}={:.6}",
            result.n,
            result.log_abs_det_weighted,
            kd,
            metric_name(cfg),
            disc
        );
        summary.push((k, result.n, result.log_abs_det_weighted, kd, disc));
    }
    write_summary_csv(&out_path(cfg, "summary.csv"), metric_name(cfg), &summary)?;
    Ok(())
}

fn cmd_bergman(cfg: &RunConfig) -> Result<(), CliFailure> {
    ensure_out_dir(cfg)?;
    for &k in &cfg.degrees {
        let set = build_set(cfg, k)?;
        let mu = default_reference_measure(&set, k)?;
        let gs = GramSystem::new(&set, &mu, k)?;
        let field = rho_field(&gs, &set.grid)?;
        write_rho_csv(&out_path(cfg, &format!("rho_k{k}.csv")), &field)?;
        println!("k={k} n={} sup_rho={:.6}", gs.n, field.sup_rho);
    }
    if cfg.degrees.len() >= 3 {
        let set = build_set(cfg, *cfg.degrees.last().unwrap())?;
        let mu = default_reference_measure(&set, *cfg.degrees.last().unwrap())?;
        let diag = bm_growth_diagnostic(&set, &mu, &cfg.degrees)?;
        write_json(&out_path(cfg, "bm_diagnostic.json"), &diag)?;
        println!(
            "growth: poly_exponent={:.4} exp_rate={:.2e} bm_flag={}",
            diag.poly_exponent, diag.exp_rate, diag.bm_flag
        );
    }
    Ok(())
}

fn cmd_optimal_measure(cfg: &RunConfig) -> Result<(), CliFailure> {
    ensure_out_dir(cfg)?;
    for &k in &cfg.degrees {
        let set = build_set(cfg, k)?;
        let init = DiscreteMeasure::uniform(set.grid.clone())?;
        let res = optimal_measure_fixed_point(&set, &init, k, &OptimalOpts::default())?;
        if !res.converged {
            return Err(CliFailure::Run(Error::Convergence {
                what: format!("optimal measure at degree {k}"),
                residual: res.sup_rho - res.n as f64,
            }));
        }
        write_measure_csv(&out_path(cfg, &format!("measure_k{k}.csv")), &res.measure)?;
        write_json(
            &out_path(cfg, &format!("measure_k{k}.json")),
            &OptimalSidecar {
                k,
                n: res.n,
                sup_rho: res.sup_rho,
                iterations: res.iterations,
                converged: res.converged,
            },
        )?;
        println!(
            "k={k} n={} sup_rho={:.6} iterations={}",
            res.n, res.sup_rho, res.iterations
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct LfuncRow {
    k: usize,
    n: usize,
    l_functional: f64,
    k_diameter: f64,
    equilibrium_proxy: f64,
}

fn cmd_lfunc(cfg: &RunConfig) -> Result<(), CliFailure> {
    ensure_out_dir(cfg)?;
    let mut rows = Vec::new();
    for &k in &cfg.degrees {
        let set = build_set(cfg, k)?;
        let result = search_by_method(cfg, &set, k)?;
        let delta = node_average(&result.config)?;
        let gs = GramSystem::new(&set, &delta, k)?;
        let reference = standard_reference(set.model(), k)?;
        let lf = l_functional(&gs, &reference)?;
        let kd = k_diameter(&result)?;
        let proxy = equilibrium_proxy(kd, k, result.n);
        println!(
            "k={k} n={} l_functional={:.8} k_diameter={:.8} proxy={:.8}",
            result.n, lf, kd, proxy
        );
        rows.push(LfuncRow {
            k,
            n: result.n,
            l_functional: lf,
            k_diameter: kd,
            equilibrium_proxy: proxy,
        });
    }
    write_json(&out_path(cfg, "lfunc.json"), &rows)?;
    Ok(())
}

#[derive(Serialize)]
struct DistortionRow {
    k: usize,
    n: usize,
    inf_inf: f64,
    inf_2: f64,
    two_two: f64,
    inf_1_bound: f64,
}

fn cmd_distortion(cfg: &RunConfig) -> Result<(), CliFailure> {
    ensure_out_dir(cfg)?;
    let mut rows = Vec::new();
    let mut configs: Vec<Configuration> = Vec::new();
    let mut certified = true;
    for &k in &cfg.degrees {
        let set = build_set(cfg, k)?;
        let result = search_by_method(cfg, &set, k)?;
        let cert = cfg.method == "fekete" && result.converged;
        certified = certified && cert;
        let vals: Vec<f64> = [
            DistortionPair::InfInf,
            DistortionPair::Inf2,
            DistortionPair::TwoTwo,
            DistortionPair::Inf1Bound,
        ]
        .iter()
        .map(|pair| distortion(&set, k, None, &result.config, *pair, cert))
        .collect::<Result<_, _>>()?;
        println!(
            "k={k} n={} inf_inf={:.6} inf_2={:.6} two_two={:.6} inf_1_bound={:.6}",
            result.n, vals[0], vals[1], vals[2], vals[3]
        );
        rows.push(DistortionRow {
            k,
            n: result.n,
            inf_inf: vals[0],
            inf_2: vals[1],
            two_two: vals[2],
            inf_1_bound: vals[3],
        });
        configs.push(result.config);
    }
    write_json(&out_path(cfg, "distortion.json"), &rows)?;
    if cfg.degrees.len() >= 3 {
        let set = build_set(cfg, *cfg.degrees.last().unwrap())?;
        let mut reports = Vec::new();
        for pair in [
            DistortionPair::InfInf,
            DistortionPair::Inf2,
            DistortionPair::TwoTwo,
            DistortionPair::Inf1Bound,
        ] {
            reports.push(distortion_growth_report(
                &set,
                &cfg.degrees,
                &configs,
                pair,
                certified,
            )?);
        }
        write_json(&out_path(cfg, "distortion_growth.json"), &reports)?;
    }
    Ok(())
}

fn cmd_report(cfg: &RunConfig) -> Result<(), CliFailure> {
    ensure_out_dir(cfg)?;
    let mut rows = Vec::new();
    for &k in &cfg.degrees {
        let set = build_set(cfg, k)?;
        let result = search_by_method(cfg, &set, k)?;
        let delta = node_average(&result.config)?;
        let gs = GramSystem::new(&set, &delta, k)?;
        let reference = standard_reference(set.model(), k)?;
        let lf = l_functional(&gs, &reference)?;
        let kd = k_diameter(&result)?;
        let proxy = equilibrium_proxy(kd, k, result.n);
        let field = rho_field(&gs, &set.grid)?;
        let beta = bergman_measure(&gs)?;
        let ks_config = discrepancy_metric(&set, &delta)?;
        let ks_bergman = discrepancy_metric(&set, &beta)?;
        println!(
            "k={k} n={} l_functional={:.6} k_diameter={:.6} proxy={:.6} sup_rho={:.4} {}: config={:.4} bergman={:.4}",
            result.n,
            lf,
            kd,
            proxy,
            field.sup_rho,
            metric_name(cfg),
            ks_config,
            ks_bergman
        );
        rows.push(ReportRow {
            k,
            n: result.n,
            l_functional: lf,
            k_diameter: kd,
            equilibrium_proxy: proxy,
            sup_rho: field.sup_rho,
            ks_config,
            ks_bergman,
        });
    }
    let max_functional_gap = rows
        .iter()
        .map(|r| (r.l_functional - r.equilibrium_proxy).abs())
        .fold(0.0, f64::max);
    println!("max |l_functional - equilibrium_proxy| = {max_functional_gap:.6}");
    write_json(
        &out_path(cfg, "report.json"),
        &ReportSummary {
            metric: metric_name(cfg).into(),
            rows,
            max_functional_gap,
        },
    )?;
    Ok(())
}

fn cmd_selftest(inject_fault: bool) -> Result<(), CliFailure> {
    let outcomes = fekete::selfcheck::run_selftest(inject_fault);
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut failed = 0usize;
    for o in &outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{:width$}  {status}  {}", o.name, o.detail, width = width);
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} checks, {} failed", outcomes.len(), failed);
    if failed > 0 {
        return Err(CliFailure::Selftest);
    }
    Ok(())
}
