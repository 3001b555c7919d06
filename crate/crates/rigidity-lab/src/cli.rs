//! Command-line surface. One thin binary with four subcommands: `sample`
//! writes spectra batches, `exact` prints closed-form analytics for a
//! region, `experiment` runs the Monte Carlo studies beside their exact
//! columns, and `report` renders CSV/batch inputs into SVG diagnostics.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical or I/O failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analytics::{
    bernoulli_spectrum, expected_count_exact, region_mass, CountDistribution, KernelContext,
    BoundConstants,
};
use crate::error::{Error, Result};
use crate::experiments::{
    calibrate_constants, run_counting_experiment, run_dbl_experiment, run_rigidity_experiment,
    run_variance_experiment, ExperimentConfig, SampleBatch,
};
use crate::geometry::{valid_index_bound, CountingRegion};
use crate::params::EnsembleParams;
use crate::report::csv::{
    counting_csv, counting_summary_csv, dbl_csv, rigidity_csv, variance_csv, CsvTable,
};
use crate::report::svg::{scatter_svg, tail_curves_svg, TailSeries};
use crate::report::{read_batch_file, write_batch_file};

#[derive(Parser)]
#[command(
    name = "rigidity-lab",
    version,
    about = "Eigenvalue statistics of truncated Haar unitaries: sampling, exact counting laws, bound checks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample eigenvalue spectra into a batch file.
    Sample(SampleArgs),
    /// Exact analytics (mass, mean, both variances, optional pmf) for a region.
    Exact(ExactArgs),
    /// Monte Carlo experiments with exact/bound columns.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
    /// Render batch files and experiment CSVs into SVG figures.
    Report(ReportArgs),
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    rescaled: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Region spec: `disc:I`, `annulus:L`, `I,THETA`, or `I` (full-angle sector).
    #[arg(long)]
    region: String,
    /// Also emit the exact counting pmf.
    #[arg(long)]
    pmf: bool,
    /// Directory for CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Counting concentration on regions.
    Counting(CountingArgs),
    /// Individual-eigenvalue rigidity.
    Rigidity(RigidityArgs),
    /// Per-eigenvalue variance scaling.
    Variance(VarianceArgs),
    /// Bounded-Lipschitz proxy scaling across m.
    Dbl(DblArgs),
}

#[derive(Args)]
struct McCommon {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Trial count; required unless --batch provides the samples.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Reuse samples from a batch file written by `sample`.
    #[arg(long)]
    batch: Option<PathBuf>,
    /// Output directory for CSV tables.
    #[arg(long)]
    out: PathBuf,
    /// Calibrate the fit constants on this run's grids before evaluating bounds.
    #[arg(long)]
    calibrate: bool,
    /// Fit constant for the counting bound (ignored with --calibrate).
    #[arg(long, default_value_t = 1.0)]
    c_bernstein: f64,
    /// Fit constant for the large-s rigidity branch (ignored with --calibrate).
    #[arg(long, default_value_t = 1.0)]
    c_individual: f64,
    /// Fit constant for the variance bound (ignored with --calibrate).
    #[arg(long, default_value_t = 1.0)]
    c_variance: f64,
}

#[derive(Args)]
struct CountingArgs {
    #[command(flatten)]
    common: McCommon,
    /// Region spec; repeatable.
    #[arg(long, required = true)]
    region: Vec<String>,
    /// Comma-separated t grid; default 0.5,1,...,10.
    #[arg(long)]
    t_grid: Option<String>,
}

#[derive(Args)]
struct RigidityArgs {
    #[command(flatten)]
    common: McCommon,
    /// Comma-separated eigenvalue indices (1-based, spiral order).
    #[arg(long)]
    p: String,
    /// Comma-separated s grid; default 0.5,1,...,14.
    #[arg(long)]
    s_grid: Option<String>,
}

#[derive(Args)]
struct VarianceArgs {
    #[command(flatten)]
    common: McCommon,
    #[arg(long)]
    p: String,
}

#[derive(Args)]
struct DblArgs {
    /// Comma-separated truncation sizes.
    #[arg(long, default_value = "16,32,64")]
    m_list: String,
    /// Aspect ratio fixing n = m / alpha.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory of batch files and experiment CSVs.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Emit SVG figures (a summary manifest is always written).
    #[arg(long)]
    svg: bool,
}

/// Parses `disc:I`, `annulus:L`, `I,THETA`, `I`.
fn parse_region(spec: &str) -> Result<CountingRegion> {
    let bad = |detail: String| Error::Format { what: "region spec", detail };
    let region = if let Some(rest) = spec.strip_prefix("disc:") {
        CountingRegion::Disc { i: rest.parse().map_err(|e| bad(format!("{e}")))? }
    } else if let Some(rest) = spec.strip_prefix("annulus:") {
        CountingRegion::Annulus { l: rest.parse().map_err(|e| bad(format!("{e}")))? }
    } else if let Some((i, theta)) = spec.split_once(',') {
        CountingRegion::Sector {
            i: i.parse().map_err(|e| bad(format!("{e}")))?,
            theta: theta.parse().map_err(|e| bad(format!("{e}")))?,
        }
    } else {
        CountingRegion::Sector {
            i: spec.parse().map_err(|e| bad(format!("index: {e}")))?,
            theta: std::f64::consts::TAU,
        }
    };
    region.validate()?;
    Ok(region)
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|e| Error::Format {
                what: "numeric list",
                detail: format!("{t:?}: {e}"),
            })
        })
        .collect()
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|e| Error::Format {
                what: "index list",
                detail: format!("{t:?}: {e}"),
            })
        })
        .collect()
}

fn default_grid(step: f64, upto: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut x = step;
    while x <= upto + 1e-9 {
        v.push(x);
        x += step;
    }
    v
}

fn write_table(dir: &Path, name: &str, table: &CsvTable) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), table.emit())?;
    Ok(())
}

/// Resolves the sample source: an explicit batch file (validated against the
/// requested dimensions) or fresh sampling.
fn resolve_batch(common: &McCommon, params: EnsembleParams) -> Result<SampleBatch> {
    if let Some(path) = &common.batch {
        let batch = read_batch_file(path)?;
        if batch.params.n() != params.n() || batch.params.m() != params.m() {
            return Err(Error::Dimension {
                expected: format!("batch for n={}, m={}", params.n(), params.m()),
                got: format!("n={}, m={}", batch.params.n(), batch.params.m()),
            });
        }
        return Ok(batch);
    }
    match (common.trials, common.seed) {
        (Some(trials), Some(seed)) => SampleBatch::generate(params, seed, trials),
        _ => Err(Error::InvalidParams(
            "either --batch or both --trials and --seed are required".into(),
        )),
    }
}

fn build_config(
    common: &McCommon,
    params: EnsembleParams,
    batch: &SampleBatch,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        params,
        batch.samples.len().max(1),
        common.seed.unwrap_or(batch.seed),
    );
    cfg.consts = BoundConstants::with_fits(
        params.alpha(),
        common.c_bernstein,
        common.c_individual,
        common.c_variance,
    );
    cfg
}

fn cmd_sample(args: &SampleArgs) -> Result<()> {
    let params = EnsembleParams::new(args.n, args.m)?.with_rescaled(args.rescaled);
    let batch = SampleBatch::generate(params, args.seed, args.trials)?;
    write_batch_file(&args.out, &batch)?;
    eprintln!(
        "wrote {} trials ({} failed) to {}",
        batch.samples.len(),
        batch.failed_trials,
        args.out.display()
    );
    Ok(())
}

fn cmd_exact(args: &ExactArgs) -> Result<()> {
    let params = EnsembleParams::new(args.n, args.m)?;
    let region = parse_region(&args.region)?;
    let ctx = KernelContext::new(params);

    let mass = region_mass(&params, &region).map_err(|e| match e {
        Error::RegionOutOfRange(msg) => Error::RegionOutOfRange(format!(
            "{msg}; admissible index bound here is {}",
            valid_index_bound(&params)
                .map(|b| format!("{b:.4}"))
                .unwrap_or_else(|_| "not defined (m too small)".into())
        )),
        other => other,
    })?;
    let spectrum = bernoulli_spectrum(&ctx, &region)?;
    let mean = expected_count_exact(&ctx, &region)?;
    let var_spectral = spectrum.variance();
    let var_second = {
        // sector regions get the four-part decomposition, radial regions the
        // diagonal binomial-tail route
        use crate::analytics::variance_exact_decomposed;
        match region {
            CountingRegion::Sector { .. } => variance_exact_decomposed(&ctx, &region)?.total(),
            _ => var_spectral_second_route(&ctx, &region)?,
        }
    };

    let mut table = CsvTable::new(&[
        "region",
        "mu_alpha_mass",
        "exact_mean",
        "exact_var_spectral",
        "exact_var_decomposed",
    ]);
    table.push_row(vec![
        region.label(),
        format!("{mass}"),
        format!("{mean}"),
        format!("{var_spectral}"),
        format!("{var_second}"),
    ]);

    let pmf_table = if args.pmf {
        let dist = CountDistribution::from_spectrum(&spectrum);
        let mut t = CsvTable::new(&["k", "prob"]);
        for (k, &p) in dist.pmf.iter().enumerate() {
            t.push_row(vec![k.to_string(), format!("{p}")]);
        }
        Some(t)
    } else {
        None
    };

    match &args.out {
        Some(dir) => {
            write_table(dir, "exact.csv", &table)?;
            if let Some(t) = &pmf_table {
                write_table(dir, "pmf.csv", t)?;
            }
        }
        None => {
            print!("{}", table.emit());
            if let Some(t) = &pmf_table {
                print!("{}", t.emit());
            }
        }
    }
    Ok(())
}

fn var_spectral_second_route(ctx: &KernelContext, region: &CountingRegion) -> Result<f64> {
    use crate::analytics::special::binomial_tail_gt;
    use crate::geometry::radius;
    let params = ctx.params();
    let nm = params.n() - params.m();
    let (a, b) = match *region {
        CountingRegion::Disc { i } => (0.0, radius(i, params)),
        CountingRegion::Annulus { l } => (radius(l - 1, params), radius(l, params)),
        CountingRegion::CustomDisc { r } => (0.0, r),
        CountingRegion::Sector { .. } => unreachable!("sectors handled by the decomposition"),
    };
    let mut sum = 0.0;
    for j in 0..params.m() {
        let q = binomial_tail_gt(nm + j, j, b * b)? - binomial_tail_gt(nm + j, j, a * a)?;
        sum += q * (1.0 - q);
    }
    Ok(sum)
}

fn cmd_counting(args: &CountingArgs) -> Result<()> {
    let params = EnsembleParams::new(args.common.n, args.common.m)?;
    let batch = resolve_batch(&args.common, params)?;
    let mut cfg = build_config(&args.common, params, &batch);
    cfg.regions = args.region.iter().map(|s| parse_region(s)).collect::<Result<_>>()?;
    cfg.t_grid = match &args.t_grid {
        Some(g) => parse_f64_list(g)?,
        None => default_grid(0.5, 10.0),
    };
    if args.common.calibrate {
        cfg.consts = calibrate_constants(&cfg)?;
        eprintln!(
            "calibrated: c_bernstein={} c_individual={} c_variance={}",
            cfg.consts.c_alpha_bernstein, cfg.consts.c_alpha_individual, cfg.consts.c_alpha_variance
        );
    }
    let report = run_counting_experiment(&cfg, &batch)?;
    write_table(&args.common.out, "counting.csv", &counting_csv(&report))?;
    write_table(&args.common.out, "counting_summary.csv", &counting_summary_csv(&report))?;
    eprintln!(
        "counting: {} regions, {} trials ({} failed)",
        report.rows.len(),
        report.trials,
        report.failed_trials
    );
    Ok(())
}

fn cmd_rigidity(args: &RigidityArgs) -> Result<()> {
    let params = EnsembleParams::new(args.common.n, args.common.m)?;
    let batch = resolve_batch(&args.common, params)?;
    let mut cfg = build_config(&args.common, params, &batch);
    cfg.p_targets = parse_usize_list(&args.p)?;
    cfg.s_grid = match &args.s_grid {
        Some(g) => parse_f64_list(g)?,
        None => default_grid(0.5, 14.0),
    };
    if args.common.calibrate {
        let mut cal_cfg = cfg.clone();
        cal_cfg.trials = batch.samples.len();
        cfg.consts = calibrate_constants(&cal_cfg)?;
        eprintln!(
            "calibrated: c_bernstein={} c_individual={}",
            cfg.consts.c_alpha_bernstein, cfg.consts.c_alpha_individual
        );
    }
    let report = run_rigidity_experiment(&cfg, &batch)?;
    write_table(&args.common.out, "rigidity.csv", &rigidity_csv(&report))?;
    for row in &report.rows {
        eprintln!(
            "rigidity p={} (l={}{}): median scaled dev {:.3}, cutoff {:.3}",
            row.p,
            row.l,
            if row.informational { ", informational" } else { "" },
            row.median_scaled_dev,
            row.cutoff
        );
    }
    Ok(())
}

fn cmd_variance(args: &VarianceArgs) -> Result<()> {
    let params = EnsembleParams::new(args.common.n, args.common.m)?;
    let batch = resolve_batch(&args.common, params)?;
    let mut cfg = build_config(&args.common, params, &batch);
    cfg.p_targets = parse_usize_list(&args.p)?;
    let report = run_variance_experiment(&cfg, &batch)?;
    write_table(&args.common.out, "variance.csv", &variance_csv(&report))?;
    eprintln!("variance: {} targets, {} trials", report.rows.len(), report.trials);
    Ok(())
}

fn cmd_dbl(args: &DblArgs) -> Result<()> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Error::InvalidParams(format!("alpha = {} outside (0,1)", args.alpha)));
    }
    let ms = parse_usize_list(&args.m_list)?;
    let mut sizes = Vec::new();
    for m in ms {
        let n = (m as f64 / args.alpha).round() as usize;
        sizes.push((n, m));
    }
    // trials/seed ride on a placeholder params; the dbl runner builds its own
    let params = EnsembleParams::new(sizes[0].0, sizes[0].1)?;
    let mut cfg = ExperimentConfig::new(params, args.trials, args.seed);
    cfg.dbl_sizes = sizes;
    let report = run_dbl_experiment(&cfg)?;
    write_table(&args.out, "dbl.csv", &dbl_csv(&report))?;
    for row in &report.rows {
        eprintln!(
            "dbl m={}: median proxy {:.4}, q90 {:.4}",
            row.m, row.median_proxy, row.q90_proxy
        );
    }
    Ok(())
}

fn sanitize(label: &str) -> String {
    label.replace([':', ','], "_")
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let mut manifest: Vec<String> = Vec::new();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&args.input)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();

    if entries.is_empty() {
        eprintln!("warning: input directory {} is empty", args.input.display());
    }

    for path in entries {
        let name = path.file_name().unwrap_or_default().to_string_lossy().to_string();
        if name.ends_with(".batch") {
            let batch = read_batch_file(&path)?;
            manifest.push(format!(
                "batch {name}: n={} m={} trials={}",
                batch.params.n(),
                batch.params.m(),
                batch.samples.len()
            ));
            if args.svg && !batch.samples.is_empty() {
                let svg = scatter_svg(&batch.samples[0]);
                let out = args.out.join(format!("{}_scatter.svg", name.trim_end_matches(".batch")));
                std::fs::write(&out, svg)?;
                manifest.push(format!("  -> {}", out.display()));
            }
        } else if name.starts_with("counting") && name.ends_with(".csv") && !name.contains("summary")
        {
            let table = CsvTable::parse(&std::fs::read_to_string(&path)?)?;
            manifest.push(format!("counting table {name}: {} rows", table.rows.len()));
            if args.svg {
                emit_tail_figures(&table, "region", "t", &name, &args.out, &mut manifest)?;
            }
        } else if name.starts_with("rigidity") && name.ends_with(".csv") {
            let table = CsvTable::parse(&std::fs::read_to_string(&path)?)?;
            manifest.push(format!("rigidity table {name}: {} rows", table.rows.len()));
            if args.svg {
                emit_tail_figures(&table, "p", "s", &name, &args.out, &mut manifest)?;
            }
        }
    }

    std::fs::write(args.out.join("summary.txt"), manifest.join("\n") + "\n")?;
    Ok(())
}

/// One tail figure per distinct group value: empirical curve beside the
/// bound curve on a log scale.
fn emit_tail_figures(
    table: &CsvTable,
    group_col: &str,
    x_col: &str,
    stem: &str,
    out_dir: &Path,
    manifest: &mut Vec<String>,
) -> Result<()> {
    let group_idx = table.column(group_col)?;
    let xs = table.f64_column(x_col)?;
    let emp_col = if table.column("emp_tail").is_ok() { "emp_tail" } else { "emp_freq" };
    let emp = table.f64_column(emp_col)?;
    let bound_col = if table.column("bound").is_ok() { "bound" } else { "bound_small_s" };
    let bound = table.f64_column(bound_col)?;

    let mut groups: Vec<String> = table.rows.iter().map(|r| r[group_idx].clone()).collect();
    groups.dedup();
    groups.sort();
    groups.dedup();

    // the zero-frequency floor needs the trial count, which the tables do
    // not carry; invert se = sqrt(p(1-p)/T) on the first interior row
    let trials = emp
        .iter()
        .zip(table.f64_column("emp_se")?.iter())
        .find(|(&p, &se)| p > 0.0 && p < 1.0 && se > 0.0)
        .map(|(&p, &se)| (p * (1.0 - p) / (se * se)).round() as usize)
        .unwrap_or(1000);

    for g in groups {
        let pick = |vals: &[f64]| -> Vec<(f64, f64)> {
            table
                .rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[group_idx] == g)
                .map(|(k, _)| (xs[k], vals[k]))
                .filter(|(_, y)| y.is_finite())
                .collect()
        };
        let series = [
            TailSeries { label: emp_col.into(), points: pick(&emp), color: "#225588" },
            TailSeries { label: bound_col.into(), points: pick(&bound), color: "#cc3333" },
        ];
        let svg = tail_curves_svg(&format!("{stem} {group_col}={g}"), x_col, &series, trials);
        let out = out_dir.join(format!(
            "{}_{}_tails.svg",
            stem.trim_end_matches(".csv"),
            sanitize(&g)
        ));
        std::fs::write(&out, svg)?;
        manifest.push(format!("  -> {}", out.display()));
    }
    Ok(())
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_)
        | Error::Dimension { .. }
        | Error::RegionOutOfRange(_)
        | Error::CoordinateConvention { .. }
        | Error::IndexOutOfRange { .. }
        | Error::Format { .. } => 2,
        _ => 3,
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Experiment(ExperimentCmd::Counting(args)) => cmd_counting(args),
        Command::Experiment(ExperimentCmd::Rigidity(args)) => cmd_rigidity(args),
        Command::Experiment(ExperimentCmd::Variance(args)) => cmd_variance(args),
        Command::Experiment(ExperimentCmd::Dbl(args)) => cmd_dbl(args),
        Command::Report(args) => cmd_report(args),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_exit_code() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_specs() {
        assert_eq!(parse_region("disc:3").unwrap(), CountingRegion::Disc { i: 3 });
        assert_eq!(parse_region("annulus:4").unwrap(), CountingRegion::Annulus { l: 4 });
        match parse_region("3,1.5").unwrap() {
            CountingRegion::Sector { i, theta } => {
                assert_eq!(i, 3);
                assert!((theta - 1.5).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_region("2").unwrap() {
            CountingRegion::Sector { i, theta } => {
                assert_eq!(i, 2);
                assert_eq!(theta, std::f64::consts::TAU);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_region("disc:x").is_err());
        assert!(parse_region("disc:0").is_err());
        assert!(parse_region("3,9.42").is_err()); // theta beyond 2π
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_f64_list("1,2.5, 3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert!(parse_f64_list("1,x").is_err());
        assert_eq!(parse_usize_list("5,10").unwrap(), vec![5, 10]);
        let grid = default_grid(0.5, 2.0);
        assert_eq!(grid, vec![0.5, 1.0, 1.5, 2.0]);
    }
}
