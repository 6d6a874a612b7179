use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use alequot::bridge::{gauge_verify, SampleStrategy};
use alequot::cache::{build_entry, Cache};
use alequot::flat::dense_cross_check;
use alequot::moment::GoodVerdict;
use alequot::pipeline::{emit_metric_csv, run_pipeline, write_text, PipelineConfig, DENSE_CHECK_LIMIT};
use alequot::report::{all_pass, Check};
use alequot::solver::{horizontal_frame, metric_sample, residual, solve_moment, HyperkahlerDefects, Seed, ZetaSign};
use alequot::{is_good_zeta, Family, FlatModule, GroupLabel, SolveResult, Zeta};

#[derive(Parser)]
#[command(name = "ale", version, about = "Hyperkähler ALE quotients: groups, McKay data, solves and checks")]
struct Cli {
    /// Directory for cached groups, McKay data and bases.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// RNG seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Pipeline configuration (JSON). Tolerances and solver options are read from it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct GroupArgs {
    /// A, D, E6, E7, E8, or E together with --k 6/7/8.
    #[arg(long)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    k: u32,
}

/// A family name, where a bare `E` takes its rank from `--k`.
#[derive(Clone, Copy, Debug)]
enum FamilyArg {
    Fixed(Family),
    E,
}

impl std::str::FromStr for FamilyArg {
    type Err = alequot::Error;

    fn from_str(s: &str) -> alequot::Result<Self> {
        if s.trim().eq_ignore_ascii_case("e") {
            return Ok(FamilyArg::E);
        }
        s.parse().map(FamilyArg::Fixed)
    }
}

fn resolve(family: FamilyArg, k: u32) -> Result<GroupLabel> {
    let family = match family {
        FamilyArg::Fixed(f) => f,
        FamilyArg::E => format!("E{k}").parse()?,
    };
    Ok(GroupLabel::new(family, k)?)
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify a finite subgroup of SU(2).
    Group {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// McKay marks, adjacency, affine label and root count.
    Mckay {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Invariant basis dimension and verification summary.
    Basis {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Decide whether ζ avoids every root hyperplane.
    ZetaCheck {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        zeta: PathBuf,
    },
    /// Solve μ(p) = ζ.
    Solve {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        zeta: PathBuf,
        /// Solve μ = −ζ instead.
        #[arg(long)]
        reversed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Horizontal frame and projected hyperkähler structure at a solution.
    Metric {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Section-level identities on a sampled three-sphere.
    GaugeVerify {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value = "design")]
        strategy: SampleStrategy,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The full pipeline.
    Run {
        #[arg(long)]
        family: Option<FamilyArg>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        metric_csv: Option<PathBuf>,
    },
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    label: GroupLabel,
    seed: u64,
    sign: ZetaSign,
    zeta: Zeta,
    result: SolveResult,
    checks: Vec<Check>,
}

#[derive(Serialize)]
struct MetricOutput {
    label: GroupLabel,
    seed: u64,
    jacobian_rank: usize,
    defects: HyperkahlerDefects,
    checks: Vec<Check>,
}

struct Env {
    cfg: PipelineConfig,
    seed: u64,
}

impl Env {
    fn module(&self, label: GroupLabel) -> Result<FlatModule> {
        let tol = &self.cfg.tolerances;
        Ok(match &self.cfg.cache_dir {
            Some(dir) => Cache::new(dir).module(label, tol)?.0,
            None => {
                let e = build_entry(label, tol)?;
                FlatModule::from_parts(e.group, e.mckay, e.basis, tol.clone())
            }
        })
    }
}

fn label(g: GroupArgs) -> Result<GroupLabel> {
    resolve(g.family, g.k)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Prints to stdout; a closed pipe is not an error.
fn print_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => write_text(p, &text)?,
        None => print_stdout(&text)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::from_json_file(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.cache_dir.is_some() {
        cfg.cache_dir = cli.cache_dir.clone();
    }
    if !cfg.tolerances.all_positive() {
        bail!("all tolerances must be positive and finite");
    }
    let ctx = Env { seed: cfg.seed, cfg };

    match cli.command {
        Command::Group { g } => {
            let m = ctx.module(label(g)?)?;
            let r = alequot::group::verify_group_with(&m.group, &ctx.cfg.tolerances);
            emit(&r, None)?;
            Ok(r.passed())
        }
        Command::Mckay { g } => {
            let l = label(g)?;
            let m = ctx.module(l)?;
            let s = m.mckay.summary(&l.to_string());
            emit(&s, None)?;
            Ok(s.null_vector_ok && m.mckay.sum_of_squares() == m.order() && m.mckay.root_count_matches())
        }
        Command::Basis { g } => {
            let l = label(g)?;
            let m = ctx.module(l)?;
            let mut checks = vec![
                Check::equals("dimension", m.dim(), 4 * m.order()),
                Check::at_most("orthonormality", m.basis.orthonormality_defect(), ctx.cfg.tolerances.orthonormality),
            ];
            let dense = (m.order() <= DENSE_CHECK_LIMIT).then(|| dense_cross_check(&m.group, &m.mckay, &m.basis));
            if let Some(d) = &dense {
                checks.push(Check::equals("dense_projector_rank", d.projector_rank, m.dim()));
                checks.push(Check::flag("dense_cross_check", d.agrees(ctx.cfg.tolerances.membership)));
            }
            let ok = all_pass(&checks);
            emit(
                &serde_json::json!({
                    "label": l.to_string(),
                    "order": m.order(),
                    "dim": m.dim(),
                    "ambient_dim": m.basis.ambient_dim(),
                    "dense": dense,
                    "checks": checks,
                    "passed": ok,
                }),
                None,
            )?;
            Ok(ok)
        }
        Command::ZetaCheck { g, zeta } => {
            let l = label(g)?;
            let m = ctx.module(l)?;
            let z: Zeta = read_json(&zeta)?;
            z.check_shape(m.mckay.n.len())?;
            let v: GoodVerdict = is_good_zeta(&z, &m.mckay);
            emit(&serde_json::json!({ "label": l.to_string(), "zeta": z, "verdict": v }), None)?;
            Ok(v.good)
        }
        Command::Solve { g, zeta, reversed, out } => {
            let l = label(g)?;
            let m = ctx.module(l)?;
            let z: Zeta = read_json(&zeta)?;
            let mut opts = ctx.cfg.solver.clone();
            if reversed {
                opts.sign = ZetaSign::Reversed;
            }
            let result = solve_moment(&m, &z, Seed::Rng(ctx.seed), &opts)?;
            let independent = residual(&m, &z, opts.sign, &result.point);
            let checks = vec![
                Check::flag("converged", result.converged),
                Check::at_most("residual", independent, ctx.cfg.tolerances.converged),
            ];
            let file = SolutionFile {
                label: l,
                seed: ctx.seed,
                sign: opts.sign,
                zeta: z,
                result,
                checks,
            };
            emit(&file, out.as_deref())?;
            Ok(all_pass(&file.checks))
        }
        Command::Metric { solution, out } => {
            let sol: SolutionFile = read_json(&solution)?;
            let m = ctx.module(sol.label)?;
            m.require_member(&sol.result.point)?;
            let frame = horizontal_frame(&m, &sol.result.point)?;
            let sample = metric_sample(&m, &frame)?;
            emit_metric_csv(&sample, &out)?;
            let defects = sample.defects();
            let checks = vec![
                Check::equals("jacobian_rank", frame.jacobian_rank, 3 * (m.order() - 1)),
                Check::equals("frame_dim", frame.vectors.len(), 4),
                Check::at_most("hyperkahler", defects.max_defect(), ctx.cfg.tolerances.hyperkahler),
                Check::above("gram_min_eigenvalue", defects.gram_min_eigenvalue, 0.0),
            ];
            let ok = all_pass(&checks);
            emit(
                &MetricOutput {
                    label: sol.label,
                    seed: sol.seed,
                    jacobian_rank: frame.jacobian_rank,
                    defects,
                    checks,
                },
                None,
            )?;
            Ok(ok)
        }
        Command::GaugeVerify {
            g,
            n,
            strategy,
            pairs,
            out,
        } => {
            let m = ctx.module(label(g)?)?;
            let r = gauge_verify(&m, n, strategy, ctx.seed, pairs)?;
            emit(&serde_json::json!({ "label": label(g)?.to_string(), "seed": ctx.seed, "report": r }), out.as_deref())?;
            Ok(r.passed())
        }
        Command::Run {
            family,
            k,
            out,
            metric_csv,
        } => {
            let mut cfg = ctx.cfg;
            if let Some(k) = k {
                cfg.k = k;
            }
            if let Some(f) = family {
                cfg.family = resolve(f, cfg.k)?.family;
            }
            if out.is_some() {
                cfg.report = out;
            }
            if metric_csv.is_some() {
                cfg.metric_csv = metric_csv;
            }
            let report = run_pipeline(&cfg)?;
            if cfg.report.is_none() {
                print_stdout(&report.to_json())?;
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
