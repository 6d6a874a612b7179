//! End-to-end runs: configuration, staged execution and report artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bridge::{gauge_verify, GaugeReport, SampleStrategy};
use crate::cache::{build_entry, Cache};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::flat::{dense_cross_check, DenseCheck, FlatModule};
use crate::group::{verify_group_with, Family, GroupLabel, GroupReport};
use crate::mckay::McKaySummary;
use crate::moment::{is_good_zeta_with, GoodVerdict, Zeta};
use crate::report::{all_pass, Check};
use crate::solver::{
    discrete_stabilizer_check, horizontal_frame, metric_sample, residual, solve_moment, stabilizer_check,
    DiscreteCheck, HyperkahlerDefects, MetricSample, Seed, SolveOptions,
};

/// Largest group order for which the dense projector cross-check runs.
pub const DENSE_CHECK_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub family: Family,
    pub k: u32,
    /// Drawn from the `zeta` stream when absent.
    pub zeta: Option<Zeta>,
    pub solver: SolveOptions,
    pub tolerances: Tolerances,
    /// Independent solves of the same level set.
    pub solves: usize,
    pub sample_size: usize,
    pub strategy: SampleStrategy,
    pub gauge_pairs: usize,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub metric_csv: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            family: Family::A,
            k: 1,
            zeta: None,
            solver: SolveOptions::default(),
            tolerances: Tolerances::default(),
            solves: 3,
            sample_size: 1000,
            strategy: SampleStrategy::Design,
            gauge_pairs: 20,
            seed: 0,
            cache_dir: None,
            report: None,
            metric_csv: None,
        }
    }
}

impl PipelineConfig {
    pub fn label(&self) -> Result<GroupLabel> {
        GroupLabel::new(self.family, self.k)
    }

    pub fn validate(&self) -> Result<()> {
        self.label()?;
        if !self.tolerances.all_positive() {
            return Err(Error::InvalidInput("all tolerances must be positive and finite".into()));
        }
        let s = &self.solver;
        if !(s.damping > 0.0 && s.damping_up > 1.0 && s.damping_down > 0.0 && s.damping_down < 1.0) {
            return Err(Error::InvalidInput("solver damping factors out of range".into()));
        }
        if !(s.target > 0.0 && s.converged > 0.0) {
            return Err(Error::InvalidInput("solver tolerances must be positive".into()));
        }
        if self.solves == 0 {
            return Err(Error::InvalidInput("at least one solve is required".into()));
        }
        if self.sample_size < crate::bridge::MIN_POINTS {
            return Err(Error::InvalidInput(format!(
                "sample size must be at least {}",
                crate::bridge::MIN_POINTS
            )));
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// The pipeline stream forked for one stage: same key, a stream chosen by the label.
pub fn stage_rng(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSection {
    pub dim: usize,
    pub expected: usize,
    pub orthonormality_defect: f64,
    pub dense: Option<DenseCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSection {
    pub seed: u64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub jacobian_rank: Option<usize>,
    pub stabilizer_min_singular_value: Option<f64>,
    pub discrete: Option<DiscreteCheck>,
    pub frame_dim: Option<usize>,
    pub frame_error: Option<String>,
    pub metric: Option<MetricSample>,
    pub hyperkahler: Option<HyperkahlerDefects>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub config: PipelineConfig,
    pub seed: u64,
    pub group: GroupReport,
    pub mckay: McKaySummary,
    pub basis: BasisSection,
    pub zeta: Zeta,
    pub goodness: GoodVerdict,
    pub solves: Vec<SolveSection>,
    pub gauge: Option<GaugeReport>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<(String, f64)>,
    pub cache_hit: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub body: ReportBody,
    /// Wall-clock data; the only part that may differ between identical runs.
    pub timings: Timings,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.body.passed
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(Error::InvalidInput("empty output path".into()));
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

struct Clock {
    stages: Vec<(String, f64)>,
    last: Instant,
}

impl Clock {
    fn new() -> Self {
        Clock {
            stages: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push((name.to_string(), (now - self.last).as_secs_f64()));
        self.last = now;
    }
}

/// Random traceless ζ from `rng`, redrawn until it is good.
pub fn random_good_zeta(module: &FlatModule, rng: &mut impl Rng) -> Zeta {
    loop {
        let z = Zeta::random(&module.mckay, rng);
        if is_good_zeta_with(&z, &module.mckay, &module.tol).good {
            return z;
        }
    }
}

fn load_module(cfg: &PipelineConfig, label: GroupLabel) -> Result<(FlatModule, Option<bool>)> {
    match &cfg.cache_dir {
        Some(dir) => {
            let (m, hit) = Cache::new(dir).module(label, &cfg.tolerances)?;
            Ok((m, Some(hit)))
        }
        None => {
            let e = build_entry(label, &cfg.tolerances)?;
            Ok((FlatModule::from_parts(e.group, e.mckay, e.basis, cfg.tolerances.clone()), None))
        }
    }
}

/// Runs group → mckay → basis → goodness → solve → frame → metric → gauge-verify.
/// A bad ζ is reported and the later stages are skipped.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let label = cfg.label()?;
    let tol = &cfg.tolerances;
    let mut clock = Clock::new();
    let mut checks = Vec::new();

    let (module, cache_hit) = load_module(cfg, label)?;
    clock.lap("load");

    let group = verify_group_with(&module.group, tol);
    checks.extend(group.checks.iter().map(|(name, ok)| Check::flag(format!("group_{name}"), *ok)));
    checks.push(Check::equals("group_order", group.order, group.expected_order));

    let mckay = &module.mckay;
    let summary = mckay.summary(&label.to_string());
    checks.push(Check::equals("mckay_sum_of_squares", mckay.sum_of_squares(), mckay.order));
    checks.push(Check::flag("mckay_null_vector", summary.null_vector_ok));
    checks.push(Check::flag("mckay_symmetric_without_loops", mckay.symmetric_without_loops()));
    checks.push(Check::flag("mckay_root_count", mckay.root_count_matches()));
    clock.lap("mckay");

    let dense = (module.order() <= DENSE_CHECK_LIMIT)
        .then(|| dense_cross_check(&module.group, mckay, &module.basis));
    let basis = BasisSection {
        dim: module.dim(),
        expected: 4 * module.order(),
        orthonormality_defect: module.basis.orthonormality_defect(),
        dense: dense.clone(),
    };
    checks.push(Check::equals("basis_dimension", basis.dim, basis.expected));
    checks.push(Check::at_most("basis_orthonormality", basis.orthonormality_defect, tol.orthonormality));
    if let Some(d) = &dense {
        checks.push(Check::equals("dense_projector_rank", d.projector_rank, basis.dim));
        checks.push(Check::flag("dense_cross_check", d.agrees(tol.membership)));
    }
    clock.lap("basis");

    let zeta = match &cfg.zeta {
        Some(z) => {
            z.check_shape(mckay.n.len()).map_err(|e| e.in_stage("goodness"))?;
            z.clone()
        }
        None => random_good_zeta(&module, &mut stage_rng(cfg.seed, "zeta")),
    };
    let goodness = is_good_zeta_with(&zeta, mckay, tol);
    checks.push(Check::flag("zeta_good", goodness.good));
    clock.lap("goodness");

    let mut solves = Vec::new();
    let mut gauge = None;
    if goodness.good {
        let mut seeds = stage_rng(cfg.seed, "solve");
        let seeds: Vec<u64> = (0..cfg.solves).map(|_| seeds.random()).collect();
        let results = crate::par::map_slice(&seeds, |&s| solve_moment(&module, &zeta, Seed::Rng(s), &cfg.solver));
        clock.lap("solve");
        let mut discrete_seeds = stage_rng(cfg.seed, "stabilizer");
        for (seed, res) in seeds.iter().zip(results) {
            let res = res.map_err(|e| e.in_stage("solve"))?;
            let independent = residual(&module, &zeta, cfg.solver.sign, &res.point);
            let mut s = SolveSection {
                seed: *seed,
                residual: independent,
                iterations: res.iterations,
                converged: res.converged,
                jacobian_rank: None,
                stabilizer_min_singular_value: None,
                discrete: None,
                frame_dim: None,
                frame_error: None,
                metric: None,
                hyperkahler: None,
            };
            let i = solves.len();
            checks.push(Check::at_most(format!("solve_{i}_residual"), independent, tol.converged));
            if res.converged {
                let sv = stabilizer_check(&module, &res.point);
                s.stabilizer_min_singular_value = Some(sv);
                checks.push(Check::above(format!("solve_{i}_stabilizer"), sv, tol.stabilizer));
                let d = discrete_stabilizer_check(&module, &res.point, discrete_seeds.random(), 16);
                checks.push(Check::equals(format!("solve_{i}_discrete_fixed"), d.fixed, 0));
                s.discrete = Some(d);
                match horizontal_frame(&module, &res.point) {
                    Ok(frame) => {
                        s.jacobian_rank = Some(frame.jacobian_rank);
                        s.frame_dim = Some(frame.vectors.len());
                        checks.push(Check::equals(
                            format!("solve_{i}_jacobian_rank"),
                            frame.jacobian_rank,
                            3 * (module.order() - 1),
                        ));
                        checks.push(Check::equals(format!("solve_{i}_frame_dim"), frame.vectors.len(), 4));
                        match metric_sample(&module, &frame) {
                            Ok(m) => {
                                let hk = m.defects();
                                checks.push(Check::at_most(
                                    format!("solve_{i}_hyperkahler"),
                                    hk.max_defect(),
                                    tol.hyperkahler,
                                ));
                                checks.push(Check::above(format!("solve_{i}_gram_positive"), hk.gram_min_eigenvalue, 0.0));
                                s.hyperkahler = Some(hk);
                                s.metric = Some(m);
                            }
                            Err(e) => {
                                checks.push(Check::flag(format!("solve_{i}_metric"), false));
                                s.frame_error = Some(e.to_string());
                            }
                        }
                    }
                    Err(e) => {
                        checks.push(Check::flag(format!("solve_{i}_frame"), false));
                        s.frame_error = Some(e.to_string());
                    }
                }
            }
            solves.push(s);
        }
        clock.lap("frame_metric");

        let gauge_seed = stage_rng(cfg.seed, "gauge").random();
        let g = gauge_verify(&module, cfg.sample_size, cfg.strategy, gauge_seed, cfg.gauge_pairs)
            .map_err(|e| e.in_stage("gauge"))?;
        checks.extend(g.checks.iter().map(|c| Check {
            name: format!("gauge_{}", c.name),
            ..c.clone()
        }));
        gauge = Some(g);
        clock.lap("gauge");
    }

    let passed = all_pass(&checks);
    let report = RunReport {
        body: ReportBody {
            config: cfg.clone(),
            seed: cfg.seed,
            group,
            mckay: summary,
            basis,
            zeta,
            goodness,
            solves,
            gauge,
            checks,
            passed,
        },
        timings: Timings {
            stages: clock.stages,
            cache_hit,
        },
    };
    if let Some(path) = &cfg.report {
        report.write(path)?;
    }
    if let Some(path) = &cfg.metric_csv {
        if let Some(m) = report.body.solves.iter().find_map(|s| s.metric.as_ref()) {
            emit_metric_csv(m, path)?;
        }
    }
    Ok(report)
}

pub const METRIC_ROWS: [&str; 4] = ["gram", "Iq", "Jq", "Kq"];

fn csv_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x}")
    } else {
        format!("{x:?}")
    }
}

/// Header plus four rows `name,m00,m01,…,m33`, entries in row-major order and
/// shortest round-trip decimal form.
pub fn metric_csv(m: &MetricSample) -> String {
    let mut out = String::from("matrix");
    for r in 0..4 {
        for c in 0..4 {
            out.push_str(&format!(",m{r}{c}"));
        }
    }
    out.push('\n');
    for (name, a) in METRIC_ROWS.iter().zip([&m.gram, &m.iq, &m.jq, &m.kq]) {
        out.push_str(name);
        for row in a {
            for x in row {
                out.push(',');
                out.push_str(&csv_number(*x));
            }
        }
        out.push('\n');
    }
    out
}

pub fn emit_metric_csv(m: &MetricSample, path: &Path) -> Result<()> {
    write_text(path, &metric_csv(m))
}

pub fn parse_metric_csv(text: &str) -> Result<MetricSample> {
    let bad = |msg: &str| Error::InvalidInput(format!("metric csv: {msg}"));
    let mut lines = text.lines();
    lines.next().ok_or_else(|| bad("missing header"))?;
    let mut mats = [[[0.0; 4]; 4]; 4];
    for (slot, name) in mats.iter_mut().zip(METRIC_ROWS) {
        let line = lines.next().ok_or_else(|| bad("missing row"))?;
        let mut fields = line.split(',');
        if fields.next() != Some(name) {
            return Err(bad(&format!("expected row `{name}`")));
        }
        let values: Vec<f64> = fields
            .map(|f| f.trim().parse::<f64>().map_err(|_| bad(&format!("bad number `{f}`"))))
            .collect::<Result<_>>()?;
        if values.len() != 16 {
            return Err(bad("rows need 16 entries"));
        }
        for (i, v) in values.into_iter().enumerate() {
            slot[i / 4][i % 4] = v;
        }
    }
    let [gram, iq, jq, kq] = mats;
    Ok(MetricSample { gram, iq, jq, kq })
}

pub fn read_metric_csv(path: &Path) -> Result<MetricSample> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_metric_csv(&text)
}
