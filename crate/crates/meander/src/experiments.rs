//! Named experiments: each one reproduces a single limit-theorem
//! prediction at desk scale and reduces it to pass/fail test reports
//! plus a raw-samples CSV for external plotting.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::RngExt;
use rayon::prelude::*;

use crate::config::{CutoffPolicy, ExperimentConfig};
use crate::error::{Error, Result};
use crate::pitmanyor;
use crate::renewal::{self, SeedInfo};
use crate::rng::substream;
use crate::subordinator;
use crate::tailcore::{Family, TailModel};
use crate::verify::{self, TestReport};

/// KS tolerance for the age against the arcsine law (iid steps).
pub const KS_AGE_IID: f64 = 0.02;
/// KS tolerance for the age on dependent steps.
pub const KS_AGE_DEPENDENT: f64 = 0.03;
/// Tolerance for the empirical mean of the age around 1 - alpha.
pub const AGE_MEAN_TOL: f64 = 0.01;
/// Per-coordinate KS tolerance for ranked-partition comparisons.
pub const KS_TOP_COORD: f64 = 0.03;
/// KS tolerance for the Pitman-Yor identity D_1 comparison.
pub const KS_PY_IDENTITY: f64 = 0.03;
/// Truncation-bias budget for subordinator draws, relative to level.
pub const TRUNCATION_BIAS_BOUND: f64 = 1e-4;
/// p-value floor for chi-square tests.
pub const CHI_SQUARE_P_MIN: f64 = 0.01;
/// Tolerance for the rectangle-count mean around 1.
pub const POISSON_MEAN_TOL: f64 = 0.03;
/// KS tolerance for the scaled passage time against Mittag-Leffler.
pub const KS_MITTAG_LEFFLER: f64 = 0.03;
/// Tolerance for the Mittag-Leffler sample mean.
pub const ML_MEAN_TOL: f64 = 0.005;
/// Absolute tolerance of the joint-density marginalization check.
pub const MARGINALIZATION_TOL: f64 = 1e-6;
/// Hill-estimate tolerance around the configured alpha.
pub const HILL_TOL: f64 = 0.05;
/// Extremal-index floor for the dependence experiment.
pub const EXTREMAL_INDEX_MIN: f64 = 0.9;
/// KS tolerance for the SSRW excursion D_1 comparison.
pub const KS_SSRW: f64 = 0.04;
/// KS tolerance for scaled maxima against the Frechet law.
pub const KS_FRECHET: f64 = 0.02;

/// Number of steps behind the Hill / extremal-index diagnostics.
const DEPENDENCE_STEPS: usize = 1_000_000;
/// Top order statistics for the dependence Hill estimate.
const DEPENDENCE_HILL_K: usize = 2000;
/// Runs-estimator block length at 10^6 steps.
const DEPENDENCE_BLOCK: usize = 100;
/// Sample size for each maximum in the frechet-max experiment.
const FRECHET_BLOCK_N: usize = 100_000;
/// Draws behind the Mittag-Leffler mean check.
const ML_MEAN_DRAWS: u64 = 1_000_000;
/// Two-sample size cap for KS comparisons inside joint-limit.
const KS_PAIR_CAP: u64 = 10_000;
/// Stick-breaking depth for partition comparisons.
const STICK_COUNT: usize = 200;

/// All experiment names, in a stable order.
pub const EXPERIMENT_NAMES: &[&str] = &[
    "dynkin-lamperti",
    "main-theorem",
    "point-process",
    "joint-limit",
    "pitman-yor-identity",
    "ssrw-excursions",
    "dependence",
    "frechet-max",
];

/// One raw-output row; unused columns stay at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub replicate: u64,
    pub t: f64,
    pub tau: u64,
    pub age: f64,
    pub overshoot: f64,
    pub scaled_passage: f64,
    pub top: [f64; 5],
}

impl RawRow {
    fn zeroed(replicate: u64, t: f64) -> Self {
        RawRow { replicate, t, tau: 0, age: 0.0, overshoot: 0.0, scaled_passage: 0.0, top: [0.0; 5] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub raw: Vec<RawRow>,
    pub reports: Vec<TestReport>,
}

impl ExperimentOutput {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

fn par_map<T: Send>(
    replicates: u64,
    f: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    (0..replicates).into_par_iter().map(f).collect()
}

/// Run a named experiment on an optional fixed-size thread pool.
/// Results are merged in replicate order, so the output is independent
/// of the parallelism degree.
pub fn run_experiment(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentOutput> {
    cfg.validate()?;
    match threads {
        None => dispatch(cfg),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            pool.install(|| dispatch(cfg))
        }
    }
}

fn dispatch(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    match cfg.experiment.as_str() {
        "dynkin-lamperti" => dynkin_lamperti(cfg),
        "main-theorem" => main_theorem(cfg),
        "point-process" => point_process(cfg),
        "joint-limit" => joint_limit(cfg),
        "pitman-yor-identity" => pitman_yor_identity(cfg),
        "ssrw-excursions" => ssrw_excursions(cfg),
        "dependence" => dependence(cfg),
        "frechet-max" => frechet_max(cfg),
        other => Err(Error::Config(format!(
            "unknown experiment '{other}'; see `meander list-experiments`"
        ))),
    }
}

// ---------------------------------------------------------------------
// dynkin-lamperti: the age at passage against the arcsine law

fn passage_rows(
    model: TailModel,
    seed: u64,
    t: f64,
    replicates: u64,
    rep_offset: u64,
) -> Result<Vec<RawRow>> {
    par_map(replicates, |r| {
        let p = renewal::first_passage_lazy(model, SeedInfo::new(seed, rep_offset + r), t)?;
        let part = renewal::prepassage_partition(&p)?;
        let top5 = part.top(5);
        Ok(RawRow {
            replicate: rep_offset + r,
            t,
            tau: p.tau,
            age: p.age,
            overshoot: p.overshoot,
            scaled_passage: p.scaled_passage,
            top: [top5[0], top5[1], top5[2], top5[3], top5[4]],
        })
    })
}

fn age_reports(
    rows: &[RawRow],
    alpha: f64,
    t: f64,
    ks_threshold: f64,
    with_mean: bool,
) -> Vec<TestReport> {
    let ages: Vec<f64> = rows.iter().map(|r| r.age).collect();
    let ks = verify::ks_one_sample(&ages, |u| {
        pitmanyor::arcsine_cdf(alpha, u.clamp(0.0, 1.0)).expect("valid alpha")
    })
    .expect("nonempty ages");
    let mut reports = vec![TestReport::distance(
        format!("age-vs-arcsine-KS t={t}"),
        ks,
        ks_threshold,
        vec![ages.len()],
    )];
    if with_mean {
        let mean = ages.iter().sum::<f64>() / ages.len() as f64;
        reports.push(TestReport::distance(
            format!("age-mean-vs-1-minus-alpha t={t}"),
            (mean - (1.0 - alpha)).abs(),
            AGE_MEAN_TOL,
            vec![ages.len()],
        ));
    }
    reports
}

fn dynkin_lamperti(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let model = cfg.tail_model()?;
    let iid = matches!(model.family(), Family::ExactPareto);
    let ks_threshold = if iid { KS_AGE_IID } else { KS_AGE_DEPENDENT };
    let mut raw = Vec::new();
    let mut reports = Vec::new();
    for (ti, &t) in cfg.t_levels.iter().enumerate() {
        let rows = passage_rows(model, cfg.seed, t, cfg.replicates, ti as u64 * cfg.replicates)?;
        reports.extend(age_reports(&rows, cfg.alpha, t, ks_threshold, iid));
        raw.extend(rows);
    }
    Ok(ExperimentOutput { raw, reports })
}

// ---------------------------------------------------------------------
// main-theorem: pre-passage ranked partition vs stick-breaking

fn main_theorem(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let model = cfg.tail_model()?;
    let t = *cfg.t_levels.last().expect("validated nonempty");
    let rows = passage_rows(model, cfg.seed, t, cfg.replicates, 0)?;
    let sticks = par_map(cfg.replicates, |r| {
        let mut rng = substream(cfg.seed, cfg.replicates + r);
        let s = pitmanyor::stick_breaking(cfg.alpha, STICK_COUNT, &mut rng)?;
        Ok(s.ranked().top(5))
    })?;
    let cutoff = cutoff_for(&cfg.cutoff_policy, cfg.alpha, 1.0, 2.0);
    let sub = par_map(cfg.replicates, |r| {
        let mut rng = substream(cfg.seed, 2 * cfg.replicates + r);
        let prm = subordinator::sample_prm_crossing(cfg.alpha, 1.0, cutoff, &mut rng)?;
        Ok(subordinator::ranked_jumps(&prm, 1.0)?.top(5))
    })?;
    let mut reports = Vec::new();
    for coord in 0..5 {
        let a: Vec<f64> = rows.iter().map(|r| r.top[coord]).collect();
        let b: Vec<f64> = sticks.iter().map(|s| s[coord]).collect();
        let c: Vec<f64> = sub.iter().map(|s| s[coord]).collect();
        let ks = verify::ks_two_sample(&a, &b)?;
        reports.push(TestReport::distance(
            format!("top{}-renewal-vs-stickbreaking-KS", coord + 1),
            ks,
            KS_TOP_COORD,
            vec![a.len(), b.len()],
        ));
        let ks = verify::ks_two_sample(&a, &c)?;
        reports.push(TestReport::distance(
            format!("top{}-renewal-vs-subordinator-KS", coord + 1),
            ks,
            KS_TOP_COORD,
            vec![a.len(), c.len()],
        ));
    }
    Ok(ExperimentOutput { raw: rows, reports })
}

// ---------------------------------------------------------------------
// point-process: rectangle counts of N_t against Poisson

fn point_process(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let model = cfg.tail_model()?;
    let t = *cfg.t_levels.last().expect("validated nonempty");
    let steps_per_rep = model.scaling_dtilde(t).ceil() as usize;
    let counts: Vec<u64> = par_map(cfg.replicates, |r| {
        let steps = renewal::simulate_steps(model, steps_per_rep, SeedInfo::new(cfg.seed, r))?;
        let measure = renewal::point_measure_nt(&steps, t)?;
        Ok(measure.count_rectangle(1.0, 1.0) as u64)
    })?;
    // intensity of [0,1] x (1,inf] under Leb x mu is exactly 1
    let chi = verify::chi_square_poisson(&counts, 1.0)?;
    let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
    let raw = counts
        .iter()
        .enumerate()
        .map(|(r, &c)| RawRow { tau: c, ..RawRow::zeroed(r as u64, t) })
        .collect();
    let reports = vec![
        TestReport::lower_bound(
            "rectangle-counts-vs-poisson1-chi2-p",
            chi.p_value,
            CHI_SQUARE_P_MIN,
            vec![counts.len()],
        ),
        TestReport::distance(
            "rectangle-count-mean-vs-1",
            (mean - 1.0).abs(),
            POISSON_MEAN_TOL,
            vec![counts.len()],
        ),
    ];
    Ok(ExperimentOutput { raw, reports })
}

// ---------------------------------------------------------------------
// joint-limit: (age, overshoot, scaled passage) against (A, B, L)

/// Adaptive Simpson quadrature used for expected cell masses and the
/// marginalization gate.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, left, 0.5 * tol, depth - 1) + rec(f, m, b, right, 0.5 * tol, depth - 1)
        }
    }
    rec(f, a, b, simpson(f, a, b), tol, depth)
}

/// Max absolute gap between the b-marginal of the joint density and the
/// arcsine density, over an interior grid of ages.
pub fn joint_density_marginalization_gap(alpha: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 1..=9 {
        let a = i as f64 / 10.0;
        let f = |b: f64| pitmanyor::joint_age_overshoot_pdf(alpha, a, b).expect("interior point");
        let head = adaptive_simpson(&f, 1e-12, 1.0, 1e-10, 48);
        // b in [1, inf) via b = 1/y, then y = v^{1/alpha} to absorb the
        // y^{alpha-1} endpoint
        let h = |v: f64| {
            let y = v.powf(1.0 / alpha);
            let b = 1.0 / y;
            f(b) / (y * y) * y / (v * alpha)
        };
        let tail = adaptive_simpson(&h, 1e-13, 1.0, 1e-10, 48);
        let gap = (head + tail - pitmanyor::arcsine_pdf(alpha, a).expect("interior")).abs();
        worst = worst.max(gap);
    }
    worst
}

const JOINT_B_EDGES: [f64; 11] =
    [0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.5, 5.0, 10.0, f64::INFINITY];

/// Expected cell probabilities of (A, B) on the 10 x 10 grid with a in
/// tenths and b in [`JOINT_B_EDGES`]. Each cell mass splits as
/// c [F(b0) - F(b1)] with F(b) = int (1-a)^{alpha-1} (a+b)^{-alpha} da
/// over the a-cell; F(0) reduces to an arcsine-CDF increment, and for
/// b > 0 the substitution w = (1-a)^alpha leaves a smooth integrand.
fn joint_cell_probs(alpha: f64) -> Vec<f64> {
    let c = (PI * alpha).sin() / PI;
    let mut probs = Vec::with_capacity(100);
    for ia in 0..10 {
        let a0 = ia as f64 / 10.0;
        let a1 = (ia + 1) as f64 / 10.0;
        let w0 = (1.0 - a1).max(0.0).powf(alpha);
        let w1 = (1.0 - a0).powf(alpha);
        let cf = |b: f64| -> f64 {
            if b.is_infinite() {
                return 0.0;
            }
            if b == 0.0 {
                let cdf = |u: f64| pitmanyor::arcsine_cdf(alpha, u).expect("valid alpha");
                return cdf(a1) - cdf(a0);
            }
            let g = |w: f64| (1.0 - w.powf(1.0 / alpha) + b).powf(-alpha);
            c / alpha * adaptive_simpson(&g, w0, w1, 1e-12, 48)
        };
        for ib in 0..10 {
            probs.push(cf(JOINT_B_EDGES[ib]) - cf(JOINT_B_EDGES[ib + 1]));
        }
    }
    probs
}

fn joint_limit(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let model = cfg.tail_model()?;
    let alpha = cfg.alpha;
    let t = *cfg.t_levels.last().expect("validated nonempty");

    // gate: the joint density must marginalize to the arcsine law
    // before it is used as a chi-square reference
    let gap = joint_density_marginalization_gap(alpha);
    let mut reports = vec![TestReport::distance(
        "joint-density-marginalization-gap",
        gap,
        MARGINALIZATION_TOL,
        vec![],
    )];
    let density_ok = gap <= MARGINALIZATION_TOL;

    let rows = passage_rows(model, cfg.seed, t, cfg.replicates, 0)?;

    // scaled passage time vs Mittag-Leffler, capped pair size
    let n_ks = cfg.replicates.min(KS_PAIR_CAP);
    let ml_pair: Vec<f64> = par_map(n_ks, |r| {
        let mut rng = substream(cfg.seed, cfg.replicates + r);
        pitmanyor::mittag_leffler_sample(alpha, &mut rng)
    })?;
    let l_sample: Vec<f64> = rows.iter().take(n_ks as usize).map(|r| r.scaled_passage).collect();
    let ks = verify::ks_two_sample(&l_sample, &ml_pair)?;
    reports.push(TestReport::distance(
        "scaled-passage-vs-mittag-leffler-KS",
        ks,
        KS_MITTAG_LEFFLER,
        vec![l_sample.len(), ml_pair.len()],
    ));

    // Mittag-Leffler sampler mean against the moment formula
    let ml_mean_sum: f64 = par_map(ML_MEAN_DRAWS, |r| {
        let mut rng = substream(cfg.seed, 2 * cfg.replicates + r);
        pitmanyor::mittag_leffler_sample(alpha, &mut rng)
    })?
    .iter()
    .sum();
    let ml_mean = ml_mean_sum / ML_MEAN_DRAWS as f64;
    let expect = pitmanyor::mittag_leffler_moment(alpha, 1)?;
    reports.push(TestReport::distance(
        "mittag-leffler-mean",
        (ml_mean - expect).abs(),
        ML_MEAN_TOL,
        vec![ML_MEAN_DRAWS as usize],
    ));

    // (A, B) against the joint density on the 10 x 10 grid
    if density_ok {
        let probs = joint_cell_probs(alpha);
        let mut observed = vec![0u64; 100];
        for row in &rows {
            let ia = ((row.age * 10.0).floor() as usize).min(9);
            let ib = JOINT_B_EDGES[1..11]
                .iter()
                .position(|&e| row.overshoot < e)
                .unwrap_or(9);
            observed[ia * 10 + ib] += 1;
        }
        let chi = verify::chi_square_gof(&observed, &probs)?;
        reports.push(TestReport::lower_bound(
            "age-overshoot-grid-chi2-p",
            chi.p_value,
            CHI_SQUARE_P_MIN,
            vec![rows.len()],
        ));
    }

    Ok(ExperimentOutput { raw: rows, reports })
}

// ---------------------------------------------------------------------
// pitman-yor-identity: V(s)/s vs V(S(t))/S(t) through D_1

fn cutoff_for(policy: &CutoffPolicy, alpha: f64, level: f64, horizon: f64) -> f64 {
    policy
        .cutoff
        .unwrap_or_else(|| subordinator::default_cutoff(alpha, level, horizon, policy.target_bias))
}

fn pitman_yor_identity(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let alpha = cfg.alpha;
    let horizon = 2.0;
    let cutoff = cutoff_for(&cfg.cutoff_policy, alpha, 1.0, horizon);
    let bias = subordinator::truncation_bias(alpha, cutoff, horizon);

    let level_side: Vec<f64> = par_map(cfg.replicates, |r| {
        let mut rng = substream(cfg.seed, r);
        let prm = subordinator::sample_prm_crossing(alpha, 1.0, cutoff, &mut rng)?;
        Ok(subordinator::ranked_jumps(&prm, 1.0)?.largest())
    })?;
    let time_side: Vec<f64> = par_map(cfg.replicates, |r| {
        let mut rng = substream(cfg.seed, cfg.replicates + r);
        let prm = subordinator::sample_prm(alpha, 1.0, cutoff, &mut rng)?;
        Ok(subordinator::pitman_yor_at_inverse_time(&prm, 1.0)?.largest())
    })?;

    let ks = verify::ks_two_sample(&level_side, &time_side)?;
    let reports = vec![
        TestReport::distance("truncation-bias-bound", bias, TRUNCATION_BIAS_BOUND, vec![]),
        TestReport::distance(
            "D1-identity-KS",
            ks,
            KS_PY_IDENTITY,
            vec![level_side.len(), time_side.len()],
        ),
    ];
    let raw = level_side
        .iter()
        .zip(&time_side)
        .enumerate()
        .map(|(r, (&a, &b))| {
            let mut row = RawRow::zeroed(r as u64, 1.0);
            row.top[0] = a;
            row.top[1] = b;
            row
        })
        .collect();
    Ok(ExperimentOutput { raw, reports })
}

// ---------------------------------------------------------------------
// ssrw-excursions: ranked excursion lengths vs Pitman-Yor(1/2)

fn ssrw_excursions(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let model = TailModel::ssrw_excursion();
    let t = *cfg.t_levels.last().expect("validated nonempty");
    let rows = passage_rows(model, cfg.seed, t, cfg.replicates, 0)?;
    let d1_walk: Vec<f64> = rows.iter().map(|r| r.top[0]).collect();

    let alpha = 0.5;
    let horizon = 2.0;
    let cutoff = cutoff_for(&cfg.cutoff_policy, alpha, 1.0, horizon);
    let d1_sub: Vec<f64> = par_map(cfg.replicates, |r| {
        let mut rng = substream(cfg.seed, cfg.replicates + r);
        let prm = subordinator::sample_prm_crossing(alpha, 1.0, cutoff, &mut rng)?;
        Ok(subordinator::ranked_jumps(&prm, 1.0)?.largest())
    })?;

    let ks = verify::ks_two_sample(&d1_walk, &d1_sub)?;
    let reports = vec![TestReport::distance(
        "ssrw-D1-vs-subordinator-KS",
        ks,
        KS_SSRW,
        vec![d1_walk.len(), d1_sub.len()],
    )];
    Ok(ExperimentOutput { raw: rows, reports })
}

// ---------------------------------------------------------------------
// dependence: StochVol diagnostics plus the arcsine pipeline

fn dependence(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let phi = cfg.model.phi.unwrap_or(0.7);
    let model = TailModel::stoch_vol(cfg.alpha, phi)?;
    let steps = renewal::simulate_steps(model, DEPENDENCE_STEPS, SeedInfo::new(cfg.seed, u64::MAX))?;

    let hill = verify::hill_estimator(steps.steps(), DEPENDENCE_HILL_K)?;
    let mut sorted = steps.steps().to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite steps"));
    let threshold = sorted[(0.999 * DEPENDENCE_STEPS as f64) as usize];
    let theta = verify::extremal_index_runs(steps.steps(), threshold, DEPENDENCE_BLOCK)?;

    let mut reports = vec![
        TestReport::distance(
            format!("hill-alpha-gap k={DEPENDENCE_HILL_K}"),
            (hill - cfg.alpha).abs(),
            HILL_TOL,
            vec![DEPENDENCE_STEPS],
        ),
        TestReport::lower_bound(
            format!("extremal-index-runs block={DEPENDENCE_BLOCK}"),
            theta,
            EXTREMAL_INDEX_MIN,
            vec![DEPENDENCE_STEPS],
        ),
    ];

    let t = *cfg.t_levels.last().expect("validated nonempty");
    let rows = passage_rows(model, cfg.seed, t, cfg.replicates, 0)?;
    reports.extend(age_reports(&rows, cfg.alpha, t, KS_AGE_DEPENDENT, false));
    Ok(ExperimentOutput { raw: rows, reports })
}

// ---------------------------------------------------------------------
// frechet-max: scaled partial maxima vs the Frechet law

fn frechet_max(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let model = cfg.tail_model()?;
    if !matches!(model.family(), Family::ExactPareto) {
        return Err(Error::Config("frechet-max runs on the exact-pareto family".into()));
    }
    let n = FRECHET_BLOCK_N;
    let dn = model.scaling_d(n as f64);
    let alpha = cfg.alpha;
    let scaled: Vec<f64> = par_map(cfg.replicates, |r| {
        let mut rng = substream(cfg.seed, r);
        // max of n Pareto draws = (min of their uniforms)^{-1/alpha}
        let mut umin = f64::INFINITY;
        for _ in 0..n {
            let u: f64 = rng.sample(rand_distr::Open01);
            umin = umin.min(u);
        }
        Ok(umin.powf(-1.0 / alpha) / dn)
    })?;
    let ks = verify::ks_one_sample(&scaled, |x| {
        if x <= 0.0 { 0.0 } else { pitmanyor::frechet_cdf(alpha, x).expect("valid alpha") }
    })?;
    let reports = vec![TestReport::distance(
        format!("scaled-max-vs-frechet-KS n={n}"),
        ks,
        KS_FRECHET,
        vec![scaled.len()],
    )];
    let raw = scaled
        .iter()
        .enumerate()
        .map(|(r, &m)| {
            let mut row = RawRow::zeroed(r as u64, n as f64);
            row.top[0] = m;
            row
        })
        .collect();
    Ok(ExperimentOutput { raw, reports })
}

// ---------------------------------------------------------------------
// CSV output

/// 17-significant-digit scientific notation, locale-free.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolve the output base path: the directory component can be
/// overridden by MEANDER_OUTPUT_DIR.
fn output_base(cfg: &ExperimentConfig) -> PathBuf {
    let base = cfg.output_path.clone();
    match std::env::var_os("MEANDER_OUTPUT_DIR") {
        None => base,
        Some(dir) => {
            let name = base.file_name().map(|s| s.to_owned()).unwrap_or_default();
            Path::new(&dir).join(name)
        }
    }
}

/// Write `<base>_raw.csv` and `<base>_report.csv`; returns both paths.
/// Identical config and seed produce byte-identical files.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    out: &ExperimentOutput,
) -> Result<(PathBuf, PathBuf)> {
    let base = output_base(cfg);
    if let Some(dir) = base.parent()
        && !dir.as_os_str().is_empty()
    {
        std::fs::create_dir_all(dir)?;
    }
    let stem = base.to_string_lossy().into_owned();
    let raw_path = PathBuf::from(format!("{stem}_raw.csv"));
    let report_path = PathBuf::from(format!("{stem}_report.csv"));

    let mut w = std::io::BufWriter::new(std::fs::File::create(&raw_path)?);
    writeln!(w, "replicate,t,tau,age,overshoot,scaled_passage,comp1,comp2,comp3,comp4,comp5")?;
    for r in &out.raw {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.replicate,
            fmt(r.t),
            r.tau,
            fmt(r.age),
            fmt(r.overshoot),
            fmt(r.scaled_passage),
            fmt(r.top[0]),
            fmt(r.top[1]),
            fmt(r.top[2]),
            fmt(r.top[3]),
            fmt(r.top[4]),
        )?;
    }
    w.flush()?;

    let mut w = std::io::BufWriter::new(std::fs::File::create(&report_path)?);
    writeln!(w, "description,statistic,threshold,passed")?;
    for r in &out.reports {
        writeln!(w, "{},{},{},{}", r.description, fmt(r.statistic), fmt(r.threshold), r.passed)?;
    }
    w.flush()?;
    Ok((raw_path, report_path))
}
