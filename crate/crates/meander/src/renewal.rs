//! Stationary step sequences, first-passage quantities, the scaled
//! point measure N_t, and the pre-passage ranked partition.

use rand::RngExt;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::RankedPartition;
use crate::rng::substream;
use crate::tailcore::{Family, StepPath, TailModel};

/// Hard cap on lazily generated steps before giving up on a crossing.
const MAX_LAZY_STEPS: u64 = 1 << 40;

/// RNG provenance of a simulated sequence: the master seed and the
/// replicate index whose substream produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedInfo {
    pub master: u64,
    pub replicate: u64,
}

impl SeedInfo {
    pub fn new(master: u64, replicate: u64) -> Self {
        SeedInfo { master, replicate }
    }
}

/// Lazily generated stationary step stream for one replicate.
///
/// Consuming `n` steps and restarting from the same `SeedInfo` always
/// reproduces the identical prefix.
pub struct StepStream {
    model: TailModel,
    rng: ChaCha12Rng,
    state: StreamState,
}

enum StreamState {
    Iid,
    Ar { eta: Option<f64> },
}

impl StepStream {
    pub fn new(model: TailModel, seed: SeedInfo) -> Self {
        let state = match model.family() {
            Family::ExactPareto => StreamState::Iid,
            Family::StochVol { .. } => StreamState::Ar { eta: None },
            Family::SsrwExcursion => StreamState::Iid,
        };
        StepStream { model, rng: substream(seed.master, seed.replicate), state }
    }

    pub fn model(&self) -> TailModel {
        self.model
    }

    fn pareto(&mut self) -> f64 {
        let u: f64 = self.rng.sample(Open01);
        u.powf(-1.0 / self.model.alpha())
    }

    pub fn next_step(&mut self) -> f64 {
        match self.model.family() {
            Family::ExactPareto => self.pareto(),
            Family::StochVol { phi } => {
                let eps: f64 = self.rng.sample(StandardNormal);
                // stationary N(0,1) marginal: start from the invariant law
                let prev = match &self.state {
                    StreamState::Ar { eta } => *eta,
                    _ => unreachable!(),
                };
                let next = match prev {
                    None => eps,
                    Some(p) => phi * p + (1.0 - phi * phi).sqrt() * eps,
                };
                if let StreamState::Ar { eta } = &mut self.state {
                    *eta = Some(next);
                }
                next.exp() * self.pareto()
            }
            Family::SsrwExcursion => {
                // length of the next excursion away from zero, drawn by
                // exact inversion of the return-time law; stepping a
                // literal +/-1 walk to its return would make runs
                // unbounded, since the excursion straddling a passage
                // level is size-biased with infinite mean length
                let u: f64 = self.rng.sample(Open01);
                ssrw_excursion_length(self.model, u)
            }
        }
    }
}

/// Smallest even length 2m with P(T > 2m) < u, i.e. the exact quantile
/// transform of the walk's return-time distribution.
fn ssrw_excursion_length(model: TailModel, u: f64) -> f64 {
    let tail = |m: f64| model.step_tail(2.0 * m);
    if tail(1.0) < u {
        return 2.0;
    }
    // doubling bracket, then integer bisection: tail(lo) >= u > tail(hi)
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    while tail(hi) >= u {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1.0 {
        let mid = ((lo + hi) / 2.0).floor();
        if mid <= lo || mid >= hi {
            break;
        }
        if tail(mid) >= u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    2.0 * hi
}

impl Iterator for StepStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_step())
    }
}

/// A realized finite prefix of the stationary step sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSequence {
    model: TailModel,
    steps: Vec<f64>,
    seed: SeedInfo,
}

impl StepSequence {
    pub fn model(&self) -> TailModel {
        self.model
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    pub fn seed(&self) -> SeedInfo {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Assemble from explicit steps; used by tests and callers that
    /// already hold realized values.
    pub fn from_steps(model: TailModel, steps: Vec<f64>, seed: SeedInfo) -> Result<Self> {
        if steps.iter().any(|&y| y <= 0.0) {
            return Err(Error::domain("steps must be strictly positive"));
        }
        Ok(StepSequence { model, steps, seed })
    }

    /// Partial-sum path with jump times 1, 2, 3, ...
    pub fn partial_sum_path(&self) -> StepPath {
        let times = (1..=self.steps.len()).map(|i| i as f64).collect();
        StepPath::from_increments(times, &self.steps).expect("positive steps form a valid path")
    }
}

/// Simulate `count` steps of the model; deterministic per
/// (model, seed, count).
pub fn simulate_steps(model: TailModel, count: usize, seed: SeedInfo) -> Result<StepSequence> {
    if count == 0 {
        return Err(Error::domain("count must be at least 1"));
    }
    let stream = StepStream::new(model, seed);
    let steps: Vec<f64> = stream.take(count).collect();
    Ok(StepSequence { model, steps, seed })
}

/// First-passage summary at level `t`: passage index tau, age,
/// overshoot, scaled passage time and the normalized pre-passage steps.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageSummary {
    pub t: f64,
    pub tau: u64,
    pub age: f64,
    pub overshoot: f64,
    pub scaled_passage: f64,
    pub prepassage_steps: Vec<f64>,
}

fn passage_from_iter(
    model: TailModel,
    t: f64,
    steps: impl IntoIterator<Item = f64>,
    cap: u64,
) -> Result<PassageSummary> {
    if t <= 0.0 {
        return Err(Error::domain(format!("level t must be positive, got {t}")));
    }
    let mut sum = 0.0_f64;
    let mut prepassage = Vec::new();
    let mut tau: u64 = 0;
    for y in steps {
        tau += 1;
        let prev = sum;
        sum += y;
        if sum > t {
            let age = (t - prev) / t;
            let overshoot = (sum - t) / t;
            let scaled_passage = tau as f64 / model.scaling_dtilde(t);
            return Ok(PassageSummary { t, tau, age, overshoot, scaled_passage, prepassage_steps: prepassage });
        }
        prepassage.push(y / t);
        if tau >= cap {
            break;
        }
    }
    Err(Error::InsufficientSteps { level: t, reached: sum })
}

/// First passage over a realized prefix; errors if the prefix never
/// crosses `t`.
pub fn first_passage(steps: &StepSequence, t: f64) -> Result<PassageSummary> {
    passage_from_iter(steps.model(), t, steps.steps().iter().copied(), u64::MAX)
}

/// First passage with lazy step generation: steps are drawn from the
/// stream until the level is crossed, capped at 2^40 steps.
pub fn first_passage_lazy(model: TailModel, seed: SeedInfo, t: f64) -> Result<PassageSummary> {
    passage_from_iter(model, t, StepStream::new(model, seed), MAX_LAZY_STEPS)
}

/// Finite list of (time, size) points; at most one point per distinct
/// time, all sizes positive.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedPointMeasure {
    points: Vec<(f64, f64)>,
}

impl MarkedPointMeasure {
    /// Points must be sorted by time with strictly increasing time
    /// coordinates and positive sizes.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.iter().any(|&(_, p)| p <= 0.0) {
            return Err(Error::domain("point sizes must be positive"));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::domain("point times must be strictly increasing"));
        }
        Ok(MarkedPointMeasure { points })
    }

    pub fn empty() -> Self {
        MarkedPointMeasure { points: Vec::new() }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points in [0, time_max] x (size_floor, infinity].
    pub fn count_rectangle(&self, time_max: f64, size_floor: f64) -> usize {
        self.points
            .iter()
            .filter(|&&(t, p)| t <= time_max && p > size_floor)
            .count()
    }
}

/// The scaled point measure N_t with points (i / dtilde(t), Y_i / t).
pub fn point_measure_nt(steps: &StepSequence, t: f64) -> Result<MarkedPointMeasure> {
    if t < 1.0 {
        return Err(Error::domain(format!("t must be at least 1, got {t}")));
    }
    let dt = steps.model().scaling_dtilde(t);
    let points = steps
        .steps()
        .iter()
        .enumerate()
        .map(|(i, &y)| ((i + 1) as f64 / dt, y / t))
        .collect();
    MarkedPointMeasure::new(points)
}

/// Restriction of a point measure to times before the passage time,
/// inclusive or exclusive of the boundary.
pub fn restrict_before_passage(
    measure: &MarkedPointMeasure,
    passage_time: f64,
    inclusive: bool,
) -> MarkedPointMeasure {
    let points = measure
        .points()
        .iter()
        .filter(|&&(t, _)| if inclusive { t <= passage_time } else { t < passage_time })
        .copied()
        .collect();
    MarkedPointMeasure { points }
}

/// Descending partition of [0,1] formed by the age and the normalized
/// pre-passage steps; the age is tracked as the meander component.
pub fn prepassage_partition(summary: &PassageSummary) -> Result<RankedPartition> {
    RankedPartition::from_parts(summary.prepassage_steps.clone(), Some(summary.age), 1.0)
}
