//! Alpha-stable subordinators built from truncated Poisson random
//! measures: the path S, its inverse local time L, and ranked jump
//! partitions including the meander.

use rand::RngExt;
use rand_distr::{Distribution, Open01, Poisson};

use crate::error::{Error, Result};
use crate::partition::RankedPartition;
use crate::renewal::MarkedPointMeasure;
use crate::tailcore::{self, StepPath};

/// Maximum number of horizon doublings when chasing a level crossing.
const MAX_DOUBLINGS: u32 = 20;

/// One realization of PRM(Leb x mu) on [0, horizon] x (cutoff, inf),
/// with mu(x, inf) = x^{-alpha} and c_alpha = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PrmRealization {
    alpha: f64,
    horizon: f64,
    cutoff: f64,
    points: MarkedPointMeasure,
}

impl PrmRealization {
    /// Build a realization from explicit (time, size) points, e.g. for
    /// hand-checked examples.
    pub fn from_parts(
        alpha: f64,
        horizon: f64,
        cutoff: f64,
        points: Vec<(f64, f64)>,
    ) -> Result<Self> {
        check_params(alpha, horizon, cutoff)?;
        if let Some(&(t, x)) = points
            .iter()
            .find(|&&(t, x)| t < 0.0 || t > horizon || x <= cutoff)
        {
            return Err(Error::domain(format!(
                "point ({t}, {x}) outside [0, {horizon}] x ({cutoff}, inf)"
            )));
        }
        let points = MarkedPointMeasure::new(points)?;
        Ok(PrmRealization { alpha, horizon, cutoff, points })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn points(&self) -> &MarkedPointMeasure {
        &self.points
    }

    /// Bound on the expected jump mass lost to the size truncation,
    /// over the whole horizon.
    pub fn truncation_bias(&self) -> f64 {
        truncation_bias(self.alpha, self.cutoff, self.horizon)
    }

    /// Cumulative-sum path of the realization.
    pub fn path(&self) -> StepPath {
        let times: Vec<f64> = self.points.points().iter().map(|&(t, _)| t).collect();
        let sizes: Vec<f64> = self.points.points().iter().map(|&(_, p)| p).collect();
        StepPath::from_increments(times, &sizes).expect("PRM points form a valid path")
    }
}

/// Expected small-jump mass per unit time below `cutoff` is
/// alpha cutoff^{1-alpha} / (1-alpha); this scales it by the horizon.
pub fn truncation_bias(alpha: f64, cutoff: f64, horizon: f64) -> f64 {
    horizon * alpha * cutoff.powf(1.0 - alpha) / (1.0 - alpha)
}

/// Cutoff for which the expected discarded mass over `horizon` is at
/// most `target_bias * level`.
pub fn default_cutoff(alpha: f64, level: f64, horizon: f64, target_bias: f64) -> f64 {
    (target_bias * level * (1.0 - alpha) / (alpha * horizon)).powf(1.0 / (1.0 - alpha))
}

fn check_params(alpha: f64, horizon: f64, cutoff: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if horizon <= 0.0 {
        return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
    }
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(Error::domain(format!("cutoff must lie in (0,1), got {cutoff}")));
    }
    Ok(())
}

fn draw_points<R: RngExt>(
    alpha: f64,
    t_lo: f64,
    t_hi: f64,
    cutoff: f64,
    rng: &mut R,
) -> Vec<(f64, f64)> {
    let mean = (t_hi - t_lo) * cutoff.powf(-alpha);
    let k = Poisson::new(mean).expect("positive Poisson mean").sample(rng) as usize;
    let mut pts: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let time = t_lo + (t_hi - t_lo) * rng.random::<f64>();
            let u: f64 = rng.sample(Open01);
            (time, cutoff * u.powf(-1.0 / alpha))
        })
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite times"));
    // f64 ties are possible at large point counts; nudge to keep one
    // point per time coordinate
    for i in 1..pts.len() {
        if pts[i].0 <= pts[i - 1].0 {
            pts[i].0 = pts[i - 1].0.next_up();
        }
    }
    pts
}

/// Draw a PRM realization: K ~ Poisson(horizon cutoff^{-alpha}) points
/// with uniform times and sizes cutoff * U^{-1/alpha}.
pub fn sample_prm<R: RngExt>(
    alpha: f64,
    horizon: f64,
    cutoff: f64,
    rng: &mut R,
) -> Result<PrmRealization> {
    check_params(alpha, horizon, cutoff)?;
    let points = MarkedPointMeasure::new(draw_points(alpha, 0.0, horizon, cutoff, rng))?;
    Ok(PrmRealization { alpha, horizon, cutoff, points })
}

/// Extend the realization with fresh points until S(horizon) > level,
/// doubling the horizon up to 20 times.
pub fn extend_until_crossing<R: RngExt>(
    prm: &mut PrmRealization,
    level: f64,
    rng: &mut R,
) -> Result<()> {
    for _ in 0..MAX_DOUBLINGS {
        if prm.path().supremum() > level {
            return Ok(());
        }
        let mut pts = prm.points.points().to_vec();
        pts.extend(draw_points(prm.alpha, prm.horizon, 2.0 * prm.horizon, prm.cutoff, rng));
        prm.points = MarkedPointMeasure::new(pts)?;
        prm.horizon *= 2.0;
    }
    if prm.path().supremum() > level {
        Ok(())
    } else {
        Err(Error::HorizonTooShort { level, reached: prm.path().supremum() })
    }
}

/// Convenience: sample a realization whose path is guaranteed to cross
/// `level`, using the default cutoff policy.
pub fn sample_prm_crossing<R: RngExt>(
    alpha: f64,
    level: f64,
    cutoff: f64,
    rng: &mut R,
) -> Result<PrmRealization> {
    let mut prm = sample_prm(alpha, 2.0 * level.max(0.5), cutoff, rng)?;
    extend_until_crossing(&mut prm, level, rng)?;
    Ok(prm)
}

/// S(t): sum of jump sizes with time at most `t`.
pub fn subordinator_value(prm: &PrmRealization, t: f64) -> Result<f64> {
    if t > prm.horizon {
        return Err(Error::BeyondHorizon { t, horizon: prm.horizon });
    }
    Ok(prm
        .points
        .points()
        .iter()
        .filter(|&&(ti, _)| ti <= t)
        .map(|&(_, p)| p)
        .sum())
}

/// Inverse local time L(s) = inf{t : S(t) > s}.
pub fn local_time(prm: &PrmRealization, s: f64) -> Result<f64> {
    match tailcore::generalized_inverse(&prm.path(), s) {
        Ok(t) => Ok(t),
        Err(Error::LevelNeverCrossed { level, supremum }) => {
            Err(Error::HorizonTooShort { level, reached: supremum })
        }
        Err(e) => Err(e),
    }
}

/// Completed jumps before L(s) together with the meander
/// A_s = s - sum of completed jumps, ranked descending with total s.
///
/// Under truncation the meander absorbs the discarded small-jump mass,
/// so the mass identity holds exactly; the inflation is bounded by
/// [`PrmRealization::truncation_bias`].
pub fn ranked_jumps(prm: &PrmRealization, s: f64) -> Result<RankedPartition> {
    let l = local_time(prm, s)?;
    let completed: Vec<f64> = prm
        .points
        .points()
        .iter()
        .filter(|&&(ti, _)| ti < l)
        .map(|&(_, p)| p)
        .collect();
    let meander = s - completed.iter().sum::<f64>();
    RankedPartition::from_parts(completed, Some(meander), s)
}

/// The Pitman–Yor identity's right-hand side: jumps up to time `t`
/// normalized by S(t), ranked descending with total 1 and no meander.
pub fn pitman_yor_at_inverse_time(prm: &PrmRealization, t: f64) -> Result<RankedPartition> {
    if t > prm.horizon {
        return Err(Error::BeyondHorizon { t, horizon: prm.horizon });
    }
    let jumps: Vec<f64> = prm
        .points
        .points()
        .iter()
        .filter(|&&(ti, _)| ti <= t)
        .map(|&(_, p)| p)
        .collect();
    let total: f64 = jumps.iter().sum();
    if total <= 0.0 {
        return Err(Error::domain(format!("no jumps up to t = {t}; enlarge t or lower the cutoff")));
    }
    RankedPartition::from_parts(jumps.iter().map(|&p| p / total).collect(), None, 1.0)
}
