//! Regular-variation primitives: step-law tails, the normalizing
//! function `d` with its asymptotic inverse, and generalized inverses of
//! nondecreasing cadlag step paths.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Relative tolerance for monotone bisection inversions.
const BISECT_REL_TOL: f64 = 1e-6;

/// Concrete step-law family behind a [`TailModel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum Family {
    /// Exact Pareto: P(Y > x) = x^{-alpha} for x >= 1.
    ExactPareto,
    /// Y_n = exp(eta_n) Z_n with eta a stationary Gaussian AR(1)
    /// (coefficient phi, stationary variance 1) independent of iid
    /// exact-Pareto Z_n.
    StochVol { phi: f64 },
    /// Return times to zero of the simple symmetric random walk;
    /// tail index fixed at 1/2.
    SsrwExcursion,
}

/// Tail index alpha in (0,1) together with the step-law family that
/// realizes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    alpha: f64,
    #[serde(flatten)]
    family: Family,
}

impl TailModel {
    pub fn exact_pareto(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(TailModel { alpha, family: Family::ExactPareto })
    }

    pub fn stoch_vol(alpha: f64, phi: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(phi > -1.0 && phi < 1.0) {
            return Err(Error::domain(format!("phi must lie in (-1,1), got {phi}")));
        }
        Ok(TailModel { alpha, family: Family::StochVol { phi } })
    }

    /// SSRW excursion lengths; alpha is fixed to 1/2.
    pub fn ssrw_excursion() -> Self {
        TailModel { alpha: 0.5, family: Family::SsrwExcursion }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Step-law tail P(Y > x).
    ///
    /// Closed forms exist for every family: the stochastic-volatility
    /// tail follows from E[e^{a eta}; eta < c] = e^{a^2/2} Phi(c - a)
    /// for standard normal eta, and the excursion tail is
    /// P(T > 2n) = C(2n,n) 2^{-2n}.
    pub fn step_tail(&self, x: f64) -> f64 {
        match self.family {
            Family::ExactPareto => {
                if x <= 1.0 { 1.0 } else { x.powf(-self.alpha) }
            }
            Family::StochVol { .. } => {
                if x <= 0.0 {
                    return 1.0;
                }
                let a = self.alpha;
                let n = Normal::standard();
                let lx = x.ln();
                (1.0 - n.cdf(lx)) + x.powf(-a) * (a * a / 2.0).exp() * n.cdf(lx - a)
            }
            Family::SsrwExcursion => {
                if x < 2.0 {
                    return 1.0;
                }
                let m = (x / 2.0).floor();
                // ln C(2m, m) - 2m ln 2
                let l = ln_gamma(2.0 * m + 1.0) - 2.0 * ln_gamma(m + 1.0)
                    - 2.0 * m * std::f64::consts::LN_2;
                l.exp()
            }
        }
    }

    /// Normalizing function d(n) = d_{floor(n)}, pinned by
    /// n P(Y > d_n) = 1, with d_0 = 1.
    pub fn scaling_d(&self, n: f64) -> f64 {
        let n = n.floor();
        if n < 1.0 {
            return 1.0;
        }
        match self.family {
            Family::ExactPareto => n.powf(1.0 / self.alpha),
            _ => {
                // monotone bisection on the decreasing tail
                let target = 1.0 / n;
                let mut lo = 1.0;
                let mut hi = 2.0;
                while self.step_tail(hi) > target {
                    lo = hi;
                    hi *= 2.0;
                }
                bisect_decreasing(|x| self.step_tail(x), target, lo, hi)
            }
        }
    }

    /// Asymptotic inverse of `scaling_d`, regularly varying with
    /// index alpha.
    pub fn scaling_dtilde(&self, t: f64) -> f64 {
        match self.family {
            Family::ExactPareto => {
                if t <= 0.0 { 0.0 } else { t.powf(self.alpha) }
            }
            _ => {
                if t <= 1.0 {
                    return 0.0;
                }
                // smallest integer n with d(n) >= t
                let mut hi: u64 = 1;
                while self.scaling_d(hi as f64) < t {
                    hi *= 2;
                }
                let mut lo: u64 = hi / 2;
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if self.scaling_d(mid as f64) < t {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi as f64
            }
        }
    }

    /// The pair (d, d-tilde) as a value object.
    pub fn scaling_pair(&self) -> ScalingPair {
        ScalingPair { model: *self }
    }
}

/// The normalizing function and its asymptotic inverse, bundled.
#[derive(Debug, Clone, Copy)]
pub struct ScalingPair {
    model: TailModel,
}

impl ScalingPair {
    pub fn d(&self, n: f64) -> f64 {
        self.model.scaling_d(n)
    }

    pub fn dtilde(&self, t: f64) -> f64 {
        self.model.scaling_dtilde(t)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")))
    }
}

fn bisect_decreasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    // invariant: f(lo) >= target >= f(hi)
    while (hi - lo) > BISECT_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse-CDF draw from the exact Pareto law P(X > x) = x^{-alpha},
/// x >= 1, at the uniform coordinate `u`.
pub fn pareto_sample(alpha: f64, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("u must lie in (0,1), got {u}")));
    }
    Ok(u.powf(-1.0 / alpha))
}

/// A nondecreasing cadlag pure-jump path: value `values[i]` holds on
/// `[jump_times[i], jump_times[i+1])`, zero before the first jump.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    jump_times: Vec<f64>,
    values: Vec<f64>,
}

impl StepPath {
    pub fn new(jump_times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if jump_times.len() != values.len() {
            return Err(Error::domain("jump_times and values must have equal length"));
        }
        if jump_times.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("jump_times must be nondecreasing"));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("values must be nondecreasing"));
        }
        if values.first().is_some_and(|&v| v < 0.0) {
            return Err(Error::domain("values must be nonnegative"));
        }
        Ok(StepPath { jump_times, values })
    }

    /// Cumulative-sum path of (time, increment) pairs.
    pub fn from_increments(jump_times: Vec<f64>, increments: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        let values = increments
            .iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect();
        StepPath::new(jump_times, values)
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Path value at time `s` (right-continuous).
    pub fn value_at(&self, s: f64) -> f64 {
        match self.jump_times.partition_point(|&t| t <= s) {
            0 => 0.0,
            i => self.values[i - 1],
        }
    }

    pub fn supremum(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Right-continuous generalized inverse inf{s : path(s) > u}, found by
/// binary search over the stored jumps; ties resolve to the smallest
/// qualifying jump time.
pub fn generalized_inverse(path: &StepPath, u: f64) -> Result<f64> {
    if u < 0.0 {
        return Err(Error::domain(format!("level must be nonnegative, got {u}")));
    }
    let i = path.values.partition_point(|&v| v <= u);
    if i == path.values.len() {
        return Err(Error::LevelNeverCrossed { level: u, supremum: path.supremum() });
    }
    Ok(path.jump_times[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pareto_sample_quantiles() {
        assert_eq!(pareto_sample(0.5, 0.25).unwrap(), 16.0);
        // lower endpoint: u -> 1 gives samples approaching 1
        assert!((pareto_sample(0.5, 1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-9);
        assert!(pareto_sample(0.5, 1.5).is_err());
        assert!(pareto_sample(1.5, 0.5).is_err());
        assert!(pareto_sample(0.5, 0.0).is_err());
    }

    #[test]
    fn pareto_sample_monotone_in_u() {
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let u = i as f64 / 100.0;
            let x = pareto_sample(0.3, u).unwrap();
            assert!(x < prev);
            prev = x;
        }
    }

    #[test]
    fn scaling_d_exact_pareto() {
        let m = TailModel::exact_pareto(0.5).unwrap();
        assert_eq!(m.scaling_d(100.0), 10_000.0);
        assert_eq!(m.scaling_d(0.0), 1.0);
        // consistency: n P(Y > d_n x) = x^{-alpha} for x >= n^{-1/alpha}
        for n in [1.0_f64, 10.0, 1000.0] {
            let dn = m.scaling_d(n);
            for x in [1.0_f64, 2.0, 7.5] {
                let lhs = n * m.step_tail(dn * x);
                assert!((lhs - x.powf(-0.5)).abs() < 1e-12, "n={n} x={x} lhs={lhs}");
            }
        }
    }

    #[test]
    fn scaling_dtilde_exact_pareto() {
        let m = TailModel::exact_pareto(0.5).unwrap();
        assert_eq!(m.scaling_dtilde(1e6), 1e3);
        let dt = m.scaling_dtilde(100.0);
        assert!((dt - 10.0).abs() < 1e-12);
        assert!((m.scaling_d(dt) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn dtilde_of_d_round_trip_log_grid() {
        let m = TailModel::exact_pareto(0.5).unwrap();
        let mut n = 1.0_f64;
        while n <= 1e6 {
            let rt = m.scaling_dtilde(m.scaling_d(n));
            assert!((rt - n).abs() <= 1e-9 * n.max(1.0), "n={n} rt={rt}");
            n *= 10.0;
        }
    }

    #[test]
    fn stoch_vol_tail_matches_quadrature() {
        // crude Riemann quadrature over eta as an independent oracle
        let m = TailModel::stoch_vol(0.5, 0.7).unwrap();
        for x in [0.5_f64, 1.0, 3.0, 50.0] {
            let mut acc = 0.0;
            let h = 1e-4;
            let mut eta = -10.0_f64;
            while eta < 10.0 {
                let phi = (-eta * eta / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
                let z = x * (-eta).exp();
                let p = if z <= 1.0 { 1.0 } else { z.powf(-0.5) };
                acc += phi * p * h;
                eta += h;
            }
            assert!((m.step_tail(x) - acc).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn stoch_vol_scaling_solves_tail_equation() {
        let m = TailModel::stoch_vol(0.5, 0.7).unwrap();
        for n in [10.0_f64, 1000.0, 1e5] {
            let d = m.scaling_d(n);
            assert!((n * m.step_tail(d) - 1.0).abs() < 1e-4, "n={n}");
        }
    }

    #[test]
    fn ssrw_tail_exact_small_cases() {
        let m = TailModel::ssrw_excursion();
        // P(T > 2) = C(2,1)/4 = 1/2, P(T > 4) = C(4,2)/16 = 3/8
        assert!((m.step_tail(2.0) - 0.5).abs() < 1e-12);
        assert!((m.step_tail(4.0) - 0.375).abs() < 1e-12);
        assert_eq!(m.step_tail(1.9), 1.0);
    }

    #[test]
    fn ssrw_dtilde_inverts_d() {
        let m = TailModel::ssrw_excursion();
        let v = m.scaling_dtilde(1e4);
        let ratio = m.scaling_d(v) / 1e4;
        assert!((ratio - 1.0).abs() <= 0.05, "d(v)/t = {ratio}");
    }

    #[test]
    fn model_constructors_validate() {
        assert!(TailModel::exact_pareto(0.0).is_err());
        assert!(TailModel::exact_pareto(1.0).is_err());
        assert!(TailModel::stoch_vol(0.5, 1.0).is_err());
        assert_eq!(TailModel::ssrw_excursion().alpha(), 0.5);
    }

    #[test]
    fn generalized_inverse_step_examples() {
        // single jump to 2 at time 1
        let p = StepPath::new(vec![1.0], vec![2.0]).unwrap();
        assert_eq!(generalized_inverse(&p, 1.0).unwrap(), 1.0);
        // renewal partial sums [3,7,12] at times [1,2,3]
        let p = StepPath::new(vec![1.0, 2.0, 3.0], vec![3.0, 7.0, 12.0]).unwrap();
        assert_eq!(generalized_inverse(&p, 6.0).unwrap(), 2.0);
        assert!(matches!(
            generalized_inverse(&p, 12.0),
            Err(Error::LevelNeverCrossed { .. })
        ));
    }

    #[test]
    fn generalized_inverse_identity_path_on_grid() {
        // s(v) = v sampled on a fine grid; inverse at 3.7 recovers 3.7
        // up to the grid step
        let h = 1e-6;
        let grid: Vec<f64> = (0..5_000_000).step_by(100).map(|i| i as f64 * h).collect();
        let p = StepPath::new(grid.clone(), grid).unwrap();
        let v = generalized_inverse(&p, 3.7).unwrap();
        assert!((v - 3.7).abs() <= 100.0 * h, "v = {v}");
    }

    #[test]
    fn generalized_inverse_one_sided_inequalities() {
        let p = StepPath::new(vec![0.5, 1.5, 2.5], vec![1.0, 4.0, 9.0]).unwrap();
        for u in [0.0, 0.5, 1.0, 3.9, 4.0, 8.9] {
            let r = generalized_inverse(&p, u).unwrap();
            for dv in [0.1, 0.4] {
                assert!(p.value_at(r - dv) <= u, "u={u}");
                assert!(p.value_at(r + dv) > u, "u={u}");
            }
        }
    }

    #[test]
    fn generalized_inverse_nondecreasing_right_continuous() {
        let p = StepPath::new(vec![1.0, 2.0, 3.0], vec![3.0, 7.0, 12.0]).unwrap();
        let mut prev = 0.0;
        let mut u = 0.0;
        while u < 11.9 {
            let r = generalized_inverse(&p, u).unwrap();
            assert!(r >= prev);
            // right continuity: small increase of u keeps the result
            // unless a jump of the inverse sits in between
            let r2 = generalized_inverse(&p, u + 1e-12).unwrap();
            assert!(r2 >= r);
            prev = r;
            u += 0.1;
        }
    }

    #[test]
    fn step_path_rejects_bad_input() {
        assert!(StepPath::new(vec![1.0, 0.5], vec![1.0, 2.0]).is_err());
        assert!(StepPath::new(vec![0.5, 1.0], vec![2.0, 1.0]).is_err());
        assert!(StepPath::new(vec![0.5], vec![1.0, 2.0]).is_err());
        assert!(StepPath::new(vec![0.5], vec![-1.0]).is_err());
    }
}
