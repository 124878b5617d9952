//! Limit laws: stick-breaking Pitman–Yor samples, the generalized
//! arcsine density and CDF, a Mittag–Leffler sampler, the Fréchet CDF,
//! and the joint age–overshoot density.

use std::f64::consts::PI;

use rand::RngExt;
use rand_distr::{Distribution, Gamma};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::partition::RankedPartition;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")))
    }
}

/// Beta(a, b) variate as a ratio of two Gamma variates; valid for
/// shapes below 1, which both stick-breaking shapes can be.
pub fn beta_sample<R: RngExt>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::domain(format!("beta shapes must be positive, got ({a}, {b})")));
    }
    let ga = Gamma::new(a, 1.0).expect("valid gamma shape").sample(rng);
    let gb = Gamma::new(b, 1.0).expect("valid gamma shape").sample(rng);
    Ok(ga / (ga + gb))
}

/// A stick-breaking prefix in size-biased order, with the unbroken
/// residual mass.
#[derive(Debug, Clone, PartialEq)]
pub struct StickSample {
    alpha: f64,
    sticks: Vec<f64>,
    residual: f64,
}

impl StickSample {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// U_1, U_2, ... in size-biased order.
    pub fn sticks(&self) -> &[f64] {
        &self.sticks
    }

    /// 1 - sum of sticks; never redistributed, always reported.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Sticks sorted descending, as a partition of total mass 1 (the
    /// residual stays outside the component list).
    pub fn ranked(&self) -> RankedPartition {
        RankedPartition::from_parts(self.sticks.clone(), None, 1.0)
            .expect("sticks are strictly positive")
    }
}

/// Perman's stick-breaking representation of Pitman–Yor(alpha):
/// xi_i ~ Beta(1-alpha, i alpha) independent,
/// U_i = xi_i prod_{j<i} (1 - xi_j).
pub fn stick_breaking<R: RngExt>(alpha: f64, n: usize, rng: &mut R) -> Result<StickSample> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::domain("stick count must be at least 1"));
    }
    let mut sticks = Vec::with_capacity(n);
    let mut remaining = 1.0_f64;
    for i in 1..=n {
        let xi = beta_sample(1.0 - alpha, i as f64 * alpha, rng)?;
        sticks.push(xi * remaining);
        remaining *= 1.0 - xi;
    }
    Ok(StickSample { alpha, sticks, residual: remaining })
}

/// Generalized arcsine density
/// q_alpha(u) = (sin(pi alpha) / pi) u^{-alpha} (1-u)^{alpha-1}.
pub fn arcsine_pdf(alpha: f64, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("u must lie in (0,1), got {u}")));
    }
    Ok((PI * alpha).sin() / PI * u.powf(-alpha) * (1.0 - u).powf(alpha - 1.0))
}

/// Generalized arcsine CDF: the regularized incomplete beta
/// I_u(1-alpha, alpha); equals (2/pi) asin(sqrt(u)) at alpha = 1/2.
pub fn arcsine_cdf(alpha: f64, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("u must lie in [0,1], got {u}")));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    if u == 1.0 {
        return Ok(1.0);
    }
    Ok(beta_reg(1.0 - alpha, alpha, u))
}

/// Standard positive alpha-stable variate with Laplace transform
/// exp(-lambda^alpha), via Zolotarev's integral representation
/// (Kanter's method): with U uniform on (0, pi) and E unit exponential,
/// sigma = (B(U)/E)^{(1-alpha)/alpha} where
/// B(u) = [sin(alpha u)^alpha sin((1-alpha)u)^{1-alpha} / sin u]^{1/(1-alpha)}.
pub fn positive_stable_sample<R: RngExt>(alpha: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    let u = PI * rng.random::<f64>().max(f64::MIN_POSITIVE);
    let e: f64 = -(1.0 - rng.random::<f64>()).ln();
    let b = ((alpha * u).sin().powf(alpha) * ((1.0 - alpha) * u).sin().powf(1.0 - alpha)
        / u.sin())
    .powf(1.0 / (1.0 - alpha));
    Ok((b / e).powf((1.0 - alpha) / alpha))
}

/// Mittag–Leffler variate: the law of the inverse local time L(1) of
/// the subordinator with Levy tail mu(x, inf) = x^{-alpha}, whose
/// Laplace exponent is Gamma(1-alpha) lambda^alpha. Returned as
/// Gamma(1-alpha)^{-1} sigma^{-alpha} for a standard positive stable
/// sigma.
pub fn mittag_leffler_sample<R: RngExt>(alpha: f64, rng: &mut R) -> Result<f64> {
    let sigma = positive_stable_sample(alpha, rng)?;
    Ok(sigma.powf(-alpha) / gamma(1.0 - alpha))
}

/// n-th moment of the Mittag–Leffler law above:
/// n! / (Gamma(1-alpha)^n Gamma(1 + n alpha)).
pub fn mittag_leffler_moment(alpha: f64, n: u32) -> Result<f64> {
    check_alpha(alpha)?;
    let nf = (1..=n).map(|k| k as f64).product::<f64>();
    Ok(nf / (gamma(1.0 - alpha).powi(n as i32) * gamma(1.0 + n as f64 * alpha)))
}

/// Standard Frechet CDF exp(-x^{-alpha}).
pub fn frechet_cdf(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if x <= 0.0 {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    Ok((-x.powf(-alpha)).exp())
}

/// Joint density of the limiting (age, overshoot) pair:
/// f(a, b) = (alpha sin(pi alpha) / pi) (1-a)^{alpha-1} (a+b)^{-alpha-1}.
///
/// Its b-marginal collapses to the arcsine density; the quadrature
/// check for that identity lives in the test suite.
pub fn joint_age_overshoot_pdf(alpha: f64, a: f64, b: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain(format!("age must lie in (0,1), got {a}")));
    }
    if b <= 0.0 {
        return Err(Error::domain(format!("overshoot must be positive, got {b}")));
    }
    Ok(alpha * (PI * alpha).sin() / PI
        * (1.0 - a).powf(alpha - 1.0)
        * (a + b).powf(-alpha - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    /// Adaptive Simpson quadrature; test-side oracle only.
    fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn rec(
            f: &impl Fn(f64) -> f64,
            a: f64,
            b: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, m);
            let right = simpson(f, m, b);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, left, 0.5 * tol, depth - 1)
                    + rec(f, m, b, right, 0.5 * tol, depth - 1)
            }
        }
        rec(f, a, b, simpson(f, a, b), tol, depth)
    }

    #[test]
    fn arcsine_pdf_explicit_values() {
        let v = arcsine_pdf(0.5, 0.5).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-12);
        // symmetry at alpha = 1/2
        let a = arcsine_pdf(0.5, 0.2).unwrap();
        let b = arcsine_pdf(0.5, 0.8).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((a - 1.0 / (PI * (0.2f64 * 0.8).sqrt())).abs() < 1e-9);
        assert!(arcsine_pdf(0.5, 0.0).is_err());
        assert!(arcsine_pdf(0.5, 1.0).is_err());
    }

    #[test]
    fn arcsine_pdf_integrates_to_one() {
        // endpoint singularities removed by the substitution
        // u = v^{1/(1-alpha)} on the left and symmetry-free adaptive
        // quadrature on a split domain
        for alpha in [0.2, 0.5, 0.8] {
            // integrate q_alpha via I = I_{[0,1/2]} + I_{[1/2,1]} with
            // power substitutions at both singular endpoints:
            // left: u = v^{1/(1-alpha)}? the singularity at 0 has
            // exponent -alpha, so substitute u = v^{1/(1-alpha)}
            let left = {
                let g = |v: f64| {
                    let u = v.powf(1.0 / (1.0 - alpha));
                    arcsine_pdf(alpha, u).unwrap() * u / (v * (1.0 - alpha))
                };
                adaptive_simpson(&g, 1e-12, 0.5f64.powf(1.0 - alpha), 1e-10, 40)
            };
            let right = {
                // near 1: (1-u)^{alpha-1}; substitute 1-u = w^{1/alpha},
                // where the transformed integrand tends to the finite
                // limit sin(pi alpha) / (pi alpha)
                let g = |w: f64| {
                    let om_u = w.powf(1.0 / alpha);
                    let u = 1.0 - om_u;
                    if u < 1.0 {
                        arcsine_pdf(alpha, u).unwrap() * om_u / (w * alpha)
                    } else {
                        (PI * alpha).sin() / (PI * alpha)
                    }
                };
                adaptive_simpson(&g, 1e-12, 0.5f64.powf(alpha), 1e-10, 40)
            };
            let total = left + right;
            assert!((total - 1.0).abs() < 1e-8, "alpha={alpha} total={total}");
        }
    }

    #[test]
    fn arcsine_cdf_explicit_values() {
        assert!((arcsine_cdf(0.5, 0.5).unwrap() - 0.5).abs() < 1e-12);
        for alpha in [0.2, 0.5, 0.8] {
            assert_eq!(arcsine_cdf(alpha, 0.0).unwrap(), 0.0);
            assert_eq!(arcsine_cdf(alpha, 1.0).unwrap(), 1.0);
        }
        // closed form at alpha = 1/2
        for u in [0.1, 0.3, 0.7] {
            let expect = 2.0 / PI * (u as f64).sqrt().asin();
            assert!((arcsine_cdf(0.5, u).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn arcsine_cdf_matches_quadrature() {
        // alpha = 0.3, u = 0.4: integrate the pdf with the left-end
        // substitution u = v^{1/(1-alpha)}
        let alpha = 0.3;
        let g = |v: f64| {
            let u = v.powf(1.0 / (1.0 - alpha));
            arcsine_pdf(alpha, u).unwrap() * u / (v * (1.0 - alpha))
        };
        let quad = adaptive_simpson(&g, 1e-13, 0.4f64.powf(1.0 - alpha), 1e-10, 40);
        let cdf = arcsine_cdf(alpha, 0.4).unwrap();
        assert!((cdf - quad).abs() < 1e-8, "cdf={cdf} quad={quad}");
    }

    #[test]
    fn arcsine_cdf_nondecreasing_and_matches_pdf_derivative() {
        let h = 1e-6;
        for alpha in [0.3, 0.5, 0.7] {
            let mut prev = 0.0;
            for i in 1..20 {
                let u = i as f64 / 20.0;
                let c = arcsine_cdf(alpha, u).unwrap();
                assert!(c >= prev);
                prev = c;
                let fd = (arcsine_cdf(alpha, u + h).unwrap()
                    - arcsine_cdf(alpha, u - h).unwrap())
                    / (2.0 * h);
                let pdf = arcsine_pdf(alpha, u).unwrap();
                assert!((fd - pdf).abs() / pdf <= 1e-4, "alpha={alpha} u={u}");
            }
        }
    }

    #[test]
    fn stick_breaking_structure() {
        let mut rng = substream(11, 0);
        let s = stick_breaking(0.5, 50, &mut rng).unwrap();
        assert_eq!(s.sticks().len(), 50);
        assert!(s.sticks().iter().all(|&u| u > 0.0 && u < 1.0));
        assert!(s.residual() > 0.0);
        let total: f64 = s.sticks().iter().sum::<f64>() + s.residual();
        assert!((total - 1.0).abs() <= 1e-12);
        // ranked output is nonincreasing
        let ranked = s.ranked();
        assert!(ranked.components().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn stick_breaking_rejects_bad_input() {
        let mut rng = substream(11, 1);
        assert!(stick_breaking(1.5, 10, &mut rng).is_err());
        assert!(stick_breaking(0.5, 0, &mut rng).is_err());
    }

    #[test]
    fn first_stick_mean_is_one_minus_alpha() {
        let mut rng = substream(12, 0);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += stick_breaking(0.5, 1, &mut rng).unwrap().sticks()[0];
        }
        let mean = acc / n as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean = {mean}");
    }

    #[test]
    fn frechet_cdf_values() {
        assert!((frechet_cdf(0.5, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
        assert!((frechet_cdf(0.5, 1e12).unwrap() - 1.0).abs() < 1e-5);
        assert!(frechet_cdf(0.5, 0.0).is_err());
        assert!(frechet_cdf(0.5, -1.0).is_err());
    }

    #[test]
    fn mittag_leffler_samples_positive() {
        let mut rng = substream(13, 0);
        for _ in 0..1000 {
            assert!(mittag_leffler_sample(0.5, &mut rng).unwrap() > 0.0);
        }
    }

    #[test]
    fn mittag_leffler_moment_formula() {
        // E[L] at alpha = 1/2 is 1/(Gamma(1/2) Gamma(3/2)) = 2/pi
        let m1 = mittag_leffler_moment(0.5, 1).unwrap();
        assert!((m1 - 2.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn joint_pdf_positive_on_grid() {
        for i in 1..10 {
            for j in 1..10 {
                let a = i as f64 / 10.0;
                let b = j as f64;
                assert!(joint_age_overshoot_pdf(0.5, a, b).unwrap() > 0.0);
            }
        }
        assert!(joint_age_overshoot_pdf(0.5, 0.0, 1.0).is_err());
        assert!(joint_age_overshoot_pdf(0.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn joint_pdf_marginalizes_to_arcsine() {
        // integrate over b via b = w/(1-w); integrand decays like
        // (1-w)^{alpha-1} near w = 1, handled by the substitution
        // 1 - w = v^{1/alpha}
        let alpha = 0.5;
        let a = 0.3;
        let f = |b: f64| joint_age_overshoot_pdf(alpha, a, b).unwrap();
        // split: b in (0, 1] directly, b in [1, inf) via b = 1/y
        let head = adaptive_simpson(&f, 1e-12, 1.0, 1e-10, 40);
        let g = |y: f64| f(1.0 / y) / (y * y);
        // g ~ y^{alpha-1} near 0; substitute y = v^{1/alpha}
        let tail = {
            let h = |v: f64| {
                let y = v.powf(1.0 / alpha);
                g(y) * y / (v * alpha)
            };
            adaptive_simpson(&h, 1e-13, 1.0, 1e-10, 40)
        };
        let marginal = head + tail;
        let expect = arcsine_pdf(alpha, a).unwrap();
        assert!(
            (marginal - expect).abs() < 1e-6,
            "marginal={marginal} arcsine={expect}"
        );
    }
}
