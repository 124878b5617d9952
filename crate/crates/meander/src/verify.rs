//! Statistical machinery that turns the limit theorems into pass/fail
//! checks: KS statistics, chi-square goodness of fit against Poisson
//! counts, the Hill tail-index estimator and a runs estimator of the
//! extremal index.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Outcome of one statistical check. For distance-style tests
/// `passed = statistic <= threshold`; for p-value-style tests
/// `passed = statistic >= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub description: String,
    pub statistic: f64,
    pub threshold: f64,
    pub sample_sizes: Vec<usize>,
    pub passed: bool,
}

impl TestReport {
    /// Distance test: passes when the statistic is at most the
    /// threshold.
    pub fn distance(
        description: impl Into<String>,
        statistic: f64,
        threshold: f64,
        sample_sizes: Vec<usize>,
    ) -> Self {
        TestReport {
            description: description.into(),
            statistic,
            threshold,
            sample_sizes,
            passed: statistic <= threshold,
        }
    }

    /// Lower-bound test (p-values, extremal index): passes when the
    /// statistic is at least the threshold.
    pub fn lower_bound(
        description: impl Into<String>,
        statistic: f64,
        threshold: f64,
        sample_sizes: Vec<usize>,
    ) -> Self {
        TestReport {
            description: description.into(),
            statistic,
            threshold,
            sample_sizes,
            passed: statistic >= threshold,
        }
    }
}

fn sorted(sample: &[f64]) -> Vec<f64> {
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample value"));
    xs
}

/// One-sample KS statistic sup_x |F_n(x) - F(x)|, evaluated exactly at
/// the sample points using both one-sided gaps.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let xs = sorted(sample);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((f - i as f64 / n).abs());
    }
    Ok(d)
}

/// Two-sample KS statistic: sup distance between the empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let xs = sorted(a);
    let ys = sorted(b);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < xs.len() || j < ys.len() {
        let x = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < xs.len() && xs[i] == x {
            i += 1;
        }
        while j < ys.len() && ys[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Result of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub p_value: f64,
    pub dof: usize,
    pub cells: usize,
}

fn poisson_pmf(mean: f64, j: usize) -> f64 {
    let mut lp = -mean;
    for k in 1..=j {
        lp += mean.ln() - (k as f64).ln();
    }
    lp.exp()
}

/// Chi-square test of observed counts against Poisson(mean), with
/// cells {0, 1, ..., k, >= k+1} chosen so each expected cell mass is at
/// least 5.
pub fn chi_square_poisson(counts: &[u64], mean: f64) -> Result<ChiSquare> {
    if counts.is_empty() {
        return Err(Error::EmptySample);
    }
    if mean <= 0.0 {
        return Err(Error::domain(format!("mean must be positive, got {mean}")));
    }
    let n = counts.len() as f64;
    // grow k while both the next individual cell and the remaining tail
    // retain expected mass >= 5
    let mut k = 0usize;
    let mut head = poisson_pmf(mean, 0);
    if n * head < 5.0 || n * (1.0 - head) < 5.0 {
        return Err(Error::DegenerateBinning(format!(
            "sample of {n} too small for Poisson({mean}) binning"
        )));
    }
    loop {
        let next = poisson_pmf(mean, k + 1);
        if n * next >= 5.0 && n * (1.0 - head - next) >= 5.0 {
            head += next;
            k += 1;
        } else {
            break;
        }
    }
    let cells = k + 2;
    let mut observed = vec![0.0f64; cells];
    for &c in counts {
        let idx = (c as usize).min(k + 1);
        observed[idx] += 1.0;
    }
    let mut statistic = 0.0;
    let mut cum = 0.0;
    for (j, obs) in observed.iter().enumerate() {
        let p = if j <= k {
            let pj = poisson_pmf(mean, j);
            cum += pj;
            pj
        } else {
            1.0 - cum
        };
        let expected = n * p;
        statistic += (obs - expected) * (obs - expected) / expected;
    }
    let dof = cells - 1;
    let p_value = ChiSquared::new(dof as f64)
        .expect("positive dof")
        .sf(statistic);
    Ok(ChiSquare { statistic, p_value, dof, cells })
}

/// Chi-square goodness-of-fit test against arbitrary cell
/// probabilities. Cells with expected mass below 5 are pooled into
/// their right neighbour (the last cell pools leftwards).
pub fn chi_square_gof(observed: &[u64], expected_probs: &[f64]) -> Result<ChiSquare> {
    if observed.is_empty() {
        return Err(Error::EmptySample);
    }
    if observed.len() != expected_probs.len() {
        return Err(Error::domain(format!(
            "got {} observed cells but {} probabilities",
            observed.len(),
            expected_probs.len()
        )));
    }
    let total_p: f64 = expected_probs.iter().sum();
    if expected_probs.iter().any(|&p| p < 0.0) || (total_p - 1.0).abs() > 1e-6 {
        return Err(Error::domain(format!(
            "cell probabilities must be nonnegative and sum to 1, got {total_p}"
        )));
    }
    let n: f64 = observed.iter().map(|&o| o as f64).sum();
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0f64, 0.0f64);
    for (&o, &p) in observed.iter().zip(expected_probs) {
        acc.0 += o as f64;
        acc.1 += p;
        if n * acc.1 >= 5.0 {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => {
                return Err(Error::DegenerateBinning(format!(
                    "sample of {n} too small for any cell to reach expected mass 5"
                )));
            }
        }
    }
    if pooled.len() < 2 {
        return Err(Error::DegenerateBinning(
            "fewer than two cells after pooling".into(),
        ));
    }
    let statistic: f64 = pooled
        .iter()
        .map(|&(obs, p)| {
            let expected = n * p;
            (obs - expected) * (obs - expected) / expected
        })
        .sum();
    let cells = pooled.len();
    let dof = cells - 1;
    let p_value = ChiSquared::new(dof as f64)
        .expect("positive dof")
        .sf(statistic);
    Ok(ChiSquare { statistic, p_value, dof, cells })
}

/// Hill estimator of the tail index from the top k order statistics:
/// k / sum log(X_(i) / X_(k+1)).
pub fn hill_estimator(sample: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k >= sample.len() {
        return Err(Error::domain(format!(
            "k must satisfy 0 < k < {}, got {k}",
            sample.len()
        )));
    }
    if sample.iter().any(|&x| x <= 0.0) {
        return Err(Error::domain("sample must be strictly positive"));
    }
    let mut xs = sorted(sample);
    xs.reverse();
    let xk1 = xs[k];
    let log_sum: f64 = xs[..k].iter().map(|&x| (x / xk1).ln()).sum();
    Ok(k as f64 / log_sum)
}

/// Default order-statistic count for Hill: ceil(2 n^{2/3}) capped
/// at n/10.
pub fn default_hill_k(n: usize) -> usize {
    let k = (2.0 * (n as f64).powf(2.0 / 3.0)).ceil() as usize;
    k.min(n / 10).max(1)
}

/// Runs estimator of the extremal index theta (O'Brien form): among
/// exceedances of the threshold, the fraction followed by a
/// `block`-long run staying below it. Trailing windows truncate at the
/// end of the sample.
pub fn extremal_index_runs(sample: &[f64], threshold: f64, block: usize) -> Result<f64> {
    if block == 0 || block >= sample.len() {
        return Err(Error::domain(format!(
            "block must satisfy 0 < block < {}, got {block}",
            sample.len()
        )));
    }
    let mut exceedances = 0usize;
    let mut isolated = 0usize;
    for (i, &y) in sample.iter().enumerate() {
        if y > threshold {
            exceedances += 1;
            let end = (i + 1 + block).min(sample.len());
            if sample[i + 1..end].iter().all(|&z| z <= threshold) {
                isolated += 1;
            }
        }
    }
    if exceedances < 50 {
        return Err(Error::TooFewExceedances { found: exceedances, required: 50 });
    }
    Ok(isolated as f64 / exceedances as f64)
}
