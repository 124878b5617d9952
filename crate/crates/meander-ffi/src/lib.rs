//! C ABI for the meander crate: opaque handles, status codes, no
//! panics across the boundary. The header is generated into
//! `include/meander.h` at build time.

use std::panic::{AssertUnwindSafe, catch_unwind};

use meander::renewal::{self, SeedInfo};
use meander::tailcore::TailModel;
use meander::{Error, pitmanyor, verify};
use rand_chacha::ChaCha12Rng;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanderStatus {
    Ok = 0,
    /// A parameter lies outside its admissible range.
    Domain = 1,
    LevelNeverCrossed = 2,
    InsufficientSteps = 3,
    HorizonTooShort = 4,
    BeyondHorizon = 5,
    EmptySample = 6,
    TooFewExceedances = 7,
    DegenerateBinning = 8,
    Config = 9,
    Io = 10,
    /// A required pointer argument was null.
    NullPointer = 11,
    /// The library panicked internally; treat the handle as poisoned.
    Internal = 12,
}

impl From<&Error> for MeanderStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => MeanderStatus::Domain,
            Error::LevelNeverCrossed { .. } => MeanderStatus::LevelNeverCrossed,
            Error::InsufficientSteps { .. } => MeanderStatus::InsufficientSteps,
            Error::HorizonTooShort { .. } => MeanderStatus::HorizonTooShort,
            Error::BeyondHorizon { .. } => MeanderStatus::BeyondHorizon,
            Error::EmptySample => MeanderStatus::EmptySample,
            Error::TooFewExceedances { .. } => MeanderStatus::TooFewExceedances,
            Error::DegenerateBinning(_) => MeanderStatus::DegenerateBinning,
            Error::Config(_) => MeanderStatus::Config,
            Error::Io(_) => MeanderStatus::Io,
        }
    }
}

/// Opaque step-distribution handle.
pub struct MeanderTailModel(TailModel);

/// Opaque deterministic RNG substream handle.
pub struct MeanderRng(ChaCha12Rng);

fn guarded(f: impl FnOnce() -> MeanderStatus) -> MeanderStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(MeanderStatus::Internal)
}

fn write_out<T>(out: *mut T, value: T) -> MeanderStatus {
    if out.is_null() {
        return MeanderStatus::NullPointer;
    }
    unsafe { out.write(value) };
    MeanderStatus::Ok
}

fn model_out(
    out: *mut *mut MeanderTailModel,
    result: Result<TailModel, Error>,
) -> MeanderStatus {
    match result {
        Ok(m) => write_out(out, Box::into_raw(Box::new(MeanderTailModel(m)))),
        Err(e) => MeanderStatus::from(&e),
    }
}

/// Exact Pareto steps: P(Y > x) = x^{-alpha} for x >= 1.
#[unsafe(no_mangle)]
pub extern "C" fn meander_tail_model_pareto(
    alpha: f64,
    out: *mut *mut MeanderTailModel,
) -> MeanderStatus {
    guarded(|| model_out(out, TailModel::exact_pareto(alpha)))
}

/// Stochastic-volatility steps exp(eta_n) Z_n with AR(1) log-volatility.
#[unsafe(no_mangle)]
pub extern "C" fn meander_tail_model_stoch_vol(
    alpha: f64,
    phi: f64,
    out: *mut *mut MeanderTailModel,
) -> MeanderStatus {
    guarded(|| model_out(out, TailModel::stoch_vol(alpha, phi)))
}

/// Simple symmetric random walk excursion lengths (alpha = 1/2).
#[unsafe(no_mangle)]
pub extern "C" fn meander_tail_model_ssrw(out: *mut *mut MeanderTailModel) -> MeanderStatus {
    guarded(|| model_out(out, Ok(TailModel::ssrw_excursion())))
}

/// Release a model handle. Null is a no-op.
#[unsafe(no_mangle)]
pub extern "C" fn meander_tail_model_free(model: *mut MeanderTailModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Step tail P(Y > x).
#[unsafe(no_mangle)]
pub extern "C" fn meander_tail_model_tail(
    model: *const MeanderTailModel,
    x: f64,
    out: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if model.is_null() {
            return MeanderStatus::NullPointer;
        }
        let m = unsafe { &(*model).0 };
        write_out(out, m.step_tail(x))
    })
}

/// Scaling sequence d(n) with n P(Y > d(n)) = 1.
#[unsafe(no_mangle)]
pub extern "C" fn meander_tail_model_scaling_d(
    model: *const MeanderTailModel,
    n: f64,
    out: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if model.is_null() {
            return MeanderStatus::NullPointer;
        }
        let m = unsafe { &(*model).0 };
        write_out(out, m.scaling_d(n))
    })
}

/// Asymptotic inverse of the scaling sequence.
#[unsafe(no_mangle)]
pub extern "C" fn meander_tail_model_scaling_dtilde(
    model: *const MeanderTailModel,
    t: f64,
    out: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if model.is_null() {
            return MeanderStatus::NullPointer;
        }
        let m = unsafe { &(*model).0 };
        write_out(out, m.scaling_dtilde(t))
    })
}

/// Deterministic RNG substream for (master_seed, replicate). Never
/// fails; free with meander_rng_free.
#[unsafe(no_mangle)]
pub extern "C" fn meander_rng_new(master_seed: u64, replicate: u64) -> *mut MeanderRng {
    Box::into_raw(Box::new(MeanderRng(meander::rng::substream(master_seed, replicate))))
}

/// Release an RNG handle. Null is a no-op.
#[unsafe(no_mangle)]
pub extern "C" fn meander_rng_free(rng: *mut MeanderRng) {
    if !rng.is_null() {
        drop(unsafe { Box::from_raw(rng) });
    }
}

/// First passage of the step partial sums over level t, simulated from
/// the given substream. Outputs may individually be null to skip them.
#[unsafe(no_mangle)]
pub extern "C" fn meander_first_passage(
    model: *const MeanderTailModel,
    master_seed: u64,
    replicate: u64,
    t: f64,
    out_tau: *mut u64,
    out_age: *mut f64,
    out_overshoot: *mut f64,
    out_scaled_passage: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if model.is_null() {
            return MeanderStatus::NullPointer;
        }
        let m = unsafe { (*model).0 };
        match renewal::first_passage_lazy(m, SeedInfo::new(master_seed, replicate), t) {
            Ok(p) => {
                if !out_tau.is_null() {
                    unsafe { out_tau.write(p.tau) };
                }
                if !out_age.is_null() {
                    unsafe { out_age.write(p.age) };
                }
                if !out_overshoot.is_null() {
                    unsafe { out_overshoot.write(p.overshoot) };
                }
                if !out_scaled_passage.is_null() {
                    unsafe { out_scaled_passage.write(p.scaled_passage) };
                }
                MeanderStatus::Ok
            }
            Err(e) => MeanderStatus::from(&e),
        }
    })
}

/// Stick-breaking weights U_i = xi_i prod_{j<i} (1 - xi_j) with
/// xi_i ~ Beta(1 - alpha, i alpha). Writes `count` weights into
/// `out_sticks` and the leftover mass into `out_residual`.
#[unsafe(no_mangle)]
pub extern "C" fn meander_stick_breaking(
    alpha: f64,
    count: usize,
    rng: *mut MeanderRng,
    out_sticks: *mut f64,
    out_residual: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if rng.is_null() || (out_sticks.is_null() && count > 0) {
            return MeanderStatus::NullPointer;
        }
        let r = unsafe { &mut (*rng).0 };
        match pitmanyor::stick_breaking(alpha, count, r) {
            Ok(s) => {
                unsafe {
                    std::ptr::copy_nonoverlapping(s.sticks().as_ptr(), out_sticks, count);
                }
                if !out_residual.is_null() {
                    unsafe { out_residual.write(s.residual()) };
                }
                MeanderStatus::Ok
            }
            Err(e) => MeanderStatus::from(&e),
        }
    })
}

/// Generalized arcsine density q_alpha(u).
#[unsafe(no_mangle)]
pub extern "C" fn meander_arcsine_pdf(alpha: f64, u: f64, out: *mut f64) -> MeanderStatus {
    guarded(|| match pitmanyor::arcsine_pdf(alpha, u) {
        Ok(v) => write_out(out, v),
        Err(e) => MeanderStatus::from(&e),
    })
}

/// Generalized arcsine distribution function.
#[unsafe(no_mangle)]
pub extern "C" fn meander_arcsine_cdf(alpha: f64, u: f64, out: *mut f64) -> MeanderStatus {
    guarded(|| match pitmanyor::arcsine_cdf(alpha, u) {
        Ok(v) => write_out(out, v),
        Err(e) => MeanderStatus::from(&e),
    })
}

/// One Mittag–Leffler draw from the given substream.
#[unsafe(no_mangle)]
pub extern "C" fn meander_mittag_leffler_sample(
    alpha: f64,
    rng: *mut MeanderRng,
    out: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if rng.is_null() {
            return MeanderStatus::NullPointer;
        }
        let r = unsafe { &mut (*rng).0 };
        match pitmanyor::mittag_leffler_sample(alpha, r) {
            Ok(v) => write_out(out, v),
            Err(e) => MeanderStatus::from(&e),
        }
    })
}

/// Fréchet distribution function exp(-x^{-alpha}).
#[unsafe(no_mangle)]
pub extern "C" fn meander_frechet_cdf(alpha: f64, x: f64, out: *mut f64) -> MeanderStatus {
    guarded(|| match pitmanyor::frechet_cdf(alpha, x) {
        Ok(v) => write_out(out, v),
        Err(e) => MeanderStatus::from(&e),
    })
}

/// Two-sample Kolmogorov–Smirnov distance.
#[unsafe(no_mangle)]
pub extern "C" fn meander_ks_two_sample(
    a: *const f64,
    a_len: usize,
    b: *const f64,
    b_len: usize,
    out: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if (a.is_null() && a_len > 0) || (b.is_null() && b_len > 0) {
            return MeanderStatus::NullPointer;
        }
        let sa = unsafe { std::slice::from_raw_parts(a, a_len) };
        let sb = unsafe { std::slice::from_raw_parts(b, b_len) };
        match verify::ks_two_sample(sa, sb) {
            Ok(v) => write_out(out, v),
            Err(e) => MeanderStatus::from(&e),
        }
    })
}

/// Hill tail-index estimate from the top k order statistics.
#[unsafe(no_mangle)]
pub extern "C" fn meander_hill_estimator(
    sample: *const f64,
    len: usize,
    k: usize,
    out: *mut f64,
) -> MeanderStatus {
    guarded(|| {
        if sample.is_null() && len > 0 {
            return MeanderStatus::NullPointer;
        }
        let s = unsafe { std::slice::from_raw_parts(sample, len) };
        match verify::hill_estimator(s, k) {
            Ok(v) => write_out(out, v),
            Err(e) => MeanderStatus::from(&e),
        }
    })
}
