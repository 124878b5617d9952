#ifndef MEANDER_H
#define MEANDER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum MeanderStatus {
  Ok = 0,
  /**
   * A parameter lies outside its admissible range.
   */
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
  /**
   * A required pointer argument was null.
   */
  NullPointer = 11,
  /**
   * The library panicked internally; treat the handle as poisoned.
   */
  Internal = 12,
} MeanderStatus;

/**
 * Opaque deterministic RNG substream handle.
 */
typedef struct MeanderRng MeanderRng;

/**
 * Opaque step-distribution handle.
 */
typedef struct MeanderTailModel MeanderTailModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Exact Pareto steps: P(Y > x) = x^{-alpha} for x >= 1.
 */
enum MeanderStatus meander_tail_model_pareto(double alpha, struct MeanderTailModel **out);

/**
 * Stochastic-volatility steps exp(eta_n) Z_n with AR(1) log-volatility.
 */
enum MeanderStatus meander_tail_model_stoch_vol(double alpha,
                                                double phi,
                                                struct MeanderTailModel **out);

/**
 * Simple symmetric random walk excursion lengths (alpha = 1/2).
 */
enum MeanderStatus meander_tail_model_ssrw(struct MeanderTailModel **out);

/**
 * Release a model handle. Null is a no-op.
 */
void meander_tail_model_free(struct MeanderTailModel *model);

/**
 * Step tail P(Y > x).
 */
enum MeanderStatus meander_tail_model_tail(const struct MeanderTailModel *model,
                                           double x,
                                           double *out);

/**
 * Scaling sequence d(n) with n P(Y > d(n)) = 1.
 */
enum MeanderStatus meander_tail_model_scaling_d(const struct MeanderTailModel *model,
                                                double n,
                                                double *out);

/**
 * Asymptotic inverse of the scaling sequence.
 */
enum MeanderStatus meander_tail_model_scaling_dtilde(const struct MeanderTailModel *model,
                                                     double t,
                                                     double *out);

/**
 * Deterministic RNG substream for (master_seed, replicate). Never
 * fails; free with meander_rng_free.
 */
struct MeanderRng *meander_rng_new(uint64_t master_seed, uint64_t replicate);

/**
 * Release an RNG handle. Null is a no-op.
 */
void meander_rng_free(struct MeanderRng *rng);

/**
 * First passage of the step partial sums over level t, simulated from
 * the given substream. Outputs may individually be null to skip them.
 */
enum MeanderStatus meander_first_passage(const struct MeanderTailModel *model,
                                         uint64_t master_seed,
                                         uint64_t replicate,
                                         double t,
                                         uint64_t *out_tau,
                                         double *out_age,
                                         double *out_overshoot,
                                         double *out_scaled_passage);

/**
 * Stick-breaking weights U_i = xi_i prod_{j<i} (1 - xi_j) with
 * xi_i ~ Beta(1 - alpha, i alpha). Writes `count` weights into
 * `out_sticks` and the leftover mass into `out_residual`.
 */
enum MeanderStatus meander_stick_breaking(double alpha,
                                          uintptr_t count,
                                          struct MeanderRng *rng,
                                          double *out_sticks,
                                          double *out_residual);

/**
 * Generalized arcsine density q_alpha(u).
 */
enum MeanderStatus meander_arcsine_pdf(double alpha, double u, double *out);

/**
 * Generalized arcsine distribution function.
 */
enum MeanderStatus meander_arcsine_cdf(double alpha, double u, double *out);

/**
 * One Mittag–Leffler draw from the given substream.
 */
enum MeanderStatus meander_mittag_leffler_sample(double alpha, struct MeanderRng *rng, double *out);

/**
 * Fréchet distribution function exp(-x^{-alpha}).
 */
enum MeanderStatus meander_frechet_cdf(double alpha, double x, double *out);

/**
 * Two-sample Kolmogorov–Smirnov distance.
 */
enum MeanderStatus meander_ks_two_sample(const double *a,
                                         uintptr_t a_len,
                                         const double *b,
                                         uintptr_t b_len,
                                         double *out);

/**
 * Hill tail-index estimate from the top k order statistics.
 */
enum MeanderStatus meander_hill_estimator(const double *sample,
                                          uintptr_t len,
                                          uintptr_t k,
                                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEANDER_H */
