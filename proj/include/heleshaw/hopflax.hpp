#pragma once

#include "heleshaw/sim.hpp"

namespace heleshaw {

struct HopfLaxParams {
    double b = 1.0;      // from calibrate_b
    double C = 1.0;      // envelope constant, scanned dyadically
    double theta = 1.0;  // lambda-schedule offset
    int pair_count = 10000;
};

/// lambda(s) = theta + s^{-1/2}, decreasing in s. Throws std::domain_error
/// at s <= 0.
double lambda_schedule(double theta, double s);

/// Lambda(t) = (5/4b)(theta t + 2 sqrt t) + (t/b) log(1 + C/t), the closed
/// form of (5/4b) int_0^t lambda + (t/b) log(1 + C/t) under the schedule.
double big_lambda(const HopfLaxParams& params, double t);

/// Adaptive Simpson quadrature of int_0^T e^{Lambda(s)} ds to 1e-8.
double integral_exp_lambda(const HopfLaxParams& params, double T);

struct HopfLaxPair {
    double t0 = 0, t1 = 0, dist = 0, lhs = 0, rhs = 0, violation = 0;  // (lhs-rhs)/rhs
};

struct HopfLaxResult {
    double violated_fraction = 0.0;  // pairs with violation > rel_tol
    double max_violation = 0.0;      // max of (lhs-rhs)/rhs
    double rel_tol = 0.05;
    std::vector<HopfLaxPair> pairs;
};

/// Samples pair_count random space-time pairs (x0,t0),(x1,t1), t0 < t1, from
/// the stored snapshots and tests
///   p(x0,t0) <= e^{L(dt)} ( p(x1,t1) + |x1-x0|^2 / (4 int_0^dt e^L)
///                           + C dt^{7/10} e^{-lambda(dt)} ).
/// Pair k draws from an RNG seeded by hash(seed, k); any thread count gives
/// identical output.
HopfLaxResult verify_hopf_lax(const SimRun& run, const HopfLaxParams& params,
                              std::uint64_t seed = 1, int threads = 1);

/// Smallest C in {1, 2, 4, ..., 2^10} whose violated fraction is <= 1%;
/// returns the passing C (or 2^10 if none pass) and its result.
std::pair<double, HopfLaxResult> scan_envelope_constant(const SimRun& run,
                                                        HopfLaxParams params,
                                                        std::uint64_t seed = 1,
                                                        int threads = 1);

/// Weighted negative part of r = dp/dt - |grad p|^2 + u_+ p over the run,
/// tested against a fixed smooth interior bump in space and time:
/// returns  int w r_- / int w  (so the value is a weighted mean).
double hjb_residual(const SimRun& run);

}  // namespace heleshaw
