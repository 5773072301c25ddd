#pragma once

#include "heleshaw/sim.hpp"

namespace heleshaw {

/// Ascending gamma ladder sharing one initial-data descriptor and horizon.
struct GammaSweep {
    std::vector<double> gammas;  // >= 3 values, each >= 2, strictly increasing
    double tau = 0.5;
};

/// One completed run per gamma, matched snapshot times. The initial state for
/// each member comes from `init_for_gamma` (the shared descriptor realized at
/// that gamma). Members run concurrently on up to `threads` workers.
std::vector<SimRun> run_sweep(const GammaSweep& sweep, const SimConfig& base,
                              const std::function<SimState(double)>& init_for_gamma,
                              int threads = 1);

struct AbMoment {
    double b = 0.0;
    double value = 0.0;  // space-time integral of (b u_+ - 1) e^{b u_+} + 1
};

/// Midpoint-rule moment over the run's stored u_+ samples. Throws
/// std::domain_error if b u_+ exceeds 700 anywhere (b too large for the run).
AbMoment ab_moment(const SimRun& run, double b);

/// Largest b in the dyadic scan {1, 1/2, 1/4, ...} at which no run overflows;
/// falls back to 2^-20. Throws std::invalid_argument for an empty list.
double calibrate_b(const std::vector<const SimRun*>& runs);

/// L1 distance between the final densities of two runs on the same grid.
double l1_distance_final(const SimRun& a, const SimRun& b);

}  // namespace heleshaw
