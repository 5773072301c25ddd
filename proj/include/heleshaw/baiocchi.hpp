#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "heleshaw/pme.hpp"

namespace heleshaw {

/// Time-integrated pressure w = int p ds and source history eta = int rho n ds,
/// advanced by trapezoidal accumulation over a strictly increasing state stream.
class BaiocchiAccumulator {
public:
    explicit BaiocchiAccumulator(const Grid& g)
        : w_(g), eta_(g), prev_p_(g), prev_rhon_(g) {}

    void start(const SimState& s0) {
        t_ = s0.time;
        prev_p_ = s0.p;
        prev_rhon_.values = s0.rho.values * s0.n.values;
        started_ = true;
    }

    void add(const SimState& s) {
        if (!started_) { start(s); return; }
        if (!(s.time > t_))
            throw std::invalid_argument("baiocchi: states must arrive in increasing time order");
        const double half_dt = 0.5 * (s.time - t_);
        w_.values += half_dt * (prev_p_.values + s.p.values);
        Field rhon(s.rho.grid);
        rhon.values = s.rho.values * s.n.values;
        eta_.values += half_dt * (prev_rhon_.values + rhon.values);
        prev_p_ = s.p;
        prev_rhon_ = rhon;
        t_ = s.time;
    }

    double time() const { return t_; }
    const Field& w() const { return w_; }
    const Field& eta() const { return eta_; }

private:
    Field w_, eta_, prev_p_, prev_rhon_;
    double t_ = 0.0;
    bool started_ = false;
};

/// Per-cell first time with w > w_min, +infinity where never reached.
struct HittingField {
    Grid grid;
    Eigen::ArrayXd T;
    double w_min = 0.0;
};

struct WSnapshot {
    double t = 0.0;
    Field w;
};

/// First-crossing times with linear interpolation between stored snapshots.
/// w_min <= 0 selects the default 10 eps max(w).
HittingField hitting_time(const std::vector<WSnapshot>& history, double w_min = 0.0);

struct ObstacleResidual {
    double interior = 0.0;  // over cells farther than 2h from the boundary of {w>0}
    double global = 0.0;    // over all cells
};

/// ||Lap w - (rho_t - rho_0 - eta)||_inf, the elliptic identity the
/// accumulated transform must satisfy at each fixed time.
ObstacleResidual obstacle_residual(const Field& w, const Field& eta,
                                   const Field& rho0, const Field& rho_t,
                                   double w_min = 0.0);

/// eta recomputed as int_{T(x)}^t n(x,s) ds from the hitting time and the
/// nutrient history; throws std::invalid_argument when the history does not
/// cover [min T, t].
Field eta_from_T(const HittingField& T,
                 const std::vector<std::pair<double, Field>>& n_history, double t);

struct HolderFit {
    double alpha = 0.0;
    double residual = 0.0;                          // RMS of the log-log fit
    std::vector<std::pair<double, double>> points;  // (R, S(R))
};

/// Fits the slope of log S(R) against log R, where
/// S(R) = max over B_R(x1) of (T(x1) - T(y))_+ .
/// Throws std::domain_error when S vanishes on the whole ladder.
HolderFit holder_exponent(const HittingField& T, const Eigen::Vector2d& x1,
                          const std::vector<double>& radii);

/// Cells in the symmetric difference {rho > threshold} vs {w > w_min},
/// compared against band_cells_per_boundary_cell * (boundary cell count).
ReportEntry patch_agreement(const Field& w, const Field& rho, double threshold,
                            double w_min, double band_cells_per_boundary_cell = 32.0);

}  // namespace heleshaw
