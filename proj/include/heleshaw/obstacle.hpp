#pragma once

#include <optional>

#include "heleshaw/baiocchi.hpp"
#include "heleshaw/sim.hpp"

namespace heleshaw {

/// Complementarity system u >= 0, Lap u <= f, u (Lap u - f) = 0 on the box,
/// Dirichlet data held fixed on the edge cells. f is the full right-hand side
/// on the positivity set and must satisfy f >= lambda > 1/2.
struct ObstacleProblem {
    Field f;
    Field boundary;  // values used on the box-edge cells only
};

/// Projected SOR with fixed cell ordering; iterates until the complementarity
/// residual max |min(u, f - Lap u)| falls below tol. Throws SolverError at
/// the sweep cap.
Field solve_obstacle(const ObstacleProblem& prob, double tol = 1e-9,
                     int max_sweeps = 100000);

double complementarity_residual(const Field& u, const Field& f);

/// Rescaled local solution u_r(x) = r^-2 u(center + r x) on the fixed 33^d
/// unit-ball lattice, with its fitted quadratic form and half-space model.
struct BlowupProfile {
    Eigen::Vector2d center = {0, 0};
    double r = 0.0;
    int dim = 2;
    Eigen::ArrayXd values;            // u_r at the lattice points
    Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();  // PSD-projected 1/2 x'Qx fit
    double fit_residual = 0.0;        // RMS of the quadratic fit
    double halfspace_residual = 0.0;  // RMS of the best 1/2 f (x.e)_+^2 fit
    Eigen::Vector2d e_best = {1, 0};
    double zero_density = 0.0;        // |{u_r = 0} in B_1| / |B_1| on the lattice
    double trace_ratio = 0.0;         // trace(Q) / f(center)
};

/// Lattice points of the unit ball used for all blowup fits (33 per axis).
const std::vector<Eigen::Vector2d>& unit_ball_lattice(int dim);

/// Blowup ladder at a free-boundary cell; radii must be descending and >= 4h.
std::vector<BlowupProfile> blowup(const Field& u, const Eigen::Vector2d& center,
                                  const std::vector<double>& radii,
                                  double f_at_center);

enum class PointType { Regular, Singular, Unresolved };

struct Classification {
    PointType label = PointType::Unresolved;
    Eigen::Vector2d nu = {0, 0};  // outward normal, regular points only
    int kernel_dim = 0;           // singular points only
    double density_at_min_r = 0.0;
};

/// Density dichotomy on the ladder: regular when the zero set is fat at some
/// radius and the half-space model wins; singular when the zero set is thin
/// at the two smallest radii and the quadratic wins; unresolved otherwise.
Classification classify(const std::vector<BlowupProfile>& profiles,
                        double f_at_center);

/// Monneau functional Xi(r) = r^-(d+3) int_{dB_r} (u - q)^2 on the ladder,
/// by 256-point circle quadrature (endpoints in 1D). q(x) = 1/2 x'Qx.
std::vector<std::pair<double, double>> monneau(const Field& u,
                                               const Eigen::Vector2d& center,
                                               const Eigen::Matrix2d& Q,
                                               const std::vector<double>& radii);

struct NormalReport {
    std::vector<Eigen::Vector2d> points;
    std::vector<Eigen::Vector2d> normals;
    std::vector<double> hit_times;
    double seminorm = 0.0;  // max |nu(x)-nu(y)| / |x-y|^{alpha/(1+alpha)}
    int skipped = 0;        // points not classified regular
};

/// Normals along the moving free boundary: each listed point is classified on
/// w(. , T(x)) (linear time interpolation between snapshots) and the pairwise
/// Holder quotient of the normal map is reported over pairs within pair_radius.
NormalReport normal_map(const std::vector<Snapshot>& snaps, const HittingField& T,
                        const std::vector<Eigen::Vector2d>& points,
                        const std::vector<double>& radii, double alpha,
                        double pair_radius);

struct NondegeneracyReport {
    double worst_ratio = 0.0;  // min over radii of sup_{B_r} u / ((lambda/2d) r^2)
    bool passed = false;
};

/// Quadratic nondegeneracy sup_{B_r} u >= (lambda/2d) r^2 (1 - eps) on the
/// ladder. The center must touch the positivity set; otherwise
/// std::invalid_argument.
NondegeneracyReport nondegeneracy_check(const Field& u, const Eigen::Vector2d& center,
                                        const std::vector<double>& radii,
                                        double lambda_min, double eps_nd = 0.1);

}  // namespace heleshaw
