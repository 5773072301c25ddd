#include "heleshaw/obstacle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace heleshaw {

Field solve_obstacle(const ObstacleProblem& prob, double tol, int max_sweeps) {
    const Grid& g = prob.f.grid;
    const int n = g.cells;
    const double h2 = g.h() * g.h();
    if (prob.f.values.minCoeff() <= 0.5)
        throw std::invalid_argument("solve_obstacle: source must satisfy f > 1/2");

    Field u = prob.boundary;  // edge cells keep their data; interior relaxes
    const double omega = 2.0 / (1.0 + std::sin(M_PI / double(n)));
    const int rows = g.dim == 1 ? 1 : n;
    auto is_edge = [&](int i, int j) {
        if (g.dim == 1) return i == 0 || i == n - 1;
        return i == 0 || i == n - 1 || j == 0 || j == n - 1;
    };
    const double diag = 2.0 * g.dim;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int j = 0; j < rows; ++j)
            for (int i = 0; i < n; ++i) {
                if (is_edge(i, j)) continue;
                const Eigen::Index k = g.idx(i, j);
                double nb = u.values[k - 1] + u.values[k + 1];
                if (g.dim == 2) nb += u.values[k - n] + u.values[k + n];
                const double gs = (nb - h2 * prob.f.values[k]) / diag;
                const double relaxed = u.values[k] + omega * (gs - u.values[k]);
                u.values[k] = relaxed > 0.0 ? relaxed : 0.0;
            }
        if (sweep % 16 == 15 && complementarity_residual(u, prob.f) <= tol)
            return u;
    }
    if (complementarity_residual(u, prob.f) <= tol) return u;
    throw SolverError("solve_obstacle: projected SOR did not converge");
}

double complementarity_residual(const Field& u, const Field& f) {
    const Grid& g = u.grid;
    const int n = g.cells;
    const double ih2 = 1.0 / (g.h() * g.h());
    const int rows = g.dim == 1 ? 1 : n;
    double worst = 0.0;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == 0 || i == n - 1 || (g.dim == 2 && (j == 0 || j == rows - 1)))
                continue;
            const Eigen::Index k = g.idx(i, j);
            double lap = u.values[k - 1] + u.values[k + 1] - 2.0 * u.values[k];
            if (g.dim == 2)
                lap += u.values[k - n] + u.values[k + n] - 2.0 * u.values[k];
            lap *= ih2;
            const double r = std::min(u.values[k], f.values[k] - lap);
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

const std::vector<Eigen::Vector2d>& unit_ball_lattice(int dim) {
    static const auto make = [](int d) {
        std::vector<Eigen::Vector2d> pts;
        const int half = 16;  // 33 nodes per axis
        if (d == 1) {
            for (int i = -half; i <= half; ++i)
                pts.emplace_back(double(i) / half, 0.0);
        } else {
            for (int j = -half; j <= half; ++j)
                for (int i = -half; i <= half; ++i) {
                    Eigen::Vector2d x(double(i) / half, double(j) / half);
                    if (x.norm() <= 1.0 + 1e-12) pts.push_back(x);
                }
        }
        return pts;
    };
    static const std::vector<Eigen::Vector2d> lattice1 = make(1);
    static const std::vector<Eigen::Vector2d> lattice2 = make(2);
    return dim == 1 ? lattice1 : lattice2;
}

namespace {

// directions for the half-space fit, 0.5 degree resolution
const std::vector<Eigen::Vector2d>& fit_directions(int dim) {
    static const auto make2 = [] {
        std::vector<Eigen::Vector2d> dirs;
        for (int k = 0; k < 720; ++k) {
            const double th = 2.0 * M_PI * double(k) / 720.0;
            dirs.emplace_back(std::cos(th), std::sin(th));
        }
        return dirs;
    };
    static const std::vector<Eigen::Vector2d> d1 = {{1, 0}, {-1, 0}};
    static const std::vector<Eigen::Vector2d> d2 = make2();
    return dim == 1 ? d1 : d2;
}

Eigen::Matrix2d psd_project(const Eigen::Matrix2d& Q, int dim) {
    if (dim == 1) {
        Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
        out(0, 0) = std::max(Q(0, 0), 0.0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Q);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

std::vector<BlowupProfile> blowup(const Field& u, const Eigen::Vector2d& center,
                                  const std::vector<double>& radii,
                                  double f_at_center) {
    const Grid& g = u.grid;
    const double h = g.h();
    for (size_t k = 0; k < radii.size(); ++k) {
        if (radii[k] < 4.0 * h)
            throw std::invalid_argument("blowup: radii must be >= 4h");
        if (k && radii[k] >= radii[k - 1])
            throw std::invalid_argument("blowup: radii must be descending");
    }
    // free-boundary cell: essentially zero value, positive neighbor within 2 cells
    const double uc = interpolate(u, center);
    const double umax = std::max(u.values.maxCoeff(), 1e-300);
    if (uc > 1e-6 * umax)
        throw std::invalid_argument("blowup: center is not a free-boundary cell");
    {
        bool positive_near = false;
        for (int dj = -2; dj <= 2 && !positive_near; ++dj)
            for (int di = -2; di <= 2 && !positive_near; ++di) {
                Eigen::Vector2d p = center;
                p[0] += di * h;
                if (g.dim == 2) p[1] += dj * h;
                else if (dj != 0) continue;
                try {
                    if (interpolate(u, p) > 1e-6 * umax) positive_near = true;
                } catch (const std::invalid_argument&) {}
            }
        if (!positive_near)
            throw std::invalid_argument("blowup: no positive values near the center");
    }

    const auto& lattice = unit_ball_lattice(g.dim);
    const auto& dirs = fit_directions(g.dim);
    std::vector<BlowupProfile> out;
    for (double r : radii) {
        BlowupProfile prof;
        prof.center = center;
        prof.r = r;
        prof.dim = g.dim;
        prof.values.resize(Eigen::Index(lattice.size()));
        for (size_t k = 0; k < lattice.size(); ++k)
            prof.values[Eigen::Index(k)] =
                interpolate(u, Eigen::Vector2d(center + r * lattice[k])) / (r * r);

        // least squares 1/2 x'Qx over the ball lattice
        const int nq = g.dim == 1 ? 1 : 3;  // q11 [, q22, q12]
        Eigen::MatrixXd A(lattice.size(), nq);
        for (size_t k = 0; k < lattice.size(); ++k) {
            const auto& x = lattice[k];
            A(Eigen::Index(k), 0) = 0.5 * x[0] * x[0];
            if (nq == 3) {
                A(Eigen::Index(k), 1) = 0.5 * x[1] * x[1];
                A(Eigen::Index(k), 2) = x[0] * x[1];
            }
        }
        Eigen::VectorXd q =
            A.colPivHouseholderQr().solve(prof.values.matrix());
        Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();
        Q(0, 0) = q[0];
        if (nq == 3) {
            Q(1, 1) = q[1];
            Q(0, 1) = Q(1, 0) = q[2];
        }
        prof.Q = psd_project(Q, g.dim);
        prof.fit_residual =
            std::sqrt((A * q - prof.values.matrix()).squaredNorm() /
                      double(lattice.size()));
        prof.trace_ratio =
            f_at_center != 0.0 ? prof.Q.trace() / f_at_center : 0.0;

        // fixed-amplitude half-space models over the direction fan
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : dirs) {
            double ss = 0.0;
            for (size_t k = 0; k < lattice.size(); ++k) {
                const double s = std::max(0.0, lattice[k].dot(e));
                const double m = 0.5 * f_at_center * s * s;
                const double d = prof.values[Eigen::Index(k)] - m;
                ss += d * d;
            }
            if (ss < best) {
                best = ss;
                prof.e_best = e;
            }
        }
        prof.halfspace_residual = std::sqrt(best / double(lattice.size()));

        const double zero_tol = 1e-9 * std::max(prof.values.maxCoeff(), 1e-300);
        long zeros = 0;
        for (Eigen::Index k = 0; k < prof.values.size(); ++k)
            if (prof.values[k] <= zero_tol) ++zeros;
        prof.zero_density = double(zeros) / double(lattice.size());
        out.push_back(std::move(prof));
    }
    return out;
}

Classification classify(const std::vector<BlowupProfile>& profiles,
                        double f_at_center) {
    if (profiles.size() < 3)
        throw std::invalid_argument("classify: need at least 3 ladder profiles");
    (void)f_at_center;
    const BlowupProfile& fine = profiles.back();
    Classification c;
    c.density_at_min_r = fine.zero_density;

    bool fat_somewhere = false;
    for (const auto& p : profiles)
        if (p.zero_density >= 1.0 / 8.0) fat_somewhere = true;
    const bool thin_tail =
        profiles[profiles.size() - 1].zero_density <= 1.0 / 16.0 &&
        profiles[profiles.size() - 2].zero_density <= 1.0 / 16.0;

    if (fat_somewhere && fine.halfspace_residual < fine.fit_residual) {
        c.label = PointType::Regular;
        c.nu = -fine.e_best;
        return c;
    }
    if (thin_tail && fine.fit_residual < fine.halfspace_residual) {
        c.label = PointType::Singular;
        const double cutoff = 0.05 * fine.Q.trace();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(fine.Q);
        for (int k = 0; k < fine.dim; ++k)
            if (es.eigenvalues()[k + (2 - fine.dim)] < cutoff) ++c.kernel_dim;
        return c;
    }
    c.label = PointType::Unresolved;
    return c;
}

std::vector<std::pair<double, double>> monneau(const Field& u,
                                               const Eigen::Vector2d& center,
                                               const Eigen::Matrix2d& Q,
                                               const std::vector<double>& radii) {
    const Grid& g = u.grid;
    const double h = g.h();
    std::vector<std::pair<double, double>> out;
    for (double r : radii) {
        if (r < 4.0 * h)
            throw std::invalid_argument("monneau: radii must be >= 4h");
        double integral = 0.0;
        if (g.dim == 1) {
            for (double s : {-r, r}) {
                const double q = 0.5 * Q(0, 0) * s * s;
                const double d = interpolate(u, {center[0] + s, 0.0}) - q;
                integral += d * d;
            }
        } else {
            const int n_angles = 256;
            auto vals = radial_sample(u, center, r, n_angles);
            double acc = 0.0;
            for (int k = 0; k < n_angles; ++k) {
                const double th = 2.0 * M_PI * double(k) / n_angles;
                Eigen::Vector2d x(r * std::cos(th), r * std::sin(th));
                const double q = 0.5 * x.dot(Q * x);
                const double d = vals[size_t(k)] - q;
                acc += d * d;
            }
            integral = acc * (2.0 * M_PI * r / n_angles);
        }
        out.emplace_back(r, integral / std::pow(r, g.dim + 3));
    }
    return out;
}

NormalReport normal_map(const std::vector<Snapshot>& snaps, const HittingField& T,
                        const std::vector<Eigen::Vector2d>& points,
                        const std::vector<double>& radii, double alpha,
                        double pair_radius) {
    NormalReport rep;
    const Grid& g = T.grid;
    for (const auto& x : points) {
        // nearest cell and its hitting time
        Eigen::Index cell = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < T.T.size(); ++k) {
            const double d = (g.center(k) - x).norm();
            if (d < best) { best = d; cell = k; }
        }
        const double tx = T.T[cell];
        if (!std::isfinite(tx)) { ++rep.skipped; continue; }
        // the patch at the hitting time, resolved at snapshot cadence: the
        // last stored w with t <= T(x) keeps x on the zero side (a time
        // interpolant would overshoot, w grows quadratically after contact)
        size_t ka = 0;
        while (ka + 1 < snaps.size() && snaps[ka + 1].t <= tx) ++ka;
        const auto& a = snaps[ka];
        const Field& w = a.w;
        const double eta_here = interpolate(a.eta, x);
        const double rho0_here = interpolate(snaps.front().rho, x);
        const double source = std::max(0.6, 1.0 - rho0_here - eta_here);
        try {
            auto ladder = blowup(w, x, radii, source);
            auto c = classify(ladder, source);
            if (c.label != PointType::Regular) { ++rep.skipped; continue; }
            rep.points.push_back(x);
            rep.normals.push_back(c.nu);
            rep.hit_times.push_back(tx);
        } catch (const std::invalid_argument&) {
            ++rep.skipped;
        }
    }
    const double expo = alpha / (1.0 + alpha);
    for (size_t i = 0; i < rep.points.size(); ++i)
        for (size_t j = i + 1; j < rep.points.size(); ++j) {
            const double d = (rep.points[i] - rep.points[j]).norm();
            if (d == 0.0 || d > pair_radius) continue;
            const double q =
                (rep.normals[i] - rep.normals[j]).norm() / std::pow(d, expo);
            rep.seminorm = std::max(rep.seminorm, q);
        }
    return rep;
}

NondegeneracyReport nondegeneracy_check(const Field& u, const Eigen::Vector2d& center,
                                        const std::vector<double>& radii,
                                        double lambda_min, double eps_nd) {
    const Grid& g = u.grid;
    const double h = g.h();
    bool touches = false;
    for (int dj = -1; dj <= 1 && !touches; ++dj)
        for (int di = -1; di <= 1 && !touches; ++di) {
            if (g.dim == 1 && dj != 0) continue;
            Eigen::Vector2d p = center;
            p[0] += di * h;
            if (g.dim == 2) p[1] += dj * h;
            try {
                if (interpolate(u, p) > 0) touches = true;
            } catch (const std::invalid_argument&) {}
        }
    if (!touches)
        throw std::invalid_argument(
            "nondegeneracy_check: center is interior to the zero set");

    NondegeneracyReport rep;
    rep.worst_ratio = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        double sup = 0.0;
        for (Eigen::Index k = 0; k < u.values.size(); ++k)
            if ((g.center(k) - center).norm() <= r)
                sup = std::max(sup, u.values[k]);
        const double floor = lambda_min / (2.0 * g.dim) * r * r;
        rep.worst_ratio = std::min(rep.worst_ratio, sup / floor);
    }
    rep.passed = rep.worst_ratio >= 1.0 - eps_nd;
    return rep;
}

}  // namespace heleshaw
