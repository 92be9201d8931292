#include "sweq/sim.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "sweq/numerics.hpp"

namespace sweq {

namespace {
constexpr double kDivergenceNorm = 1e9;
}

Trajectory simulate(const SwitchedSystem& sys, const SwitchingRule& rule, const Vector& x0,
                    const Matrix& Q, double horizon, double step) {
    if (!(step > 0.0)) throw InputError("simulation step must be positive");
    if (horizon < 0.0) throw InputError("simulation horizon cannot be negative");
    if (x0.size() != sys.state_dim()) throw InputError("x0 has wrong dimension");
    if (rule.x_star.size() != sys.state_dim()) throw InputError("rule x* has wrong dimension");
    if (rule.P.rows() != sys.state_dim() || rule.P.cols() != sys.state_dim())
        throw InputError("rule P must be n_x by n_x");
    if (Q.rows() != sys.state_dim() || Q.cols() != sys.state_dim())
        throw InputError("Q must be n_x by n_x");
    if (!is_positive_definite(rule.P, 0.0)) throw InputError("rule P must be positive definite");

    const auto steps = static_cast<std::int64_t>(std::floor(horizon / step + 1e-9));
    const auto integrand = [&](const Vector& x) {
        const Vector d = x - rule.x_star;
        return d.dot(Q * d);
    };

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.sigma.reserve(static_cast<std::size_t>(steps) + 1);
    traj.cost.reserve(static_cast<std::size_t>(steps) + 1);

    Vector x = x0;
    double cost = 0.0;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    traj.cost.push_back(0.0);

    for (std::int64_t k = 0; k < steps; ++k) {
        const int mode = switching_index(rule, sys, x);
        traj.sigma.push_back(mode);

        const Matrix& A = sys.A(mode - 1);
        const Vector& b = sys.b(mode - 1);
        const auto f = [&](const Vector& y) -> Vector { return A * y + b; };

        const Vector k1 = f(x);
        const Vector k2 = f(x + (step / 2.0) * k1);
        const Vector k3 = f(x + (step / 2.0) * k2);
        const Vector k4 = f(x + step * k3);
        const Vector x_next = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        cost += (step / 2.0) * (integrand(x) + integrand(x_next));
        x = x_next;

        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceNorm)
            throw DivergenceError("state diverged at t = " +
                                  std::to_string(static_cast<double>(k + 1) * step));

        traj.times.push_back(static_cast<double>(k + 1) * step);
        traj.states.push_back(x);
        traj.cost.push_back(cost);
    }
    traj.sigma.push_back(switching_index(rule, sys, x));
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x" << (i + 1);
    out << ",sigma,cost\n";
    out.precision(17);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << traj.times[k];
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << traj.states[k][i];
        out << ',' << traj.sigma[k] << ',' << traj.cost[k] << '\n';
    }
}

}  // namespace sweq
