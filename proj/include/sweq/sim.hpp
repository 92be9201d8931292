#pragma once

#include <iosfwd>
#include <vector>

#include "sweq/synthesis.hpp"
#include "sweq/system.hpp"
#include "sweq/types.hpp"

namespace sweq {

/// Sampled closed-loop trace. sigma[k] is the mode label (1..N) the rule
/// selects at states[k]; it drives the interval [times[k], times[k+1]), and
/// the final entry is the label the rule would apply next. cost[k] is the
/// running integral of (x-x_star)' Q (x-x_star) up to times[k].
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<int> sigma;  // one label per sample
    std::vector<double> cost;
};

/// Fixed-step closed-loop simulation: the rule picks a mode at each step
/// start (sample-and-hold), the active affine subsystem is integrated with a
/// classical 4th-order step, and the cost accumulates by the trapezoid rule.
/// Throws DivergenceError when ||x||_inf exceeds 1e9.
Trajectory simulate(const SwitchedSystem& sys, const SwitchingRule& rule, const Vector& x0,
                    const Matrix& Q, double horizon, double step);

/// CSV export: header t,x1,...,xn,sigma,cost; one row per sample at full
/// double precision.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace sweq
