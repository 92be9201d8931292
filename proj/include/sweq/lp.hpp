#pragma once

#include <optional>

#include "sweq/types.hpp"

namespace sweq {

/// Find x >= 0 with Aeq x = beq, or decide that none exists.
struct LpFeasibilityProblem {
    Matrix Aeq;
    Vector beq;
};

/// Phase-1 simplex with Bland's anti-cycling rule. Returns a feasible point
/// (Aeq x = beq within tol_lp * (1 + ||beq||_inf), x >= -tol_lp) or nullopt
/// when the artificial objective cannot be driven below tol_lp.
/// Throws NumericError if the iteration cap (1e5) is exceeded.
std::optional<Vector> solve_feasibility(const LpFeasibilityProblem& p, double tol_lp = 1e-9);

}  // namespace sweq
