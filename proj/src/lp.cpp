#include "sweq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sweq {

namespace {
constexpr long kIterationCap = 100000;
constexpr double kPivotTol = 1e-12;  // rows are scaled to unit inf-norm first
}  // namespace

std::optional<Vector> solve_feasibility(const LpFeasibilityProblem& p, double tol_lp) {
    const Eigen::Index m0 = p.Aeq.rows();
    const Eigen::Index n = p.Aeq.cols();
    if (m0 < 1 || n < 1) throw InputError("LP needs at least one row and one variable");
    if (p.beq.size() != m0) throw InputError("LP right-hand side has wrong length");

    // Scale each row to unit inf-norm and flip signs so the rhs is >= 0.
    // Zero rows are dropped (or decide infeasibility outright).
    Matrix A(m0, n);
    Vector b(m0);
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < m0; ++i) {
        const double s = p.Aeq.row(i).cwiseAbs().maxCoeff();
        if (s <= 0.0) {
            if (std::abs(p.beq[i]) > tol_lp) return std::nullopt;
            continue;
        }
        A.row(m) = p.Aeq.row(i) / s;
        b[m] = p.beq[i] / s;
        if (b[m] < 0.0) {
            A.row(m) = -A.row(m);
            b[m] = -b[m];
        }
        ++m;
    }
    if (m == 0) return Vector::Zero(n);
    A.conservativeResize(m, n);
    b.conservativeResize(m);

    // Phase-1 tableau over [A | I] with artificial basis; minimize the sum of
    // artificials. zrow holds reduced costs, obj the negated objective value.
    Matrix T(m, n + m);
    T << A, Matrix::Identity(m, m);
    Vector rhs = b;
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

    Eigen::RowVectorXd zrow(n + m);
    for (Eigen::Index j = 0; j < n + m; ++j) {
        const double cj = (j >= n) ? 1.0 : 0.0;
        zrow[j] = cj - T.col(j).sum();
    }

    for (long iter = 0;; ++iter) {
        if (iter >= kIterationCap) throw NumericError("simplex iteration cap exceeded");

        // Bland: entering variable is the lowest index with negative reduced cost.
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < n + m; ++j) {
            if (zrow[j] < -kPivotTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;

        // Ratio test; ties broken by the smallest basis index (Bland).
        Eigen::Index leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (T(i, enter) > kPivotTol) {
                const double ratio = rhs[i] / T(i, enter);
                if (ratio < best_ratio ||
                    (ratio == best_ratio && leave >= 0 &&
                     basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) throw NumericError("phase-1 simplex became unbounded");

        const double piv = T(leave, enter);
        T.row(leave) /= piv;
        rhs[leave] /= piv;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = T(i, enter);
            if (f != 0.0) {
                T.row(i) -= f * T.row(leave);
                rhs[i] -= f * rhs[leave];
                if (rhs[i] < 0.0 && rhs[i] > -1e-11) rhs[i] = 0.0;  // clamp roundoff only
            }
        }
        const double fz = zrow[enter];
        if (fz != 0.0) zrow -= fz * T.row(leave);
        basis[static_cast<std::size_t>(leave)] = enter;
    }

    double artificial_sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] >= n) artificial_sum += rhs[i];
    if (artificial_sum > tol_lp) return std::nullopt;

    Vector x = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] < n)
            x[basis[static_cast<std::size_t>(i)]] = std::max(rhs[i], 0.0);

    // Contract re-check against the original, unscaled problem.
    const double norm_b = (m0 > 0) ? p.beq.cwiseAbs().maxCoeff() : 0.0;
    const double resid = (p.Aeq * x - p.beq).cwiseAbs().maxCoeff();
    if (!(resid <= tol_lp * (1.0 + norm_b)))
        throw NumericError("simplex returned an out-of-tolerance point");
    return x;
}

}  // namespace sweq
