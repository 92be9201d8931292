#include "sweq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "sweq/lp.hpp"
#include "sweq/numerics.hpp"

namespace sweq {

namespace {

// Solves M lam = 0, 1'lam = 1, lam >= 0 restricted to the given columns;
// returns the full-length point on success.
std::optional<Vector> face_feasible(const Matrix& M, const std::vector<int>& support,
                                    const NumericConfig& cfg) {
    const Eigen::Index n_rows = M.rows();
    const Eigen::Index s = static_cast<Eigen::Index>(support.size());
    Matrix Aeq(n_rows + 1, s);
    for (Eigen::Index k = 0; k < s; ++k)
        Aeq.col(k).head(n_rows) = M.col(support[static_cast<std::size_t>(k)]);
    Aeq.row(n_rows).setOnes();
    Vector beq = Vector::Zero(n_rows + 1);
    beq[n_rows] = 1.0;

    auto sol = solve_feasibility({Aeq, beq}, cfg.tol_lp);
    if (!sol) return std::nullopt;
    Vector full = Vector::Zero(M.cols());
    for (Eigen::Index k = 0; k < s; ++k)
        full[support[static_cast<std::size_t>(k)]] = (*sol)[k];
    return full;
}

// LP outputs can sit tol_lp outside the simplex; wrap with a matching slack.
double wrap_tol(const NumericConfig& cfg) {
    return std::max(cfg.tol_simplex, 4.0 * cfg.tol_lp);
}

}  // namespace

std::vector<ConstantEquilibrium> constant_equilibria(const SwitchedSystem& sys,
                                                     const NumericConfig& cfg) {
    std::vector<ConstantEquilibrium> out;
    for (int i = 0; i < sys.subsystem_count(); ++i) {
        const Matrix& A = sys.A(i);
        const Vector& b = sys.b(i);
        const int r = numerical_rank(A, cfg.tol_rank);
        if (r == sys.state_dim()) {
            out.push_back({i + 1, solve_linear(A, -b, cfg.tol_rank)});
            continue;
        }
        Matrix aug(A.rows(), A.cols() + 1);
        aug << A, -b;
        if (numerical_rank(aug, cfg.tol_rank) == r)
            out.push_back({i + 1, std::nullopt});  // consistent: affine family
        // inconsistent singular systems have no equilibrium at all
    }
    return out;
}

bool screen_candidate(const SwitchedSystem& sys, const Vector& x, const NumericConfig& cfg) {
    return numerical_rank(build_M(sys, x), cfg.tol_rank) < sys.subsystem_count();
}

std::optional<EquilibriumCertificate> check_membership(const SwitchedSystem& sys, const Vector& x,
                                                       const NumericConfig& cfg) {
    if (!screen_candidate(sys, x, cfg)) return std::nullopt;
    const Matrix M = build_M(sys, x);
    const Eigen::Index n = M.rows();
    Matrix Aeq(n + 1, M.cols());
    Aeq.topRows(n) = M;
    Aeq.row(n).setOnes();
    Vector beq = Vector::Zero(n + 1);
    beq[n] = 1.0;

    auto sol = solve_feasibility({Aeq, beq}, cfg.tol_lp);
    if (!sol) return std::nullopt;
    SimplexVector lam(*sol, wrap_tol(cfg));
    const double resid = (M * lam.entries()).cwiseAbs().maxCoeff();
    if (resid > cfg.cert_tol)
        throw NumericError("membership certificate residual exceeds cert_tol");
    return EquilibriumCertificate{x, lam, resid};
}

EquilibriumPolytope enumerate_vertices(const SwitchedSystem& sys, const Vector& x,
                                       const NumericConfig& cfg) {
    EquilibriumPolytope poly;
    poly.x_star = x;
    if (!check_membership(sys, x, cfg)) return poly;

    const Matrix M = build_M(sys, x);
    const int N = sys.subsystem_count();

    std::vector<std::vector<int>> found;  // supports of discovered vertices

    auto contains_found = [&](const std::vector<int>& support) {
        for (const auto& f : found)
            if (std::includes(support.begin(), support.end(), f.begin(), f.end())) return true;
        return false;
    };

    // Sweep faces by increasing dimension; a feasible survivor of the pruning
    // is the unique point of the polytope on that face, i.e. a vertex.
    std::vector<int> support;
    for (int s = 1; s <= N; ++s) {
        support.assign(static_cast<std::size_t>(s), 0);
        for (int k = 0; k < s; ++k) support[static_cast<std::size_t>(k)] = k;
        while (true) {
            if (!contains_found(support)) {
                if (auto lam = face_feasible(M, support, cfg)) {
                    SimplexVector v(*lam, wrap_tol(cfg));
                    bool duplicate = false;
                    for (const auto& existing : poly.vertices) {
                        if ((existing.entries() - v.entries()).cwiseAbs().maxCoeff() < 1e-7) {
                            duplicate = true;
                            break;
                        }
                    }
                    if (duplicate) {
                        std::cerr << "warning: merged duplicate polytope vertex\n";
                    } else {
                        poly.vertices.push_back(std::move(v));
                        poly.supports.push_back({support});
                    }
                    found.push_back(support);
                }
            }
            // next size-s combination in lexicographic order
            int i = s - 1;
            while (i >= 0 && support[static_cast<std::size_t>(i)] == N - s + i) --i;
            if (i < 0) break;
            ++support[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < s; ++k)
                support[static_cast<std::size_t>(k)] = support[static_cast<std::size_t>(k - 1)] + 1;
        }
    }
    return poly;
}

}  // namespace sweq
