#include "sweq/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sweq/numerics.hpp"

namespace sweq {

namespace {

constexpr double kSingularPenalty = 10.0;

struct PreEvaluation {
    Matrix A;
    Vector b;
    double abscissa = 0.0;
    std::optional<Vector> x_star;
    bool goal_ok = false;
    double violation = 0.0;  // largest constraint violation, 0 when feasible
};

// Everything certify/fitness need short of the Lyapunov solve.
PreEvaluation pre_evaluate(const SwitchedSystem& sys, const SimplexVector& lam,
                           const FitnessConfig& cfg) {
    validate_goal(sys, cfg.goal);
    if (cfg.x0.size() != sys.state_dim())
        throw InputError("x0 does not match the state dimension");
    if (cfg.Q.rows() != sys.state_dim() || cfg.Q.cols() != sys.state_dim())
        throw InputError("Q must be n_x by n_x");
    PreEvaluation e;
    auto [A, b] = convex_dynamics(sys, lam);
    e.A = std::move(A);
    e.b = std::move(b);
    e.abscissa = spectral_abscissa(e.A);
    double v = std::max(e.abscissa, 0.0);

    try {
        e.x_star = solve_linear(e.A, -e.b, cfg.numeric.tol_rank);
    } catch (const SingularMatrixError&) {
        e.x_star.reset();
    }
    if (!e.x_star) {
        e.goal_ok = false;
        e.violation = std::max(v, kSingularPenalty);
        return e;
    }

    const Vector& xs = *e.x_star;
    const double cert_tol = cfg.numeric.cert_tol;
    if (const auto* fs = std::get_if<FullStateGoal>(&cfg.goal)) {
        const double dev = (xs - fs->x_star).cwiseAbs().maxCoeff();
        e.goal_ok = dev <= cert_tol;
        v = std::max(v, dev - cert_tol);
    } else {
        const auto& og = std::get<OutputGoal>(cfg.goal);
        const double out_dev = (sys.C() * xs - og.z_star).cwiseAbs().maxCoeff();
        e.goal_ok = out_dev <= og.eps;
        v = std::max(v, out_dev - og.eps);
        if (og.H.rows() > 0) {
            const double ineq = (og.H * xs - og.g).maxCoeff();
            e.goal_ok = e.goal_ok && ineq <= cert_tol;
            v = std::max(v, ineq);
        }
    }
    e.violation = std::max(v, 0.0);
    return e;
}

DesignResult make_design(const SwitchedSystem& sys, const SimplexVector& lam,
                         const FitnessConfig& cfg, const PreEvaluation& e) {
    const Eigen::Index n = sys.state_dim();
    const Matrix Qd = cfg.Q + cfg.numeric.lyap_delta * Matrix::Identity(n, n);
    Matrix P = solve_lyapunov(e.A, Qd);
    const Vector u = cfg.x0 - *e.x_star;
    const double rho = u.dot(P * u);
    const double resid = (e.A * (*e.x_star) + e.b).cwiseAbs().maxCoeff();
    if (resid > cfg.numeric.cert_tol)
        throw NumericError("certified equilibrium residual exceeds cert_tol");
    return DesignResult{lam, *e.x_star, std::move(P), rho, cfg.Q, cfg.x0};
}

}  // namespace

void validate_fitness_config(const SwitchedSystem& sys, const FitnessConfig& cfg) {
    validate_goal(sys, cfg.goal);
    if (cfg.mu <= 0.0) throw InputError("barrier constant mu must be positive");
    if (cfg.x0.size() != sys.state_dim())
        throw InputError("x0 does not match the state dimension");
    if (cfg.Q.rows() != sys.state_dim() || cfg.Q.cols() != sys.state_dim())
        throw InputError("Q must be n_x by n_x");
    if (!is_positive_definite(cfg.Q, cfg.numeric.tol_pd))
        throw InputError("Q must be symmetric positive definite");
}

std::optional<Vector> equilibrium_of(const SwitchedSystem& sys, const SimplexVector& lam,
                                     const NumericConfig& cfg) {
    auto [A, b] = convex_dynamics(sys, lam);
    try {
        return solve_linear(A, -b, cfg.tol_rank);
    } catch (const SingularMatrixError&) {
        return std::nullopt;
    }
}

std::optional<DesignResult> certify(const SwitchedSystem& sys, const SimplexVector& lam,
                                    const FitnessConfig& cfg) {
    PreEvaluation e = pre_evaluate(sys, lam, cfg);
    if (e.abscissa >= 0.0 || !e.x_star || !e.goal_ok) return std::nullopt;
    return make_design(sys, lam, cfg, e);
}

double fitness(const SwitchedSystem& sys, const SimplexVector& lam, const FitnessConfig& cfg) {
    PreEvaluation e = pre_evaluate(sys, lam, cfg);
    if (e.abscissa >= 0.0 || !e.x_star || !e.goal_ok) return cfg.mu + e.violation;
    try {
        return make_design(sys, lam, cfg, e).rho;
    } catch (const NumericError&) {
        // Certificate numerically unattainable (e.g. marginal Hurwitz); treat
        // as infeasible with no measurable constraint violation.
        return cfg.mu;
    }
}

int switching_index(const SwitchingRule& rule, const SwitchedSystem& sys, const Vector& x) {
    if (x.size() != sys.state_dim()) throw InputError("state vector has wrong dimension");
    const Vector w = rule.P * (x - rule.x_star);
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sys.subsystem_count(); ++i) {
        const double value = w.dot(sys.A(i) * x + sys.b(i));
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    return best + 1;
}

CertificateAudit audit_certificate(const SwitchedSystem& sys, const SimplexVector& lam,
                                   const Vector& x_star, const Matrix& P, const Matrix& Q,
                                   const Vector& x0, const NumericConfig& cfg) {
    auto [A, b] = convex_dynamics(sys, lam);
    CertificateAudit audit;
    const Matrix S = A.transpose() * P + P * A + Q;
    Eigen::SelfAdjointEigenSolver<Matrix> es((S + S.transpose()) / 2.0);
    audit.lyapunov_excess = es.eigenvalues().maxCoeff();
    audit.equilibrium_residual = (A * x_star + b).cwiseAbs().maxCoeff();
    try {
        audit.positive_definite = is_positive_definite(P, cfg.tol_pd);
    } catch (const InputError&) {
        audit.positive_definite = false;  // not even symmetric
    }
    const Vector u = x0 - x_star;
    audit.rho = u.dot(P * u);
    return audit;
}

}  // namespace sweq
