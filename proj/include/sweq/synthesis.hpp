#pragma once

#include <optional>

#include "sweq/system.hpp"
#include "sweq/types.hpp"

namespace sweq {

/// Certified design for one simplex vector: A(lam) Hurwitz, x_star its
/// equilibrium, P the Lyapunov certificate, rho = (x0-x_star)' P (x0-x_star)
/// the guaranteed cost of the min-type rule from x0.
struct DesignResult {
    SimplexVector lam;
    Vector x_star;
    Matrix P;
    double rho = 0.0;
    Matrix Q;
    Vector x0;
};

/// State-feedback switching rule u(x) = argmin_i (x-x_star)' P (A_i x + b_i),
/// ties broken by the lowest mode label.
struct SwitchingRule {
    Matrix P;
    Vector x_star;
};

/// Everything fitness/certify need besides lam itself.
struct FitnessConfig {
    double mu = 1e5;  // barrier offset separating infeasible candidates
    Matrix Q;         // cost weight, symmetric positive definite
    Vector x0;        // initial state of the cost functional
    GoalSpec goal;
    NumericConfig numeric;
};

/// Throws InputError unless cfg is dimensionally consistent with sys, mu > 0
/// and Q is symmetric positive definite.
void validate_fitness_config(const SwitchedSystem& sys, const FitnessConfig& cfg);

/// Equilibrium of the convex combination: -A(lam)^{-1} b(lam) when A(lam) is
/// invertible, nullopt otherwise (non-unique or empty family).
std::optional<Vector> equilibrium_of(const SwitchedSystem& sys, const SimplexVector& lam,
                                     const NumericConfig& cfg = {});

/// Attempts the full certificate for lam: Hurwitz check, equilibrium, goal
/// constraints, then the cost-minimizing P from A(lam)'P + PA(lam)
/// = -(Q + lyap_delta I). Returns nullopt when any requirement fails.
std::optional<DesignResult> certify(const SwitchedSystem& sys, const SimplexVector& lam,
                                    const FitnessConfig& cfg);

/// rho when certify succeeds; otherwise mu + v with v the largest violation:
/// spectral abscissa of A(lam), goal residuals beyond their slack, or a fixed
/// penalty of 10 when A(lam) is singular. Lower is better.
double fitness(const SwitchedSystem& sys, const SimplexVector& lam, const FitnessConfig& cfg);

/// Mode label (1..N) selected by the min-type rule at state x.
int switching_index(const SwitchingRule& rule, const SwitchedSystem& sys, const Vector& x);

/// Diagnostics for an externally supplied certificate (lam, x_star, P).
struct CertificateAudit {
    double lyapunov_excess = 0.0;      // max eigenvalue of A(lam)'P + PA(lam) + Q
    double equilibrium_residual = 0.0; // ||A(lam) x_star + b(lam)||_inf
    bool positive_definite = false;
    double rho = 0.0;                  // (x0-x_star)' P (x0-x_star)
};

CertificateAudit audit_certificate(const SwitchedSystem& sys, const SimplexVector& lam,
                                   const Vector& x_star, const Matrix& P, const Matrix& Q,
                                   const Vector& x0, const NumericConfig& cfg = {});

}  // namespace sweq
