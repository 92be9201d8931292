#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sweq {

inline constexpr const char* kVersion = "0.1.0";

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown on malformed user input: bad dimensions, unparsable files, bad flags.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a numerical routine cannot deliver its contract
/// (non-convergence, iteration caps, unusable conditioning).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by solve_linear when the matrix is singular to tolerance.
struct SingularMatrixError : NumericError {
    using NumericError::NumericError;
};

/// Thrown by the simulator when the state norm exceeds the divergence guard.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tolerances threaded through the library; all overridable from the CLI.
struct NumericConfig {
    double tol_simplex = 1e-9;  // simplex-vector validation slack
    double tol_rank = 1e-9;     // relative singular-value cutoff
    double tol_pd = 1e-9;       // positive-definiteness pivot floor
    double tol_lp = 1e-9;       // LP feasibility threshold
    double cert_tol = 1e-7;     // equilibrium-certificate residual bound
    double lyap_delta = 1e-6;   // strictness margin added to Q in the Lyapunov solve
};

}  // namespace sweq
