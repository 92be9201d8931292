#pragma once

#include "sweq/types.hpp"

namespace sweq {

/// Numerical rank: number of singular values above tol_rank * sigma_max.
/// Empty matrices have rank 0.
int numerical_rank(const Matrix& M, double tol_rank = 1e-9);

/// Largest real part over the eigenvalues of a square matrix.
double spectral_abscissa(const Matrix& A);

/// Unique solution P of A'P + PA = -Q for Hurwitz A and symmetric Q > 0,
/// via the Kronecker vectorization ((I (x) A') + (A' (x) I)) vec(P) = -vec(Q).
/// The result is symmetrized; residual is checked against 1e-8 * ||Q||_F.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

/// True iff P (symmetric within 1e-10, else InputError) has all LDLT pivots
/// above tol_pd.
bool is_positive_definite(const Matrix& P, double tol_pd = 1e-9);

/// Solves A x = b by partially pivoted LU. Throws SingularMatrixError when A
/// is singular to tolerance; the returned x satisfies
/// ||A x - b|| <= 1e-9 (||A|| ||x|| + ||b||).
Vector solve_linear(const Matrix& A, const Vector& b, double tol_rank = 1e-9);

}  // namespace sweq
