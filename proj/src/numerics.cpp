#include "sweq/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sweq {

int numerical_rank(const Matrix& M, double tol_rank) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = tol_rank * sv[0];
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++r;
    return r;
}

double spectral_abscissa(const Matrix& A) {
    if (A.rows() != A.cols()) throw InputError("spectral abscissa needs a square matrix");
    if (A.size() == 0) throw InputError("spectral abscissa of an empty matrix");
    Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration did not converge");
    return es.eigenvalues().real().maxCoeff();
}

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Q.rows() != n || Q.cols() != n)
        throw InputError("Lyapunov solve needs square A and Q of equal size");
    if (spectral_abscissa(A) >= 0.0)
        throw NumericError("Lyapunov solve requires a Hurwitz matrix");

    // (I (x) A') + (A' (x) I), acting on vec(P) with column-major stacking.
    const Matrix At = A.transpose();
    Matrix K = Matrix::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        K.block(j * n, j * n, n, n) = At;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                K(i + n * j, i + n * k) += At(j, k);

    Vector rhs(n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        rhs.segment(j * n, n) = -Q.col(j);

    Eigen::PartialPivLU<Matrix> lu(K);
    Vector vecP = lu.solve(rhs);
    Matrix P(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        P.col(j) = vecP.segment(j * n, n);
    P = ((P + P.transpose()) / 2.0).eval();

    const double resid = (At * P + P * A + Q).norm();
    if (!(resid <= 1e-8 * Q.norm()))
        throw NumericError("Lyapunov residual too large: " + std::to_string(resid));
    return P;
}

bool is_positive_definite(const Matrix& P, double tol_pd) {
    if (P.rows() != P.cols()) throw InputError("positive definiteness needs a square matrix");
    if (P.size() == 0) return true;  // vacuous
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InputError("matrix is not symmetric");
    Eigen::LDLT<Matrix> ldlt(P);
    if (ldlt.info() != Eigen::Success) return false;
    // LDLT of an indefinite matrix can silently succeed; trust the pivots.
    return ldlt.vectorD().minCoeff() > tol_pd && ldlt.isPositive();
}

Vector solve_linear(const Matrix& A, const Vector& b, double tol_rank) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw InputError("linear solve needs a square matrix");
    if (b.size() != n) throw InputError("right-hand side has wrong length");
    Eigen::PartialPivLU<Matrix> lu(A);
    const Matrix& U = lu.matrixLU();
    double umax = 0.0, umin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = std::abs(U(i, i));
        umax = std::max(umax, d);
        umin = std::min(umin, d);
    }
    if (umax == 0.0 || umin <= tol_rank * umax)
        throw SingularMatrixError("matrix is singular to tolerance");
    Vector x = lu.solve(b);
    const double resid = (A * x - b).norm();
    if (!(resid <= 1e-9 * (A.norm() * x.norm() + b.norm())))
        throw SingularMatrixError("linear solve residual too large (matrix near-singular)");
    return x;
}

}  // namespace sweq
