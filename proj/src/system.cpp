#include "sweq/system.hpp"

#include <cmath>
#include <utility>

namespace sweq {

SwitchedSystem::SwitchedSystem(std::vector<Matrix> A, std::vector<Vector> b, Matrix C,
                               std::string name)
    : A_(std::move(A)), b_(std::move(b)), C_(std::move(C)), name_(std::move(name)) {
    if (A_.empty()) throw InputError("system needs at least one subsystem");
    if (A_.size() != b_.size())
        throw InputError("subsystem count mismatch: " + std::to_string(A_.size()) +
                         " A matrices vs " + std::to_string(b_.size()) + " b vectors");
    n_x_ = static_cast<int>(A_.front().rows());
    if (n_x_ < 1) throw InputError("state dimension must be positive");
    for (std::size_t i = 0; i < A_.size(); ++i) {
        if (A_[i].rows() != n_x_ || A_[i].cols() != n_x_)
            throw InputError("A[" + std::to_string(i + 1) + "] is not " + std::to_string(n_x_) +
                             "x" + std::to_string(n_x_));
        if (b_[i].size() != n_x_)
            throw InputError("b[" + std::to_string(i + 1) + "] does not have length " +
                             std::to_string(n_x_));
        if (!A_[i].allFinite() || !b_[i].allFinite())
            throw InputError("subsystem " + std::to_string(i + 1) + " has a non-finite entry");
    }
    if (!C_.allFinite()) throw InputError("C has a non-finite entry");
    if (C_.size() == 0) C_ = Matrix(0, n_x_);
    if (C_.cols() != n_x_)
        throw InputError("C must have " + std::to_string(n_x_) + " columns");
    n_z_ = static_cast<int>(C_.rows());
}

SimplexVector::SimplexVector(Vector entries, double tol) : entries_(std::move(entries)) {
    if (entries_.size() == 0) throw InputError("simplex vector must be non-empty");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < entries_.size(); ++i) {
        double v = entries_[i];
        if (!std::isfinite(v)) throw InputError("simplex vector has a non-finite entry");
        if (v < -tol)
            throw InputError("simplex vector entry " + std::to_string(i + 1) +
                             " is negative beyond tolerance");
        if (v < 0.0) v = 0.0;
        entries_[i] = v;
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
        throw InputError("simplex vector entries sum to " + std::to_string(sum) + ", not 1");
    entries_ /= sum;
}

SimplexVector SimplexVector::vertex(int n, int i) {
    if (n < 1 || i < 0 || i >= n) throw InputError("simplex vertex index out of range");
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    return SimplexVector(e);
}

void validate_goal(const SwitchedSystem& sys, const GoalSpec& goal) {
    if (const auto* fs = std::get_if<FullStateGoal>(&goal)) {
        if (fs->x_star.size() != sys.state_dim())
            throw InputError("full-state goal has wrong dimension");
        return;
    }
    const auto& og = std::get<OutputGoal>(goal);
    if (sys.output_dim() < 1) throw InputError("output goal requires a system with outputs");
    if (og.z_star.size() != sys.output_dim())
        throw InputError("output goal z* has wrong dimension");
    if (og.eps <= 0.0) throw InputError("output tolerance eps must be positive");
    if (og.H.size() > 0 || og.g.size() > 0) {
        if (og.H.cols() != sys.state_dim())
            throw InputError("constraint matrix H must have n_x columns");
        if (og.H.rows() != og.g.size())
            throw InputError("constraint H and g row counts differ");
    }
}

std::pair<Matrix, Vector> convex_dynamics(const SwitchedSystem& sys, const SimplexVector& lam) {
    if (lam.size() != sys.subsystem_count())
        throw InputError("simplex vector length does not match subsystem count");
    Matrix A = Matrix::Zero(sys.state_dim(), sys.state_dim());
    Vector b = Vector::Zero(sys.state_dim());
    for (int i = 0; i < sys.subsystem_count(); ++i) {
        A.noalias() += lam[i] * sys.A(i);
        b.noalias() += lam[i] * sys.b(i);
    }
    return {A, b};
}

Matrix build_M(const SwitchedSystem& sys, const Vector& x) {
    if (x.size() != sys.state_dim()) throw InputError("state vector has wrong dimension");
    Matrix M(sys.state_dim(), sys.subsystem_count());
    for (int i = 0; i < sys.subsystem_count(); ++i)
        M.col(i) = sys.A(i) * x + sys.b(i);
    return M;
}

}  // namespace sweq
