#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sweq/types.hpp"

namespace sweq {

/// Continuous-time switched affine system
///   xdot = A_i x + b_i   (i = 1..N),   z = C x.
/// Immutable after construction; construction validates all dimensions.
class SwitchedSystem {
  public:
    SwitchedSystem(std::vector<Matrix> A, std::vector<Vector> b, Matrix C = Matrix(),
                   std::string name = "");

    int state_dim() const { return n_x_; }
    int output_dim() const { return n_z_; }
    int subsystem_count() const { return static_cast<int>(A_.size()); }

    const Matrix& A(int i) const { return A_[static_cast<std::size_t>(i)]; }
    const Vector& b(int i) const { return b_[static_cast<std::size_t>(i)]; }
    const Matrix& C() const { return C_; }
    const std::string& name() const { return name_; }

  private:
    std::vector<Matrix> A_;
    std::vector<Vector> b_;
    Matrix C_;  // n_z x n_x; 0 x n_x when no output is defined
    std::string name_;
    int n_x_ = 0;
    int n_z_ = 0;
};

/// Point of the unit simplex. Entries in [-tol, 0) are clamped to zero and the
/// vector renormalized; anything further outside the simplex is rejected.
class SimplexVector {
  public:
    explicit SimplexVector(Vector entries, double tol = 1e-9);

    /// i-th vertex of the simplex (standard basis vector) in dimension n.
    static SimplexVector vertex(int n, int i);

    int size() const { return static_cast<int>(entries_.size()); }
    double operator[](int i) const { return entries_[i]; }
    const Vector& entries() const { return entries_; }

  private:
    Vector entries_;
};

/// Drive the state to a prescribed point.
struct FullStateGoal {
    Vector x_star;
};

/// Drive the output to z_star within eps, subject to H x <= g.
/// H and g may be empty (no inequality constraints).
struct OutputGoal {
    Vector z_star;
    Matrix H;
    Vector g;
    double eps = 1e-2;
};

using GoalSpec = std::variant<FullStateGoal, OutputGoal>;

/// Throws InputError unless the goal is dimensionally consistent with sys.
void validate_goal(const SwitchedSystem& sys, const GoalSpec& goal);

/// A(lam) = sum_i lam_i A_i and b(lam) = sum_i lam_i b_i.
std::pair<Matrix, Vector> convex_dynamics(const SwitchedSystem& sys, const SimplexVector& lam);

/// M(x): n_x x N matrix whose i-th column is A_i x + b_i, so that
/// M(x) lam = A(lam) x + b(lam) for every lam.
Matrix build_M(const SwitchedSystem& sys, const Vector& x);

}  // namespace sweq
