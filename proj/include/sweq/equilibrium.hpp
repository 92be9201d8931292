#pragma once

#include <optional>
#include <vector>

#include "sweq/system.hpp"
#include "sweq/types.hpp"

namespace sweq {

/// Equilibrium of one subsystem under constant switching. `point` holds
/// -A_i^{-1} b_i when A_i is invertible; a consistent singular system yields
/// an affine family of equilibria, flagged with an empty `point`.
struct ConstantEquilibrium {
    int subsystem = 0;  // 1-based mode label
    std::optional<Vector> point;
};

/// Witness that x_star is an equilibrium: M(x_star) lam = 0 with lam in the
/// simplex and residual = ||M(x_star) lam||_inf.
struct EquilibriumCertificate {
    Vector x_star;
    SimplexVector lam;
    double residual = 0.0;
};

/// Face of the simplex, encoded by the sorted set of coordinates (0-based)
/// allowed to be nonzero.
struct FaceSupport {
    std::vector<int> indices;
};

/// The polytope of simplex vectors associated with one equilibrium point,
/// represented by its vertices; supports[i] is the face carrying vertices[i].
struct EquilibriumPolytope {
    Vector x_star;
    std::vector<SimplexVector> vertices;
    std::vector<FaceSupport> supports;
};

/// All equilibria reachable by constant switching (one entry per subsystem
/// whose equation A_i x = -b_i is consistent).
std::vector<ConstantEquilibrium> constant_equilibria(const SwitchedSystem& sys,
                                                     const NumericConfig& cfg = {});

/// Cheap necessary test: false means x is certainly not an equilibrium
/// (M(x) has full column rank); true means inconclusive, run the LP.
bool screen_candidate(const SwitchedSystem& sys, const Vector& x, const NumericConfig& cfg = {});

/// Full membership test via LP feasibility.
std::optional<EquilibriumCertificate> check_membership(const SwitchedSystem& sys, const Vector& x,
                                                       const NumericConfig& cfg = {});

/// Enumerates every vertex of the polytope of simplex vectors associated with
/// x. Sweeps supports by increasing size; supports containing an already
/// successful one are pruned, so each feasible survivor pins a unique vertex.
/// Returns an empty polytope when x is not an equilibrium.
EquilibriumPolytope enumerate_vertices(const SwitchedSystem& sys, const Vector& x,
                                       const NumericConfig& cfg = {});

}  // namespace sweq
