#include "oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sweq/numerics.hpp"

namespace sweq::testing {

namespace {

// Enumerate compositions of m into N parts, calling fn(k) for each.
template <typename Fn>
void for_each_composition(int m, int parts, Fn&& fn) {
    std::vector<int> k(static_cast<std::size_t>(parts), 0);
    k[0] = m;
    for (;;) {
        fn(k);
        int i = 0;
        const int last = parts - 1;
        while (i < last && k[static_cast<std::size_t>(i)] == 0) ++i;
        if (i == last) break;
        const int t = k[static_cast<std::size_t>(i)];
        k[static_cast<std::size_t>(i)] = 0;
        k[0] = t - 1;
        ++k[static_cast<std::size_t>(i + 1)];
    }
}

}  // namespace

double grid_min_residual(const Matrix& M, int m) {
    const int parts = static_cast<int>(M.cols());
    double best = std::numeric_limits<double>::infinity();
    Vector lam(parts);
    for_each_composition(m, parts, [&](const std::vector<int>& k) {
        for (int i = 0; i < parts; ++i) lam[i] = static_cast<double>(k[static_cast<std::size_t>(i)]) / m;
        const double resid = (M * lam).cwiseAbs().maxCoeff();
        best = std::min(best, resid);
    });
    return best;
}

std::vector<Vector> brute_force_vertices(const SwitchedSystem& sys, const Vector& x, double tol) {
    const int N = sys.subsystem_count();
    const Matrix M = build_M(sys, x);
    const int n = static_cast<int>(M.rows());

    struct Hit {
        std::vector<int> support;
        Vector lam;
    };
    std::vector<Hit> hits;

    // Every nonempty subset of modes, via bitmask.
    for (unsigned mask = 1; mask < (1u << N); ++mask) {
        std::vector<int> support;
        for (int i = 0; i < N; ++i)
            if (mask & (1u << i)) support.push_back(i);
        const int s = static_cast<int>(support.size());

        // Solve [M_S; 1'] mu = [0; 1] by least squares and validate.
        Matrix A(n + 1, s);
        for (int c = 0; c < s; ++c) {
            A.block(0, c, n, 1) = M.col(support[static_cast<std::size_t>(c)]);
            A(n, c) = 1.0;
        }
        Vector rhs = Vector::Zero(n + 1);
        rhs[n] = 1.0;
        const Vector mu = A.colPivHouseholderQr().solve(rhs);
        if ((A * mu - rhs).cwiseAbs().maxCoeff() > tol) continue;
        if (mu.minCoeff() < -tol) continue;

        Vector lam = Vector::Zero(N);
        for (int c = 0; c < s; ++c) {
            lam[support[static_cast<std::size_t>(c)]] = std::max(mu[c], 0.0);
        }
        lam /= lam.sum();
        hits.push_back({support, lam});
    }

    // Vertices are exactly the minimal feasible supports.  The solved weights
    // may leave some support entries at zero; use the effective support.
    for (auto& h : hits) {
        std::vector<int> eff;
        for (int i = 0; i < N; ++i)
            if (h.lam[i] > tol) eff.push_back(i);
        if (!eff.empty()) h.support = std::move(eff);
    }

    std::vector<Vector> vertices;
    for (std::size_t a = 0; a < hits.size(); ++a) {
        bool minimal = true;
        for (std::size_t b = 0; b < hits.size() && minimal; ++b) {
            if (a == b) continue;
            if (hits[b].support.size() < hits[a].support.size() &&
                std::includes(hits[a].support.begin(), hits[a].support.end(),
                              hits[b].support.begin(), hits[b].support.end()))
                minimal = false;
        }
        if (!minimal) continue;
        bool duplicate = false;
        for (const auto& v : vertices)
            if ((v - hits[a].lam).cwiseAbs().maxCoeff() < 1e-7) duplicate = true;
        if (!duplicate) vertices.push_back(hits[a].lam);
    }
    return vertices;
}

Matrix quadrature_lyapunov(const Matrix& A, const Matrix& Q, double horizon, int panels) {
    if (panels % 2 != 0) ++panels;
    const int n = static_cast<int>(A.rows());
    const double h = horizon / panels;
    const Matrix Phi = (h * A).exp();

    // f(t) = e^{A't} Q e^{At}, advanced by Phi each step.
    Matrix E = Matrix::Identity(n, n);  // e^{At} at the current node
    Matrix sum = Q;                     // endpoint t = 0 with weight 1
    for (int i = 1; i < panels; ++i) {
        E = (E * Phi).eval();
        const Matrix f = E.transpose() * Q * E;
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f;
    }
    E = (E * Phi).eval();
    sum += E.transpose() * Q * E;  // endpoint t = horizon
    Matrix P = (h / 3.0) * sum;
    return ((P + P.transpose()) / 2.0).eval();
}

PlantedInstance make_planted_instance(TestRng& rng, int n_x, int modes) {
    // Target Hurwitz matrix: random shifted to have spectral abscissa <= -0.5.
    Matrix R = rng.matrix(n_x, n_x);
    const Matrix H0 = R - (R.norm() + 0.5) * Matrix::Identity(n_x, n_x);

    const Vector lam = rng.simplex(modes);

    std::vector<Matrix> A;
    std::vector<Vector> b;
    for (int i = 0; i < modes; ++i) {
        A.push_back(rng.matrix(n_x, n_x));
        b.push_back(rng.vector(n_x));
    }
    Matrix Alam = Matrix::Zero(n_x, n_x);
    Vector blam = Vector::Zero(n_x);
    for (int i = 0; i < modes; ++i) {
        Alam += lam[i] * A[static_cast<std::size_t>(i)];
        blam += lam[i] * b[static_cast<std::size_t>(i)];
    }
    const Matrix shift = H0 - Alam;
    for (auto& Ai : A) Ai += shift;

    const Vector x_star = -H0.partialPivLu().solve(blam);

    PlantedInstance out{SwitchedSystem(A, b), lam, x_star};
    return out;
}

}  // namespace sweq::testing
