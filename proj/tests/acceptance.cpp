// Acceptance gate for the switched-equilibria toolkit.  Each numbered
// criterion prints one [PASS]/[FAIL] line with its wall time; the process
// exits nonzero if any criterion fails.  Criteria 1-5 drive the installed CLI
// end to end; criterion 6 cross-checks the core algorithms against the slow,
// independent oracles in oracles.cpp.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "sweq/equilibrium.hpp"
#include "sweq/io.hpp"
#include "sweq/lp.hpp"
#include "sweq/numerics.hpp"
#include "sweq/search.hpp"
#include "sweq/sim.hpp"
#include "sweq/synthesis.hpp"
#include "sweq/system.hpp"

namespace {

using Json = nlohmann::json;
using namespace sweq;
using sweq::testing::TestRng;

const std::string kCli = SWEQ_CLI_PATH;
const std::string kData = SWEQ_DATA_DIR;

std::string data_file(const std::string& name) { return kData + "/" + name; }

std::string tmp_file(const std::string& name) {
    return "/tmp/sweq_acceptance_" + std::to_string(::getpid()) + "_" + name;
}

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

Json read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing report file " + path);
    return Json::parse(in);
}

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Vector json_vector(const Json& a) {
    Vector v(static_cast<int>(a.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = a[static_cast<std::size_t>(i)].get<double>();
    return v;
}

// Unordered match between two vertex sets at an infinity-norm tolerance.
bool same_vertex_set(const std::vector<Vector>& got, const std::vector<Vector>& want,
                     double tol) {
    if (got.size() != want.size()) return false;
    std::vector<bool> used(want.size(), false);
    for (const auto& g : got) {
        bool hit = false;
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (used[i] || want[i].size() != g.size()) continue;
            if ((g - want[i]).lpNorm<Eigen::Infinity>() <= tol) {
                used[i] = hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

bool bits_equal(const Vector& a, const Vector& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) ==
               0;
}

bool bits_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) ==
               0;
}

FitnessConfig output_config(const SwitchedSystem& sys, double z_star, double eps = 1e-2) {
    FitnessConfig cfg;
    cfg.Q = Matrix::Identity(sys.state_dim(), sys.state_dim());
    cfg.x0 = Vector::Ones(sys.state_dim());
    Vector zs(1);
    zs << z_star;
    cfg.goal = OutputGoal{zs, Matrix(), Vector(), eps};
    return cfg;
}

struct Gate {
    int failed = 0;

    void run(const std::string& name, double time_limit_s,
             const std::function<bool(std::string&)>& body) {
        std::string note;
        bool ok = false;
        const double t0 = now_seconds();
        try {
            ok = body(note);
        } catch (const std::exception& e) {
            ok = false;
            note = std::string("exception: ") + e.what();
        }
        const double dt = now_seconds() - t0;
        if (ok && dt > time_limit_s) {
            ok = false;
            note = "exceeded the " + std::to_string(time_limit_s) + " s time limit";
        }
        std::printf("[%s] %-56s %7.2f s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), dt,
                    note.empty() ? "" : "  -- ", note.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
};

}  // namespace

int main() {
    std::printf("acceptance gate, toolkit version %s\n", kVersion);
    Gate gate;

    // Shared between criteria 3 and 4: the design optimum the sweep must match.
    double rho_design = 0.0;

    // ------------------------------------------------------------------
    // 1. Membership on the scalar two-mode example: every state is an
    //    equilibrium with weights [0.5, 0.5]; each CLI call under 0.1 s.
    // ------------------------------------------------------------------
    gate.run("1. membership certificates on example 1", 5.0, [&](std::string& note) {
        const std::string rep = tmp_file("c1.json");
        run_cli("check " + data_file("example1.json") + " --x=0 --report " + rep);  // warm-up
        for (const std::string x : {"-3", "0", "7"}) {
            const double t0 = now_seconds();
            const int rc =
                run_cli("check " + data_file("example1.json") + " --x=" + x + " --report " + rep);
            const double dt = now_seconds() - t0;
            if (rc != 0) {
                note = "exit code " + std::to_string(rc) + " at x=" + x;
                return false;
            }
            if (dt >= 0.1) {
                note = "call at x=" + x + " took " + std::to_string(dt) + " s (limit 0.1 s)";
                return false;
            }
            const Json j = read_report(rep);
            if (!j["result"]["member"].get<bool>()) {
                note = "x=" + x + " not recognized as an equilibrium";
                return false;
            }
            const Vector lam = json_vector(j["result"]["certificate"]["lambda"]);
            if (lam.size() != 2 || std::abs(lam[0] - 0.5) > 1e-9 || std::abs(lam[1] - 0.5) > 1e-9) {
                note = "weights differ from [0.5, 0.5] at x=" + x;
                return false;
            }
        }
        std::remove(rep.c_str());
        return true;
    });

    // ------------------------------------------------------------------
    // 2. Vertex enumeration on the four-mode planar example at the origin,
    //    plus its restricted-support variants; each CLI call under 1 s.
    // ------------------------------------------------------------------
    gate.run("2. vertex enumeration on example 2", 10.0, [&](std::string& note) {
        const std::string rep = tmp_file("c2.json");
        auto vertices_of = [&](const std::string& file, int& rc, double& dt) {
            const double t0 = now_seconds();
            rc = run_cli("vertices " + data_file(file) + " --x=0,0 --report " + rep);
            dt = now_seconds() - t0;
            std::vector<Vector> got;
            const Json j = read_report(rep);  // named: the loop below must not
                                              // iterate into a dead temporary
            for (const auto& v : j["result"]["vertices"]) got.push_back(json_vector(v));
            return got;
        };

        int rc = 0;
        double dt = 0.0;
        const auto base = vertices_of("example2.json", rc, dt);
        std::vector<Vector> expected;
        for (auto [a, b] : {std::pair{0, 2}, {0, 3}, {1, 2}, {1, 3}}) {
            Vector v = Vector::Zero(4);
            v[a] = v[b] = 0.5;
            expected.push_back(v);
        }
        if (rc != 0 || !same_vertex_set(base, expected, 1e-6)) {
            note = "base system: wrong vertex set (exit " + std::to_string(rc) + ", " +
                   std::to_string(base.size()) + " vertices)";
            return false;
        }
        if (dt >= 1.0) {
            note = "base call took " + std::to_string(dt) + " s (limit 1 s)";
            return false;
        }

        const auto s4 = vertices_of("example2_s4.json", rc, dt);
        if (rc != 0 || s4.size() != 1 || dt >= 1.0) {
            note = "restricted variant S4 should yield exactly one vertex";
            return false;
        }

        const auto s0 = vertices_of("example2_s0.json", rc, dt);
        std::vector<Vector> basis;
        for (int i = 0; i < 4; ++i) {
            Vector v = Vector::Zero(4);
            v[i] = 1.0;
            basis.push_back(v);
        }
        if (rc != 0 || !same_vertex_set(s0, basis, 1e-6) || dt >= 1.0) {
            note = "variant S0 should yield the four standard basis vectors";
            return false;
        }
        std::remove(rep.c_str());
        return true;
    });

    // ------------------------------------------------------------------
    // 3. Joint design on example 3 with the deterministic grid method, and
    //    an audit of the reference certificate at the reference weights.
    // ------------------------------------------------------------------
    gate.run("3. grid design on example 3 (m=40, 10 rounds)", 30.0, [&](std::string& note) {
        const std::string rep = tmp_file("c3.json");
        const int rc = run_cli("design " + data_file("example3.json") +
                               " --goal output:0 --method grid --grid-resolution 40"
                               " --refine-steps 10 --report " +
                               rep);
        if (rc != 0) {
            note = "design exit code " + std::to_string(rc);
            return false;
        }
        const Json j = read_report(rep);
        const Vector xs = json_vector(j["result"]["design"]["x_star"]);
        const double rho = j["result"]["design"]["rho"].get<double>();
        if (std::abs(xs[0] + 0.0854) > 5e-3 || std::abs(xs[1]) > 5e-3) {
            note = "equilibrium off target: [" + std::to_string(xs[0]) + ", " +
                   std::to_string(xs[1]) + "]";
            return false;
        }
        if (std::abs(rho - 0.2070) > 0.02 * 0.2070) {
            note = "cost bound " + std::to_string(rho) + " outside 2% of 0.2070";
            return false;
        }
        rho_design = rho;

        // The reference certificate (rounded to four digits) must pass the
        // audit: P positive definite, Lyapunov excess within the rounding
        // slack, equilibrium residual small.
        const SwitchedSystem sys = load_system(data_file("example3.json"));
        Vector lam(3), xstar(2);
        lam << 0.3204, 0.0, 0.6796;
        xstar << -0.0854, 0.0;
        Matrix P(2, 2);
        P << 0.0816, -0.0209, -0.0209, 0.1883;
        const auto audit =
            audit_certificate(sys, SimplexVector(lam), xstar, P, Matrix::Identity(2, 2),
                              Vector::Ones(2));
        if (!audit.positive_definite) {
            note = "reference P not positive definite";
            return false;
        }
        if (audit.lyapunov_excess > 0.05) {
            note = "reference P Lyapunov excess " + std::to_string(audit.lyapunov_excess);
            return false;
        }
        if (audit.equilibrium_residual > 1e-3) {
            note = "reference weights equilibrium residual " +
                   std::to_string(audit.equilibrium_residual);
            return false;
        }
        std::remove(rep.c_str());
        return true;
    });

    // ------------------------------------------------------------------
    // 4. Cost sweep along x1 on example 3: minimum location and value must
    //    agree with the design optimum.
    // ------------------------------------------------------------------
    gate.run("4. cost sweep along x1 on example 3 (200 steps)", 60.0, [&](std::string& note) {
        const std::string rep = tmp_file("c4.json");
        const int rc = run_cli("sweep " + data_file("example3.json") +
                               " --z=0 --coord 1 --range=-1.5,1 --steps 200 --report " + rep);
        if (rc != 0) {
            note = "sweep exit code " + std::to_string(rc);
            return false;
        }
        const Json j = read_report(rep);
        if (j["result"]["min"].is_null()) {
            note = "sweep found no feasible point";
            return false;
        }
        const double coord = j["result"]["min"]["coordinate"].get<double>();
        const double rho_min = j["result"]["min"]["rho"].get<double>();
        const double cell = 2.5 / 199.0;
        if (std::abs(coord + 0.0854) > 2.0 * cell + 1e-12) {
            note = "minimum at x1=" + std::to_string(coord) + ", expected near -0.0854";
            return false;
        }
        const double ref = rho_design > 0.0 ? rho_design : 0.2070;
        if (std::abs(rho_min - ref) > 0.02 * ref) {
            note = "sweep minimum " + std::to_string(rho_min) + " outside 2% of the design value " +
                   std::to_string(ref);
            return false;
        }
        std::remove(rep.c_str());
        return true;
    });

    // ------------------------------------------------------------------
    // 5. GA on the eight-mode example: at least 9 of 10 seeds reach a
    //    certified design with rho <= 15 within 100 generations.
    // ------------------------------------------------------------------
    gate.run("5. GA feasibility rate on example 4 (10 seeds)", 600.0, [&](std::string& note) {
        const std::string rep = tmp_file("c5.json");
        const int rc = run_cli("design " + data_file("example4.json") +
                               " --goal output:0 --method ga --pop 200 --gens 100"
                               " --seed 0 --seed-sweep 10 --threads 4 --report " +
                               rep);
        if (rc != 0 && rc != 1) {
            note = "design exit code " + std::to_string(rc);
            return false;
        }
        const Json j = read_report(rep);
        int good = 0;
        for (const auto& s : j["result"]["per_seed"])
            if (s["feasible"].get<bool>() && s["rho"].get<double>() <= 15.0) ++good;
        if (good < 9) {
            note = "only " + std::to_string(good) + "/10 seeds reached rho <= 15";
            return false;
        }
        std::remove(rep.c_str());
        return true;
    });

    // ------------------------------------------------------------------
    // 6a. LP feasibility against the simplex-grid oracle on 100 instances
    //     with planted status (50 feasible, 50 infeasible).
    // ------------------------------------------------------------------
    gate.run("6a. LP vs simplex-grid oracle (100 instances)", 120.0, [&](std::string& note) {
        TestRng rng(9001);
        const int grid_m = 200;
        for (int idx = 0; idx < 100; ++idx) {
            const int N = 2 + idx % 3;
            const int n = 1 + idx % 3;
            Matrix M(n, N);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < N; ++c) M(r, c) = rng.uniform(-2.0, 2.0);

            const bool planted_feasible = idx % 2 == 0;
            if (planted_feasible) {
                // Round a random simplex point onto the k/m grid by largest
                // remainder, then shift M so that exact point is a zero.
                const Vector lam = rng.simplex(N);
                std::vector<int> k(static_cast<std::size_t>(N));
                int total = 0;
                for (int i = 0; i < N; ++i) {
                    k[static_cast<std::size_t>(i)] =
                        static_cast<int>(std::floor(lam[i] * grid_m));
                    total += k[static_cast<std::size_t>(i)];
                }
                while (total < grid_m) {
                    int best = 0;
                    double best_rem = -1.0;
                    for (int i = 0; i < N; ++i) {
                        const double rem = lam[i] * grid_m - k[static_cast<std::size_t>(i)];
                        if (rem > best_rem) {
                            best_rem = rem;
                            best = i;
                        }
                    }
                    ++k[static_cast<std::size_t>(best)];
                    ++total;
                }
                Vector on_grid(N);
                for (int i = 0; i < N; ++i)
                    on_grid[i] = k[static_cast<std::size_t>(i)] / static_cast<double>(grid_m);
                M -= (M * on_grid) * Eigen::RowVectorXd::Ones(N);
            } else {
                // Push the first row above 0.5 everywhere: no convex
                // combination of the columns can vanish.
                const double lo = M.row(0).minCoeff();
                M.row(0) = (M.row(0).array() - lo + 0.5).matrix();
            }

            const double gmin = testing::grid_min_residual(M, grid_m);
            const bool oracle_feasible = gmin < 1e-8;
            if (oracle_feasible != planted_feasible) {
                note = "oracle disagrees with planted status on instance " + std::to_string(idx);
                return false;
            }

            LpFeasibilityProblem p;
            p.Aeq = Matrix(n + 1, N);
            p.Aeq.topRows(n) = M;
            p.Aeq.row(n).setOnes();
            p.beq = Vector::Zero(n + 1);
            p.beq[n] = 1.0;
            if (solve_feasibility(p).has_value() != oracle_feasible) {
                note = "LP disagrees with the oracle on instance " + std::to_string(idx);
                return false;
            }
        }
        return true;
    });

    // ------------------------------------------------------------------
    // 6b. Vertex enumeration against brute-force support search on 50
    //     random systems (half with a planted equilibrium).
    // ------------------------------------------------------------------
    gate.run("6b. vertex enumeration vs brute force (50 instances)", 60.0,
             [&](std::string& note) {
                 TestRng rng(424242);
                 for (int idx = 0; idx < 50; ++idx) {
                     const int n = 1 + idx % 3;
                     const int N = 2 + idx % 5;
                     std::vector<Matrix> A;
                     std::vector<Vector> b;
                     for (int k = 0; k < N; ++k) {
                         A.push_back(rng.matrix(n, n));
                         b.push_back(rng.vector(n));
                     }
                     const Vector x = rng.vector(n);
                     if (idx % 2 == 0) {
                         // Shift every offset so a random convex combination
                         // vanishes at x.
                         const Vector lam = rng.simplex(N);
                         Vector r = Vector::Zero(n);
                         for (int k = 0; k < N; ++k) r += lam[k] * (A[static_cast<std::size_t>(k)] * x + b[static_cast<std::size_t>(k)]);
                         for (int k = 0; k < N; ++k) b[static_cast<std::size_t>(k)] -= r;
                     }
                     const SwitchedSystem sys(A, b);
                     const auto poly = enumerate_vertices(sys, x);
                     std::vector<Vector> got;
                     for (const auto& v : poly.vertices) got.push_back(v.entries());
                     const auto want = testing::brute_force_vertices(sys, x);
                     if (!same_vertex_set(got, want, 1e-6)) {
                         note = "vertex sets differ on instance " + std::to_string(idx) + " (" +
                                std::to_string(got.size()) + " vs " + std::to_string(want.size()) +
                                ")";
                         return false;
                     }
                 }
                 return true;
             });

    // ------------------------------------------------------------------
    // 6c. Lyapunov solver against quadrature on 20 random stable systems,
    //     then Schur reconstruction of both certificate blocks on a
    //     certified example 3 design.
    // ------------------------------------------------------------------
    gate.run("6c. Lyapunov solver vs quadrature + certificate blocks", 60.0,
             [&](std::string& note) {
                 TestRng rng(777);
                 for (int idx = 0; idx < 20; ++idx) {
                     const int n = 1 + idx % 4;
                     const Matrix R = rng.matrix(n, n);
                     const Matrix A = R - (R.norm() + 0.5) * Matrix::Identity(n, n);
                     const Matrix G = rng.matrix(n, n);
                     const Matrix Q = G.transpose() * G + 0.2 * Matrix::Identity(n, n);
                     const Matrix P = solve_lyapunov(A, Q);
                     const Matrix Pq = testing::quadrature_lyapunov(A, Q, 40.0, 12000);
                     const double rel = (P - Pq).norm() / Pq.norm();
                     if (!(rel <= 1e-4)) {
                         note = "relative error " + std::to_string(rel) + " on instance " +
                                std::to_string(idx);
                         return false;
                     }
                 }

                 const SwitchedSystem sys = load_system(data_file("example3.json"));
                 const FitnessConfig cfg = output_config(sys, 0.0);
                 Vector lam(3);
                 lam << 0.3204, 0.0, 0.6796;
                 const SimplexVector slam(lam);
                 const auto d = certify(sys, slam, cfg);
                 if (!d) {
                     note = "certify failed at the benchmark weights";
                     return false;
                 }
                 const auto [Alam, blam] = convex_dynamics(sys, slam);
                 Matrix W = d->P.inverse();
                 W = 0.5 * (W + W.transpose()).eval();
                 const Vector u = cfg.x0 - d->x_star;
                 const int n = sys.state_dim();

                 Matrix cost_block(n + 1, n + 1);
                 cost_block(0, 0) = d->rho + 1e-6;
                 cost_block.block(0, 1, 1, n) = u.transpose();
                 cost_block.block(1, 0, n, 1) = u;
                 cost_block.block(1, 1, n, n) = W;

                 Matrix stab_block(2 * n, 2 * n);
                 stab_block.topLeftCorner(n, n) = -W * Alam.transpose() - Alam * W;
                 stab_block.topRightCorner(n, n) = W * cfg.Q;
                 stab_block.bottomLeftCorner(n, n) = cfg.Q * W;
                 stab_block.bottomRightCorner(n, n) = cfg.Q;

                 if (!is_positive_definite(cost_block, 1e-12)) {
                     note = "reconstructed cost block not positive definite";
                     return false;
                 }
                 if (!is_positive_definite(stab_block, 1e-12)) {
                     note = "reconstructed stability block not positive definite";
                     return false;
                 }
                 return true;
             });

    // ------------------------------------------------------------------
    // 6d. Simulated closed-loop cost within 1.05x the guaranteed bound at
    //     h = 1e-4 on examples 1, 3, 4 and ten random stabilizable systems.
    // ------------------------------------------------------------------
    gate.run("6d. simulated cost within the guaranteed bound", 300.0, [&](std::string& note) {
        // Example 1: the convex combination is a pure integrator, so no
        // quadratic certificate exists; the min-type rule about the origin
        // with P = 1 still realizes the sliding motion, and rho = 0.09
        // bounds the cost from x0 = 0.3 (|x| decreases at unit rate).
        {
            const SwitchedSystem sys = load_system(data_file("example1.json"));
            SwitchingRule rule;
            rule.P = Matrix::Identity(1, 1);
            rule.x_star = Vector::Zero(1);
            Vector x0(1);
            x0 << 0.3;
            const double rho = 0.09;
            const auto traj = simulate(sys, rule, x0, Matrix::Identity(1, 1), 6.0, 1e-4);
            if (traj.cost.back() > 1.05 * rho) {
                note = "example 1 cost " + std::to_string(traj.cost.back()) + " exceeds " +
                       std::to_string(1.05 * rho);
                return false;
            }
        }
        // Example 3 certified at the benchmark weights.
        {
            const SwitchedSystem sys = load_system(data_file("example3.json"));
            const FitnessConfig cfg = output_config(sys, 0.0);
            Vector lam(3);
            lam << 0.3204, 0.0, 0.6796;
            const auto d = certify(sys, SimplexVector(lam), cfg);
            if (!d) {
                note = "certify failed on example 3";
                return false;
            }
            const auto traj = simulate(sys, {d->P, d->x_star}, cfg.x0, cfg.Q, 10.0, 1e-4);
            if (traj.cost.back() > 1.05 * d->rho) {
                note = "example 3 cost " + std::to_string(traj.cost.back()) + " exceeds bound " +
                       std::to_string(d->rho);
                return false;
            }
        }
        // Example 4: best GA design.
        {
            const SwitchedSystem sys = load_system(data_file("example4.json"));
            const FitnessConfig cfg = output_config(sys, 0.0);
            GaConfig ga;
            ga.population_size = 200;
            ga.rng_seed = 0;
            const auto rep = ga_search(sys, cfg, ga, 4);
            if (!rep.best) {
                note = "GA found no certified design on example 4";
                return false;
            }
            const auto traj =
                simulate(sys, {rep.best->P, rep.best->x_star}, cfg.x0, cfg.Q, 10.0, 1e-4);
            if (traj.cost.back() > 1.05 * rep.best->rho) {
                note = "example 4 cost " + std::to_string(traj.cost.back()) + " exceeds bound " +
                       std::to_string(rep.best->rho);
                return false;
            }
        }
        // Ten random stabilizable systems with a planted combination.
        TestRng rng(31337);
        for (int idx = 0; idx < 10; ++idx) {
            const int n = 1 + idx % 3;
            const int N = 2 + idx % 3;
            const auto inst = testing::make_planted_instance(rng, n, N);
            FitnessConfig cfg;
            cfg.Q = Matrix::Identity(n, n);
            Vector dir = rng.vector(n);
            dir.normalize();
            cfg.x0 = inst.x_star + dir;
            cfg.goal = FullStateGoal{inst.x_star};
            const auto d = certify(inst.sys, SimplexVector(inst.lam), cfg);
            if (!d) {
                note = "certify failed on planted instance " + std::to_string(idx);
                return false;
            }
            const auto traj = simulate(inst.sys, {d->P, d->x_star}, cfg.x0, cfg.Q, 15.0, 1e-4);
            if (traj.cost.back() > 1.05 * d->rho) {
                note = "planted instance " + std::to_string(idx) + " cost " +
                       std::to_string(traj.cost.back()) + " exceeds bound " +
                       std::to_string(d->rho);
                return false;
            }
        }
        return true;
    });

    // ------------------------------------------------------------------
    // 6e. GA determinism: the same seed must reproduce the search report
    //     bit for bit on example 4.
    // ------------------------------------------------------------------
    gate.run("6e. GA determinism on example 4", 120.0, [&](std::string& note) {
        const SwitchedSystem sys = load_system(data_file("example4.json"));
        const FitnessConfig cfg = output_config(sys, 0.0);
        GaConfig ga;
        ga.population_size = 120;
        ga.max_generations = 40;
        ga.rng_seed = 11;
        const auto r1 = ga_search(sys, cfg, ga, 4);
        const auto r2 = ga_search(sys, cfg, ga, 4);
        if (std::memcmp(&r1.best_fitness, &r2.best_fitness, sizeof(double)) != 0) {
            note = "best fitness differs between runs";
            return false;
        }
        if (r1.evaluations != r2.evaluations ||
            r1.first_feasible_evaluation != r2.first_feasible_evaluation) {
            note = "evaluation counters differ between runs";
            return false;
        }
        if (r1.history.size() != r2.history.size() ||
            std::memcmp(r1.history.data(), r2.history.data(),
                        sizeof(double) * r1.history.size()) != 0) {
            note = "fitness history differs between runs";
            return false;
        }
        if (r1.best.has_value() != r2.best.has_value()) {
            note = "one run found a design, the other did not";
            return false;
        }
        if (r1.best) {
            if (!bits_equal(r1.best->lam.entries(), r2.best->lam.entries()) ||
                !bits_equal(r1.best->x_star, r2.best->x_star) ||
                !bits_equal(r1.best->P, r2.best->P) ||
                std::memcmp(&r1.best->rho, &r2.best->rho, sizeof(double)) != 0) {
                note = "best designs differ between runs";
                return false;
            }
        }
        return true;
    });

    if (gate.failed == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criterion(s) failed\n", gate.failed);
    return 1;
}
