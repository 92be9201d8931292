#include "sweq/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "sweq/equilibrium.hpp"
#include "sweq/numerics.hpp"

namespace sweq {

namespace {

constexpr std::int64_t kEvaluationBudget = 10000000;

// ---------------------------------------------------------------------------
// Deterministic randomness. The distributions are implemented by hand on top
// of the raw mt19937_64 stream because the standard library's distribution
// objects are not bit-reproducible across implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    int below(int n) {  // {0, ..., n-1}
        return std::min(static_cast<int>(uniform() * n), n - 1);
    }

    double normal() {  // Box-Muller, cached pair
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    double gamma(double alpha) {  // Marsaglia-Tsang
        if (alpha < 1.0) {
            const double u = std::max(uniform(), 1e-300);
            return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(std::max(u, 1e-300)) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    Vector dirichlet(double alpha, int n) {
        Vector v(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = gamma(alpha);
            sum += v[i];
        }
        if (sum <= 0.0) return Vector::Constant(n, 1.0 / n);
        return v / sum;
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// Static-partition parallel loop; deterministic because every iteration
// writes only to its own index. Exceptions are replayed on the caller.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body) {
    threads = std::max(1, threads);
    if (threads == 1 || count < 2 * threads) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t lo = count * t / threads;
        const std::int64_t hi = count * (t + 1) / threads;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Weak compositions of m into N parts, visited in a fixed order.
struct CompositionCursor {
    std::vector<int> k;
    bool done = false;

    CompositionCursor(int m, int n) : k(static_cast<std::size_t>(n), 0) { k[0] = m; }

    void advance() {
        const int n = static_cast<int>(k.size());
        int i = 0;
        while (i < n - 1 && k[static_cast<std::size_t>(i)] == 0) ++i;
        if (i == n - 1) {
            done = true;
            return;
        }
        const int t = k[static_cast<std::size_t>(i)];
        k[static_cast<std::size_t>(i)] = 0;
        k[0] = t - 1;
        ++k[static_cast<std::size_t>(i + 1)];
    }
};

double composition_count(int m, int n) {  // C(m+n-1, n-1), saturating
    double c = 1.0;
    for (int i = 1; i <= n - 1; ++i) {
        c *= static_cast<double>(m + i) / static_cast<double>(i);
        if (c > 1e18) return 1e18;
    }
    return c;
}

struct Incumbent {
    double fitness = std::numeric_limits<double>::infinity();
    std::optional<SimplexVector> lam;
};

struct EvalCounters {
    std::int64_t evaluations = 0;
    std::optional<std::int64_t> first_feasible;
};

// Evaluates a batch in parallel, then reduces in index order so the outcome
// is independent of the thread count.
void evaluate_batch(const SwitchedSystem& sys, const FitnessConfig& cfg,
                    const std::vector<SimplexVector>& batch, int threads, double mu,
                    Incumbent& incumbent, EvalCounters& counters) {
    std::vector<double> values(batch.size());
    parallel_for(static_cast<std::int64_t>(batch.size()), threads,
                 [&](std::int64_t i) { values[static_cast<std::size_t>(i)] = fitness(sys, batch[static_cast<std::size_t>(i)], cfg); });
    for (std::size_t i = 0; i < batch.size(); ++i) {
        ++counters.evaluations;
        if (!counters.first_feasible && values[i] < mu)
            counters.first_feasible = counters.evaluations;
        if (values[i] < incumbent.fitness) {
            incumbent.fitness = values[i];
            incumbent.lam = batch[i];
        }
    }
}

double simplex_wrap_tol(const NumericConfig& numeric) {
    // Blends and normalized Dirichlet draws miss the simplex only by roundoff.
    return numeric.tol_simplex;
}

// Shared by grid_search and ga_search when the goal pins the full state: the
// admissible lambda form the polytope of the goal point, so its vertices
// (plus centroid) are certified directly instead of searching the simplex.
SearchReport full_state_search(const SwitchedSystem& sys, const FitnessConfig& cfg,
                               const Vector& x_goal, int threads) {
    const auto start = std::chrono::steady_clock::now();
    SearchReport report;
    EquilibriumPolytope poly = enumerate_vertices(sys, x_goal, cfg.numeric);

    std::vector<SimplexVector> candidates = poly.vertices;
    if (poly.vertices.size() >= 2) {
        Vector centroid = Vector::Zero(sys.subsystem_count());
        for (const auto& v : poly.vertices) centroid += v.entries();
        centroid /= static_cast<double>(poly.vertices.size());
        candidates.emplace_back(centroid, simplex_wrap_tol(cfg.numeric));
    }

    Incumbent incumbent;
    EvalCounters counters;
    if (!candidates.empty())
        evaluate_batch(sys, cfg, candidates, threads, cfg.mu, incumbent, counters);

    report.evaluations = counters.evaluations;
    report.first_feasible_evaluation = counters.first_feasible;
    if (incumbent.lam && incumbent.fitness < cfg.mu) {
        report.best = certify(sys, *incumbent.lam, cfg);
        report.best_fitness = incumbent.fitness;
    } else {
        report.best_fitness =
            incumbent.lam ? incumbent.fitness : std::numeric_limits<double>::infinity();
    }
    report.history.push_back(report.best_fitness);
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace

SearchReport grid_search(const SwitchedSystem& sys, const FitnessConfig& cfg,
                         const GridSearchConfig& gcfg, int threads) {
    validate_fitness_config(sys, cfg);
    if (gcfg.resolution < 1) throw InputError("grid resolution must be at least 1");
    if (gcfg.refine_steps < 0) throw InputError("refinement step count cannot be negative");
    if (!(gcfg.refine_shrink > 0.0 && gcfg.refine_shrink < 1.0))
        throw InputError("refine_shrink must lie in (0,1)");

    if (const auto* fs = std::get_if<FullStateGoal>(&cfg.goal))
        return full_state_search(sys, cfg, fs->x_star, threads);

    const auto start = std::chrono::steady_clock::now();
    const int N = sys.subsystem_count();
    const int m = gcfg.resolution;

    const double count = composition_count(m, N);
    const double planned = count * (gcfg.refine_steps + 1.0) + gcfg.refine_steps;
    if (planned > static_cast<double>(kEvaluationBudget))
        throw InputError("grid search would exceed the evaluation budget of 1e7");

    const double wrap = simplex_wrap_tol(cfg.numeric);
    const auto& goal = std::get<OutputGoal>(cfg.goal);

    SearchReport report;
    EvalCounters counters;
    Incumbent incumbent;
    std::optional<SimplexVector> last_feasible;

    constexpr std::size_t kBatch = 8192;
    std::vector<SimplexVector> batch;
    batch.reserve(kBatch);

    for (int round = 0; round <= gcfg.refine_steps; ++round) {
        const double w = std::pow(gcfg.refine_shrink, round);

        FitnessConfig round_cfg = cfg;
        if (gcfg.anneal_output_band && round > 0) {
            OutputGoal tightened = goal;
            tightened.eps = goal.eps * std::pow(gcfg.refine_shrink, round);
            round_cfg.goal = tightened;
        }

        Incumbent round_best;
        if (round > 0) {
            // The incumbent is rescored first: the band may have tightened,
            // and ties during the scan then favour it.
            std::vector<SimplexVector> inc{*incumbent.lam};
            evaluate_batch(sys, round_cfg, inc, 1, cfg.mu, round_best, counters);
        }

        CompositionCursor cursor(m, N);
        while (!cursor.done) {
            Vector g(N);
            for (int i = 0; i < N; ++i)
                g[i] = static_cast<double>(cursor.k[static_cast<std::size_t>(i)]) / m;
            if (round == 0) {
                batch.emplace_back(g, wrap);
            } else {
                const Vector blend = (1.0 - w) * incumbent.lam->entries() + w * g;
                batch.emplace_back(blend, wrap);
            }
            cursor.advance();
            if (batch.size() == kBatch || cursor.done) {
                evaluate_batch(sys, round_cfg, batch, threads, cfg.mu, round_best, counters);
                batch.clear();
            }
        }

        incumbent = round_best;
        report.history.push_back(round_best.fitness);
        if (round_best.fitness < cfg.mu) last_feasible = round_best.lam;
    }

    report.evaluations = counters.evaluations;
    report.first_feasible_evaluation = counters.first_feasible;
    if (last_feasible) {
        // Certified against the caller's goal; rho is band-independent.
        report.best = certify(sys, *last_feasible, cfg);
        if (!report.best) throw NumericError("refined design failed final certification");
        report.best_fitness = report.best->rho;
    } else {
        report.best_fitness = incumbent.fitness;
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SearchReport ga_search(const SwitchedSystem& sys, const FitnessConfig& cfg, const GaConfig& gacfg,
                       int threads) {
    validate_fitness_config(sys, cfg);
    if (gacfg.population_size < 2) throw InputError("population must hold at least 2 individuals");
    if (gacfg.elite_count < 0 || gacfg.elite_count >= gacfg.population_size)
        throw InputError("elite_count must lie in [0, population_size)");
    if (gacfg.tournament_size < 1) throw InputError("tournament size must be positive");
    if (gacfg.max_generations < 0) throw InputError("generation count cannot be negative");
    if (!(gacfg.crossover_rate >= 0.0 && gacfg.crossover_rate <= 1.0))
        throw InputError("crossover rate must lie in [0,1]");
    if (gacfg.mutation_scale <= 0.0) throw InputError("mutation scale must be positive");

    if (const auto* fs = std::get_if<FullStateGoal>(&cfg.goal))
        return full_state_search(sys, cfg, fs->x_star, threads);

    const auto start = std::chrono::steady_clock::now();
    const int N = sys.subsystem_count();
    const int pop_size = gacfg.population_size;
    const double wrap = simplex_wrap_tol(cfg.numeric);

    const double planned =
        static_cast<double>(pop_size) * (static_cast<double>(gacfg.max_generations) + 1.0);
    if (planned > static_cast<double>(kEvaluationBudget))
        throw InputError("GA would exceed the evaluation budget of 1e7");

    Rng rng(gacfg.rng_seed);
    SearchReport report;
    EvalCounters counters;
    Incumbent best;

    std::vector<SimplexVector> pop;
    pop.reserve(static_cast<std::size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i) pop.emplace_back(rng.dirichlet(1.0, N), wrap);

    std::vector<double> values(static_cast<std::size_t>(pop_size));
    auto evaluate_population = [&]() {
        parallel_for(pop_size, threads, [&](std::int64_t i) {
            values[static_cast<std::size_t>(i)] = fitness(sys, pop[static_cast<std::size_t>(i)], cfg);
        });
        for (int i = 0; i < pop_size; ++i) {
            ++counters.evaluations;
            if (!counters.first_feasible && values[static_cast<std::size_t>(i)] < cfg.mu)
                counters.first_feasible = counters.evaluations;
            if (values[static_cast<std::size_t>(i)] < best.fitness) {
                best.fitness = values[static_cast<std::size_t>(i)];
                best.lam = pop[static_cast<std::size_t>(i)];
            }
        }
    };

    evaluate_population();
    report.history.push_back(best.fitness);

    auto tournament = [&]() {
        int winner = rng.below(pop_size);
        for (int k = 1; k < gacfg.tournament_size; ++k) {
            const int challenger = rng.below(pop_size);
            if (values[static_cast<std::size_t>(challenger)] <
                values[static_cast<std::size_t>(winner)])
                winner = challenger;
        }
        return winner;
    };

    int since_improvement = 0;
    for (int gen = 1; gen <= gacfg.max_generations; ++gen) {
        if (since_improvement >= gacfg.stall_generations) break;

        // Elite indices: best fitness first, index as tie-break.
        std::vector<int> order(static_cast<std::size_t>(pop_size));
        for (int i = 0; i < pop_size; ++i) order[static_cast<std::size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
        });

        // All random draws happen here, sequentially, before any evaluation,
        // so the stream is identical no matter how fitness is parallelized.
        std::vector<SimplexVector> next;
        next.reserve(static_cast<std::size_t>(pop_size));
        for (int e = 0; e < gacfg.elite_count; ++e)
            next.push_back(pop[static_cast<std::size_t>(order[static_cast<std::size_t>(e)])]);
        while (static_cast<int>(next.size()) < pop_size) {
            const int pa = tournament();
            const int pb = tournament();
            Vector child;
            if (rng.uniform() < gacfg.crossover_rate) {
                const double theta = rng.uniform();
                child = theta * pop[static_cast<std::size_t>(pa)].entries() +
                        (1.0 - theta) * pop[static_cast<std::size_t>(pb)].entries();
            } else {
                child = pop[static_cast<std::size_t>(pa)].entries();
            }
            // Blend toward a sparse Dirichlet sample; the step size is drawn
            // log-uniformly so one operator covers both exploration and polish.
            const double step = gacfg.mutation_scale * std::pow(10.0, -4.0 * rng.uniform());
            const Vector d = rng.dirichlet(gacfg.mutation_scale, N);
            child = (1.0 - step) * child + step * d;
            next.emplace_back(child, wrap);
        }

        pop = std::move(next);
        const double previous_best = best.fitness;
        evaluate_population();
        report.history.push_back(best.fitness);
        if (best.fitness < previous_best)
            since_improvement = 0;
        else
            ++since_improvement;
    }

    report.evaluations = counters.evaluations;
    report.first_feasible_evaluation = counters.first_feasible;
    report.best_fitness = best.fitness;
    if (best.lam && best.fitness < cfg.mu) report.best = certify(sys, *best.lam, cfg);
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<SweepPoint> constraint_line_sweep(const SwitchedSystem& sys, const FitnessConfig& cfg,
                                              int coordinate, double lo, double hi, int steps,
                                              int threads) {
    if (sys.output_dim() + 1 != sys.state_dim())
        throw InputError("line sweep requires n_z = n_x - 1 so one free coordinate remains");
    if (coordinate < 0 || coordinate >= sys.state_dim())
        throw InputError("sweep coordinate out of range");
    if (steps < 1) throw InputError("sweep needs at least one step");
    const auto* og = std::get_if<OutputGoal>(&cfg.goal);
    if (!og) throw InputError("line sweep requires an output goal");
    if (og->z_star.size() != sys.output_dim()) throw InputError("z* has wrong dimension");

    // x(t) solves [C; e_coord'] x = [z*; t].
    const Eigen::Index n = sys.state_dim();
    Matrix Asys(n, n);
    Asys.topRows(n - 1) = sys.C();
    Asys.row(n - 1).setZero();
    Asys(n - 1, coordinate) = 1.0;
    if (numerical_rank(Asys, cfg.numeric.tol_rank) < n)
        throw InputError("sweep coordinate is not independent of the output constraint");

    std::vector<SweepPoint> points(static_cast<std::size_t>(steps));
    parallel_for(steps, threads, [&](std::int64_t j) {
        const double t =
            (steps == 1) ? lo : lo + (hi - lo) * static_cast<double>(j) / (steps - 1);
        Vector rhs(n);
        rhs.head(n - 1) = og->z_star;
        rhs[n - 1] = t;
        Vector x = solve_linear(Asys, rhs, cfg.numeric.tol_rank);

        SweepPoint point{t, std::nullopt};
        EquilibriumPolytope poly = enumerate_vertices(sys, x, cfg.numeric);
        if (!poly.vertices.empty()) {
            std::vector<SimplexVector> candidates = poly.vertices;
            if (poly.vertices.size() >= 2) {
                Vector centroid = Vector::Zero(sys.subsystem_count());
                for (const auto& v : poly.vertices) centroid += v.entries();
                centroid /= static_cast<double>(poly.vertices.size());
                candidates.emplace_back(centroid, simplex_wrap_tol(cfg.numeric));
            }
            FitnessConfig point_cfg = cfg;
            point_cfg.goal = FullStateGoal{x};
            for (const auto& lam : candidates) {
                if (auto design = certify(sys, lam, point_cfg)) {
                    if (!point.rho || design->rho < *point.rho) point.rho = design->rho;
                }
            }
        }
        points[static_cast<std::size_t>(j)] = std::move(point);
    });
    return points;
}

}  // namespace sweq
