#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sweq/synthesis.hpp"
#include "sweq/system.hpp"
#include "sweq/types.hpp"

namespace sweq {

/// Deterministic simplex-grid search: evaluate every composition k/m, then
/// refine around the incumbent by blending the grid toward it with weight
/// refine_shrink^round. For output goals the band eps is tightened by the
/// same factor each round (anneal_output_band), so refinement converges to
/// the equality-constrained optimum rather than a relaxation-boundary point.
struct GridSearchConfig {
    int resolution = 40;
    int refine_steps = 10;
    double refine_shrink = 0.5;
    bool anneal_output_band = true;
};

struct GaConfig {
    int population_size = 200;
    int max_generations = 100;
    int elite_count = 2;
    int tournament_size = 3;
    double crossover_rate = 0.9;
    double mutation_scale = 0.2;
    std::uint64_t rng_seed = 0;
    int stall_generations = 20;
};

struct SearchReport {
    std::optional<DesignResult> best;
    double best_fitness = 0.0;
    std::vector<double> history;  // best fitness per iteration/generation
    std::int64_t evaluations = 0;
    double wall_time_seconds = 0.0;
    std::optional<std::int64_t> first_feasible_evaluation;  // 1-based count
};

SearchReport grid_search(const SwitchedSystem& sys, const FitnessConfig& cfg,
                         const GridSearchConfig& gcfg, int threads = 1);

SearchReport ga_search(const SwitchedSystem& sys, const FitnessConfig& cfg, const GaConfig& gacfg,
                       int threads = 1);

/// One sample of the cost profile along the output-constrained line.
struct SweepPoint {
    double coordinate = 0.0;
    std::optional<double> rho;  // empty when no certified design exists there
};

/// Samples x on the affine set {C x = z_star} parameterized by the given free
/// state coordinate swept over [lo, hi] in `steps` points; at each sample the
/// equilibrium polytope vertices (and centroid) are certified and the best
/// rho recorded.
std::vector<SweepPoint> constraint_line_sweep(const SwitchedSystem& sys, const FitnessConfig& cfg,
                                              int coordinate, double lo, double hi, int steps,
                                              int threads = 1);

}  // namespace sweq
