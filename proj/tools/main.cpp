#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sweq/equilibrium.hpp"
#include "sweq/io.hpp"
#include "sweq/numerics.hpp"
#include "sweq/search.hpp"
#include "sweq/sim.hpp"
#include "sweq/synthesis.hpp"

namespace {

using namespace sweq;

std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InputError(what + ": cannot parse number '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size())
            throw InputError(what + ": cannot parse number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InputError(what + ": empty value");
    return out;
}

Vector parse_vector(const std::string& text, const std::string& what) {
    const auto nums = parse_numbers(text, ',', what);
    Vector v(static_cast<Eigen::Index>(nums.size()));
    for (std::size_t i = 0; i < nums.size(); ++i) v[static_cast<Eigen::Index>(i)] = nums[i];
    return v;
}

// Rows separated by ';', entries by ','.
Matrix parse_matrix(const std::string& text, const std::string& what) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_numbers(row, ',', what));
    if (rows.empty()) throw InputError(what + ": empty value");
    const std::size_t cols = rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw InputError(what + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return m;
}

int env_threads() {
    const char* env = std::getenv("SWEQ_THREADS");
    if (!env || !*env) return 1;
    try {
        const int t = std::stoi(env);
        if (t < 1) throw InputError("SWEQ_THREADS must be at least 1");
        return t;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError(std::string("SWEQ_THREADS: cannot parse '") + env + "'");
    }
}

OrderedJson tolerances_to_json(const NumericConfig& nc) {
    OrderedJson j;
    j["tol_simplex"] = nc.tol_simplex;
    j["tol_rank"] = nc.tol_rank;
    j["tol_pd"] = nc.tol_pd;
    j["tol_lp"] = nc.tol_lp;
    j["cert_tol"] = nc.cert_tol;
    j["lyap_delta"] = nc.lyap_delta;
    return j;
}

OrderedJson base_report(const std::string& command, const std::string& system_path,
                        const SwitchedSystem& sys) {
    OrderedJson j;
    j["schema"] = 1;
    j["version"] = kVersion;
    j["command"] = command;
    OrderedJson sys_echo;
    sys_echo["path"] = system_path;
    sys_echo["n_x"] = sys.state_dim();
    sys_echo["n_z"] = sys.output_dim();
    sys_echo["N"] = sys.subsystem_count();
    sys_echo["definition"] = system_to_json(sys);
    j["system"] = std::move(sys_echo);
    return j;
}

void emit_report(const OrderedJson& report, const std::string& report_path) {
    const std::string text = report.dump(2) + "\n";
    if (report_path.empty())
        std::cout << text;
    else
        write_text_atomic(report_path, text);
}

OrderedJson search_to_json(const SearchReport& report) {
    OrderedJson j;
    j["best_fitness"] = report.best_fitness;
    j["evaluations"] = report.evaluations;
    if (report.first_feasible_evaluation)
        j["first_feasible_evaluation"] = *report.first_feasible_evaluation;
    else
        j["first_feasible_evaluation"] = nullptr;
    j["wall_time_seconds"] = report.wall_time_seconds;
    j["history"] = report.history;
    return j;
}

// Shared flags --------------------------------------------------------------

struct CommonOpts {
    std::string system_path;
    std::string report_path;
    NumericConfig numeric;
    int threads = 0;  // 0: resolve from SWEQ_THREADS at run time
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("system", opts.system_path, "System definition (JSON)")->required();
    cmd->add_option("--report", opts.report_path, "Write the JSON report here (default: stdout)");
    cmd->add_option("--threads", opts.threads, "Worker threads (default: SWEQ_THREADS or 1)");
    cmd->add_option("--tol-simplex", opts.numeric.tol_simplex, "Simplex membership slack");
    cmd->add_option("--tol-rank", opts.numeric.tol_rank, "Relative rank cutoff");
    cmd->add_option("--tol-pd", opts.numeric.tol_pd, "Positive-definiteness pivot floor");
    cmd->add_option("--tol-lp", opts.numeric.tol_lp, "LP feasibility tolerance");
    cmd->add_option("--cert-tol", opts.numeric.cert_tol, "Certificate residual tolerance");
    cmd->add_option("--lyap-delta", opts.numeric.lyap_delta, "Lyapunov strictness margin");
}

int resolve_threads(const CommonOpts& opts) {
    if (opts.threads > 0) return opts.threads;
    if (opts.threads < 0) throw InputError("--threads must be at least 1");
    return env_threads();
}

// check ----------------------------------------------------------------------

int run_check(const CommonOpts& opts, const std::string& x_text) {
    SwitchedSystem sys = load_system(opts.system_path);
    const Vector x = parse_vector(x_text, "--x");
    if (x.size() != sys.state_dim())
        throw InputError("--x: expected " + std::to_string(sys.state_dim()) + " entries");

    OrderedJson report = base_report("check", opts.system_path, sys);
    OrderedJson config;
    config["x"] = vector_to_json(x);
    config["tolerances"] = tolerances_to_json(opts.numeric);
    report["config"] = std::move(config);

    const auto cert = check_membership(sys, x, opts.numeric);
    OrderedJson result;
    result["member"] = static_cast<bool>(cert);
    if (cert) {
        OrderedJson jc;
        jc["lambda"] = vector_to_json(cert->lam.entries());
        jc["residual"] = cert->residual;
        result["certificate"] = std::move(jc);
    } else {
        result["certificate"] = nullptr;
    }
    OrderedJson xc = OrderedJson::array();
    for (const auto& eq : constant_equilibria(sys, opts.numeric)) {
        OrderedJson je;
        je["subsystem"] = eq.subsystem;
        if (eq.point) {
            je["kind"] = "point";
            je["x"] = vector_to_json(*eq.point);
        } else {
            je["kind"] = "affine_family";
        }
        xc.push_back(std::move(je));
    }
    result["constant_equilibria"] = std::move(xc);
    report["result"] = std::move(result);

    emit_report(report, opts.report_path);
    std::cerr << "member: " << (cert ? "yes" : "no") << "\n";
    return cert ? 0 : 1;
}

// vertices ---------------------------------------------------------------------

int run_vertices(const CommonOpts& opts, const std::string& x_text) {
    SwitchedSystem sys = load_system(opts.system_path);
    const Vector x = parse_vector(x_text, "--x");
    if (x.size() != sys.state_dim())
        throw InputError("--x: expected " + std::to_string(sys.state_dim()) + " entries");

    OrderedJson report = base_report("vertices", opts.system_path, sys);
    OrderedJson config;
    config["x"] = vector_to_json(x);
    config["tolerances"] = tolerances_to_json(opts.numeric);
    report["config"] = std::move(config);

    EquilibriumPolytope poly = enumerate_vertices(sys, x, opts.numeric);

    // Lexicographic vertex order for reproducible output.
    std::vector<std::size_t> order(poly.vertices.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Vector& va = poly.vertices[a].entries();
        const Vector& vb = poly.vertices[b].entries();
        for (Eigen::Index i = 0; i < va.size(); ++i) {
            if (va[i] != vb[i]) return va[i] < vb[i];
        }
        return false;
    });

    OrderedJson result;
    result["member"] = !poly.vertices.empty();
    result["vertex_count"] = poly.vertices.size();
    OrderedJson verts = OrderedJson::array();
    OrderedJson supports = OrderedJson::array();
    for (std::size_t idx : order) {
        verts.push_back(vector_to_json(poly.vertices[idx].entries()));
        OrderedJson sup = OrderedJson::array();
        for (int i : poly.supports[idx].indices) sup.push_back(i + 1);  // mode labels
        supports.push_back(std::move(sup));
    }
    result["vertices"] = std::move(verts);
    result["supports"] = std::move(supports);
    report["result"] = std::move(result);

    emit_report(report, opts.report_path);
    std::cerr << "vertices: " << poly.vertices.size() << "\n";
    return poly.vertices.empty() ? 1 : 0;
}

// design ---------------------------------------------------------------------

struct DesignOpts {
    std::string goal_text;
    std::string h_text;
    std::string g_text;
    std::string q_text;
    std::string x0_text;
    double mu = 1e5;
    double eps = 1e-2;
    std::string method = "grid";
    // grid
    int grid_resolution = 40;
    int refine_steps = 10;
    double refine_shrink = 0.5;
    bool no_output_anneal = false;
    // ga
    int population = 200;
    int generations = 100;
    int elite = 2;
    int tournament = 3;
    double crossover_rate = 0.9;
    double mutation_scale = 0.2;
    int stall = 20;
    std::uint64_t seed = 0;
    int seed_sweep = 1;
};

Matrix parse_q(const std::string& text, int n) {
    if (text.empty()) return Matrix::Identity(n, n);
    if (text.find(',') == std::string::npos && text.find(';') == std::string::npos) {
        const auto nums = parse_numbers(text, ',', "--q");
        return nums.front() * Matrix::Identity(n, n);
    }
    Matrix q = parse_matrix(text, "--q");
    if (q.rows() != n || q.cols() != n)
        throw InputError("--q: expected an " + std::to_string(n) + "x" + std::to_string(n) +
                         " matrix");
    return q;
}

GoalSpec parse_goal(const std::string& text, const DesignOpts& d, const SwitchedSystem& sys) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InputError("--goal: expected 'full:<x*>' or 'output:<z*>'");
    const std::string kind = text.substr(0, colon);
    const std::string value = text.substr(colon + 1);
    if (kind == "full") {
        if (!d.h_text.empty() || !d.g_text.empty())
            throw InputError("--H/--g only apply to output goals");
        return FullStateGoal{parse_vector(value, "--goal")};
    }
    if (kind == "output") {
        OutputGoal goal;
        goal.z_star = parse_vector(value, "--goal");
        goal.eps = d.eps;
        if (!d.h_text.empty() != !d.g_text.empty())
            throw InputError("--H and --g must be given together");
        if (!d.h_text.empty()) {
            goal.H = parse_matrix(d.h_text, "--H");
            goal.g = parse_vector(d.g_text, "--g");
        } else {
            goal.H = Matrix(0, sys.state_dim());
            goal.g = Vector(0);
        }
        return goal;
    }
    throw InputError("--goal: unknown goal kind '" + kind + "'");
}

OrderedJson goal_to_json(const GoalSpec& goal) {
    OrderedJson j;
    if (const auto* fs = std::get_if<FullStateGoal>(&goal)) {
        j["type"] = "full_state";
        j["x_star"] = vector_to_json(fs->x_star);
    } else {
        const auto& og = std::get<OutputGoal>(goal);
        j["type"] = "output";
        j["z_star"] = vector_to_json(og.z_star);
        j["eps"] = og.eps;
        if (og.H.rows() > 0) {
            j["H"] = matrix_to_json(og.H);
            j["g"] = vector_to_json(og.g);
        }
    }
    return j;
}

int run_design(const CommonOpts& opts, const DesignOpts& d) {
    SwitchedSystem sys = load_system(opts.system_path);
    const int threads = resolve_threads(opts);

    FitnessConfig cfg;
    cfg.mu = d.mu;
    cfg.numeric = opts.numeric;
    cfg.Q = parse_q(d.q_text, sys.state_dim());
    cfg.x0 = d.x0_text.empty() ? Vector::Ones(sys.state_dim()).eval()
                               : parse_vector(d.x0_text, "--x0");
    cfg.goal = parse_goal(d.goal_text, d, sys);
    validate_fitness_config(sys, cfg);

    if (d.method != "grid" && d.method != "ga")
        throw InputError("--method: expected 'grid' or 'ga'");
    if (d.seed_sweep < 1) throw InputError("--seed-sweep must be at least 1");
    if (d.seed_sweep > 1 && d.method != "ga")
        throw InputError("--seed-sweep requires --method ga");

    OrderedJson report = base_report("design", opts.system_path, sys);
    OrderedJson config;
    config["goal"] = goal_to_json(cfg.goal);
    config["Q"] = matrix_to_json(cfg.Q);
    config["x0"] = vector_to_json(cfg.x0);
    config["mu"] = cfg.mu;
    config["method"] = d.method;
    if (d.method == "grid") {
        OrderedJson g;
        g["resolution"] = d.grid_resolution;
        g["refine_steps"] = d.refine_steps;
        g["refine_shrink"] = d.refine_shrink;
        g["anneal_output_band"] = !d.no_output_anneal;
        config["grid"] = std::move(g);
    } else {
        OrderedJson g;
        g["population_size"] = d.population;
        g["max_generations"] = d.generations;
        g["elite_count"] = d.elite;
        g["tournament_size"] = d.tournament;
        g["crossover_rate"] = d.crossover_rate;
        g["mutation_scale"] = d.mutation_scale;
        g["stall_generations"] = d.stall;
        g["seed"] = d.seed;
        g["seed_sweep"] = d.seed_sweep;
        config["ga"] = std::move(g);
    }
    config["threads"] = threads;
    config["tolerances"] = tolerances_to_json(opts.numeric);
    report["config"] = std::move(config);

    OrderedJson result;
    std::optional<DesignResult> best;
    if (d.method == "grid") {
        GridSearchConfig gcfg;
        gcfg.resolution = d.grid_resolution;
        gcfg.refine_steps = d.refine_steps;
        gcfg.refine_shrink = d.refine_shrink;
        gcfg.anneal_output_band = !d.no_output_anneal;
        SearchReport sr = grid_search(sys, cfg, gcfg, threads);
        best = sr.best;
        OrderedJson sj = search_to_json(sr);
        sj["method"] = "grid";
        result["search"] = std::move(sj);
    } else if (d.seed_sweep == 1) {
        GaConfig gacfg;
        gacfg.population_size = d.population;
        gacfg.max_generations = d.generations;
        gacfg.elite_count = d.elite;
        gacfg.tournament_size = d.tournament;
        gacfg.crossover_rate = d.crossover_rate;
        gacfg.mutation_scale = d.mutation_scale;
        gacfg.stall_generations = d.stall;
        gacfg.rng_seed = d.seed;
        SearchReport sr = ga_search(sys, cfg, gacfg, threads);
        best = sr.best;
        OrderedJson sj = search_to_json(sr);
        sj["method"] = "ga";
        sj["seed"] = d.seed;
        result["search"] = std::move(sj);
    } else {
        OrderedJson per_seed = OrderedJson::array();
        std::optional<OrderedJson> best_search;
        for (int k = 0; k < d.seed_sweep; ++k) {
            GaConfig gacfg;
            gacfg.population_size = d.population;
            gacfg.max_generations = d.generations;
            gacfg.elite_count = d.elite;
            gacfg.tournament_size = d.tournament;
            gacfg.crossover_rate = d.crossover_rate;
            gacfg.mutation_scale = d.mutation_scale;
            gacfg.stall_generations = d.stall;
            gacfg.rng_seed = d.seed + static_cast<std::uint64_t>(k);
            SearchReport sr = ga_search(sys, cfg, gacfg, threads);

            OrderedJson js;
            js["seed"] = gacfg.rng_seed;
            js["feasible"] = static_cast<bool>(sr.best);
            js["best_fitness"] = sr.best_fitness;
            js["rho"] = sr.best ? OrderedJson(sr.best->rho) : OrderedJson(nullptr);
            js["evaluations"] = sr.evaluations;
            js["generations"] = sr.history.empty() ? 0 : sr.history.size() - 1;
            if (sr.first_feasible_evaluation)
                js["first_feasible_evaluation"] = *sr.first_feasible_evaluation;
            else
                js["first_feasible_evaluation"] = nullptr;
            js["wall_time_seconds"] = sr.wall_time_seconds;
            per_seed.push_back(std::move(js));

            if (sr.best && (!best || sr.best->rho < best->rho)) {
                best = sr.best;
                OrderedJson sj = search_to_json(sr);
                sj["method"] = "ga";
                sj["seed"] = gacfg.rng_seed;
                best_search = std::move(sj);
            }
        }
        if (best_search) result["search"] = std::move(*best_search);
        result["per_seed"] = std::move(per_seed);
    }

    result["feasible"] = static_cast<bool>(best);
    result["design"] = best ? OrderedJson(design_to_json(*best)) : OrderedJson(nullptr);
    // keep "feasible" before "search"/"per_seed" fields in serialized order
    report["result"] = std::move(result);

    emit_report(report, opts.report_path);
    if (best)
        std::cerr << "design: feasible, rho = " << best->rho << "\n";
    else
        std::cerr << "design: no feasible candidate found\n";
    return best ? 0 : 1;
}

// simulate ---------------------------------------------------------------------

int run_simulate(const CommonOpts& opts, const std::string& design_path,
                 const std::string& x0_text, double horizon, double step,
                 const std::string& csv_path) {
    SwitchedSystem sys = load_system(opts.system_path);
    LoadedDesign design = load_design(design_path);

    if (design.P.rows() != sys.state_dim() || design.P.cols() != sys.state_dim())
        throw InputError("design.P has wrong dimensions");
    if (design.x_star.size() != sys.state_dim())
        throw InputError("design.x_star has wrong dimension");
    if (design.Q.rows() != sys.state_dim() || design.Q.cols() != sys.state_dim())
        throw InputError("design.Q has wrong dimensions");
    bool pd = false;
    try {
        pd = is_positive_definite(design.P, opts.numeric.tol_pd);
    } catch (const InputError&) {
        pd = false;
    }
    if (!pd) throw InputError("design.P is not symmetric positive definite");

    Vector x0;
    if (!x0_text.empty())
        x0 = parse_vector(x0_text, "--x0");
    else if (design.x0)
        x0 = *design.x0;
    else
        throw InputError("--x0 required (the design file does not store one)");
    if (x0.size() != sys.state_dim()) throw InputError("--x0 has wrong dimension");

    OrderedJson report = base_report("simulate", opts.system_path, sys);
    OrderedJson config;
    config["design_path"] = design_path;
    config["x0"] = vector_to_json(x0);
    config["T"] = horizon;
    config["h"] = step;
    config["tolerances"] = tolerances_to_json(opts.numeric);
    report["config"] = std::move(config);

    SwitchingRule rule{design.P, design.x_star};
    Trajectory traj = simulate(sys, rule, x0, design.Q, horizon, step);

    if (!csv_path.empty()) {
        std::ostringstream csv;
        write_trajectory_csv(traj, csv);
        write_text_atomic(csv_path, csv.str());
    }

    const Vector u0 = x0 - design.x_star;
    const double rho = u0.dot(design.P * u0);
    const double cost = traj.cost.back();
    const Vector& xf = traj.states.back();

    OrderedJson result;
    result["steps"] = traj.times.size() - 1;
    result["final_time"] = traj.times.back();
    result["final_state"] = vector_to_json(xf);
    result["final_error"] = (xf - design.x_star).norm();
    result["cost"] = cost;
    result["rho_bound"] = rho;
    result["bound_satisfied"] = cost <= rho * 1.05;
    result["csv_path"] = csv_path.empty() ? OrderedJson(nullptr) : OrderedJson(csv_path);
    report["result"] = std::move(result);

    emit_report(report, opts.report_path);
    std::cerr << "simulate: cost " << cost << " vs bound " << rho << "\n";
    return 0;
}

// sweep ---------------------------------------------------------------------

int run_sweep(const CommonOpts& opts, const std::string& z_text, int coord,
              const std::string& range_text, int steps, const std::string& q_text,
              const std::string& x0_text, const std::string& csv_path) {
    SwitchedSystem sys = load_system(opts.system_path);
    const int threads = resolve_threads(opts);

    const Vector z = parse_vector(z_text, "--z");
    const auto range = parse_numbers(range_text, ',', "--range");
    if (range.size() != 2) throw InputError("--range: expected 'lo,hi'");
    if (coord < 1 || coord > sys.state_dim())
        throw InputError("--coord: expected a 1-based state index");

    FitnessConfig cfg;
    cfg.numeric = opts.numeric;
    cfg.Q = parse_q(q_text, sys.state_dim());
    cfg.x0 = x0_text.empty() ? Vector::Ones(sys.state_dim()).eval()
                             : parse_vector(x0_text, "--x0");
    OutputGoal goal;
    goal.z_star = z;
    goal.H = Matrix(0, sys.state_dim());
    goal.g = Vector(0);
    cfg.goal = goal;
    validate_fitness_config(sys, cfg);

    OrderedJson report = base_report("sweep", opts.system_path, sys);
    OrderedJson config;
    config["z"] = vector_to_json(z);
    config["coordinate"] = coord;
    config["lo"] = range[0];
    config["hi"] = range[1];
    config["steps"] = steps;
    config["Q"] = matrix_to_json(cfg.Q);
    config["x0"] = vector_to_json(cfg.x0);
    config["threads"] = threads;
    config["tolerances"] = tolerances_to_json(opts.numeric);
    report["config"] = std::move(config);

    const auto points =
        constraint_line_sweep(sys, cfg, coord - 1, range[0], range[1], steps, threads);

    std::size_t feasible_count = 0;
    std::optional<SweepPoint> minimum;
    for (const auto& p : points) {
        if (!p.rho) continue;
        ++feasible_count;
        if (!minimum || *p.rho < *minimum->rho) minimum = p;
    }

    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "coord,rho,feasible\n";
        csv.precision(17);
        for (const auto& p : points) {
            csv << p.coordinate << ',';
            if (p.rho) csv << *p.rho;
            csv << ',' << (p.rho ? 1 : 0) << '\n';
        }
        write_text_atomic(csv_path, csv.str());
    }

    OrderedJson result;
    result["feasible_count"] = feasible_count;
    if (minimum) {
        OrderedJson jm;
        jm["coordinate"] = minimum->coordinate;
        jm["rho"] = *minimum->rho;
        result["min"] = std::move(jm);
    } else {
        result["min"] = nullptr;
    }
    OrderedJson jp = OrderedJson::array();
    for (const auto& p : points) {
        OrderedJson e;
        e["coordinate"] = p.coordinate;
        e["rho"] = p.rho ? OrderedJson(*p.rho) : OrderedJson(nullptr);
        jp.push_back(std::move(e));
    }
    result["points"] = std::move(jp);
    result["csv_path"] = csv_path.empty() ? OrderedJson(nullptr) : OrderedJson(csv_path);
    report["result"] = std::move(result);

    emit_report(report, opts.report_path);
    if (minimum)
        std::cerr << "sweep: min rho " << *minimum->rho << " at coord " << minimum->coordinate
                  << "\n";
    else
        std::cerr << "sweep: no feasible point on the line\n";
    return feasible_count > 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium analysis and switching-rule synthesis for switched affine systems"};
    app.require_subcommand(1);

    CommonOpts check_opts;
    std::string check_x;
    auto* cmd_check = app.add_subcommand("check", "Test whether x is an attainable equilibrium");
    add_common(cmd_check, check_opts);
    cmd_check->add_option("--x", check_x, "Candidate state, comma-separated")->required();

    CommonOpts vert_opts;
    std::string vert_x;
    auto* cmd_vertices =
        app.add_subcommand("vertices", "Enumerate the simplex polytope vertices for x");
    add_common(cmd_vertices, vert_opts);
    cmd_vertices->add_option("--x", vert_x, "Equilibrium state, comma-separated")->required();

    CommonOpts design_opts;
    DesignOpts d;
    auto* cmd_design =
        app.add_subcommand("design", "Search for a stabilizable equilibrium and switching rule");
    add_common(cmd_design, design_opts);
    cmd_design->add_option("--goal", d.goal_text, "Goal: 'full:<x*>' or 'output:<z*>'")
        ->required();
    cmd_design->add_option("--H", d.h_text, "Inequality constraint matrix (rows ';', entries ',')");
    cmd_design->add_option("--g", d.g_text, "Inequality constraint bound, comma-separated");
    cmd_design->add_option("--q", d.q_text, "Cost weight: scalar or matrix (default identity)");
    cmd_design->add_option("--x0", d.x0_text, "Initial state (default: all ones)");
    cmd_design->add_option("--mu", d.mu, "Infeasibility barrier constant");
    cmd_design->add_option("--eps", d.eps, "Output band half-width for output goals");
    cmd_design->add_option("--method", d.method, "Search method: grid or ga");
    cmd_design->add_option("--grid-resolution", d.grid_resolution, "Compositions denominator m");
    cmd_design->add_option("--refine-steps", d.refine_steps, "Grid refinement rounds");
    cmd_design->add_option("--refine-shrink", d.refine_shrink, "Refinement shrink factor");
    cmd_design->add_flag("--no-output-anneal", d.no_output_anneal,
                         "Keep the output band fixed across refinement rounds");
    cmd_design->add_option("--pop", d.population, "GA population size");
    cmd_design->add_option("--gens", d.generations, "GA generation budget");
    cmd_design->add_option("--elite", d.elite, "GA elite count");
    cmd_design->add_option("--tournament", d.tournament, "GA tournament size");
    cmd_design->add_option("--crossover-rate", d.crossover_rate, "GA crossover probability");
    cmd_design->add_option("--mutation-scale", d.mutation_scale, "GA mutation scale");
    cmd_design->add_option("--stall", d.stall, "GA early-stop patience (generations)");
    cmd_design->add_option("--seed", d.seed, "GA random seed");
    cmd_design->add_option("--seed-sweep", d.seed_sweep, "Run this many consecutive seeds");

    CommonOpts sim_opts;
    std::string sim_design, sim_x0, sim_csv;
    double sim_T = 10.0, sim_h = 1e-4;
    auto* cmd_simulate = app.add_subcommand("simulate", "Simulate the closed loop under a design");
    // Frees the short name -h so the step-size option below can use --h.
    cmd_simulate->set_help_flag("--help", "Print this help message and exit");
    add_common(cmd_simulate, sim_opts);
    cmd_simulate->add_option("--design", sim_design, "Design report JSON from 'design'")
        ->required();
    cmd_simulate->add_option("--x0", sim_x0, "Initial state (default: the design's x0)");
    cmd_simulate->add_option("--T", sim_T, "Horizon in seconds");
    cmd_simulate->add_option("--h", sim_h, "Integration step in seconds");
    cmd_simulate->add_option("--out", sim_csv, "Write the trajectory CSV here");

    CommonOpts sweep_opts;
    std::string sweep_z, sweep_range, sweep_q, sweep_x0, sweep_csv;
    int sweep_coord = 1, sweep_steps = 200;
    auto* cmd_sweep =
        app.add_subcommand("sweep", "Profile the guaranteed cost along the output line");
    add_common(cmd_sweep, sweep_opts);
    cmd_sweep->add_option("--z", sweep_z, "Output target z*, comma-separated")->required();
    cmd_sweep->add_option("--coord", sweep_coord, "Free state coordinate (1-based)");
    cmd_sweep->add_option("--range", sweep_range, "Sweep range 'lo,hi'")->required();
    cmd_sweep->add_option("--steps", sweep_steps, "Number of samples");
    cmd_sweep->add_option("--q", sweep_q, "Cost weight: scalar or matrix (default identity)");
    cmd_sweep->add_option("--x0", sweep_x0, "Initial state (default: all ones)");
    cmd_sweep->add_option("--out", sweep_csv, "Write the profile CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_check->parsed()) return run_check(check_opts, check_x);
        if (cmd_vertices->parsed()) return run_vertices(vert_opts, vert_x);
        if (cmd_design->parsed()) return run_design(design_opts, d);
        if (cmd_simulate->parsed())
            return run_simulate(sim_opts, sim_design, sim_x0, sim_T, sim_h, sim_csv);
        if (cmd_sweep->parsed())
            return run_sweep(sweep_opts, sweep_z, sweep_coord, sweep_range, sweep_steps, sweep_q,
                             sweep_x0, sweep_csv);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
