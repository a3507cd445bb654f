#include "owladv/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include <omp.h>

#include "owladv/io.hpp"
#include "owladv/metrics.hpp"
#include "owladv/svg.hpp"

namespace owladv {

namespace {

constexpr std::uint64_t kRandomStream = 2000;
constexpr std::uint64_t kAttackStream = 1000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-seed state shared by the cells of that seed.
struct SeedState {
    std::optional<Dataset> data;
    std::optional<AttackContext> ctx;
    NoiseEvaluation noiseless;
    double wall_seconds = 0.0;
    std::string error;
};

SweepRecord failed_record(double eps, std::uint64_t seed, Condition c, const std::string& what) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    SweepRecord r;
    r.epsilon = eps;
    r.seed = seed;
    r.condition = c;
    r.deviation = r.l1_over_n = r.gamma_final = r.surrogate_deviation = nan;
    r.feasible = false;
    r.status = "error: " + what;
    return r;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        if (c != '\n') out += c;
    }
    return out + "\"";
}

}  // namespace

Dataset generate_dataset(const ExperimentConfig& config, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    d.seed = seed;
    d.A = generate_grouped_design(config.n, config.groups, config.rho, rng);
    d.truth = generate_ground_truth(config.groups);
    d.y = measure(d.A, d.truth.x_star, Vector::Zero(static_cast<Eigen::Index>(config.n)));
    return d;
}

RegressionProblem make_problem(const ExperimentConfig& config, const Matrix& A, Vector y) {
    return RegressionProblem{A, std::move(y), config.lambda, config.weights()};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base * 0x9E3779B97F4A7C15ULL + stream + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

NoiseEvaluation evaluate_noise(const ExperimentConfig& config, const Matrix& A,
                               const GroundTruth& truth, const Vector& nu) {
    NoiseEvaluation e;
    const auto problem = make_problem(config, A, measure(A, truth.x_star, nu));
    e.solution = fista_solve(problem, config.fista);
    e.deviation = deviation(e.solution.x_hat, truth.x_bar_star);
    e.misaligned = misalignment_count(e.solution.x_hat, truth.x_bar_star, config.theta);
    e.l1_over_n = nu.size() ? nu.lpNorm<1>() / static_cast<double>(nu.size()) : 0.0;
    return e;
}

const char* to_string(Condition c) {
    switch (c) {
        case Condition::noiseless: return "noiseless";
        case Condition::random: return "random";
        case Condition::attack: return "attack";
    }
    return "?";
}

SweepResult run_sweep(const ExperimentConfig& config, int jobs) {
    config.validate();
    const int workers = std::max(1, jobs);
    const auto& seeds = config.seeds;
    const auto& grid = config.epsilon_grid;
    const auto n_seeds = static_cast<long>(seeds.size());
    const auto n_eps = static_cast<long>(grid.size());

    std::vector<SeedState> states(seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long s = 0; s < n_seeds; ++s) {
        auto& st = states[static_cast<std::size_t>(s)];
        const auto start = Clock::now();
        try {
            st.data = generate_dataset(config, seeds[static_cast<std::size_t>(s)]);
            const Vector zero = Vector::Zero(static_cast<Eigen::Index>(config.n));
            st.noiseless = evaluate_noise(config, st.data->A, st.data->truth, zero);
            st.ctx.emplace(AttackContext::from_solution(make_problem(config, st.data->A, st.data->y),
                                                        st.data->truth, st.noiseless.solution));
        } catch (const std::exception& e) {
            st.error = e.what();
        }
        st.wall_seconds = seconds_since(start);
    }

    SweepResult result;
    result.records.resize(seeds.size() * grid.size() * 3);
    result.plot_attacked.resize(grid.size());

#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long cell = 0; cell < n_seeds * n_eps; ++cell) {
        const auto e_idx = static_cast<std::size_t>(cell / n_seeds);
        const auto s_idx = static_cast<std::size_t>(cell % n_seeds);
        const double eps = grid[e_idx];
        const auto seed = seeds[s_idx];
        const auto& st = states[s_idx];
        SweepRecord* out = &result.records[(e_idx * seeds.size() + s_idx) * 3];

        if (!st.error.empty()) {
            for (auto c : {Condition::noiseless, Condition::random, Condition::attack}) {
                out[static_cast<int>(c)] = failed_record(eps, seed, c, st.error);
            }
            continue;
        }
        const auto& data = *st.data;
        const auto& ctx = *st.ctx;
        const auto n = static_cast<double>(config.n);

        SweepRecord& base = out[0];
        base.epsilon = eps;
        base.seed = seed;
        base.condition = Condition::noiseless;
        base.deviation = st.noiseless.deviation;
        base.misaligned = st.noiseless.misaligned;
        base.solver_iterations = st.noiseless.solution.iterations;
        base.surrogate_deviation =
            deviation(x_hat_of_nu(ctx, Vector::Zero(ctx.A().rows())), data.truth.x_bar_star);
        base.wall_seconds = st.wall_seconds;

        const auto random_start = Clock::now();
        try {
            Rng rng(derive_seed(seed, kRandomStream + e_idx));
            const Vector nu = init_noise(config.n, n * eps, rng);
            const auto ev = evaluate_noise(config, data.A, data.truth, nu);
            SweepRecord& r = out[1];
            r.epsilon = eps;
            r.seed = seed;
            r.condition = Condition::random;
            r.deviation = ev.deviation;
            r.misaligned = ev.misaligned;
            r.l1_over_n = ev.l1_over_n;
            r.feasible = l1_budget_check(nu, eps).within;
            r.solver_iterations = ev.solution.iterations;
            r.surrogate_deviation = deviation(x_hat_of_nu(ctx, nu), data.truth.x_bar_star);
            r.wall_seconds = seconds_since(random_start);
        } catch (const std::exception& e) {
            out[1] = failed_record(eps, seed, Condition::random, e.what());
        }

        const auto attack_start = Clock::now();
        try {
            AttackConfig ac = config.attack;
            ac.epsilon = eps;
            ac.seed = derive_seed(seed, kAttackStream + e_idx);
            const AttackResult ar = ista_attack(ctx, ac);
            const auto ev = evaluate_noise(config, data.A, data.truth, ar.nu_star);
            SweepRecord& r = out[2];
            r.epsilon = eps;
            r.seed = seed;
            r.condition = Condition::attack;
            r.deviation = ev.deviation;
            r.misaligned = ev.misaligned;
            r.l1_over_n = ar.l1_over_n;
            r.feasible = ar.feasible;
            r.gamma_final = ar.gamma_final;
            r.attack_iterations = ar.iterations;
            r.solver_iterations = ev.solution.iterations;
            r.surrogate_deviation = ar.deviation;
            r.wall_seconds = seconds_since(attack_start);
            if (s_idx == 0) result.plot_attacked[e_idx] = ev.solution.x_hat;
        } catch (const std::exception& e) {
            out[2] = failed_record(eps, seed, Condition::attack, e.what());
        }
    }

    if (!states.empty() && states.front().error.empty()) {
        result.plot_x_star = states.front().data->truth.x_star;
        result.plot_noiseless = states.front().noiseless.solution.x_hat;
    }
    return result;
}

std::string report_csv(const SweepResult& result) {
    std::string out =
        "epsilon,seed,condition,deviation,misaligned,l1_over_n,feasible,gamma_final,"
        "attack_iterations,solver_iterations,surrogate_deviation,status\n";
    for (const auto& r : result.records) {
        out += format_short(r.epsilon) + "," + std::to_string(r.seed) + "," +
               to_string(r.condition) + "," + format_short(r.deviation) + "," +
               std::to_string(r.misaligned) + "," + format_short(r.l1_over_n) + "," +
               (r.feasible ? "1" : "0") + "," + format_short(r.gamma_final) + "," +
               std::to_string(r.attack_iterations) + "," + std::to_string(r.solver_iterations) +
               "," + format_short(r.surrogate_deviation) + "," + csv_field(r.status) + "\n";
    }
    return out;
}

std::string timings_csv(const SweepResult& result) {
    std::string out = "epsilon,seed,condition,wall_seconds\n";
    for (const auto& r : result.records) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", r.wall_seconds);
        out += format_short(r.epsilon) + "," + std::to_string(r.seed) + "," +
               to_string(r.condition) + "," + buf + "\n";
    }
    return out;
}

std::filesystem::path plot_path(const std::filesystem::path& out_dir, double epsilon) {
    return out_dir / "plots" / ("eps_" + format_short(epsilon) + ".svg");
}

void write_sweep_outputs(const SweepResult& result, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir) {
    write_text(out_dir / "report.csv", report_csv(result));
    write_text(out_dir / "timings.csv", timings_csv(result));
    const std::string seed = std::to_string(config.seeds.front());
    for (std::size_t e = 0; e < config.epsilon_grid.size(); ++e) {
        const std::string eps = format_short(config.epsilon_grid[e]);
        std::vector<StemPanel> panels{
            {"ground truth x*", result.plot_x_star},
            {"OSCAR (noiseless)", result.plot_noiseless},
            {"OSCAR + attack (eps = " + eps + ")", result.plot_attacked[e]},
        };
        write_text(plot_path(out_dir, config.epsilon_grid[e]),
                   render_stem_page("epsilon = " + eps + ", seed " + seed, panels));
    }
}

}  // namespace owladv
