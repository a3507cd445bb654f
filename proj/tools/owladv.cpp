// owladv: dataset generation, OSCAR solve, adversarial attack and the epsilon sweep.
//
// Exit codes: 0 ok, 1 usage or config error, 2 I/O error, 3 attack infeasible
// after all gamma escalations.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "owladv/attack.hpp"
#include "owladv/config.hpp"
#include "owladv/experiment.hpp"
#include "owladv/io.hpp"
#include "owladv/metrics.hpp"
#include "owladv/svg.hpp"

namespace fs = std::filesystem;
using namespace owladv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInfeasible = 3;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon;
    int jobs = 1;
    bool quiet = false;
};

using KeyValues = std::map<std::string, std::string>;

std::string key_values_text(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

KeyValues read_key_values(const fs::path& path) {
    KeyValues kv;
    std::istringstream in(read_text(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

double kv_double(const KeyValues& kv, const std::string& key, const fs::path& path) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(path.string() + ": missing key " + key);
    try {
        return parse_double(it->second);
    } catch (const std::invalid_argument&) {
        throw ParseError(path.string() + ": " + key + ": not a number: " + it->second);
    }
}

// --out, then OWL_ADV_OUT, then output.dir from the config.
fs::path output_dir(const Options& opt, const ExperimentConfig& cfg) {
    if (!opt.out.empty()) return opt.out;
    if (const char* env = std::getenv("OWL_ADV_OUT"); env && *env) return env;
    return cfg.output_dir;
}

// --config if given; otherwise the config.conf saved by gen in the output
// directory; otherwise the built-in defaults.
ExperimentConfig resolve_config(const Options& opt) {
    if (!opt.config.empty()) return load_config(opt.config);
    ExperimentConfig defaults;
    const fs::path saved = output_dir(opt, defaults) / "config.conf";
    if (fs::exists(saved)) return load_config(saved);
    return defaults;
}

struct LoadedDataset {
    Matrix A;
    Vector y;
    GroundTruth truth;
};

LoadedDataset load_dataset(const fs::path& dir, const ExperimentConfig& cfg) {
    LoadedDataset d;
    d.A = read_matrix(dir / "A.csv");
    d.y = read_vector(dir / "y.txt");
    d.truth.x_star = read_vector(dir / "x_star.txt");
    d.truth.x_bar_star = read_vector(dir / "x_bar_star.txt");
    d.truth.spec = cfg.groups;
    if (d.y.size() != d.A.rows()) {
        throw IoError((dir / "y.txt").string() + ": length " + std::to_string(d.y.size()) +
                      " does not match the " + std::to_string(d.A.rows()) + " rows of A.csv");
    }
    for (const auto* name : {"x_star.txt", "x_bar_star.txt"}) {
        const Vector& v = std::string(name) == "x_star.txt" ? d.truth.x_star : d.truth.x_bar_star;
        if (v.size() != d.A.cols()) {
            throw IoError((dir / name).string() + ": length " + std::to_string(v.size()) +
                          " does not match the " + std::to_string(d.A.cols()) +
                          " columns of A.csv");
        }
    }
    if (static_cast<std::size_t>(d.A.cols()) != cfg.p()) {
        throw IoError((dir / "A.csv").string() + ": " + std::to_string(d.A.cols()) +
                      " columns but data.p = " + std::to_string(cfg.p()));
    }
    return d;
}

int cmd_gen(const Options& opt) {
    ExperimentConfig cfg = opt.config.empty() ? ExperimentConfig{} : load_config(opt.config);
    if (opt.seed) cfg.data_seed = *opt.seed;
    cfg.validate();
    const fs::path dir = output_dir(opt, cfg);

    const Dataset d = generate_dataset(cfg, cfg.data_seed);
    write_matrix(dir / "A.csv", d.A);
    write_vector(dir / "y.txt", d.y);
    write_vector(dir / "x_star.txt", d.truth.x_star);
    write_vector(dir / "x_bar_star.txt", d.truth.x_bar_star);
    std::string groups;
    for (const auto& g : cfg.groups.groups) groups += format_group(g) + "\n";
    write_text(dir / "groups.txt", groups);
    write_text(dir / "config.conf", to_config_text(cfg));

    if (!opt.quiet) {
        std::cout << "gen: " << d.A.rows() << "x" << d.A.cols() << " design, "
                  << (d.truth.x_star.array() != 0.0).count() << " nonzeros in x*, seed "
                  << cfg.data_seed << " -> " << dir.string() << "\n";
    }
    return kExitOk;
}

int cmd_solve(const Options& opt) {
    const ExperimentConfig cfg = resolve_config(opt);
    cfg.validate();
    const fs::path dir = output_dir(opt, cfg);
    const LoadedDataset d = load_dataset(dir, cfg);

    const FistaSolution sol = fista_solve(make_problem(cfg, d.A, d.y), cfg.fista);
    const double theta = cfg.theta.value_or(default_misalignment_theta(d.truth.x_bar_star));
    const std::size_t misaligned = misalignment_count(sol.x_hat, d.truth.x_bar_star, theta);
    const double dev = deviation(sol.x_hat, d.truth.x_bar_star);

    write_vector(dir / "x_hat.txt", sol.x_hat);
    write_vector(dir / "u_star.txt", sol.u_star);
    write_text(dir / "solution.txt",
               key_values_text({{"alpha_star", format_double(sol.alpha_star)},
                                {"objective", format_double(sol.objective)},
                                {"iterations", std::to_string(sol.iterations)},
                                {"converged", sol.converged ? "1" : "0"},
                                {"deviation", format_short(dev)},
                                {"misaligned", std::to_string(misaligned)},
                                {"theta", format_short(theta)}}));
    if (!opt.quiet) {
        std::cout << "solve: " << sol.iterations << " iterations"
                  << (sol.converged ? "" : " (iteration cap reached)") << ", objective "
                  << format_short(sol.objective) << ", deviation " << format_short(dev)
                  << ", misaligned " << misaligned << "/" << sol.x_hat.size() << "\n";
    }
    return kExitOk;
}

int cmd_attack(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    if (opt.epsilon) cfg.attack.epsilon = *opt.epsilon;
    if (opt.seed) cfg.attack.seed = *opt.seed;
    cfg.validate();
    cfg.attack.validate();
    const fs::path dir = output_dir(opt, cfg);
    const LoadedDataset d = load_dataset(dir, cfg);

    if (!fs::exists(dir / "u_star.txt") || !fs::exists(dir / "solution.txt")) {
        throw IoError(dir.string() + ": missing solve artifacts (u_star.txt, solution.txt); run solve first");
    }
    const Vector u_star = read_vector(dir / "u_star.txt");
    if (u_star.size() != d.A.cols()) {
        throw IoError((dir / "u_star.txt").string() + ": length " + std::to_string(u_star.size()) +
                      " does not match the " + std::to_string(d.A.cols()) + " columns of A.csv");
    }
    const fs::path sol_path = dir / "solution.txt";
    const KeyValues sol_kv = read_key_values(sol_path);
    const double alpha_star = kv_double(sol_kv, "alpha_star", sol_path);

    const AttackContext ctx(d.A, d.truth.x_star, d.truth.x_bar_star, cfg.weights(), cfg.lambda,
                            u_star, alpha_star);
    const AttackResult ar = ista_attack(ctx, cfg.attack);
    const auto attacked = evaluate_noise(cfg, d.A, d.truth, ar.nu_star);
    const auto noiseless = evaluate_noise(cfg, d.A, d.truth, Vector::Zero(d.A.rows()));
    const double theta = cfg.theta.value_or(default_misalignment_theta(d.truth.x_bar_star));
    const auto budget = l1_budget_check(ar.nu_star, cfg.attack.epsilon);

    write_vector(dir / "nu_star.txt", ar.nu_star);
    write_vector(dir / "x_hat_attacked.txt", attacked.solution.x_hat);
    write_vector(dir / "x_hat_surrogate.txt", ar.x_hat_attacked);
    write_text(dir / "attack_report.txt",
               key_values_text({{"epsilon", format_short(cfg.attack.epsilon)},
                                {"seed", std::to_string(cfg.attack.seed)},
                                {"feasible", ar.feasible ? "1" : "0"},
                                {"l1_over_n", format_short(ar.l1_over_n)},
                                {"budget_ratio", format_short(budget.ratio)},
                                {"gamma_final", format_short(ar.gamma_final)},
                                {"iterations", std::to_string(ar.iterations)},
                                {"escalations", std::to_string(ar.escalations)},
                                {"deviation", format_short(attacked.deviation)},
                                {"misaligned", std::to_string(attacked.misaligned)},
                                {"noiseless_deviation", format_short(noiseless.deviation)},
                                {"noiseless_misaligned", std::to_string(noiseless.misaligned)},
                                {"surrogate_deviation", format_short(ar.deviation)},
                                {"theta", format_short(theta)}}));
    if (!opt.quiet) {
        std::cout << "attack: epsilon " << format_short(cfg.attack.epsilon) << ", ||nu*||_1/n "
                  << format_short(ar.l1_over_n) << ", gamma " << format_short(ar.gamma_final)
                  << ", deviation " << format_short(noiseless.deviation) << " -> "
                  << format_short(attacked.deviation) << ", misaligned " << noiseless.misaligned
                  << " -> " << attacked.misaligned << "\n";
    }
    if (!ar.feasible) {
        std::cerr << "attack: budget not met after " << ar.escalations << " gamma escalations\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    ExperimentConfig cfg = opt.config.empty() ? ExperimentConfig{} : load_config(opt.config);
    if (opt.seed) cfg.seeds = {*opt.seed};
    if (opt.epsilon) cfg.epsilon_grid = {*opt.epsilon};
    cfg.validate();
    const fs::path dir = output_dir(opt, cfg);

    const SweepResult result = run_sweep(cfg, opt.jobs);
    write_sweep_outputs(result, cfg, dir);
    write_text(dir / "config.conf", to_config_text(cfg));

    std::size_t failed = 0;
    for (const auto& r : result.records) failed += r.status != "ok";
    if (!opt.quiet) {
        std::cout << "sweep: " << result.records.size() << " rows, " << failed
                  << " failed cells -> " << (dir / "report.csv").string() << "\n";
        for (double eps : cfg.epsilon_grid) {
            double sum[3] = {0, 0, 0};
            std::size_t count = 0;
            for (const auto& r : result.records) {
                if (r.epsilon != eps || r.status != "ok") continue;
                sum[static_cast<int>(r.condition)] += r.deviation;
                count += r.condition == Condition::attack;
            }
            if (count == 0) continue;
            std::cout << "  eps " << format_short(eps) << ": mean deviation noiseless "
                      << format_short(sum[0] / count) << ", random " << format_short(sum[1] / count)
                      << ", attack " << format_short(sum[2] / count) << "\n";
        }
    }
    return kExitOk;
}

int cmd_plot(const Options& opt) {
    const ExperimentConfig cfg = resolve_config(opt);
    const fs::path dir = output_dir(opt, cfg);
    const fs::path report_path = dir / "attack_report.txt";
    const double eps = opt.epsilon ? *opt.epsilon : kv_double(read_key_values(report_path), "epsilon", report_path);
    const std::string eps_text = format_short(eps);
    std::vector<StemPanel> panels{
        {"ground truth x*", read_vector(dir / "x_star.txt")},
        {"OSCAR (noiseless)", read_vector(dir / "x_hat.txt")},
        {"OSCAR + attack (eps = " + eps_text + ")", read_vector(dir / "x_hat_attacked.txt")},
    };
    const fs::path path = plot_path(dir, eps);
    write_text(path, render_stem_page("epsilon = " + eps_text, panels));
    if (!opt.quiet) std::cout << "plot: " << path.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OSCAR regression and l1-bounded adversarial measurement noise"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "key=value config file");
        sub->add_option("--out", opt.out, "output directory (default: $OWL_ADV_OUT, then output.dir)");
        sub->add_flag("--quiet", opt.quiet, "no progress output");
    };
    auto* gen = app.add_subcommand("gen", "generate the synthetic grouped dataset");
    add_common(gen);
    gen->add_option("--seed", opt.seed, "data seed (overrides data.seed)");

    auto* solve = app.add_subcommand("solve", "OSCAR-FISTA on the noiseless dataset");
    add_common(solve);

    auto* attack = app.add_subcommand("attack", "craft nu* against the solved dataset");
    add_common(attack);
    attack->add_option("--epsilon", opt.epsilon, "budget ||nu||_1 / n (overrides attack.epsilon)")
        ->check(CLI::NonNegativeNumber);
    attack->add_option("--seed", opt.seed, "attack seed (overrides attack.seed)");

    auto* sweep = app.add_subcommand("sweep", "noiseless / random / attack over the epsilon grid");
    add_common(sweep);
    sweep->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", opt.seed, "run a single seed instead of sweep.seeds");
    sweep->add_option("--epsilon", opt.epsilon, "run a single epsilon instead of sweep.epsilons")
        ->check(CLI::NonNegativeNumber);

    auto* plot = app.add_subcommand("plot", "stem plot of x*, x_hat and the attacked x_hat");
    add_common(plot);
    plot->add_option("--epsilon", opt.epsilon, "label (default: from attack_report.txt)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return cmd_gen(opt);
        if (*solve) return cmd_solve(opt);
        if (*attack) return cmd_attack(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*plot) return cmd_plot(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
