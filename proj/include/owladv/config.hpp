#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "owladv/attack.hpp"
#include "owladv/solver.hpp"
#include "owladv/synthdata.hpp"

namespace owladv {

/// Invalid configuration. The message names the offending key (and line,
/// when parsed from text).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    // data.*
    std::size_t n = 50;
    GroupSpec groups = default_group_spec();  // groups.p is data.p
    double rho = 0.9;
    std::uint64_t data_seed = 1;

    // solver.*
    double lambda = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 0.01;
    FistaOptions fista;

    // attack.*  (attack.epsilon and attack.seed are used by the single-run command)
    AttackConfig attack{.epsilon = 0.3};

    // sweep.*
    std::vector<double> epsilon_grid{0.05, 0.1, 0.2, 0.3};
    std::vector<std::uint64_t> seeds = default_seeds();

    // metrics.theta; empty means 0.25 * max |x_bar*|
    std::optional<double> theta;

    // output.dir
    std::string output_dir = "owl_adv_out";

    std::size_t p() const noexcept { return groups.p; }
    OwlWeights weights() const;
    void validate() const;

    static std::vector<std::uint64_t> default_seeds();
};

/// Parses flat "key = value" text; '#' starts a comment. Unknown keys are
/// rejected. Keys not present keep their defaults.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Serializes every key; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig& config);

/// "1-10 : 1.0" or "1 4 7 : 0.5 1.0 2.0" (1-based members, one shared
/// coefficient or one per member).
FeatureGroup parse_group(std::string_view text);
std::string format_group(const FeatureGroup& group);

}  // namespace owladv
