#include "owladv/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

#include "owladv/io.hpp"

namespace owladv {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_any(std::string_view s, std::string_view seps) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find_first_of(seps, start);
        const auto tok = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (!tok.empty()) out.push_back(tok);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t parse_uint(std::string_view token) {
    token = trim(token);
    std::uint64_t v = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (token.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("expected a nonnegative integer, got '" + std::string(token) + "'");
    }
    return v;
}

/// "3", "1-20", "1, 4, 9-12"
std::vector<std::uint64_t> parse_index_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (auto tok : split_any(text, ", \t")) {
        const auto dash = tok.find('-', 1);
        if (dash == std::string_view::npos) {
            out.push_back(parse_uint(tok));
            continue;
        }
        const auto lo = parse_uint(tok.substr(0, dash));
        const auto hi = parse_uint(tok.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("descending range '" + std::string(tok) + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::string format_index_list(const std::vector<std::uint64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j + 1 < values.size() && values[j + 1] == values[j] + 1) ++j;
        if (!out.empty()) out += ", ";
        out += std::to_string(values[i]);
        if (j > i) out += "-" + std::to_string(values[j]);
        i = j + 1;
    }
    return out;
}

bool parse_bool_like_empty(std::string_view v) { return v.empty() || v == "auto"; }

}  // namespace

FeatureGroup parse_group(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("group must read '<members> : <coefficients>'");
    }
    FeatureGroup g;
    for (auto m : parse_index_list(text.substr(0, colon))) {
        if (m == 0) throw std::invalid_argument("feature indices are 1-based");
        g.members.push_back(static_cast<std::size_t>(m - 1));
    }
    const auto coeffs = split_any(text.substr(colon + 1), ", \t");
    if (coeffs.size() == 1) {
        g.coefficients.assign(g.members.size(), parse_double(coeffs.front()));
    } else if (coeffs.size() == g.members.size()) {
        for (auto c : coeffs) g.coefficients.push_back(parse_double(c));
    } else {
        throw std::invalid_argument("expected 1 or " + std::to_string(g.members.size()) +
                                    " coefficients, found " + std::to_string(coeffs.size()));
    }
    return g;
}

std::string format_group(const FeatureGroup& group) {
    std::vector<std::uint64_t> members;
    for (auto m : group.members) members.push_back(m + 1);
    std::string out = format_index_list(members) + " :";
    const bool constant =
        !group.coefficients.empty() &&
        std::all_of(group.coefficients.begin(), group.coefficients.end(),
                    [&](double c) { return c == group.coefficients.front(); });
    if (constant) {
        out += " " + format_short(group.coefficients.front());
    } else {
        for (double c : group.coefficients) out += " " + format_short(c);
    }
    return out;
}

std::vector<std::uint64_t> ExperimentConfig::default_seeds() {
    std::vector<std::uint64_t> s(20);
    std::iota(s.begin(), s.end(), std::uint64_t{1});
    return s;
}

OwlWeights ExperimentConfig::weights() const {
    return oscar_weights({lambda1, lambda2, p()});
}

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const std::string& key, const std::string& what) {
        if (!ok) throw ConfigError(key + ": " + what);
    };
    require(n >= 1, "data.n", "must be >= 1");
    require(groups.p >= 1, "data.p", "must be >= 1");
    require(rho >= 0.0 && rho < 1.0, "data.rho", "must lie in [0, 1)");
    for (std::size_t g = 0; g < groups.groups.size(); ++g) {
        GroupSpec single{groups.p, {groups.groups[g]}};
        try {
            single.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("data.group." + std::to_string(g + 1) + ": " + e.what());
        }
    }
    try {
        groups.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("data.group: ") + e.what());
    }
    require(lambda >= 0.0, "solver.lambda", "must be >= 0");
    require(lambda1 >= 0.0, "solver.lambda1", "must be >= 0");
    require(lambda2 >= 0.0, "solver.lambda2", "must be >= 0");
    require(lambda1 + lambda2 > 0.0, "solver.lambda1", "lambda1 + lambda2 must be positive");
    require(fista.max_iters >= 1, "solver.max_iters", "must be >= 1");
    require(fista.tol > 0.0, "solver.tol", "must be > 0");
    require(attack.epsilon >= 0.0, "attack.epsilon", "must be >= 0");
    require(attack.gamma0 > 0.0, "attack.gamma0", "must be > 0");
    require(attack.eta > 0.0, "attack.eta", "must be > 0");
    require(attack.max_iters >= 1, "attack.max_iters", "must be >= 1");
    require(attack.tol > 0.0, "attack.tol", "must be > 0");
    require(attack.escalation_factor > 1.0, "attack.escalation_factor", "must be > 1");
    require(!epsilon_grid.empty(), "sweep.epsilons", "must not be empty");
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        require(epsilon_grid[i] >= 0.0, "sweep.epsilons", "values must be >= 0");
        require(i == 0 || epsilon_grid[i] > epsilon_grid[i - 1], "sweep.epsilons",
                "values must be strictly increasing");
    }
    require(!seeds.empty(), "sweep.seeds", "must not be empty");
    require(!theta || *theta > 0.0, "metrics.theta", "must be > 0");
    require(!output_dir.empty(), "output.dir", "must not be empty");
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    ExperimentConfig cfg;
    std::map<std::uint64_t, FeatureGroup> groups;
    std::optional<std::size_t> p;

    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto where = std::string(source) + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        try {
            auto as_size = [&] { return static_cast<std::size_t>(parse_uint(value)); };
            if (key == "data.n") cfg.n = as_size();
            else if (key == "data.p") p = as_size();
            else if (key == "data.rho") cfg.rho = parse_double(value);
            else if (key == "data.seed") cfg.data_seed = parse_uint(value);
            else if (key.rfind("data.group.", 0) == 0) {
                const auto id = parse_uint(std::string_view(key).substr(11));
                if (groups.count(id)) throw std::invalid_argument("duplicate group key");
                groups.emplace(id, parse_group(value));
            }
            else if (key == "solver.lambda") cfg.lambda = parse_double(value);
            else if (key == "solver.lambda1") cfg.lambda1 = parse_double(value);
            else if (key == "solver.lambda2") cfg.lambda2 = parse_double(value);
            else if (key == "solver.max_iters") cfg.fista.max_iters = as_size();
            else if (key == "solver.tol") cfg.fista.tol = parse_double(value);
            else if (key == "attack.epsilon") cfg.attack.epsilon = parse_double(value);
            else if (key == "attack.gamma0") cfg.attack.gamma0 = parse_double(value);
            else if (key == "attack.eta") cfg.attack.eta = parse_double(value);
            else if (key == "attack.max_iters") cfg.attack.max_iters = as_size();
            else if (key == "attack.tol") cfg.attack.tol = parse_double(value);
            else if (key == "attack.escalation_factor") cfg.attack.escalation_factor = parse_double(value);
            else if (key == "attack.max_escalations") cfg.attack.max_escalations = as_size();
            else if (key == "attack.refine_steps") cfg.attack.refine_steps = as_size();
            else if (key == "attack.seed") cfg.attack.seed = parse_uint(value);
            else if (key == "sweep.epsilons") {
                cfg.epsilon_grid.clear();
                for (auto tok : split_any(value, ", \t")) cfg.epsilon_grid.push_back(parse_double(tok));
            }
            else if (key == "sweep.seeds") cfg.seeds = parse_index_list(value);
            else if (key == "metrics.theta") {
                cfg.theta = parse_bool_like_empty(value) ? std::nullopt
                                                         : std::optional<double>(parse_double(value));
            }
            else if (key == "output.dir") cfg.output_dir = std::string(value);
            else throw ConfigError(where + ": unknown key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(where + ": " + key + ": " + e.what());
        }
    }

    if (!groups.empty()) {
        cfg.groups.groups.clear();
        for (auto& [id, g] : groups) cfg.groups.groups.push_back(std::move(g));
    }
    if (p) cfg.groups.p = *p;
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text(path), path.string());
}

std::string to_config_text(const ExperimentConfig& c) {
    std::ostringstream out;
    auto kv = [&out](std::string_view key, const std::string& value) {
        out << key << " = " << value << '\n';
    };
    auto num = [](double v) { return format_short(v); };
    out << "# data\n";
    kv("data.n", std::to_string(c.n));
    kv("data.p", std::to_string(c.groups.p));
    kv("data.rho", num(c.rho));
    kv("data.seed", std::to_string(c.data_seed));
    for (std::size_t g = 0; g < c.groups.groups.size(); ++g) {
        kv("data.group." + std::to_string(g + 1), format_group(c.groups.groups[g]));
    }
    out << "\n# solver\n";
    kv("solver.lambda", num(c.lambda));
    kv("solver.lambda1", num(c.lambda1));
    kv("solver.lambda2", num(c.lambda2));
    kv("solver.max_iters", std::to_string(c.fista.max_iters));
    kv("solver.tol", num(c.fista.tol));
    out << "\n# attack\n";
    kv("attack.epsilon", num(c.attack.epsilon));
    kv("attack.gamma0", num(c.attack.gamma0));
    kv("attack.eta", num(c.attack.eta));
    kv("attack.max_iters", std::to_string(c.attack.max_iters));
    kv("attack.tol", num(c.attack.tol));
    kv("attack.escalation_factor", num(c.attack.escalation_factor));
    kv("attack.max_escalations", std::to_string(c.attack.max_escalations));
    kv("attack.refine_steps", std::to_string(c.attack.refine_steps));
    kv("attack.seed", std::to_string(c.attack.seed));
    out << "\n# sweep\n";
    std::string eps;
    for (std::size_t i = 0; i < c.epsilon_grid.size(); ++i) {
        if (i) eps += ", ";
        eps += num(c.epsilon_grid[i]);
    }
    kv("sweep.epsilons", eps);
    kv("sweep.seeds", format_index_list(c.seeds));
    out << "\n# metrics\n";
    kv("metrics.theta", c.theta ? num(*c.theta) : "auto");
    out << "\n# output\n";
    kv("output.dir", c.output_dir);
    return out.str();
}

}  // namespace owladv
