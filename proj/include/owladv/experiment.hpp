#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "owladv/attack.hpp"
#include "owladv/config.hpp"
#include "owladv/solver.hpp"
#include "owladv/synthdata.hpp"

namespace owladv {

struct Dataset {
    Matrix A;
    GroundTruth truth;
    Vector y;  // noiseless measurements A x*
    std::uint64_t seed = 0;
};

Dataset generate_dataset(const ExperimentConfig& config, std::uint64_t seed);

RegressionProblem make_problem(const ExperimentConfig& config, const Matrix& A, Vector y);

/// splitmix64 of (base, stream); used to give each random stream of a cell
/// its own reproducible seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// OSCAR re-solved on y = A x* + nu, scored against x_bar*.
struct NoiseEvaluation {
    FistaSolution solution;
    double deviation = 0.0;
    std::size_t misaligned = 0;
    double l1_over_n = 0.0;
};

NoiseEvaluation evaluate_noise(const ExperimentConfig& config, const Matrix& A,
                               const GroundTruth& truth, const Vector& nu);

enum class Condition { noiseless, random, attack };
const char* to_string(Condition c);

struct SweepRecord {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    Condition condition = Condition::noiseless;
    double deviation = 0.0;
    std::size_t misaligned = 0;
    double l1_over_n = 0.0;
    bool feasible = true;
    double gamma_final = 0.0;
    std::size_t attack_iterations = 0;
    std::size_t solver_iterations = 0;
    double surrogate_deviation = 0.0;  // ||x_hat(nu) - x_bar*||^2 through the frozen one-step map
    std::string status = "ok";
    double wall_seconds = 0.0;
};

struct SweepResult {
    /// Ordered by epsilon, then seed, then condition (noiseless, random, attack).
    std::vector<SweepRecord> records;
    /// Coefficients of the first seed, for the per-epsilon plot pages.
    Vector plot_x_star;
    Vector plot_noiseless;
    std::vector<Vector> plot_attacked;  // one per epsilon
};

/// Runs every (epsilon, seed) cell with `jobs` OpenMP workers. Records do not
/// depend on the worker count. Cell failures are recorded, not thrown.
SweepResult run_sweep(const ExperimentConfig& config, int jobs = 1);

/// Deterministic report (no timing columns).
std::string report_csv(const SweepResult& result);
std::string timings_csv(const SweepResult& result);

/// plots/eps_<epsilon>.svg
std::filesystem::path plot_path(const std::filesystem::path& out_dir, double epsilon);

/// Writes report.csv, timings.csv and one plot page per epsilon.
void write_sweep_outputs(const SweepResult& result, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir);

}  // namespace owladv
