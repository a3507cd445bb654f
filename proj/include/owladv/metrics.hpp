#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "owladv/kernels.hpp"
#include "owladv/owl.hpp"

namespace owladv {

struct EvaluationReport {
    double deviation = 0.0;
    double l1_over_n = 0.0;
    std::size_t misaligned_count = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    bool attacked = false;
};

/// ||x_hat - x_bar_star||_2^2
double deviation(const Vector& x_hat, const Vector& x_bar_star);

struct BudgetCheck {
    bool within = false;
    double ratio = 0.0;  // ||nu||_1 / n
};

/// ||nu||_1 / n <= epsilon, with 1e-12 slack.
BudgetCheck l1_budget_check(const Vector& nu, double epsilon);

/// Default misalignment threshold 0.25 * max_j |x_bar_j|. Throws when x_bar is zero.
double default_misalignment_theta(const Vector& x_bar_star);

/// #{ j : |x_hat_j - x_bar_j| > theta }. Without theta the default is used.
std::size_t misalignment_count(const Vector& x_hat, const Vector& x_bar_star,
                               std::optional<double> theta = std::nullopt);

Vector finite_diff_gradient(const kernels::ScalarFn& f, const Vector& nu, double h = 1e-6);

}  // namespace owladv
