#include "owladv/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace owladv {

double deviation(const Vector& x_hat, const Vector& x_bar_star) {
    if (x_hat.size() != x_bar_star.size()) {
        throw std::invalid_argument("deviation: length mismatch");
    }
    return (x_hat - x_bar_star).squaredNorm();
}

BudgetCheck l1_budget_check(const Vector& nu, double epsilon) {
    if (nu.size() == 0) throw std::invalid_argument("l1_budget_check: empty noise vector");
    const double ratio = nu.lpNorm<1>() / static_cast<double>(nu.size());
    return {ratio <= epsilon + 1e-12, ratio};
}

double default_misalignment_theta(const Vector& x_bar_star) {
    const double peak = x_bar_star.size() ? x_bar_star.cwiseAbs().maxCoeff() : 0.0;
    if (!(peak > 0.0)) {
        throw std::invalid_argument(
            "misalignment_count: x_bar_star is zero, an explicit theta is required");
    }
    return 0.25 * peak;
}

std::size_t misalignment_count(const Vector& x_hat, const Vector& x_bar_star,
                               std::optional<double> theta) {
    if (x_hat.size() != x_bar_star.size()) {
        throw std::invalid_argument("misalignment_count: length mismatch");
    }
    const double th = theta ? *theta : default_misalignment_theta(x_bar_star);
    if (!(th > 0.0)) throw std::invalid_argument("misalignment_count: theta must be positive");
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < x_hat.size(); ++j) {
        if (std::abs(x_hat(j) - x_bar_star(j)) > th) ++count;
    }
    return count;
}

Vector finite_diff_gradient(const kernels::ScalarFn& f, const Vector& nu, double h) {
    return nu.size() >= 16 && !omp_in_parallel() ? kernels::central_difference_omp(f, nu, h)
                                                 : kernels::central_difference_serial(f, nu, h);
}

}  // namespace owladv
