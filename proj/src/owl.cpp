#include "owladv/owl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace owladv {

OwlWeights::OwlWeights(Vector w) : w_(std::move(w)) {
    if (w_.size() == 0) {
        throw std::invalid_argument("OwlWeights: empty weight vector");
    }
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
        if (!std::isfinite(w_(i)) || w_(i) < 0.0) {
            throw std::invalid_argument("OwlWeights: weight " + std::to_string(i + 1) +
                                        " is negative or not finite");
        }
        if (i > 0 && w_(i) > w_(i - 1)) {
            throw std::invalid_argument("OwlWeights: weights must be nonincreasing (index " +
                                        std::to_string(i + 1) + ")");
        }
    }
    if (!(w_(0) > 0.0)) {
        throw std::invalid_argument("OwlWeights: leading weight must be positive");
    }
}

OwlWeights oscar_weights(const OscarParams& params) {
    if (params.p == 0) {
        throw std::invalid_argument("oscar_weights: p must be positive");
    }
    if (params.lambda1 < 0.0 || params.lambda2 < 0.0) {
        throw std::invalid_argument("oscar_weights: lambda1 and lambda2 must be nonnegative");
    }
    if (!(params.lambda1 + params.lambda2 > 0.0)) {
        throw std::invalid_argument("oscar_weights: lambda1 + lambda2 must be positive");
    }
    const auto p = static_cast<Eigen::Index>(params.p);
    Vector w(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        w(i) = params.lambda1 + params.lambda2 * static_cast<double>(p - 1 - i);
    }
    return OwlWeights(std::move(w));
}

double owl_norm(const Vector& x, const OwlWeights& w) {
    if (static_cast<std::size_t>(x.size()) != w.size()) {
        throw std::invalid_argument("owl_norm: length mismatch");
    }
    std::vector<double> mags(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) mags[i] = std::abs(x(i));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double total = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) total += w[i] * mags[i];
    return total;
}

AbsDescendingPermutation::AbsDescendingPermutation(std::vector<std::size_t> order)
    : order_(std::move(order)), rank_(order_.size(), order_.size()) {
    for (std::size_t r = 0; r < order_.size(); ++r) {
        const auto j = order_[r];
        if (j >= order_.size() || rank_[j] != order_.size()) {
            throw std::invalid_argument("AbsDescendingPermutation: not a bijection");
        }
        rank_[j] = r;
    }
}

AbsDescendingPermutation abs_descending_permutation(const Vector& z) {
    std::vector<std::size_t> order(static_cast<std::size_t>(z.size()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&z](std::size_t a, std::size_t b) {
        return std::abs(z(static_cast<Eigen::Index>(a))) > std::abs(z(static_cast<Eigen::Index>(b)));
    });
    return AbsDescendingPermutation(std::move(order));
}

Vector rank_matched_weights(const AbsDescendingPermutation& perm, const OwlWeights& w,
                            double scale) {
    if (perm.size() != w.size()) {
        throw std::invalid_argument("rank_matched_weights: length mismatch");
    }
    Vector out(static_cast<Eigen::Index>(perm.size()));
    const auto& rank = perm.rank();
    for (std::size_t j = 0; j < rank.size(); ++j) {
        out(static_cast<Eigen::Index>(j)) = scale * w[rank[j]];
    }
    return out;
}

Vector prox_oscar_apo(const Vector& z, const OwlWeights& w, double scale) {
    if (static_cast<std::size_t>(z.size()) != w.size()) {
        throw std::invalid_argument("prox_oscar_apo: length mismatch");
    }
    if (!(scale >= 0.0)) {
        throw std::invalid_argument("prox_oscar_apo: weight scale must be nonnegative");
    }
    const Vector wt = rank_matched_weights(abs_descending_permutation(z), w, scale);
    Vector out(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        out(j) = sign_of(z(j)) * std::max(std::abs(z(j)) - wt(j), 0.0);
    }
    return out;
}

Vector soft_threshold(const Vector& z, double rho) {
    if (!(rho >= 0.0)) {
        throw std::invalid_argument("soft_threshold: rho must be nonnegative");
    }
    Vector out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double v = z(i);
        if (v > rho) {
            out(i) = v - rho;
        } else if (v < -rho) {
            out(i) = v + rho;
        } else {
            out(i) = 0.0;
        }
    }
    return out;
}

}  // namespace owladv
