#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace owladv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Nonincreasing, nonnegative weight vector of an ordered weighted l1 norm.
/// Construction validates w_1 >= ... >= w_p >= 0 and w_1 > 0, so any code
/// holding an OwlWeights may rely on those invariants.
class OwlWeights {
public:
    explicit OwlWeights(Vector w);

    const Vector& values() const noexcept { return w_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
    double operator[](std::size_t i) const { return w_(static_cast<Eigen::Index>(i)); }

private:
    Vector w_;
};

struct OscarParams {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::size_t p = 0;
};

/// w_i = lambda1 + lambda2 * (p - i) for 1-based i.
OwlWeights oscar_weights(const OscarParams& params);

double owl_norm(const Vector& x, const OwlWeights& w);

/// Indices of z ordered by |z| descending. Stable: equal magnitudes keep
/// their original relative order.
class AbsDescendingPermutation {
public:
    AbsDescendingPermutation() = default;
    explicit AbsDescendingPermutation(std::vector<std::size_t> order);

    /// order()[r] is the index holding the r-th largest magnitude.
    const std::vector<std::size_t>& order() const noexcept { return order_; }
    /// rank()[j] is the position of index j in order().
    const std::vector<std::size_t>& rank() const noexcept { return rank_; }
    std::size_t size() const noexcept { return order_.size(); }

private:
    std::vector<std::size_t> order_;
    std::vector<std::size_t> rank_;
};

AbsDescendingPermutation abs_descending_permutation(const Vector& z);

/// Weights rearranged to follow z: result_j = scale * w_{rank(j)}.
Vector rank_matched_weights(const AbsDescendingPermutation& perm, const OwlWeights& w,
                            double scale = 1.0);

/// Approximate proximity operator of OSCAR:
///   sign(z) .* max(|z| - w~, 0),  w~ = scale * P(z)^T w.
/// sign(0) is 0. `scale` must be nonnegative; the solver passes lambda/alpha.
Vector prox_oscar_apo(const Vector& z, const OwlWeights& w, double scale = 1.0);

/// Entry-wise soft threshold S_rho.
Vector soft_threshold(const Vector& z, double rho);

inline double sign_of(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace owladv
