#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "owladv/owl.hpp"

namespace owladv {

using Rng = std::mt19937_64;

/// A feature group: 0-based member indices and one coefficient per member.
struct FeatureGroup {
    std::vector<std::size_t> members;
    std::vector<double> coefficients;

    static FeatureGroup constant(std::vector<std::size_t> members, double value);
};

struct GroupSpec {
    std::size_t p = 0;
    std::vector<FeatureGroup> groups;

    /// Throws std::invalid_argument on out-of-range, duplicate or
    /// overlapping members, or coefficient/member count mismatch.
    void validate() const;
    std::size_t grouped_count() const;
};

struct GroundTruth {
    Vector x_star;
    Vector x_bar_star;
    GroupSpec spec;
};

/// Column j of group g is sqrt(rho) z_g + sqrt(1 - rho) e_j with z_g, e_j
/// i.i.d. N(0, I_n); ungrouped columns are e_j. Draw order: all group
/// factors first, then columns 0..p-1.
Matrix generate_grouped_design(std::size_t n, const GroupSpec& spec, double rho, Rng& rng);

/// x* carries each member's coefficient; x_bar* is the within-group mean.
GroundTruth generate_ground_truth(const GroupSpec& spec);

/// y = A x* + nu
Vector measure(const Matrix& A, const Vector& x_star, const Vector& nu);

/// The default experiment layout: p = 100, groups at 1..10 (+1) and 51..60 (-1).
GroupSpec default_group_spec();

}  // namespace owladv
