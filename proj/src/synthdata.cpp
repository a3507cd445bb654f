#include "owladv/synthdata.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "owladv/kernels.hpp"

namespace owladv {

FeatureGroup FeatureGroup::constant(std::vector<std::size_t> members, double value) {
    FeatureGroup g;
    g.coefficients.assign(members.size(), value);
    g.members = std::move(members);
    return g;
}

void GroupSpec::validate() const {
    if (p == 0) throw std::invalid_argument("GroupSpec: p must be positive");
    std::vector<bool> taken(p, false);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& grp = groups[g];
        if (grp.members.empty()) {
            throw std::invalid_argument("GroupSpec: group " + std::to_string(g + 1) + " is empty");
        }
        if (grp.coefficients.size() != grp.members.size()) {
            throw std::invalid_argument("GroupSpec: group " + std::to_string(g + 1) +
                                        " has a coefficient count different from its member count");
        }
        for (auto j : grp.members) {
            if (j >= p) {
                throw std::invalid_argument("GroupSpec: index " + std::to_string(j + 1) +
                                            " exceeds p = " + std::to_string(p));
            }
            if (taken[j]) {
                throw std::invalid_argument("GroupSpec: feature " + std::to_string(j + 1) +
                                            " belongs to more than one group");
            }
            taken[j] = true;
        }
    }
}

std::size_t GroupSpec::grouped_count() const {
    std::size_t s = 0;
    for (const auto& g : groups) s += g.members.size();
    return s;
}

Matrix generate_grouped_design(std::size_t n, const GroupSpec& spec, double rho, Rng& rng) {
    if (n == 0) throw std::invalid_argument("generate_grouped_design: n must be positive");
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw std::invalid_argument("generate_grouped_design: rho must lie in [0, 1)");
    }
    if (spec.p == 0) throw std::invalid_argument("generate_grouped_design: empty spec");
    spec.validate();

    const auto rows = static_cast<Eigen::Index>(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] {
        Vector v(rows);
        for (Eigen::Index i = 0; i < rows; ++i) v(i) = normal(rng);
        return v;
    };

    std::vector<Vector> factors;
    factors.reserve(spec.groups.size());
    for (std::size_t g = 0; g < spec.groups.size(); ++g) factors.push_back(draw());

    std::vector<int> group_of(spec.p, -1);
    for (std::size_t g = 0; g < spec.groups.size(); ++g) {
        for (auto j : spec.groups[g].members) group_of[j] = static_cast<int>(g);
    }

    const double shared = std::sqrt(rho);
    const double own = std::sqrt(1.0 - rho);
    Matrix A(rows, static_cast<Eigen::Index>(spec.p));
    for (std::size_t j = 0; j < spec.p; ++j) {
        Vector e = draw();
        const auto col = static_cast<Eigen::Index>(j);
        if (group_of[j] >= 0) {
            A.col(col) = shared * factors[static_cast<std::size_t>(group_of[j])] + own * e;
        } else {
            A.col(col) = e;
        }
    }
    return A;
}

GroundTruth generate_ground_truth(const GroupSpec& spec) {
    spec.validate();
    const auto p = static_cast<Eigen::Index>(spec.p);
    GroundTruth gt{Vector::Zero(p), Vector::Zero(p), spec};
    for (const auto& grp : spec.groups) {
        const double mean = std::accumulate(grp.coefficients.begin(), grp.coefficients.end(), 0.0) /
                            static_cast<double>(grp.coefficients.size());
        for (std::size_t m = 0; m < grp.members.size(); ++m) {
            const auto j = static_cast<Eigen::Index>(grp.members[m]);
            gt.x_star(j) = grp.coefficients[m];
            gt.x_bar_star(j) = mean;
        }
    }
    return gt;
}

Vector measure(const Matrix& A, const Vector& x_star, const Vector& nu) {
    if (A.cols() != x_star.size() || A.rows() != nu.size()) {
        throw std::invalid_argument("measure: dimension mismatch");
    }
    return kernels::matvec(A, x_star) + nu;
}

GroupSpec default_group_spec() {
    GroupSpec spec;
    spec.p = 100;
    std::vector<std::size_t> first(10), second(10);
    std::iota(first.begin(), first.end(), std::size_t{0});
    std::iota(second.begin(), second.end(), std::size_t{50});
    spec.groups.push_back(FeatureGroup::constant(std::move(first), 1.0));
    spec.groups.push_back(FeatureGroup::constant(std::move(second), -1.0));
    return spec;
}

}  // namespace owladv
