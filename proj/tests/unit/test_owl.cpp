#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "owladv/owl.hpp"
#include "support.hpp"

using namespace owladv;
using owladv::test::vec;

namespace {

// Sort |x| descending with a plain comparison sort and dot with w.
double naive_owl_norm(const Vector& x, const Vector& w) {
    std::vector<double> a(x.begin(), x.end());
    for (auto& v : a) v = std::abs(v);
    std::sort(a.begin(), a.end(), std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w(static_cast<Eigen::Index>(i)) * a[i];
    return s;
}

}  // namespace

TEST_CASE("oscar weights follow lambda1 + lambda2 (p - i)") {
    CHECK(oscar_weights({1.0, 0.5, 3}).values() == vec({2.0, 1.5, 1.0}));
    CHECK(oscar_weights({1.0, 0.0, 4}).values() == vec({1, 1, 1, 1}));
    CHECK(oscar_weights({0.0, 1.0, 2}).values() == vec({1, 0}));
}

TEST_CASE("oscar weights reject degenerate parameters") {
    CHECK_THROWS_AS(oscar_weights({1.0, 0.1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(oscar_weights({-1.0, 0.1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(oscar_weights({1.0, -0.1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(oscar_weights({0.0, 0.0, 3}), std::invalid_argument);
}

TEST_CASE("OwlWeights enforces its invariants") {
    CHECK_NOTHROW(OwlWeights(vec({2, 2, 0})));
    CHECK_THROWS_AS(OwlWeights(Vector{}), std::invalid_argument);
    CHECK_THROWS_AS(OwlWeights(vec({1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(OwlWeights(vec({1, -0.5})), std::invalid_argument);
    CHECK_THROWS_AS(OwlWeights(vec({0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(OwlWeights(vec({std::nan(""), 0})), std::invalid_argument);
}

TEST_CASE("owl norm examples") {
    CHECK(owl_norm(vec({3, -1, 2}), OwlWeights(vec({3, 2, 1}))) == 14.0);
    CHECK(owl_norm(Vector::Zero(5), oscar_weights({1, 1, 5})) == 0.0);
    CHECK(owl_norm(vec({-5, 2}), OwlWeights(vec({1, 1}))) == 7.0);
    CHECK_THROWS_AS(owl_norm(vec({1, 2, 3}), OwlWeights(vec({1, 1}))), std::invalid_argument);
}

TEST_CASE("owl norm matches a sorted-dot oracle") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index p = 1 + t % 17;
        const Vector x = test::gaussian_vector(p, rng, 3.0);
        const Vector w = test::random_owl_weights(p, rng);
        CHECK(owl_norm(x, OwlWeights(w)) == doctest::Approx(naive_owl_norm(x, w)).epsilon(1e-12));
    }
}

TEST_CASE("abs descending permutation") {
    const auto perm = abs_descending_permutation(vec({0.5, -2, 1}));
    CHECK(perm.order() == std::vector<std::size_t>{1, 2, 0});
    CHECK(perm.rank() == std::vector<std::size_t>{2, 0, 1});

    CHECK(abs_descending_permutation(vec({1, -1})).order() == std::vector<std::size_t>{0, 1});
    CHECK(abs_descending_permutation(Vector()).size() == 0);
    CHECK_THROWS_AS(AbsDescendingPermutation({0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(AbsDescendingPermutation({0, 2}), std::invalid_argument);
}

TEST_CASE("permutation property: order sorts magnitudes, rank inverts order") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int t = 0; t < 200; ++t) {
        Vector z(1 + t % 23);
        for (auto& v : z) v = small(rng);  // many ties
        const auto perm = abs_descending_permutation(z);
        for (std::size_t r = 0; r + 1 < perm.size(); ++r) {
            const auto a = perm.order()[r], b = perm.order()[r + 1];
            CHECK(std::abs(z(a)) >= std::abs(z(b)));
            if (std::abs(z(a)) == std::abs(z(b))) CHECK(a < b);
        }
        for (std::size_t r = 0; r < perm.size(); ++r) CHECK(perm.rank()[perm.order()[r]] == r);
    }
}

TEST_CASE("prox examples") {
    const OwlWeights w(vec({1.5, 1, 0.5}));
    CHECK(rank_matched_weights(abs_descending_permutation(vec({0.5, -2, 1})), w) == vec({0.5, 1.5, 1}));
    CHECK(prox_oscar_apo(vec({0.5, -2, 1}), w) == vec({0, -0.5, 0}));
    CHECK(prox_oscar_apo(Vector::Zero(3), w) == Vector::Zero(3));
    CHECK(prox_oscar_apo(vec({1.2, -0.7, 1.5}), OwlWeights(vec({1.5, 1.5, 1.5}))) == Vector::Zero(3));
    CHECK(prox_oscar_apo(vec({4, -4}), OwlWeights(vec({2, 1})), 0.5) == vec({3, -3.5}));
    CHECK_THROWS_AS(prox_oscar_apo(vec({1}), OwlWeights(vec({1})), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(prox_oscar_apo(vec({1, 2}), OwlWeights(vec({1})), 1.0), std::invalid_argument);
}

TEST_CASE("prox properties: shrinkage, sign, oddness, permutation equivariance") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 300; ++t) {
        const Eigen::Index p = 1 + t % 19;
        const Vector z = test::gaussian_vector(p, rng, 2.0);
        const OwlWeights w(test::random_owl_weights(p, rng));
        const Vector x = prox_oscar_apo(z, w, 0.7);

        for (Eigen::Index j = 0; j < p; ++j) {
            CHECK(std::abs(x(j)) <= std::abs(z(j)));
            CHECK(x(j) * z(j) >= 0.0);
        }
        CHECK(prox_oscar_apo(-z, w, 0.7) == -x);

        std::vector<Eigen::Index> idx(static_cast<std::size_t>(p));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        Vector zp(p);
        for (Eigen::Index j = 0; j < p; ++j) zp(j) = z(idx[static_cast<std::size_t>(j)]);
        const Vector xp = prox_oscar_apo(zp, w, 0.7);
        for (Eigen::Index j = 0; j < p; ++j) CHECK(xp(j) == x(idx[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("prox with lambda2 = 0 is the soft threshold") {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 100; ++t) {
        const Vector z = test::gaussian_vector(8, rng);
        CHECK(prox_oscar_apo(z, oscar_weights({0.4, 0.0, 8})) == soft_threshold(z, 0.4));
    }
}

TEST_CASE("soft threshold") {
    CHECK(soft_threshold(vec({1.2}), 0.5)(0) == doctest::Approx(0.7));
    CHECK(soft_threshold(vec({0.3, -0.5}), 0.5) == Vector::Zero(2));
    CHECK(soft_threshold(vec({-1.2}), 0.5)(0) == doctest::Approx(-0.7));
    CHECK(soft_threshold(vec({-1.2, 3}), 0.0) == vec({-1.2, 3}));
    CHECK_THROWS_AS(soft_threshold(vec({1}), -0.1), std::invalid_argument);
}

TEST_CASE("sign_of") {
    CHECK(sign_of(2.0) == 1.0);
    CHECK(sign_of(-0.1) == -1.0);
    CHECK(sign_of(0.0) == 0.0);
    CHECK(sign_of(-0.0) == 0.0);
}
