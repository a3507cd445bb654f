#pragma once

#include <random>
#include <vector>

#include "owladv/owl.hpp"

namespace owladv::test {

inline Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline Vector gaussian_vector(Eigen::Index n, std::mt19937_64& rng, double sd = 1.0) {
    std::normal_distribution<double> g(0.0, sd);
    Vector v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (auto& x : m.reshaped()) x = g(rng);
    return m;
}

// Nonincreasing, nonnegative, first entry positive.
inline Vector random_owl_weights(Eigen::Index p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector w(p);
    for (auto& x : w) x = u(rng) < 0.2 ? 0.0 : u(rng);
    std::sort(w.begin(), w.end(), std::greater<>());
    w(0) += 0.05;
    return w;
}

}  // namespace owladv::test
