#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "owladv/kernels.hpp"
#include "support.hpp"

using namespace owladv;

// The OpenMP variants must agree with the serial reference bit for bit,
// whatever the thread count.

TEST_CASE("matvec: serial and OpenMP variants are bitwise identical") {
    std::mt19937_64 rng(21);
    for (int threads : {1, 2, 3, 7}) {
        omp_set_num_threads(threads);
        for (auto [r, c] : {std::pair{1, 1}, {5, 3}, {50, 100}, {257, 129}}) {
            const Matrix A = test::gaussian_matrix(r, c, rng);
            const Vector x = test::gaussian_vector(c, rng);
            const Vector v = test::gaussian_vector(r, rng);
            CHECK(kernels::matvec_serial(A, x) == kernels::matvec_omp(A, x));
            CHECK(kernels::matvec_t_serial(A, v) == kernels::matvec_t_omp(A, v));
            CHECK(kernels::matvec(A, x) == kernels::matvec_serial(A, x));
            CHECK(kernels::matvec_t(A, v) == kernels::matvec_t_serial(A, v));
        }
    }
    omp_set_num_threads(1);
}

TEST_CASE("matvec agrees with Eigen's product") {
    std::mt19937_64 rng(22);
    const Matrix A = test::gaussian_matrix(40, 30, rng);
    const Vector x = test::gaussian_vector(30, rng);
    const Vector r = test::gaussian_vector(40, rng);
    CHECK((kernels::matvec_serial(A, x) - A * x).norm() <= 1e-12 * (A * x).norm());
    CHECK((kernels::matvec_t_serial(A, r) - A.transpose() * r).norm() <= 1e-12 * (A.transpose() * r).norm());
}

TEST_CASE("matvec rejects mismatched shapes") {
    const Matrix A = Matrix::Ones(3, 2);
    CHECK_THROWS_AS(kernels::matvec_serial(A, Vector::Ones(3)), std::invalid_argument);
    CHECK_THROWS_AS(kernels::matvec_omp(A, Vector::Ones(3)), std::invalid_argument);
    CHECK_THROWS_AS(kernels::matvec_t_serial(A, Vector::Ones(2)), std::invalid_argument);
    CHECK_THROWS_AS(kernels::matvec_t_omp(A, Vector::Ones(2)), std::invalid_argument);
}

TEST_CASE("central difference: serial and OpenMP variants are bitwise identical") {
    std::mt19937_64 rng(23);
    const Matrix Q = test::gaussian_matrix(12, 12, rng);
    const kernels::ScalarFn f = [&](const Vector& x) { return x.dot(Q * x) + std::sin(x.sum()); };
    for (int threads : {1, 4}) {
        omp_set_num_threads(threads);
        const Vector x = test::gaussian_vector(12, rng);
        CHECK(kernels::central_difference_serial(f, x, 1e-5) == kernels::central_difference_omp(f, x, 1e-5));
    }
    omp_set_num_threads(1);
}

TEST_CASE("central difference is exact for quadratics up to rounding") {
    const kernels::ScalarFn f = [](const Vector& x) { return x.squaredNorm(); };
    const Vector g = kernels::central_difference_serial(f, test::vec({1, -2}), 1e-5);
    CHECK(g(0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g(1) == doctest::Approx(-4.0).epsilon(1e-6));
}

TEST_CASE("central difference input checks") {
    const kernels::ScalarFn f = [](const Vector& x) { return x.sum(); };
    CHECK_THROWS_AS(kernels::central_difference_serial(f, Vector::Ones(2), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernels::central_difference_omp(f, Vector::Ones(2), -1.0), std::invalid_argument);
    const kernels::ScalarFn bad = [](const Vector&) { return std::nan(""); };
    CHECK_THROWS_AS(kernels::central_difference_serial(bad, Vector::Ones(2), 1e-6), std::domain_error);
    CHECK_THROWS_AS(kernels::central_difference_omp(bad, Vector::Ones(2), 1e-6), std::domain_error);
}
