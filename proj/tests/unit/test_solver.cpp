#include <doctest.h>

#include <Eigen/SVD>

#include <random>

#include "owladv/solver.hpp"
#include "support.hpp"

using namespace owladv;
using owladv::test::vec;

namespace {

double fixed_point_residual(const RegressionProblem& problem, const FistaSolution& s) {
    return (prox_grad_step(problem, s.x_hat, s.alpha_star) - s.x_hat).lpNorm<Eigen::Infinity>();
}

RegressionProblem random_problem(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p, double lambda,
                                 double lambda1, double lambda2) {
    Matrix A = test::gaussian_matrix(n, p, rng);
    Vector y = test::gaussian_vector(n, rng, 2.0);
    return RegressionProblem{A, y, lambda, oscar_weights({lambda1, lambda2, static_cast<std::size_t>(p)})};
}

}  // namespace

TEST_CASE("objective examples") {
    const Matrix I2 = Matrix::Identity(2, 2);
    const OwlWeights ones(vec({1, 1}));
    CHECK(objective({I2, vec({1, 0}), 1.0, ones}, vec({1, 0})) == 1.0);
    CHECK(objective({I2, vec({3, -4}), 1.0, ones}, Vector::Zero(2)) == 25.0);
    CHECK(objective({I2, vec({3, -4}), 0.0, ones}, vec({3, -4})) == 0.0);
    CHECK_THROWS_AS(objective({I2, vec({1, 0}), 1.0, ones}, vec({1, 0, 0})), std::invalid_argument);
}

TEST_CASE("problem validation") {
    const OwlWeights w2(vec({1, 1}));
    CHECK_THROWS_AS(RegressionProblem({Matrix::Ones(3, 2), Vector::Ones(2), 1.0, w2}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(RegressionProblem({Matrix::Ones(3, 3), Vector::Ones(3), 1.0, w2}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(RegressionProblem({Matrix::Ones(2, 2), Vector::Ones(2), -1.0, w2}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(fista_solve({Matrix::Identity(2, 2), Vector::Ones(2), 1.0, w2}, {0, 1e-8}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fista_solve({Matrix::Identity(2, 2), Vector::Ones(2), 1.0, w2}, {10, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("lipschitz bound") {
    CHECK(lipschitz_alpha(Matrix::Identity(5, 5)) == doctest::Approx(1.01).epsilon(1e-6));
    CHECK(lipschitz_alpha(2.0 * Matrix::Identity(4, 4)) == doctest::Approx(4.04).epsilon(1e-6));
    CHECK_THROWS_AS(lipschitz_alpha(Matrix::Zero(3, 2)), std::invalid_argument);
}

TEST_CASE("lipschitz bound matches an SVD oracle") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 50; ++t) {
        const Matrix A = test::gaussian_matrix(4, 3, rng);
        const double s = Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
        CHECK(lipschitz_alpha(A) == doctest::Approx(1.01 * s * s).epsilon(0.01));
        CHECK(lipschitz_alpha(A) >= s * s);
    }
    // Larger and rank-deficient shapes.
    for (auto [n, p] : {std::pair{50, 100}, {100, 20}}) {
        const Matrix A = test::gaussian_matrix(n, p, rng);
        const double s = Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
        CHECK(lipschitz_alpha(A) == doctest::Approx(1.01 * s * s).epsilon(0.01));
    }
}

TEST_CASE("lipschitz handles a start vector in the null space") {
    // Rows orthogonal to the (non-symmetric) start direction still converge.
    Matrix A = Matrix::Zero(1, 2);
    A(0, 1) = 3.0;
    CHECK(lipschitz_alpha(A) == doctest::Approx(9.09).epsilon(1e-6));
}

TEST_CASE("identity design, lambda = 0: exact fit") {
    const Vector y = vec({1.5, -2, 0.25, 3});
    const auto s = fista_solve({Matrix::Identity(4, 4), y, 0.0, oscar_weights({1, 0.1, 4})});
    CHECK(s.converged);
    CHECK((s.x_hat - y).lpNorm<Eigen::Infinity>() <= 1e-7);
}

TEST_CASE("zero measurements give the zero solution") {
    std::mt19937_64 rng(32);
    const Matrix A = test::gaussian_matrix(6, 4, rng);
    for (double lambda : {0.0, 0.5, 10.0}) {
        const auto s = fista_solve({A, Vector::Zero(6), lambda, oscar_weights({1, 0.2, 4})});
        CHECK(s.x_hat == Vector::Zero(4));
        CHECK(s.converged);
    }
}

TEST_CASE("identity design with OSCAR: fixed-point residual") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 20; ++t) {
        const RegressionProblem problem{Matrix::Identity(4, 4), test::gaussian_vector(4, rng), 1.0,
                                        oscar_weights({0.1, 0.05, 4})};
        const FistaOptions options;
        const auto s = fista_solve(problem, options);
        CHECK(s.converged);
        CHECK(fixed_point_residual(problem, s) <= 10 * options.tol);
    }
}

TEST_CASE("property: converged solutions are fixed points and beat the zero start") {
    std::mt19937_64 rng(34);
    std::uniform_int_distribution<int> dim(1, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const FistaOptions options;
    int converged = 0;
    for (int t = 0; t < 60; ++t) {
        const int p = dim(rng);
        const auto problem = random_problem(rng, p + 4, p, 2.0 * u(rng), 0.1 + u(rng), 0.02 * u(rng));
        const auto s = fista_solve(problem, options);
        CHECK(objective(problem, s.x_hat) <= objective(problem, Vector::Zero(p)) + options.tol);
        CHECK(s.objective == objective(problem, s.x_hat));
        if (s.converged) {
            ++converged;
            CHECK(fixed_point_residual(problem, s) <= options.tol);
        }
    }
    CHECK(converged >= 50);
}

TEST_CASE("u_star reproduces x_hat through one proximal-gradient step") {
    std::mt19937_64 rng(35);
    const auto problem = random_problem(rng, 20, 8, 1.0, 0.5, 0.05);
    const auto s = fista_solve(problem);
    CHECK(prox_grad_step(problem, s.u_star, s.alpha_star) == s.x_hat);
}

TEST_CASE("lambda = 0 with full column rank recovers least squares") {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 10; ++t) {
        // Identity-padded design: [I; B], n >= p.
        Matrix A(9, 5);
        A.topRows(5) = Matrix::Identity(5, 5);
        A.bottomRows(4) = test::gaussian_matrix(4, 5, rng);
        const Vector y = test::gaussian_vector(9, rng);
        const auto s = fista_solve({A, y, 0.0, oscar_weights({1, 0.1, 5})});
        const Vector grad = A.transpose() * (A * s.x_hat - y);
        CHECK(grad.lpNorm<Eigen::Infinity>() <= 1e-5 * (A.transpose() * y).lpNorm<Eigen::Infinity>());
        const Vector ls = A.colPivHouseholderQr().solve(y);
        CHECK((s.x_hat - ls).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
}

TEST_CASE("identical columns cluster to within the APO weight resolution") {
    // The stable tie-break hands tied entries adjacent weights, so identical
    // columns cannot become exactly equal: members settle lambda*lambda2/alpha
    // apart per rank. The grouping is otherwise complete (same sign, same
    // magnitude up to that resolution, ungrouped nulls at zero).
    std::mt19937_64 rng(37);
    for (int t = 0; t < 10; ++t) {
        const Matrix B = test::gaussian_matrix(30, 6, rng);
        Matrix A(30, 9);
        A.col(0) = A.col(1) = A.col(2) = B.col(0);
        A.col(3) = A.col(4) = B.col(1);
        for (int j = 0; j < 4; ++j) A.col(5 + j) = B.col(2 + j);
        Vector x(9);
        x << 1, 1, 1, -2, -2, 0, 0.5, 0, 0;
        const Vector y = A * x + test::gaussian_vector(30, rng, 0.05);
        const double lambda = 1.0, lambda2 = 0.1;
        const auto s = fista_solve({A, y, lambda, oscar_weights({1.0, lambda2, 9})});
        const double step = lambda * lambda2 / s.alpha_star;

        const auto spread = [&](int first, int count) {
            const Vector g = s.x_hat.segment(first, count);
            return g.maxCoeff() - g.minCoeff();
        };
        CHECK(spread(0, 3) <= 2 * step * (1 + 1e-3) + 1e-6);
        CHECK(spread(3, 2) <= 1 * step * (1 + 1e-3) + 1e-6);
        CHECK(s.x_hat.segment(0, 3).minCoeff() > 0.9);
        CHECK(s.x_hat.segment(3, 2).maxCoeff() < -1.9);
        CHECK(s.x_hat(5) == 0.0);
        CHECK(s.x_hat(7) == 0.0);
    }
}

TEST_CASE("solves are deterministic") {
    std::mt19937_64 rng(38);
    const auto problem = random_problem(rng, 15, 10, 1.0, 1.0, 0.05);
    const auto a = fista_solve(problem);
    const auto b = fista_solve(problem);
    CHECK(a.x_hat == b.x_hat);
    CHECK(a.u_star == b.u_star);
    CHECK(a.iterations == b.iterations);
}
