#include "owladv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "owladv/kernels.hpp"

namespace owladv {

void RegressionProblem::validate() const {
    if (A.rows() != y.size()) {
        throw std::invalid_argument("RegressionProblem: rows(A) != len(y)");
    }
    if (static_cast<std::size_t>(A.cols()) != weights.size()) {
        throw std::invalid_argument("RegressionProblem: cols(A) != len(weights)");
    }
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("RegressionProblem: lambda must be nonnegative");
    }
}

double objective(const RegressionProblem& problem, const Vector& x) {
    problem.validate();
    if (x.size() != problem.A.cols()) {
        throw std::invalid_argument("objective: len(x) != cols(A)");
    }
    const Vector r = problem.y - kernels::matvec(problem.A, x);
    return r.squaredNorm() + problem.lambda * owl_norm(x, problem.weights);
}

double lipschitz_alpha(const Matrix& A) {
    if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) {
        throw std::invalid_argument("lipschitz_alpha: zero matrix");
    }
    constexpr double kRelTol = 1e-6;
    constexpr int kMaxIters = 10000;

    // Deterministic, non-symmetric start so it is unlikely to be orthogonal
    // to the dominant singular vector.
    Vector v(A.cols());
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = 1.0 + 0.5 * std::sin(1.0 + j);
    v.normalize();

    double estimate = 0.0;
    for (int it = 0; it < kMaxIters; ++it) {
        Vector w = kernels::matvec_t(A, kernels::matvec(A, v));
        const double next = w.norm();
        if (next == 0.0) {
            // Landed in the null space; restart along the largest column.
            Eigen::Index col = 0;
            A.colwise().norm().maxCoeff(&col);
            v.setZero();
            v(col) = 1.0;
            continue;
        }
        v = w / next;
        const bool done = std::abs(next - estimate) <= kRelTol * next;
        estimate = next;
        if (done) break;
    }
    return 1.01 * estimate;
}

Vector prox_grad_step(const RegressionProblem& problem, const Vector& u, double alpha) {
    const Vector residual = kernels::matvec(problem.A, u) - problem.y;
    const Vector z = u - kernels::matvec_t(problem.A, residual) / alpha;
    return prox_oscar_apo(z, problem.weights, problem.lambda / alpha);
}

FistaSolution fista_solve(const RegressionProblem& problem, const FistaOptions& options) {
    problem.validate();
    if (options.max_iters < 1) throw std::invalid_argument("fista_solve: max_iters must be >= 1");
    if (!(options.tol > 0.0)) throw std::invalid_argument("fista_solve: tol must be positive");

    const auto p = problem.A.cols();
    FistaSolution sol;
    sol.alpha_star = lipschitz_alpha(problem.A);
    const double alpha = sol.alpha_star;

    Vector x_prev = Vector::Zero(p);
    Vector u = Vector::Zero(p);
    Vector x(p);
    double t = 1.0;

    for (std::size_t k = 1; k <= options.max_iters; ++k) {
        x = prox_grad_step(problem, u, alpha);
        sol.iterations = k;
        const double change = (x - x_prev).norm() / std::max(1.0, x.norm());
        // Momentum can stall the iterates away from the solution, so a small
        // change is confirmed by the residual of a plain step from x.
        if (change <= options.tol &&
            (prox_grad_step(problem, x, alpha) - x).lpNorm<Eigen::Infinity>() <= options.tol) {
            sol.converged = true;
            break;
        }
        if (k == options.max_iters) break;
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        u = x + beta * (x - x_prev);
        x_prev = x;
        t = t_next;
    }

    sol.x_hat = x;
    sol.u_star = u;
    sol.objective = objective(problem, x);
    return sol;
}

}  // namespace owladv
