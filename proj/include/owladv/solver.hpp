#pragma once

#include <cstddef>

#include "owladv/owl.hpp"

namespace owladv {

/// min_x ||y - A x||_2^2 + lambda * Omega_w(x)
struct RegressionProblem {
    Matrix A;
    Vector y;
    double lambda = 0.0;
    OwlWeights weights;

    /// Throws std::invalid_argument on inconsistent dimensions or lambda < 0.
    void validate() const;
};

struct FistaOptions {
    std::size_t max_iters = 10000;
    double tol = 1e-8;
};

struct FistaSolution {
    Vector x_hat;
    /// Momentum iterate that produced x_hat: x_hat = prox(u_star - A^T(A u_star - y)/alpha_star).
    Vector u_star;
    double alpha_star = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double objective = 0.0;
};

double objective(const RegressionProblem& problem, const Vector& x);

/// 1.01 * ||A||_2^2, with the spectral norm from power iteration on A^T A
/// (relative tolerance 1e-6).
double lipschitz_alpha(const Matrix& A);

/// One proximal-gradient step from u with inverse step alpha.
Vector prox_grad_step(const RegressionProblem& problem, const Vector& u, double alpha);

/// FISTA with the OSCAR approximate proximity operator and constant alpha.
/// Starts from zero; stops when ||x_k - x_{k-1}||_2 / max(1, ||x_k||_2) <= tol
/// and one momentum-free step from x_k moves it by at most tol in l_inf.
FistaSolution fista_solve(const RegressionProblem& problem, const FistaOptions& options = {});

}  // namespace owladv
