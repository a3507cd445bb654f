#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "owladv/owl.hpp"
#include "owladv/solver.hpp"
#include "owladv/synthdata.hpp"

namespace owladv {

/// Everything the attack needs, with u* and alpha* frozen from a converged
/// noiseless solve. Weights are applied with scale lambda / alpha*, exactly
/// as in the solver's last proximal step.
class AttackContext {
public:
    AttackContext(Matrix A, Vector x_star, Vector x_bar_star, OwlWeights weights, double lambda,
                  Vector u_star, double alpha_star);

    /// Convenience: freeze u*, alpha* of a noiseless solve of `problem`.
    static AttackContext from_solution(const RegressionProblem& problem, const GroundTruth& truth,
                                       const FistaSolution& solution);

    const Matrix& A() const noexcept { return A_; }
    const Vector& x_star() const noexcept { return x_star_; }
    const Vector& x_bar_star() const noexcept { return x_bar_star_; }
    const OwlWeights& weights() const noexcept { return weights_; }
    double lambda() const noexcept { return lambda_; }
    const Vector& u_star() const noexcept { return u_star_; }
    double alpha_star() const noexcept { return alpha_star_; }
    double weight_scale() const noexcept { return lambda_ / alpha_star_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(A_.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(A_.cols()); }

    /// b(0) = u* - A^T (A u* - A x*) / alpha*
    const Vector& b_at_zero() const noexcept { return b0_; }

private:
    Matrix A_;
    Vector x_star_;
    Vector x_bar_star_;
    OwlWeights weights_;
    double lambda_;
    Vector u_star_;
    double alpha_star_;
    Vector b0_;
};

struct AttackConfig {
    double epsilon = 0.1;
    double gamma0 = 0.1;
    double eta = 1e-3;
    std::size_t max_iters = 5000;
    double tol = 1e-7;
    double escalation_factor = 2.0;
    std::size_t max_escalations = 20;
    /// Log-scale bisection steps on gamma once escalation has bracketed
    /// the budget. 0 disables refinement.
    std::size_t refine_steps = 6;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TracePoint {
    std::size_t iteration = 0;
    double objective = 0.0;  // f(nu) + gamma/n ||nu||_1
};

struct AttackResult {
    Vector nu_star;
    Vector x_hat_attacked;  // x_hat(nu*) through the frozen one-step surrogate
    double deviation = 0.0;
    double l1_over_n = 0.0;
    bool feasible = false;
    double gamma_final = 0.0;
    std::size_t iterations = 0;     // iterations of the run that produced nu*
    std::size_t escalations = 0;
    std::vector<TracePoint> trace;  // of the run that produced nu*
};

/// b(nu) = u* - A^T (A u* - A x* - nu) / alpha*
Vector b_of_nu(const AttackContext& ctx, const Vector& nu);

/// x_hat(nu) = prox_apo(b(nu)) with the solver's scaled weights.
Vector x_hat_of_nu(const AttackContext& ctx, const Vector& nu);

/// f(nu) = -||x_hat(nu) - x_bar*||_2^2
double attack_loss(const AttackContext& ctx, const Vector& nu);

/// Analytic gradient of attack_loss. The rank-matched weights are taken at
/// the current b and held constant; entries with |b_j| <= w~_j contribute 0.
Vector attack_gradient(const AttackContext& ctx, const Vector& nu);

/// nu0 = epsilon * g / ||g||_1 with g ~ N(0, I_n).
Vector init_noise(std::size_t n, double epsilon, Rng& rng);

struct IstaRun {
    Vector nu;
    std::size_t iterations = 0;
    std::vector<TracePoint> trace;
};

/// One pass of the ISTA loop at fixed gamma, starting from nu0:
///   nu <- S_{gamma/n}(nu - eta_k grad f(nu)),
///   eta_k = eta * n * epsilon / ||grad f(nu)||_inf,
/// i.e. the most sensitive measurement moves by eta * n * epsilon before
/// thresholding. Stops on relative iterate change <= tol or max_iters.
IstaRun ista_run(const AttackContext& ctx, const AttackConfig& config, double gamma, Vector nu0);

/// Lagrangian ISTA with gamma escalation until ||nu*||_1 / n <= epsilon.
/// Each escalation restarts from a fresh nu0 drawn with seed + escalation.
/// Once a feasible gamma is bracketed by an infeasible one, the bracket is
/// bisected (refine_steps) and the feasible result with the smallest gamma
/// is returned. If escalation is exhausted the last infeasible run is
/// returned with feasible = false.
AttackResult ista_attack(const AttackContext& ctx, const AttackConfig& config);

}  // namespace owladv
