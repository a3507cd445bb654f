#include "owladv/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "owladv/kernels.hpp"
#include "owladv/metrics.hpp"

namespace owladv {

AttackContext::AttackContext(Matrix A, Vector x_star, Vector x_bar_star, OwlWeights weights,
                             double lambda, Vector u_star, double alpha_star)
    : A_(std::move(A)),
      x_star_(std::move(x_star)),
      x_bar_star_(std::move(x_bar_star)),
      weights_(std::move(weights)),
      lambda_(lambda),
      u_star_(std::move(u_star)),
      alpha_star_(alpha_star) {
    const auto p = A_.cols();
    if (x_star_.size() != p || x_bar_star_.size() != p || u_star_.size() != p ||
        static_cast<Eigen::Index>(weights_.size()) != p) {
        throw std::invalid_argument("AttackContext: inconsistent dimensions");
    }
    if (A_.rows() == 0) throw std::invalid_argument("AttackContext: empty design");
    if (!(alpha_star_ > 0.0)) throw std::invalid_argument("AttackContext: alpha* must be positive");
    if (!(lambda_ >= 0.0)) throw std::invalid_argument("AttackContext: lambda must be nonnegative");
    const Vector residual = kernels::matvec(A_, Vector(u_star_ - x_star_));
    b0_ = u_star_ - kernels::matvec_t(A_, residual) / alpha_star_;
}

AttackContext AttackContext::from_solution(const RegressionProblem& problem,
                                           const GroundTruth& truth,
                                           const FistaSolution& solution) {
    return AttackContext(problem.A, truth.x_star, truth.x_bar_star, problem.weights,
                         problem.lambda, solution.u_star, solution.alpha_star);
}

void AttackConfig::validate() const {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("AttackConfig: epsilon must be >= 0");
    if (!(gamma0 > 0.0)) throw std::invalid_argument("AttackConfig: gamma0 must be > 0");
    if (!(eta > 0.0)) throw std::invalid_argument("AttackConfig: eta must be > 0");
    if (!(escalation_factor > 1.0)) {
        throw std::invalid_argument("AttackConfig: escalation_factor must be > 1");
    }
    if (max_iters < 1) throw std::invalid_argument("AttackConfig: max_iters must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("AttackConfig: tol must be > 0");
}

namespace {

void check_noise(const AttackContext& ctx, const Vector& nu) {
    if (static_cast<std::size_t>(nu.size()) != ctx.n()) {
        throw std::invalid_argument("attack: len(nu) != rows(A)");
    }
}

}  // namespace

Vector b_of_nu(const AttackContext& ctx, const Vector& nu) {
    check_noise(ctx, nu);
    return ctx.b_at_zero() + kernels::matvec_t(ctx.A(), nu) / ctx.alpha_star();
}

Vector x_hat_of_nu(const AttackContext& ctx, const Vector& nu) {
    return prox_oscar_apo(b_of_nu(ctx, nu), ctx.weights(), ctx.weight_scale());
}

double attack_loss(const AttackContext& ctx, const Vector& nu) {
    return -deviation(x_hat_of_nu(ctx, nu), ctx.x_bar_star());
}

Vector attack_gradient(const AttackContext& ctx, const Vector& nu) {
    const Vector b = b_of_nu(ctx, nu);
    const Vector wt =
        rank_matched_weights(abs_descending_permutation(b), ctx.weights(), ctx.weight_scale());
    Vector df_db = Vector::Zero(b.size());
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        if (std::abs(b(j)) > wt(j)) {
            df_db(j) = -2.0 * (b(j) - sign_of(b(j)) * wt(j) - ctx.x_bar_star()(j));
        }
    }
    return kernels::matvec(ctx.A(), df_db) / ctx.alpha_star();
}

Vector init_noise(std::size_t n, double epsilon, Rng& rng) {
    if (n == 0) throw std::invalid_argument("init_noise: n must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector g(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
    const double mass = g.lpNorm<1>();
    if (epsilon == 0.0 || mass == 0.0) return Vector::Zero(g.size());
    return (epsilon / mass) * g;
}

IstaRun ista_run(const AttackContext& ctx, const AttackConfig& config, double gamma, Vector nu) {
    config.validate();
    check_noise(ctx, nu);
    if (!(gamma > 0.0)) throw std::invalid_argument("ista_run: gamma must be positive");
    const double n = static_cast<double>(ctx.n());
    const double threshold = gamma / n;
    const double move = config.eta * n * config.epsilon;
    const std::size_t trace_every = std::max<std::size_t>(1, config.max_iters / 100);

    IstaRun out;
    for (std::size_t k = 1; k <= config.max_iters; ++k) {
        const Vector grad = attack_gradient(ctx, nu);
        const double peak = grad.cwiseAbs().maxCoeff();
        Vector next = peak > 0.0 ? soft_threshold(nu - (move / peak) * grad, threshold)
                                 : soft_threshold(nu, threshold);
        const double change = (next - nu).norm() / std::max(1.0, nu.norm());
        nu = std::move(next);
        out.iterations = k;
        const bool done = change <= config.tol;
        if (done || k == 1 || k % trace_every == 0) {
            out.trace.push_back({k, attack_loss(ctx, nu) + threshold * nu.lpNorm<1>()});
        }
        if (done) break;
    }
    out.nu = std::move(nu);
    return out;
}

namespace {

struct Attempt {
    IstaRun run;
    double gamma = 0.0;
    std::size_t escalations = 0;
    BudgetCheck budget;
};

}  // namespace

AttackResult ista_attack(const AttackContext& ctx, const AttackConfig& config) {
    config.validate();
    auto attempt = [&](double gamma, std::size_t esc) {
        Rng rng(config.seed + esc);
        Attempt a;
        a.run = ista_run(ctx, config, gamma, init_noise(ctx.n(), config.epsilon, rng));
        a.gamma = gamma;
        a.escalations = esc;
        a.budget = l1_budget_check(a.run.nu, config.epsilon);
        return a;
    };

    double gamma = config.gamma0;
    Attempt best = attempt(gamma, 0);
    std::size_t esc = 0;
    while (!best.budget.within && esc < config.max_escalations) {
        ++esc;
        gamma *= config.escalation_factor;
        best = attempt(gamma, esc);
    }

    if (best.budget.within && esc > 0) {
        double lo = gamma / config.escalation_factor;
        double hi = gamma;
        for (std::size_t s = 0; s < config.refine_steps; ++s) {
            const double mid = std::sqrt(lo * hi);
            Attempt trial = attempt(mid, esc);
            if (trial.budget.within) {
                hi = mid;
                best = std::move(trial);
            } else {
                lo = mid;
            }
        }
    }

    AttackResult result;
    result.nu_star = std::move(best.run.nu);
    result.iterations = best.run.iterations;
    result.trace = std::move(best.run.trace);
    result.l1_over_n = best.budget.ratio;
    result.feasible = best.budget.within;
    result.gamma_final = best.gamma;
    result.escalations = best.escalations;
    result.x_hat_attacked = x_hat_of_nu(ctx, result.nu_star);
    result.deviation = deviation(result.x_hat_attacked, ctx.x_bar_star());
    return result;
}

}  // namespace owladv
