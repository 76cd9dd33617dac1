#include "tempres/mse_exact_oracle.hpp"

#include <cmath>
#include <vector>

#include "tempres/gaussian_process.hpp"
#include "tempres/ground_truth.hpp"
#include "tempres/numeric_utils.hpp"

namespace tempres {

namespace {

std::vector<double> discount_weights(const EvalPlan& plan) {
    const auto N = static_cast<std::size_t>(plan.samples_per_trajectory);
    std::vector<double> g(N, 1.0);
    if (plan.gamma < 1.0) {
        const double step = std::pow(plan.gamma, plan.h);
        for (std::size_t k = 1; k < N; ++k) g[k] = g[k - 1] * step;
    }
    return g;
}

// Second moments at the grid points t_k = k h, k = 0..N-1.
std::vector<double> grid_second_moments(const ScalarSystem& sys,
                                        const EvalPlan& plan) {
    const auto N = static_cast<std::size_t>(plan.samples_per_trajectory);
    std::vector<double> m(N);
    for (std::size_t k = 0; k < N; ++k) {
        m[k] = second_moment(sys, static_cast<double>(k) * plan.h);
    }
    return m;
}

// Sigma(t_k) by the exact one-step recursion Sigma_{k+1} = Phi Sigma_k Phi^T
// + Sigma(h); valid for stable and marginally stable A alike.
std::vector<Eigen::MatrixXd> grid_covariances(const VectorSystem& sys,
                                              const EvalPlan& plan,
                                              const VectorTransition& law) {
    const auto N = static_cast<std::size_t>(plan.samples_per_trajectory);
    std::vector<Eigen::MatrixXd> sig;
    sig.reserve(N);
    sig.push_back(Eigen::MatrixXd::Zero(sys.dim(), sys.dim()));
    for (std::size_t k = 1; k < N; ++k) {
        Eigen::MatrixXd next =
            law.phi * sig.back() * law.phi.transpose() + law.step_cov;
        sig.push_back(0.5 * (next + next.transpose().eval()));
    }
    return sig;
}

MseBreakdown assemble_breakdown(const EvalPlan& plan, double mean,
                                double var_single, double v_finite,
                                double v_tail) {
    const double bias = mean - v_finite;
    const double var_over_m =
        var_single / static_cast<double>(plan.trajectories);
    if (plan.mode == HorizonMode::InfiniteDiscounted) {
        return MseBreakdown::assemble(bias * bias, var_over_m, v_tail * v_tail,
                                      -2.0 * bias * v_tail);
    }
    return MseBreakdown::assemble(bias * bias, var_over_m, 0.0, 0.0);
}

} // namespace

double estimator_mean(const ScalarSystem& sys, const EvalPlan& plan) {
    const auto g = discount_weights(plan);
    const auto m = grid_second_moments(sys, plan);
    KahanSum acc;
    for (std::size_t k = 0; k < m.size(); ++k) acc.add(g[k] * m[k]);
    return plan.h * sys.q * acc.value();
}

double estimator_mean(const VectorSystem& sys, const EvalPlan& plan) {
    const auto g = discount_weights(plan);
    const auto law = transition(sys, plan.h);
    const auto sig = grid_covariances(sys, plan, law);
    KahanSum acc;
    for (std::size_t k = 0; k < sig.size(); ++k) {
        acc.add(g[k] * (sys.Q * sig[k]).trace());
    }
    return plan.h * acc.value();
}

double estimator_variance_single(const ScalarSystem& sys,
                                 const EvalPlan& plan) {
    const auto N = static_cast<std::size_t>(plan.samples_per_trajectory);
    const auto g = discount_weights(plan);
    const auto m = grid_second_moments(sys, plan);
    const double decay = std::exp(sys.a * plan.h);
    // Var = sum_{k,l} h^2 gamma^{t_k + t_l} 2 q^2 cov(t_k, t_l)^2 with
    // cov(t_k, t_l) = e^{a (l-k) h} m_k for k <= l.
    KahanSum acc;
    for (std::size_t k = 0; k < N; ++k) {
        if (m[k] == 0.0) continue;
        // l = k term once, l > k terms twice (symmetry)
        double cov = m[k];
        acc.add(g[k] * g[k] * cov * cov);
        for (std::size_t l = k + 1; l < N; ++l) {
            cov *= decay;
            acc.add(2.0 * g[k] * g[l] * cov * cov);
        }
    }
    return 2.0 * sys.q * sys.q * plan.h * plan.h * acc.value();
}

double estimator_variance_single(const VectorSystem& sys,
                                 const EvalPlan& plan) {
    const auto N = static_cast<std::size_t>(plan.samples_per_trajectory);
    const auto g = discount_weights(plan);
    const auto law = transition(sys, plan.h);
    const auto sig = grid_covariances(sys, plan, law);
    const Eigen::MatrixXd phiT = law.phi.transpose();
    KahanSum acc;
    for (std::size_t k = 0; k < N; ++k) {
        // C(t_k, t_l) = Sigma_k (Phi^T)^{l-k}, advanced one step per l.
        Eigen::MatrixXd C = sig[k];
        const Eigen::MatrixXd QSQ = sys.Q * C * sys.Q;
        acc.add(g[k] * g[k] * QSQ.cwiseProduct(C).sum());
        for (std::size_t l = k + 1; l < N; ++l) {
            C = C * phiT;
            const double tr = (sys.Q * C * sys.Q).cwiseProduct(C).sum();
            acc.add(2.0 * g[k] * g[l] * tr);
        }
    }
    return 2.0 * plan.h * plan.h * acc.value();
}

namespace {

template <class System>
MseBreakdown mse_exact_impl(const System& sys, const EvalPlan& plan,
                            double v_finite, double v_tail) {
    const double mean = estimator_mean(sys, plan);
    const double var = estimator_variance_single(sys, plan);
    return assemble_breakdown(plan, mean, var, v_finite, v_tail);
}

} // namespace

MseBreakdown mse_exact(const ScalarSystem& sys, const EvalPlan& plan) {
    const double v_finite = value_finite_scalar(sys, plan.T, plan.gamma).value;
    double v_tail = 0.0;
    if (plan.mode == HorizonMode::InfiniteDiscounted) {
        v_tail = value_tail_scalar(sys, plan.T, plan.gamma).value;
    }
    return mse_exact_impl(sys, plan, v_finite, v_tail);
}

MseBreakdown mse_exact(const VectorSystem& sys, const EvalPlan& plan) {
    const double v_finite = value_finite_vector(sys, plan.T, plan.gamma).value;
    double v_tail = 0.0;
    if (plan.mode == HorizonMode::InfiniteDiscounted) {
        v_tail = value_infinite_vector(sys, plan.gamma).value - v_finite;
    }
    return mse_exact_impl(sys, plan, v_finite, v_tail);
}

MseBreakdown mse_exact_scaled(const ScalarSystem& sys, const EvalPlan& plan,
                              double q_scale) {
    if (!(q_scale > 0.0)) throw NonPositiveParameter("q_scale must be > 0");
    MseBreakdown b = mse_exact(sys, plan);
    const double f = q_scale * q_scale;
    return MseBreakdown::assemble(f * b.bias_sq, f * b.variance_over_M,
                                  f * b.truncation_sq, f * b.cross_term);
}

MseBreakdown mse_exact_scaled(const VectorSystem& sys, const EvalPlan& plan,
                              double q_scale) {
    if (!(q_scale > 0.0)) throw NonPositiveParameter("q_scale must be > 0");
    MseBreakdown b = mse_exact(sys, plan);
    const double f = q_scale * q_scale;
    return MseBreakdown::assemble(f * b.bias_sq, f * b.variance_over_M,
                                  f * b.truncation_sq, f * b.cross_term);
}

} // namespace tempres
