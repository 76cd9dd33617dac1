#include "tempres/monte_carlo.hpp"

#include <cmath>

#include "tempres/gaussian_process.hpp"
#include "tempres/numeric_utils.hpp"

namespace tempres {

ScalarTrajectory sample_trajectory(const ScalarSystem& sys,
                                   const EvalPlan& plan,
                                   Xoshiro256pp& stream) {
    const auto N = static_cast<std::size_t>(plan.samples_per_trajectory);
    const ScalarTransition law = transition(sys, plan.h);
    const double noise_scale = std::sqrt(law.step_cov);
    ScalarTrajectory traj;
    traj.h = plan.h;
    traj.states.resize(N + 1);
    traj.states[0] = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        traj.states[k + 1] =
            law.phi * traj.states[k] + noise_scale * stream.normal();
    }
    return traj;
}

namespace {

// Factor L with L L^T = step_cov; Cholesky when SPD, eigenvalue square root
// for the semi-definite edge (sigma = 0 path stays exactly zero).
Eigen::MatrixXd noise_factor(const Eigen::MatrixXd& step_cov) {
    if (step_cov.norm() == 0.0) {
        return Eigen::MatrixXd::Zero(step_cov.rows(), step_cov.cols());
    }
    Eigen::LLT<Eigen::MatrixXd> llt(step_cov);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(step_cov);
    return es.eigenvectors() *
           es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

} // namespace

VectorTrajectory sample_trajectory(const VectorSystem& sys,
                                   const EvalPlan& plan,
                                   Xoshiro256pp& stream) {
    const auto N = plan.samples_per_trajectory;
    const auto n = sys.dim();
    const VectorTransition law = transition(sys, plan.h);
    const Eigen::MatrixXd L = noise_factor(law.step_cov);
    VectorTrajectory traj;
    traj.h = plan.h;
    traj.states = Eigen::MatrixXd::Zero(N + 1, n);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z(n);
    for (std::int64_t k = 0; k < N; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) z(i) = stream.normal();
        x = law.phi * x + L * z;
        traj.states.row(k + 1) = x.transpose();
    }
    return traj;
}

double riemann_cost(const ScalarTrajectory& traj, const EvalPlan& plan,
                    double q) {
    const auto N = static_cast<std::size_t>(plan.samples_per_trajectory);
    const double step = plan.gamma < 1.0 ? std::pow(plan.gamma, plan.h) : 1.0;
    double g = 1.0;
    KahanSum acc;
    for (std::size_t k = 0; k < N; ++k) {
        const double x = traj.states[k];
        acc.add(g * x * x);
        g *= step;
    }
    return plan.h * q * acc.value();
}

double riemann_cost(const VectorTrajectory& traj, const EvalPlan& plan,
                    const Eigen::MatrixXd& Q) {
    const auto N = plan.samples_per_trajectory;
    const double step = plan.gamma < 1.0 ? std::pow(plan.gamma, plan.h) : 1.0;
    double g = 1.0;
    KahanSum acc;
    for (std::int64_t k = 0; k < N; ++k) {
        const Eigen::VectorXd x = traj.states.row(k).transpose();
        acc.add(g * x.dot(Q * x));
        g *= step;
    }
    return plan.h * acc.value();
}

namespace {

// Shared per-plan precompute so trajectory loops never refactor covariances.
struct ScalarSampler {
    ScalarTransition law;
    double noise_scale;
    double gamma_step;
    double q;

    ScalarSampler(const ScalarSystem& sys, const EvalPlan& plan)
        : law(transition(sys, plan.h)),
          noise_scale(std::sqrt(law.step_cov)),
          gamma_step(plan.gamma < 1.0 ? std::pow(plan.gamma, plan.h) : 1.0),
          q(sys.q) {}

    double cost(const EvalPlan& plan, Xoshiro256pp& stream) const {
        double x = 0.0;
        double g = 1.0;
        KahanSum acc;
        for (std::int64_t k = 0; k < plan.samples_per_trajectory; ++k) {
            acc.add(g * x * x);  // left endpoint: state at t_k enters first
            g *= gamma_step;
            x = law.phi * x + noise_scale * stream.normal();
        }
        return plan.h * q * acc.value();
    }
};

struct VectorSampler {
    VectorTransition law;
    Eigen::MatrixXd noise;
    double gamma_step;
    const Eigen::MatrixXd& Q;

    VectorSampler(const VectorSystem& sys, const EvalPlan& plan)
        : law(transition(sys, plan.h)),
          noise(noise_factor(law.step_cov)),
          gamma_step(plan.gamma < 1.0 ? std::pow(plan.gamma, plan.h) : 1.0),
          Q(sys.Q) {}

    double cost(const EvalPlan& plan, Xoshiro256pp& stream) const {
        const auto n = Q.rows();
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd z(n);
        double g = 1.0;
        KahanSum acc;
        for (std::int64_t k = 0; k < plan.samples_per_trajectory; ++k) {
            acc.add(g * x.dot(Q * x));
            g *= gamma_step;
            for (Eigen::Index i = 0; i < n; ++i) z(i) = stream.normal();
            x = law.phi * x + noise * z;
        }
        return plan.h * acc.value();
    }
};

template <class Sampler, class System>
double mc_estimate_impl(const System& sys, const EvalPlan& plan,
                        std::uint64_t seed) {
    const Sampler sampler(sys, plan);
    KahanSum acc;
    for (std::int64_t i = 0; i < plan.trajectories; ++i) {
        Xoshiro256pp stream(seed, static_cast<std::uint64_t>(i));
        acc.add(sampler.cost(plan, stream));
    }
    return acc.value() / static_cast<double>(plan.trajectories);
}

template <class System>
EmpiricalMse empirical_mse_impl(const System& sys, const EvalPlan& plan,
                                double target, std::int64_t replicates,
                                std::uint64_t seed) {
    if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
    KahanSum sum, sumsq;
    for (std::int64_t r = 0; r < replicates; ++r) {
        const double est =
            mc_estimate(sys, plan, derive_seed(seed, static_cast<std::uint64_t>(r)));
        const double sq = (est - target) * (est - target);
        sum.add(sq);
        sumsq.add(sq * sq);
    }
    const double n = static_cast<double>(replicates);
    const double mean = sum.value() / n;
    double se = 0.0;
    if (replicates > 1) {
        const double var =
            std::max(0.0, (sumsq.value() - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / n);
    }
    return EmpiricalMse{mean, se, replicates, seed};
}

} // namespace

double mc_estimate(const ScalarSystem& sys, const EvalPlan& plan,
                   std::uint64_t seed) {
    return mc_estimate_impl(sys, plan, seed, sys.q);
}

double mc_estimate(const VectorSystem& sys, const EvalPlan& plan,
                   std::uint64_t seed) {
    return mc_estimate_impl(sys, plan, seed, sys.Q);
}

EmpiricalMse empirical_mse(const ScalarSystem& sys, const EvalPlan& plan,
                           double target, std::int64_t replicates,
                           std::uint64_t seed) {
    return empirical_mse_impl(sys, plan, target, replicates, seed);
}

EmpiricalMse empirical_mse(const VectorSystem& sys, const EvalPlan& plan,
                           double target, std::int64_t replicates,
                           std::uint64_t seed) {
    return empirical_mse_impl(sys, plan, target, replicates, seed);
}

} // namespace tempres
