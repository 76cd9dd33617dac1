// monte_carlo.hpp -- exact-discretization trajectory sampling, the Riemann
// cost estimator, the Monte-Carlo value estimator, and empirical MSE
// measurement. Sampling is bias-free by construction: one-step transitions
// use the exact Gaussian law, so only statistical error remains.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tempres/rng.hpp"
#include "tempres/system_model.hpp"

namespace tempres {

struct ScalarTrajectory {
    double h = 0.0;
    std::vector<double> states;  // N+1 values, states[0] = 0

    double time(std::size_t k) const { return static_cast<double>(k) * h; }
};

struct VectorTrajectory {
    double h = 0.0;
    Eigen::MatrixXd states;  // (N+1) x n, row 0 = 0

    double time(Eigen::Index k) const { return static_cast<double>(k) * h; }
};

struct EmpiricalMse {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
};

ScalarTrajectory sample_trajectory(const ScalarSystem& sys,
                                   const EvalPlan& plan, Xoshiro256pp& stream);
VectorTrajectory sample_trajectory(const VectorSystem& sys,
                                   const EvalPlan& plan, Xoshiro256pp& stream);

// Left-endpoint Riemann sum: sum_{k=0}^{N-1} gamma^{t_k} h cost(x_{t_k});
// the final grid point t_N = T is excluded.
double riemann_cost(const ScalarTrajectory& traj, const EvalPlan& plan,
                    double q);
double riemann_cost(const VectorTrajectory& traj, const EvalPlan& plan,
                    const Eigen::MatrixXd& Q);

// Mean of M independent riemann costs; trajectory i draws from the
// substream keyed (seed, i).
double mc_estimate(const ScalarSystem& sys, const EvalPlan& plan,
                   std::uint64_t seed);
double mc_estimate(const VectorSystem& sys, const EvalPlan& plan,
                   std::uint64_t seed);

// Mean and standard error of (mc_estimate - target)^2 over independent
// replicate seeds derived from `seed`.
EmpiricalMse empirical_mse(const ScalarSystem& sys, const EvalPlan& plan,
                           double target, std::int64_t replicates,
                           std::uint64_t seed);
EmpiricalMse empirical_mse(const VectorSystem& sys, const EvalPlan& plan,
                           double target, std::int64_t replicates,
                           std::uint64_t seed);

} // namespace tempres
