// system_model.hpp -- dynamical systems, cost specifications, and evaluation
// plans consumed by every other module. All types are immutable value types;
// the validate_* factories are the checked construction path.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tempres/errors.hpp"

namespace tempres {

enum class HorizonMode {
    FiniteUndiscounted,   // gamma = 1, estimation grid covers the full episode
    FiniteDiscounted,     // gamma in (0,1), finite system horizon T
    InfiniteDiscounted,   // gamma in (0,1), estimation horizon T truncates V_inf
};

const char* to_string(HorizonMode mode);
HorizonMode horizon_mode_from_string(const std::string& name);

// Scalar Langevin system dx = a x dt + sigma dw with running cost q x^2.
struct ScalarSystem {
    double a = -1.0;      // drift, 1/time
    double sigma = 1.0;   // diffusion scale, state/sqrt(time)
    double q = 1.0;       // cost weight
};

// Vector Langevin system dX = A X dt + sigma dW with running cost X^T Q X.
struct VectorSystem {
    Eigen::MatrixXd A;
    double sigma = 1.0;
    Eigen::MatrixXd Q;

    Eigen::Index dim() const { return A.rows(); }
};

// Discretization plan: N = T/h samples per trajectory, M = floor(B/N)
// episodes. The budget remainder B - M*N is discarded (whole episodes only).
struct EvalPlan {
    double h = 1.0;
    std::int64_t budget = 1;
    double T = 1.0;
    double gamma = 1.0;
    HorizonMode mode = HorizonMode::FiniteUndiscounted;
    std::int64_t samples_per_trajectory = 1;  // N
    std::int64_t trajectories = 1;            // M

    bool discounted() const { return gamma < 1.0; }
};

ScalarSystem validate_scalar(double a, double sigma, double q, HorizonMode mode);

VectorSystem validate_vector(const Eigen::MatrixXd& A, double sigma,
                             const Eigen::MatrixXd& Q, HorizonMode mode);

EvalPlan build_plan(double h, std::int64_t budget, double T, double gamma,
                    HorizonMode mode);

// Step sizes {T/m : m = 1..m_max}; every element yields an integral grid and
// at least one whole trajectory under budget B.
std::vector<double> admissible_grid(double T, std::int64_t budget,
                                    std::int64_t m_max);

} // namespace tempres
