// gaussian_process.hpp -- closed-form moments and covariance kernels of the
// Langevin state process X(t) (started at 0), plus the exact one-step
// transition law used for simulation and the dense linear-algebra primitives
// behind it (matrix exponential, Lyapunov solver, controllability Gramian).

#pragma once

#include <Eigen/Dense>

#include "tempres/system_model.hpp"

namespace tempres {

// Exact one-step law x_{k+1} = phi x_k + eta, eta ~ N(0, step_cov).
struct ScalarTransition {
    double phi = 1.0;
    double step_cov = 0.0;
};

struct VectorTransition {
    Eigen::MatrixXd phi;
    Eigen::MatrixXd step_cov;
};

// E[x(t)^2] = sigma^2 (e^{2at} - 1)/(2a); sigma^2 t at a = 0.
double second_moment(const ScalarSystem& sys, double t);

// E[x(t)^4] = 3 sigma^4 (e^{2at} - 1)^2/(4a^2); 3 sigma^4 t^2 at a = 0.
double fourth_moment(const ScalarSystem& sys, double t);

// E[x(s)x(t)] = sigma^2 e^{a(s+t)} (1 - e^{-2a min(s,t)})/(2a).
double cov_pair(const ScalarSystem& sys, double s, double t);

// E[x(s)^2 x(t)^2], symmetric in (s, t).
double cross_moment(const ScalarSystem& sys, double s, double t);

// E[X(s)X(t)^T] for the vector process. Strictly stable A uses the
// stationary-Gramian identity; marginally stable A falls back to adaptive
// quadrature of the defining integral (abs tol 1e-12).
Eigen::MatrixXd cov_matrix(const VectorSystem& sys, double s, double t);

// State covariance Sigma(t) = Cov(X(t)) = sigma^2 int_0^t e^{Av} e^{A^T v} dv.
Eigen::MatrixXd state_covariance(const VectorSystem& sys, double t);

ScalarTransition transition(const ScalarSystem& sys, double h);
VectorTransition transition(const VectorSystem& sys, double h);

// e^{A t} by Pade-13 scaling and squaring.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A, double t = 1.0);

// Solves A P + P A^T + W = 0 for stable A and symmetric W via the
// Kronecker-vectorized dense system. Residual checked to 1e-10 * ||P||.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& W);

// P solving A P + P A^T + sigma^2 I = 0 (requires strictly stable A).
Eigen::MatrixXd stationary_gramian(const VectorSystem& sys);

} // namespace tempres
