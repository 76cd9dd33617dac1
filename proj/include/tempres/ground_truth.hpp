// ground_truth.hpp -- exact expected costs: the finite-horizon value V_T,
// the discounted tail V_{T,inf}, and the infinite-horizon value V_inf.
// These are the targets every MSE is measured against.

#pragma once

#include "tempres/system_model.hpp"

namespace tempres {

enum class ValueMethod { ClosedForm, Lyapunov, Quadrature };

struct ValueResult {
    double value = 0.0;
    ValueMethod method = ValueMethod::ClosedForm;
    double est_abs_error = 0.0;
};

// V_T = q int_0^T gamma^t E[x^2(t)] dt, closed form for all a <= 0.
ValueResult value_finite_scalar(const ScalarSystem& sys, double T,
                                double gamma);

// V_{T,inf} = q int_T^inf gamma^t E[x^2(t)] dt; requires gamma < 1 and
// a + log(gamma) < 0, 2a + log(gamma) < 0.
ValueResult value_tail_scalar(const ScalarSystem& sys, double T, double gamma);

// V_inf = V_T + V_{T,inf}; T-independence of the sum is verified internally.
ValueResult value_infinite_scalar(const ScalarSystem& sys, double gamma);

// V_T = int_0^T gamma^t tr(Q Sigma(t)) dt by panel-doubled Gauss-Legendre.
ValueResult value_finite_vector(const VectorSystem& sys, double T,
                                double gamma);

// V_inf = tr(Q P_gamma)/log(1/gamma) with the shifted Lyapunov Gramian
// (A + (log(gamma)/2) I) P + P (.)^T + sigma^2 I = 0.
ValueResult value_infinite_vector(const VectorSystem& sys, double gamma);

// Throws DivergentTail unless gamma < 1, a + log(gamma) < 0 and
// 2a + log(gamma) < 0.
void require_tail_convergence(double a, double gamma);

} // namespace tempres
