// mse_exact_oracle.hpp -- exact MSE of the Monte-Carlo estimator for any
// stable scalar or vector system, assembled from Gaussian covariance algebra
// (Isserlis' theorem). This is the independent oracle the analytic formulas
// in mse_closed_form are verified against; it shares no expansion with them.
//
// Cost is O(N^2) in the samples per trajectory (O(N^2 n^2) after an
// O(N n^3) precompute for vector systems); intended for N <= 2000.
// The double sum is accumulated serially with Kahan compensation, so results
// are bitwise reproducible for a fixed partition count (currently one).

#pragma once

#include "tempres/system_model.hpp"

namespace tempres {

struct MseBreakdown {
    double bias_sq = 0.0;
    double variance_over_M = 0.0;
    double truncation_sq = 0.0;   // 0 in finite modes
    double cross_term = 0.0;      // 0 in finite modes
    double total = 0.0;           // sum of the four fields, by construction

    static MseBreakdown assemble(double bias_sq, double variance_over_M,
                                 double truncation_sq, double cross_term) {
        MseBreakdown b{bias_sq, variance_over_M, truncation_sq, cross_term,
                       0.0};
        b.total = b.bias_sq + b.variance_over_M + b.truncation_sq +
                  b.cross_term;
        return b;
    }
};

// E[J_hat(h)] = h sum_k gamma^{t_k} q E[x^2(t_k)] (trace form for vectors).
double estimator_mean(const ScalarSystem& sys, const EvalPlan& plan);
double estimator_mean(const VectorSystem& sys, const EvalPlan& plan);

// Var(J_hat(h)) over one trajectory: the N x N Isserlis double sum.
double estimator_variance_single(const ScalarSystem& sys, const EvalPlan& plan);
double estimator_variance_single(const VectorSystem& sys, const EvalPlan& plan);

MseBreakdown mse_exact(const ScalarSystem& sys, const EvalPlan& plan);
MseBreakdown mse_exact(const VectorSystem& sys, const EvalPlan& plan);

// Quadratic cost scaling: every field is q_scale^2 times the base breakdown.
MseBreakdown mse_exact_scaled(const ScalarSystem& sys, const EvalPlan& plan,
                              double q_scale);
MseBreakdown mse_exact_scaled(const VectorSystem& sys, const EvalPlan& plan,
                              double q_scale);

} // namespace tempres
