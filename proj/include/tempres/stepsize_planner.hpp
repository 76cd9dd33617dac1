// stepsize_planner.hpp -- optimal step-size selection: closed forms from the
// marginal and leading-order expansions, the refined cubic-root expression,
// root-finding on the exact stationarity condition, exhaustive grid search,
// and budget extrapolation from pilot runs.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tempres/system_model.hpp"

namespace tempres {

enum class StepSizeMethod {
    MarginalClosed,
    LeadingOrder,
    CubicRefined,
    PolyRoot,
    GridArgmin,
    InfiniteLeading,
    Extrapolated,
};

const char* to_string(StepSizeMethod m);

struct StepSizeRecommendation {
    double h_star = 0.0;
    StepSizeMethod method = StepSizeMethod::GridArgmin;
    double predicted_mse = 0.0;
    double episodes = 0.0;            // M at h_star (real-valued)
    bool fallback = false;            // refined expression fell back to leading
    bool gamma_tail_negligible = true;  // infinite-horizon regime flag
    double bracket_lo = 0.0;          // neighboring admissible h below h_star
    double bracket_hi = 0.0;          // neighboring admissible h above h_star
};

struct BudgetScalingFit {
    double coefficient = 0.0;   // c_F or c_I
    double exponent = 0.0;      // fixed -1/3 (finite) or -1/5 (infinite)
    std::vector<std::int64_t> pilot_budgets;
    double fit_residual = 0.0;  // rms log-space residual

    double predict(double budget) const;
};

enum class GridEvaluator { ClosedForm, ExactOracle, Empirical };

// h* = T (2/(3B))^{1/3} for the marginally stable system.
StepSizeRecommendation hstar_marginal(double T, double B, double sigma = 1.0);

// M* = (2/3)^{1/3} B^{2/3}.
double optimal_episodes(double T, double B);

// Leading-order balance of approximation and variance (a < 0).
StepSizeRecommendation hstar_leading(double a, double sigma, double T,
                                     double B);

// Three-term cubic-root refinement; falls back to hstar_leading (flagged)
// when the inner square root goes negative at small B.
StepSizeRecommendation hstar_refined(double a, double sigma, double T,
                                     double B);

// Root of d(MSE)/dh = 0 for the exact finite-undiscounted closed form,
// located by bisection on (1e-9, min(1, T)) to 1e-12. The derivative is
// evaluated by complex-step differentiation, so the route is independent of
// any value-based minimizer.
StepSizeRecommendation hstar_poly_root(double a, double sigma, double T,
                                       double B);

// Infinite-horizon fifth-root rule h* = (36 T C(a,gamma)/B)^{1/5} in the
// small-gamma^T regime; h* = B^{-1/2} in the constant-gamma^T regime.
StepSizeRecommendation hstar_infinite(double a, double gamma, double T,
                                      double B);

// Exhaustive argmin over admissible_grid(T, B, m_max); ties break toward
// larger h. m_max = 0 selects min(B, 1024).
StepSizeRecommendation hstar_grid(const ScalarSystem& sys, double T, double B,
                                  double gamma, HorizonMode mode,
                                  GridEvaluator evaluator,
                                  std::int64_t m_max = 0,
                                  std::int64_t replicates = 50,
                                  std::uint64_t seed = 0);
StepSizeRecommendation hstar_grid(const VectorSystem& sys, double T, double B,
                                  double gamma, HorizonMode mode,
                                  GridEvaluator evaluator,
                                  std::int64_t m_max = 0,
                                  std::int64_t replicates = 50,
                                  std::uint64_t seed = 0);

// Least squares for log h* = log c + exponent * log B with the exponent
// pinned to -1/3 (finite modes) or -1/5 (infinite mode).
BudgetScalingFit extrapolate_budget(
    const std::vector<std::pair<std::int64_t, double>>& pilot,
    HorizonMode mode);

} // namespace tempres
