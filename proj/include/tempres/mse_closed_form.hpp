// mse_closed_form.hpp -- analytic MSE formulas and expansions for scalar
// Langevin systems, and least-squares leading-order coefficients for vector
// systems. Every function here is a closed-form path that mse_exact_oracle
// independently cross-checks.

#pragma once

#include <cstdint>
#include <vector>

#include "tempres/system_model.hpp"

namespace tempres {

// Leading-order approximation c1 h^2 + c2/(hB) with explicit two-sided
// bounds. `upper` already includes the polynomial slack term.
struct ApproxMse {
    double approx = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double slack = 0.0;
};

struct LeadingCoefficients {
    double c_h2 = 0.0;       // coefficient of h^2
    double c_hB = 0.0;       // coefficient of 1/(hB)
    double fit_residual = 0.0;  // relative l2 residual on the fitting grid
};

// Finite-horizon, undiscounted MSE: E1(h,T,a) + E2(h,T,a)/B.
// |aT| below 5e-4 switches to the a->0 series continuation of both terms.
double mse_finite_undiscounted(double a, double sigma, double T, double h,
                               double B);

// Marginally stable (a = 0) MSE, exact:
// sigma^4 T^2 h^2/4 + sigma^4 T^5/(3hB) + sigma^4 T^2(-2T^2+2hT-h^2)/(3B).
double mse_marginal(double sigma, double T, double h, double B);

// Leading-order approximation with two-sided bounds (a < 0).
ApproxMse mse_approx_and_bounds(double a, double sigma, double T, double h,
                                double B);

// Finite-horizon discounted truncated expansion (a < 0, gamma in (0,1)).
// Omits O(h^5) and the gamma^T-weighted variance corrections whose constant
// is unspecified; the documented error budget is checked against the oracle.
double mse_finite_discounted(double a, double sigma, double T, double gamma,
                             double h, double B);

// Infinite-horizon discounted MSE: sigma^4 T C(a,gamma)/(hB) + sigma^4 h^4/144
// when gamma^T is negligible against h^4; otherwise the truncation and cross
// terms are added from the ground-truth tail.
double mse_infinite_discounted(double a, double sigma, double T, double gamma,
                               double h, double B);

// Regime flag: gamma^T < h^4/10 means the tail terms are negligible.
bool gamma_tail_negligible(double gamma, double T, double h);

// 1/(log(g) (a + log(g)) (2a + log(g))^2); the variance constant of the
// infinite-horizon expansion.
double discount_constant(double a, double gamma);

// The proof's geometric-sum closed form of E[J_hat(h)] for scalar systems
// (discounted or not); dual route to the oracle's grid sum.
double estimator_mean_geometric(const ScalarSystem& sys, double T,
                                double gamma, double h);

// Least-squares fit of the exact oracle MSE against {h^2, 1/(hB)} over the
// product grid budgets x h_grid (finite-undiscounted mode).
LeadingCoefficients fit_leading_coefficients(const VectorSystem& sys, double T,
                                             const std::vector<std::int64_t>& budgets,
                                             const std::vector<double>& h_grid);

namespace detail {
// E1/E2 of the finite-horizon undiscounted MSE, templated so the step-size
// planner can differentiate them with a complex step. Direct formulas; the
// small-|a| series continuation lives in mse_finite_undiscounted only.
template <class Scalar>
Scalar thm_e1(Scalar a, double sigma, double T, Scalar h);
template <class Scalar>
Scalar thm_e2(Scalar a, double sigma, double T, Scalar h);
} // namespace detail

} // namespace tempres
