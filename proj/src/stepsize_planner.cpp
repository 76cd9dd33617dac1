#include "tempres/stepsize_planner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <set>

#include "tempres/ground_truth.hpp"
#include "tempres/monte_carlo.hpp"
#include "tempres/mse_closed_form.hpp"
#include "tempres/mse_exact_oracle.hpp"
#include "tempres/numeric_utils.hpp"

namespace tempres {

const char* to_string(StepSizeMethod m) {
    switch (m) {
        case StepSizeMethod::MarginalClosed: return "marginal-closed";
        case StepSizeMethod::LeadingOrder: return "leading-order";
        case StepSizeMethod::CubicRefined: return "cubic-refined";
        case StepSizeMethod::PolyRoot: return "poly-root";
        case StepSizeMethod::GridArgmin: return "grid-argmin";
        case StepSizeMethod::InfiniteLeading: return "infinite-leading";
        case StepSizeMethod::Extrapolated: return "extrapolated";
    }
    return "?";
}

double BudgetScalingFit::predict(double budget) const {
    return coefficient * std::pow(budget, exponent);
}

namespace {

// Normalized brackets of the App-B.3 expansion, finite through a = 0:
//   bracket1(x) = 1 + 4x + e^{2x}(8x+4) - 5e^{4x}    = x^2 delta(x)
//   bracket2(x) = 4x - e^{4x} + e^{2x}(8x-4) + 5     = -x^4 beta(x)
// with x = aT. Series branches take over where the direct forms cancel out.
double delta_of(double x) {
    if (std::abs(x) < 0.01) {
        return -16.0 + x * (-32.0 + x * (-40.0 - x * 544.0 / 15.0));
    }
    const double val = 1.0 + 4.0 * x + std::exp(2.0 * x) * (8.0 * x + 4.0) -
                       5.0 * std::exp(4.0 * x);
    return val / (x * x);
}

double beta_of(double x) {
    if (std::abs(x) < 0.01) {
        return 8.0 / 3.0 +
               x * (64.0 / 15.0 +
                    x * (176.0 / 45.0 + x * (832.0 / 315.0 + x * 152.0 / 105.0)));
    }
    const double val = 4.0 * x - std::exp(4.0 * x) +
                       std::exp(2.0 * x) * (8.0 * x - 4.0) + 5.0;
    return -val / (x * x * x * x);
}

double predicted_mse_finite(double a, double sigma, double T, double h,
                            double B) {
    if (a == 0.0) return mse_marginal(sigma, T, h, B);
    return mse_finite_undiscounted(a, sigma, T, h, B);
}

} // namespace

StepSizeRecommendation hstar_marginal(double T, double B, double sigma) {
    if (!(B >= 1.0)) throw InvalidArgument("B must be >= 1");
    StepSizeRecommendation rec;
    rec.method = StepSizeMethod::MarginalClosed;
    rec.h_star = T * std::cbrt(2.0 / (3.0 * B));
    rec.episodes = B * rec.h_star / T;
    rec.predicted_mse = mse_marginal(sigma, T, rec.h_star, B);
    return rec;
}

double optimal_episodes(double T, double B) {
    (void)T;  // cancels in M* = B h*/T
    if (!(B >= 1.0)) throw InvalidArgument("B must be >= 1");
    return std::cbrt(2.0 / 3.0) * std::pow(B, 2.0 / 3.0);
}

StepSizeRecommendation hstar_leading(double a, double sigma, double T,
                                     double B) {
    if (!(a < 0.0)) throw UnstableSystem("hstar_leading requires a < 0");
    const double x = a * T;
    const double p = phi1(2.0 * x);
    const double ratio = T * T * T * beta_of(x) / (4.0 * p * p);
    StepSizeRecommendation rec;
    rec.method = StepSizeMethod::LeadingOrder;
    rec.h_star = std::cbrt(ratio) * std::pow(B, -1.0 / 3.0);
    rec.episodes = B * rec.h_star / T;
    rec.predicted_mse = predicted_mse_finite(a, sigma, T, rec.h_star, B);
    return rec;
}

StepSizeRecommendation hstar_refined(double a, double sigma, double T,
                                     double B) {
    if (!(a < 0.0)) throw UnstableSystem("hstar_refined requires a < 0");
    const double x = a * T;
    const double delta = delta_of(x);
    const double beta = beta_of(x);
    const double p2 = phi1(2.0 * x);
    const double p4 = phi1(4.0 * x);
    // D1 = T x^2 delta, D2 = -T x^4 beta, D3 = x^2 delta3 with
    // delta3 = 12 B phi1(2x)^2 - 16 phi1(4x); all x-powers cancel below.
    const double delta3 = 12.0 * B * p2 * p2 - 16.0 * p4;
    const double T3 = T * T * T;
    const double T6 = T3 * T3;
    const double lin = T * delta / (3.0 * delta3);
    const double base = T3 * delta * delta * delta /
                            (27.0 * delta3 * delta3 * delta3) +
                        1.5 * T3 * beta / delta3;
    const double S = 2.25 * T6 * beta * beta / (delta3 * delta3) +
                     T6 * delta * delta * delta * beta /
                         (9.0 * delta3 * delta3 * delta3 * delta3);
    StepSizeRecommendation rec;
    rec.method = StepSizeMethod::CubicRefined;
    if (!(S >= 0.0) || !(delta3 > 0.0)) {
        rec = hstar_leading(a, sigma, T, B);
        rec.method = StepSizeMethod::CubicRefined;
        rec.fallback = true;
        return rec;
    }
    const double root = std::sqrt(S);
    rec.h_star = lin + std::cbrt(base - root) + std::cbrt(base + root);
    if (!(rec.h_star > 0.0) || !(rec.h_star <= T)) {
        rec = hstar_leading(a, sigma, T, B);
        rec.method = StepSizeMethod::CubicRefined;
        rec.fallback = true;
        return rec;
    }
    rec.episodes = B * rec.h_star / T;
    rec.predicted_mse = predicted_mse_finite(a, sigma, T, rec.h_star, B);
    return rec;
}

StepSizeRecommendation hstar_poly_root(double a, double sigma, double T,
                                       double B) {
    if (!(a < 0.0)) throw UnstableSystem("hstar_poly_root requires a < 0");
    // d/dh [E1 + E2/B] by complex step: Im f(h + i eps)/eps is exact to
    // machine precision for analytic f.
    const double eps = 1e-100;
    auto dmse = [&](double h) {
        const std::complex<double> hc(h, eps);
        const std::complex<double> ac(a, 0.0);
        const std::complex<double> v =
            detail::thm_e1<std::complex<double>>(ac, sigma, T, hc) +
            detail::thm_e2<std::complex<double>>(ac, sigma, T, hc) / B;
        return v.imag() / eps;
    };
    double lo = 1e-9;
    double hi = std::min(1.0, T);
    double flo = dmse(lo);
    double fhi = dmse(hi);
    if (!(flo < 0.0) || !(fhi > 0.0)) {
        throw NoRootInInterval("d(MSE)/dh has no sign change on (1e-9, " +
                               std::to_string(hi) + ")");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = dmse(mid);
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        (fm < 0.0 ? lo : hi) = mid;
    }
    StepSizeRecommendation rec;
    rec.method = StepSizeMethod::PolyRoot;
    rec.h_star = 0.5 * (lo + hi);
    rec.episodes = B * rec.h_star / T;
    rec.predicted_mse = predicted_mse_finite(a, sigma, T, rec.h_star, B);
    return rec;
}

StepSizeRecommendation hstar_infinite(double a, double gamma, double T,
                                      double B) {
    const double C = discount_constant(a, gamma);  // checks denominators
    StepSizeRecommendation rec;
    rec.method = StepSizeMethod::InfiniteLeading;
    const double candidate = std::pow(36.0 * T * C / B, 0.2);
    rec.gamma_tail_negligible =
        std::pow(gamma, T) < candidate * candidate * candidate * candidate / 10.0;
    rec.h_star = rec.gamma_tail_negligible ? candidate : std::pow(B, -0.5);
    rec.episodes = B * rec.h_star / T;
    rec.predicted_mse = mse_infinite_discounted(a, 1.0, T, gamma, rec.h_star, B);
    return rec;
}

namespace {

template <class System>
double evaluate_grid_point(const System& sys, const EvalPlan& plan,
                           GridEvaluator evaluator, std::int64_t replicates,
                           std::uint64_t seed, double target) {
    switch (evaluator) {
        case GridEvaluator::ExactOracle:
            return mse_exact(sys, plan).total;
        case GridEvaluator::Empirical:
            return empirical_mse(sys, plan, target, replicates, seed).mean;
        case GridEvaluator::ClosedForm:
            break;
    }
    if constexpr (std::is_same_v<System, ScalarSystem>) {
        const double B = static_cast<double>(plan.budget);
        const double s = sys.sigma;
        const double scaled_q = sys.q * sys.q;
        switch (plan.mode) {
            case HorizonMode::FiniteUndiscounted:
                return scaled_q * (sys.a == 0.0
                                       ? mse_marginal(s, plan.T, plan.h, B)
                                       : mse_finite_undiscounted(
                                             sys.a, s, plan.T, plan.h, B));
            case HorizonMode::FiniteDiscounted:
                return scaled_q * mse_finite_discounted(sys.a, s, plan.T,
                                                        plan.gamma, plan.h, B);
            case HorizonMode::InfiniteDiscounted:
                return scaled_q * mse_infinite_discounted(
                                      sys.a, s, plan.T, plan.gamma, plan.h, B);
        }
    }
    throw InvalidArgument("closed-form grid evaluator is scalar-only");
}

template <class System>
StepSizeRecommendation hstar_grid_impl(const System& sys, double T, double B,
                                       double gamma, HorizonMode mode,
                                       GridEvaluator evaluator,
                                       std::int64_t m_max,
                                       std::int64_t replicates,
                                       std::uint64_t seed) {
    const auto budget = static_cast<std::int64_t>(B);
    if (m_max <= 0) m_max = std::min<std::int64_t>(budget, 1024);
    m_max = std::min(m_max, budget);
    const auto grid = admissible_grid(T, budget, m_max);

    double target = 0.0;
    if (evaluator == GridEvaluator::Empirical) {
        if constexpr (std::is_same_v<System, ScalarSystem>) {
            target = mode == HorizonMode::InfiniteDiscounted
                         ? value_infinite_scalar(sys, gamma).value
                         : value_finite_scalar(sys, T, gamma).value;
        } else {
            target = mode == HorizonMode::InfiniteDiscounted
                         ? value_infinite_vector(sys, gamma).value
                         : value_finite_vector(sys, T, gamma).value;
        }
    }

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const EvalPlan plan = build_plan(grid[i], budget, T, gamma, mode);
        const double val = evaluate_grid_point(sys, plan, evaluator,
                                               replicates, seed, target);
        if (val < best) {  // ties keep the earlier (larger) h
            best = val;
            best_idx = i;
        }
    }
    StepSizeRecommendation rec;
    rec.method = StepSizeMethod::GridArgmin;
    rec.h_star = grid[best_idx];
    rec.predicted_mse = best;
    rec.episodes = static_cast<double>(
        budget / static_cast<std::int64_t>(best_idx + 1));
    rec.bracket_lo = best_idx + 1 < grid.size() ? grid[best_idx + 1] : grid[best_idx];
    rec.bracket_hi = best_idx > 0 ? grid[best_idx - 1] : grid[best_idx];
    return rec;
}

} // namespace

StepSizeRecommendation hstar_grid(const ScalarSystem& sys, double T, double B,
                                  double gamma, HorizonMode mode,
                                  GridEvaluator evaluator, std::int64_t m_max,
                                  std::int64_t replicates, std::uint64_t seed) {
    return hstar_grid_impl(sys, T, B, gamma, mode, evaluator, m_max,
                           replicates, seed);
}

StepSizeRecommendation hstar_grid(const VectorSystem& sys, double T, double B,
                                  double gamma, HorizonMode mode,
                                  GridEvaluator evaluator, std::int64_t m_max,
                                  std::int64_t replicates, std::uint64_t seed) {
    return hstar_grid_impl(sys, T, B, gamma, mode, evaluator, m_max,
                           replicates, seed);
}

BudgetScalingFit extrapolate_budget(
    const std::vector<std::pair<std::int64_t, double>>& pilot,
    HorizonMode mode) {
    if (pilot.size() < 2) {
        throw DegeneratePilot("need at least two pilot points");
    }
    std::set<std::int64_t> distinct;
    for (const auto& [b, h] : pilot) distinct.insert(b);
    if (distinct.size() < 2) {
        throw DegeneratePilot("pilot budgets are identical");
    }
    BudgetScalingFit fit;
    fit.exponent =
        mode == HorizonMode::InfiniteDiscounted ? -1.0 / 5.0 : -1.0 / 3.0;
    KahanSum acc;
    for (const auto& [b, h] : pilot) {
        if (!(h > 0.0) || b < 1) throw DegeneratePilot("invalid pilot point");
        acc.add(std::log(h) - fit.exponent * std::log(static_cast<double>(b)));
        fit.pilot_budgets.push_back(b);
    }
    const double logc = acc.value() / static_cast<double>(pilot.size());
    fit.coefficient = std::exp(logc);
    KahanSum res;
    for (const auto& [b, h] : pilot) {
        const double r = std::log(h) - logc -
                         fit.exponent * std::log(static_cast<double>(b));
        res.add(r * r);
    }
    fit.fit_residual = std::sqrt(res.value() / static_cast<double>(pilot.size()));
    return fit;
}

} // namespace tempres
