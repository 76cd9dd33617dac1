#include "tempres/mse_closed_form.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "tempres/ground_truth.hpp"
#include "tempres/mse_exact_oracle.hpp"
#include "tempres/numeric_utils.hpp"

namespace tempres {

namespace detail {

template <class Scalar>
Scalar thm_e1(Scalar a, double sigma, double T, Scalar h) {
    // sigma^4 h^2 T^2 (phi2(2ah) phi1(2aT)/phi1(2ah))^2
    const Scalar zh = 2.0 * a * h;
    const Scalar zT = 2.0 * a * T;
    const Scalar r = phi2(zh) * phi1(zT) / phi1(zh);
    const double s4 = sigma * sigma * sigma * sigma;
    return s4 * h * h * (T * T) * r * r;
}

template <class Scalar>
Scalar thm_e2(Scalar a, double sigma, double T, Scalar h) {
    // sigma^4 T [h (e^{2aT}-1)(4 e^{2ah} + e^{2aT} + 1)
    //            - (e^{2ah}-1)(e^{2ah} + 4 e^{2aT} + 1) T]
    //          / (2 a^2 (e^{2ah}-1)^2)
    using std::exp;
    const Scalar zh = 2.0 * a * h;
    const Scalar zT = 2.0 * a * T;
    const Scalar em_h = zh * phi1(zh);  // e^{2ah} - 1 without cancellation
    const Scalar em_T = zT * phi1(zT);
    const Scalar eh = em_h + 1.0;
    const Scalar eT = em_T + 1.0;
    const Scalar num =
        h * em_T * (4.0 * eh + eT + 1.0) - em_h * (eh + 4.0 * eT + 1.0) * T;
    const double s4 = sigma * sigma * sigma * sigma;
    return s4 * T * num / (2.0 * a * a * em_h * em_h);
}

template double thm_e1<double>(double, double, double, double);
template double thm_e2<double>(double, double, double, double);
template long double thm_e1<long double>(long double, double, double,
                                         long double);
template long double thm_e2<long double>(long double, double, double,
                                         long double);
template std::complex<double> thm_e1<std::complex<double>>(
    std::complex<double>, double, double, std::complex<double>);
template std::complex<double> thm_e2<std::complex<double>>(
    std::complex<double>, double, double, std::complex<double>);

namespace {

// a->0 series of E1 (through a^2), from the Taylor expansion of thm_e1.
double e1_series(double a, double sigma, double T, double h) {
    const double s4 = sigma * sigma * sigma * sigma;
    const double t2 = T * T, t3 = t2 * T, t4 = t3 * T;
    const double h2 = h * h, h3 = h2 * h, h4 = h3 * h;
    const double c0 = t2 * h2 / 4.0;
    const double c1 = t3 * h2 / 2.0 - t2 * h3 / 6.0;
    const double c2 = 7.0 * t4 * h2 / 12.0 - t3 * h3 / 3.0 + t2 * h4 / 36.0;
    return s4 * (c0 + a * (c1 + a * c2));
}

// a->0 series of E2 (through a^2).
double e2_series(double a, double sigma, double T, double h) {
    const double s4 = sigma * sigma * sigma * sigma;
    const double t2 = T * T, t3 = t2 * T, t4 = t3 * T, t5 = t4 * T,
                 t6 = t5 * T, t7 = t6 * T;
    const double h2 = h * h, h3 = h2 * h, h4 = h3 * h;
    const double c0 = t5 / (3.0 * h) - 2.0 * t4 / 3.0 + 2.0 * t3 * h / 3.0 -
                      t2 * h2 / 3.0;
    const double c1 = 8.0 * t6 / (15.0 * h) - 4.0 * t5 / 3.0 +
                      4.0 * t4 * h / 3.0 - 2.0 * t3 * h2 / 3.0 +
                      2.0 * t2 * h3 / 15.0;
    const double c2 = 22.0 * t7 / (45.0 * h) - 22.0 * t6 / 15.0 +
                      5.0 * t5 * h / 3.0 - 8.0 * t4 * h2 / 9.0 +
                      8.0 * t3 * h3 / 45.0 + t2 * h4 / 45.0;
    return s4 * (c0 + a * (c1 + a * c2));
}

// beta(x) = -(4x - e^{4x} + e^{2x}(8x - 4) + 5)/x^4, the normalized variance
// bracket; series branch keeps it finite through x = 0 where the direct
// expression loses all digits.
double variance_bracket_beta(double x) {
    if (std::abs(x) < 0.01) {
        return 8.0 / 3.0 + x * (64.0 / 15.0 +
               x * (176.0 / 45.0 + x * (832.0 / 315.0 + x * 152.0 / 105.0)));
    }
    const double val = 4.0 * x - std::exp(4.0 * x) +
                       std::exp(2.0 * x) * (8.0 * x - 4.0) + 5.0;
    return -val / (x * x * x * x);
}

} // namespace

} // namespace detail

double mse_marginal(double sigma, double T, double h, double B) {
    if (!(h > 0.0) || !(T > 0.0)) throw InvalidArgument("h, T must be > 0");
    if (!(B >= T / h)) throw BudgetTooSmall("B below one trajectory");
    const double s4 = sigma * sigma * sigma * sigma;
    return s4 * T * T * h * h / 4.0 + s4 * T * T * T * T * T / (3.0 * h * B) +
           s4 * T * T * (-2.0 * T * T + 2.0 * h * T - h * h) / (3.0 * B);
}

double mse_finite_undiscounted(double a, double sigma, double T, double h,
                               double B) {
    if (!(h > 0.0) || !(T > 0.0)) throw InvalidArgument("h, T must be > 0");
    if (a > 0.0) throw UnstableSystem("a must be <= 0");
    if (!(B >= T / h)) throw BudgetTooSmall("B below one trajectory");
    const double scale = std::max(T, h);
    if (std::abs(a) * scale < 5e-4) {
        // series continuation through the removable singularity at a = 0
        return detail::e1_series(a, sigma, T, h) +
               detail::e2_series(a, sigma, T, h) / B;
    }
    const double e1 = detail::thm_e1<double>(a, sigma, T, h);
    // E2 in extended precision: its bracket loses ~|2aT|^{-3} digits
    const long double e2 = detail::thm_e2<long double>(a, sigma, T, h);
    return e1 + static_cast<double>(e2 / B);
}

ApproxMse mse_approx_and_bounds(double a, double sigma, double T, double h,
                                double B) {
    if (!(a < 0.0)) throw UnstableSystem("mse_approx_and_bounds requires a < 0");
    if (!(h > 0.0) || !(T > 0.0)) throw InvalidArgument("h, T must be > 0");
    if (!(B > 0.0)) throw InvalidArgument("B must be > 0");
    const double s4 = sigma * sigma * sigma * sigma;
    // c1 = sigma^4 (e^{2aT}-1)^2/(16 a^2) = sigma^4 T^2 phi1(2aT)^2/4
    const double p1 = phi1(2.0 * a * T);
    const double c1 = s4 * T * T * p1 * p1 / 4.0;
    // c2 = -sigma^4 T (4aT - e^{4aT} + e^{2aT}(8aT-4) + 5)/(8 a^4)
    //    = sigma^4 T^5 beta(aT)/8
    const double c2 =
        s4 * T * T * T * T * T * detail::variance_bracket_beta(a * T) / 8.0;
    const double a4 = a * a * a * a;
    const double slack = (s4 * T / B) *
                         (32.0 * a4 * T * T * T * h / 3.0 +
                          16.0 * a4 * T * T * h * h) *
                         (1.0 + 1.0 / (8.0 * a4 * h * h));
    ApproxMse out;
    out.c1 = c1;
    out.c2 = c2;
    out.approx = c1 * h * h + c2 / (h * B);
    out.lower = out.approx;
    out.upper = 4.0 * c1 * h * h + 2.0 * c2 / (h * B) + slack;
    out.slack = slack;
    return out;
}

double discount_constant(double a, double gamma) {
    require_tail_convergence(a, gamma);
    const double L = std::log(gamma);
    return 1.0 / (L * (a + L) * (2.0 * a + L) * (2.0 * a + L));
}

double mse_finite_discounted(double a, double sigma, double T, double gamma,
                             double h, double B) {
    if (!(a < 0.0)) throw UnstableSystem("mse_finite_discounted requires a < 0");
    if (!(gamma > 0.0) || gamma >= 1.0) {
        throw InvalidArgument("gamma must lie in (0,1)");
    }
    if (!(h > 0.0) || !(T > 0.0)) throw InvalidArgument("h, T must be > 0");
    const double L = std::log(gamma);
    if (!(a + L < 0.0) || !(2.0 * a + L < 0.0)) {
        throw DivergentTail("variance constant denominator vanishes");
    }
    const double s4 = sigma * sigma * sigma * sigma;
    const double gT = std::pow(gamma, T);
    const double e2aT = std::exp(2.0 * a * T);
    const double em = std::expm1(2.0 * a * T);  // e^{2aT} - 1
    const double K = e2aT * (2.0 * a + L) - L;
    const double a2 = a * a;
    const double C1 = gT * gT * em * em / (16.0 * a2);
    const double C2 = gT * em * (gT * K - 2.0 * a) / (48.0 * a2);
    const double C3 = gT * (gT * K * K - 4.0 * a * K) / (576.0 * a2);
    // C4 (gamma^T-weighted variance correction) is unspecified and omitted.
    const double variance =
        s4 * T / (L * (a + L) * (2.0 * a + L) * (2.0 * a + L) * h * B);
    return s4 * (C1 * h * h + C2 * h * h * h +
                 (1.0 / 144.0 + C3) * h * h * h * h) +
           variance;
}

bool gamma_tail_negligible(double gamma, double T, double h) {
    return std::pow(gamma, T) < h * h * h * h / 10.0;
}

double estimator_mean_geometric(const ScalarSystem& sys, double T,
                                double gamma, double h) {
    // sigma^2 T/(2a) [phi1((L+2a)T)/phi1((L+2a)h) - phi1(LT)/phi1(Lh)], the
    // geometric-sum closed form of h sum_k gamma^{kh} E[x^2(kh)].
    const double L = gamma == 1.0 ? 0.0 : std::log(gamma);
    const double s2 = sys.sigma * sys.sigma;
    auto F = [&](double z) { return phi1(z * T) / phi1(z * h); };
    const double twoa = 2.0 * sys.a;
    if (std::abs(twoa) < 1e-8 * std::max(1.0, std::abs(L))) {
        // divided difference degenerates to F'(L)
        const double d1 = T * phi1_divided_difference(L * T, L * T);
        const double dh = h * phi1_divided_difference(L * h, L * h);
        const double Fp = (d1 - F(L) * dh) / phi1(L * h);
        return sys.q * s2 * T * Fp;
    }
    return sys.q * s2 * T * (F(L + twoa) - F(L)) / twoa;
}

double mse_infinite_discounted(double a, double sigma, double T, double gamma,
                               double h, double B) {
    if (!(h > 0.0) || !(T > 0.0)) throw InvalidArgument("h, T must be > 0");
    const double C = discount_constant(a, gamma);  // checks tail conditions
    const double s4 = sigma * sigma * sigma * sigma;
    double out = s4 * T * C / (h * B) + s4 * h * h * h * h / 144.0;
    if (!gamma_tail_negligible(gamma, T, h)) {
        // constant-gamma^T regime: truncation and cross terms do not vanish
        ScalarSystem unit{a, sigma, 1.0};
        const double v_tail = value_tail_scalar(unit, T, gamma).value;
        const double bias = estimator_mean_geometric(unit, T, gamma, h) -
                            value_finite_scalar(unit, T, gamma).value;
        out += v_tail * v_tail - 2.0 * bias * v_tail;
    }
    return out;
}

LeadingCoefficients fit_leading_coefficients(
    const VectorSystem& sys, double T, const std::vector<std::int64_t>& budgets,
    const std::vector<double>& h_grid) {
    if (budgets.empty() || h_grid.empty()) {
        throw InvalidArgument("fit_leading_coefficients: empty grid");
    }
    const std::size_t rows = budgets.size() * h_grid.size();
    Eigen::MatrixXd X(rows, 2);
    Eigen::VectorXd y(rows);
    std::size_t r = 0;
    for (const auto B : budgets) {
        for (const double h : h_grid) {
            const EvalPlan plan =
                build_plan(h, B, T, 1.0, HorizonMode::FiniteUndiscounted);
            X(r, 0) = h * h;
            X(r, 1) = 1.0 / (h * static_cast<double>(B));
            y(r) = mse_exact(sys, plan).total;
            ++r;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU |
                                                 Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) /
                        svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond < 1e8)) {
        throw IllConditionedFit("design matrix condition " +
                                std::to_string(cond));
    }
    const Eigen::Vector2d coef = svd.solve(y);
    const double resid = (X * coef - y).norm() / y.norm();
    return LeadingCoefficients{coef(0), coef(1), resid};
}

} // namespace tempres
