#include "tempres/ground_truth.hpp"

#include <cmath>

#include "tempres/gaussian_process.hpp"
#include "tempres/numeric_utils.hpp"

namespace tempres {

void require_tail_convergence(double a, double gamma) {
    if (!(gamma > 0.0) || gamma >= 1.0) {
        throw DivergentTail("tail requires gamma in (0,1)");
    }
    const double L = std::log(gamma);
    if (!(a + L < 0.0) || !(2.0 * a + L < 0.0)) {
        throw DivergentTail("tail requires a + log(gamma) < 0 and "
                            "2a + log(gamma) < 0");
    }
}

ValueResult value_finite_scalar(const ScalarSystem& sys, double T,
                                double gamma) {
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    const double s2 = sys.sigma * sys.sigma;
    if (gamma == 1.0) {
        // q sigma^2 T^2 phi2(2aT)
        const double v = sys.q * s2 * T * T * phi2(2.0 * sys.a * T);
        return ValueResult{v, ValueMethod::ClosedForm, 1e-14 * std::abs(v)};
    }
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw InvalidArgument("gamma must lie in (0,1]");
    }
    // q sigma^2 T^2 * dd_phi1((L + 2a)T, LT), L = log(gamma)
    const double L = std::log(gamma);
    const double v = sys.q * s2 * T * T *
                     phi1_divided_difference((L + 2.0 * sys.a) * T, L * T);
    return ValueResult{v, ValueMethod::ClosedForm, 1e-13 * std::abs(v)};
}

ValueResult value_tail_scalar(const ScalarSystem& sys, double T, double gamma) {
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    require_tail_convergence(sys.a, gamma);
    const double L = std::log(gamma);
    const double s2 = sys.sigma * sys.sigma;
    // -q sigma^2 gamma^T (L T phi1(2aT) - 1)/(L (L + 2a))
    const double v = -sys.q * s2 * std::pow(gamma, T) *
                     (L * T * phi1(2.0 * sys.a * T) - 1.0) /
                     (L * (L + 2.0 * sys.a));
    return ValueResult{v, ValueMethod::ClosedForm, 1e-13 * std::abs(v)};
}

ValueResult value_infinite_scalar(const ScalarSystem& sys, double gamma) {
    require_tail_convergence(sys.a, gamma);
    auto at = [&](double T) {
        return value_finite_scalar(sys, T, gamma).value +
               value_tail_scalar(sys, T, gamma).value;
    };
    const double v1 = at(1.0);
    const double v5 = at(5.0);
    const double diff = std::abs(v1 - v5);
    if (diff > 1e-10 * std::max(1.0, std::abs(v1))) {
        throw NumericError("value_infinite_scalar: decomposition is not "
                           "T-independent");
    }
    return ValueResult{v1, ValueMethod::ClosedForm, diff};
}

ValueResult value_finite_vector(const VectorSystem& sys, double T,
                                double gamma) {
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw InvalidArgument("gamma must lie in (0,1]");
    }
    auto integrand = [&](double t) {
        return std::pow(gamma, t) * (sys.Q * state_covariance(sys, t)).trace();
    };
    const double v = integrate_gauss_legendre(integrand, 0.0, T, 1e-11);
    return ValueResult{v, ValueMethod::Quadrature, 1e-11 * std::abs(v)};
}

ValueResult value_infinite_vector(const VectorSystem& sys, double gamma) {
    if (!(gamma > 0.0) || gamma >= 1.0) {
        throw DivergentTail("infinite horizon requires gamma in (0,1)");
    }
    const double L = std::log(gamma);
    Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A);
    if (es.info() != Eigen::Success ||
        es.eigenvalues().real().maxCoeff() + 0.5 * L >= 0.0) {
        throw SingularLyapunov(
            "value_infinite_vector requires Re(lambda) + log(gamma)/2 < 0");
    }
    const auto n = sys.dim();
    const Eigen::MatrixXd shifted =
        sys.A + 0.5 * L * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd P = lyapunov_solve(
        shifted, sys.sigma * sys.sigma * Eigen::MatrixXd::Identity(n, n));
    // V_inf = int_0^inf gamma^t tr(Q Sigma(t)) dt = tr(Q P_gamma)/log(1/gamma)
    const double v = (sys.Q * P).trace() / (-L);
    return ValueResult{v, ValueMethod::Lyapunov, 1e-12 * std::abs(v)};
}

} // namespace tempres
