// numeric_utils.hpp -- small numerical primitives used across modules:
// the phi functions phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2
// with series branches near z = 0, a stable divided difference of phi1,
// compensated summation, and Gauss-Legendre panel quadrature.
//
// phi1/phi2 are templated so they also accept std::complex<double>; the
// series branch is pure polynomial arithmetic, which keeps complex-step
// derivatives accurate near removable singularities.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <type_traits>

#include "tempres/errors.hpp"

namespace tempres {

namespace detail {

template <class Scalar>
double abs_of(const Scalar& z) {
    if constexpr (std::is_floating_point_v<Scalar>) {
        return std::abs(static_cast<double>(z));
    } else {
        return std::abs(std::complex<double>(z));
    }
}

template <class Scalar>
Scalar exp_of(const Scalar& z) {
    using std::exp;
    return exp(z);
}

} // namespace detail

// (e^z - 1)/z, continuous at z = 0.
template <class Scalar>
Scalar phi1(const Scalar& z) {
    if (detail::abs_of(z) < 0.5) {
        // sum_{k>=0} z^k/(k+1)!; 22 terms reach double precision at |z| = 0.5
        Scalar term(1.0);
        Scalar sum(1.0);
        for (int k = 1; k <= 22; ++k) {
            term = term * z / static_cast<double>(k + 1);
            sum += term;
        }
        return sum;
    }
    if constexpr (std::is_same_v<Scalar, double>) {
        return std::expm1(z) / z;
    } else if constexpr (std::is_same_v<Scalar, long double>) {
        return std::expm1(z) / z;
    } else {
        return (detail::exp_of(z) - Scalar(1.0)) / z;
    }
}

// (e^z - 1 - z)/z^2, continuous at z = 0 with value 1/2.
template <class Scalar>
Scalar phi2(const Scalar& z) {
    if (detail::abs_of(z) < 0.5) {
        Scalar term(0.5);
        Scalar sum(0.5);
        for (int k = 1; k <= 22; ++k) {
            term = term * z / static_cast<double>(k + 2);
            sum += term;
        }
        return sum;
    }
    if constexpr (std::is_floating_point_v<Scalar>) {
        return (std::expm1(z) - z) / (z * z);
    } else {
        return (detail::exp_of(z) - Scalar(1.0) - z) / (z * z);
    }
}

// Divided difference (phi1(u) - phi1(v))/(u - v), stable for u ~ v and for
// large negative arguments. Used by the discounted expected-cost formulas.
double phi1_divided_difference(double u, double v);

// Compensated (Kahan) accumulator for long sums of mixed magnitude.
class KahanSum {
public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// Composite Gauss-Legendre quadrature of f over [lo, hi]; panel count doubles
// until two successive estimates agree to rel_tol (relative to scale) or
// max_doublings is exhausted, in which case QuadratureFailure is thrown.
double integrate_gauss_legendre(const std::function<double(double)>& f,
                                double lo, double hi, double rel_tol,
                                int points_per_panel = 32,
                                int max_doublings = 16);

} // namespace tempres
