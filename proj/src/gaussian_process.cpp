#include "tempres/gaussian_process.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "tempres/numeric_utils.hpp"

namespace tempres {

double second_moment(const ScalarSystem& sys, double t) {
    return sys.sigma * sys.sigma * t * phi1(2.0 * sys.a * t);
}

double fourth_moment(const ScalarSystem& sys, double t) {
    const double m2 = second_moment(sys, t);
    return 3.0 * m2 * m2;
}

double cov_pair(const ScalarSystem& sys, double s, double t) {
    const double lo = std::min(s, t);
    const double hi = std::max(s, t);
    return sys.sigma * sys.sigma * std::exp(sys.a * (hi - lo)) * lo *
           phi1(2.0 * sys.a * lo);
}

double cross_moment(const ScalarSystem& sys, double s, double t) {
    // Isserlis: E[x^2(s) x^2(t)] = E[x^2(s)] E[x^2(t)] + 2 E[x(s)x(t)]^2
    const double c = cov_pair(sys, s, t);
    return second_moment(sys, s) * second_moment(sys, t) + 2.0 * c * c;
}

namespace {

bool strictly_stable(const Eigen::MatrixXd& A) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    const double tol = 1e-10 * std::max(1.0, A.norm());
    return es.info() == Eigen::Success &&
           es.eigenvalues().real().maxCoeff() < -tol;
}

// sigma^2 int_0^t e^{Av} e^{A^T v} dv by 32-point Gauss-Legendre panel
// doubling on the matrix integrand; used for marginally stable A.
Eigen::MatrixXd gramian_quadrature(const VectorSystem& sys, double t) {
    const auto n = sys.dim();
    auto panel_sum = [&](int panels) {
        static constexpr std::array<double, 16> nodes = {
            0.0483076656877383162, 0.1444719615827964934,
            0.2392873622521370745, 0.3318686022821276497,
            0.4213512761306353454, 0.5068999089322293900,
            0.5877157572407623290, 0.6630442669302152009,
            0.7321821187402896804, 0.7944837959679424069,
            0.8493676137325699701, 0.8963211557660521240,
            0.9349060759377396892, 0.9647622555875064307,
            0.9856115115452683354, 0.9972638618494815635};
        static constexpr std::array<double, 16> weights = {
            0.0965400885147278006, 0.0956387200792748594,
            0.0938443990808045654, 0.0911738786957638847,
            0.0876520930044038111, 0.0833119242269467552,
            0.0781938957870703065, 0.0723457941088485062,
            0.0658222227763618468, 0.0586840934785355471,
            0.0509980592623761762, 0.0428358980222266807,
            0.0342738629130214331, 0.0253920653092620595,
            0.0162743947309056706, 0.0070186100094700966};
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
        const double width = t / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * width;
            const double half = 0.5 * width;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                for (const double sgn : {1.0, -1.0}) {
                    const double v = mid + sgn * half * nodes[i];
                    const Eigen::MatrixXd E = matrix_exponential(sys.A, v);
                    acc += (weights[i] * half) * (E * E.transpose());
                }
            }
        }
        return Eigen::MatrixXd(sys.sigma * sys.sigma * acc);
    };
    int panels = 1;
    Eigen::MatrixXd prev = panel_sum(panels);
    for (int iter = 0; iter < 14; ++iter) {
        panels *= 2;
        Eigen::MatrixXd cur = panel_sum(panels);
        if ((cur - prev).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, t)) {
            return cur;
        }
        prev = cur;
    }
    throw QuadratureFailure("gramian quadrature did not converge");
}

} // namespace

Eigen::MatrixXd state_covariance(const VectorSystem& sys, double t) {
    const auto n = sys.dim();
    if (t == 0.0) return Eigen::MatrixXd::Zero(n, n);
    if (strictly_stable(sys.A)) {
        const Eigen::MatrixXd P = stationary_gramian(sys);
        const Eigen::MatrixXd E = matrix_exponential(sys.A, t);
        Eigen::MatrixXd S = P - E * P * E.transpose();
        return 0.5 * (S + S.transpose().eval());
    }
    Eigen::MatrixXd S = gramian_quadrature(sys, t);
    return 0.5 * (S + S.transpose().eval());
}

Eigen::MatrixXd cov_matrix(const VectorSystem& sys, double s, double t) {
    const double lo = std::min(s, t);
    const double hi = std::max(s, t);
    const Eigen::MatrixXd S = state_covariance(sys, lo);
    const Eigen::MatrixXd E = matrix_exponential(sys.A, hi - lo);
    if (s <= t) {
        return S * E.transpose();  // E[X(s)X(t)^T] = Sigma(s) e^{A^T (t-s)}
    }
    return E * S;
}

ScalarTransition transition(const ScalarSystem& sys, double h) {
    return ScalarTransition{std::exp(sys.a * h), second_moment(sys, h)};
}

VectorTransition transition(const VectorSystem& sys, double h) {
    return VectorTransition{matrix_exponential(sys.A, h),
                            state_covariance(sys, h)};
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A, double t) {
    // Pade-13 scaling and squaring (Higham 2005 coefficients).
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const auto n = A.rows();
    Eigen::MatrixXd M = A * t;
    const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    int squarings = 0;
    const double theta13 = 5.371920351148152;
    if (norm > theta13) {
        squarings = static_cast<int>(
            std::ceil(std::log2(norm / theta13)));
        M /= std::ldexp(1.0, squarings);
    }
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd M2 = M * M;
    const Eigen::MatrixXd M4 = M2 * M2;
    const Eigen::MatrixXd M6 = M4 * M2;
    const Eigen::MatrixXd U =
        M * (M6 * (b[13] * M6 + b[11] * M4 + b[9] * M2) + b[7] * M6 +
             b[5] * M4 + b[3] * M2 + b[1] * I);
    const Eigen::MatrixXd V =
        M6 * (b[12] * M6 + b[10] * M4 + b[8] * M2) + b[6] * M6 + b[4] * M4 +
        b[2] * M2 + b[0] * I;
    Eigen::MatrixXd R = (V - U).partialPivLu().solve(V + U);
    for (int i = 0; i < squarings; ++i) R = R * R;
    return R;
}

Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& W) {
    const auto n = A.rows();
    if (A.cols() != n || W.rows() != n || W.cols() != n) {
        throw DimensionMismatch("lyapunov_solve: dimension mismatch");
    }
    // (I (x) A + A (x) I) vec(P) = -vec(W)
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd K(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            K.block(i * n, j * n, n, n) = I(i, j) * A + A(i, j) * I;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) {
        throw SingularLyapunov(
            "lyapunov_solve: lambda_i(A) + lambda_j(A) = 0 encountered");
    }
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(W.data(), n * n);
    const Eigen::VectorXd p = lu.solve(-w);
    Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(p.data(), n, n);
    P = 0.5 * (P + P.transpose().eval());
    const double resid = (A * P + P * A.transpose() + W).norm();
    if (resid > 1e-10 * std::max(1.0, P.norm())) {
        throw SingularLyapunov("lyapunov_solve: residual too large");
    }
    return P;
}

Eigen::MatrixXd stationary_gramian(const VectorSystem& sys) {
    if (!strictly_stable(sys.A)) {
        throw SingularLyapunov("stationary_gramian requires strictly stable A");
    }
    const auto n = sys.dim();
    return lyapunov_solve(
        sys.A, sys.sigma * sys.sigma * Eigen::MatrixXd::Identity(n, n));
}

} // namespace tempres
