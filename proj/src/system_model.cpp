#include "tempres/system_model.hpp"

#include <cmath>
#include <string>

namespace tempres {

const char* to_string(HorizonMode mode) {
    switch (mode) {
        case HorizonMode::FiniteUndiscounted: return "finite-undiscounted";
        case HorizonMode::FiniteDiscounted: return "finite-discounted";
        case HorizonMode::InfiniteDiscounted: return "infinite-discounted";
    }
    return "?";
}

HorizonMode horizon_mode_from_string(const std::string& name) {
    if (name == "finite-undiscounted") return HorizonMode::FiniteUndiscounted;
    if (name == "finite-discounted") return HorizonMode::FiniteDiscounted;
    if (name == "infinite-discounted") return HorizonMode::InfiniteDiscounted;
    throw InvalidArgument("unknown horizon mode: " + name);
}

ScalarSystem validate_scalar(double a, double sigma, double q,
                             HorizonMode mode) {
    (void)mode;  // marginal stability a = 0 is admissible in every mode;
                 // discount-dependent rejection happens where gamma is known
    if (!(sigma > 0.0)) {
        throw NonPositiveParameter("sigma must be positive");
    }
    if (!(q > 0.0)) {
        throw NonPositiveParameter("q must be positive");
    }
    if (a > 0.0) {
        throw UnstableSystem("drift a must be <= 0, got " + std::to_string(a));
    }
    return ScalarSystem{a, sigma, q};
}

VectorSystem validate_vector(const Eigen::MatrixXd& A, double sigma,
                             const Eigen::MatrixXd& Q, HorizonMode mode) {
    (void)mode;
    if (A.rows() != A.cols()) {
        throw DimensionMismatch("A must be square");
    }
    if (Q.rows() != Q.cols()) {
        throw DimensionMismatch("Q must be square");
    }
    if (A.rows() != Q.rows()) {
        throw DimensionMismatch("A and Q dimensions differ");
    }
    if (A.rows() == 0) {
        throw DimensionMismatch("empty system");
    }
    if (!(sigma > 0.0)) {
        throw NonPositiveParameter("sigma must be positive");
    }
    if (!Q.isApprox(Q.transpose(), 1e-12)) {
        throw NonSpdCost("Q must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qes(Q);
    if (qes.info() != Eigen::Success || qes.eigenvalues().minCoeff() <= 0.0) {
        throw NonSpdCost("Q must be positive definite");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> aes(A);
    if (aes.info() != Eigen::Success) {
        throw UnstableSystem("eigenvalue computation failed for A");
    }
    const double max_re = aes.eigenvalues().real().maxCoeff();
    const double tol = 1e-10 * std::max(1.0, A.norm());
    if (max_re > tol) {
        throw UnstableSystem("A has an eigenvalue with positive real part");
    }
    return VectorSystem{A, sigma, Q};
}

EvalPlan build_plan(double h, std::int64_t budget, double T, double gamma,
                    HorizonMode mode) {
    if (!(h > 0.0)) throw InvalidArgument("h must be positive");
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    if (budget < 1) throw InvalidArgument("budget must be >= 1");
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw InvalidArgument("gamma must lie in (0, 1]");
    }
    if (mode == HorizonMode::FiniteUndiscounted && gamma != 1.0) {
        throw InvalidArgument("finite-undiscounted mode forces gamma = 1");
    }
    if (mode != HorizonMode::FiniteUndiscounted && gamma == 1.0) {
        throw InvalidArgument(std::string(to_string(mode)) +
                              " mode requires gamma < 1");
    }
    const double ratio = T / h;
    const auto N = static_cast<std::int64_t>(std::llround(ratio));
    if (N < 1 || std::abs(ratio - static_cast<double>(N)) >
                     1e-9 * static_cast<double>(N)) {
        throw NonIntegerGrid("T/h = " + std::to_string(ratio) +
                             " is not an integer");
    }
    const std::int64_t M = budget / N;
    if (M < 1) {
        throw BudgetTooSmall("budget " + std::to_string(budget) +
                             " below one trajectory of N = " +
                             std::to_string(N));
    }
    return EvalPlan{h, budget, T, gamma, mode, N, M};
}

std::vector<double> admissible_grid(double T, std::int64_t budget,
                                    std::int64_t m_max) {
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
    if (m_max > budget) {
        throw InvalidArgument("m_max exceeds budget: no whole trajectory fits");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(m_max));
    for (std::int64_t m = 1; m <= m_max; ++m) {
        grid.push_back(T / static_cast<double>(m));
    }
    return grid;
}

} // namespace tempres
