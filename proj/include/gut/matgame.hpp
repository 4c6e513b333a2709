#pragma once

// Two-player zero-sum matrix games.
//
// The row player receives a(g, k) and maximizes; the column player receives
// -a(g, k). Everything here is a pure function of its arguments.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gut {

template <typename Scalar>
using Payoff = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Strategy = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using PayoffMatrix = Payoff<double>;
using StrategyVector = Strategy<double>;

inline constexpr double kDefaultSolveTol = 1e-6;

/// Raised when an iterative or pivoting solver cannot certify its answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolutionKind { Pure, Mixed };

template <typename Scalar>
struct BasicGameSolution {
  SolutionKind kind = SolutionKind::Mixed;
  Strategy<Scalar> row_strategy;
  Strategy<Scalar> col_strategy;
  Scalar value = Scalar(0);
};
using GameSolution = BasicGameSolution<double>;

template <typename Scalar>
struct BasicSaddlePoint {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  Scalar value = Scalar(0);
};
using SaddlePoint = BasicSaddlePoint<double>;

template <typename Derived>
void validate_payoff(const Eigen::MatrixBase<Derived>& payoff) {
  if (payoff.rows() < 1 || payoff.cols() < 1) {
    throw std::invalid_argument("payoff matrix must have at least one row and one column");
  }
  if (!payoff.allFinite()) {
    throw std::invalid_argument("payoff matrix entries must be finite");
  }
}

/// max over rows of the row minimum (the row player's security level).
template <typename Derived>
typename Derived::Scalar maxmin(const Eigen::MatrixBase<Derived>& payoff) {
  validate_payoff(payoff);
  return payoff.rowwise().minCoeff().maxCoeff();
}

/// min over columns of the column maximum.
template <typename Derived>
typename Derived::Scalar minmax(const Eigen::MatrixBase<Derived>& payoff) {
  validate_payoff(payoff);
  return payoff.colwise().maxCoeff().minCoeff();
}

/// Expected row payoff x' A y.
template <typename Derived, typename DX, typename DY>
typename Derived::Scalar expected_payoff(const Eigen::MatrixBase<Derived>& payoff,
                                         const Eigen::MatrixBase<DX>& x,
                                         const Eigen::MatrixBase<DY>& y) {
  return x.dot(payoff * y);
}

/// Sum of both players' best-response gains against the profile (x, y).
/// Zero exactly at an equilibrium.
template <typename Derived, typename DX, typename DY>
typename Derived::Scalar exploitability(const Eigen::MatrixBase<Derived>& payoff,
                                        const Eigen::MatrixBase<DX>& x,
                                        const Eigen::MatrixBase<DY>& y) {
  using Scalar = typename Derived::Scalar;
  validate_payoff(payoff);
  if (x.size() != payoff.rows() || y.size() != payoff.cols()) {
    throw std::invalid_argument("strategy length does not match payoff dimensions");
  }
  const Scalar value = expected_payoff(payoff, x, y);
  const Scalar best_row = (payoff * y).maxCoeff();
  const Scalar best_col = (x.transpose() * payoff).minCoeff();
  return std::max(Scalar(0), value - best_col) + std::max(Scalar(0), best_row - value);
}

/// First saddle point in row-major order, if any.
template <typename Derived>
std::optional<BasicSaddlePoint<typename Derived::Scalar>> solve_pure(
    const Eigen::MatrixBase<Derived>& payoff) {
  using Scalar = typename Derived::Scalar;
  validate_payoff(payoff);
  const Strategy<Scalar> row_min = payoff.rowwise().minCoeff();
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> col_max = payoff.colwise().maxCoeff();
  for (Eigen::Index g = 0; g < payoff.rows(); ++g) {
    for (Eigen::Index k = 0; k < payoff.cols(); ++k) {
      const Scalar a = payoff(g, k);
      if (a == row_min(g) && a == col_max(k)) {
        return BasicSaddlePoint<Scalar>{g, k, a};
      }
    }
  }
  return std::nullopt;
}

namespace detail {

// Dense simplex tableau for
//   max 1'w  s.t.  B w <= 1,  w >= 0
// with B strictly positive, so the origin is feasible and the optimum is
// bounded. Bland's rule fixes the pivot sequence.
template <typename Scalar>
struct ColumnLp {
  Strategy<Scalar> primal;  // w
  Strategy<Scalar> dual;    // u, from the slack reduced costs
  Scalar objective = Scalar(0);
};

template <typename Scalar>
ColumnLp<Scalar> solve_column_lp(const Payoff<Scalar>& shifted, int max_pivots) {
  const Eigen::Index m = shifted.rows();
  const Eigen::Index n = shifted.cols();
  const Eigen::Index width = n + m + 1;
  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon() * Scalar(1024);

  Payoff<Scalar> tab = Payoff<Scalar>::Zero(m + 1, width);
  tab.topLeftCorner(m, n) = shifted;
  tab.block(0, n, m, m).setIdentity();
  tab.col(width - 1).head(m).setOnes();
  tab.row(m).head(n).setConstant(Scalar(-1));

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  for (int pivots = 0;; ++pivots) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (tab(m, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    if (pivots >= max_pivots) {
      throw SolverError("simplex exceeded its pivot budget");
    }

    Eigen::Index leave = -1;
    Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const Scalar coef = tab(i, enter);
      if (coef <= eps) continue;
      const Scalar ratio = tab(i, width - 1) / coef;
      if (leave < 0 || ratio < best_ratio - eps) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + eps &&
                 basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]) {
        leave = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leave < 0) {
      throw SolverError("simplex found an unbounded direction in a bounded game LP");
    }

    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const Scalar factor = tab(i, enter);
      if (factor != Scalar(0)) tab.row(i) -= factor * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  ColumnLp<Scalar> out;
  out.primal = Strategy<Scalar>::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index var = basis[static_cast<std::size_t>(i)];
    if (var < n) out.primal(var) = tab(i, width - 1);
  }
  out.dual = tab.row(m).segment(n, m).transpose();
  out.objective = tab(m, width - 1);
  return out;
}

template <typename Scalar>
Strategy<Scalar> to_distribution(Strategy<Scalar> v) {
  v = v.cwiseMax(Scalar(0));
  const Scalar total = v.sum();
  if (!(total > Scalar(0))) {
    throw SolverError("degenerate strategy from the LP solution");
  }
  return v / total;
}

}  // namespace detail

/// Mixed equilibrium by the LP reduction, certified by exploitability <= tol.
template <typename Derived>
BasicGameSolution<typename Derived::Scalar> solve_mixed(
    const Eigen::MatrixBase<Derived>& payoff,
    typename Derived::Scalar tol = typename Derived::Scalar(kDefaultSolveTol)) {
  using Scalar = typename Derived::Scalar;
  validate_payoff(payoff);
  if (!(tol > Scalar(0))) {
    throw std::invalid_argument("solver tolerance must be positive");
  }
  const Payoff<Scalar> a = payoff;
  const Scalar shift = Scalar(1) - a.minCoeff();
  const Payoff<Scalar> shifted = a.array() + shift;

  const int budget = 64 * static_cast<int>(a.rows() + a.cols() + 2);
  const auto lp = detail::solve_column_lp<Scalar>(shifted, budget);

  BasicGameSolution<Scalar> sol;
  sol.kind = SolutionKind::Mixed;
  sol.row_strategy = detail::to_distribution<Scalar>(lp.dual);
  sol.col_strategy = detail::to_distribution<Scalar>(lp.primal);

  // The game value always lies in [maxmin, minmax]; clamping only trims
  // round-off from the expected payoff.
  const Scalar lo = a.rowwise().minCoeff().maxCoeff();
  const Scalar hi = a.colwise().maxCoeff().minCoeff();
  sol.value = std::clamp(expected_payoff(a, sol.row_strategy, sol.col_strategy), lo, hi);

  const Scalar gap = exploitability(a, sol.row_strategy, sol.col_strategy);
  if (!(gap <= tol)) {
    throw SolverError("mixed equilibrium not certified: exploitability " + std::to_string(double(gap)));
  }
  return sol;
}

/// Saddle point when one exists, otherwise the certified mixed equilibrium.
template <typename Derived>
BasicGameSolution<typename Derived::Scalar> solve(
    const Eigen::MatrixBase<Derived>& payoff,
    typename Derived::Scalar tol = typename Derived::Scalar(kDefaultSolveTol)) {
  using Scalar = typename Derived::Scalar;
  if (auto saddle = solve_pure(payoff)) {
    BasicGameSolution<Scalar> sol;
    sol.kind = SolutionKind::Pure;
    sol.row_strategy = Strategy<Scalar>::Unit(payoff.rows(), saddle->row);
    sol.col_strategy = Strategy<Scalar>::Unit(payoff.cols(), saddle->col);
    sol.value = saddle->value;
    return sol;
  }
  return solve_mixed(payoff, tol);
}

// Non-template entry points for the common double case.
std::optional<SaddlePoint> solve_pure(const PayoffMatrix& payoff);
GameSolution solve_mixed(const PayoffMatrix& payoff, double tol = kDefaultSolveTol);
GameSolution solve(const PayoffMatrix& payoff, double tol = kDefaultSolveTol);
double exploitability(const PayoffMatrix& payoff, const StrategyVector& x, const StrategyVector& y);

}  // namespace gut
