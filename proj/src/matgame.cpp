#include "gut/matgame.hpp"

namespace gut {

std::optional<SaddlePoint> solve_pure(const PayoffMatrix& payoff) {
  return solve_pure<PayoffMatrix>(payoff);
}

GameSolution solve_mixed(const PayoffMatrix& payoff, double tol) {
  return solve_mixed<PayoffMatrix>(payoff, tol);
}

GameSolution solve(const PayoffMatrix& payoff, double tol) {
  return solve<PayoffMatrix>(payoff, tol);
}

double exploitability(const PayoffMatrix& payoff, const StrategyVector& x, const StrategyVector& y) {
  return exploitability<PayoffMatrix, StrategyVector, StrategyVector>(payoff, x, y);
}

}  // namespace gut
