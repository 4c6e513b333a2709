#pragma once

// Independent reference implementations used only by tests.

#include "gut/matgame.hpp"
#include "gut/tree.hpp"
#include "gut/utility.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index max_dim, double lo, double hi) {
  std::uniform_int_distribution<Eigen::Index> dim(1, max_dim);
  std::uniform_real_distribution<double> entry(lo, hi);
  const Eigen::Index r = dim(rng);
  const Eigen::Index c = dim(rng);
  Eigen::MatrixXd a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = entry(rng);
  return a;
}

// Small integer entries make saddles and ties common.
inline Eigen::MatrixXd random_int_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, int lo,
                                         int hi) {
  std::uniform_int_distribution<int> entry(lo, hi);
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = entry(rng);
  return a;
}

struct Saddle {
  Eigen::Index row, col;
  double value;
};

/// Every cell that is the minimum of its row and the maximum of its column,
/// checked element by element, in row-major order.
inline std::vector<Saddle> all_saddles(const Eigen::MatrixXd& a) {
  std::vector<Saddle> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      bool ok = true;
      for (Eigen::Index jj = 0; jj < a.cols() && ok; ++jj) ok = a(i, j) <= a(i, jj);
      for (Eigen::Index ii = 0; ii < a.rows() && ok; ++ii) ok = a(i, j) >= a(ii, j);
      if (ok) out.push_back({i, j, a(i, j)});
    }
  }
  return out;
}

/// Best-response gap computed by explicit loops over pure strategies.
inline double exploitability(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v += x(i) * a(i, j) * y(j);
  double best_row = -1e300;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) s += a(i, j) * y(j);
    best_row = std::max(best_row, s);
  }
  double best_col = 1e300;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += x(i) * a(i, j);
    best_col = std::min(best_col, s);
  }
  return std::max(0.0, best_row - v) + std::max(0.0, v - best_col);
}

/// A random tree whose level payoffs depend on the parent cell through a
/// fixed lookup table.
inline gut::GutSpec random_spec(std::mt19937_64& rng, int max_levels = 3, int max_actions = 3) {
  std::uniform_int_distribution<int> depth_dist(1, max_levels);
  std::uniform_int_distribution<int> act(1, max_actions);
  const int depth = depth_dist(rng);
  std::vector<gut::LevelSpec> levels;
  int parent_cells = 1;
  for (int l = 0; l < depth; ++l) {
    const int rows = act(rng);
    const int cols = act(rng);
    std::vector<Eigen::MatrixXd> table;
    for (int p = 0; p < parent_cells; ++p) table.push_back(random_int_matrix(rng, rows, cols, -2, 2));
    gut::LevelSpec spec;
    spec.level_index = l + 1;
    for (int r = 0; r < rows; ++r) spec.row_actions.push_back("r" + std::to_string(r));
    for (int c = 0; c < cols; ++c) spec.col_actions.push_back("c" + std::to_string(c));
    const int parent_cols = l == 0 ? 1 : static_cast<int>(levels.back().col_actions.size());
    spec.utility_builder = [table, parent_cols](const gut::EngagementObs&, const std::optional<gut::Cell>& parent) {
      const auto idx = parent ? parent->row * parent_cols + parent->col : 0;
      return gut::PayoffMatrix(table[static_cast<std::size_t>(idx)]);
    };
    levels.push_back(std::move(spec));
    parent_cells = rows * cols;
  }
  return gut::GutSpec(std::move(levels));
}

struct BrutePath {
  std::vector<gut::Cell> cells;
  double joint = 0.0;
};

/// Enumerate every path in lexicographic order, multiplying conditionals
/// from the root down; keep the first maximum, counting near-equal joints
/// as tied.
inline BrutePath brute_force_map(const gut::GutSpec& spec, const gut::EngagementObs& ctx) {
  BrutePath best;
  best.joint = -1.0;
  std::vector<gut::Cell> cells;
  auto recurse = [&](auto&& self, std::size_t level, double joint, std::optional<gut::Cell> parent) -> void {
    if (level == spec.depth()) {
      if (joint > best.joint + gut::kTieTol) best = {cells, joint};
      return;
    }
    const auto& l = spec.level(level);
    const auto sol = gut::solve(l.utility_builder(ctx, parent));
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(l.row_actions.size()); ++r) {
      for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(l.col_actions.size()); ++c) {
        cells.push_back({r, c});
        self(self, level + 1, joint * (sol.row_strategy(r) * sol.col_strategy(c)), gut::Cell{r, c});
        cells.pop_back();
      }
    }
  };
  recurse(recurse, 0, 1.0, std::nullopt);
  return best;
}

/// Sum of joint probabilities over every path.
inline double total_path_mass(const gut::GutSpec& spec, const gut::EngagementObs& ctx) {
  auto recurse = [&](auto&& self, std::size_t level, std::optional<gut::Cell> parent) -> double {
    if (level == spec.depth()) return 1.0;
    const auto& l = spec.level(level);
    const auto sol = gut::solve(l.utility_builder(ctx, parent));
    double total = 0.0;
    for (Eigen::Index r = 0; r < sol.row_strategy.size(); ++r)
      for (Eigen::Index c = 0; c < sol.col_strategy.size(); ++c)
        total += sol.row_strategy(r) * sol.col_strategy(c) * self(self, level + 1, gut::Cell{r, c});
    return total;
  };
  return recurse(recurse, 0, std::nullopt);
}

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sampled HP exchange: Poisson attack counts i ~ Poisson(phi_m) and
/// j ~ Poisson(phi_e), damage h(x, y, z) = rho * z * (x + y) with abilities
/// t = gamma * e and r = delta * e.
inline Estimate monte_carlo_hp(const gut::EngagementObs& obs, const gut::HpCoeffs& c, std::int64_t samples,
                               std::uint64_t seed) {
  auto h = [&](double x, double y, double z) { return c.rho * z * (x + y); };
  const double t_e = c.gamma_e * obs.e_e;
  const double r_e = c.delta_e * obs.e_e;
  const double t_m = c.gamma_m * obs.e_m;
  const double r_m = c.delta_m * obs.e_m;
  std::mt19937_64 rng(seed);
  std::poisson_distribution<long> dealt_hits(obs.phi_m);
  std::poisson_distribution<long> taken_hits(obs.phi_e);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const double i = static_cast<double>(dealt_hits(rng));
    const double j = static_cast<double>(taken_hits(rng));
    const double x = c.c0 + c.c1 * (obs.k * h(t_e, r_e, i) - obs.g * h(t_m, r_m, j));
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

/// A random engagement with every symbol drawn from a plausible range.
inline gut::EngagementObs random_obs(std::mt19937_64& rng) {
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto count = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  gut::EngagementObs o;
  o.n = count(1, 30);
  o.m = count(1, 30);
  o.d = uni(1.0, 50.0);
  o.v = uni(0.5, 2.0);
  o.f = uni(0.005, 0.05);
  o.q = uni(0.005, 0.05);
  o.phi_e = uni(0.2, 2.0);
  o.phi_m = uni(0.2, 2.0);
  o.e_e = uni(10.0, 100.0);
  o.e_m = uni(10.0, 100.0);
  o.k = count(1, o.n);
  o.g = count(1, o.m);
  return o;
}

inline gut::EnergyCoeffs random_energy_coeffs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  gut::EnergyCoeffs c;
  c.b0 = u(rng), c.b1 = u(rng), c.b2 = u(rng), c.b3 = u(rng);
  c.b11 = u(rng), c.b12 = u(rng), c.b13 = u(rng);
  return c;
}

inline gut::HpCoeffs random_hp_coeffs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  gut::HpCoeffs c;
  c.c0 = u(rng), c.c1 = u(rng), c.rho = u(rng);
  c.gamma_e = w(rng), c.gamma_m = w(rng), c.delta_e = w(rng), c.delta_m = w(rng);
  return c;
}

}  // namespace oracle
