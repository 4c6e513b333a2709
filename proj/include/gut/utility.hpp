#pragma once

// Expected-utility formulas feeding the three tree levels, plus the payoff
// matrix builders for each level.
//
// Sign conventions for the payoff matrices (rows = explorers, the maximizer):
//   level 1: winning probability W, a utility;
//   level 2: -E(e), since E(e) is the explorers' relative energy cost;
//   level 3: H, the HP damage dealt minus the HP damage received.

#include "gut/matgame.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gut {

enum class NeedKind { Safety, Basic, Capability, Teaming };

struct NeedSpec {
  std::vector<double> weights;
  std::vector<double> probabilities;
  NeedKind kind = NeedKind::Safety;
};

struct WinCoeffs {
  double a1 = 1.0, a2 = 1.0, a3 = 1.0, a4 = 1.0, a5 = 1.0;
};

struct EnergyCoeffs {
  double b0 = 0.0, b1 = 1.0, b2 = 1.0, b3 = 1.0;
  double b11 = 1.0, b12 = 1.0, b13 = 1.0;
};

struct HpCoeffs {
  double c0 = 0.0, c1 = 1.0, rho = 1.0;
  double gamma_e = 0.5, gamma_m = 0.5;
  double delta_e = 0.5, delta_m = 0.5;
};

/// Everything an engagement looks like from the explorers' side.
struct EngagementObs {
  int n = 1;  // explorers
  int m = 0;  // monsters
  double d = 1.0;
  double v = 1.0;
  double f = 0.01;  // explorer unit attacking energy cost
  double q = 0.03;  // monster unit attacking energy cost
  double t_ev = 1.0, t_mv = 1.0, r_ev = 1.0, r_mv = 1.0;
  double t_e = 1.0, t_m = 1.0, r_e = 1.0, r_m = 1.0;
  double phi_e = 1.0, phi_m = 1.0;
  int k = 1;  // explorers attacking simultaneously
  int g = 1;  // monsters attacking simultaneously
  double e_e = 100.0, e_m = 100.0;
  // Observed energy spread, used by the ability-targeting cells.
  double e_e_min = 100.0, e_e_max = 100.0;
  double e_m_min = 100.0, e_m_max = 100.0;

  double lambda_e() const { return n * phi_e; }
  double lambda_m() const { return m * phi_m; }
};

/// Per-cell encodings of the action labels in the three payoff tables.
struct CellModifiers {
  double attack_t = 1.25;  // Attack scales own attack ability...
  double attack_r = 0.75;  // ...and own defend ability; Defend swaps them.
  double nearest_distance = 0.5;
  bool clamp_win = true;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

double need_expectation(const NeedSpec& spec);

double winning_probability(const EngagementObs& obs, const WinCoeffs& c, bool clamp = true);

double expected_energy(const EngagementObs& obs, const EnergyCoeffs& c);

/// Sampling estimate of the full energy expectation: walking distance
/// ~ Normal(d, 1), attack counts ~ Poisson(m*phi_m) and Poisson(n*phi_e),
/// communication rounds ~ Poisson(d/v).
MonteCarloEstimate expected_energy_distributional(const EngagementObs& obs, const EnergyCoeffs& c,
                                                  std::int64_t samples, std::uint64_t rng_seed);

double expected_hp(const EngagementObs& obs, const HpCoeffs& c);

inline const std::vector<std::string>& level1_explorer_actions() {
  static const std::vector<std::string> labels{"Attack", "Defend"};
  return labels;
}
inline const std::vector<std::string>& level1_monster_actions() { return level1_explorer_actions(); }
inline const std::vector<std::string>& level2_explorer_actions() {
  static const std::vector<std::string> labels{"Nearest", "A-Lowest", "A-Highest"};
  return labels;
}
inline const std::vector<std::string>& level2_monster_actions() { return level2_explorer_actions(); }
inline const std::vector<std::string>& level3_explorer_actions() {
  static const std::vector<std::string> labels{"OneGroup", "TwoGroups", "ThreeGroups"};
  return labels;
}
inline const std::vector<std::string>& level3_monster_actions() {
  static const std::vector<std::string> labels{"Independent", "Dependent"};
  return labels;
}

// Cell-level observations: what the underlying utility is evaluated on for
// cell (row, col). Exposed so tests can check builders cell by cell.
EngagementObs level1_cell_obs(const EngagementObs& obs, Eigen::Index row, Eigen::Index col,
                              const CellModifiers& mod = {});
EngagementObs level2_cell_obs(const EngagementObs& obs, Eigen::Index row, Eigen::Index col,
                              const CellModifiers& mod = {});
EngagementObs level3_cell_obs(const EngagementObs& obs, Eigen::Index row, Eigen::Index col);

PayoffMatrix payoff_level1(const EngagementObs& obs, const WinCoeffs& c, const CellModifiers& mod = {});
PayoffMatrix payoff_level2(const EngagementObs& obs, const EnergyCoeffs& c, const CellModifiers& mod = {});
PayoffMatrix payoff_level3(const EngagementObs& obs, const HpCoeffs& c);

}  // namespace gut
