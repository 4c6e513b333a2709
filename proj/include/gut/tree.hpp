#pragma once

// Game-theoretic utility tree: one zero-sum game per level, chained through
// the probability of the outcome chosen at the level above.
//
// A level's game may depend on the outcome cell chosen at the level directly
// above it, which makes the joint distribution a chain
//   P(x_1, ..., x_n) = P(x_1) P(x_2 | x_1) ... P(x_n | x_{n-1}).

#include "gut/matgame.hpp"
#include "gut/utility.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gut {

/// One outcome of a level game: (row action, column action).
struct Cell {
  Eigen::Index row = 0;
  Eigen::Index col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using PayoffBuilder =
    std::function<PayoffMatrix(const EngagementObs& context, const std::optional<Cell>& parent)>;

struct LevelSpec {
  int level_index = 1;
  std::vector<std::string> row_actions;
  std::vector<std::string> col_actions;
  PayoffBuilder utility_builder;
};

class GutSpec {
 public:
  explicit GutSpec(std::vector<LevelSpec> levels);

  const std::vector<LevelSpec>& levels() const { return levels_; }
  std::size_t depth() const { return levels_.size(); }
  const LevelSpec& level(std::size_t i) const { return levels_.at(i); }

 private:
  std::vector<LevelSpec> levels_;
};

struct ComputationUnit {
  double prior_prob = 1.0;
  PayoffMatrix payoff;
  GameSolution solution;
  Eigen::MatrixXd outcome_probs;  // X[g] * Y[k] * prior
};

struct Choice {
  Cell cell;
  std::string row_action;
  std::string col_action;  // belief about the opponent
  double conditional = 1.0;
};

/// Probabilities closer than this are treated as tied, so solver round-off
/// does not override the lexicographic tie-break.
inline constexpr double kTieTol = 1e-12;

struct StrategyPath {
  std::vector<Choice> choices;
  double joint_prob = 0.0;
};

std::uint64_t node_count(const GutSpec& spec);

/// Probability of cell (g, k) given the parent: X[g] * Y[k].
Eigen::MatrixXd outcome_conditionals(const GameSolution& solution);

ComputationUnit evaluate_unit(const LevelSpec& level, const EngagementObs& context, double prior,
                              const std::optional<Cell>& parent = std::nullopt,
                              double tol = kDefaultSolveTol);

/// Greedy descent: the most probable cell at each level.
StrategyPath decide(const GutSpec& spec, const EngagementObs& context, double tol = kDefaultSolveTol);

/// Exact MAP path over the chain by max-product elimination and trace-back.
/// Ties resolve to the lexicographically smallest path.
StrategyPath map_assignment(const GutSpec& spec, const EngagementObs& context, double tol = kDefaultSolveTol);

double joint_probability(const GutSpec& spec, const EngagementObs& context, const StrategyPath& path,
                         double tol = kDefaultSolveTol);

/// The three-level Explorers-and-Monsters tree over the level payoff builders.
GutSpec explorer_monster_spec(const WinCoeffs& win, const EnergyCoeffs& energy, const HpCoeffs& hp,
                              const CellModifiers& mod = {});

}  // namespace gut
