#include "gut/tree.hpp"

#include <stdexcept>
#include <unordered_set>

namespace gut {

namespace {

void check_labels(const std::vector<std::string>& labels, const char* side) {
  if (labels.empty()) throw std::invalid_argument(std::string("level has no ") + side + " actions");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate " + std::string(side) + " action '" + l + "'");
  }
}

Choice make_choice(const LevelSpec& level, Cell cell, double conditional) {
  return Choice{cell, level.row_actions[static_cast<std::size_t>(cell.row)],
                level.col_actions[static_cast<std::size_t>(cell.col)], conditional};
}

// Row-major argmax; the first (smallest) cell wins ties.
Cell argmax_cell(const Eigen::MatrixXd& probs) {
  Cell best{0, 0};
  for (Eigen::Index g = 0; g < probs.rows(); ++g)
    for (Eigen::Index k = 0; k < probs.cols(); ++k)
      if (probs(g, k) > probs(best.row, best.col) + kTieTol) best = {g, k};
  return best;
}

Cell unflat(Eigen::Index i, Eigen::Index cols) { return {i / cols, i % cols}; }

}  // namespace

GutSpec::GutSpec(std::vector<LevelSpec> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("a tree needs at least one level");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& l = levels_[i];
    if (l.level_index != static_cast<int>(i) + 1) {
      throw std::invalid_argument("level indices must run 1..n in order");
    }
    check_labels(l.row_actions, "row");
    check_labels(l.col_actions, "column");
    if (!l.utility_builder) throw std::invalid_argument("level has no utility builder");
  }
}

std::uint64_t node_count(const GutSpec& spec) {
  std::uint64_t total = 1;
  std::uint64_t rows = 1;
  std::uint64_t cols = 1;
  for (std::size_t i = 0; i + 1 < spec.depth(); ++i) {
    rows *= spec.level(i).row_actions.size();
    cols *= spec.level(i).col_actions.size();
    total += rows * cols;
  }
  return total;
}

Eigen::MatrixXd outcome_conditionals(const GameSolution& solution) {
  return solution.row_strategy * solution.col_strategy.transpose();
}

ComputationUnit evaluate_unit(const LevelSpec& level, const EngagementObs& context, double prior,
                              const std::optional<Cell>& parent, double tol) {
  if (!(prior >= 0.0 && prior <= 1.0)) throw std::invalid_argument("prior probability outside [0, 1]");
  ComputationUnit unit;
  unit.prior_prob = prior;
  unit.payoff = level.utility_builder(context, parent);
  if (unit.payoff.rows() != static_cast<Eigen::Index>(level.row_actions.size()) ||
      unit.payoff.cols() != static_cast<Eigen::Index>(level.col_actions.size())) {
    throw std::invalid_argument("payoff builder returned a matrix that does not match the level's actions");
  }
  unit.solution = solve(unit.payoff, tol);
  unit.outcome_probs = outcome_conditionals(unit.solution) * prior;
  return unit;
}

StrategyPath decide(const GutSpec& spec, const EngagementObs& context, double tol) {
  StrategyPath path;
  double prior = 1.0;
  std::optional<Cell> parent;
  for (const auto& level : spec.levels()) {
    const ComputationUnit unit = evaluate_unit(level, context, prior, parent, tol);
    const Cell cell = argmax_cell(unit.outcome_probs);
    const double conditional = outcome_conditionals(unit.solution)(cell.row, cell.col);
    path.choices.push_back(make_choice(level, cell, conditional));
    prior = unit.outcome_probs(cell.row, cell.col);
    parent = cell;
  }
  path.joint_prob = prior;
  return path;
}

StrategyPath map_assignment(const GutSpec& spec, const EngagementObs& context, double tol) {
  const std::size_t n = spec.depth();

  // cond[i](parent, child): P(x_i = child | x_{i-1} = parent). Level 0 has a
  // single implicit parent.
  std::vector<Eigen::MatrixXd> cond(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& level = spec.level(i);
    const Eigen::Index child_cols = static_cast<Eigen::Index>(level.col_actions.size());
    const Eigen::Index children = static_cast<Eigen::Index>(level.row_actions.size()) * child_cols;
    Eigen::Index parents = 1;
    Eigen::Index parent_cols = 1;
    if (i > 0) {
      parent_cols = static_cast<Eigen::Index>(spec.level(i - 1).col_actions.size());
      parents = static_cast<Eigen::Index>(spec.level(i - 1).row_actions.size()) * parent_cols;
    }
    cond[i].resize(parents, children);
    for (Eigen::Index p = 0; p < parents; ++p) {
      const std::optional<Cell> parent = i == 0 ? std::nullopt : std::optional<Cell>(unflat(p, parent_cols));
      const ComputationUnit unit = evaluate_unit(level, context, 1.0, parent, tol);
      const Eigen::MatrixXd probs = outcome_conditionals(unit.solution);
      for (Eigen::Index c = 0; c < children; ++c) {
        const Cell cell = unflat(c, child_cols);
        cond[i](p, c) = probs(cell.row, cell.col);
      }
    }
  }

  // Forward elimination. tau[i](x_i) is the best prefix probability ending in
  // x_i; back[i](x_i) is the x_{i-1} achieving it.
  std::vector<Eigen::VectorXd> tau(n);
  std::vector<Eigen::VectorXi> back(n);
  tau[0] = cond[0].row(0).transpose();
  back[0] = Eigen::VectorXi::Zero(tau[0].size());

  auto prefix = [&](std::size_t level, Eigen::Index state) {
    std::vector<Eigen::Index> states(level + 1);
    for (std::size_t j = level + 1; j-- > 0;) {
      states[j] = state;
      state = back[j](state);
    }
    return states;
  };

  for (std::size_t i = 1; i < n; ++i) {
    const Eigen::Index children = cond[i].cols();
    tau[i].resize(children);
    back[i].resize(children);
    for (Eigen::Index c = 0; c < children; ++c) {
      Eigen::Index best = 0;
      double best_val = tau[i - 1](0) * cond[i](0, c);
      for (Eigen::Index p = 1; p < cond[i].rows(); ++p) {
        const double val = tau[i - 1](p) * cond[i](p, c);
        if (val > best_val + kTieTol || (val >= best_val - kTieTol && prefix(i - 1, p) < prefix(i - 1, best))) {
          best = p;
          best_val = val;
        }
      }
      tau[i](c) = best_val;
      back[i](c) = static_cast<int>(best);
    }
  }

  // Trace back from the last level.
  const std::size_t last = n - 1;
  Eigen::Index end = 0;
  for (Eigen::Index c = 1; c < tau[last].size(); ++c) {
    if (tau[last](c) > tau[last](end) + kTieTol ||
        (tau[last](c) >= tau[last](end) - kTieTol && prefix(last, c) < prefix(last, end))) {
      end = c;
    }
  }
  const std::vector<Eigen::Index> states = prefix(last, end);

  StrategyPath path;
  Eigen::Index parent_state = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& level = spec.level(i);
    const Cell cell = unflat(states[i], static_cast<Eigen::Index>(level.col_actions.size()));
    path.choices.push_back(make_choice(level, cell, cond[i](parent_state, states[i])));
    parent_state = states[i];
  }
  path.joint_prob = tau[last](end);
  return path;
}

double joint_probability(const GutSpec& spec, const EngagementObs& context, const StrategyPath& path, double tol) {
  if (path.choices.size() != spec.depth()) {
    throw std::invalid_argument("path length does not match the tree depth");
  }
  double joint = 1.0;
  std::optional<Cell> parent;
  for (std::size_t i = 0; i < spec.depth(); ++i) {
    const auto& level = spec.level(i);
    const Cell cell = path.choices[i].cell;
    if (cell.row < 0 || cell.col < 0 || cell.row >= static_cast<Eigen::Index>(level.row_actions.size()) ||
        cell.col >= static_cast<Eigen::Index>(level.col_actions.size())) {
      throw std::invalid_argument("path cell outside the level's action space");
    }
    const ComputationUnit unit = evaluate_unit(level, context, 1.0, parent, tol);
    joint = joint * outcome_conditionals(unit.solution)(cell.row, cell.col);
    parent = cell;
  }
  return joint;
}

GutSpec explorer_monster_spec(const WinCoeffs& win, const EnergyCoeffs& energy, const HpCoeffs& hp,
                              const CellModifiers& mod) {
  std::vector<LevelSpec> levels;
  levels.push_back({1, level1_explorer_actions(), level1_monster_actions(),
                    [win, mod](const EngagementObs& obs, const std::optional<Cell>&) {
                      return payoff_level1(obs, win, mod);
                    }});
  levels.push_back({2, level2_explorer_actions(), level2_monster_actions(),
                    [energy, mod](const EngagementObs& obs, const std::optional<Cell>&) {
                      return payoff_level2(obs, energy, mod);
                    }});
  levels.push_back({3, level3_explorer_actions(), level3_monster_actions(),
                    [hp](const EngagementObs& obs, const std::optional<Cell>&) { return payoff_level3(obs, hp); }});
  return GutSpec(std::move(levels));
}

}  // namespace gut
