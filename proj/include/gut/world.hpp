#pragma once

// Discrete-time Explorers-and-Monsters arena.
//
// Each tick: communication costs, policy decisions on a frozen snapshot,
// movement (obstacle-adjusted), simultaneous attacks, deaths. All resource
// costs are flat points on the 0-100 scale and are booked once per tick so
// the per-agent ledger is exact.

#include "gut/adversary.hpp"
#include "gut/tree.hpp"
#include "gut/utility.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gut {

using Vec2 = Eigen::Vector2d;

enum class Side { Explorer, Monster };

struct AgentState {
  int id = 0;
  Side side = Side::Explorer;
  Vec2 position = Vec2::Zero();
  double hp = 100.0;
  double energy = 100.0;
  double attack_power = 1.0;  // attack capability in the ability model
  bool alive = true;
};

struct Obstacle {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
};

struct CostTable {
  double move_cost = 0.015;
  double comm_cost = 0.006;
  double explorer_attack_energy = 0.01;
  double explorer_attacked_hp = 0.15;
  double monster_attack_energy = 0.03;
  double monster_attacked_hp = 0.05;

  double attack_energy(Side s) const { return s == Side::Explorer ? explorer_attack_energy : monster_attack_energy; }
  double attacked_hp(Side s) const { return s == Side::Explorer ? explorer_attacked_hp : monster_attacked_hp; }
};

struct WorldParams {
  double arena_size = 100.0;
  double speed = 1.0;
  double sensing_radius = 15.0;
  double comm_radius = 25.0;
  double attack_range = 3.0;
  double treasure_radius = 2.0;
  int tick_cap = 5000;
  int strike_rate = 1;  // strikes per tick per unit of attack power
  double formation_spacing = 2.0;
  bool strict_alive = true;  // energy exhaustion is fatal
  int stall_patience = 3;
};

/// Cumulative resource bookkeeping for one agent.
struct AgentLedger {
  double energy_spent = 0.0;
  double hp_lost = 0.0;
  std::int64_t moves = 0;
  std::int64_t strikes = 0;
  std::int64_t comm_rounds = 0;
  std::int64_t hits_received = 0;
};

struct WorldState {
  std::vector<AgentState> agents;
  std::vector<Obstacle> obstacles;
  Vec2 treasure = Vec2(90.0, 90.0);
  int tick = 0;
  CostTable costs;
  WorldParams params;
  std::vector<AgentLedger> ledger;  // parallel to agents
  std::vector<int> stalls;          // consecutive zero-distance edge moves

  const AgentState* find(int id) const;
  void validate() const;
};

enum class Outcome { Ongoing, ExplorersWin, MonstersWin };
const char* to_string(Outcome o);

Outcome outcome(const WorldState& world);

// ---------------------------------------------------------------- formations

enum class FormationShape { Patrol, Triangle, RegularPolygon, Circle };
const char* to_string(FormationShape s);

/// Formation slots centred on the anchor, slot i for the i-th member by id.
/// heading orients the line/wedge/polygon; it need not be normalized.
std::vector<Vec2> formation_targets(FormationShape shape, int members, const Vec2& anchor, double spacing,
                                    const Vec2& heading = Vec2::UnitX());

// -------------------------------------------------------- adapting the edge

struct PeerInfo {
  Vec2 position = Vec2::Zero();
  bool colliding = false;
};

struct EdgeMove {
  Vec2 direction = Vec2::Zero();
  double distance = 0.0;
};

/// Tangent-following step around the nearest collision point: take the
/// tangent side of the normal line through that point which holds more
/// non-colliding peers; stop on a tie. Without a collision, head for goal.
EdgeMove adapt_the_edge(const AgentState& agent, const std::optional<Vec2>& nearest_collision,
                        std::span<const PeerInfo> peers, const Vec2& goal, double step = 1.0);

/// Nearest boundary point of the first obstacle a straight step toward goal
/// would enter (with margin), if any.
std::optional<Vec2> nearest_collision_point(const WorldState& world, const Vec2& position, const Vec2& goal,
                                            double lookahead);

// ------------------------------------------------------------------ policies

/// What one agent wants to do this tick.
struct Intent {
  std::optional<Vec2> goal;
  double stand_off = 0.0;  // stop once within this distance of goal
  std::optional<int> target;
  bool strike_nearest_fallback = true;
  bool communicates = false;
};

class Policy {
 public:
  virtual ~Policy() = default;
  /// Fill intents (indexed like world.agents) for the side this policy drives.
  virtual void decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) = 0;
};

struct PolicySet {
  Policy* explorers = nullptr;
  Policy* monsters = nullptr;
};

enum class GutMode { Greedy, Map };
enum class InfoMode { Complete, Linear, Poly };

const char* to_string(GutMode m);
const char* to_string(InfoMode m);

/// Which monster a level-2 label points at.
enum class TargetRule { Nearest, LowestAbility, HighestAbility };

struct TeamDecision {
  FormationShape shape = FormationShape::Patrol;
  TargetRule rule = TargetRule::Nearest;
  int groups = 1;
  std::optional<StrategyPath> path;  // empty when no monsters were in view
};

/// Run the tree on a team observation and map its choices to a formation,
/// a targeting rule and a group count. With no monsters in view the team
/// patrols as one group.
TeamDecision gut_policy(const EngagementObs& team_obs, const GutSpec& spec, GutMode mode = GutMode::Greedy);

/// Greedy local rule: attack the hp-lowest perceived opponent when the local
/// winning probability reaches the threshold, otherwise hold position.
enum class LocalAction { Advance, Attack, Defend };
struct LocalDecision {
  LocalAction action = LocalAction::Advance;
  std::optional<int> target;
  double win_probability = 1.0;
};

struct PerceivedAgent {
  int id = 0;
  Vec2 position = Vec2::Zero();
  double hp = 100.0;
};

/// local.n and local.m are the locally observed counts; opponents lists the
/// perceived opposing agents. HP ties go to the opponent nearest the agent,
/// then to the lower id.
LocalDecision qmix_policy(const AgentState& agent, const EngagementObs& local,
                          std::span<const PerceivedAgent> opponents, const WinCoeffs& win, double threshold = 0.5);

/// Parameters shared by the policies when they turn world state into an
/// engagement observation.
struct PolicyConfig {
  WinCoeffs win;
  EnergyCoeffs energy;
  HpCoeffs hp;
  CellModifiers modifiers;
  RegressionCoeffs regression;
  GutMode gut_mode = GutMode::Greedy;
  InfoMode info = InfoMode::Complete;
  double qmix_threshold = 0.5;
  std::uint64_t noise_seed = 0;  // stream for regression noise
};

/// Team-level observation for the explorers over the given monsters.
/// With incomplete information the monsters' unit attack cost and energy are
/// predicted from the explorers' own HP losses, drawing noise from `noise`.
EngagementObs team_observation(const WorldState& world, std::span<const int> explorer_idx,
                               std::span<const int> monster_idx, const PolicyConfig& cfg, std::mt19937_64& noise);

/// Full cooperation and full communication: one shared tree decision,
/// recomputed only when the number of monsters in view changes.
class GutTeamPolicy : public Policy {
 public:
  explicit GutTeamPolicy(PolicyConfig cfg);
  void decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) override;

  struct Plan {
    TeamDecision decision;
    std::vector<int> targets;  // monster ids, one per group
    int monsters_in_view = 0;
  };
  /// Current plan for the snapshot (updates the cache).
  const Plan& plan(const WorldState& snapshot, std::mt19937_64& rng);
  std::int64_t recomputations() const { return recomputations_; }

 private:
  PolicyConfig cfg_;
  GutSpec spec_;
  std::mt19937_64 noise_;
  std::optional<Plan> cached_;
  std::int64_t recomputations_ = 0;
};

/// Partial cooperation and partial communication: each explorer applies the
/// local winning-rate rule over what it and its sensed neighbours perceive.
class QmixExplorerPolicy : public Policy {
 public:
  explicit QmixExplorerPolicy(PolicyConfig cfg) : cfg_(std::move(cfg)) {}
  void decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) override;

 private:
  PolicyConfig cfg_;
};

/// No cooperation, partial communication: each explorer runs the tree on
/// its one-hop view but resolves the target on its own, so the team does
/// not agree on whom to attack.
class QmixGutExplorerPolicy : public Policy {
 public:
  explicit QmixGutExplorerPolicy(PolicyConfig cfg);
  void decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) override;

 private:
  struct Cached {
    int monsters_in_view = -1;
    TeamDecision decision;
  };
  PolicyConfig cfg_;
  GutSpec spec_;
  std::mt19937_64 noise_;
  std::map<int, Cached> cache_;
};

/// Self-interested monsters: chase and strike the nearest sensed explorer.
class NearestMonsterPolicy : public Policy {
 public:
  void decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) override;
};

/// Monsters applying the local winning-rate rule from their own side.
class QmixMonsterPolicy : public Policy {
 public:
  explicit QmixMonsterPolicy(PolicyConfig cfg) : cfg_(std::move(cfg)) {}
  void decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) override;

 private:
  PolicyConfig cfg_;
};

// ---------------------------------------------------------------- tick loop

void step(WorldState& world, const PolicySet& policies, std::mt19937_64& rng);

// Perception helpers shared by policies and tests.
std::vector<int> living(const WorldState& world, Side side);
std::vector<int> sensed_by(const WorldState& world, int observer_idx, Side side);

}  // namespace gut
