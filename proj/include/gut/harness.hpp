#pragma once

// Scenario files, seeded trials and batches, metrics and CSV output.

#include "gut/world.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace gut {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PolicyMode { Gut, Qmix, QmixGut };
enum class MonsterPolicyMode { Nearest, Qmix };

const char* to_string(PolicyMode m);
const char* to_string(MonsterPolicyMode m);
PolicyMode parse_policy_mode(const std::string& s);
GutMode parse_gut_mode(const std::string& s);
InfoMode parse_info_mode(const std::string& s);
MonsterPolicyMode parse_monster_policy(const std::string& s);

/// Initial placement. Explorers start in a patrol line at explorer_start
/// facing the treasure; monsters are drawn uniformly from a disc.
struct SpawnConfig {
  Vec2 explorer_start = Vec2(10.0, 10.0);
  Vec2 monster_center = Vec2(70.0, 70.0);
  double monster_radius = 25.0;
};

struct ScenarioConfig {
  int schema_version = 1;
  std::string name;
  int explorer_count = 25;
  int monster_count = 25;
  std::vector<Obstacle> obstacles;
  Vec2 treasure = Vec2(90.0, 90.0);
  PolicyMode policy = PolicyMode::Gut;
  GutMode gut_mode = GutMode::Greedy;
  InfoMode info = InfoMode::Complete;
  MonsterPolicyMode monster_policy = MonsterPolicyMode::Nearest;
  WinCoeffs win;
  EnergyCoeffs energy;
  HpCoeffs hp;
  CellModifiers modifiers;
  RegressionCoeffs regression;
  double qmix_threshold = 0.5;
  WorldParams world;
  CostTable costs;
  double explorer_attack_power = 1.0;
  double monster_attack_power = 3.0;
  SpawnConfig spawn;

  /// Throws ScenarioError naming the offending field.
  void validate() const;
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct TrialMetrics {
  int trial = 0;
  std::uint64_t seed = 0;
  Outcome winner = Outcome::Ongoing;
  int ticks = 0;
  double explorer_avg_hp_cost = 0.0;
  double explorers_lost_per_kill = 0.0;
  double hp_cost_per_kill = 0.0;
  double system_energy_cost = 0.0;
  double system_hp_cost = 0.0;
  int monsters_killed = 0;
  int explorers_lost = 0;

  bool explorers_won() const { return winner == Outcome::ExplorersWin; }
  friend bool operator==(const TrialMetrics&, const TrialMetrics&) = default;
};

/// Means over winning trials; all zero when nothing was won.
struct WinningMeans {
  double ticks = 0.0;
  double explorer_avg_hp_cost = 0.0;
  double explorers_lost_per_kill = 0.0;
  double hp_cost_per_kill = 0.0;
  double system_energy_cost = 0.0;
  double system_hp_cost = 0.0;
  friend bool operator==(const WinningMeans&, const WinningMeans&) = default;
};

struct BatchMetrics {
  std::vector<TrialMetrics> trials;
  double win_rate = 0.0;
  WinningMeans means;
};

/// Initial world for a trial; monster positions come from rng.
WorldState build_world(const ScenarioConfig& config, std::mt19937_64& rng);

/// Metrics from the world's resource ledger.
TrialMetrics measure(const WorldState& world, Outcome winner);

TrialMetrics run_trial(const ScenarioConfig& config, std::uint64_t seed);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

/// Fold trial rows, given in trial order, into batch aggregates.
BatchMetrics aggregate(std::vector<TrialMetrics> trials);

/// threads == 0 picks the hardware concurrency.
BatchMetrics run_batch(const ScenarioConfig& config, int trials, std::uint64_t master_seed, unsigned threads = 0);

void write_csv(const BatchMetrics& batch, const std::filesystem::path& path);
std::string csv_text(const BatchMetrics& batch);

}  // namespace gut
