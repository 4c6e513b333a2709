#include "gut/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <numbers>
#include <thread>

namespace gut {

namespace {

Vec2 sample_disc(const Vec2& center, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double a = 2.0 * std::numbers::pi * u(rng);
  return center + r * Vec2(std::cos(a), std::sin(a));
}

bool blocked(const WorldState& w, const Vec2& p) {
  for (const auto& ob : w.obstacles)
    if ((p - ob.center).norm() < ob.radius) return true;
  return false;
}

std::unique_ptr<Policy> explorer_policy(const ScenarioConfig& c, const PolicyConfig& pc) {
  switch (c.policy) {
    case PolicyMode::Gut: return std::make_unique<GutTeamPolicy>(pc);
    case PolicyMode::Qmix: return std::make_unique<QmixExplorerPolicy>(pc);
    case PolicyMode::QmixGut: return std::make_unique<QmixGutExplorerPolicy>(pc);
  }
  return nullptr;
}

std::unique_ptr<Policy> monster_policy(const ScenarioConfig& c, const PolicyConfig& pc) {
  if (c.monster_policy == MonsterPolicyMode::Qmix) return std::make_unique<QmixMonsterPolicy>(pc);
  return std::make_unique<NearestMonsterPolicy>();
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
  return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(trial_index)));
}

WorldState build_world(const ScenarioConfig& c, std::mt19937_64& rng) {
  WorldState w;
  w.params = c.world;
  w.costs = c.costs;
  w.treasure = c.treasure;
  w.obstacles = c.obstacles;

  const auto line = formation_targets(FormationShape::Patrol, c.explorer_count, c.spawn.explorer_start,
                                      c.world.formation_spacing, c.treasure - c.spawn.explorer_start);
  int id = 0;
  for (const Vec2& p : line) {
    AgentState a;
    a.id = id++;
    a.side = Side::Explorer;
    a.position = p.cwiseMax(0.0).cwiseMin(c.world.arena_size);
    a.attack_power = c.explorer_attack_power;
    w.agents.push_back(a);
  }
  for (int j = 0; j < c.monster_count; ++j) {
    Vec2 p = sample_disc(c.spawn.monster_center, c.spawn.monster_radius, rng).cwiseMax(0.0).cwiseMin(c.world.arena_size);
    for (int tries = 0; blocked(w, p) && tries < 100; ++tries)
      p = sample_disc(c.spawn.monster_center, c.spawn.monster_radius, rng).cwiseMax(0.0).cwiseMin(c.world.arena_size);
    AgentState a;
    a.id = id++;
    a.side = Side::Monster;
    a.position = p;
    a.attack_power = c.monster_attack_power;
    w.agents.push_back(a);
  }
  w.ledger.assign(w.agents.size(), AgentLedger{});
  w.stalls.assign(w.agents.size(), 0);
  w.validate();
  return w;
}

TrialMetrics measure(const WorldState& w, Outcome winner) {
  TrialMetrics m;
  m.winner = winner;
  m.ticks = w.tick;
  int explorers = 0;
  for (std::size_t i = 0; i < w.agents.size(); ++i) {
    const auto& a = w.agents[i];
    if (a.side == Side::Monster) {
      if (!a.alive) ++m.monsters_killed;
      continue;
    }
    ++explorers;
    if (!a.alive) ++m.explorers_lost;
    m.system_hp_cost += w.ledger[i].hp_lost;
    m.system_energy_cost += w.ledger[i].energy_spent;
  }
  m.explorer_avg_hp_cost = explorers > 0 ? m.system_hp_cost / explorers : 0.0;
  if (m.monsters_killed > 0) {
    m.explorers_lost_per_kill = static_cast<double>(m.explorers_lost) / m.monsters_killed;
    m.hp_cost_per_kill = m.system_hp_cost / m.monsters_killed;
  }
  return m;
}

TrialMetrics run_trial(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 spawn_rng(splitmix64(seed ^ 0x5350415755ULL));
  std::mt19937_64 step_rng(splitmix64(seed ^ 0x5354455053ULL));
  WorldState world = build_world(config, spawn_rng);

  PolicyConfig pc;
  pc.win = config.win;
  pc.energy = config.energy;
  pc.hp = config.hp;
  pc.modifiers = config.modifiers;
  pc.regression = config.regression;
  pc.gut_mode = config.gut_mode;
  pc.info = config.info;
  pc.qmix_threshold = config.qmix_threshold;
  pc.noise_seed = splitmix64(seed ^ 0x4e4f495345ULL);
  const auto explorers = explorer_policy(config, pc);
  const auto monsters = monster_policy(config, pc);
  const PolicySet policies{explorers.get(), monsters.get()};

  Outcome o = outcome(world);
  while (o == Outcome::Ongoing) {
    step(world, policies, step_rng);
    o = outcome(world);
  }
  TrialMetrics m = measure(world, o);
  m.seed = seed;
  return m;
}

BatchMetrics aggregate(std::vector<TrialMetrics> trials) {
  BatchMetrics b;
  b.trials = std::move(trials);
  int wins = 0;
  WinningMeans& s = b.means;
  for (const auto& t : b.trials) {
    if (!t.explorers_won()) continue;
    ++wins;
    s.ticks += t.ticks;
    s.explorer_avg_hp_cost += t.explorer_avg_hp_cost;
    s.explorers_lost_per_kill += t.explorers_lost_per_kill;
    s.hp_cost_per_kill += t.hp_cost_per_kill;
    s.system_energy_cost += t.system_energy_cost;
    s.system_hp_cost += t.system_hp_cost;
  }
  if (wins > 0) {
    for (double* v : {&s.ticks, &s.explorer_avg_hp_cost, &s.explorers_lost_per_kill, &s.hp_cost_per_kill,
                      &s.system_energy_cost, &s.system_hp_cost})
      *v /= wins;
  }
  b.win_rate = b.trials.empty() ? 0.0 : static_cast<double>(wins) / static_cast<double>(b.trials.size());
  return b;
}

BatchMetrics run_batch(const ScenarioConfig& config, int trials, std::uint64_t master_seed, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("a batch needs at least one trial");
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));

  std::vector<TrialMetrics> rows(static_cast<std::size_t>(trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) {
      try {
        rows[static_cast<std::size_t>(i)] = run_trial(config, trial_seed(master_seed, i));
        rows[static_cast<std::size_t>(i)].trial = i;
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return aggregate(std::move(rows));
}

std::string csv_text(const BatchMetrics& b) {
  std::string out =
      "trial,seed,winner,ticks,explorer_avg_hp_cost,explorers_lost_per_kill,hp_cost_per_kill,"
      "system_energy_cost,system_hp_cost\n";
  for (const auto& t : b.trials) {
    out += std::to_string(t.trial) + "," + std::to_string(t.seed) + "," + to_string(t.winner) + "," +
           std::to_string(t.ticks) + "," + fixed6(t.explorer_avg_hp_cost) + "," + fixed6(t.explorers_lost_per_kill) +
           "," + fixed6(t.hp_cost_per_kill) + "," + fixed6(t.system_energy_cost) + "," + fixed6(t.system_hp_cost) + "\n";
  }
  // Summary: win rate in the winner column, means over winning trials.
  const auto& s = b.means;
  out += "summary,," + fixed6(b.win_rate) + "," + fixed6(s.ticks) + "," + fixed6(s.explorer_avg_hp_cost) + "," +
         fixed6(s.explorers_lost_per_kill) + "," + fixed6(s.hp_cost_per_kill) + "," + fixed6(s.system_energy_cost) +
         "," + fixed6(s.system_hp_cost) + "\n";
  return out;
}

void write_csv(const BatchMetrics& batch, const std::filesystem::path& path) {
  if (path.empty()) throw std::runtime_error("cannot write CSV: empty output path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << csv_text(batch);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace gut
