// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "oracles.hpp"

#include "gut/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

using namespace gut;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 20240501;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s %2d %s (%.1fs) %s\n", v.pass ? "PASS" : "FAIL", id, title, secs, v.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioConfig scenario(const std::string& name) { return load_scenario(fs::path(GUT_SCENARIO_DIR) / (name + ".json")); }

BatchMetrics batch(ScenarioConfig c, PolicyMode p, InfoMode info = InfoMode::Complete) {
  c.policy = p;
  c.info = info;
  return run_batch(c, 100, kMasterSeed);
}

Verdict solver_soundness() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = oracle::random_matrix(rng, 5, -10.0, 10.0);
    const auto s = solve(a);
    const double gap = oracle::exploitability(a, s.row_strategy, s.col_strategy);
    worst = std::max(worst, gap);
    if (!(gap <= 1e-6) || s.value < maxmin(a) || s.value > minmax(a)) ++bad;
  }
  return {bad == 0, fmt("violations=%d worst_exploitability=%.3g", bad, worst)};
}

Verdict saddle_oracle() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Eigen::Index> dim(1, 5);
  int mismatches = 0, with_saddle = 0;
  for (int t = 0; t < 1000; ++t) {
    // Alternate continuous and small-integer entries so saddles and ties occur.
    const auto a = t % 2 ? oracle::random_matrix(rng, 5, -10.0, 10.0)
                         : oracle::random_int_matrix(rng, dim(rng), dim(rng), -3, 3);
    const auto brute = oracle::all_saddles(a);
    const auto got = solve_pure(a);
    with_saddle += !brute.empty();
    const bool same = got ? (!brute.empty() && got->row == brute.front().row && got->col == brute.front().col &&
                             got->value == brute.front().value)
                          : brute.empty();
    mismatches += !same;
  }
  return {mismatches == 0, fmt("mismatches=%d matrices_with_saddle=%d", mismatches, with_saddle)};
}

Verdict map_oracle() {
  std::mt19937_64 rng(3);
  const EngagementObs ctx;
  int mismatches = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto spec = oracle::random_spec(rng);
    const auto brute = oracle::brute_force_map(spec, ctx);
    const auto got = map_assignment(spec, ctx);
    bool same = got.choices.size() == brute.cells.size();
    for (std::size_t i = 0; same && i < brute.cells.size(); ++i) same = got.choices[i].cell == brute.cells[i];
    const double err = std::abs(got.joint_prob - brute.joint);
    worst = std::max(worst, err);
    mismatches += !same || err > 1e-9;
  }
  return {mismatches == 0, fmt("mismatches=%d worst_joint_error=%.3g", mismatches, worst)};
}

Verdict utility_reduction() {
  std::mt19937_64 rng(4);
  int energy_out = 0, hp_out = 0;
  double worst_e = 0.0, worst_h = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto o = oracle::random_obs(rng);
    const auto ec = oracle::random_energy_coeffs(rng);
    const auto hc = oracle::random_hp_coeffs(rng);
    const auto e = expected_energy_distributional(o, ec, 100000, 5000 + t);
    const double ze = std::abs(e.mean - expected_energy(o, ec)) / e.std_error;
    const auto h = oracle::monte_carlo_hp(o, hc, 100000, 9000 + t);
    const double zh = std::abs(h.mean - expected_hp(o, hc)) / h.std_error;
    worst_e = std::max(worst_e, ze);
    worst_h = std::max(worst_h, zh);
    energy_out += ze > 3.0;
    hp_out += zh > 3.0;
  }
  return {energy_out == 0 && hp_out == 0,
          fmt("energy: outside=%d worst_z=%.2f; hp: outside=%d worst_z=%.2f", energy_out, worst_e, hp_out, worst_h)};
}

class Scripted : public Policy {
 public:
  explicit Scripted(std::function<void(const WorldState&, std::span<Intent>)> f) : f_(std::move(f)) {}
  void decide(const WorldState& w, std::span<Intent> in, std::mt19937_64&) override { f_(w, in); }

 private:
  std::function<void(const WorldState&, std::span<Intent>)> f_;
};

Verdict bookkeeping() {
  WorldState w;
  for (int i = 0; i < 5; ++i) {
    AgentState a;
    a.id = i;
    a.position = Vec2(10 + 2 * i, 10);
    w.agents.push_back(a);
  }
  for (int i = 0; i < 4; ++i) {
    AgentState a;
    a.id = 5 + i;
    a.side = Side::Monster;
    a.attack_power = 3.0;
    a.position = Vec2(30 + 2 * i, 22);
    w.agents.push_back(a);
  }
  Scripted ex([](const WorldState& s, std::span<Intent> in) {
    for (int i : living(s, Side::Explorer)) {
      auto& it = in[static_cast<std::size_t>(i)];
      it.goal = Vec2(31, 21);
      it.stand_off = 1.5;
      it.communicates = s.tick % 3 != 2;
      it.strike_nearest_fallback = s.tick % 2 == 0;
    }
  });
  Scripted mo([](const WorldState& s, std::span<Intent> in) {
    for (int i : living(s, Side::Monster)) {
      auto& it = in[static_cast<std::size_t>(i)];
      if (s.tick % 4 != 3) it.goal = Vec2(18, 14);
      it.stand_off = 1.0;
    }
  });
  std::mt19937_64 rng(5);
  long mismatches = 0, events = 0;
  for (int t = 0; t < 100; ++t) {
    const auto before = w.agents;
    const auto led = w.ledger.empty() ? std::vector<AgentLedger>(w.agents.size()) : w.ledger;
    step(w, {&ex, &mo}, rng);
    for (std::size_t i = 0; i < w.agents.size(); ++i) {
      const auto& a = w.agents[i];
      const bool e = a.side == Side::Explorer;
      const double mv = static_cast<double>(w.ledger[i].moves - led[i].moves);
      const double st = static_cast<double>(w.ledger[i].strikes - led[i].strikes);
      const double cm = static_cast<double>(w.ledger[i].comm_rounds - led[i].comm_rounds);
      const double hi = static_cast<double>(w.ledger[i].hits_received - led[i].hits_received);
      events += static_cast<long>(mv + st + cm + hi);
      const double energy = std::max(0.0, before[i].energy - (0.015 * mv + (e ? 0.01 : 0.03) * st + 0.006 * cm));
      const double hp = std::max(0.0, before[i].hp - (e ? 0.15 : 0.05) * hi);
      mismatches += a.energy != energy;
      mismatches += a.hp != hp;
    }
  }
  return {mismatches == 0 && events > 0, fmt("ticks=100 events=%ld mismatches=%ld", events, mismatches)};
}

Verdict table4() {
  const char* cells[] = {"20v30", "25v25", "30v20"};
  double rate[3][3];
  std::string detail;
  for (int c = 0; c < 3; ++c) {
    const auto cfg = scenario(cells[c]);
    const PolicyMode modes[] = {PolicyMode::Gut, PolicyMode::Qmix, PolicyMode::QmixGut};
    for (int p = 0; p < 3; ++p) rate[c][p] = batch(cfg, modes[p]).win_rate;
    detail += fmt("%s gut=%.2f qmix=%.2f qmix-gut=%.2f; ", cells[c], rate[c][0], rate[c][1], rate[c][2]);
  }
  const bool a = rate[0][0] >= rate[0][1] && rate[0][1] >= rate[0][2] && rate[0][0] - rate[0][2] >= 0.10 - 1e-12;
  const bool b = rate[0][0] <= rate[1][0] && rate[1][0] <= rate[2][0];
  const bool c = rate[2][0] >= 0.95 && rate[2][1] >= 0.95 && rate[2][2] >= 0.95;
  detail += fmt("(a)=%s (b)=%s (c)=%s", a ? "ok" : "no", b ? "ok" : "no", c ? "ok" : "no");
  return {a && b && c, detail};
}

Verdict table5_info() {
  const auto cfg = scenario("25v25");
  const auto full = batch(cfg, PolicyMode::Gut, InfoMode::Complete);
  const auto lin = batch(cfg, PolicyMode::Gut, InfoMode::Linear);
  const auto poly = batch(cfg, PolicyMode::Gut, InfoMode::Poly);
  const bool wins = full.win_rate >= lin.win_rate && lin.win_rate >= poly.win_rate;
  const bool cost = full.means.system_hp_cost <= lin.means.system_hp_cost &&
                    lin.means.system_hp_cost <= poly.means.system_hp_cost;
  return {wins && cost, fmt("win complete=%.2f linear=%.2f poly=%.2f; hp/win %.2f %.2f %.2f", full.win_rate,
                            lin.win_rate, poly.win_rate, full.means.system_hp_cost, lin.means.system_hp_cost,
                            poly.means.system_hp_cost)};
}

Verdict obstacles() {
  // The baseline is the same arena without obstacles and with the default
  // nearest-attack monsters; the isolated obstacle effect is reported too.
  const auto with = scenario("25v25-obstacles");
  auto without = with;
  without.obstacles.clear();
  without.monster_policy = MonsterPolicyMode::Nearest;
  auto open_qmix = with;
  open_qmix.obstacles.clear();
  const auto a = batch(with, PolicyMode::Gut);
  const auto b = batch(without, PolicyMode::Gut);
  const auto c = batch(open_qmix, PolicyMode::Gut);
  const bool ok = a.win_rate <= b.win_rate && a.means.system_energy_cost > b.means.system_energy_cost &&
                  a.means.system_hp_cost > b.means.system_hp_cost;
  return {ok, fmt("with: win=%.2f energy/win=%.2f hp/win=%.2f; without: win=%.2f energy/win=%.2f hp/win=%.2f; "
                  "open arena, qmix monsters: win=%.2f energy/win=%.2f hp/win=%.2f",
                  a.win_rate, a.means.system_energy_cost, a.means.system_hp_cost, b.win_rate,
                  b.means.system_energy_cost, b.means.system_hp_cost, c.win_rate, c.means.system_energy_cost,
                  c.means.system_hp_cost)};
}

Verdict determinism() {
  auto cfg = scenario("20v30");
  cfg.policy = PolicyMode::Qmix;
  const std::string a = csv_text(run_batch(cfg, 100, kMasterSeed));
  const std::string b = csv_text(run_batch(cfg, 100, kMasterSeed, 1));
  return {a == b, fmt("csv_bytes=%zu identical=%s", a.size(), a == b ? "yes" : "no")};
}

Verdict edge() {
  AgentState me;
  me.position = Vec2(0, 1);
  const Vec2 c(0, 0);
  const Vec2 goal(0, -10);
  auto peers = [](int left, int right) {
    std::vector<PeerInfo> p;
    for (int i = 0; i < left; ++i) p.push_back({Vec2(-1.0 - i, 1.0), false});
    for (int i = 0; i < right; ++i) p.push_back({Vec2(1.0 + i, 1.0), false});
    p.push_back({Vec2(-7, 0), true});  // colliding peers do not count
    return p;
  };
  const auto four_three = adapt_the_edge(me, c, peers(4, 3), goal, 1.0);
  const auto three_four = adapt_the_edge(me, c, peers(3, 4), goal, 1.0);
  const auto tie = adapt_the_edge(me, c, peers(3, 3), goal, 1.0);
  const auto free = adapt_the_edge(me, std::nullopt, {}, Vec2(3, 5), 1.0);
  const bool ok = four_three.direction == Vec2(-1, 0) && four_three.distance == 1.0 &&
                  three_four.direction == Vec2(1, 0) && three_four.distance == 1.0 && tie.distance == 0.0 &&
                  free.direction == Vec2(0.6, 0.8) && free.distance == 1.0;
  return {ok, "4v3 -> 4 side, 3v4 -> 4 side, 3v3 -> stop, no collision -> goal"};
}

}  // namespace

int main() {
  report(1, "solver soundness", solver_soundness);
  report(2, "saddle oracle equivalence", saddle_oracle);
  report(3, "MAP oracle equivalence", map_oracle);
  report(4, "utility reduction checks", utility_reduction);
  report(5, "bookkeeping exactness", bookkeeping);
  report(6, "win-rate ordering across force ratios", table4);
  report(7, "information-mode ordering", table5_info);
  report(8, "obstacle effect", obstacles);
  report(9, "batch determinism", determinism);
  report(10, "adapting the edge", edge);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
