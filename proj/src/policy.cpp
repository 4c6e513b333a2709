#include "gut/world.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace gut {

namespace {

struct Ability {
  double t = 0.0;
  double r = 0.0;
};

// Attack and defend ability scale with current energy; attack power enters
// the attack side only.
Ability ability(const AgentState& a, const HpCoeffs& c) {
  const bool explorer = a.side == Side::Explorer;
  const double gamma = explorer ? c.gamma_e : c.gamma_m;
  const double delta = explorer ? c.delta_e : c.delta_m;
  return {gamma * a.attack_power * a.energy, delta * a.energy};
}

Ability ability_at(const AgentState& a, double energy, const HpCoeffs& c) {
  AgentState copy = a;
  copy.energy = energy;
  return ability(copy, c);
}

Vec2 centroid(const WorldState& w, std::span<const int> idx) {
  Vec2 c = Vec2::Zero();
  for (int i : idx) c += w.agents[static_cast<std::size_t>(i)].position;
  return idx.empty() ? c : Vec2(c / static_cast<double>(idx.size()));
}

std::vector<int> sorted_by_id(const WorldState& w, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return w.agents[static_cast<std::size_t>(a)].id < w.agents[static_cast<std::size_t>(b)].id;
  });
  return idx;
}

// Monsters seen by any of the observers, in agent order.
std::vector<int> union_sensed(const WorldState& w, std::span<const int> observers, Side side) {
  std::set<int> seen;
  for (int o : observers)
    for (int s : sensed_by(w, o, side)) seen.insert(s);
  return {seen.begin(), seen.end()};
}

// Observer plus its sensed teammates, and the opponents any of them sense.
std::pair<std::vector<int>, std::vector<int>> one_hop_view(const WorldState& w, int self) {
  const Side side = w.agents[static_cast<std::size_t>(self)].side;
  const Side foe = side == Side::Explorer ? Side::Monster : Side::Explorer;
  std::vector<int> own{self};
  for (int j : sensed_by(w, self, side)) own.push_back(j);
  return {own, union_sensed(w, own, foe)};
}

// Partial communication reaches only teammates within sensing range.
bool has_comm_partner(const WorldState& w, int self) {
  const auto& me = w.agents[static_cast<std::size_t>(self)];
  const double r2 = w.params.sensing_radius * w.params.sensing_radius;
  for (std::size_t j = 0; j < w.agents.size(); ++j) {
    const auto& b = w.agents[j];
    if (static_cast<int>(j) != self && b.alive && b.side == me.side && (b.position - me.position).squaredNorm() <= r2)
      return true;
  }
  return false;
}

// Ranking of candidate opponents for a targeting rule, best first; distance
// from `from` and then ids break ties.
std::vector<int> rank_targets(const WorldState& w, std::span<const int> candidates, TargetRule rule, const Vec2& from) {
  std::vector<int> out(candidates.begin(), candidates.end());
  auto dist = [&](int i) { return (w.agents[static_cast<std::size_t>(i)].position - from).squaredNorm(); };
  auto key = [&](int i) {
    const auto& a = w.agents[static_cast<std::size_t>(i)];
    switch (rule) {
      case TargetRule::Nearest: return (a.position - from).squaredNorm();
      case TargetRule::LowestAbility: return a.hp;
      case TargetRule::HighestAbility: return -a.attack_power * a.energy;
    }
    return 0.0;
  };
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    const double ka = key(a);
    const double kb = key(b);
    if (ka != kb) return ka < kb;
    if (dist(a) != dist(b)) return dist(a) < dist(b);
    return w.agents[static_cast<std::size_t>(a)].id < w.agents[static_cast<std::size_t>(b)].id;
  });
  return out;
}

// Contiguous split of members (already sorted by id) into `groups` chunks.
std::vector<std::vector<int>> split_groups(const std::vector<int>& members, int groups) {
  groups = std::max(1, std::min<int>(groups, static_cast<int>(members.size())));
  std::vector<std::vector<int>> out(static_cast<std::size_t>(groups));
  const std::size_t n = members.size();
  for (std::size_t i = 0; i < n; ++i) out[i * static_cast<std::size_t>(groups) / n].push_back(members[i]);
  return out;
}

Vec2 toward(const Vec2& from, const Vec2& to, double step) {
  const Vec2 d = to - from;
  const double len = d.norm();
  if (len <= step) return to;
  return from + d / len * step;
}

double pursue_distance(const WorldState& w) { return 0.8 * w.params.attack_range; }

void pursue(Intent& in, const WorldState& w, int target_idx) {
  const auto& t = w.agents[static_cast<std::size_t>(target_idx)];
  in.goal = t.position;
  in.stand_off = pursue_distance(w);
  in.target = t.id;
}

bool treasure_sensed(const WorldState& w, std::span<const int> observers) {
  const double r2 = w.params.sensing_radius * w.params.sensing_radius;
  for (int i : observers)
    if ((w.agents[static_cast<std::size_t>(i)].position - w.treasure).squaredNorm() <= r2) return true;
  return false;
}

std::vector<PerceivedAgent> perceive(const WorldState& w, std::span<const int> idx) {
  std::vector<PerceivedAgent> out;
  for (int i : idx) {
    const auto& a = w.agents[static_cast<std::size_t>(i)];
    out.push_back({a.id, a.position, a.hp});
  }
  return out;
}

int index_of(const WorldState& w, int id) {
  for (std::size_t i = 0; i < w.agents.size(); ++i)
    if (w.agents[i].id == id) return static_cast<int>(i);
  return -1;
}

}  // namespace

const char* to_string(GutMode m) { return m == GutMode::Greedy ? "greedy" : "map"; }

const char* to_string(InfoMode m) {
  switch (m) {
    case InfoMode::Complete: return "complete";
    case InfoMode::Linear: return "linear";
    case InfoMode::Poly: return "poly";
  }
  return "?";
}

EngagementObs team_observation(const WorldState& world, std::span<const int> explorer_idx,
                               std::span<const int> monster_idx, const PolicyConfig& cfg, std::mt19937_64& noise) {
  EngagementObs obs;
  obs.n = static_cast<int>(explorer_idx.size());
  obs.m = static_cast<int>(monster_idx.size());
  obs.k = obs.n;
  obs.g = obs.m;
  obs.v = world.params.speed;
  obs.f = world.costs.explorer_attack_energy;
  obs.q = world.costs.monster_attack_energy;
  obs.phi_e = obs.phi_m = 1.0;

  const Vec2 ce = centroid(world, explorer_idx);
  obs.d = monster_idx.empty() ? (ce - world.treasure).norm() : (ce - centroid(world, monster_idx)).norm();

  auto summarize = [](const std::vector<double>& e, double& mean, double& lo, double& hi) {
    if (e.empty()) return;
    mean = 0.0;
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (double x : e) {
      mean += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    mean /= static_cast<double>(e.size());
  };

  std::vector<double> ee;
  Ability ae;
  for (int i : explorer_idx) {
    const auto& a = world.agents[static_cast<std::size_t>(i)];
    ee.push_back(a.energy);
    const Ability ab = ability(a, cfg.hp);
    ae.t += ab.t;
    ae.r += ab.r;
  }
  summarize(ee, obs.e_e, obs.e_e_min, obs.e_e_max);
  if (obs.n > 0) {
    obs.t_ev = obs.t_e = ae.t / obs.n;
    obs.r_ev = obs.r_e = ae.r / obs.n;
  }

  // Monster energies: observed, or predicted from our own HP losses.
  std::vector<double> em;
  std::vector<double> unit_costs;
  if (cfg.info != InfoMode::Complete && !monster_idx.empty()) {
    double hp_total = 0.0;
    int explorers = 0;
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
      if (world.agents[i].side != Side::Explorer) continue;
      ++explorers;
      if (i < world.ledger.size()) hp_total += world.ledger[i].hp_lost;
    }
    const double hp_uc = explorers > 0 ? hp_total / explorers : 0.0;
    for (std::size_t j = 0; j < monster_idx.size(); ++j) {
      const PredictedState p = cfg.info == InfoMode::Linear ? predict_linear(hp_uc, hp_total, cfg.regression, noise)
                                                            : predict_poly(hp_uc, hp_total, cfg.regression, noise);
      em.push_back(p.energy_level);
      unit_costs.push_back(std::max(0.0, p.unit_attack_cost));
    }
    double q = 0.0;
    for (double u : unit_costs) q += u;
    obs.q = q / static_cast<double>(unit_costs.size());
  } else {
    for (int j : monster_idx) em.push_back(world.agents[static_cast<std::size_t>(j)].energy);
  }
  summarize(em, obs.e_m, obs.e_m_min, obs.e_m_max);

  Ability am;
  for (std::size_t j = 0; j < monster_idx.size(); ++j) {
    const Ability ab = ability_at(world.agents[static_cast<std::size_t>(monster_idx[j])], em[j], cfg.hp);
    am.t += ab.t;
    am.r += ab.r;
  }
  if (obs.m > 0) {
    obs.t_mv = obs.t_m = am.t / obs.m;
    obs.r_mv = obs.r_m = am.r / obs.m;
    // Opponents predicted (or observed) at zero energy offer no resistance.
    if (!(obs.t_mv + obs.r_mv > 0.0)) obs.t_mv = obs.t_m = obs.r_mv = obs.r_m = 1e-9;
  }
  return obs;
}

TeamDecision gut_policy(const EngagementObs& team_obs, const GutSpec& spec, GutMode mode) {
  TeamDecision out;
  if (team_obs.m == 0) return out;
  StrategyPath path = mode == GutMode::Greedy ? decide(spec, team_obs) : map_assignment(spec, team_obs);
  const auto& c = path.choices;
  if (!c.empty()) out.shape = c[0].cell.row == 0 ? FormationShape::Triangle : FormationShape::RegularPolygon;
  if (c.size() > 1) {
    out.rule = c[1].cell.row == 0   ? TargetRule::Nearest
               : c[1].cell.row == 1 ? TargetRule::LowestAbility
                                    : TargetRule::HighestAbility;
  }
  if (c.size() > 2) out.groups = static_cast<int>(c[2].cell.row) + 1;
  out.path = std::move(path);
  return out;
}

LocalDecision qmix_policy(const AgentState& agent, const EngagementObs& local,
                          std::span<const PerceivedAgent> opponents, const WinCoeffs& win, double threshold) {
  LocalDecision out;
  if (opponents.empty() || local.m == 0) return out;
  out.win_probability = winning_probability(local, win, true);
  if (out.win_probability < threshold) {
    out.action = LocalAction::Defend;
    return out;
  }
  out.action = LocalAction::Attack;
  const PerceivedAgent* best = &opponents.front();
  auto dist = [&](const PerceivedAgent& o) { return (o.position - agent.position).squaredNorm(); };
  for (const auto& o : opponents) {
    if (o.hp != best->hp) {
      if (o.hp < best->hp) best = &o;
    } else if (dist(o) != dist(*best)) {
      if (dist(o) < dist(*best)) best = &o;
    } else if (o.id < best->id) {
      best = &o;
    }
  }
  out.target = best->id;
  return out;
}

// ----------------------------------------------------------------- GUT team

GutTeamPolicy::GutTeamPolicy(PolicyConfig cfg)
    : cfg_(std::move(cfg)),
      spec_(explorer_monster_spec(cfg_.win, cfg_.energy, cfg_.hp, cfg_.modifiers)),
      noise_(cfg_.noise_seed) {}

const GutTeamPolicy::Plan& GutTeamPolicy::plan(const WorldState& snapshot, std::mt19937_64&) {
  const std::vector<int> explorers = sorted_by_id(snapshot, living(snapshot, Side::Explorer));
  const std::vector<int> monsters = union_sensed(snapshot, explorers, Side::Monster);
  const int in_view = static_cast<int>(monsters.size());

  bool retarget = false;
  if (!cached_ || cached_->monsters_in_view != in_view) {
    Plan p;
    p.monsters_in_view = in_view;
    if (!explorers.empty()) {
      const EngagementObs obs = team_observation(snapshot, explorers, monsters, cfg_, noise_);
      p.decision = gut_policy(obs, spec_, cfg_.gut_mode);
    }
    cached_ = std::move(p);
    ++recomputations_;
    retarget = true;
  } else {
    for (int id : cached_->targets)
      if (std::find_if(monsters.begin(), monsters.end(), [&](int j) {
            return snapshot.agents[static_cast<std::size_t>(j)].id == id;
          }) == monsters.end())
        retarget = true;
  }

  if (retarget) {
    cached_->targets.clear();
    if (!monsters.empty() && !explorers.empty()) {
      const auto groups = split_groups(explorers, cached_->decision.groups);
      const auto ranked = rank_targets(snapshot, monsters, cached_->decision.rule, centroid(snapshot, explorers));
      for (std::size_t g = 0; g < groups.size(); ++g)
        cached_->targets.push_back(snapshot.agents[static_cast<std::size_t>(ranked[g % ranked.size()])].id);
    }
  }
  return *cached_;
}

void GutTeamPolicy::decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) {
  const std::vector<int> explorers = sorted_by_id(snapshot, living(snapshot, Side::Explorer));
  if (explorers.empty()) return;
  const Plan& p = plan(snapshot, rng);
  const WorldParams& P = snapshot.params;
  for (int i : explorers) intents[static_cast<std::size_t>(i)].communicates = true;

  if (p.targets.empty()) {
    if (treasure_sensed(snapshot, explorers)) {
      for (int i : explorers) intents[static_cast<std::size_t>(i)].goal = snapshot.treasure;
      return;
    }
    const Vec2 c = centroid(snapshot, explorers);
    const Vec2 heading = snapshot.treasure - c;
    const auto slots = formation_targets(FormationShape::Patrol, static_cast<int>(explorers.size()),
                                         toward(c, snapshot.treasure, P.speed), P.formation_spacing, heading);
    for (std::size_t s = 0; s < explorers.size(); ++s) intents[static_cast<std::size_t>(explorers[s])].goal = slots[s];
    return;
  }

  const auto groups = split_groups(explorers, static_cast<int>(p.targets.size()));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int target = index_of(snapshot, p.targets[g]);
    const auto& members = groups[g];
    if (p.decision.shape == FormationShape::Triangle) {
      for (int i : members) pursue(intents[static_cast<std::size_t>(i)], snapshot, target);
      continue;
    }
    const Vec2 c = centroid(snapshot, members);
    const auto slots = formation_targets(p.decision.shape, static_cast<int>(members.size()),
                                         toward(c, snapshot.treasure, P.speed), P.formation_spacing,
                                         snapshot.treasure - c);
    for (std::size_t s = 0; s < members.size(); ++s) {
      auto& in = intents[static_cast<std::size_t>(members[s])];
      in.goal = slots[s];
      in.target = p.targets[g];
    }
  }
}

// --------------------------------------------------------------- baselines

void QmixExplorerPolicy::decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64& rng) {
  for (int i : living(snapshot, Side::Explorer)) {
    auto& in = intents[static_cast<std::size_t>(i)];
    in.communicates = has_comm_partner(snapshot, i);
    const auto [own, foes] = one_hop_view(snapshot, i);
    const EngagementObs local = team_observation(snapshot, own, foes, cfg_, rng);
    // Only counts travel between neighbours; targets come from own sensing.
    const auto mine = sensed_by(snapshot, i, Side::Monster);
    const auto seen = perceive(snapshot, mine.empty() ? foes : mine);
    const LocalDecision d = qmix_policy(snapshot.agents[static_cast<std::size_t>(i)], local, seen, cfg_.win, cfg_.qmix_threshold);
    switch (d.action) {
      case LocalAction::Advance: in.goal = snapshot.treasure; break;
      case LocalAction::Attack: pursue(in, snapshot, index_of(snapshot, *d.target)); break;
      case LocalAction::Defend:
        // Hold formation: close ranks on the sensed teammates.
        in.goal = centroid(snapshot, own);
        in.stand_off = snapshot.params.formation_spacing;
        break;
    }
  }
}

QmixGutExplorerPolicy::QmixGutExplorerPolicy(PolicyConfig cfg)
    : cfg_(std::move(cfg)),
      spec_(explorer_monster_spec(cfg_.win, cfg_.energy, cfg_.hp, cfg_.modifiers)),
      noise_(cfg_.noise_seed) {}

void QmixGutExplorerPolicy::decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64&) {
  for (int i : living(snapshot, Side::Explorer)) {
    auto& in = intents[static_cast<std::size_t>(i)];
    const auto& me = snapshot.agents[static_cast<std::size_t>(i)];
    in.communicates = has_comm_partner(snapshot, i);
    const auto [own, foes] = one_hop_view(snapshot, i);
    auto& cached = cache_[me.id];
    if (cached.monsters_in_view != static_cast<int>(foes.size())) {
      cached.decision = gut_policy(team_observation(snapshot, own, foes, cfg_, noise_), spec_, cfg_.gut_mode);
      cached.monsters_in_view = static_cast<int>(foes.size());
    }
    if (foes.empty()) {
      in.goal = snapshot.treasure;
      continue;
    }
    // No agreement on a target: each explorer applies the rule from where it
    // stands, over what it senses itself when it senses anything.
    const auto mine = sensed_by(snapshot, i, Side::Monster);
    const int target = rank_targets(snapshot, mine.empty() ? foes : mine, cached.decision.rule, me.position).front();
    if (cached.decision.shape == FormationShape::Triangle) {
      pursue(in, snapshot, target);
    } else {
      in.goal = snapshot.treasure;
      in.target = snapshot.agents[static_cast<std::size_t>(target)].id;
    }
  }
}

void NearestMonsterPolicy::decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64&) {
  for (int i : living(snapshot, Side::Monster)) {
    const auto prey = sensed_by(snapshot, i, Side::Explorer);
    if (prey.empty()) continue;
    const auto ranked = rank_targets(snapshot, prey, TargetRule::Nearest, snapshot.agents[static_cast<std::size_t>(i)].position);
    pursue(intents[static_cast<std::size_t>(i)], snapshot, ranked.front());
  }
}

void QmixMonsterPolicy::decide(const WorldState& snapshot, std::span<Intent> intents, std::mt19937_64&) {
  for (int i : living(snapshot, Side::Monster)) {
    const auto [own, foes] = one_hop_view(snapshot, i);
    if (foes.empty()) continue;
    // Seen from the monsters' side: they are the numerator.
    EngagementObs local;
    local.n = static_cast<int>(own.size());
    local.m = static_cast<int>(foes.size());
    Ability mine;
    Ability theirs;
    for (int j : own) {
      const Ability a = ability(snapshot.agents[static_cast<std::size_t>(j)], cfg_.hp);
      mine.t += a.t;
      mine.r += a.r;
    }
    for (int j : foes) {
      const Ability a = ability(snapshot.agents[static_cast<std::size_t>(j)], cfg_.hp);
      theirs.t += a.t;
      theirs.r += a.r;
    }
    local.t_ev = mine.t / local.n;
    local.r_ev = mine.r / local.n;
    local.t_mv = theirs.t / local.m;
    local.r_mv = theirs.r / local.m;
    const auto seen = perceive(snapshot, foes);
    const LocalDecision d = qmix_policy(snapshot.agents[static_cast<std::size_t>(i)], local, seen, cfg_.win, cfg_.qmix_threshold);
    if (d.action == LocalAction::Attack) pursue(intents[static_cast<std::size_t>(i)], snapshot, index_of(snapshot, *d.target));
  }
}

}  // namespace gut
