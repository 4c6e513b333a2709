#include "gut/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gut {

namespace {

bool can_act(const AgentState& a) { return a.alive && a.hp > 0.0 && a.energy > 0.0; }

Side opponent(Side s) { return s == Side::Explorer ? Side::Monster : Side::Explorer; }

void clamp_outside_obstacles(const WorldState& world, Vec2& p) {
  for (const auto& ob : world.obstacles) {
    const Vec2 rel = p - ob.center;
    const double dist = rel.norm();
    if (dist < ob.radius) {
      const Vec2 out = dist > 0.0 ? Vec2(rel / dist) : Vec2(Vec2::UnitX());
      p = ob.center + out * (ob.radius + 1e-9);
    }
  }
}

}  // namespace

const AgentState* WorldState::find(int id) const {
  for (const auto& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

void WorldState::validate() const {
  if (!(params.comm_radius > params.sensing_radius)) {
    throw std::invalid_argument("comm_radius must exceed sensing_radius");
  }
  if (!(params.arena_size > 0.0) || !(params.speed > 0.0) || !(params.attack_range >= 0.0) ||
      !(params.treasure_radius >= 0.0) || !(params.sensing_radius >= 0.0)) {
    throw std::invalid_argument("world geometry parameters out of range");
  }
  if (params.tick_cap < 1 || params.strike_rate < 0) throw std::invalid_argument("tick_cap or strike_rate out of range");
  for (double c : {costs.move_cost, costs.comm_cost, costs.explorer_attack_energy, costs.explorer_attacked_hp,
                   costs.monster_attack_energy, costs.monster_attacked_hp}) {
    if (!(c >= 0.0)) throw std::invalid_argument("cost table entries must be non-negative");
  }
  for (const auto& ob : obstacles)
    if (!(ob.radius > 0.0)) throw std::invalid_argument("obstacle radius must be positive");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    if (a.hp < 0.0 || a.hp > 100.0 || a.energy < 0.0 || a.energy > 100.0) {
      throw std::invalid_argument("agent resources outside [0, 100]");
    }
    for (std::size_t j = 0; j < i; ++j)
      if (agents[j].id == a.id) throw std::invalid_argument("duplicate agent id");
  }
  if (!ledger.empty() && ledger.size() != agents.size()) throw std::invalid_argument("ledger size mismatch");
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Ongoing: return "ongoing";
    case Outcome::ExplorersWin: return "explorers";
    case Outcome::MonstersWin: return "monsters";
  }
  return "?";
}

Outcome outcome(const WorldState& world) {
  bool any_explorer = false;
  const double r2 = world.params.treasure_radius * world.params.treasure_radius;
  for (const auto& a : world.agents) {
    if (a.side != Side::Explorer || !a.alive) continue;
    any_explorer = true;
    if ((a.position - world.treasure).squaredNorm() <= r2) return Outcome::ExplorersWin;
  }
  if (!any_explorer) return Outcome::MonstersWin;
  if (world.tick >= world.params.tick_cap) return Outcome::MonstersWin;
  return Outcome::Ongoing;
}

std::vector<int> living(const WorldState& world, Side side) {
  std::vector<int> out;
  for (std::size_t i = 0; i < world.agents.size(); ++i)
    if (world.agents[i].alive && world.agents[i].side == side) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> sensed_by(const WorldState& world, int observer_idx, Side side) {
  const auto& me = world.agents.at(static_cast<std::size_t>(observer_idx));
  const double r2 = world.params.sensing_radius * world.params.sensing_radius;
  std::vector<int> out;
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    if (static_cast<int>(i) == observer_idx) continue;
    const auto& a = world.agents[i];
    if (a.alive && a.side == side && (a.position - me.position).squaredNorm() <= r2) out.push_back(static_cast<int>(i));
  }
  return out;
}

void step(WorldState& world, const PolicySet& policies, std::mt19937_64& rng) {
  const std::size_t count = world.agents.size();
  if (world.ledger.size() != count) world.ledger.assign(count, AgentLedger{});
  if (world.stalls.size() != count) world.stalls.assign(count, 0);
  const WorldParams& P = world.params;

  // Decisions read a frozen copy of the world.
  std::vector<Intent> intents(count);
  {
    const WorldState snapshot = world;
    if (policies.explorers) policies.explorers->decide(snapshot, intents, rng);
    if (policies.monsters) policies.monsters->decide(snapshot, intents, rng);
  }

  std::vector<std::int64_t> comm(count, 0), moved(count, 0), strikes(count, 0);
  std::vector<std::int64_t> hits(count, 0);

  for (std::size_t i = 0; i < count; ++i)
    if (can_act(world.agents[i]) && world.agents[i].side == Side::Explorer && intents[i].communicates) comm[i] = 1;

  // Movement. Collision flags first so every agent sees its peers' state.
  std::vector<std::optional<Vec2>> collision(count);
  std::vector<bool> wants_move(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& a = world.agents[i];
    if (!can_act(a) || !intents[i].goal) continue;
    const double dist = (*intents[i].goal - a.position).norm();
    if (dist <= intents[i].stand_off || dist == 0.0) continue;
    wants_move[i] = true;
    collision[i] = nearest_collision_point(world, a.position, *intents[i].goal, P.speed + 0.5);
  }

  std::vector<Vec2> next(count);
  for (std::size_t i = 0; i < count; ++i) next[i] = world.agents[i].position;

  for (std::size_t i = 0; i < count; ++i) {
    if (!wants_move[i]) {
      world.stalls[i] = 0;
      continue;
    }
    const auto& a = world.agents[i];
    const Vec2 goal = *intents[i].goal;
    const double remaining = (goal - a.position).norm() - intents[i].stand_off;
    const double reach = a.side == Side::Explorer ? P.comm_radius : P.sensing_radius;

    std::vector<PeerInfo> peers;
    if (collision[i]) {
      for (std::size_t j = 0; j < count; ++j) {
        if (j == i || !world.agents[j].alive || world.agents[j].side != a.side) continue;
        if ((world.agents[j].position - a.position).norm() > reach) continue;
        peers.push_back({world.agents[j].position, collision[j].has_value()});
      }
    }
    EdgeMove mv = adapt_the_edge(a, collision[i], peers, goal, std::min(P.speed, remaining));
    if (collision[i] && mv.distance == 0.0) {
      // Tied sides: after a short wait take the tangent that closes on the goal.
      if (++world.stalls[i] >= P.stall_patience) {
        const Vec2 to_goal = goal - a.position;
        mv.direction = mv.direction.dot(to_goal) >= 0.0 ? mv.direction : Vec2(-mv.direction);
        mv.distance = P.speed;
      }
    } else {
      world.stalls[i] = 0;
    }
    if (mv.distance <= 0.0) continue;

    Vec2 p = a.position + mv.direction * mv.distance;
    p = p.cwiseMax(0.0).cwiseMin(P.arena_size);
    clamp_outside_obstacles(world, p);
    if ((p - a.position).norm() > 0.0) {
      next[i] = p;
      moved[i] = 1;
    }
  }
  for (std::size_t i = 0; i < count; ++i) world.agents[i].position = next[i];

  // Attacks resolve simultaneously on post-move positions.
  const double range2 = P.attack_range * P.attack_range;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& a = world.agents[i];
    if (!can_act(a) || P.strike_rate == 0) continue;
    const Side foe = opponent(a.side);
    int victim = -1;
    if (intents[i].target) {
      for (std::size_t j = 0; j < count; ++j) {
        const auto& b = world.agents[j];
        if (b.id == *intents[i].target && b.alive && b.side == foe &&
            (b.position - a.position).squaredNorm() <= range2) {
          victim = static_cast<int>(j);
        }
      }
    }
    if (victim < 0 && intents[i].strike_nearest_fallback) {
      double best = range2;
      for (std::size_t j = 0; j < count; ++j) {
        const auto& b = world.agents[j];
        if (!b.alive || b.side != foe) continue;
        const double d2 = (b.position - a.position).squaredNorm();
        if (d2 <= best && (victim < 0 || d2 < best)) {
          best = d2;
          victim = static_cast<int>(j);
        }
      }
    }
    if (victim < 0) continue;
    strikes[i] += P.strike_rate;
    hits[static_cast<std::size_t>(victim)] += P.strike_rate;
  }

  // Book every charge once.
  for (std::size_t i = 0; i < count; ++i) {
    auto& a = world.agents[i];
    auto& led = world.ledger[i];
    const double energy_charge = world.costs.move_cost * static_cast<double>(moved[i]) +
                                 world.costs.attack_energy(a.side) * static_cast<double>(strikes[i]) +
                                 world.costs.comm_cost * static_cast<double>(comm[i]);
    const double hp_charge = world.costs.attacked_hp(a.side) * static_cast<double>(hits[i]);
    const double energy_after = std::max(0.0, a.energy - energy_charge);
    const double hp_after = std::max(0.0, a.hp - hp_charge);
    led.energy_spent += a.energy - energy_after;
    led.hp_lost += a.hp - hp_after;
    led.moves += moved[i];
    led.strikes += strikes[i];
    led.comm_rounds += comm[i];
    led.hits_received += hits[i];
    a.energy = energy_after;
    a.hp = hp_after;
    if (a.alive) a.alive = a.hp > 0.0 && (a.energy > 0.0 || !P.strict_alive);
  }
  ++world.tick;
}

}  // namespace gut
