#include "gut/harness.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace gut {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ScenarioError("scenario field '" + field + "': " + why);
}

// Walks one JSON object, rejecting keys nobody asked about.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }
  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : j_.items())
      if (!known_.count(key)) fail(field(key), "unknown field");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) {
    known_.insert(key);
    return j_.contains(key);
  }
  const json& at(const std::string& key) const { return j_.at(key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    if (!at(key).is_number()) fail(field(key), "expected a number");
    out = at(key).get<double>();
  }
  void integer(const std::string& key, int& out) {
    if (!has(key)) return;
    if (!at(key).is_number_integer()) fail(field(key), "expected an integer");
    out = at(key).get<int>();
  }
  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    if (!at(key).is_boolean()) fail(field(key), "expected true or false");
    out = at(key).get<bool>();
  }
  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    if (!at(key).is_string()) fail(field(key), "expected a string");
    out = at(key).get<std::string>();
  }
  void point(const std::string& key, Vec2& out) {
    if (!has(key)) return;
    out = to_point(at(key), field(key));
  }
  template <class Enum, class Parse>
  void choice(const std::string& key, Enum& out, Parse parse) {
    std::string s;
    text(key, s);
    if (s.empty()) return;
    try {
      out = parse(s);
    } catch (const std::invalid_argument& e) {
      fail(field(key), e.what());
    }
  }

  static Vec2 to_point(const json& v, const std::string& name) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(name, "expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

void check(bool ok, const std::string& field, const std::string& why) {
  if (!ok) fail(field, why);
}

}  // namespace

const char* to_string(PolicyMode m) {
  switch (m) {
    case PolicyMode::Gut: return "gut";
    case PolicyMode::Qmix: return "qmix";
    case PolicyMode::QmixGut: return "qmix-gut";
  }
  return "?";
}

const char* to_string(MonsterPolicyMode m) { return m == MonsterPolicyMode::Nearest ? "nearest" : "qmix"; }

PolicyMode parse_policy_mode(const std::string& s) {
  if (s == "gut") return PolicyMode::Gut;
  if (s == "qmix") return PolicyMode::Qmix;
  if (s == "qmix-gut" || s == "qmix_gut") return PolicyMode::QmixGut;
  throw std::invalid_argument("unknown policy '" + s + "' (gut, qmix, qmix-gut)");
}

GutMode parse_gut_mode(const std::string& s) {
  if (s == "greedy") return GutMode::Greedy;
  if (s == "map") return GutMode::Map;
  throw std::invalid_argument("unknown gut mode '" + s + "' (greedy, map)");
}

InfoMode parse_info_mode(const std::string& s) {
  if (s == "complete") return InfoMode::Complete;
  if (s == "linear") return InfoMode::Linear;
  if (s == "poly") return InfoMode::Poly;
  throw std::invalid_argument("unknown info mode '" + s + "' (complete, linear, poly)");
}

MonsterPolicyMode parse_monster_policy(const std::string& s) {
  if (s == "nearest") return MonsterPolicyMode::Nearest;
  if (s == "qmix") return MonsterPolicyMode::Qmix;
  throw std::invalid_argument("unknown monster policy '" + s + "' (nearest, qmix)");
}

void ScenarioConfig::validate() const {
  check(schema_version == 1, "schema_version", "only version 1 is supported");
  check(explorer_count >= 1, "explorers", "must be at least 1");
  check(monster_count >= 0, "monsters", "must be non-negative");
  const double A = world.arena_size;
  check(A > 0.0, "world.arena_size", "must be positive");
  check(world.speed > 0.0, "world.speed", "must be positive");
  check(world.sensing_radius > 0.0, "world.sensing_radius", "must be positive");
  check(world.comm_radius > world.sensing_radius, "world.comm_radius", "must exceed world.sensing_radius");
  check(world.attack_range >= 0.0, "world.attack_range", "must be non-negative");
  check(world.treasure_radius >= 0.0, "world.treasure_radius", "must be non-negative");
  check(world.tick_cap >= 1, "tick_cap", "must be at least 1");
  check(world.strike_rate >= 0, "world.strike_rate", "must be non-negative");
  check(world.formation_spacing > 0.0, "world.formation_spacing", "must be positive");
  check(world.stall_patience >= 1, "world.stall_patience", "must be at least 1");
  auto inside = [A](const Vec2& p) { return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= A && p.y() <= A; };
  check(inside(treasure), "treasure", "outside the arena");
  check(inside(spawn.explorer_start), "spawn.explorer_start", "outside the arena");
  check(spawn.monster_radius >= 0.0, "spawn.monster_radius", "must be non-negative");
  for (std::size_t i = 0; i < obstacles.size(); ++i)
    check(obstacles[i].radius > 0.0, "obstacles[" + std::to_string(i) + "].radius", "must be positive");
  const std::pair<const char*, double> costs_list[] = {
      {"costs.move_cost", costs.move_cost},
      {"costs.comm_cost", costs.comm_cost},
      {"costs.explorer_attack_energy", costs.explorer_attack_energy},
      {"costs.explorer_attacked_hp", costs.explorer_attacked_hp},
      {"costs.monster_attack_energy", costs.monster_attack_energy},
      {"costs.monster_attacked_hp", costs.monster_attacked_hp}};
  for (const auto& [field, v] : costs_list) check(v >= 0.0, field, "must be non-negative");
  check(explorer_attack_power >= 0.0, "attack_power.explorer", "must be non-negative");
  check(monster_attack_power >= 0.0, "attack_power.monster", "must be non-negative");
  check(regression.noise_std >= 0.0, "coefficients.regression.noise_std", "must be non-negative");
  check(qmix_threshold >= 0.0 && qmix_threshold <= 1.0, "coefficients.qmix_threshold", "must lie in [0, 1]");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }

  ScenarioConfig c;
  {
    ObjectReader r(root, "");
    r.integer("schema_version", c.schema_version);
    r.text("name", c.name);
    r.integer("explorers", c.explorer_count);
    r.integer("monsters", c.monster_count);
    r.choice("policy", c.policy, parse_policy_mode);
    r.choice("gut_mode", c.gut_mode, parse_gut_mode);
    r.choice("info", c.info, parse_info_mode);
    r.choice("monster_policy", c.monster_policy, parse_monster_policy);
    r.point("treasure", c.treasure);
    r.integer("tick_cap", c.world.tick_cap);

    if (r.has("obstacles")) {
      const json& list = r.at("obstacles");
      if (!list.is_array()) fail("obstacles", "expected a list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        ObjectReader o(list[i], "obstacles[" + std::to_string(i) + "]");
        Obstacle ob;
        if (!o.has("center")) fail(o.field("center"), "required");
        o.point("center", ob.center);
        if (!o.has("radius")) fail(o.field("radius"), "required");
        o.number("radius", ob.radius);
        c.obstacles.push_back(ob);
      }
    }
    if (r.has("world")) {
      ObjectReader w(r.at("world"), "world");
      w.number("arena_size", c.world.arena_size);
      w.number("speed", c.world.speed);
      w.number("sensing_radius", c.world.sensing_radius);
      w.number("comm_radius", c.world.comm_radius);
      w.number("attack_range", c.world.attack_range);
      w.number("treasure_radius", c.world.treasure_radius);
      w.integer("strike_rate", c.world.strike_rate);
      w.number("formation_spacing", c.world.formation_spacing);
      w.boolean("strict_alive", c.world.strict_alive);
      w.integer("stall_patience", c.world.stall_patience);
    }
    if (r.has("costs")) {
      ObjectReader w(r.at("costs"), "costs");
      w.number("move_cost", c.costs.move_cost);
      w.number("comm_cost", c.costs.comm_cost);
      w.number("explorer_attack_energy", c.costs.explorer_attack_energy);
      w.number("explorer_attacked_hp", c.costs.explorer_attacked_hp);
      w.number("monster_attack_energy", c.costs.monster_attack_energy);
      w.number("monster_attacked_hp", c.costs.monster_attacked_hp);
    }
    if (r.has("attack_power")) {
      ObjectReader w(r.at("attack_power"), "attack_power");
      w.number("explorer", c.explorer_attack_power);
      w.number("monster", c.monster_attack_power);
    }
    if (r.has("spawn")) {
      ObjectReader w(r.at("spawn"), "spawn");
      w.point("explorer_start", c.spawn.explorer_start);
      w.point("monster_center", c.spawn.monster_center);
      w.number("monster_radius", c.spawn.monster_radius);
    }
    if (r.has("coefficients")) {
      ObjectReader k(r.at("coefficients"), "coefficients");
      k.number("qmix_threshold", c.qmix_threshold);
      if (k.has("win")) {
        ObjectReader w(k.at("win"), "coefficients.win");
        w.number("a1", c.win.a1);
        w.number("a2", c.win.a2);
        w.number("a3", c.win.a3);
        w.number("a4", c.win.a4);
        w.number("a5", c.win.a5);
      }
      if (k.has("energy")) {
        ObjectReader w(k.at("energy"), "coefficients.energy");
        w.number("b0", c.energy.b0);
        w.number("b1", c.energy.b1);
        w.number("b2", c.energy.b2);
        w.number("b3", c.energy.b3);
        w.number("b11", c.energy.b11);
        w.number("b12", c.energy.b12);
        w.number("b13", c.energy.b13);
      }
      if (k.has("hp")) {
        ObjectReader w(k.at("hp"), "coefficients.hp");
        w.number("c0", c.hp.c0);
        w.number("c1", c.hp.c1);
        w.number("rho", c.hp.rho);
        w.number("gamma_e", c.hp.gamma_e);
        w.number("gamma_m", c.hp.gamma_m);
        w.number("delta_e", c.hp.delta_e);
        w.number("delta_m", c.hp.delta_m);
      }
      if (k.has("modifiers")) {
        ObjectReader w(k.at("modifiers"), "coefficients.modifiers");
        w.number("attack_t", c.modifiers.attack_t);
        w.number("attack_r", c.modifiers.attack_r);
        w.number("nearest_distance", c.modifiers.nearest_distance);
        w.boolean("clamp_win", c.modifiers.clamp_win);
      }
      if (k.has("regression")) {
        ObjectReader w(k.at("regression"), "coefficients.regression");
        w.number("beta_uc0", c.regression.beta_uc0);
        w.number("beta_uc1", c.regression.beta_uc1);
        w.number("beta_uc2", c.regression.beta_uc2);
        w.number("beta_asc0", c.regression.beta_asc0);
        w.number("beta_asc1", c.regression.beta_asc1);
        w.number("beta_asc2", c.regression.beta_asc2);
        w.number("noise_std", c.regression.noise_std);
      }
    }
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ScenarioConfig c = parse_scenario(buf.str());
  if (c.name.empty()) c.name = path.stem().string();
  return c;
}

}  // namespace gut
