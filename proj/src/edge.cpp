#include "gut/world.hpp"

#include <cmath>
#include <limits>

namespace gut {

EdgeMove adapt_the_edge(const AgentState& agent, const std::optional<Vec2>& nearest_collision,
                        std::span<const PeerInfo> peers, const Vec2& goal, double step) {
  EdgeMove move;
  if (!nearest_collision) {
    const Vec2 to_goal = goal - agent.position;
    if (to_goal.norm() > 0.0) {
      move.direction = to_goal.normalized();
      move.distance = step;
    }
    return move;
  }

  Vec2 normal = agent.position - *nearest_collision;
  if (normal.norm() == 0.0) normal = agent.position - goal;
  if (normal.norm() == 0.0) return move;
  normal.normalize();
  const Vec2 tangent(-normal.y(), normal.x());

  int ahead = 0;   // peers on the +tangent side of the normal line
  int behind = 0;
  for (const auto& p : peers) {
    if (p.colliding) continue;
    const double s = (p.position - *nearest_collision).dot(tangent);
    if (s > 0.0) ++ahead;
    else if (s < 0.0) ++behind;
  }
  move.direction = ahead >= behind ? tangent : Vec2(-tangent);
  move.distance = ahead == behind ? 0.0 : step;
  return move;
}

std::optional<Vec2> nearest_collision_point(const WorldState& world, const Vec2& position, const Vec2& goal,
                                            double lookahead) {
  const Vec2 to_goal = goal - position;
  const double len = to_goal.norm();
  if (len == 0.0) return std::nullopt;
  const Vec2 dir = to_goal / len;
  const double reach = std::min(lookahead, len);

  double first_entry = std::numeric_limits<double>::infinity();
  std::optional<Vec2> hit;
  for (const auto& ob : world.obstacles) {
    // Segment position + s*dir, s in [0, reach], against the disc.
    const Vec2 rel = position - ob.center;
    const double b = rel.dot(dir);
    const double c = rel.squaredNorm() - ob.radius * ob.radius;
    double s = 0.0;
    if (c <= 1e-9) {
      if (b >= 0.0) continue;  // on the rim and leaving
    } else {
      const double disc = b * b - c;
      if (disc < 0.0) continue;
      s = -b - std::sqrt(disc);
      if (s < 0.0 || s > reach) continue;
    }
    if (s < first_entry) {
      first_entry = s;
      const double rn = rel.norm();
      hit = rn > 0.0 ? Vec2(ob.center + ob.radius * rel / rn) : Vec2(ob.center - ob.radius * dir);
    }
  }
  return hit;
}

}  // namespace gut
