#include "gut/world.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gut {

namespace {

Vec2 unit_or_x(const Vec2& v) {
  const double len = v.norm();
  return len > 0.0 ? Vec2(v / len) : Vec2(Vec2::UnitX());
}

Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

// k points on a circle of the given radius, the first one along heading.
std::vector<Vec2> ring(int k, const Vec2& anchor, double radius, const Vec2& heading) {
  const double base = std::atan2(heading.y(), heading.x());
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double a = base + 2.0 * std::numbers::pi * i / k;
    out.emplace_back(anchor + radius * Vec2(std::cos(a), std::sin(a)));
  }
  return out;
}

}  // namespace

const char* to_string(FormationShape s) {
  switch (s) {
    case FormationShape::Patrol: return "patrol";
    case FormationShape::Triangle: return "triangle";
    case FormationShape::RegularPolygon: return "regular-polygon";
    case FormationShape::Circle: return "circle";
  }
  return "?";
}

std::vector<Vec2> formation_targets(FormationShape shape, int members, const Vec2& anchor, double spacing,
                                    const Vec2& heading) {
  if (members < 1) throw std::invalid_argument("a formation needs at least one member");
  if (!(spacing > 0.0)) throw std::invalid_argument("formation spacing must be positive");
  const Vec2 h = unit_or_x(heading);
  const Vec2 side = perp(h);
  if (members == 1) return {anchor};

  switch (shape) {
    case FormationShape::Patrol: {
      std::vector<Vec2> out;
      for (int i = 0; i < members; ++i) out.emplace_back(anchor + (i - (members - 1) / 2.0) * spacing * side);
      return out;
    }
    case FormationShape::Triangle: {
      // Apex first, then rows of growing width behind it.
      std::vector<Vec2> offsets;
      for (int row = 0; static_cast<int>(offsets.size()) < members; ++row) {
        for (int j = 0; j <= row && static_cast<int>(offsets.size()) < members; ++j) {
          offsets.emplace_back(-row * spacing * h + (j - row / 2.0) * spacing * side);
        }
      }
      Vec2 mean = Vec2::Zero();
      for (const auto& o : offsets) mean += o;
      mean /= members;
      std::vector<Vec2> out;
      for (const auto& o : offsets) out.emplace_back(anchor + o - mean);
      return out;
    }
    case FormationShape::RegularPolygon: {
      if (members == 2) return {anchor + 0.5 * spacing * side, anchor - 0.5 * spacing * side};
      const double circumradius = spacing / (2.0 * std::sin(std::numbers::pi / members));
      return ring(members, anchor, circumradius, h);
    }
    case FormationShape::Circle: {
      const double radius = std::max(spacing * members / (2.0 * std::numbers::pi), spacing);
      return ring(members, anchor, radius, h);
    }
  }
  return {anchor};
}

}  // namespace gut
