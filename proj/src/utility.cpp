#include "gut/utility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gut {

namespace {

void check_counts(const EngagementObs& obs) {
  if (obs.n < 0 || obs.m < 0 || obs.k < 0 || obs.g < 0) {
    throw std::invalid_argument("engagement counts must be non-negative");
  }
}

double ratio_or_one(double part, double whole) { return whole > 0.0 ? part / whole : 1.0; }

// Poisson draw that tolerates a zero rate.
std::int64_t poisson(std::mt19937_64& rng, double rate) {
  if (rate <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(rate)(rng);
}

}  // namespace

double need_expectation(const NeedSpec& spec) {
  if (spec.weights.size() != spec.probabilities.size()) {
    throw std::invalid_argument("need weights and probabilities differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    const double p = spec.probabilities[i];
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("need probability outside [0, 1]");
    total += spec.weights[i] * p;
  }
  return total;
}

double winning_probability(const EngagementObs& obs, const WinCoeffs& c, bool clamp) {
  check_counts(obs);
  if (obs.n == 0) throw std::invalid_argument("winning probability needs n > 0");
  const double denom = c.a4 * obs.t_mv + c.a5 * obs.r_mv;
  if (!(denom > 0.0)) throw std::invalid_argument("winning probability denominator must be positive");
  const double base = c.a1 * (c.a2 * obs.t_ev + c.a3 * obs.r_ev) / denom;
  if (!(base >= 0.0)) throw std::invalid_argument("winning probability base must be non-negative");
  const double w = std::pow(base, static_cast<double>(obs.m) / static_cast<double>(obs.n));
  return clamp ? std::clamp(w, 0.0, 1.0) : w;
}

double expected_energy(const EngagementObs& obs, const EnergyCoeffs& c) {
  check_counts(obs);
  if (!(obs.v > 0.0)) throw std::invalid_argument("expected energy needs v > 0");
  const double n = obs.n;
  const double m = obs.m;
  return c.b0 + c.b1 * c.b11 * (n - m) * obs.d +
         c.b2 * c.b12 * n * m * (obs.f * obs.phi_m - obs.q * obs.phi_e) + c.b3 * c.b13 * n * obs.d / obs.v;
}

MonteCarloEstimate expected_energy_distributional(const EngagementObs& obs, const EnergyCoeffs& c,
                                                  std::int64_t samples, std::uint64_t rng_seed) {
  check_counts(obs);
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (!(obs.v > 0.0)) throw std::invalid_argument("expected energy needs v > 0");

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> walk(obs.d, 1.0);
  const double n = obs.n;
  const double m = obs.m;

  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const double x = walk(rng);
    const auto hits_by_explorers = poisson(rng, obs.lambda_m());
    const auto hits_by_monsters = poisson(rng, obs.lambda_e());
    const auto comm_rounds = poisson(rng, obs.d / obs.v);

    const double walking = c.b1 * (n - m) * (c.b11 * x);
    const double attacking = c.b2 * (n * c.b12 * static_cast<double>(hits_by_explorers) * obs.f -
                                     m * c.b12 * static_cast<double>(hits_by_monsters) * obs.q);
    const double talking = c.b3 * n * c.b13 * static_cast<double>(comm_rounds);
    const double sample = c.b0 + walking + attacking + talking;

    const double delta = sample - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (sample - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  if (samples > 1) {
    const double var = m2 / static_cast<double>(samples - 1);
    est.std_error = std::sqrt(var / static_cast<double>(samples));
  }
  return est;
}

double expected_hp(const EngagementObs& obs, const HpCoeffs& c) {
  check_counts(obs);
  const double dealt = obs.k * obs.phi_m * obs.e_e * (c.gamma_e + c.delta_e);
  const double received = obs.g * obs.phi_e * obs.e_m * (c.gamma_m + c.delta_m);
  return c.c0 + c.c1 * c.rho * (dealt - received);
}

EngagementObs level1_cell_obs(const EngagementObs& obs, Eigen::Index row, Eigen::Index col,
                              const CellModifiers& mod) {
  EngagementObs cell = obs;
  const bool explorers_attack = row == 0;
  const bool monsters_attack = col == 0;
  cell.t_ev *= explorers_attack ? mod.attack_t : mod.attack_r;
  cell.r_ev *= explorers_attack ? mod.attack_r : mod.attack_t;
  cell.t_mv *= monsters_attack ? mod.attack_t : mod.attack_r;
  cell.r_mv *= monsters_attack ? mod.attack_r : mod.attack_t;
  return cell;
}

EngagementObs level2_cell_obs(const EngagementObs& obs, Eigen::Index row, Eigen::Index col,
                              const CellModifiers& mod) {
  EngagementObs cell = obs;
  switch (row) {
    case 0: cell.d *= mod.nearest_distance; break;
    case 1: cell.f *= ratio_or_one(obs.e_m_min, obs.e_m); break;
    default: cell.f *= ratio_or_one(obs.e_m_max, obs.e_m); break;
  }
  switch (col) {
    case 0: cell.d *= mod.nearest_distance; break;
    case 1: cell.q *= ratio_or_one(obs.e_e_min, obs.e_e); break;
    default: cell.q *= ratio_or_one(obs.e_e_max, obs.e_e); break;
  }
  return cell;
}

EngagementObs level3_cell_obs(const EngagementObs& obs, Eigen::Index row, Eigen::Index col) {
  EngagementObs cell = obs;
  const int groups = static_cast<int>(row) + 1;
  cell.k = (obs.n + groups - 1) / groups;
  cell.g = col == 1 ? obs.m : 1;
  return cell;
}

PayoffMatrix payoff_level1(const EngagementObs& obs, const WinCoeffs& c, const CellModifiers& mod) {
  PayoffMatrix p(2, 2);
  for (Eigen::Index g = 0; g < 2; ++g)
    for (Eigen::Index k = 0; k < 2; ++k)
      p(g, k) = winning_probability(level1_cell_obs(obs, g, k, mod), c, mod.clamp_win);
  return p;
}

PayoffMatrix payoff_level2(const EngagementObs& obs, const EnergyCoeffs& c, const CellModifiers& mod) {
  PayoffMatrix p(3, 3);
  for (Eigen::Index g = 0; g < 3; ++g)
    for (Eigen::Index k = 0; k < 3; ++k) p(g, k) = -expected_energy(level2_cell_obs(obs, g, k, mod), c);
  return p;
}

PayoffMatrix payoff_level3(const EngagementObs& obs, const HpCoeffs& c) {
  PayoffMatrix p(3, 2);
  for (Eigen::Index g = 0; g < 3; ++g)
    for (Eigen::Index k = 0; k < 2; ++k) p(g, k) = expected_hp(level3_cell_obs(obs, g, k), c);
  return p;
}

}  // namespace gut
