#include "gut/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gut {

namespace {

double draw_noise(const RegressionCoeffs& c, std::mt19937_64& rng) {
  if (!(c.noise_std >= 0.0)) throw std::invalid_argument("noise_std must be non-negative");
  if (c.noise_std == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, c.noise_std)(rng);
}

void check_regressors(double hp_uc, double hp_asc) {
  if (!(hp_uc >= 0.0) || !(hp_asc >= 0.0)) throw std::invalid_argument("HP regressors must be non-negative");
}

}  // namespace

const char* to_string(AdversaryClass c) {
  switch (c) {
    case AdversaryClass::NotAdversary: return "not-adversary";
    case AdversaryClass::Intentional: return "intentional";
    case AdversaryClass::Unintentional: return "unintentional";
  }
  return "?";
}

AdversaryClass classify(double max_need_alone, double max_need_with, double expected_opponent_need,
                        double opponent_current_need, double eq_tol) {
  if (!(max_need_alone > max_need_with)) return AdversaryClass::NotAdversary;
  if (std::abs(expected_opponent_need - opponent_current_need) > eq_tol) return AdversaryClass::Intentional;
  return AdversaryClass::Unintentional;
}

PredictedState predict_linear(double hp_uc, double hp_asc, const RegressionCoeffs& c, std::mt19937_64& rng) {
  check_regressors(hp_uc, hp_asc);
  PredictedState s;
  s.unit_attack_cost = hp_uc * c.beta_uc0 + draw_noise(c, rng);
  s.energy_level = std::clamp(100.0 - hp_asc * c.beta_asc0 + draw_noise(c, rng), 0.0, 100.0);
  return s;
}

PredictedState predict_poly(double hp_uc, double hp_asc, const RegressionCoeffs& c, std::mt19937_64& rng) {
  check_regressors(hp_uc, hp_asc);
  PredictedState s;
  s.unit_attack_cost = hp_uc * hp_uc * c.beta_uc2 + hp_uc * c.beta_uc1 + draw_noise(c, rng);
  s.energy_level =
      std::clamp(100.0 - hp_asc * hp_asc * c.beta_asc2 - hp_asc * c.beta_asc1 + draw_noise(c, rng), 0.0, 100.0);
  return s;
}

}  // namespace gut
