#pragma once

// Adversary classification and opponent-state prediction under incomplete
// information.

#include <random>

namespace gut {

enum class AdversaryClass { NotAdversary, Intentional, Unintentional };

const char* to_string(AdversaryClass c);

/// An adversary lowers the best achievable need; it is intentional when its
/// own expected need while facing us differs from its current need.
AdversaryClass classify(double max_need_alone, double max_need_with, double expected_opponent_need,
                        double opponent_current_need, double eq_tol = 1e-9);

struct RegressionCoeffs {
  double beta_uc0 = 0.08, beta_uc1 = 0.03, beta_uc2 = 0.0001;
  double beta_asc0 = 0.03, beta_asc1 = 0.0003, beta_asc2 = 0.00001;
  double noise_std = 1.0;
};

struct PredictedState {
  double unit_attack_cost = 0.0;  // E_uc
  double energy_level = 100.0;    // E_el, clamped to [0, 100]
};

/// hp_uc: unit HP cost of the observing side; hp_asc: its system HP cost.
PredictedState predict_linear(double hp_uc, double hp_asc, const RegressionCoeffs& c, std::mt19937_64& rng);
PredictedState predict_poly(double hp_uc, double hp_asc, const RegressionCoeffs& c, std::mt19937_64& rng);

}  // namespace gut
