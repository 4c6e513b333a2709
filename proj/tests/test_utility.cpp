#include "doctest.h"
#include "oracles.hpp"

#include "gut/utility.hpp"

using namespace gut;

TEST_SUITE("utility") {

TEST_CASE("need_expectation") {
  CHECK(need_expectation({{1, 1}, {0.5, 0.5}}) == 1.0);
  CHECK(need_expectation({{}, {}}) == 0.0);
  CHECK(need_expectation({{2}, {1}}) == 2.0);
  CHECK(need_expectation({{2, 6}, {0.5, 0.25}}) * 2 == need_expectation({{4, 12}, {0.5, 0.25}}));
  CHECK_THROWS_AS(need_expectation({{1}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(need_expectation({{1}, {1.5}}), std::invalid_argument);
}

TEST_CASE("winning_probability examples") {
  EngagementObs o;
  o.n = 4;
  o.m = 4;
  CHECK(winning_probability(o, {}) == 1.0);
  o.m = 0;
  CHECK(winning_probability(o, {}) == 1.0);
  o.n = 5;
  o.m = 10;
  o.t_ev = 1, o.r_ev = 1, o.t_mv = 2, o.r_mv = 2;
  CHECK(winning_probability(o, {}) == doctest::Approx(0.25));

  o.n = 0;
  CHECK_THROWS_AS(winning_probability(o, {}), std::invalid_argument);
  o.n = 1;
  o.t_mv = o.r_mv = 0;
  CHECK_THROWS_AS(winning_probability(o, {}), std::invalid_argument);
}

TEST_CASE("winning_probability clamps and is monotone") {
  EngagementObs o;
  o.n = 2;
  o.m = 3;
  o.t_ev = 3;
  CHECK(winning_probability(o, {}, false) > 1.0);
  CHECK(winning_probability(o, {}, true) == 1.0);
  const double base = winning_probability(o, {}, false);
  auto up = [&](double EngagementObs::*field, double by) {
    EngagementObs p = o;
    p.*field += by;
    return winning_probability(p, {}, false);
  };
  CHECK(up(&EngagementObs::t_ev, 0.5) > base);
  CHECK(up(&EngagementObs::r_ev, 0.5) > base);
  CHECK(up(&EngagementObs::t_mv, 0.5) < base);
  CHECK(up(&EngagementObs::r_mv, 0.5) < base);
}

TEST_CASE("expected_energy examples") {
  EngagementObs o;
  o.n = 5, o.m = 3, o.d = 10, o.v = 2, o.f = 2, o.q = 1;
  EnergyCoeffs zero{0, 0, 0, 0, 0, 0, 0};
  CHECK(expected_energy(o, zero) == 0.0);
  EnergyCoeffs unit{0, 1, 1, 1, 1, 1, 1};
  CHECK(expected_energy(o, unit) == doctest::Approx(60.0));

  o.m = 5, o.f = 1, o.q = 1;
  CHECK(expected_energy(o, unit) == doctest::Approx(1.0 * 1.0 * 5 * 10 / 2));

  o.v = 0;
  CHECK_THROWS_AS(expected_energy(o, unit), std::invalid_argument);
}

TEST_CASE("expected_energy_distributional examples") {
  EngagementObs o;
  o.n = 5, o.m = 3, o.d = 10, o.v = 2, o.f = 2, o.q = 1;
  EnergyCoeffs unit{0, 1, 1, 1, 1, 1, 1};
  const auto est = expected_energy_distributional(o, unit, 100000, 42);
  CHECK(std::abs(est.mean - 60.0) <= 3.0 * est.std_error);

  EnergyCoeffs zero{0, 0, 0, 0, 0, 0, 0};
  CHECK(expected_energy_distributional(o, zero, 1000, 1).mean == 0.0);

  const auto again = expected_energy_distributional(o, unit, 100000, 42);
  CHECK(again.mean == est.mean);
  CHECK(again.std_error == est.std_error);
  CHECK_THROWS_AS(expected_energy_distributional(o, unit, 0, 1), std::invalid_argument);
}

TEST_CASE("expected_hp examples") {
  EngagementObs o;
  o.k = 2, o.g = 1, o.phi_m = 1, o.phi_e = 1, o.e_e = 10, o.e_m = 10;
  HpCoeffs c{0, 1, 1, 0.5, 0.5, 0.5, 0.5};
  CHECK(expected_hp(o, c) == doctest::Approx(10.0));

  o.k = 1;
  c.c0 = 4;
  CHECK(expected_hp(o, c) == doctest::Approx(4.0));

  HpCoeffs zero{0, 0, 0, 0, 0, 0, 0};
  CHECK(expected_hp(o, zero) == 0.0);
}

TEST_CASE("sampled HP exchange agrees with the closed form") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 5; ++t) {
    const auto o = oracle::random_obs(rng);
    const auto c = oracle::random_hp_coeffs(rng);
    const auto est = oracle::monte_carlo_hp(o, c, 100000, 1000 + t);
    CHECK(std::abs(est.mean - expected_hp(o, c)) <= 3.0 * est.std_error);
  }
}

TEST_CASE("payoff shapes and cell consistency") {
  EngagementObs o;
  o.n = 6, o.m = 4, o.d = 12, o.e_m_min = 40, o.e_m_max = 90, o.e_m = 70, o.e_e_min = 50, o.e_e = 80;
  const WinCoeffs w;
  const EnergyCoeffs e;
  const HpCoeffs h;
  const CellModifiers mod;
  const auto p1 = payoff_level1(o, w, mod);
  const auto p2 = payoff_level2(o, e, mod);
  const auto p3 = payoff_level3(o, h);
  CHECK(p1.rows() == 2);
  CHECK(p1.cols() == 2);
  CHECK(p2.rows() == 3);
  CHECK(p2.cols() == 3);
  CHECK(p3.rows() == 3);
  CHECK(p3.cols() == 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(p1(r, c) == winning_probability(level1_cell_obs(o, r, c, mod), w, true));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(p2(r, c) == -expected_energy(level2_cell_obs(o, r, c, mod), e));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) CHECK(p3(r, c) == expected_hp(level3_cell_obs(o, r, c), h));
  CHECK(payoff_level2(o, e, mod) == p2);
}

TEST_CASE("level-3 cells encode group splits") {
  EngagementObs o;
  o.n = 7, o.m = 5;
  CHECK(level3_cell_obs(o, 0, 0).k == 7);
  CHECK(level3_cell_obs(o, 1, 0).k == 4);
  CHECK(level3_cell_obs(o, 2, 0).k == 3);
  CHECK(level3_cell_obs(o, 0, 0).g == 1);
  CHECK(level3_cell_obs(o, 0, 1).g == 5);
}

TEST_CASE("symmetric engagement gives a constant level-1 matrix without modifiers") {
  EngagementObs o;
  o.n = o.m = 10;
  CellModifiers none{1.0, 1.0, 1.0, true};
  const auto p = payoff_level1(o, {}, none);
  CHECK((p.array() == p(0, 0)).all());
}

}
