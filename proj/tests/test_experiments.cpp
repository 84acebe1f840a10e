// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmuplink/config.hpp"
#include "mmuplink/experiments.hpp"
#include "mmuplink/report.hpp"

using namespace mmuplink;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.bs_count = 20;
  c.extent = {0.0, 0.0, 1.0, 1.0};
  c.trials = 24;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("code rate") {
  CHECK(code_rate(db_to_linear(3.0)) == doctest::Approx(1.3698).epsilon(1e-4));
  CHECK(code_rate(0.0) == 0.0);
  CHECK(code_rate(1.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(code_rate(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(code_rate(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("summary statistics") {
  const std::vector<double> eps{0.01, 0.05, 0.09};
  const OutageStats s = summarize(eps, 100.0, 1.3698);
  CHECK(s.n_trials == 3);
  CHECK(s.epsilon_bar == doctest::Approx(0.05));
  CHECK(s.epsilon_min == 0.01);
  CHECK(s.epsilon_max == 0.09);
  CHECK(s.std_error == doctest::Approx(0.04 / std::sqrt(3.0)));
  CHECK(s.half_width == doctest::Approx(1.959963984540054 * s.std_error));
  CHECK(s.throughput == 1.3698 * (1 - s.epsilon_bar));
  CHECK(s.ase == 100.0 * 1.3698 * (1 - s.epsilon_bar));
  CHECK(s.ase == doctest::Approx(130.131));

  const std::vector<double> one{0.2};
  CHECK(summarize(one, 1.0, 1.0).std_error == 0.0);
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
  std::vector<double> tiny(1 << 20, 0.1);
  CHECK(std::abs(pairwise_sum(tiny) - 0.1 * (1 << 20)) < 1e-8);
}

TEST_CASE("parallel_for visits every index once and forwards errors") {
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("x");
                               }),
                  std::runtime_error);
}

TEST_CASE("densified scenarios") {
  const RunConfig cfg = small_config();
  const Topology base = build_topology(cfg);
  const Scenario one = make_densified_scenario(base, cfg, 1.0);
  CHECK(one.mobiles == 20);
  CHECK(one.bs_per_mobile == doctest::Approx(1.0));
  REQUIRE(one.nominal_distance);
  CHECK(*one.nominal_distance == doctest::Approx(0.025));
  const Scenario quarter = make_densified_scenario(base, cfg, 0.25);
  CHECK(quarter.mobiles == 80);
  CHECK(*quarter.nominal_distance == doctest::Approx(0.05));
  CHECK(quarter.topology.bs_count() == 20);

  RunConfig realized = cfg;
  realized.reference_distance = DistanceMode::Realized;
  CHECK_FALSE(make_densified_scenario(base, realized, 0.25).nominal_distance);
  CHECK_FALSE(make_scenario(base, cfg).nominal_distance);
  RunConfig typical = cfg;
  typical.reference_distance = DistanceMode::Typical;
  const Scenario t = make_scenario(base, typical);
  CHECK(*t.nominal_distance == doctest::Approx(0.025 / std::sqrt(0.2)));
  CHECK_THROWS_AS(make_densified_scenario(base, cfg, 0.0), std::invalid_argument);
}

TEST_CASE("trials are deterministic and thread-count invariant") {
  const RunConfig cfg = small_config();
  const Topology base = build_topology(cfg);
  const Scenario s = make_densified_scenario(base, cfg, 0.2);
  const TrialResult a = run_trial(s, cfg, 99);
  CHECK(a == run_trial(s, cfg, 99));
  CHECK(a.epsilon >= 0.0);
  CHECK(a.epsilon <= a.epsilon_no_hopping + 1e-12);
  CHECK(a.reference_distance == *s.nominal_distance);

  const Campaign c1 = run_campaign(s, cfg, 24, 5, 1);
  const Campaign c3 = run_campaign(s, cfg, 24, 5, 3);
  CHECK(c1.trials == c3.trials);
  CHECK(c1.hopping.epsilon_bar == c3.hopping.epsilon_bar);
  CHECK(c1.no_hopping.std_error == c3.no_hopping.std_error);
  const Campaign other = run_campaign(s, cfg, 24, 6, 1);
  CHECK(other.trials != c1.trials);
  CHECK(c1.hopping.epsilon_bar <= c1.no_hopping.epsilon_bar);
  CHECK(&c1.selected(cfg) == &c1.hopping);
}

TEST_CASE("realized distances come from geometry") {
  RunConfig cfg = small_config();
  cfg.reference_distance = DistanceMode::Realized;
  const Topology base = build_topology(cfg);
  const Scenario s = make_densified_scenario(base, cfg, 0.2);
  const Campaign c = run_campaign(s, cfg, 12, 3, 1);
  double first = c.trials[0].reference_distance;
  bool varies = false;
  for (const auto& t : c.trials) {
    CHECK(t.reference_distance > 0.0);
    varies = varies || t.reference_distance != first;
  }
  CHECK(varies);
}

TEST_CASE("keeping the strongest interferers barely changes outage") {
  RunConfig cfg = small_config();
  const Topology base = build_topology(cfg);
  const Scenario s = make_densified_scenario(base, cfg, 0.1);
  RunConfig all = cfg;
  all.k_strongest = 100000;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const TrialResult k = run_trial(s, cfg, seed);
    const TrialResult full = run_trial(s, all, seed);
    CHECK(k.interferers == full.interferers);
    CHECK(std::abs(k.epsilon - full.epsilon) < 1e-4);
  }
}

TEST_CASE("per-link curves") {
  RunConfig cfg = small_config();
  const Topology base = build_topology(cfg);
  const Scenario s = make_densified_scenario(base, cfg, 0.1);
  const std::vector<double> betas{-4, 0, 4, 8, 12};
  const LinkCurves c = per_link_rate_curves(s, cfg, 6, betas, 11);
  REQUIRE(c.links.size() == 6);
  REQUIRE(c.epsilon.size() == 6);
  CHECK(c.served >= 6);
  for (std::size_t b = 1; b < betas.size(); ++b) {
    CHECK(c.rate[b] > c.rate[b - 1]);
    CHECK(c.average[b] >= c.average[b - 1] - 1e-12);
    for (const auto& e : c.epsilon) CHECK(e[b] >= e[b - 1] - 1e-12);
  }
  double lo = 1.0, hi = 0.0;
  for (const auto& e : c.epsilon) {
    lo = std::min(lo, e[2]);
    hi = std::max(hi, e[2]);
  }
  CHECK(hi > lo);
  RunConfig threads = cfg;
  threads.threads = 3;
  const LinkCurves again = per_link_rate_curves(s, threads, 6, betas, 11);
  CHECK(again.links == c.links);
  CHECK(again.epsilon == c.epsilon);
  CHECK(again.average == c.average);
}

TEST_CASE("sweeps") {
  RunConfig cfg = small_config();
  cfg.trials = 4;
  const std::vector<double> ratios{0.2};
  CHECK(parameter_sweep(cfg, "delta", {}, ratios).empty());
  CHECK_THROWS_AS(parameter_sweep(cfg, "volume", {}, ratios), ConfigError);
  const std::vector<std::string> bad{"2"};
  CHECK_THROWS_AS(parameter_sweep(cfg, "delta", bad, ratios), ConfigError);

  const std::vector<std::string> values{"0", "1"};
  const auto rows = parameter_sweep(cfg, "delta", values, ratios);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].value == "0");
  CHECK(rows[1].point.ratio == 0.2);

  const Table t = sweep_table("delta", rows, cfg);
  CHECK(t.columns[0] == "axis");
  CHECK(t.rows.size() == 2);
  for (const auto& row : t.rows) CHECK(row.size() == t.columns.size());
}

TEST_CASE("every emitted row satisfies the ASE identity") {
  RunConfig cfg = small_config();
  cfg.trials = 8;
  const Topology base = build_topology(cfg);
  const std::vector<double> ratios{0.1, 0.5};
  const auto points = densification_sweep(base, cfg, ratios);
  const Table t = densify_table(points, cfg);
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (t.columns[i] == name) return i;
    }
    FAIL("missing column " << name);
    return std::size_t{0};
  };
  for (const auto& row : t.rows) {
    for (std::string sfx : {"", "_hop", "_nohop"}) {
      const double eps = std::stod(row[col("epsilon_bar" + sfx)]);
      const double ase = std::stod(row[col("ase" + sfx)]);
      const double rate = std::stod(row[col("code_rate")]);
      CHECK(ase == cfg.density * rate * (1 - eps));
    }
  }
}

TEST_CASE("random profiles respect their ranges") {
  Rng rng = make_rng(3);
  for (int i = 0; i < 200; ++i) {
    const InterferenceProfile p = random_profile(rng);
    CHECK(p.interferers.size() >= 1);
    CHECK(p.interferers.size() <= 30);
    CHECK((p.m0 == 1 || p.m0 == 2));
    CHECK(p.gamma0 >= 1.0);
    CHECK(p.gamma0 <= 1e7);
    for (const auto& r : p.interferers) {
      CHECK(r.omega >= 1e-4);
      CHECK(r.omega <= 10.0);
      CHECK(r.m >= 1.0);
      CHECK(r.m <= 2.0);
      CHECK(r.c[0] + r.c[1] + r.c[2] + r.c[3] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
