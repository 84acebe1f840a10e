// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "mmuplink/association.hpp"

using namespace mmuplink;

namespace {

Topology network(int count, int zeta, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.count = count;
  Rng rng = make_rng(seed);
  return generate_topology(spec, zeta, rng);
}

PropagationParams no_shadowing() {
  PropagationParams p = PropagationParams::new_york();
  p.sigma_min_db = 0.0;
  p.sigma_max_db = 0.0;
  return p;
}

}  // namespace

TEST_CASE("without shadowing the nearest station serves") {
  const Topology t = network(40, 24, 1);
  const auto prop = no_shadowing();
  Rng rng = make_rng(2);
  const auto pl = place_mobiles(t, 100.0, 0.004, rng);
  const ShadowingField sh(3, t, prop);
  const std::vector<int> cap(t.sector_count(), 1000);
  const Association a = associate(t, pl.positions, sh, prop, cap, rng);
  CHECK(a.denied.empty());
  for (std::size_t i = 0; i < pl.positions.size(); ++i) {
    std::size_t nearest = 0;
    for (std::size_t b = 1; b < t.bs_count(); ++b) {
      if (distance(t.bs[b], pl.positions[i]) < distance(t.bs[nearest], pl.positions[i])) {
        nearest = b;
      }
    }
    REQUIRE(a.served(i));
    CHECK(t.bs_of(a.serving[i]) == nearest);
    CHECK(static_cast<std::size_t>(a.serving[i]) == t.covering_sector(nearest, pl.positions[i]));
  }
}

TEST_CASE("full sector denies the second mobile") {
  std::istringstream in("1 1\n");
  const Topology t = load_topology(in, Box{0, 0, 2, 2}, std::nullopt, 4);
  const auto prop = no_shadowing();
  const ShadowingField sh(1, t, prop);
  const std::vector<Point> mobiles{{1.3, 1.1}, {1.6, 1.2}};  // both in wedge 0
  const std::vector<int> cap(4, 1);
  Rng rng = make_rng(4);
  const Association a = associate(t, mobiles, sh, prop, cap, rng);
  CHECK(a.loads[0] == 1);
  CHECK(a.denied.size() == 1);
  CHECK(a.loads[1] + a.loads[2] + a.loads[3] == 0);
}

TEST_CASE("overflow moves a mobile to its next best station") {
  std::istringstream in("0.5 1\n1.5 1\n");
  const Topology t = load_topology(in, Box{0, 0, 2, 2}, std::nullopt, 1);
  const auto prop = no_shadowing();
  const ShadowingField sh(1, t, prop);
  const std::vector<Point> mobiles{{0.6, 1.0}, {0.7, 1.0}};
  const std::vector<int> cap{1, 1};
  Rng rng = make_rng(4);
  const Association a = associate(t, mobiles, sh, prop, cap, rng);
  CHECK(a.denied.empty());
  CHECK(a.loads == std::vector<int>{1, 1});
}

TEST_CASE("shadowed association maximizes local-mean power") {
  const Topology t = network(60, 24, 5);
  const auto prop = PropagationParams::new_york();
  Rng rng = make_rng(6);
  const auto pl = place_mobiles(t, 100.0, 0.004, rng);
  const ShadowingField sh(7, t, prop);
  const std::vector<int> cap(t.sector_count(), 1000);
  AssociationOptions all;
  all.candidate_bs = 0;
  const Association a = associate(t, pl.positions, sh, prop, cap, rng, all);
  int far = 0;
  for (std::size_t i = 0; i < pl.positions.size(); ++i) {
    double best = -1;
    std::size_t best_sector = 0, nearest = 0;
    for (std::size_t b = 0; b < t.bs_count(); ++b) {
      const std::size_t s = t.covering_sector(b, pl.positions[i]);
      const double d = distance(t.bs[b], pl.positions[i]);
      const double power = std::pow(10.0, sh.factor_db(i, s, d) / 10.0) * path_loss(d, prop);
      if (power > best) best = power, best_sector = s;
      if (d < distance(t.bs[nearest], pl.positions[i])) nearest = b;
    }
    CHECK(static_cast<std::size_t>(a.serving[i]) == best_sector);
    if (t.bs_of(best_sector) != nearest) ++far;
  }
  // Shadowing sends some mobiles past their nearest station.
  CHECK(far > 0);
}

TEST_CASE("capacity, loads and determinism") {
  const Topology t = network(20, 4, 8);
  const auto prop = PropagationParams::new_york();
  Rng r0 = make_rng(9);
  const auto pl = place_mobiles(t, 100.0, 0.004, r0);
  const ShadowingField sh(10, t, prop);
  const std::vector<int> cap(t.sector_count(), 3);
  Rng a_rng = make_rng(11), b_rng = make_rng(11);
  const Association a = associate(t, pl.positions, sh, prop, cap, a_rng);
  const Association b = associate(t, pl.positions, sh, prop, cap, b_rng);
  CHECK(a.serving == b.serving);
  CHECK_FALSE(a.denied.empty());  // 400 mobiles, 240 slots
  std::vector<int> loads(t.sector_count(), 0);
  for (std::size_t i = 0; i < pl.positions.size(); ++i) {
    if (!a.served(i)) continue;
    ++loads[a.serving[i]];
    // The serving sector's mainlobe covers the mobile.
    const std::size_t s = a.serving[i];
    CHECK(t.covering_sector(t.bs_of(s), pl.positions[i]) == s);
  }
  CHECK(loads == a.loads);
  for (int l : a.loads) CHECK(l <= 3);
  CHECK(a.denied.size() + std::accumulate(loads.begin(), loads.end(), 0) == pl.positions.size());
}

TEST_CASE("shadowing factors are keyed, not sequenced") {
  const Topology t = network(5, 4, 12);
  const auto prop = PropagationParams::new_york();
  const ShadowingField per_bs(13, t, prop, ShadowingKey::BaseStation);
  const ShadowingField per_sector(13, t, prop, ShadowingKey::Sector);
  CHECK(per_bs.factor_db(3, 5, 0.1) == per_bs.factor_db(3, 5, 0.1));
  CHECK(per_bs.factor_db(3, 4, 0.1) == per_bs.factor_db(3, 5, 0.1));  // same BS
  CHECK(per_sector.factor_db(3, 4, 0.1) != per_sector.factor_db(3, 5, 0.1));
  CHECK(per_bs.factor_db(3, 4, 0.1) != per_bs.factor_db(4, 4, 0.1));
  // Same underlying normal draw, spread set by distance.
  const double near = per_bs.factor_db(1, 0, 0.0);
  const double far = per_bs.factor_db(1, 0, 10.0);
  CHECK(far / near == doctest::Approx(shadowing_sigma_db(10.0, prop) / prop.sigma_min_db));
}
