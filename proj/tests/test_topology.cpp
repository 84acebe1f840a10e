// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "mmuplink/topology.hpp"
#include "oracles.hpp"

using namespace mmuplink;

namespace {

Topology single_bs() {
  std::istringstream in("0 0\n");
  return load_topology(in);
}

}  // namespace

TEST_CASE("load 132 stations with a central reference zone") {
  std::ostringstream file;
  file << "# x y (km)\n";
  Rng rng = make_rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 132; ++i) file << u(rng) << " " << u(rng) << "  # bs\n";
  std::istringstream in(file.str());
  const Topology t = load_topology(in, Box{0, 0, 2, 2}, Box{0.5, 0.5, 1.5, 1.5}, 24);
  CHECK(t.bs_count() == 132);
  CHECK(t.sector_count() == 132 * 24);
  CHECK(t.extent.area() == doctest::Approx(4.0));
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("single station at the origin") {
  const Topology t = single_bs();
  CHECK(t.bs_count() == 1);
  CHECK(t.extent.contains(Point{0, 0}));
  CHECK(t.reference_zone.x0 == t.extent.x0);
  CHECK(t.reference_zone.x1 == t.extent.x1);
  CHECK(t.reference_zone.y0 == t.extent.y0);
  CHECK(t.reference_zone.y1 == t.extent.y1);
}

TEST_CASE("bad coordinate files") {
  auto load = [](const std::string& text, std::optional<Box> extent = {}) {
    std::istringstream in(text);
    return load_topology(in, extent);
  };
  CHECK_THROWS_AS(load("1 1\n1 1\n"), TopologyError);
  CHECK_THROWS_AS(load(""), TopologyError);
  CHECK_THROWS_AS(load("# only a comment\n"), TopologyError);
  CHECK_THROWS_AS(load("1 nan\n"), TopologyError);
  CHECK_THROWS_AS(load("1 inf\n"), TopologyError);
  CHECK_THROWS_AS(load("1\n"), TopologyError);
  CHECK_THROWS_AS(load("1 2 3\n"), TopologyError);
  CHECK_THROWS_AS(load("3 3\n", Box{0, 0, 2, 2}), TopologyError);
  CHECK_THROWS_AS(load_topology_file("/nonexistent/topo.txt"), TopologyError);
}

TEST_CASE("grid generator") {
  GeneratorSpec spec;
  spec.kind = TopologyKind::Grid;
  spec.count = 4;
  spec.extent = Box{0, 0, 2, 2};
  Rng rng = make_rng(1);
  const Topology t = generate_topology(spec, 1, rng);
  REQUIRE(t.bs_count() == 4);
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : t.bs) pts.emplace_back(p.x, p.y);
  std::sort(pts.begin(), pts.end());
  CHECK(pts == std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.5, 1.5}, {1.5, 0.5}, {1.5, 1.5}});

  spec.count = 10000;
  spec.min_spacing = 0.1;
  CHECK_THROWS_AS(generate_topology(spec, 1, rng), TopologyError);
  spec.count = 0;
  CHECK_THROWS_AS(generate_topology(spec, 1, rng), TopologyError);
}

TEST_CASE("uniform generator is deterministic") {
  GeneratorSpec spec;
  spec.count = 132;
  Rng a = make_rng(9), b = make_rng(9);
  const Topology t1 = generate_topology(spec, 24, a);
  const Topology t2 = generate_topology(spec, 24, b);
  REQUIRE(t1.bs_count() == 132);
  for (std::size_t i = 0; i < 132; ++i) {
    CHECK(t1.bs[i] == t2.bs[i]);
    CHECK(t1.extent.contains(t1.bs[i]));
  }
  CHECK(t1.reference_zone.width() == doctest::Approx(1.0));
}

TEST_CASE("scaling") {
  GeneratorSpec spec;
  spec.count = 20;
  Rng rng = make_rng(2);
  const Topology t = generate_topology(spec, 4, rng);
  const Topology same = scale_topology(t, 1.0);
  for (std::size_t i = 0; i < t.bs_count(); ++i) CHECK(same.bs[i] == t.bs[i]);

  const Topology half = scale_topology(t, 0.5);
  CHECK(half.extent.area() == doctest::Approx(t.extent.area() / 4));
  CHECK(expected_mobile_count(half, 100) == expected_mobile_count(t, 100) / 4);

  const Topology big = scale_topology(t, 3.7);
  const double r0 = distance(t.bs[0], t.bs[1]) / distance(t.bs[2], t.bs[3]);
  const double r1 = distance(big.bs[0], big.bs[1]) / distance(big.bs[2], big.bs[3]);
  CHECK(r1 == doctest::Approx(r0).epsilon(1e-13));

  const Topology a = scale_topology(scale_topology(t, 1.3), 0.7);
  const Topology b = scale_topology(t, 1.3 * 0.7);
  for (std::size_t i = 0; i < t.bs_count(); ++i) {
    CHECK(a.bs[i].x == doctest::Approx(b.bs[i].x).epsilon(1e-14));
    CHECK(a.bs[i].y == doctest::Approx(b.bs[i].y).epsilon(1e-14));
  }
  CHECK(a.extent.area() == doctest::Approx(b.extent.area()).epsilon(1e-14));
  CHECK_THROWS_AS(scale_topology(t, 0.0), std::invalid_argument);
}

TEST_CASE("uniform clustering respects the exclusion radius") {
  GeneratorSpec spec;
  spec.count = 4;
  Rng rng = make_rng(4);
  const Topology t = generate_topology(spec, 1, rng);
  const MobilePlacement pl = place_mobiles(t, 100.0, 0.004, rng);
  REQUIRE(pl.positions.size() == 400);
  double closest = 1e9;
  for (std::size_t i = 0; i < pl.positions.size(); ++i) {
    CHECK(t.extent.contains(pl.positions[i]));
    for (std::size_t j = i + 1; j < pl.positions.size(); ++j) {
      closest = std::min(closest, distance(pl.positions[i], pl.positions[j]));
    }
  }
  CHECK(closest >= 0.004);

  const MobilePlacement plain = place_mobiles(t, 100.0, 0.0, rng);
  CHECK(plain.positions.size() == 400);
}

TEST_CASE("packing failure") {
  GeneratorSpec spec;
  spec.count = 1;
  spec.extent = Box{0, 0, 0.1, 0.1};
  Rng rng = make_rng(5);
  const Topology t = generate_topology(spec, 1, rng);
  // 100 mobiles in 0.01 km^2 cannot keep 50 m apart.
  CHECK_THROWS_AS(place_mobiles(t, 10000.0, 0.05, rng), PackingError);
}

TEST_CASE("placement density is uniform") {
  GeneratorSpec spec;
  spec.count = 1;
  Rng rng = make_rng(6);
  const Topology t = generate_topology(spec, 1, rng);
  std::vector<double> counts(100, 0.0);
  double total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    for (const Point& p : place_mobiles(t, 100.0, 0.004, rng).positions) {
      const int cx = std::min(9, static_cast<int>(p.x / 0.2));
      const int cy = std::min(9, static_cast<int>(p.y / 0.2));
      counts[cy * 10 + cx] += 1;
      total += 1;
    }
  }
  double chi2 = 0;
  for (double c : counts) chi2 += (c - total / 100) * (c - total / 100) / (total / 100);
  CHECK(oracle::chi2_sf(chi2, 99) > 0.01);
}

TEST_CASE("reference mobile selection") {
  Topology t = single_bs();
  t.extent = Box{0, 0, 2, 2};
  t.bs[0] = {1, 1};
  t.reference_zone = Box{0.5, 0.5, 1.5, 1.5};
  Rng rng = make_rng(7);

  MobilePlacement pl;
  pl.positions = {{0.1, 0.1}, {1.0, 1.2}, {1.9, 1.9}};
  for (int i = 0; i < 20; ++i) CHECK(pick_reference_mobile(pl, t, rng) == 1u);

  pl.positions = {{0.1, 0.1}};
  CHECK_FALSE(pick_reference_mobile(pl, t, rng));

  pl.positions = {{0.6, 0.6}, {0.7, 0.7}, {0.8, 0.8}, {0.9, 0.9}};
  const std::vector<std::uint8_t> eligible{1, 0, 1, 1};
  std::vector<double> hits(4, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto r = pick_reference_mobile(pl, t, rng, eligible);
    REQUIRE(r);
    CHECK(t.reference_zone.contains(pl.positions[*r]));
    hits[*r] += 1;
  }
  CHECK(hits[1] == 0);
  double chi2 = 0;
  for (int k : {0, 2, 3}) chi2 += (hits[k] - n / 3.0) * (hits[k] - n / 3.0) / (n / 3.0);
  CHECK(oracle::chi2_sf(chi2, 2) > 0.01);
}

TEST_CASE("sector offsets and covering sectors") {
  GeneratorSpec spec;
  spec.count = 10;
  Rng rng = make_rng(8);
  Topology t = generate_topology(spec, 6, rng);
  for (double o : t.sector_offsets) CHECK(o == 0.0);
  randomize_sector_offsets(t, rng);
  for (double o : t.sector_offsets) {
    CHECK(o >= 0.0);
    CHECK(o < 2 * std::numbers::pi / 6);
  }
  const std::size_t s = t.covering_sector(3, t.bs[3] + Point{0.01, 0.0001});
  CHECK(t.bs_of(s) == 3);
}

TEST_CASE("points round-trip through the coordinate format") {
  GeneratorSpec spec;
  spec.count = 15;
  Rng rng = make_rng(10);
  const Topology t = generate_topology(spec, 1, rng);
  std::ostringstream out;
  write_points(out, t.bs);
  std::istringstream in(out.str());
  const Topology back = load_topology(in, t.extent);
  REQUIRE(back.bs_count() == t.bs_count());
  for (std::size_t i = 0; i < t.bs_count(); ++i) CHECK(back.bs[i] == t.bs[i]);
}
