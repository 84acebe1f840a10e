// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/association.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mmuplink {

ShadowingField::ShadowingField(std::uint64_t seed, const Topology& topology,
                               const PropagationParams& prop, ShadowingKey key)
    : seed_(seed), topology_(&topology), prop_(prop), key_(key) {}

double ShadowingField::factor_db(std::size_t mobile, std::size_t sector,
                                 double distance) const {
  const std::uint64_t link =
      key_ == ShadowingKey::BaseStation ? topology_->bs_of(sector) : sector;
  SplitMix64 rng(derive_seed(seed_, mobile, link));
  return sample_shadowing_db(distance, prop_, rng);
}

Association associate(const Topology& topology, std::span<const Point> mobiles,
                      const ShadowingField& shadowing,
                      const PropagationParams& prop,
                      std::span<const int> capacity, Rng& rng,
                      const AssociationOptions& options) {
  const std::size_t n_bs = topology.bs_count();
  if (capacity.size() != topology.sector_count()) {
    throw std::invalid_argument("need one capacity per sector");
  }
  const std::size_t k =
      options.candidate_bs <= 0
          ? n_bs
          : std::min<std::size_t>(n_bs,
                                  static_cast<std::size_t>(options.candidate_bs));

  Association out;
  out.serving.assign(mobiles.size(), kDenied);
  out.loads.assign(topology.sector_count(), 0);

  std::vector<std::size_t> order(mobiles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  struct Candidate {
    double power;
    std::size_t sector;
  };
  std::vector<std::pair<double, std::size_t>> by_distance(n_bs);
  std::vector<Candidate> candidates;
  candidates.reserve(k);

  for (std::size_t i : order) {
    const Point x = mobiles[i];
    for (std::size_t b = 0; b < n_bs; ++b) {
      by_distance[b] = {distance(topology.bs[b], x), b};
    }
    std::partial_sort(by_distance.begin(), by_distance.begin() + k,
                      by_distance.end());
    candidates.clear();
    for (std::size_t c = 0; c < k; ++c) {
      const auto [d, b] = by_distance[c];
      const std::size_t sector = topology.covering_sector(b, x);
      const double power =
          db_to_linear(shadowing.factor_db(i, sector, d)) * path_loss(d, prop);
      candidates.push_back({power, sector});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                return a.power != b.power ? a.power > b.power
                                          : a.sector < b.sector;
              });
    for (const Candidate& c : candidates) {
      if (out.loads[c.sector] < capacity[c.sector]) {
        out.serving[i] = static_cast<int>(c.sector);
        ++out.loads[c.sector];
        break;
      }
    }
  }
  for (std::size_t i = 0; i < mobiles.size(); ++i) {
    if (out.serving[i] == kDenied) out.denied.push_back(i);
  }
  return out;
}

}  // namespace mmuplink
