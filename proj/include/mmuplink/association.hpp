// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mmuplink/geometry.hpp"
#include "mmuplink/propagation.hpp"
#include "mmuplink/random.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

enum class ShadowingKey {
  BaseStation,  ///< one factor per (mobile, BS), shared by its sectors
  Sector,       ///< one factor per (mobile, sector)
};

/// Shadowing factors of one network realization. Each (mobile, link) pair
/// gets an independent Gaussian draw keyed by the trial seed, so a factor is
/// identical no matter when or how often it is queried.
class ShadowingField {
 public:
  ShadowingField(std::uint64_t seed, const Topology& topology,
                 const PropagationParams& prop,
                 ShadowingKey key = ShadowingKey::BaseStation);

  /// Shadowing factor in dB for the link from `mobile` to `sector`. The
  /// underlying standard-normal draw depends only on the key; `distance`
  /// only sets the spread.
  double factor_db(std::size_t mobile, std::size_t sector,
                   double distance) const;

 private:
  std::uint64_t seed_;
  const Topology* topology_;
  PropagationParams prop_;
  ShadowingKey key_;
};

inline constexpr int kDenied = -1;

struct Association {
  std::vector<int> serving;         ///< sector per mobile, kDenied if unserved
  std::vector<int> loads;           ///< mobiles per sector
  std::vector<std::size_t> denied;  ///< ascending mobile indices

  bool served(std::size_t mobile) const { return serving[mobile] != kDenied; }
};

struct AssociationOptions {
  /// Candidate base stations per mobile (nearest first); <= 0 means all.
  int candidate_bs = 12;
};

/// Serves each mobile from the sector with the largest local-mean received
/// power among the covering sectors of its candidate base stations, subject
/// to `capacity[sector]`. Mobiles are admitted in a uniformly random order;
/// a mobile whose every candidate is full is denied.
Association associate(const Topology& topology, std::span<const Point> mobiles,
                      const ShadowingField& shadowing,
                      const PropagationParams& prop,
                      std::span<const int> capacity, Rng& rng,
                      const AssociationOptions& options = {});

}  // namespace mmuplink
