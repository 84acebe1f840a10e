// SPDX-License-Identifier: Apache-2.0
//
// Interference profile of the reference uplink: frequency-hopping collision
// model, hop-timing offsets, fractional power control and beam coupling.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmuplink/association.hpp"
#include "mmuplink/beams.hpp"
#include "mmuplink/outage.hpp"
#include "mmuplink/propagation.hpp"
#include "mmuplink/random.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

/// Speed of light in km/s.
inline constexpr double kSpeedOfLight = 299792.458;

struct HopPlan {
  int hopset_size = 1000;        ///< L, channels
  std::vector<int> block_sizes;  ///< L_l per sector
  /// Block size of the reference sector when it differs from its L_l.
  std::optional<int> reference_block;
  double slot_ms = 0.5;  ///< T
  double activity = 1.0;  ///< p_i, common to all mobiles

  /// Every sector uses hopset_size / l_over_ll channels per hop.
  static HopPlan uniform(int hopset_size, int l_over_ll, std::size_t sectors,
                         double slot_ms = 0.5, double activity = 1.0);

  int block(std::size_t sector) const { return block_sizes[sector]; }
  int reference_block_size(std::size_t sector) const {
    return reference_block.value_or(block_sizes[sector]);
  }
  /// Orthogonal blocks available per sector, L / L_l.
  int capacity(std::size_t sector) const {
    return hopset_size / block_sizes[sector];
  }
  std::vector<int> capacities() const;

  void validate() const;
};

/// min(L_j / L_l, 1). Throws std::invalid_argument for non-positive sizes.
double spectral_factor(int reference_block, int interferer_block);

/// Hop-transition offset in ms, ((d_ref - d_int) / c) mod T, in [0, T).
double timing_offset(double d_ref_km, double d_int_km, double slot_ms);

/// Fractional durations of the four sub-periods of a 2T subframe.
std::array<double, kPeriods> fractional_durations(double t_ms, double slot_ms);

/// max(N_g L_g, L_j) p / L. Throws std::invalid_argument if N_g L_g > L.
double collision_probability(int serving_load, int serving_block,
                             int reference_block, int hopset_size,
                             double activity);

/// Mobiles allowed to interfere with reference sector `reference_sector`: all
/// served mobiles of other sectors, thinned to min(max(L_j / L_l, 1), N_l)
/// per sector by uniform sampling. One set is used for all four periods.
std::vector<std::size_t> build_interferer_set(const Association& association,
                                              const HopPlan& plan,
                                              std::size_t reference_sector,
                                              Rng& rng);

struct InterfererLink {
  double shadow_to_reference_db = 0.0;  ///< toward the reference sector
  double shadow_to_serving_db = 0.0;    ///< toward its own serving sector
  double distance_to_reference = 0.0;   ///< km
  double distance_to_serving = 0.0;     ///< km
  double spectral = 1.0;                ///< spectral factor of its sector
  double mobile_gain = 1.0;             ///< mobile beam toward the reference
  double sector_gain = 1.0;             ///< reference sector beam toward it
};

struct ReferenceLink {
  double shadow_db = 0.0;
  double distance = 0.0;  ///< km
};

/// Interference-to-signal ratio after fractional power control with
/// parameter delta in [0, 1].
double power_control_ratio(const InterfererLink& link, const ReferenceLink& ref,
                           double delta, double max_pair_gain,
                           const PropagationParams& prop);

/// SNR of the reference link without fading.
double gamma0(double snr_linear, double shadow_db, double distance,
              const PropagationParams& prop);

struct LinkSettings {
  double beta = 1.9952623149688795;  ///< SINR threshold, linear (3 dB)
  double delta = 0.1;
  double snr = 1e7;  ///< P_r / N, linear (70 dB)
  /// Reference link length used for the link budget instead of the
  /// geometric one (nominal link length of a densification point).
  std::optional<double> nominal_distance;
};

/// Everything a reference-link evaluation needs from one realization.
struct Realization {
  const Topology* topology = nullptr;
  std::span<const Point> mobiles;
  const Association* association = nullptr;
  const ShadowingField* shadowing = nullptr;
};

/// Interference profile of `reference_mobile` at its serving sector, before
/// truncation. Denied mobiles never interfere.
InterferenceProfile build_profile(const Realization& realization,
                                  std::size_t reference_mobile,
                                  const HopPlan& plan,
                                  const LinkSettings& settings,
                                  const BeamParams& beams,
                                  const PropagationParams& prop, Rng& rng);

}  // namespace mmuplink
