// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

namespace mmuplink {

HopPlan HopPlan::uniform(int hopset_size, int l_over_ll, std::size_t sectors,
                         double slot_ms, double activity) {
  if (l_over_ll < 1 || hopset_size % l_over_ll != 0) {
    throw std::invalid_argument("L / L_l must be a positive divisor of L");
  }
  HopPlan p;
  p.hopset_size = hopset_size;
  p.block_sizes.assign(sectors, hopset_size / l_over_ll);
  p.slot_ms = slot_ms;
  p.activity = activity;
  return p;
}

std::vector<int> HopPlan::capacities() const {
  std::vector<int> c(block_sizes.size());
  for (std::size_t s = 0; s < c.size(); ++s) c[s] = capacity(s);
  return c;
}

void HopPlan::validate() const {
  if (hopset_size < 1) throw std::invalid_argument("hopset size must be >= 1");
  auto check_block = [this](int b) {
    if (b < 1 || hopset_size % b != 0) {
      throw std::invalid_argument("block size " + std::to_string(b) +
                                  " must be a positive divisor of L = " +
                                  std::to_string(hopset_size));
    }
  };
  for (int b : block_sizes) check_block(b);
  if (reference_block) check_block(*reference_block);
  if (!(slot_ms > 0.0)) throw std::invalid_argument("slot duration must be > 0");
  if (!(activity >= 0.0 && activity <= 1.0)) {
    throw std::invalid_argument("activity probability must be in [0, 1]");
  }
}

double spectral_factor(int reference_block, int interferer_block) {
  if (reference_block <= 0 || interferer_block <= 0) {
    throw std::invalid_argument("block sizes must be positive");
  }
  return std::min(static_cast<double>(reference_block) / interferer_block, 1.0);
}

double timing_offset(double d_ref_km, double d_int_km, double slot_ms) {
  const double delay_ms = (d_ref_km - d_int_km) / kSpeedOfLight * 1e3;
  double t = std::fmod(delay_ms, slot_ms);
  if (t < 0.0) t += slot_ms;
  return t >= slot_ms ? 0.0 : t;
}

std::array<double, kPeriods> fractional_durations(double t_ms, double slot_ms) {
  const double a = t_ms / (2.0 * slot_ms);
  const double b = (slot_ms - t_ms) / (2.0 * slot_ms);
  return {a, b, a, b};
}

double collision_probability(int serving_load, int serving_block,
                             int reference_block, int hopset_size,
                             double activity) {
  const long occupied = static_cast<long>(serving_load) * serving_block;
  if (occupied > hopset_size) {
    throw std::invalid_argument(
        "sector occupancy N_g * L_g exceeds the hopset size");
  }
  return static_cast<double>(std::max<long>(occupied, reference_block)) *
         activity / hopset_size;
}

std::vector<std::size_t> build_interferer_set(const Association& association,
                                              const HopPlan& plan,
                                              std::size_t reference_sector,
                                              Rng& rng) {
  const std::size_t n_sectors = association.loads.size();
  // Counting sort of served mobiles by sector.
  std::vector<std::size_t> start(n_sectors + 1, 0);
  for (int s : association.serving) {
    if (s != kDenied) ++start[static_cast<std::size_t>(s) + 1];
  }
  for (std::size_t s = 0; s < n_sectors; ++s) start[s + 1] += start[s];
  std::vector<std::size_t> members(start.back());
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (std::size_t i = 0; i < association.serving.size(); ++i) {
    const int s = association.serving[i];
    if (s != kDenied) members[fill[static_cast<std::size_t>(s)]++] = i;
  }

  const int lj = plan.reference_block_size(reference_sector);
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < n_sectors; ++s) {
    if (s == reference_sector) continue;
    const std::size_t n = start[s + 1] - start[s];
    if (n == 0) continue;
    const auto limit = static_cast<std::size_t>(
        std::floor(std::max(static_cast<double>(lj) / plan.block(s), 1.0)));
    const auto first = members.begin() + static_cast<std::ptrdiff_t>(start[s]);
    const auto last = first + static_cast<std::ptrdiff_t>(n);
    if (n <= limit) {
      out.insert(out.end(), first, last);
    } else {
      std::sample(first, last, std::back_inserter(out), limit, rng);
    }
  }
  return out;
}

double power_control_ratio(const InterfererLink& link, const ReferenceLink& ref,
                           double delta, double max_pair_gain,
                           const PropagationParams& prop) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must be in [0, 1]");
  }
  const double shadow =
      db_to_linear(link.shadow_to_reference_db -
                   delta * link.shadow_to_serving_db +
                   (delta - 1.0) * ref.shadow_db);
  const double numerator = shadow *
                           path_loss(link.distance_to_reference, prop) *
                           link.spectral * link.mobile_gain * link.sector_gain;
  const double denominator =
      std::pow(path_loss(ref.distance, prop), 1.0 - delta) *
      std::pow(path_loss(link.distance_to_serving, prop), delta) *
      max_pair_gain;
  return numerator / denominator;
}

double gamma0(double snr_linear, double shadow_db, double distance,
              const PropagationParams& prop) {
  if (!(snr_linear > 0.0)) throw std::invalid_argument("SNR must be > 0");
  return snr_linear * db_to_linear(shadow_db) * path_loss(distance, prop);
}

InterferenceProfile build_profile(const Realization& realization,
                                  std::size_t reference_mobile,
                                  const HopPlan& plan,
                                  const LinkSettings& settings,
                                  const BeamParams& beams,
                                  const PropagationParams& prop, Rng& rng) {
  const Topology& topo = *realization.topology;
  const Association& assoc = *realization.association;
  const ShadowingField& shadowing = *realization.shadowing;
  const auto mobiles = realization.mobiles;

  if (!assoc.served(reference_mobile)) {
    throw std::invalid_argument("reference mobile is not served");
  }
  const auto j = static_cast<std::size_t>(assoc.serving[reference_mobile]);
  const Point sj = topo.sector_position(j);
  const double offset_j = topo.sector_offsets[topo.bs_of(j)];
  const int local_j = topo.local_index(j);
  const double geometric_dr = distance(mobiles[reference_mobile], sj);

  ReferenceLink ref;
  ref.distance = settings.nominal_distance.value_or(geometric_dr);
  ref.shadow_db = shadowing.factor_db(reference_mobile, j, ref.distance);

  InterferenceProfile profile;
  profile.beta = settings.beta;
  profile.m0 = nakagami_shape_rounded(ref.distance, prop);
  profile.gamma0 = gamma0(settings.snr, ref.shadow_db, ref.distance, prop);

  const int lj = plan.reference_block_size(j);
  // Average gains cancel in omega.
  BeamParams unit = beams;
  unit.sector_average_gain = 1.0;
  unit.mobile_average_gain = 1.0;
  const double b_max = max_pair_gain(unit);
  const auto set = build_interferer_set(assoc, plan, j, rng);
  profile.interferers.reserve(set.size());
  for (std::size_t i : set) {
    const auto g = static_cast<std::size_t>(assoc.serving[i]);
    const Point xi = mobiles[i];
    const Point sg = topo.sector_position(g);

    InterfererLink link;
    link.distance_to_reference = distance(xi, sj);
    link.distance_to_serving = distance(xi, sg);
    link.shadow_to_reference_db =
        shadowing.factor_db(i, j, link.distance_to_reference);
    link.shadow_to_serving_db =
        shadowing.factor_db(i, g, link.distance_to_serving);
    link.spectral = spectral_factor(lj, plan.block(g));
    link.mobile_gain = mobile_gain_toward(xi, sj, sg, unit);
    link.sector_gain = sector_gain(bearing(xi - sj), local_j, offset_j, unit);

    InterfererRecord rec;
    rec.mobile = i;
    rec.omega = power_control_ratio(link, ref, settings.delta, b_max, prop);
    rec.m = nakagami_shape(link.distance_to_reference, prop);
    const double q = collision_probability(assoc.loads[g], plan.block(g), lj,
                                           plan.hopset_size, plan.activity);
    rec.q.fill(q);
    rec.c = fractional_durations(
        timing_offset(geometric_dr, link.distance_to_reference, plan.slot_ms),
        plan.slot_ms);
    profile.interferers.push_back(rec);
  }
  return profile;
}

}  // namespace mmuplink
