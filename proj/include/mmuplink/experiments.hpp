// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmuplink/config.hpp"
#include "mmuplink/outage.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

/// R = log2(1 + l_s * beta), bits per channel use.
double code_rate(double beta_linear, double shannon_loss = 0.794);

/// A topology prepared for one operating point.
struct Scenario {
  Topology topology;
  double density = 100.0;
  /// Reference link length for the link budget; nullopt uses geometry.
  std::optional<double> nominal_distance;
  double bs_per_mobile = 0.0;  ///< C / M
  std::size_t mobiles = 0;     ///< M
};

/// The configured topology as-is. Uses the nominal link length only when
/// reference_distance is `typical`.
Scenario make_scenario(const Topology& topology, const RunConfig& cfg);

/// Topology rescaled (mobile density fixed) so that C / M equals `ratio`.
/// `auto` distance mode resolves to the nominal link length
/// typical_distance / sqrt(ratio).
Scenario make_densified_scenario(const Topology& base, const RunConfig& cfg,
                                 double ratio);

struct TrialResult {
  double epsilon = 0.0;             ///< with frequency hopping
  double epsilon_no_hopping = 0.0;  ///< desired signal faded once per subframe
  double reference_distance = 0.0;  ///< km, as used in the link budget
  double gamma0 = 0.0;
  int m0 = 1;
  std::size_t reference_mobile = 0;
  std::size_t serving_sector = 0;
  std::size_t interferers = 0;  ///< before keeping the strongest K
  std::size_t mobiles = 0;
  std::size_t denied = 0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// One network realization and its reference-link outage. Deterministic in
/// `trial_seed`.
TrialResult run_trial(const Scenario& scenario, const RunConfig& cfg,
                      std::uint64_t trial_seed);

struct OutageStats {
  std::size_t n_trials = 0;
  double epsilon_bar = 0.0;
  double std_error = 0.0;   ///< of epsilon_bar
  double half_width = 0.0;  ///< 95% normal confidence half-width
  double epsilon_min = 0.0;
  double epsilon_max = 0.0;
  double code_rate = 0.0;
  double throughput = 0.0;  ///< R (1 - epsilon_bar)
  double ase = 0.0;         ///< density * R * (1 - epsilon_bar)
};

/// Statistics with a fixed pairwise summation order.
OutageStats summarize(std::span<const double> epsilons, double density,
                      double rate);

/// Sum by recursive halving; the order depends only on the length.
double pairwise_sum(std::span<const double> values);

struct Campaign {
  std::vector<TrialResult> trials;
  OutageStats hopping;
  OutageStats no_hopping;

  /// Statistics for the configured hopping mode.
  const OutageStats& selected(const RunConfig& cfg) const {
    return cfg.hopping ? hopping : no_hopping;
  }
};

/// Calls fn(i) for i in [0, n) on `threads` workers (0: all cores).
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

/// N independent trials; trial i is seeded by counter i of the trial stream
/// of `seed`.
Campaign run_campaign(const Scenario& scenario, const RunConfig& cfg,
                      std::size_t n_trials, std::uint64_t seed, int threads);

struct DensifyPoint {
  double ratio = 0.0;  ///< C / M
  std::size_t mobiles = 0;
  double scale = 1.0;
  std::optional<double> nominal_distance;
  OutageStats hopping;
  OutageStats no_hopping;
};

std::vector<DensifyPoint> densification_sweep(const Topology& base,
                                              const RunConfig& cfg,
                                              std::span<const double> ratios);

struct SweepRow {
  std::string value;
  DensifyPoint point;
};

/// Re-runs the densification sweep with config key `axis` set to each value.
/// The topology is rebuilt from each modified config.
std::vector<SweepRow> parameter_sweep(const RunConfig& cfg,
                                      const std::string& axis,
                                      std::span<const std::string> values,
                                      std::span<const double> ratios);

struct LinkCurves {
  std::vector<double> beta_db;
  std::vector<double> rate;
  std::vector<std::size_t> links;             ///< selected mobile indices
  std::vector<std::vector<double>> epsilon;   ///< [link][beta]
  std::vector<double> average;                ///< over all served uplinks
  std::size_t served = 0;
};

/// Outage versus code rate for `n_links` uniformly chosen served uplinks of a
/// single realization, plus the mean over every served uplink.
LinkCurves per_link_rate_curves(const Scenario& scenario, const RunConfig& cfg,
                                std::size_t n_links,
                                std::span<const double> beta_db,
                                std::uint64_t seed);

struct ProfileRanges {
  int min_interferers = 1;
  int max_interferers = 30;
  double omega_min = 1e-4;
  double omega_max = 10.0;
  double m_min = 1.0;
  double m_max = 2.0;
  double gamma0_min = 1.0;
  double gamma0_max = 1e7;
  double beta_db_min = -3.0;
  double beta_db_max = 6.0;
};

/// Random interference profile: log-uniform omega and gamma0, uniform q and
/// m, m0 in {1, 2}, durations from a uniform hop offset.
InterferenceProfile random_profile(Rng& rng, const ProfileRanges& ranges = {});

struct ValidationCase {
  InterferenceProfile profile;
  double closed_form = 0.0;
  OutageEstimate monte_carlo;
  double null_std_error = 0.0;  ///< sqrt(eps (1 - eps) / n) at the closed form
  double z_score = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCase> cases;
  double tolerance_sigmas = 4.0;
  std::size_t passed() const;
};

/// Closed form against direct simulation on random profiles. A case passes
/// when |eps_mc - eps| <= tolerance * sqrt(eps (1 - eps) / n).
ValidationReport validate_closed_form(std::size_t profiles,
                                      std::size_t samples, std::uint64_t seed,
                                      int threads = 1,
                                      double tolerance_sigmas = 4.0,
                                      const ProfileRanges& ranges = {});

}  // namespace mmuplink
