// SPDX-License-Identifier: Apache-2.0
//
// Conditional outage probability of the reference uplink given its
// interference profile. The desired signal sees Nakagami fading with integer
// shape m0 in each of the two slots of a subframe; with frequency hopping the
// slot average is gamma with shape 2*m0. Each interferer contributes in four
// sub-periods k with collision probability q_k, fractional duration C_k,
// interference-to-signal ratio omega and real Nakagami shape m.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mmuplink/random.hpp"

namespace mmuplink {

inline constexpr int kPeriods = 4;

struct InterfererRecord {
  double omega = 0.0;  ///< interference-to-signal power ratio (linear)
  double m = 1.0;      ///< Nakagami shape of the interfering link
  std::array<double, kPeriods> q{};  ///< collision probability per period
  std::array<double, kPeriods> c{};  ///< fractional duration per period
  std::size_t mobile = 0;            ///< source mobile (bookkeeping only)
};

struct InterferenceProfile {
  double gamma0 = 1.0;  ///< SNR without fading (linear)
  int m0 = 1;           ///< integer Nakagami shape of the reference link
  double beta = 1.0;    ///< SINR threshold (linear)
  std::vector<InterfererRecord> interferers;

  /// Throws std::invalid_argument on a malformed profile.
  void validate() const;
};

/// (beta0 * omega * c / m + 1)^-1.
double psi(double omega, double c, double m, double beta0);

/// Weight of l collisions' worth of interference power from one
/// interferer-period pair in the expansion of the outage expression.
double g_coeff(int l, double q, double omega, double c, double m,
               double beta0);

/// H_0..H_{t_max} for the given threshold scaling beta0, computed as the
/// truncated product of the per-pair power series sum_l G_l x^l.
std::vector<double> h_coefficients(const InterferenceProfile& profile,
                                   double beta0, int t_max);

/// Exact outage probability with frequency hopping (two independently faded
/// slots per subframe). Throws std::invalid_argument for m0 < 1 or
/// gamma0 <= 0.
double outage_probability(const InterferenceProfile& profile);

/// Exact outage probability when the desired signal sees one fading value
/// for the whole subframe (no hopping diversity).
double outage_probability_no_hopping(const InterferenceProfile& profile);

struct OutageEstimate {
  double epsilon = 0.0;
  double std_error = 0.0;  ///< binomial standard error of `epsilon`
  std::size_t samples = 0;
};

/// Direct simulation of the subframe-average SINR with Bernoulli collisions
/// and gamma fading; independent of the closed form.
OutageEstimate outage_monte_carlo(const InterferenceProfile& profile,
                                  std::size_t samples, Rng& rng,
                                  bool hopping = true);

/// Keeps the `k` interferers with the largest omega (ties by position).
void truncate_strongest(InterferenceProfile& profile, std::size_t k);

}  // namespace mmuplink
