// SPDX-License-Identifier: Apache-2.0
//
// Distance-dependent millimeter-wave propagation: power-law path loss whose
// exponent, lognormal shadowing spread, and Nakagami shape all move between a
// line-of-sight and a non-line-of-sight value along a tanh(mu * d) transition.
#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mmuplink {

struct PropagationParams {
  double m_max = 2.0;
  double m_min = 1.0;
  double alpha_min = 2.3;
  double alpha_max = 4.7;
  double sigma_min_db = 6.1;
  double sigma_max_db = 12.6;
  double mu = 20.0;   ///< transition rate, 1/km
  double d0 = 0.004;  ///< reference distance, km

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  static PropagationParams new_york();
  static PropagationParams austin();
  /// "newyork" or "austin"; nullopt for anything else. mu and d0 keep defaults.
  static std::optional<PropagationParams> preset(std::string_view name);

  friend bool operator==(const PropagationParams&,
                         const PropagationParams&) = default;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Path-loss exponent at distance d (km). Throws std::domain_error for d < 0.
double path_loss_exponent(double d, const PropagationParams& p);

/// Area-mean power gain (d/d0)^-alpha(d); clamped to 1 for d < d0.
double path_loss(double d, const PropagationParams& p);

/// Shadowing standard deviation in dB.
double shadowing_sigma_db(double d, const PropagationParams& p);

/// Real-valued Nakagami shape; non-increasing in d.
double nakagami_shape(double d, const PropagationParams& p);

/// Nearest integer to the Nakagami shape (ties up), at least 1.
int nakagami_shape_rounded(double d, const PropagationParams& p);

/// Nearest integer to x with ties rounded up, clamped to >= 1.
int round_shape(double x);

/// Zero-mean Gaussian shadowing factor in dB with the spread at distance d.
template <class URBG>
double sample_shadowing_db(double d, const PropagationParams& p, URBG& rng) {
  const double sigma = shadowing_sigma_db(d, p);
  if (sigma == 0.0) return 0.0;
  std::normal_distribution<double> n(0.0, sigma);
  return n(rng);
}

/// Unit-mean gamma power gain with shape m (Nakagami-m fading power).
template <class URBG>
double sample_power_gain(double m, URBG& rng) {
  if (!(m >= 0.5) || !std::isfinite(m)) {
    throw std::domain_error("Nakagami shape must be >= 0.5, got " +
                            std::to_string(m));
  }
  std::gamma_distribution<double> g(m, 1.0 / m);
  return g(rng);
}

}  // namespace mmuplink
