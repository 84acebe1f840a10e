// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/outage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace mmuplink {

namespace {

double outage_from_h(std::span<const double> h, double beta0, double z,
                     int terms) {
  // 1 - exp(-beta0 z) sum_s sum_t beta0^s z^(s-t) / (s-t)! H_t; the powers
  // are combined so z^-t is never formed on its own.
  double sum = 0.0;
  double beta_pow = 1.0;
  for (int s = 0; s < terms; ++s) {
    double inner = 0.0;
    double z_pow = 1.0;  // z^(s-t)
    double fact = 1.0;   // (s-t)!
    for (int u = 0; u <= s; ++u) {  // u = s - t
      if (u > 0) {
        z_pow *= z;
        fact *= u;
      }
      inner += z_pow / fact * h[s - u];
    }
    sum += beta_pow * inner;
    beta_pow *= beta0;
  }
  const double eps = 1.0 - std::exp(-beta0 * z) * sum;
  return std::clamp(eps, 0.0, 1.0);
}

double outage_with_shape(const InterferenceProfile& profile, int shape) {
  profile.validate();
  const double beta0 = profile.beta * shape;
  const double z = 1.0 / profile.gamma0;
  const auto h = h_coefficients(profile, beta0, shape - 1);
  return outage_from_h(h, beta0, z, shape);
}

}  // namespace

void InterferenceProfile::validate() const {
  if (m0 < 1) throw std::invalid_argument("m0 must be a positive integer");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  for (const InterfererRecord& r : interferers) {
    if (!(r.omega >= 0.0) || !std::isfinite(r.omega)) {
      throw std::invalid_argument("omega must be finite and >= 0");
    }
    if (!(r.m > 0.0)) throw std::invalid_argument("interferer m must be > 0");
    for (int k = 0; k < kPeriods; ++k) {
      if (!(r.q[k] >= 0.0 && r.q[k] <= 1.0)) {
        throw std::invalid_argument("collision probability must be in [0, 1]");
      }
      if (!(r.c[k] >= 0.0)) {
        throw std::invalid_argument("fractional duration must be >= 0");
      }
    }
  }
}

double psi(double omega, double c, double m, double beta0) {
  return 1.0 / (beta0 * omega * c / m + 1.0);
}

double g_coeff(int l, double q, double omega, double c, double m,
               double beta0) {
  const double ps = psi(omega, c, m, beta0);
  if (l == 0) return 1.0 - q * (1.0 - std::pow(ps, m));
  // Gamma(l + m) / (l! Gamma(m)) as a running product.
  const double x = omega * c / m;
  double coef = 1.0;
  for (int i = 0; i < l; ++i) coef *= (m + i) / (i + 1) * x;
  return q * coef * std::pow(ps, m + l);
}

std::vector<double> h_coefficients(const InterferenceProfile& profile,
                                   double beta0, int t_max) {
  std::vector<double> h(static_cast<std::size_t>(t_max) + 1, 0.0);
  h[0] = 1.0;
  std::vector<double> g(h.size());
  std::vector<double> next(h.size());
  for (const InterfererRecord& r : profile.interferers) {
    for (int k = 0; k < kPeriods; ++k) {
      if (r.q[k] == 0.0 || r.omega * r.c[k] == 0.0) continue;  // G = 1
      for (int l = 0; l <= t_max; ++l) {
        g[l] = g_coeff(l, r.q[k], r.omega, r.c[k], r.m, beta0);
      }
      for (int t = 0; t <= t_max; ++t) {
        double acc = 0.0;
        for (int l = 0; l <= t; ++l) acc += g[l] * h[t - l];
        next[t] = acc;
      }
      h.swap(next);
    }
  }
  return h;
}

double outage_probability(const InterferenceProfile& profile) {
  return outage_with_shape(profile, 2 * profile.m0);
}

double outage_probability_no_hopping(const InterferenceProfile& profile) {
  return outage_with_shape(profile, profile.m0);
}

OutageEstimate outage_monte_carlo(const InterferenceProfile& profile,
                                  std::size_t samples, Rng& rng,
                                  bool hopping) {
  profile.validate();
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const double shape = hopping ? 2.0 * profile.m0 : profile.m0;
  std::gamma_distribution<double> desired(shape, 1.0 / shape);

  struct Pair {
    double q;
    double weight;  // omega * c
    std::gamma_distribution<double> gain;
  };
  std::vector<Pair> pairs;
  for (const InterfererRecord& r : profile.interferers) {
    for (int k = 0; k < kPeriods; ++k) {
      if (r.q[k] == 0.0 || r.omega * r.c[k] == 0.0) continue;
      pairs.push_back({r.q[k], r.omega * r.c[k],
                       std::gamma_distribution<double>(r.m, 1.0 / r.m)});
    }
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 1.0 / profile.gamma0;
  std::size_t outages = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double g = desired(rng);
    double denom = z;
    for (Pair& p : pairs) {
      if (p.q < 1.0 && unit(rng) >= p.q) continue;
      denom += p.weight * p.gain(rng);
    }
    if (g <= profile.beta * denom) ++outages;
  }
  OutageEstimate e;
  e.samples = samples;
  e.epsilon = static_cast<double>(outages) / static_cast<double>(samples);
  e.std_error =
      std::sqrt(e.epsilon * (1.0 - e.epsilon) / static_cast<double>(samples));
  return e;
}

void truncate_strongest(InterferenceProfile& profile, std::size_t k) {
  if (k == 0) throw std::invalid_argument("must keep at least one interferer");
  auto& v = profile.interferers;
  if (v.size() <= k) return;
  std::stable_sort(v.begin(), v.end(),
                   [](const InterfererRecord& a, const InterfererRecord& b) {
                     return a.omega > b.omega;
                   });
  v.resize(k);
}

}  // namespace mmuplink
