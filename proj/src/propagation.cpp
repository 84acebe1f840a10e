// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace mmuplink {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_distance(double d) {
  if (!(d >= 0.0)) {
    throw std::domain_error("distance must be non-negative, got " +
                            std::to_string(d));
  }
}

double transition(double d, const PropagationParams& p) {
  check_distance(d);
  return std::tanh(p.mu * d);
}

}  // namespace

void PropagationParams::validate() const {
  require(alpha_min > 0.0, "alpha_min must be > 0");
  require(alpha_min <= alpha_max, "alpha_min must not exceed alpha_max");
  // Zero spread is accepted so shadowing can be switched off.
  require(sigma_min_db >= 0.0, "sigma_min must be >= 0");
  require(sigma_min_db <= sigma_max_db, "sigma_min must not exceed sigma_max");
  require(m_min >= 0.5, "m_min must be >= 0.5");
  require(m_min <= m_max, "m_min must not exceed m_max");
  require(mu > 0.0, "mu must be > 0");
  require(d0 > 0.0, "d0 must be > 0");
  require(std::isfinite(alpha_max) && std::isfinite(sigma_max_db) &&
              std::isfinite(m_max) && std::isfinite(mu) && std::isfinite(d0),
          "propagation parameters must be finite");
}

PropagationParams PropagationParams::new_york() {
  PropagationParams p;
  p.m_max = 2.0;
  p.m_min = 1.0;
  p.alpha_min = 2.3;
  p.alpha_max = 4.7;
  p.sigma_min_db = 6.1;
  p.sigma_max_db = 12.6;
  return p;
}

PropagationParams PropagationParams::austin() {
  PropagationParams p;
  p.m_max = 2.0;
  p.m_min = 1.0;
  p.alpha_min = 1.9;
  p.alpha_max = 3.3;
  p.sigma_min_db = 4.6;
  p.sigma_max_db = 12.3;
  return p;
}

std::optional<PropagationParams> PropagationParams::preset(
    std::string_view name) {
  if (name == "newyork") return new_york();
  if (name == "austin") return austin();
  return std::nullopt;
}

double path_loss_exponent(double d, const PropagationParams& p) {
  return p.alpha_min + (p.alpha_max - p.alpha_min) * transition(d, p);
}

double path_loss(double d, const PropagationParams& p) {
  check_distance(d);
  if (d <= p.d0) return 1.0;
  return std::pow(d / p.d0, -path_loss_exponent(d, p));
}

double shadowing_sigma_db(double d, const PropagationParams& p) {
  return p.sigma_min_db + (p.sigma_max_db - p.sigma_min_db) * transition(d, p);
}

double nakagami_shape(double d, const PropagationParams& p) {
  return p.m_max - (p.m_max - p.m_min) * transition(d, p);
}

int round_shape(double x) {
  return std::max(1, static_cast<int>(std::floor(x + 0.5)));
}

int nakagami_shape_rounded(double d, const PropagationParams& p) {
  return round_shape(nakagami_shape(d, p));
}

}  // namespace mmuplink
