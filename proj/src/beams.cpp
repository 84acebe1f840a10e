// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/beams.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mmuplink {

void BeamParams::validate() const {
  if (sectors < 1) throw std::invalid_argument("zeta must be >= 1");
  if (!(sector_sidelobe >= 0.0 && sector_sidelobe <= 1.0)) {
    throw std::invalid_argument("b must be in [0, 1]");
  }
  if (!(mobile_sidelobe >= 0.0 && mobile_sidelobe <= 1.0)) {
    throw std::invalid_argument("a must be in [0, 1]");
  }
  if (!(mobile_beamwidth > 0.0 && mobile_beamwidth <= kTwoPi)) {
    throw std::invalid_argument("theta must be in (0, 2pi]");
  }
  if (!(sector_average_gain > 0.0) || !(mobile_average_gain > 0.0)) {
    throw std::invalid_argument("average gains must be > 0");
  }
}

int covering_wedge(double theta, double offset, int zeta) {
  const double width = kTwoPi / zeta;
  const double u = wrap_angle(theta - offset);
  const int k = static_cast<int>(std::floor(u / width));
  return std::clamp(k, 0, zeta - 1);
}

double sector_gain(double theta, int local_sector, double offset,
                   const BeamParams& bp) {
  return covering_wedge(theta, offset, bp.sectors) == local_sector
             ? bp.sector_mainlobe_gain()
             : bp.sector_sidelobe_gain();
}

double mobile_gain_toward(Point mobile, Point target, Point serving,
                          const BeamParams& bp) {
  const Point to_target = target - mobile;
  const Point to_serving = serving - mobile;
  const double n1 = norm(to_target);
  const double n2 = norm(to_serving);
  if (n1 == 0.0 || n2 == 0.0) {
    throw GeometryError("mobile is collocated with a base station");
  }
  if (bp.mobile_beamwidth >= kTwoPi) return bp.mobile_mainlobe_gain();
  const double cosine = dot(to_target, to_serving) / (n1 * n2);
  return cosine > std::cos(0.5 * bp.mobile_beamwidth)
             ? bp.mobile_mainlobe_gain()
             : bp.mobile_sidelobe_gain();
}

double max_pair_gain(const BeamParams& bp) {
  return bp.sector_mainlobe_gain() * bp.mobile_mainlobe_gain();
}

}  // namespace mmuplink
