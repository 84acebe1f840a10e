// SPDX-License-Identifier: Apache-2.0
//
// Two-level antenna patterns: fixed sector beams at the base stations and an
// adaptive beam at each mobile pointed at its serving base station.
#pragma once

#include <numbers>
#include <stdexcept>

#include "mmuplink/geometry.hpp"

namespace mmuplink {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BeamParams {
  int sectors = 24;                                   ///< zeta
  double sector_sidelobe = 0.01;                      ///< b
  double mobile_beamwidth = 0.1 * std::numbers::pi;   ///< Theta, radians
  double mobile_sidelobe = 0.1;                       ///< a
  double sector_average_gain = 1.0;                   ///< A_s
  double mobile_average_gain = 1.0;                   ///< A_m

  void validate() const;

  double sector_mainlobe_gain() const {
    return sector_average_gain *
           (sector_sidelobe + sectors * (1.0 - sector_sidelobe));
  }
  double sector_sidelobe_gain() const {
    return sector_average_gain * sector_sidelobe;
  }
  double mobile_mainlobe_gain() const {
    return mobile_average_gain *
           (mobile_sidelobe +
            kTwoPi * (1.0 - mobile_sidelobe) / mobile_beamwidth);
  }
  double mobile_sidelobe_gain() const {
    return mobile_average_gain * mobile_sidelobe;
  }

  friend bool operator==(const BeamParams&, const BeamParams&) = default;
};

/// Index in [0, zeta) of the wedge containing `theta` when wedge 0 starts at
/// `offset`. Lower edges inclusive, upper edges exclusive.
int covering_wedge(double theta, double offset, int zeta);

/// Gain of wedge `local_sector` (of a BS with wedge offset `offset`) toward
/// arrival angle `theta`.
double sector_gain(double theta, int local_sector, double offset,
                   const BeamParams& bp);

/// Gain of a mobile at `mobile` toward `target` while its beam points at
/// `serving`. Throws GeometryError when either direction has zero length.
double mobile_gain_toward(Point mobile, Point target, Point serving,
                          const BeamParams& bp);

/// Product of the two mainlobe gains.
double max_pair_gain(const BeamParams& bp);

}  // namespace mmuplink
