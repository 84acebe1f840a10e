// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmuplink/geometry.hpp"
#include "mmuplink/random.hpp"

namespace mmuplink {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Static base-station and sector geometry. Sector s belongs to base
/// station s / sectors_per_bs and covers the wedge
/// [offset + k * 2pi / zeta, offset + (k + 1) * 2pi / zeta), k = s % zeta.
struct Topology {
  std::vector<Point> bs;
  Box extent;
  Box reference_zone;
  int sectors_per_bs = 1;
  std::vector<double> sector_offsets;  ///< one per BS, radians

  std::size_t bs_count() const { return bs.size(); }
  std::size_t sector_count() const { return bs.size() * sectors_per_bs; }
  std::size_t bs_of(std::size_t sector) const { return sector / sectors_per_bs; }
  int local_index(std::size_t sector) const {
    return static_cast<int>(sector % sectors_per_bs);
  }
  Point sector_position(std::size_t sector) const { return bs[bs_of(sector)]; }
  std::size_t sector_id(std::size_t bs_index, int local) const {
    return bs_index * sectors_per_bs + static_cast<std::size_t>(local);
  }

  /// Sector of `bs_index` whose mainlobe wedge contains point p.
  std::size_t covering_sector(std::size_t bs_index, Point p) const;

  /// Throws TopologyError when an invariant is broken.
  void validate() const;
};

enum class TopologyKind { UniformRandom, Grid };

struct GeneratorSpec {
  TopologyKind kind = TopologyKind::UniformRandom;
  int count = 132;
  Box extent{0.0, 0.0, 2.0, 2.0};
  /// Smallest allowed BS separation, km. Grid spacing below this is an error.
  double min_spacing = 0.0;
};

/// Reads "x y" pairs (km), one per line; '#' starts a comment. Without an
/// explicit extent, the bounding square of the points is used. Without an
/// explicit reference zone, the whole extent is used.
Topology load_topology(std::istream& in, std::optional<Box> extent = {},
                       std::optional<Box> reference_zone = {},
                       int sectors_per_bs = 1);
Topology load_topology_file(const std::string& path,
                            std::optional<Box> extent = {},
                            std::optional<Box> reference_zone = {},
                            int sectors_per_bs = 1);

/// Synthetic BS layout. Reference zone defaults to the central square with
/// half the side of the extent; sector offsets are zero.
Topology generate_topology(const GeneratorSpec& spec, int sectors_per_bs,
                           Rng& rng);

/// Draws one offset per BS uniformly in [0, 2pi/zeta).
void randomize_sector_offsets(Topology& t, Rng& rng);

/// Similarity transform about the origin.
Topology scale_topology(const Topology& t, double factor);

struct MobilePlacement {
  std::vector<Point> positions;
  double exclusion_radius = 0.0;
  double density = 0.0;
};

/// round(density * extent area).
std::size_t expected_mobile_count(const Topology& t, double density);

inline constexpr int kPlacementRetriesPerMobile = 10000;

/// Uniform clustering: sequential uniform draws over the extent, rejecting
/// any candidate closer than `exclusion_radius` to an accepted mobile.
/// Throws PackingError after kPlacementRetriesPerMobile rejections in a row.
MobilePlacement place_mobiles(const Topology& t, double density,
                              double exclusion_radius, Rng& rng);

/// Uniformly random mobile inside the reference zone among those accepted by
/// `eligible` (all when empty); nullopt when there is none.
std::optional<std::size_t> pick_reference_mobile(
    const MobilePlacement& placement, const Topology& t, Rng& rng,
    std::span<const std::uint8_t> eligible = {});

void write_points(std::ostream& out, std::span<const Point> points);

}  // namespace mmuplink
