// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "mmuplink/beams.hpp"

namespace mmuplink {

namespace {

Box bounding_square(std::span<const Point> pts) {
  double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const Point& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  double side = std::max(x1 - x0, y1 - y0);
  // A single site (or a collinear vertical/horizontal set) still needs area.
  if (side == 0.0) side = 1.0;
  const Point c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  return {c.x - 0.5 * side, c.y - 0.5 * side, c.x + 0.5 * side,
          c.y + 0.5 * side};
}

Box central_half(const Box& b) {
  const double w = b.width(), h = b.height();
  return {b.x0 + 0.25 * w, b.y0 + 0.25 * h, b.x1 - 0.25 * w, b.y1 - 0.25 * h};
}

Point uniform_point(const Box& b, Rng& rng) {
  std::uniform_real_distribution<double> ux(b.x0, b.x1);
  std::uniform_real_distribution<double> uy(b.y0, b.y1);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

/// Bucket grid for exclusion-radius queries.
class NeighborGrid {
 public:
  NeighborGrid(const Box& extent, double cell, std::size_t expected)
      : extent_(extent), cell_(cell) {
    nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(
                                       std::ceil(extent.width() / cell)));
    ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(
                                       std::ceil(extent.height() / cell)));
    head_.assign(nx_ * ny_, -1);
    next_.reserve(expected);
    pts_.reserve(expected);
  }

  bool clear_of(Point p, double radius) const {
    const auto [cx, cy] = cell_of(p);
    const std::ptrdiff_t reach =
        static_cast<std::ptrdiff_t>(std::ceil(radius / cell_));
    const double r2 = radius * radius;
    for (std::ptrdiff_t dy = -reach; dy <= reach; ++dy) {
      const std::ptrdiff_t y = static_cast<std::ptrdiff_t>(cy) + dy;
      if (y < 0 || y >= static_cast<std::ptrdiff_t>(ny_)) continue;
      for (std::ptrdiff_t dx = -reach; dx <= reach; ++dx) {
        const std::ptrdiff_t x = static_cast<std::ptrdiff_t>(cx) + dx;
        if (x < 0 || x >= static_cast<std::ptrdiff_t>(nx_)) continue;
        for (int i = head_[y * nx_ + x]; i >= 0; i = next_[i]) {
          const Point d = pts_[i] - p;
          if (dot(d, d) < r2) return false;
        }
      }
    }
    return true;
  }

  void insert(Point p) {
    const auto [cx, cy] = cell_of(p);
    const std::size_t c = cy * nx_ + cx;
    next_.push_back(head_[c]);
    head_[c] = static_cast<int>(pts_.size());
    pts_.push_back(p);
  }

 private:
  std::pair<std::size_t, std::size_t> cell_of(Point p) const {
    auto clamp_idx = [](double v, std::size_t n) {
      if (!(v > 0.0)) return std::size_t{0};
      return std::min(static_cast<std::size_t>(v), n - 1);
    };
    return {clamp_idx((p.x - extent_.x0) / cell_, nx_),
            clamp_idx((p.y - extent_.y0) / cell_, ny_)};
  }

  Box extent_;
  double cell_;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<int> head_;
  std::vector<int> next_;
  std::vector<Point> pts_;
};

}  // namespace

std::size_t Topology::covering_sector(std::size_t bs_index, Point p) const {
  const double theta = bearing(p - bs[bs_index]);
  return sector_id(bs_index,
                   covering_wedge(theta, sector_offsets[bs_index],
                                  sectors_per_bs));
}

void Topology::validate() const {
  if (bs.empty()) throw TopologyError("topology has no base stations");
  if (sectors_per_bs < 1) throw TopologyError("sectors per BS must be >= 1");
  if (sector_offsets.size() != bs.size()) {
    throw TopologyError("need exactly one sector offset per base station");
  }
  if (!(extent.width() > 0.0 && extent.height() > 0.0)) {
    throw TopologyError("extent must have positive area");
  }
  if (!extent.contains(reference_zone) ||
      !(reference_zone.width() >= 0.0 && reference_zone.height() >= 0.0)) {
    throw TopologyError("reference zone must lie inside the extent");
  }
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (!std::isfinite(bs[i].x) || !std::isfinite(bs[i].y)) {
      throw TopologyError("base station " + std::to_string(i) +
                          " has non-finite coordinates");
    }
    if (!extent.contains(bs[i])) {
      throw TopologyError("base station " + std::to_string(i) +
                          " lies outside the extent");
    }
  }
}

Topology load_topology(std::istream& in, std::optional<Box> extent,
                       std::optional<Box> reference_zone, int sectors_per_bs) {
  Topology t;
  t.sectors_per_bs = sectors_per_bs;
  std::set<std::pair<double, double>> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string xs, ys;
    if (!(ss >> xs)) continue;
    if (!(ss >> ys)) {
      throw TopologyError("line " + std::to_string(lineno) +
                          ": expected two coordinates");
    }
    std::string extra;
    if (ss >> extra) {
      throw TopologyError("line " + std::to_string(lineno) +
                          ": unexpected trailing token '" + extra + "'");
    }
    double x = 0.0, y = 0.0;
    try {
      std::size_t nx = 0, ny = 0;
      x = std::stod(xs, &nx);
      y = std::stod(ys, &ny);
      if (nx != xs.size() || ny != ys.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw TopologyError("line " + std::to_string(lineno) +
                          ": malformed coordinate");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw TopologyError("line " + std::to_string(lineno) +
                          ": non-finite coordinate");
    }
    if (!seen.emplace(x, y).second) {
      throw TopologyError("line " + std::to_string(lineno) +
                          ": duplicate base station position");
    }
    t.bs.push_back({x, y});
  }
  if (t.bs.empty()) throw TopologyError("topology file has no base stations");
  t.extent = extent ? *extent : bounding_square(t.bs);
  t.reference_zone = reference_zone ? *reference_zone : t.extent;
  t.sector_offsets.assign(t.bs.size(), 0.0);
  t.validate();
  return t;
}

Topology load_topology_file(const std::string& path, std::optional<Box> extent,
                            std::optional<Box> reference_zone,
                            int sectors_per_bs) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file '" + path + "'");
  return load_topology(in, extent, reference_zone, sectors_per_bs);
}

Topology generate_topology(const GeneratorSpec& spec, int sectors_per_bs,
                           Rng& rng) {
  if (spec.count < 1) throw TopologyError("BS count must be >= 1");
  Topology t;
  t.extent = spec.extent;
  t.reference_zone = central_half(spec.extent);
  t.sectors_per_bs = sectors_per_bs;
  t.bs.reserve(spec.count);

  if (spec.kind == TopologyKind::Grid) {
    const int cols =
        static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.count))));
    const int rows = (spec.count + cols - 1) / cols;
    const double dx = spec.extent.width() / cols;
    const double dy = spec.extent.height() / rows;
    if (std::min(dx, dy) < spec.min_spacing) {
      throw TopologyError("grid of " + std::to_string(spec.count) +
                          " sites does not fit the extent at the minimum "
                          "spacing");
    }
    for (int k = 0; k < spec.count; ++k) {
      const int r = k / cols, c = k % cols;
      t.bs.push_back({spec.extent.x0 + (c + 0.5) * dx,
                      spec.extent.y0 + (r + 0.5) * dy});
    }
  } else {
    NeighborGrid grid(spec.extent,
                      std::max(spec.min_spacing,
                               std::sqrt(spec.extent.area() / spec.count)),
                      spec.count);
    for (int k = 0; k < spec.count; ++k) {
      int tries = 0;
      for (;;) {
        const Point p = uniform_point(spec.extent, rng);
        if (spec.min_spacing <= 0.0 || grid.clear_of(p, spec.min_spacing)) {
          grid.insert(p);
          t.bs.push_back(p);
          break;
        }
        if (++tries >= kPlacementRetriesPerMobile) {
          throw TopologyError("cannot place " + std::to_string(spec.count) +
                              " base stations at the minimum spacing");
        }
      }
    }
  }
  t.sector_offsets.assign(t.bs.size(), 0.0);
  t.validate();
  return t;
}

void randomize_sector_offsets(Topology& t, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi / t.sectors_per_bs);
  for (double& psi : t.sector_offsets) psi = u(rng);
}

Topology scale_topology(const Topology& t, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
  Topology s = t;
  for (Point& p : s.bs) p = factor * p;
  auto scale_box = [factor](const Box& b) {
    return Box{factor * b.x0, factor * b.y0, factor * b.x1, factor * b.y1};
  };
  s.extent = scale_box(t.extent);
  s.reference_zone = scale_box(t.reference_zone);
  return s;
}

std::size_t expected_mobile_count(const Topology& t, double density) {
  return static_cast<std::size_t>(std::llround(density * t.extent.area()));
}

MobilePlacement place_mobiles(const Topology& t, double density,
                              double exclusion_radius, Rng& rng) {
  if (!(exclusion_radius >= 0.0)) {
    throw std::invalid_argument("exclusion radius must be >= 0");
  }
  if (!(density >= 0.0)) throw std::invalid_argument("density must be >= 0");
  MobilePlacement out;
  out.exclusion_radius = exclusion_radius;
  out.density = density;
  const std::size_t count = expected_mobile_count(t, density);
  out.positions.reserve(count);

  const double cell = std::max(
      exclusion_radius, std::sqrt(t.extent.area() /
                                  static_cast<double>(std::max<std::size_t>(
                                      count, 1))));
  NeighborGrid grid(t.extent, cell, count);
  for (std::size_t i = 0; i < count; ++i) {
    int rejections = 0;
    for (;;) {
      const Point p = uniform_point(t.extent, rng);
      if (exclusion_radius == 0.0 || grid.clear_of(p, exclusion_radius)) {
        grid.insert(p);
        out.positions.push_back(p);
        break;
      }
      if (++rejections >= kPlacementRetriesPerMobile) {
        throw PackingError(
            "uniform clustering failed: placed " + std::to_string(i) + " of " +
            std::to_string(count) + " mobiles before " +
            std::to_string(kPlacementRetriesPerMobile) +
            " consecutive rejections (exclusion radius " +
            std::to_string(exclusion_radius) + " km)");
      }
    }
  }
  return out;
}

std::optional<std::size_t> pick_reference_mobile(
    const MobilePlacement& placement, const Topology& t, Rng& rng,
    std::span<const std::uint8_t> eligible) {
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < placement.positions.size(); ++i) {
    if (!eligible.empty() && !eligible[i]) continue;
    if (t.reference_zone.contains(placement.positions[i])) inside.push_back(i);
  }
  if (inside.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, inside.size() - 1);
  return inside[pick(rng)];
}

void write_points(std::ostream& out, std::span<const Point> points) {
  const auto old = out.precision(17);
  for (const Point& p : points) out << p.x << ' ' << p.y << '\n';
  out.precision(old);
}

}  // namespace mmuplink
