// SPDX-License-Identifier: Apache-2.0
//
// Run configuration. Text format:
//
//   # comment
//   [link]
//   beta_db = 3
//   delta: 0.1
//
// Section headers are optional; when present, a key must belong to the
// section it appears under. Omitted keys keep their defaults. Values in dB
// are converted to linear scale only when settings are handed to the
// simulation.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmuplink/association.hpp"
#include "mmuplink/beams.hpp"
#include "mmuplink/geometry.hpp"
#include "mmuplink/linkbudget.hpp"
#include "mmuplink/propagation.hpp"
#include "mmuplink/topology.hpp"

namespace mmuplink {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);

  const std::string& key() const { return key_; }
  int line() const { return line_; }  ///< 0 when not tied to a line

 private:
  std::string key_;
  int line_;
};

enum class TopologySource { Generator, File };
enum class DistanceMode { Auto, Realized, Typical };
enum class OffsetPolicy { Zero, Random };

struct RunConfig {
  // [propagation]
  std::string preset = "newyork";
  PropagationParams propagation = PropagationParams::new_york();

  // [topology]
  TopologySource topology_source = TopologySource::Generator;
  std::string topology_file;
  TopologyKind generator = TopologyKind::UniformRandom;
  int bs_count = 132;
  std::uint64_t layout_seed = 1;
  Box extent{0.0, 0.0, 2.0, 2.0};
  std::optional<Box> reference_zone;  ///< default: central half (generator)
                                      ///< or whole extent (file)
  OffsetPolicy sector_offsets = OffsetPolicy::Zero;

  // [mobiles]
  double density = 100.0;           ///< mobiles per km^2
  double exclusion_radius = 0.004;  ///< km
  int candidate_bs = 12;
  ShadowingKey shadowing_per = ShadowingKey::BaseStation;

  // [beams]
  BeamParams beams;

  // [hopping]
  int hopset_size = 1000;
  int l_over_lj = 10;
  std::optional<int> l_over_ll;  ///< defaults to l_over_lj
  double slot_ms = 0.5;
  double activity = 1.0;
  bool hopping = true;

  // [link]
  double beta_db = 3.0;
  double delta = 0.1;
  double snr_db = 70.0;
  int k_strongest = 30;
  DistanceMode reference_distance = DistanceMode::Auto;
  double typical_distance = 0.025;  ///< km, nominal link length at C/M = 1
  double shannon_loss = 0.794;

  // [run]
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  int threads = 0;  ///< 0: hardware concurrency; never affects results

  double beta_linear() const { return db_to_linear(beta_db); }
  double snr_linear() const { return db_to_linear(snr_db); }
  int effective_l_over_ll() const { return l_over_ll.value_or(l_over_lj); }

  /// Cross-key invariants; throws ConfigError.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(std::string_view text);
/// Missing or empty path yields the defaults.
RunConfig parse_config_file(const std::string& path);

/// Canonical text form; parse_config_text(serialize_config(c)) == c.
/// `include_runtime` adds keys that cannot change results (threads).
std::string serialize_config(const RunConfig& cfg, bool include_runtime = true);

/// Sets one key from its text form, as the parser does. Throws ConfigError
/// for unknown keys and out-of-range values.
void set_config_value(RunConfig& cfg, std::string_view key,
                      std::string_view value);

/// Every recognized key.
std::vector<std::string> config_keys();

/// 64-bit FNV-1a of the result-relevant serialized config.
std::uint64_t config_hash(const RunConfig& cfg);

/// Recovers the config echoed into an output header ("#| " lines).
RunConfig config_from_header(std::istream& in);

// Translation into module settings.
Topology build_topology(const RunConfig& cfg);
HopPlan build_hop_plan(const RunConfig& cfg, std::size_t sectors);
LinkSettings build_link_settings(const RunConfig& cfg);

}  // namespace mmuplink
