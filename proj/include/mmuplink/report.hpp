// SPDX-License-Identifier: Apache-2.0
//
// CSV output. Every file starts with '#' provenance lines:
//
//   # mmuplink 0.1.0
//   # args: densify --ratios 0.05,0.1
//   # config-hash: 1f0e...
//   # seed: 1
//   #| [propagation]
//   #| preset = newyork
//   ...
//
// The "#| " lines are the effective config minus runtime-only keys, so a run
// can be repeated from its output alone.
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmuplink/config.hpp"
#include "mmuplink/experiments.hpp"

namespace mmuplink {

/// Shortest text that reads back to the same double ("%.17g" then trimmed).
std::string format_number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

void write_header(std::ostream& out, const std::string& args,
                  const RunConfig& cfg);
void write_csv(std::ostream& out, const Table& table);

/// The "# args:" line of an output header, or empty.
std::string header_args(std::istream& in);

Table campaign_table(const Campaign& c, const Scenario& s, const RunConfig& cfg);
Table densify_table(std::span<const DensifyPoint> points, const RunConfig& cfg);
Table sweep_table(const std::string& axis, std::span<const SweepRow> rows,
                  const RunConfig& cfg);
Table links_table(const LinkCurves& curves);
Table validation_table(const ValidationReport& report);

/// One JSON object per line.
void write_trial_log(std::ostream& out, std::span<const TrialResult> trials);

}  // namespace mmuplink
