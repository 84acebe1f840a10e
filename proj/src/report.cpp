// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmuplink {

namespace {

std::string str(std::size_t v) { return std::to_string(v); }

std::vector<std::string> stats_columns(const std::string& suffix) {
  return {"epsilon_bar" + suffix, "std_error" + suffix,
          "half_width" + suffix,  "epsilon_min" + suffix,
          "epsilon_max" + suffix, "throughput" + suffix,
          "ase" + suffix};
}

void append_stats(std::vector<std::string>& row, const OutageStats& s) {
  for (double v : {s.epsilon_bar, s.std_error, s.half_width, s.epsilon_min,
                   s.epsilon_max, s.throughput, s.ase}) {
    row.push_back(format_number(v));
  }
}

std::vector<std::string> point_columns() {
  std::vector<std::string> cols{"c_over_m", "mobiles", "d_r_km", "n_trials",
                                "code_rate"};
  for (auto& c : stats_columns("")) cols.push_back(c);
  for (auto& c : stats_columns("_hop")) cols.push_back(c);
  for (auto& c : stats_columns("_nohop")) cols.push_back(c);
  return cols;
}

std::vector<std::string> point_row(const DensifyPoint& p, const RunConfig& cfg) {
  const OutageStats& sel = cfg.hopping ? p.hopping : p.no_hopping;
  std::vector<std::string> row{
      format_number(p.ratio), str(p.mobiles),
      p.nominal_distance ? format_number(*p.nominal_distance) : "realized",
      str(sel.n_trials), format_number(sel.code_rate)};
  append_stats(row, sel);
  append_stats(row, p.hopping);
  append_stats(row, p.no_hopping);
  return row;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table row width does not match header");
  }
  rows.push_back(std::move(row));
}

void write_header(std::ostream& out, const std::string& args,
                  const RunConfig& cfg) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash(cfg));
  out << "# mmuplink 0.1.0\n";
  out << "# args: " << args << "\n";
  out << "# config-hash: " << hash << "\n";
  out << "# seed: " << cfg.seed << "\n";
  std::istringstream echoed(serialize_config(cfg, false));
  std::string line;
  while (std::getline(echoed, line)) out << "#| " << line << "\n";
}

void write_csv(std::ostream& out, const Table& table) {
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(table.columns);
  for (const auto& r : table.rows) emit(r);
}

std::string header_args(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# args: ", 0) == 0) return line.substr(8);
    if (!line.empty() && line[0] != '#') break;
  }
  return {};
}

Table campaign_table(const Campaign& c, const Scenario& s,
                     const RunConfig& cfg) {
  DensifyPoint p;
  p.ratio = s.bs_per_mobile;
  p.mobiles = s.mobiles;
  p.nominal_distance = s.nominal_distance;
  p.hopping = c.hopping;
  p.no_hopping = c.no_hopping;
  Table t;
  t.columns = point_columns();
  t.add_row(point_row(p, cfg));
  return t;
}

Table densify_table(std::span<const DensifyPoint> points,
                    const RunConfig& cfg) {
  Table t;
  t.columns = point_columns();
  for (const auto& p : points) t.add_row(point_row(p, cfg));
  return t;
}

Table sweep_table(const std::string& axis, std::span<const SweepRow> rows,
                  const RunConfig& cfg) {
  Table t;
  t.columns = {"axis", "value"};
  for (auto& c : point_columns()) t.columns.push_back(c);
  for (const auto& r : rows) {
    std::vector<std::string> row{axis, r.value};
    for (auto& cell : point_row(r.point, cfg)) row.push_back(std::move(cell));
    t.add_row(std::move(row));
  }
  return t;
}

Table links_table(const LinkCurves& curves) {
  Table t;
  t.columns = {"beta_db", "code_rate"};
  for (std::size_t link : curves.links) {
    t.columns.push_back("link_" + str(link));
  }
  t.columns.push_back("average");
  for (std::size_t b = 0; b < curves.beta_db.size(); ++b) {
    std::vector<std::string> row{format_number(curves.beta_db[b]),
                                 format_number(curves.rate[b])};
    for (const auto& eps : curves.epsilon) row.push_back(format_number(eps[b]));
    row.push_back(format_number(curves.average[b]));
    t.add_row(std::move(row));
  }
  return t;
}

Table validation_table(const ValidationReport& report) {
  Table t;
  t.columns = {"case",        "interferers",    "m0",        "gamma0",
               "beta",        "closed_form",    "monte_carlo", "mc_samples",
               "null_std_error", "z_score",     "pass"};
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const ValidationCase& c = report.cases[i];
    t.add_row({str(i), str(c.profile.interferers.size()),
               std::to_string(c.profile.m0), format_number(c.profile.gamma0),
               format_number(c.profile.beta), format_number(c.closed_form),
               format_number(c.monte_carlo.epsilon),
               str(c.monte_carlo.samples), format_number(c.null_std_error),
               format_number(c.z_score), c.passed ? "1" : "0"});
  }
  return t;
}

void write_trial_log(std::ostream& out, std::span<const TrialResult> trials) {
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const TrialResult& r = trials[i];
    nlohmann::ordered_json j;
    j["trial"] = i;
    j["epsilon"] = r.epsilon;
    j["epsilon_no_hopping"] = r.epsilon_no_hopping;
    j["d_r_km"] = r.reference_distance;
    j["gamma0"] = r.gamma0;
    j["m0"] = r.m0;
    j["reference_mobile"] = r.reference_mobile;
    j["serving_sector"] = r.serving_sector;
    j["interferers"] = r.interferers;
    j["mobiles"] = r.mobiles;
    j["denied"] = r.denied;
    out << j.dump() << '\n';
  }
}

}  // namespace mmuplink
