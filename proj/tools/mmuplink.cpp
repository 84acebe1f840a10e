// SPDX-License-Identifier: Apache-2.0
//
// mmuplink: uplink outage campaigns from a run config.
//
//   mmuplink densify --config run.ini --ratios 0.05,0.1,0.2 --out fig3.csv
//   mmuplink replay fig3.csv
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmuplink/config.hpp"
#include "mmuplink/experiments.hpp"
#include "mmuplink/report.hpp"

using namespace mmuplink;

namespace {

const std::vector<double> kDefaultRatios{0.05, 0.1, 0.2, 0.35, 0.5, 1.0};

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::size_t> trials;
  std::string profile;
  std::string out_path;

  std::optional<double> cm;
  std::vector<double> ratios = kDefaultRatios;
  std::string axis;
  std::vector<std::string> values;
  std::size_t links = 8;
  std::vector<double> betas{-4, -2, 0, 2, 4, 6, 8, 10, 12};
  std::size_t profiles = 50;
  std::size_t samples = 100000;
  double tolerance = 4.0;
  std::string trial_log;
  std::string replay_path;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_number(v[i]);
  }
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i];
  }
  return s;
}

/// A run config file, or an earlier output whose header echoes one.
RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.rfind("# mmuplink", 0) == 0) {
    std::istringstream is(text);
    return config_from_header(is);
  }
  return parse_config_text(text);
}

template <class T>
std::optional<T> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  std::istringstream is(v);
  T out{};
  if (!(is >> out) || !is.eof()) {
    throw std::invalid_argument(std::string(name) + ": not a number: " + v);
  }
  return out;
}

RunConfig effective_config(const Options& o) {
  RunConfig cfg = load_config(o.config_path);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(kv, 0, "--set expects key=value");
    }
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.profile == "ci") cfg.trials = 2000;
  if (o.profile == "full") cfg.trials = 100000;
  if (o.trials) cfg.trials = *o.trials;
  if (auto s = env_number<std::uint64_t>("MMUPLINK_SEED")) cfg.seed = *s;
  if (o.seed) cfg.seed = *o.seed;
  if (auto t = env_number<int>("MMUPLINK_THREADS")) cfg.threads = *t;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  return cfg;
}

void emit(const Options& o, const std::string& text) {
  if (o.out_path.empty() || o.out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + o.out_path + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + o.out_path + "'");
}

std::string render(const std::string& args, const RunConfig& cfg,
                   const Table& table, const std::string& trailer = {}) {
  std::ostringstream os;
  write_header(os, args, cfg);
  write_csv(os, table);
  os << trailer;
  return os.str();
}

int cmd_campaign(const Options& o) {
  const RunConfig cfg = effective_config(o);
  const Topology topo = build_topology(cfg);
  const Scenario s =
      o.cm ? make_densified_scenario(topo, cfg, *o.cm) : make_scenario(topo, cfg);
  const Campaign c = run_campaign(s, cfg, cfg.trials, cfg.seed, cfg.threads);
  if (!o.trial_log.empty()) {
    std::ofstream log(o.trial_log);
    if (!log) throw std::runtime_error("cannot write '" + o.trial_log + "'");
    write_trial_log(log, c.trials);
  }
  std::string args = "campaign";
  if (o.cm) args += " --cm " + format_number(*o.cm);
  emit(o, render(args, cfg, campaign_table(c, s, cfg)));
  return 0;
}

int cmd_densify(const Options& o) {
  const RunConfig cfg = effective_config(o);
  const Topology topo = build_topology(cfg);
  const auto points = densification_sweep(topo, cfg, o.ratios);
  emit(o, render("densify --ratios " + join(o.ratios), cfg,
                 densify_table(points, cfg)));
  return 0;
}

int cmd_sweep(Options o) {
  // A bare --values parses as one empty string.
  std::erase(o.values, std::string{});
  const RunConfig cfg = effective_config(o);
  const auto rows = parameter_sweep(cfg, o.axis, o.values, o.ratios);
  emit(o, render("sweep --axis " + o.axis + " --values " + join(o.values) +
                     " --ratios " + join(o.ratios),
                 cfg, sweep_table(o.axis, rows, cfg)));
  return 0;
}

int cmd_links(const Options& o) {
  const RunConfig cfg = effective_config(o);
  const double cm = o.cm.value_or(0.1);
  const Topology topo = build_topology(cfg);
  Scenario s = make_densified_scenario(topo, cfg, cm);
  // Per-link curves show geometric spread unless a nominal length is forced.
  if (cfg.reference_distance != DistanceMode::Typical) s.nominal_distance.reset();
  const LinkCurves curves =
      per_link_rate_curves(s, cfg, o.links, o.betas, cfg.seed);
  emit(o, render("links --cm " + format_number(cm) + " --links " +
                     std::to_string(o.links) + " --betas " + join(o.betas),
                 cfg, links_table(curves)));
  return 0;
}

int cmd_validate(const Options& o) {
  const RunConfig cfg = effective_config(o);
  const ValidationReport rep = validate_closed_form(
      o.profiles, o.samples, cfg.seed, cfg.threads, o.tolerance);
  const std::string summary = std::to_string(rep.passed()) + "/" +
                              std::to_string(rep.cases.size()) + " within " +
                              format_number(o.tolerance) + "σ";
  emit(o, render("validate --profiles " + std::to_string(o.profiles) +
                     " --samples " + std::to_string(o.samples) +
                     " --tolerance " + format_number(o.tolerance),
                 cfg, validation_table(rep), "# summary: " + summary + "\n"));
  std::cerr << summary << "\n";
  return rep.passed() == rep.cases.size() ? 0 : 1;
}

int cmd_gen_topo(const Options& o) {
  const RunConfig cfg = effective_config(o);
  const Topology topo = build_topology(cfg);
  std::ostringstream os;
  write_header(os, "gen-topo", cfg);
  write_points(os, topo.bs);
  emit(o, os.str());
  return 0;
}

std::vector<std::string> split_args(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

int run(std::vector<std::string> argv);

int cmd_replay(const Options& o) {
  std::ifstream in(o.replay_path);
  if (!in) throw std::runtime_error("cannot open '" + o.replay_path + "'");
  const std::string args = header_args(in);
  if (args.empty()) {
    throw std::runtime_error("'" + o.replay_path + "' has no provenance header");
  }
  std::vector<std::string> argv{"mmuplink"};
  for (auto& a : split_args(args)) argv.push_back(a);
  argv.insert(argv.end(), {"--config", o.replay_path});
  if (!o.out_path.empty()) argv.insert(argv.end(), {"--out", o.out_path});
  if (o.threads) argv.insert(argv.end(), {"--threads", std::to_string(*o.threads)});
  return run(std::move(argv));
}

int run(std::vector<std::string> argv) {
  CLI::App app{"Uplink outage and area spectral efficiency of sectorized "
               "millimeter-wave networks",
               "mmuplink"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_path,
                    "Run config, or an earlier output to take the config from");
    sub->add_option("--set", o.overrides, "Override a config key (key=value)");
    sub->add_option("--seed", o.seed, "Master seed (env MMUPLINK_SEED)");
    sub->add_option("--threads", o.threads,
                    "Worker threads, 0 = all cores (env MMUPLINK_THREADS)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--trials", o.trials, "Trials per point")
        ->check(CLI::PositiveNumber);
    sub->add_option("--profile", o.profile, "ci (2000 trials) or full (1e5)")
        ->check(CLI::IsMember({"ci", "full"}));
    sub->add_option("-o,--out", o.out_path, "Output file (default stdout)");
  };

  auto* campaign = app.add_subcommand("campaign", "Average outage over trials");
  common(campaign);
  campaign->add_option("--cm", o.cm, "Densify to this C/M first");
  campaign->add_option("--trial-log", o.trial_log,
                       "Write one JSON record per trial");

  auto* densify = app.add_subcommand("densify", "Outage and ASE versus C/M");
  common(densify);
  densify->add_option("--ratios", o.ratios, "C/M values")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "Densification sweep per value of one key");
  common(sweep);
  sweep->add_option("--axis", o.axis, "Config key to vary")->required();
  sweep->add_option("--values", o.values, "Values for the key")
      ->delimiter(',')
      ->expected(0, -1);
  sweep->add_option("--ratios", o.ratios, "C/M values")->delimiter(',');

  auto* links = app.add_subcommand("links", "Outage versus code rate per uplink");
  common(links);
  links->add_option("--cm", o.cm, "C/M of the realization (default 0.1)");
  links->add_option("--links", o.links, "Uplinks to tabulate")
      ->check(CLI::PositiveNumber);
  links->add_option("--betas", o.betas, "SINR thresholds in dB")->delimiter(',');

  auto* validate = app.add_subcommand("validate", "Closed form against simulation");
  common(validate);
  validate->add_option("--profiles", o.profiles, "Random interference profiles");
  validate->add_option("--samples", o.samples, "Simulated subframes per profile")
      ->check(CLI::PositiveNumber);
  validate->add_option("--tolerance", o.tolerance, "Allowed error in std errors");

  auto* gen = app.add_subcommand("gen-topo", "Write the configured BS layout");
  common(gen);

  auto* replay = app.add_subcommand("replay", "Repeat a run from its output header");
  replay->add_option("file", o.replay_path, "Earlier output")->required();
  replay->add_option("-o,--out", o.out_path, "Output file (default stdout)");
  replay->add_option("--threads", o.threads, "Worker threads");

  std::vector<std::string> rev(argv.rbegin(), argv.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*campaign) return cmd_campaign(o);
  if (*densify) return cmd_densify(o);
  if (*sweep) return cmd_sweep(o);
  if (*links) return cmd_links(o);
  if (*validate) return cmd_validate(o);
  if (*gen) return cmd_gen_topo(o);
  return cmd_replay(o);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "mmuplink: error: " << e.what() << "\n";
    return 1;
  }
}
