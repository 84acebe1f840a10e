// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <sstream>
#include <utility>

namespace mmuplink {

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : "") +
                         (key.empty() ? "" : key + ": ") + message),
      key_(std::move(key)),
      line_(line) {}

namespace {

// Setters throw std::invalid_argument with a bare message; the parser adds
// key and line.
struct Invalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double to_double(std::string_view s) {
  s = trim(s);
  double scale = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    scale = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (s.empty()) return scale;
  }
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw Invalid("expected a number, got '" + std::string(s) + "'");
  }
  return v * scale;
}

template <class Int>
Int to_int(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Invalid("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw Invalid("expected on/off, got '" + std::string(s) + "'");
}

Box to_box(std::string_view s) {
  std::istringstream ss{std::string(s)};
  std::array<std::string, 4> tok;
  for (auto& t : tok) {
    if (!(ss >> t)) throw Invalid("expected four numbers: x0 y0 x1 y1");
  }
  std::string extra;
  if (ss >> extra) throw Invalid("expected four numbers: x0 y0 x1 y1");
  Box b{to_double(tok[0]), to_double(tok[1]), to_double(tok[2]),
        to_double(tok[3])};
  if (!(b.x1 > b.x0 && b.y1 > b.y0)) {
    throw Invalid("box needs x1 > x0 and y1 > y0");
  }
  return b;
}

std::string box_str(const Box& b) {
  return fmt(b.x0) + " " + fmt(b.y0) + " " + fmt(b.x1) + " " + fmt(b.y1);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Invalid(msg);
}

double positive(std::string_view v) {
  const double x = to_double(v);
  require(x > 0.0, "must be > 0");
  return x;
}

double in_unit(std::string_view v) {
  const double x = to_double(v);
  require(x >= 0.0 && x <= 1.0, "must be in [0, 1]");
  return x;
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
  bool runtime = false;
};

template <class T>
std::optional<std::string> some(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    return fmt(v);
  } else {
    return std::to_string(v);
  }
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    auto prop = [&k](const char* name, double PropagationParams::*field,
                     bool strictly_positive) {
      k.push_back({"propagation", name,
                   [field, strictly_positive](RunConfig& c, std::string_view v) {
                     const double x = to_double(v);
                     require(strictly_positive ? x > 0.0 : x >= 0.0,
                             strictly_positive ? "must be > 0" : "must be >= 0");
                     c.propagation.*field = x;
                   },
                   [field](const RunConfig& c) {
                     return some(c.propagation.*field);
                   }});
    };
    k.push_back({"propagation", "preset",
                 [](RunConfig& c, std::string_view v) {
                   const auto name = std::string(trim(v));
                   const auto p = PropagationParams::preset(name);
                   require(p.has_value(),
                           "unknown preset '" + name + "' (newyork, austin)");
                   const double mu = c.propagation.mu, d0 = c.propagation.d0;
                   c.propagation = *p;
                   c.propagation.mu = mu;
                   c.propagation.d0 = d0;
                   c.preset = name;
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.preset;
                 }});
    prop("m_max", &PropagationParams::m_max, true);
    prop("m_min", &PropagationParams::m_min, true);
    prop("alpha_min", &PropagationParams::alpha_min, true);
    prop("alpha_max", &PropagationParams::alpha_max, true);
    prop("sigma_min", &PropagationParams::sigma_min_db, false);
    prop("sigma_max", &PropagationParams::sigma_max_db, false);
    prop("mu", &PropagationParams::mu, true);
    prop("d0", &PropagationParams::d0, true);

    k.push_back({"topology", "source",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "generator") {
                     c.topology_source = TopologySource::Generator;
                   } else if (v == "file") {
                     c.topology_source = TopologySource::File;
                   } else {
                     throw Invalid("expected 'generator' or 'file'");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.topology_source == TopologySource::File
                              ? "file"
                              : "generator";
                 }});
    k.push_back({"topology", "file",
                 [](RunConfig& c, std::string_view v) {
                   c.topology_file = std::string(trim(v));
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (c.topology_file.empty()) return std::nullopt;
                   return c.topology_file;
                 }});
    k.push_back({"topology", "generator",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "uniform") {
                     c.generator = TopologyKind::UniformRandom;
                   } else if (v == "grid") {
                     c.generator = TopologyKind::Grid;
                   } else {
                     throw Invalid("expected 'uniform' or 'grid'");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.generator == TopologyKind::Grid ? "grid"
                                                            : "uniform";
                 }});
    k.push_back({"topology", "bs_count",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 1, "must be >= 1");
                   c.bs_count = n;
                 },
                 [](const RunConfig& c) { return some(c.bs_count); }});
    k.push_back({"topology", "layout_seed",
                 [](RunConfig& c, std::string_view v) {
                   c.layout_seed = to_int<std::uint64_t>(v);
                 },
                 [](const RunConfig& c) { return some(c.layout_seed); }});
    k.push_back({"topology", "extent",
                 [](RunConfig& c, std::string_view v) { c.extent = to_box(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return box_str(c.extent);
                 }});
    k.push_back({"topology", "reference_zone",
                 [](RunConfig& c, std::string_view v) {
                   c.reference_zone = to_box(v);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.reference_zone) return std::nullopt;
                   return box_str(*c.reference_zone);
                 }});
    k.push_back({"topology", "sector_offsets",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "zero") {
                     c.sector_offsets = OffsetPolicy::Zero;
                   } else if (v == "random") {
                     c.sector_offsets = OffsetPolicy::Random;
                   } else {
                     throw Invalid("expected 'zero' or 'random'");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.sector_offsets == OffsetPolicy::Random ? "random"
                                                                   : "zero";
                 }});

    k.push_back({"mobiles", "density",
                 [](RunConfig& c, std::string_view v) { c.density = positive(v); },
                 [](const RunConfig& c) { return some(c.density); }});
    k.push_back({"mobiles", "exclusion_radius",
                 [](RunConfig& c, std::string_view v) {
                   const double x = to_double(v);
                   require(x >= 0.0, "must be >= 0");
                   c.exclusion_radius = x;
                 },
                 [](const RunConfig& c) { return some(c.exclusion_radius); }});
    k.push_back({"mobiles", "candidate_bs",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 0, "must be >= 0 (0 = all)");
                   c.candidate_bs = n;
                 },
                 [](const RunConfig& c) { return some(c.candidate_bs); }});
    k.push_back({"mobiles", "shadowing_per",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "bs") {
                     c.shadowing_per = ShadowingKey::BaseStation;
                   } else if (v == "sector") {
                     c.shadowing_per = ShadowingKey::Sector;
                   } else {
                     throw Invalid("expected 'bs' or 'sector'");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.shadowing_per == ShadowingKey::Sector ? "sector"
                                                                  : "bs";
                 }});

    k.push_back({"beams", "zeta",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 1, "must be >= 1");
                   c.beams.sectors = n;
                 },
                 [](const RunConfig& c) { return some(c.beams.sectors); }});
    k.push_back({"beams", "b",
                 [](RunConfig& c, std::string_view v) {
                   c.beams.sector_sidelobe = in_unit(v);
                 },
                 [](const RunConfig& c) { return some(c.beams.sector_sidelobe); }});
    k.push_back({"beams", "theta",
                 [](RunConfig& c, std::string_view v) {
                   const double x = to_double(v);
                   require(x > 0.0 && x <= kTwoPi, "must be in (0, 2pi]");
                   c.beams.mobile_beamwidth = x;
                 },
                 [](const RunConfig& c) {
                   return some(c.beams.mobile_beamwidth);
                 }});
    k.push_back({"beams", "a",
                 [](RunConfig& c, std::string_view v) {
                   c.beams.mobile_sidelobe = in_unit(v);
                 },
                 [](const RunConfig& c) { return some(c.beams.mobile_sidelobe); }});
    k.push_back({"beams", "sector_gain",
                 [](RunConfig& c, std::string_view v) {
                   c.beams.sector_average_gain = positive(v);
                 },
                 [](const RunConfig& c) {
                   return some(c.beams.sector_average_gain);
                 }});
    k.push_back({"beams", "mobile_gain",
                 [](RunConfig& c, std::string_view v) {
                   c.beams.mobile_average_gain = positive(v);
                 },
                 [](const RunConfig& c) {
                   return some(c.beams.mobile_average_gain);
                 }});

    k.push_back({"hopping", "hopset_size",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 1, "must be >= 1");
                   c.hopset_size = n;
                 },
                 [](const RunConfig& c) { return some(c.hopset_size); }});
    k.push_back({"hopping", "l_over_lj",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 1, "must be >= 1");
                   c.l_over_lj = n;
                 },
                 [](const RunConfig& c) { return some(c.l_over_lj); }});
    k.push_back({"hopping", "l_over_ll",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 1, "must be >= 1");
                   c.l_over_ll = n;
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.l_over_ll) return std::nullopt;
                   return std::to_string(*c.l_over_ll);
                 }});
    k.push_back({"hopping", "slot_ms",
                 [](RunConfig& c, std::string_view v) { c.slot_ms = positive(v); },
                 [](const RunConfig& c) { return some(c.slot_ms); }});
    k.push_back({"hopping", "activity",
                 [](RunConfig& c, std::string_view v) { c.activity = in_unit(v); },
                 [](const RunConfig& c) { return some(c.activity); }});
    k.push_back({"hopping", "enabled",
                 [](RunConfig& c, std::string_view v) { c.hopping = to_bool(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.hopping ? "on" : "off";
                 }});

    k.push_back({"link", "beta_db",
                 [](RunConfig& c, std::string_view v) { c.beta_db = to_double(v); },
                 [](const RunConfig& c) { return some(c.beta_db); }});
    k.push_back({"link", "delta",
                 [](RunConfig& c, std::string_view v) { c.delta = in_unit(v); },
                 [](const RunConfig& c) { return some(c.delta); }});
    k.push_back({"link", "snr_db",
                 [](RunConfig& c, std::string_view v) { c.snr_db = to_double(v); },
                 [](const RunConfig& c) { return some(c.snr_db); }});
    k.push_back({"link", "k_strongest",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 1, "must be >= 1");
                   c.k_strongest = n;
                 },
                 [](const RunConfig& c) { return some(c.k_strongest); }});
    k.push_back({"link", "reference_distance",
                 [](RunConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "auto") {
                     c.reference_distance = DistanceMode::Auto;
                   } else if (v == "realized") {
                     c.reference_distance = DistanceMode::Realized;
                   } else if (v == "typical") {
                     c.reference_distance = DistanceMode::Typical;
                   } else {
                     throw Invalid("expected 'auto', 'realized' or 'typical'");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   switch (c.reference_distance) {
                     case DistanceMode::Realized: return "realized";
                     case DistanceMode::Typical: return "typical";
                     default: return "auto";
                   }
                 }});
    k.push_back({"link", "typical_distance",
                 [](RunConfig& c, std::string_view v) {
                   c.typical_distance = positive(v);
                 },
                 [](const RunConfig& c) { return some(c.typical_distance); }});
    k.push_back({"link", "shannon_loss",
                 [](RunConfig& c, std::string_view v) {
                   const double x = to_double(v);
                   require(x > 0.0 && x <= 1.0, "must be in (0, 1]");
                   c.shannon_loss = x;
                 },
                 [](const RunConfig& c) { return some(c.shannon_loss); }});

    k.push_back({"run", "trials",
                 [](RunConfig& c, std::string_view v) {
                   const auto n = to_int<std::size_t>(v);
                   require(n >= 1, "must be >= 1");
                   c.trials = n;
                 },
                 [](const RunConfig& c) { return some(c.trials); }});
    k.push_back({"run", "seed",
                 [](RunConfig& c, std::string_view v) {
                   c.seed = to_int<std::uint64_t>(v);
                 },
                 [](const RunConfig& c) { return some(c.seed); }});
    k.push_back({"run", "threads",
                 [](RunConfig& c, std::string_view v) {
                   const int n = to_int<int>(v);
                   require(n >= 0, "must be >= 0 (0 = all cores)");
                   c.threads = n;
                 },
                 [](const RunConfig& c) { return some(c.threads); }, true});
    return k;
  }();
  return keys;
}

const Key* find_key(std::string_view name) {
  for (const Key& k : key_table()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view s) {
  return std::any_of(key_table().begin(), key_table().end(),
                     [s](const Key& k) { return s == k.section; });
}

struct Entry {
  const Key* key;
  std::string value;
  int line;
};

RunConfig apply(const std::vector<Entry>& entries) {
  RunConfig cfg;
  // The preset replaces the six propagation values, so it goes first and
  // explicit values override it regardless of order in the file.
  auto run = [&cfg](const Entry& e) {
    try {
      e.key->set(cfg, e.value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(e.key->name, e.line, ex.what());
    }
  };
  for (const Entry& e : entries) {
    if (std::string_view(e.key->name) == "preset") run(e);
  }
  for (const Entry& e : entries) {
    if (std::string_view(e.key->name) != "preset") run(e);
  }
  cfg.validate();
  return cfg;
}

}  // namespace

void RunConfig::validate() const {
  auto check = [](bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(key, 0, msg);
  };
  try {
    propagation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("propagation", 0, e.what());
  }
  try {
    beams.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("beams", 0, e.what());
  }
  check(delta >= 0.0 && delta <= 1.0, "delta", "must be in [0, 1]");
  check(density > 0.0, "density", "must be > 0");
  check(exclusion_radius >= 0.0, "exclusion_radius", "must be >= 0");
  check(topology_source == TopologySource::Generator || !topology_file.empty(),
        "file", "topology source 'file' needs a topology file path");
  check(extent.width() > 0.0 && extent.height() > 0.0, "extent",
        "must have positive area");
  check(!reference_zone || extent.contains(*reference_zone), "reference_zone",
        "must lie inside the extent");
  check(hopset_size % l_over_lj == 0, "l_over_lj",
        "must divide hopset_size = " + std::to_string(hopset_size));
  check(hopset_size % effective_l_over_ll() == 0, "l_over_ll",
        "must divide hopset_size = " + std::to_string(hopset_size));
  check(k_strongest >= 1, "k_strongest", "must be >= 1");
  check(trials >= 1, "trials", "must be >= 1");
}

RunConfig parse_config(std::istream& in) {
  std::vector<Entry> entries;
  std::string section;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("", lineno, "malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) {
        throw ConfigError("", lineno, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw ConfigError("", lineno, "expected 'key = value'");
    }
    const std::string name(trim(line.substr(0, sep)));
    const Key* key = find_key(name);
    if (key == nullptr) throw ConfigError(name, lineno, "unknown key");
    if (!section.empty() && section != key->section) {
      throw ConfigError(name, lineno,
                        "belongs in section [" + std::string(key->section) +
                            "], not [" + section + "]");
    }
    entries.push_back({key, std::string(trim(line.substr(sep + 1))), lineno});
  }
  return apply(entries);
}

RunConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

RunConfig parse_config_file(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const RunConfig& cfg, bool include_runtime) {
  std::string out;
  const char* section = nullptr;
  for (const Key& k : key_table()) {
    if (k.runtime && !include_runtime) continue;
    const auto v = k.get(cfg);
    if (!v) continue;
    if (section == nullptr || std::string_view(section) != k.section) {
      section = k.section;
      out += "[";
      out += section;
      out += "]\n";
    }
    out += k.name;
    out += " = ";
    out += *v;
    out += "\n";
  }
  return out;
}

void set_config_value(RunConfig& cfg, std::string_view key,
                      std::string_view value) {
  const Key* k = find_key(trim(key));
  if (k == nullptr) throw ConfigError(std::string(key), 0, "unknown key");
  try {
    k->set(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(k->name, 0, e.what());
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key& k : key_table()) out.emplace_back(k.name);
  return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(cfg, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig config_from_header(std::istream& in) {
  std::string echoed;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("#| ", 0) == 0) echoed += line.substr(3) + "\n";
  }
  return parse_config_text(echoed);
}

Topology build_topology(const RunConfig& cfg) {
  Topology t;
  if (cfg.topology_source == TopologySource::File) {
    t = load_topology_file(cfg.topology_file, cfg.extent, cfg.reference_zone,
                           cfg.beams.sectors);
  } else {
    GeneratorSpec spec;
    spec.kind = cfg.generator;
    spec.count = cfg.bs_count;
    spec.extent = cfg.extent;
    spec.min_spacing = cfg.propagation.d0;
    Rng rng = make_rng(stream_seed(cfg.layout_seed, Stream::Layout));
    t = generate_topology(spec, cfg.beams.sectors, rng);
    if (cfg.reference_zone) t.reference_zone = *cfg.reference_zone;
  }
  if (cfg.sector_offsets == OffsetPolicy::Random) {
    Rng rng = make_rng(stream_seed(cfg.layout_seed, Stream::SectorOffsets));
    randomize_sector_offsets(t, rng);
  }
  t.validate();
  return t;
}

HopPlan build_hop_plan(const RunConfig& cfg, std::size_t sectors) {
  HopPlan plan = HopPlan::uniform(cfg.hopset_size, cfg.effective_l_over_ll(),
                                  sectors, cfg.slot_ms, cfg.activity);
  if (cfg.l_over_lj != cfg.effective_l_over_ll()) {
    plan.reference_block = cfg.hopset_size / cfg.l_over_lj;
  }
  plan.validate();
  return plan;
}

LinkSettings build_link_settings(const RunConfig& cfg) {
  LinkSettings s;
  s.beta = cfg.beta_linear();
  s.delta = cfg.delta;
  s.snr = cfg.snr_linear();
  return s;
}

}  // namespace mmuplink
