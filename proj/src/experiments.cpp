// SPDX-License-Identifier: Apache-2.0
#include "mmuplink/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mmuplink/association.hpp"
#include "mmuplink/linkbudget.hpp"

namespace mmuplink {

namespace {

constexpr int kMaxPlacementAttempts = 1000;

double nominal_for_ratio(const RunConfig& cfg, double ratio) {
  return cfg.typical_distance / std::sqrt(ratio);
}

struct Network {
  MobilePlacement placement;
  Association association;
  ShadowingField shadowing;
};

Network realize(const Scenario& s, const RunConfig& cfg,
                const std::vector<int>& capacity, std::uint64_t seed,
                int attempt, Rng& rng) {
  MobilePlacement placement =
      place_mobiles(s.topology, s.density, cfg.exclusion_radius, rng);
  ShadowingField shadowing(derive_seed(stream_seed(seed, Stream::Shadowing),
                                       static_cast<std::uint64_t>(attempt)),
                           s.topology, cfg.propagation, cfg.shadowing_per);
  AssociationOptions opts;
  opts.candidate_bs = cfg.candidate_bs;
  Association assoc = associate(s.topology, placement.positions, shadowing,
                                cfg.propagation, capacity, rng, opts);
  return {std::move(placement), std::move(assoc), shadowing};
}

}  // namespace

double code_rate(double beta_linear, double shannon_loss) {
  if (!(beta_linear >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(shannon_loss > 0.0 && shannon_loss <= 1.0)) {
    throw std::invalid_argument("shannon loss must be in (0, 1]");
  }
  return std::log2(1.0 + shannon_loss * beta_linear);
}

Scenario make_scenario(const Topology& topology, const RunConfig& cfg) {
  Scenario s;
  s.topology = topology;
  s.density = cfg.density;
  s.mobiles = expected_mobile_count(topology, cfg.density);
  s.bs_per_mobile = s.mobiles == 0 ? 0.0
                                   : static_cast<double>(topology.bs_count()) /
                                         static_cast<double>(s.mobiles);
  if (cfg.reference_distance == DistanceMode::Typical && s.mobiles > 0) {
    s.nominal_distance = nominal_for_ratio(cfg, s.bs_per_mobile);
  }
  return s;
}

Scenario make_densified_scenario(const Topology& base, const RunConfig& cfg,
                                 double ratio) {
  if (!(ratio > 0.0)) throw std::invalid_argument("C/M must be > 0");
  const double target_mobiles =
      std::round(static_cast<double>(base.bs_count()) / ratio);
  const double factor =
      std::sqrt(target_mobiles / (cfg.density * base.extent.area()));
  Scenario s;
  s.topology = scale_topology(base, factor);
  s.density = cfg.density;
  s.mobiles = expected_mobile_count(s.topology, cfg.density);
  s.bs_per_mobile = static_cast<double>(base.bs_count()) /
                    static_cast<double>(std::max<std::size_t>(s.mobiles, 1));
  if (cfg.reference_distance != DistanceMode::Realized) {
    s.nominal_distance = nominal_for_ratio(cfg, ratio);
  }
  return s;
}

TrialResult run_trial(const Scenario& scenario, const RunConfig& cfg,
                      std::uint64_t trial_seed) {
  const HopPlan plan = build_hop_plan(cfg, scenario.topology.sector_count());
  const std::vector<int> capacity = plan.capacities();
  LinkSettings settings = build_link_settings(cfg);
  settings.nominal_distance = scenario.nominal_distance;

  Rng rng = make_rng(trial_seed);
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    Network net = realize(scenario, cfg, capacity, trial_seed, attempt, rng);
    const auto& serving = net.association.serving;
    std::vector<std::uint8_t> eligible(serving.size());
    for (std::size_t i = 0; i < serving.size(); ++i) {
      eligible[i] = serving[i] != kDenied;
    }
    const auto ref =
        pick_reference_mobile(net.placement, scenario.topology, rng, eligible);
    if (!ref) continue;

    Realization real{&scenario.topology, net.placement.positions,
                     &net.association, &net.shadowing};
    InterferenceProfile profile = build_profile(
        real, *ref, plan, settings, cfg.beams, cfg.propagation, rng);

    TrialResult r;
    r.interferers = profile.interferers.size();
    truncate_strongest(profile, static_cast<std::size_t>(cfg.k_strongest));
    r.epsilon = outage_probability(profile);
    r.epsilon_no_hopping = outage_probability_no_hopping(profile);
    r.reference_mobile = *ref;
    r.serving_sector = static_cast<std::size_t>(serving[*ref]);
    r.reference_distance = scenario.nominal_distance.value_or(
        distance(net.placement.positions[*ref],
                 scenario.topology.sector_position(r.serving_sector)));
    r.gamma0 = profile.gamma0;
    r.m0 = profile.m0;
    r.mobiles = net.placement.positions.size();
    r.denied = net.association.denied.size();
    return r;
  }
  throw std::runtime_error(
      "no served mobile inside the reference zone after " +
      std::to_string(kMaxPlacementAttempts) + " placements");
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

OutageStats summarize(std::span<const double> epsilons, double density,
                      double rate) {
  OutageStats st;
  st.n_trials = epsilons.size();
  if (epsilons.empty()) return st;
  const double n = static_cast<double>(epsilons.size());
  st.epsilon_bar = pairwise_sum(epsilons) / n;
  // Rounding can push the mean a hair outside the sample range.
  const auto [lo, hi] = std::minmax_element(epsilons.begin(), epsilons.end());
  st.epsilon_min = *lo;
  st.epsilon_max = *hi;
  st.epsilon_bar = std::clamp(st.epsilon_bar, st.epsilon_min, st.epsilon_max);
  if (epsilons.size() > 1) {
    std::vector<double> sq(epsilons.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
      const double d = epsilons[i] - st.epsilon_bar;
      sq[i] = d * d;
    }
    st.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  st.half_width = 1.959963984540054 * st.std_error;
  st.code_rate = rate;
  st.throughput = rate * (1.0 - st.epsilon_bar);
  st.ase = density * rate * (1.0 - st.epsilon_bar);
  return st;
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t workers =
      threads > 0 ? static_cast<std::size_t>(threads)
                  : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Campaign run_campaign(const Scenario& scenario, const RunConfig& cfg,
                      std::size_t n_trials, std::uint64_t seed, int threads) {
  if (n_trials == 0) throw std::invalid_argument("need at least one trial");
  Campaign c;
  c.trials.resize(n_trials);
  const std::uint64_t base = stream_seed(seed, Stream::Trial);
  parallel_for(n_trials, threads, [&](std::size_t i) {
    c.trials[i] = run_trial(scenario, cfg, derive_seed(base, i));
  });
  std::vector<double> hop(n_trials), nohop(n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    hop[i] = c.trials[i].epsilon;
    nohop[i] = c.trials[i].epsilon_no_hopping;
  }
  const double rate = code_rate(cfg.beta_linear(), cfg.shannon_loss);
  c.hopping = summarize(hop, scenario.density, rate);
  c.no_hopping = summarize(nohop, scenario.density, rate);
  return c;
}

std::vector<DensifyPoint> densification_sweep(const Topology& base,
                                              const RunConfig& cfg,
                                              std::span<const double> ratios) {
  std::vector<DensifyPoint> out;
  out.reserve(ratios.size());
  for (double ratio : ratios) {
    if (ratio < 0.05 || ratio > 1.0) {
      std::clog << "warning: C/M = " << ratio
                << " is outside the calibrated range [0.05, 1]\n";
    }
    const Scenario s = make_densified_scenario(base, cfg, ratio);
    const Campaign c = run_campaign(s, cfg, cfg.trials, cfg.seed, cfg.threads);
    DensifyPoint p;
    p.ratio = ratio;
    p.mobiles = s.mobiles;
    p.scale = s.topology.extent.width() / base.extent.width();
    p.nominal_distance = s.nominal_distance;
    p.hopping = c.hopping;
    p.no_hopping = c.no_hopping;
    out.push_back(p);
  }
  return out;
}

std::vector<SweepRow> parameter_sweep(const RunConfig& cfg,
                                      const std::string& axis,
                                      std::span<const std::string> values,
                                      std::span<const double> ratios) {
  // Reject an unknown axis even when there is nothing to run.
  const auto keys = config_keys();
  if (std::find(keys.begin(), keys.end(), axis) == keys.end()) {
    throw ConfigError(axis, 0, "unknown sweep axis");
  }
  std::vector<SweepRow> out;
  for (const std::string& v : values) {
    RunConfig c = cfg;
    set_config_value(c, axis, v);
    c.validate();
    const Topology topo = build_topology(c);
    for (const DensifyPoint& p : densification_sweep(topo, c, ratios)) {
      out.push_back({v, p});
    }
  }
  return out;
}

LinkCurves per_link_rate_curves(const Scenario& scenario, const RunConfig& cfg,
                                std::size_t n_links,
                                std::span<const double> beta_db,
                                std::uint64_t seed) {
  if (n_links == 0) throw std::invalid_argument("need at least one link");
  const HopPlan plan = build_hop_plan(cfg, scenario.topology.sector_count());
  LinkSettings settings = build_link_settings(cfg);
  settings.nominal_distance = scenario.nominal_distance;

  const std::uint64_t links_seed = stream_seed(seed, Stream::Links);
  Rng rng = make_rng(links_seed);
  const Network net = realize(scenario, cfg, plan.capacities(), seed, 0, rng);
  std::vector<std::size_t> served;
  for (std::size_t i = 0; i < net.association.serving.size(); ++i) {
    if (net.association.served(i)) served.push_back(i);
  }
  if (served.empty()) throw std::runtime_error("realization has no served uplink");

  LinkCurves out;
  out.served = served.size();
  out.beta_db.assign(beta_db.begin(), beta_db.end());
  for (double b : beta_db) {
    out.rate.push_back(code_rate(db_to_linear(b), cfg.shannon_loss));
  }
  std::sample(served.begin(), served.end(), std::back_inserter(out.links),
              std::min(n_links, served.size()), rng);

  const Realization real{&scenario.topology, net.placement.positions,
                         &net.association, &net.shadowing};
  std::vector<std::vector<double>> all(served.size());
  parallel_for(served.size(), cfg.threads, [&](std::size_t n) {
    const std::size_t mobile = served[n];
    Rng local = make_rng(derive_seed(links_seed, mobile));
    InterferenceProfile profile = build_profile(
        real, mobile, plan, settings, cfg.beams, cfg.propagation, local);
    truncate_strongest(profile, static_cast<std::size_t>(cfg.k_strongest));
    for (double b : beta_db) {
      profile.beta = db_to_linear(b);
      all[n].push_back(cfg.hopping ? outage_probability(profile)
                                   : outage_probability_no_hopping(profile));
    }
  });

  for (std::size_t link : out.links) {
    const auto pos = std::lower_bound(served.begin(), served.end(), link);
    out.epsilon.push_back(all[static_cast<std::size_t>(pos - served.begin())]);
  }
  std::vector<double> column(served.size());
  for (std::size_t b = 0; b < beta_db.size(); ++b) {
    for (std::size_t n = 0; n < served.size(); ++n) column[n] = all[n][b];
    out.average.push_back(pairwise_sum(column) /
                          static_cast<double>(served.size()));
  }
  return out;
}

InterferenceProfile random_profile(Rng& rng, const ProfileRanges& r) {
  std::uniform_int_distribution<int> count(r.min_interferers,
                                           r.max_interferers);
  std::uniform_int_distribution<int> shape(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) {
    return std::pow(10.0, std::log10(lo) +
                              unit(rng) * (std::log10(hi) - std::log10(lo)));
  };

  InterferenceProfile p;
  p.m0 = shape(rng);
  p.gamma0 = log_uniform(r.gamma0_min, r.gamma0_max);
  p.beta = db_to_linear(r.beta_db_min +
                        unit(rng) * (r.beta_db_max - r.beta_db_min));
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    InterfererRecord rec;
    rec.mobile = static_cast<std::size_t>(i);
    rec.omega = log_uniform(r.omega_min, r.omega_max);
    rec.m = r.m_min + unit(rng) * (r.m_max - r.m_min);
    rec.q.fill(unit(rng));
    rec.c = fractional_durations(unit(rng), 1.0);
    p.interferers.push_back(rec);
  }
  return p;
}

std::size_t ValidationReport::passed() const {
  return static_cast<std::size_t>(std::count_if(
      cases.begin(), cases.end(),
      [](const ValidationCase& c) { return c.passed; }));
}

ValidationReport validate_closed_form(std::size_t profiles,
                                      std::size_t samples, std::uint64_t seed,
                                      int threads, double tolerance_sigmas,
                                      const ProfileRanges& ranges) {
  ValidationReport report;
  report.tolerance_sigmas = tolerance_sigmas;
  report.cases.resize(profiles);
  const std::uint64_t base = stream_seed(seed, Stream::Validation);
  parallel_for(profiles, threads, [&](std::size_t i) {
    Rng rng = make_rng(derive_seed(base, i));
    ValidationCase& c = report.cases[i];
    c.profile = random_profile(rng, ranges);
    c.closed_form = outage_probability(c.profile);
    c.monte_carlo = outage_monte_carlo(c.profile, samples, rng);
    const double eps = c.closed_form;
    c.null_std_error =
        std::sqrt(eps * (1.0 - eps) / static_cast<double>(samples));
    const double diff = std::abs(c.monte_carlo.epsilon - eps);
    c.z_score = c.null_std_error > 0.0 ? diff / c.null_std_error
                                       : (diff == 0.0 ? 0.0 : INFINITY);
    c.passed = diff <= tolerance_sigmas * c.null_std_error;
  });
  return report;
}

}  // namespace mmuplink
