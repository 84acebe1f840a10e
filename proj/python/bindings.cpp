// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mmuplink/config.hpp"
#include "mmuplink/experiments.hpp"
#include "mmuplink/outage.hpp"
#include "mmuplink/propagation.hpp"

namespace py = pybind11;
using namespace mmuplink;

namespace {

py::dict stats_dict(const OutageStats& s) {
  py::dict d;
  d["n_trials"] = s.n_trials;
  d["epsilon_bar"] = s.epsilon_bar;
  d["std_error"] = s.std_error;
  d["half_width"] = s.half_width;
  d["epsilon_min"] = s.epsilon_min;
  d["epsilon_max"] = s.epsilon_max;
  d["code_rate"] = s.code_rate;
  d["throughput"] = s.throughput;
  d["ase"] = s.ase;
  return d;
}

py::dict point_dict(const DensifyPoint& p) {
  py::dict d;
  d["c_over_m"] = p.ratio;
  d["mobiles"] = p.mobiles;
  d["d_r_km"] = p.nominal_distance ? py::cast(*p.nominal_distance) : py::none();
  d["hopping"] = stats_dict(p.hopping);
  d["no_hopping"] = stats_dict(p.no_hopping);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Uplink outage of sectorized millimeter-wave networks";

  py::class_<PropagationParams>(m, "PropagationParams")
      .def(py::init<>())
      .def_static("preset", &PropagationParams::preset, py::arg("name"))
      .def_readwrite("m_max", &PropagationParams::m_max)
      .def_readwrite("m_min", &PropagationParams::m_min)
      .def_readwrite("alpha_min", &PropagationParams::alpha_min)
      .def_readwrite("alpha_max", &PropagationParams::alpha_max)
      .def_readwrite("sigma_min_db", &PropagationParams::sigma_min_db)
      .def_readwrite("sigma_max_db", &PropagationParams::sigma_max_db)
      .def_readwrite("mu", &PropagationParams::mu)
      .def_readwrite("d0", &PropagationParams::d0);

  m.def("path_loss_exponent", &path_loss_exponent, py::arg("d"), py::arg("params"));
  m.def("path_loss", &path_loss, py::arg("d"), py::arg("params"));
  m.def("shadowing_sigma_db", &shadowing_sigma_db, py::arg("d"), py::arg("params"));
  m.def("nakagami_shape", &nakagami_shape, py::arg("d"), py::arg("params"));
  m.def("code_rate", &code_rate, py::arg("beta"), py::arg("shannon_loss") = 0.794);

  py::class_<InterfererRecord>(m, "Interferer")
      .def(py::init([](double omega, double m, std::array<double, kPeriods> q,
                       std::array<double, kPeriods> c) {
             InterfererRecord r;
             r.omega = omega;
             r.m = m;
             r.q = q;
             r.c = c;
             return r;
           }),
           py::arg("omega"), py::arg("m"), py::arg("q"), py::arg("c"))
      .def_readwrite("omega", &InterfererRecord::omega)
      .def_readwrite("m", &InterfererRecord::m)
      .def_readwrite("q", &InterfererRecord::q)
      .def_readwrite("c", &InterfererRecord::c);

  py::class_<InterferenceProfile>(m, "InterferenceProfile")
      .def(py::init([](double gamma0, int m0, double beta,
                       std::vector<InterfererRecord> interferers) {
             InterferenceProfile p;
             p.gamma0 = gamma0;
             p.m0 = m0;
             p.beta = beta;
             p.interferers = std::move(interferers);
             p.validate();
             return p;
           }),
           py::arg("gamma0"), py::arg("m0"), py::arg("beta"),
           py::arg("interferers") = std::vector<InterfererRecord>{})
      .def_readwrite("gamma0", &InterferenceProfile::gamma0)
      .def_readwrite("m0", &InterferenceProfile::m0)
      .def_readwrite("beta", &InterferenceProfile::beta)
      .def_readwrite("interferers", &InterferenceProfile::interferers);

  m.def("outage_probability", &outage_probability, py::arg("profile"));
  m.def("outage_probability_no_hopping", &outage_probability_no_hopping,
        py::arg("profile"));
  m.def(
      "outage_monte_carlo",
      [](const InterferenceProfile& p, std::size_t samples, std::uint64_t seed,
         bool hopping) {
        Rng rng = make_rng(seed);
        const OutageEstimate e = outage_monte_carlo(p, samples, rng, hopping);
        return py::make_tuple(e.epsilon, e.std_error);
      },
      py::arg("profile"), py::arg("samples"), py::arg("seed") = 1,
      py::arg("hopping") = true);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_static("from_text", &parse_config_text, py::arg("text"))
      .def_static("from_file", &parse_config_file, py::arg("path"))
      .def("to_text", &serialize_config, py::arg("include_runtime") = true)
      .def("set", [](RunConfig& c, const std::string& key,
                     const std::string& value) { set_config_value(c, key, value); },
           py::arg("key"), py::arg("value"))
      .def("validate", &RunConfig::validate)
      .def("hash", [](const RunConfig& c) { return config_hash(c); })
      .def_readwrite("trials", &RunConfig::trials)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("threads", &RunConfig::threads)
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });

  m.def(
      "topology",
      [](const RunConfig& cfg) {
        std::vector<std::pair<double, double>> out;
        for (const Point& p : build_topology(cfg).bs) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("config"));

  m.def(
      "campaign",
      [](const RunConfig& cfg, std::optional<double> c_over_m) {
        cfg.validate();
        const Topology topo = build_topology(cfg);
        const Scenario s = c_over_m ? make_densified_scenario(topo, cfg, *c_over_m)
                                    : make_scenario(topo, cfg);
        Campaign c;
        {
          py::gil_scoped_release release;
          c = run_campaign(s, cfg, cfg.trials, cfg.seed, cfg.threads);
        }
        py::dict d;
        d["mobiles"] = s.mobiles;
        d["c_over_m"] = s.bs_per_mobile;
        d["hopping"] = stats_dict(c.hopping);
        d["no_hopping"] = stats_dict(c.no_hopping);
        py::list eps;
        for (const auto& t : c.trials) eps.append(t.epsilon);
        d["epsilon"] = eps;
        return d;
      },
      py::arg("config"), py::arg("c_over_m") = py::none());

  m.def(
      "densify",
      [](const RunConfig& cfg, std::vector<double> ratios) {
        cfg.validate();
        std::vector<DensifyPoint> pts;
        {
          py::gil_scoped_release release;
          pts = densification_sweep(build_topology(cfg), cfg, ratios);
        }
        py::list out;
        for (const auto& p : pts) out.append(point_dict(p));
        return out;
      },
      py::arg("config"), py::arg("ratios"));

  m.def(
      "validate",
      [](std::size_t profiles, std::size_t samples, std::uint64_t seed,
         double tolerance) {
        ValidationReport r;
        {
          py::gil_scoped_release release;
          r = validate_closed_form(profiles, samples, seed, 0, tolerance);
        }
        py::dict d;
        d["passed"] = r.passed();
        d["total"] = r.cases.size();
        py::list z;
        for (const auto& c : r.cases) z.append(c.z_score);
        d["z_scores"] = z;
        return d;
      },
      py::arg("profiles") = 50, py::arg("samples") = 100000, py::arg("seed") = 1,
      py::arg("tolerance") = 4.0);

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
