/* Copyright 2026 The nphmc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nphmc/ad.hpp"
#include "nphmc/baselines.hpp"
#include "nphmc/diagnostics.hpp"
#include "nphmc/experiment.hpp"
#include "nphmc/models.hpp"
#include "nphmc/npdhmc.hpp"
#include "nphmc/nphmc.hpp"
#include "nphmc/nprhmc.hpp"

namespace py = pybind11;
using namespace nphmc;

namespace {

SamplerConfig config_from_kwargs(double epsilon, int steps, int n_samples, int burn_in,
                                 int thinning, std::uint64_t seed, bool trim,
                                 std::size_t extend_cap, bool mixed_accept, double rmh_sigma) {
  SamplerConfig cfg;
  cfg.epsilon = epsilon;
  cfg.steps = steps;
  cfg.n_samples = n_samples;
  cfg.burn_in = burn_in;
  cfg.thinning = thinning;
  cfg.seed = seed;
  cfg.trim = trim;
  cfg.extend_cap = extend_cap;
  cfg.mixed_accept = mixed_accept;
  cfg.rmh_sigma = rmh_sigma;
  return cfg;
}

py::dict outcome_to_dict(const RunOutcome& out) {
  py::dict d;
  switch (out.status) {
    case RunStatus::kSuccess:
      d["status"] = "success";
      break;
    case RunStatus::kTooShort:
      d["status"] = "too_short";
      break;
    case RunStatus::kFailed:
      d["status"] = "failed";
      break;
    case RunStatus::kExtendBudget:
      d["status"] = "extend_budget";
      break;
  }
  d["log_weight"] = out.log_weight;
  d["consumed"] = out.consumed;
  d["value"] = out.value;
  std::vector<int> kinds;
  kinds.reserve(out.kinds.size());
  for (CoordKind k : out.kinds) kinds.push_back(k == CoordKind::kContinuous ? 0 : 1);
  d["kinds"] = kinds;
  return d;
}

std::vector<py::dict> chain_to_list(const std::vector<ChainSample>& chain) {
  std::vector<py::dict> out;
  out.reserve(chain.size());
  for (const auto& s : chain) {
    py::dict d;
    d["trace"] = s.trace;
    d["value"] = s.value;
    d["accepted"] = s.accepted;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trans-dimensional HMC samplers over trace-representable densities";

  py::class_<Dist1D>(m, "Dist1D")
      .def_static("normal", &Dist1D::normal, py::arg("mu"), py::arg("sigma"))
      .def_static("uniform", &Dist1D::uniform, py::arg("a"), py::arg("b"))
      .def_static("beta1", &Dist1D::beta1, py::arg("alpha"))
      .def_static("poisson", &Dist1D::poisson, py::arg("lam"))
      .def_static("laplace", &Dist1D::laplace, py::arg("loc"), py::arg("scale"))
      .def("log_pdf", &Dist1D::log_pdf)
      .def("cdf", &Dist1D::cdf)
      .def("inv_cdf", &Dist1D::inv_cdf)
      .def("__repr__", &Dist1D::describe);

  py::class_<Dataset3D>(m, "Dataset3D")
      .def_readonly("points", &Dataset3D::points)
      .def_readonly("seed", &Dataset3D::seed)
      .def_readonly("true_k", &Dataset3D::true_k)
      .def_readonly("true_means", &Dataset3D::true_means);
  m.def("make_gmm_dataset", &make_gmm_dataset, py::arg("seed"), py::arg("true_k"),
        py::arg("n_points"));

  py::class_<Model>(m, "Model")
      .def_property_readonly("name", &Model::name)
      .def("replay", [](const Model& mm, const Trace& q) { return outcome_to_dict(mm.replay(q)); })
      .def("log_density", [](const Model& mm, const Trace& q) { return log_density(mm, q); })
      .def("log_truncation",
           [](const Model& mm, const Trace& q) { return log_truncation(mm, q); })
      .def("potential",
           [](const Model& mm, const Trace& q) -> py::object {
             auto u = potential(mm, q);
             if (!u) return py::none();
             return py::float_(*u);
           })
      .def("supported_prefix",
           [](const Model& mm, const Trace& q) -> py::object {
             auto p = supported_prefix(mm, q);
             if (!p) return py::none();
             return py::cast(*p);
           })
      .def("grad_potential", [](const Model& mm, const Trace& q) {
        GradResult g = grad_potential(mm, q);
        py::dict d;
        d["ok"] = g.ok();
        d["partials"] = g.grad.partials;
        d["value"] = g.grad.value;
        return d;
      });

  m.def("geometric", &geometric, py::arg("p"));
  m.def("random_walk", &random_walk);
  m.def("gmm", &gmm, py::arg("training"));
  m.def("dpmm", &dpmm, py::arg("training"), py::arg("alpha") = 5.0,
        py::arg("eps_cut") = 0.01);

  m.def("log_base_density", &log_base_density);

  m.def(
      "run_chain",
      [](const Model& model, const std::string& algorithm, double epsilon, int steps,
         int n_samples, int burn_in, int thinning, std::uint64_t seed, bool trim,
         std::size_t extend_cap, bool mixed_accept, double rmh_sigma) {
        SamplerConfig cfg = config_from_kwargs(epsilon, steps, n_samples, burn_in, thinning,
                                               seed, trim, extend_cap, mixed_accept, rmh_sigma);
        RandomStream rng(cfg.seed);
        StepFn step;
        if (algorithm == "nphmc") {
          step = [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
            return nphmc_step(q, mm, c, r);
          };
        } else if (algorithm == "npdhmc") {
          step = [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
            return npdhmc_step(q, mm, c, r);
          };
        } else if (algorithm == "nprhmc") {
          if (!model.axis_thresholds())
            throw std::invalid_argument("nprhmc requires axis thresholds on the model");
          BoundaryOracle oracle = axis_threshold_oracle(model.axis_thresholds());
          step = [oracle](const Trace& q, const Model& mm, const SamplerConfig& c,
                          RandomSource& r) { return nprhmc_step(q, mm, oracle, c, r); };
        } else if (algorithm == "lmh") {
          step = [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
            return lmh_step(q, mm, r, c.extend_cap);
          };
        } else if (algorithm == "rmh") {
          step = [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
            return rmh_step(q, mm, c.rmh_sigma, r, c.extend_cap);
          };
        } else {
          throw std::invalid_argument("unknown algorithm: " + algorithm);
        }
        return chain_to_list(run_chain_with(model, cfg, rng, step));
      },
      py::arg("model"), py::arg("algorithm") = "npdhmc", py::arg("epsilon") = 0.1,
      py::arg("steps") = 5, py::arg("n_samples") = 1000, py::arg("burn_in") = 100,
      py::arg("thinning") = 1, py::arg("seed") = 1, py::arg("trim") = true,
      py::arg("extend_cap") = 1000000, py::arg("mixed_accept") = true,
      py::arg("rmh_sigma") = 1.0);

  m.def(
      "importance_sample",
      [](const Model& model, std::size_t n, std::uint64_t seed, std::size_t cap) {
        RandomStream rng(seed);
        ImportanceResult res = importance_sample(model, n, rng, cap);
        std::vector<py::dict> out;
        out.reserve(res.samples.size());
        for (const auto& s : res.samples) {
          py::dict d;
          d["trace"] = s.trace;
          d["value"] = s.value;
          d["log_weight"] = s.log_weight;
          out.push_back(std::move(d));
        }
        py::dict wrap;
        wrap["samples"] = out;
        wrap["skipped"] = res.skipped;
        return wrap;
      },
      py::arg("model"), py::arg("n"), py::arg("seed") = 1, py::arg("extend_cap") = 1000000);

  // diagnostics
  m.def("tvd_discrete", [](const std::vector<double>& a_data, const std::vector<double>& b_data,
                           int lo, int hi) {
    return tvd(discrete_histogram(a_data, lo, hi, true), discrete_histogram(b_data, lo, hi, true));
  });
  m.def("ess_autocorr", [](const std::vector<double>& xs) {
    EssResult e = ess_autocorr(xs);
    py::dict d;
    d["ess"] = e.ess;
    d["raw"] = e.raw;
    d["clamped"] = e.clamped;
    return d;
  });
  m.def("ess_weighted", &ess_weighted);
  m.def("kde", [](const std::vector<double>& samples, const std::vector<double>& grid,
                  py::object bandwidth) {
    std::optional<double> bw;
    if (!bandwidth.is_none()) bw = bandwidth.cast<double>();
    return kde(samples, grid, bw);
  }, py::arg("samples"), py::arg("grid"), py::arg("bandwidth") = py::none());
  m.def("lppd",
        [](std::size_t n_samples, std::size_t n_points, const std::function<double(std::size_t, std::size_t)>& f) {
          return lppd(n_samples, n_points, f);
        });
  m.def("gmm_point_log_lik", &gmm_point_log_lik);
  m.def("dpmm_point_log_lik", &dpmm_point_log_lik);

  // experiment runner
  m.def("run_experiment", [](const std::string& spec_json) {
    ExperimentSpec spec = spec_from_json_string(spec_json);
    ExperimentReport rep = run_experiment(spec);
    py::dict d;
    d["out_dir"] = rep.spec.out_dir;
    py::dict agg;
    for (const auto& [k, ms] : rep.aggregate) {
      agg[py::str(k)] = py::make_tuple(ms.first, ms.second);
    }
    d["aggregate"] = agg;
    return d;
  });
  m.def("verify_experiment", &verify_experiment);
  m.def("default_spec_json", [](const std::string& model, const std::string& algorithm) {
    ExperimentSpec spec;
    spec.model = model;
    spec.algorithm = algorithm;
    apply_model_defaults(spec);
    return spec_to_json_string(spec);
  });
}
