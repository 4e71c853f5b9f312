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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nphmc/experiment.hpp"

namespace {

using nlohmann::json;
using nphmc::ExperimentSpec;

int cmd_run(const ExperimentSpec& spec) {
  nphmc::ExperimentReport rep = nphmc::run_experiment(spec);
  std::cout << "model=" << spec.model << " algorithm=" << spec.algorithm
            << " runs=" << spec.runs << " samples=" << spec.cfg.n_samples
            << " burnin=" << spec.cfg.burn_in << " eps=" << spec.cfg.epsilon
            << " L=" << spec.cfg.steps << " thin=" << spec.cfg.thinning << "\n";
  int failed = 0;
  for (const auto& r : rep.runs) {
    if (r.failed) {
      ++failed;
      std::cout << "  run " << r.run << " FAILED: " << r.error << "\n";
    }
  }
  for (const auto& [k, ms] : rep.aggregate) {
    std::cout << "  " << k << " = " << ms.first << " +/- " << ms.second << "\n";
  }
  std::cout << "wrote " << spec.out_dir << "/samples.jsonl and summary.json\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trans-dimensional Hamiltonian Monte Carlo experiment runner"};
  app.require_subcommand(1);

  // run --------------------------------------------------------------------
  std::string config_path;
  std::string model, algorithm, out_dir;
  int samples = 0, burnin = -1, runs = 0, steps = -1, jobs = 0;
  double eps = 0.0, rmh_sigma = 0.0;
  int thin = 0;
  std::uint64_t seed = 0, data_seed = 0;
  bool trim_on = false, trim_off = false;

  auto* run = app.add_subcommand("run", "run an experiment and write samples + summary");
  run->add_option("--config", config_path, "JSON config; flags override its entries");
  run->add_option("--model", model, "geometric | walk | gmm | dpmm");
  run->add_option("--algorithm", algorithm, "nphmc | npdhmc | nprhmc | lmh | rmh | is");
  auto* o_samples = run->add_option("--samples", samples, "kept samples per run");
  auto* o_burnin = run->add_option("--burnin", burnin, "discarded prefix (after thinning)");
  auto* o_runs = run->add_option("--runs", runs, "independent chains");
  auto* o_eps = run->add_option("--eps", eps, "leapfrog step size");
  auto* o_steps = run->add_option("--steps", steps, "leapfrog count L");
  auto* o_thin = run->add_option("--thin", thin, "chain steps per kept sample");
  auto* o_seed = run->add_option("--seed", seed, "master seed");
  auto* o_out = run->add_option("--out", out_dir, "output directory");
  auto* o_trim = run->add_flag("--trim", trim_on, "trim unused appended coordinates");
  auto* o_notrim = run->add_flag("--no-trim", trim_off, "keep unused appended coordinates");
  auto* o_rmh = run->add_option("--rmh-sigma", rmh_sigma, "RMH proposal scale");
  auto* o_jobs = run->add_option("--jobs", jobs, "parallel runs");
  auto* o_dseed = run->add_option("--data-seed", data_seed, "dataset seed");

  // verify -------------------------------------------------------------------
  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "recompute metrics from samples.jsonl");
  verify->add_option("dir", verify_dir, "experiment output directory")->required();

  // plotdata -------------------------------------------------------------------
  std::vector<std::string> plot_dirs;
  std::string plot_dest;
  auto* plotdata = app.add_subcommand("plotdata", "emit plot-ready CSV files");
  plotdata->add_option("dirs", plot_dirs, "one or more experiment output directories")
      ->required();
  plotdata->add_option("--dest", plot_dest, "destination directory (default: first dir)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      json cfgj = json::object();
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
          std::cerr << "cannot read config " << config_path << "\n";
          return 2;
        }
        cfgj = json::parse(in);
      }

      ExperimentSpec spec;
      // model and algorithm decide the defaults: flags > config > built-in
      if (run->count("--model"))
        spec.model = model;
      else if (cfgj.contains("model"))
        spec.model = cfgj["model"];
      if (run->count("--algorithm"))
        spec.algorithm = algorithm;
      else if (cfgj.contains("algorithm"))
        spec.algorithm = cfgj["algorithm"];
      nphmc::apply_model_defaults(spec);

      auto resolve_i = [&](const CLI::Option* o, int flag_val, const char* key, int& target) {
        if (o->count())
          target = flag_val;
        else if (cfgj.contains(key))
          target = cfgj[key];
      };
      auto resolve_d = [&](const CLI::Option* o, double flag_val, const char* key,
                           double& target) {
        if (o->count())
          target = flag_val;
        else if (cfgj.contains(key))
          target = cfgj[key];
      };
      auto resolve_u = [&](const CLI::Option* o, std::uint64_t flag_val, const char* key,
                           std::uint64_t& target) {
        if (o->count())
          target = flag_val;
        else if (cfgj.contains(key))
          target = cfgj[key];
      };
      resolve_i(o_samples, samples, "samples", spec.cfg.n_samples);
      resolve_i(o_burnin, burnin, "burnin", spec.cfg.burn_in);
      resolve_i(o_runs, runs, "runs", spec.runs);
      resolve_i(o_steps, steps, "steps", spec.cfg.steps);
      resolve_i(o_jobs, jobs, "jobs", spec.jobs);
      resolve_d(o_eps, eps, "epsilon", spec.cfg.epsilon);
      resolve_d(o_rmh, rmh_sigma, "rmh_sigma", spec.cfg.rmh_sigma);
      resolve_u(o_seed, seed, "seed", spec.cfg.seed);
      resolve_u(o_dseed, data_seed, "data_seed", spec.data_seed);
      if (o_out->count())
        spec.out_dir = out_dir;
      else if (cfgj.contains("out"))
        spec.out_dir = cfgj["out"];
      if (o_trim->count())
        spec.cfg.trim = true;
      else if (o_notrim->count())
        spec.cfg.trim = false;
      else if (cfgj.contains("trim"))
        spec.cfg.trim = cfgj["trim"];
      if (cfgj.contains("extend_cap")) spec.cfg.extend_cap = cfgj["extend_cap"];
      if (cfgj.contains("mixed_accept")) spec.cfg.mixed_accept = cfgj["mixed_accept"];
      if (cfgj.contains("geom_p")) spec.geom_p = cfgj["geom_p"];
      if (cfgj.contains("gmm_train_n")) spec.gmm_train_n = cfgj["gmm_train_n"];
      if (cfgj.contains("gmm_test_n")) spec.gmm_test_n = cfgj["gmm_test_n"];
      if (cfgj.contains("gmm_true_k")) spec.gmm_true_k = cfgj["gmm_true_k"];
      if (cfgj.contains("dpmm_alpha")) spec.dpmm_alpha = cfgj["dpmm_alpha"];
      if (cfgj.contains("dpmm_eps_cut")) spec.dpmm_eps_cut = cfgj["dpmm_eps_cut"];

      // Thinning: explicit wins; baselines default to L for equal compute.
      bool baseline = spec.algorithm == "lmh" || spec.algorithm == "rmh" ||
                      spec.algorithm == "is";
      if (o_thin->count())
        spec.cfg.thinning = thin;
      else if (cfgj.contains("thin"))
        spec.cfg.thinning = cfgj["thin"];
      else
        spec.cfg.thinning = baseline ? std::max(1, spec.cfg.steps) : 1;
      spec.thin_given = o_thin->count() > 0 || cfgj.contains("thin");

      return cmd_run(spec);
    }
    if (verify->parsed()) {
      auto problems = nphmc::verify_experiment(verify_dir);
      if (problems.empty()) {
        std::cout << "verify: OK (summary matches samples)\n";
        return 0;
      }
      for (const auto& p : problems) std::cout << "verify: " << p << "\n";
      return 1;
    }
    if (plotdata->parsed()) {
      std::vector<nphmc::ExperimentReport> reports;
      reports.reserve(plot_dirs.size());
      for (const auto& d : plot_dirs) reports.push_back(nphmc::load_report(d));
      if (plot_dest.empty()) plot_dest = plot_dirs.front();
      nphmc::emit_plot_data(reports, plot_dest);
      std::cout << "wrote kde.csv, khist.csv, lppd_*.csv under " << plot_dest << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
