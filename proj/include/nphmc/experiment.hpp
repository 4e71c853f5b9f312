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

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nphmc/diagnostics.hpp"
#include "nphmc/models.hpp"
#include "nphmc/nphmc.hpp"

namespace nphmc {

/// One benchmark configuration: which model, which algorithm, sampler
/// settings, how many independent chains.
struct ExperimentSpec {
  std::string model = "geometric";    // geometric | walk | gmm | dpmm
  std::string algorithm = "npdhmc";   // nphmc | npdhmc | nprhmc | lmh | rmh | is
  SamplerConfig cfg;
  int runs = 10;
  int jobs = 1;
  std::string out_dir = "out";
  std::uint64_t data_seed = 12345;

  double geom_p = 0.2;
  int gmm_train_n = 200;
  int gmm_test_n = 50;
  int gmm_true_k = 9;
  double dpmm_alpha = 5.0;
  double dpmm_eps_cut = 0.01;

  bool thin_given = false;  // explicit --thin on the CLI overrides defaults
};

/// Fills model-appropriate defaults (leapfrog counts, step sizes, sample
/// counts, baseline thinning) for fields the user left untouched.
void apply_model_defaults(ExperimentSpec& spec);

struct EmittedSample {
  int run = 0;
  int index = 0;
  std::vector<double> value;
  std::size_t trace_len = 0;
  bool accepted = false;
  double log_weight = 0.0;  // importance sampling only
};

struct RunResult {
  int run = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> metrics;
  double wall_clock_s = 0.0;
  double s_per_sample = 0.0;
  bool failed = false;
  std::string error;
  std::vector<EmittedSample> samples;
  std::vector<double> kde_density;   // walk: density on the kde grid
  std::vector<double> lppd_curve;    // gmm/dpmm: lppd after 1..n samples
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<RunResult> runs;
  std::map<std::string, std::pair<double, double>> aggregate;  // mean, sd
  std::vector<double> kde_grid;
  Histogram k_hist;        // gmm/geometric: pooled posterior histogram
  bool has_k_hist = false;
};

/// Executes spec.runs independent chains with seeds derived from the master
/// seed, computes the model's designated metrics per run, and writes
/// samples.jsonl plus summary.json (and dataset CSVs for the mixture
/// models) under spec.out_dir.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Recomputes every per-run metric from the samples file and compares it to
/// the stored summary; returns the mismatches (empty means verified).
std::vector<std::string> verify_experiment(const std::string& out_dir);

/// Writes plot-ready CSVs next to the summaries: a KDE grid with one density
/// column per report, LPPD-versus-sample-index curves (index, mean, sd, then
/// one column per run), and the posterior count histogram.
void emit_plot_data(const std::vector<ExperimentReport>& reports, const std::string& dir);

/// Loads a previously written report (summary + samples); per-run plot data
/// (KDE densities, LPPD curves) is recomputed from the samples.
ExperimentReport load_report(const std::string& out_dir);

/// Spec <-> JSON (the --config file format and the summary echo).
std::string spec_to_json_string(const ExperimentSpec& spec);
ExperimentSpec spec_from_json_string(const std::string& text);

/// Overlays only the keys present in the JSON document onto spec.
void apply_spec_json_string(ExperimentSpec& spec, const std::string& text);

}  // namespace nphmc
