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

#include "nphmc/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "nphmc/baselines.hpp"
#include "nphmc/npdhmc.hpp"
#include "nphmc/nprhmc.hpp"
#include "nphmc/rng.hpp"

namespace nphmc {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kKdeLo = 0.0;
constexpr double kKdeHi = 3.0;
constexpr std::size_t kKdePoints = 121;
constexpr int kGeomSupportMax = 50;

bool is_baseline(const std::string& algo) {
  return algo == "lmh" || algo == "rmh" || algo == "is";
}

struct ModelBundle {
  Model model;
  Dataset3D train;
  Dataset3D test;
  bool has_data = false;
};

ModelBundle build_model(const ExperimentSpec& spec) {
  if (spec.model == "geometric") return {geometric(spec.geom_p), {}, {}, false};
  if (spec.model == "walk") return {random_walk(), {}, {}, false};
  if (spec.model == "gmm" || spec.model == "dpmm") {
    std::size_t total = static_cast<std::size_t>(spec.gmm_train_n + spec.gmm_test_n);
    Dataset3D full = make_gmm_dataset(spec.data_seed, spec.gmm_true_k, total);
    Dataset3D train = full;
    Dataset3D test = full;
    train.points.assign(full.points.begin(),
                        full.points.begin() + spec.gmm_train_n);
    test.points.assign(full.points.begin() + spec.gmm_train_n, full.points.end());
    if (spec.model == "gmm") return {gmm(train), train, test, true};
    return {dpmm(train, spec.dpmm_alpha, spec.dpmm_eps_cut), train, test, true};
  }
  throw std::invalid_argument("unknown model: " + spec.model);
}

StepFn make_step(const ExperimentSpec& spec, const Model& m) {
  if (spec.algorithm == "nphmc") {
    return [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
      return nphmc_step(q, mm, c, r);
    };
  }
  if (spec.algorithm == "npdhmc") {
    return [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
      return npdhmc_step(q, mm, c, r);
    };
  }
  if (spec.algorithm == "nprhmc") {
    if (!m.axis_thresholds())
      throw std::invalid_argument(
          "nprhmc needs a boundary oracle; only models with axis-aligned branch "
          "thresholds (geometric) provide one");
    BoundaryOracle oracle = axis_threshold_oracle(m.axis_thresholds());
    return [oracle](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
      return nprhmc_step(q, mm, oracle, c, r);
    };
  }
  if (spec.algorithm == "lmh") {
    return [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
      return lmh_step(q, mm, r, c.extend_cap);
    };
  }
  if (spec.algorithm == "rmh") {
    return [](const Trace& q, const Model& mm, const SamplerConfig& c, RandomSource& r) {
      return rmh_step(q, mm, c.rmh_sigma, r, c.extend_cap);
    };
  }
  throw std::invalid_argument("unknown algorithm: " + spec.algorithm);
}

Histogram geometric_pmf_hist(double p) {
  return pmf_histogram(
      [p](int k) { return std::pow(1.0 - p, k - 1) * p; }, 1, kGeomSupportMax, true);
}

std::vector<double> kde_grid() {
  std::vector<double> g(kKdePoints);
  for (std::size_t i = 0; i < kKdePoints; ++i)
    g[i] = kKdeLo + (kKdeHi - kKdeLo) * static_cast<double>(i) /
                        static_cast<double>(kKdePoints - 1);
  return g;
}

// Running log-sum-exp accumulator per test point for the LPPD curve.
struct RunningLse {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  void add(double x) {
    if (x <= max) {
      sum += std::exp(x - max);
    } else {
      sum = sum * std::exp(max - x) + 1.0;
      max = x;
    }
  }
  double value() const { return max + std::log(sum); }
};

double weighted_lppd(const std::vector<EmittedSample>& samples, const Dataset3D& test,
                     bool is_dpmm) {
  double total = 0.0;
  std::vector<double> terms(samples.size());
  std::vector<double> logw(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) logw[j] = samples[j].log_weight;
  double logz = log_sum_exp(logw);
  for (const auto& y : test.points) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      double ll = is_dpmm ? dpmm_point_log_lik(samples[j].value, y)
                          : gmm_point_log_lik(samples[j].value, y);
      terms[j] = logw[j] + ll;
    }
    total += log_sum_exp(terms) - logz;
  }
  return total;
}

void compute_run_metrics(const ExperimentSpec& spec, const ModelBundle& bundle,
                         RunResult& run) {
  const auto& samples = run.samples;
  if (samples.empty()) return;
  bool weighted = spec.algorithm == "is";

  if (!weighted) {
    double acc = 0.0;
    for (const auto& s : samples) acc += s.accepted ? 1.0 : 0.0;
    run.metrics["accept_rate"] = acc / static_cast<double>(samples.size());
  } else {
    std::vector<double> w(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) w[i] = std::exp(samples[i].log_weight);
    run.metrics["ess_weighted"] = ess_weighted(w);
  }

  std::vector<double> first(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) first[i] = samples[i].value[0];

  if (spec.model == "geometric") {
    Histogram truth = geometric_pmf_hist(spec.geom_p);
    Histogram emp;
    if (weighted) {
      emp = truth;  // same support
      std::fill(emp.mass.begin(), emp.mass.end(), 0.0);
      double z = 0.0;
      for (const auto& s : samples) z += std::exp(s.log_weight);
      for (const auto& s : samples) {
        long k = std::lround(s.value[0]);
        std::size_t idx = k <= kGeomSupportMax ? static_cast<std::size_t>(k - 1)
                                               : emp.mass.size() - 1;
        emp.mass[idx] += std::exp(s.log_weight) / z;
      }
    } else {
      emp = discrete_histogram(first, 1, kGeomSupportMax, true);
    }
    run.metrics["tvd"] = tvd(emp, truth);
    run.metrics["mean_k"] = mean(first);
  } else if (spec.model == "walk") {
    if (!weighted) {
      EssResult e = ess_autocorr(first);
      run.metrics["ess"] = e.ess;
      run.metrics["ess_raw"] = e.raw;
    }
    run.kde_density = kde(first, kde_grid());
    run.metrics["mean_start"] = mean(first);
  } else if (spec.model == "gmm" || spec.model == "dpmm") {
    bool is_dpmm = spec.model == "dpmm";
    if (weighted) {
      run.metrics["lppd"] = weighted_lppd(samples, bundle.test, is_dpmm);
    } else {
      std::vector<RunningLse> acc(bundle.test.points.size());
      run.lppd_curve.resize(samples.size());
      for (std::size_t j = 0; j < samples.size(); ++j) {
        for (std::size_t i = 0; i < bundle.test.points.size(); ++i) {
          double ll = is_dpmm ? dpmm_point_log_lik(samples[j].value, bundle.test.points[i])
                              : gmm_point_log_lik(samples[j].value, bundle.test.points[i]);
          acc[i].add(ll);
        }
        double total = 0.0;
        for (const auto& a : acc) total += a.value() - std::log(static_cast<double>(j + 1));
        run.lppd_curve[j] = total;
      }
      run.metrics["lppd"] = run.lppd_curve.back();
    }
    if (spec.model == "gmm") {
      Histogram kh = discrete_histogram(first, 1, 30, true);
      std::size_t mode = 0;
      for (std::size_t i = 1; i < kh.mass.size(); ++i)
        if (kh.mass[i] > kh.mass[mode]) mode = i;
      run.metrics["k_mode"] = kh.labels[mode];
      run.metrics["k_mean"] = mean(first);
    } else {
      double min_sum = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (const auto& s : samples) {
        int k = static_cast<int>(s.value[0]);
        double sum = 0.0;
        for (int i = 1; i <= k; ++i) {
          double wi = s.value[static_cast<std::size_t>(i)];
          if (!(wi > 0.0 && wi < 1.0)) ok = false;
          sum += wi;
        }
        min_sum = std::min(min_sum, sum);
      }
      run.metrics["min_weight_sum"] = min_sum;
      run.metrics["weights_ok"] = ok ? 1.0 : 0.0;
      run.metrics["k_mean"] = mean(first);
    }
  }
}

RunResult execute_run(const ExperimentSpec& spec, const ModelBundle& bundle, int run_idx) {
  RunResult res;
  res.run = run_idx;
  res.seed = derive_seed(spec.cfg.seed, static_cast<std::uint64_t>(run_idx));
  RandomStream rng(res.seed);
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (spec.algorithm == "is") {
      std::size_t n = static_cast<std::size_t>(spec.cfg.n_samples) *
                      static_cast<std::size_t>(spec.cfg.thinning);
      ImportanceResult ir = importance_sample(bundle.model, n, rng, spec.cfg.extend_cap);
      res.metrics["is_skipped"] = static_cast<double>(ir.skipped);
      res.samples.reserve(ir.samples.size());
      int idx = 0;
      for (auto& ws : ir.samples) {
        EmittedSample es;
        es.run = run_idx;
        es.index = idx++;
        es.value = std::move(ws.value);
        es.trace_len = ws.trace.size();
        es.accepted = true;
        es.log_weight = ws.log_weight;
        res.samples.push_back(std::move(es));
      }
    } else {
      StepFn step = make_step(spec, bundle.model);
      std::vector<ChainSample> chain = run_chain_with(bundle.model, spec.cfg, rng, step);
      res.samples.reserve(chain.size());
      int idx = 0;
      for (auto& cs : chain) {
        EmittedSample es;
        es.run = run_idx;
        es.index = idx++;
        es.value = std::move(cs.value);
        es.trace_len = cs.trace.size();
        es.accepted = cs.accepted;
        res.samples.push_back(std::move(es));
      }
    }
    compute_run_metrics(spec, bundle, res);
  } catch (const std::exception& e) {
    res.failed = true;
    res.error = e.what();
  }
  auto t1 = std::chrono::steady_clock::now();
  res.wall_clock_s = std::chrono::duration<double>(t1 - t0).count();
  long denom = is_baseline(spec.algorithm)
                   ? static_cast<long>(spec.cfg.n_samples) * spec.cfg.thinning
                   : spec.cfg.n_samples;
  res.s_per_sample = res.wall_clock_s / static_cast<double>(denom);
  return res;
}

json spec_to_json(const ExperimentSpec& s) {
  json j;
  j["model"] = s.model;
  j["algorithm"] = s.algorithm;
  j["epsilon"] = s.cfg.epsilon;
  j["steps"] = s.cfg.steps;
  j["samples"] = s.cfg.n_samples;
  j["burnin"] = s.cfg.burn_in;
  j["thin"] = s.cfg.thinning;
  j["seed"] = s.cfg.seed;
  j["trim"] = s.cfg.trim;
  j["extend_cap"] = s.cfg.extend_cap;
  j["mixed_accept"] = s.cfg.mixed_accept;
  j["rmh_sigma"] = s.cfg.rmh_sigma;
  j["runs"] = s.runs;
  j["jobs"] = s.jobs;
  j["out"] = s.out_dir;
  j["data_seed"] = s.data_seed;
  j["geom_p"] = s.geom_p;
  j["gmm_train_n"] = s.gmm_train_n;
  j["gmm_test_n"] = s.gmm_test_n;
  j["gmm_true_k"] = s.gmm_true_k;
  j["dpmm_alpha"] = s.dpmm_alpha;
  j["dpmm_eps_cut"] = s.dpmm_eps_cut;
  return j;
}

void overlay_spec_json(ExperimentSpec& s, const json& j) {
  if (j.contains("model")) s.model = j["model"];
  if (j.contains("algorithm")) s.algorithm = j["algorithm"];
  if (j.contains("epsilon")) s.cfg.epsilon = j["epsilon"];
  if (j.contains("steps")) s.cfg.steps = j["steps"];
  if (j.contains("samples")) s.cfg.n_samples = j["samples"];
  if (j.contains("burnin")) s.cfg.burn_in = j["burnin"];
  if (j.contains("thin")) {
    s.cfg.thinning = j["thin"];
    s.thin_given = true;
  }
  if (j.contains("seed")) s.cfg.seed = j["seed"];
  if (j.contains("trim")) s.cfg.trim = j["trim"];
  if (j.contains("extend_cap")) s.cfg.extend_cap = j["extend_cap"];
  if (j.contains("mixed_accept")) s.cfg.mixed_accept = j["mixed_accept"];
  if (j.contains("rmh_sigma")) s.cfg.rmh_sigma = j["rmh_sigma"];
  if (j.contains("runs")) s.runs = j["runs"];
  if (j.contains("jobs")) s.jobs = j["jobs"];
  if (j.contains("out")) s.out_dir = j["out"];
  if (j.contains("data_seed")) s.data_seed = j["data_seed"];
  if (j.contains("geom_p")) s.geom_p = j["geom_p"];
  if (j.contains("gmm_train_n")) s.gmm_train_n = j["gmm_train_n"];
  if (j.contains("gmm_test_n")) s.gmm_test_n = j["gmm_test_n"];
  if (j.contains("gmm_true_k")) s.gmm_true_k = j["gmm_true_k"];
  if (j.contains("dpmm_alpha")) s.dpmm_alpha = j["dpmm_alpha"];
  if (j.contains("dpmm_eps_cut")) s.dpmm_eps_cut = j["dpmm_eps_cut"];
}

ExperimentSpec spec_from_json(const json& j) {
  ExperimentSpec s;
  overlay_spec_json(s, j);
  return s;
}

void write_outputs(const ExperimentReport& rep, const ModelBundle& bundle) {
  fs::create_directories(rep.spec.out_dir);
  {
    std::ofstream out(fs::path(rep.spec.out_dir) / "samples.jsonl");
    for (const auto& run : rep.runs) {
      for (const auto& s : run.samples) {
        json line;
        line["run"] = s.run;
        line["index"] = s.index;
        line["value"] = s.value;
        line["trace_len"] = s.trace_len;
        line["accepted"] = s.accepted;
        if (rep.spec.algorithm == "is") line["log_weight"] = s.log_weight;
        out << line.dump() << "\n";
      }
    }
  }
  {
    json summary;
    summary["spec"] = spec_to_json(rep.spec);
    json runs = json::array();
    for (const auto& r : rep.runs) {
      json jr;
      jr["run"] = r.run;
      jr["seed"] = r.seed;
      jr["metrics"] = r.metrics;
      jr["wall_clock_s"] = r.wall_clock_s;
      jr["s_per_sample"] = r.s_per_sample;
      jr["failed"] = r.failed;
      if (r.failed) jr["error"] = r.error;
      runs.push_back(jr);
    }
    summary["runs"] = runs;
    json agg;
    for (const auto& [k, ms] : rep.aggregate) {
      agg[k] = json{{"mean", ms.first}, {"sd", ms.second}};
    }
    summary["aggregate"] = agg;
    std::ofstream out(fs::path(rep.spec.out_dir) / "summary.json");
    out << summary.dump(2) << "\n";
  }
  if (bundle.has_data) {
    write_csv(bundle.train, (fs::path(rep.spec.out_dir) / "train.csv").string());
    write_csv(bundle.test, (fs::path(rep.spec.out_dir) / "test.csv").string());
  }
}

void aggregate_metrics(ExperimentReport& rep) {
  std::map<std::string, std::vector<double>> byname;
  for (const auto& r : rep.runs) {
    if (r.failed) continue;
    for (const auto& [k, v] : r.metrics) byname[k].push_back(v);
  }
  for (const auto& [k, vs] : byname) {
    double m = mean(vs);
    double sd = 0.0;
    if (vs.size() > 1) {
      double acc = 0.0;
      for (double v : vs) acc += (v - m) * (v - m);
      sd = std::sqrt(acc / static_cast<double>(vs.size() - 1));
    }
    rep.aggregate[k] = {m, sd};
  }
}

void pooled_k_hist(ExperimentReport& rep) {
  if (rep.spec.model != "gmm" && rep.spec.model != "geometric") return;
  std::vector<double> ks;
  for (const auto& r : rep.runs)
    for (const auto& s : r.samples) ks.push_back(s.value[0]);
  if (ks.empty()) return;
  rep.k_hist = discrete_histogram(ks, 1, rep.spec.model == "gmm" ? 30 : kGeomSupportMax, true);
  rep.has_k_hist = true;
}

}  // namespace

void apply_model_defaults(ExperimentSpec& spec) {
  if (spec.model == "geometric") {
    spec.cfg.epsilon = 0.1;
    spec.cfg.steps = 5;
    spec.cfg.n_samples = 1000;
    spec.cfg.burn_in = 100;
  } else if (spec.model == "walk") {
    spec.cfg.epsilon = 0.1;
    spec.cfg.steps = 50;
    spec.cfg.n_samples = 1000;
    spec.cfg.burn_in = 100;
  } else if (spec.model == "gmm") {
    spec.cfg.epsilon = 0.05;
    spec.cfg.steps = 50;
    spec.cfg.n_samples = 1000;
    spec.cfg.burn_in = 100;
  } else if (spec.model == "dpmm") {
    spec.cfg.epsilon = 0.05;
    spec.cfg.steps = 20;
    spec.cfg.n_samples = 100;
    spec.cfg.burn_in = 50;
  }
  // Equal-compute protocol: the baselines draw steps-many times more
  // samples, thinned back down.
  if (is_baseline(spec.algorithm) && !spec.thin_given)
    spec.cfg.thinning = std::max(1, spec.cfg.steps);
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  validate(spec.cfg);
  if (spec.runs < 1) throw std::invalid_argument("run_experiment: runs must be >= 1");
  ModelBundle bundle = build_model(spec);
  if (spec.algorithm != "is") make_step(spec, bundle.model);  // usage errors up front

  ExperimentReport rep;
  rep.spec = spec;
  rep.runs.resize(static_cast<std::size_t>(spec.runs));
  if (spec.model == "walk") rep.kde_grid = kde_grid();

  int jobs = std::clamp(spec.jobs, 1, spec.runs);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int r = next.fetch_add(1);
      if (r >= spec.runs) break;
      rep.runs[static_cast<std::size_t>(r)] = execute_run(spec, bundle, r);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  aggregate_metrics(rep);
  pooled_k_hist(rep);
  write_outputs(rep, bundle);
  return rep;
}

ExperimentReport load_report(const std::string& out_dir) {
  std::ifstream sf(fs::path(out_dir) / "summary.json");
  if (!sf) throw std::runtime_error("no summary.json under " + out_dir);
  json summary = json::parse(sf);
  ExperimentReport rep;
  rep.spec = spec_from_json(summary["spec"]);
  rep.spec.out_dir = out_dir;
  for (const auto& jr : summary["runs"]) {
    RunResult r;
    r.run = jr["run"];
    r.seed = jr["seed"];
    r.wall_clock_s = jr["wall_clock_s"];
    r.s_per_sample = jr["s_per_sample"];
    r.failed = jr["failed"];
    for (auto it = jr["metrics"].begin(); it != jr["metrics"].end(); ++it)
      r.metrics[it.key()] = it.value();
    rep.runs.push_back(std::move(r));
  }
  for (auto it = summary["aggregate"].begin(); it != summary["aggregate"].end(); ++it)
    rep.aggregate[it.key()] = {it.value()["mean"], it.value()["sd"]};

  std::ifstream lf(fs::path(out_dir) / "samples.jsonl");
  if (lf) {
    std::string line;
    while (std::getline(lf, line)) {
      if (line.empty()) continue;
      json js = json::parse(line);
      EmittedSample s;
      s.run = js["run"];
      s.index = js["index"];
      s.value = js["value"].get<std::vector<double>>();
      s.trace_len = js["trace_len"];
      s.accepted = js["accepted"];
      if (js.contains("log_weight")) s.log_weight = js["log_weight"];
      std::size_t ri = static_cast<std::size_t>(s.run);
      if (ri < rep.runs.size()) rep.runs[ri].samples.push_back(std::move(s));
    }
  }
  if (rep.spec.model == "walk") rep.kde_grid = kde_grid();

  // Rebuild the plot-data vectors; stored metrics stay as written.
  ModelBundle bundle = build_model(rep.spec);
  for (auto& run : rep.runs) {
    if (run.failed || run.samples.empty()) continue;
    RunResult tmp;
    tmp.run = run.run;
    tmp.samples = run.samples;
    compute_run_metrics(rep.spec, bundle, tmp);
    run.kde_density = std::move(tmp.kde_density);
    run.lppd_curve = std::move(tmp.lppd_curve);
  }
  pooled_k_hist(rep);
  return rep;
}

std::vector<std::string> verify_experiment(const std::string& out_dir) {
  ExperimentReport rep = load_report(out_dir);
  ModelBundle bundle = build_model(rep.spec);
  std::vector<std::string> problems;
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  ExperimentReport fresh;
  fresh.spec = rep.spec;
  for (auto& run : rep.runs) {
    if (run.failed) continue;
    RunResult recomputed;
    recomputed.run = run.run;
    recomputed.samples = run.samples;
    compute_run_metrics(rep.spec, bundle, recomputed);
    for (const auto& [k, v] : recomputed.metrics) {
      auto it = run.metrics.find(k);
      if (it == run.metrics.end()) {
        problems.push_back("run " + std::to_string(run.run) + ": missing metric " + k);
      } else if (!close(it->second, v)) {
        problems.push_back("run " + std::to_string(run.run) + ": metric " + k + " stored " +
                           std::to_string(it->second) + " recomputed " + std::to_string(v));
      }
    }
    fresh.runs.push_back(std::move(recomputed));
  }
  aggregate_metrics(fresh);
  for (const auto& [k, ms] : fresh.aggregate) {
    auto it = rep.aggregate.find(k);
    if (it == rep.aggregate.end()) {
      problems.push_back("aggregate: missing " + k);
    } else if (!close(it->second.first, ms.first) || !close(it->second.second, ms.second)) {
      problems.push_back("aggregate: " + k + " differs");
    }
  }
  return problems;
}

void emit_plot_data(const std::vector<ExperimentReport>& reports, const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "kde.csv");
    out << "x";
    std::vector<const ExperimentReport*> with_kde;
    for (const auto& r : reports) {
      if (!r.kde_grid.empty()) {
        out << "," << r.spec.algorithm;
        with_kde.push_back(&r);
      }
    }
    out << "\n";
    if (!with_kde.empty()) {
      const auto& grid = with_kde.front()->kde_grid;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        out << grid[i];
        for (const auto* r : with_kde) {
          double acc = 0.0;
          int cnt = 0;
          for (const auto& run : r->runs) {
            // density recomputed on load when absent
            if (run.kde_density.size() == grid.size()) {
              acc += run.kde_density[i];
              ++cnt;
            }
          }
          out << "," << (cnt ? acc / cnt : 0.0);
        }
        out << "\n";
      }
    }
  }
  for (const auto& r : reports) {
    bool any_curve = false;
    for (const auto& run : r.runs) any_curve = any_curve || !run.lppd_curve.empty();
    std::ofstream out(fs::path(dir) / ("lppd_" + r.spec.algorithm + ".csv"));
    out << "index,mean,sd";
    for (const auto& run : r.runs) out << ",run" << run.run;
    out << "\n";
    if (!any_curve) continue;
    std::size_t len = 0;
    for (const auto& run : r.runs) len = std::max(len, run.lppd_curve.size());
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<double> vals;
      for (const auto& run : r.runs)
        if (i < run.lppd_curve.size()) vals.push_back(run.lppd_curve[i]);
      double m = mean(vals);
      double sd = 0.0;
      if (vals.size() > 1) {
        double acc = 0.0;
        for (double v : vals) acc += (v - m) * (v - m);
        sd = std::sqrt(acc / static_cast<double>(vals.size() - 1));
      }
      out << i << "," << m << "," << sd;
      for (const auto& run : r.runs) {
        out << ",";
        if (i < run.lppd_curve.size()) out << run.lppd_curve[i];
      }
      out << "\n";
    }
  }
  {
    std::ofstream out(fs::path(dir) / "khist.csv");
    out << "k";
    for (const auto& r : reports)
      if (r.has_k_hist) out << "," << r.spec.algorithm;
    out << "\n";
    const ExperimentReport* first = nullptr;
    for (const auto& r : reports)
      if (r.has_k_hist) {
        first = &r;
        break;
      }
    if (first) {
      for (std::size_t i = 0; i < first->k_hist.labels.size(); ++i) {
        out << first->k_hist.labels[i];
        for (const auto& r : reports)
          if (r.has_k_hist) out << "," << (i < r.k_hist.mass.size() ? r.k_hist.mass[i] : 0.0);
        out << "\n";
      }
    }
  }
}

std::string spec_to_json_string(const ExperimentSpec& spec) { return spec_to_json(spec).dump(2); }

ExperimentSpec spec_from_json_string(const std::string& text) {
  return spec_from_json(json::parse(text));
}

void apply_spec_json_string(ExperimentSpec& spec, const std::string& text) {
  overlay_spec_json(spec, json::parse(text));
}

}  // namespace nphmc
