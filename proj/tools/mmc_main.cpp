/*
 * Copyright 2026 The MMC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// mmc: command-line front end. Subcommands generate, cluster, grid,
// analyze and benchmark; see README.md for the file formats.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mmc/analysis.hpp"
#include "mmc/artifacts.hpp"
#include "mmc/clustering.hpp"
#include "mmc/metrics.hpp"
#include "mmc/model_io.hpp"
#include "mmc/parallel.hpp"

namespace fs = std::filesystem;
using namespace mmc;

namespace {

enum ExitCode { kOk = 0, kConfigExit = 2, kDataExit = 3, kAlgorithmExit = 4 };

struct DataOptions {
  std::string path;
  std::string label_column;
  bool no_normalize = false;
  std::string family;
  Index n = 0;
  int d_noise = 10;
  std::uint64_t data_seed = 0;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--data", o.path, "CSV input file");
  cmd->add_option("--label-column", o.label_column, "label column name (or 0-based index without header)");
  cmd->add_flag("--no-normalize", o.no_normalize, "skip min-max normalization of --data");
  cmd->add_option("--family", o.family, "generate a synthetic family instead of reading --data");
  cmd->add_option("--n", o.n, "points to generate");
  cmd->add_option("--d-noise", o.d_noise, "subspace_gaussian: dimensions per subspace");
  cmd->add_option("--data-seed", o.data_seed, "generator seed");
}

data::SyntheticSpec family_spec(const DataOptions& o) {
  const auto family = data::parse_family(o.family);
  if (!family) throw ConfigError("unknown family '" + o.family + "'");
  return {*family, o.d_noise};
}

data::Dataset load_data(const DataOptions& o) {
  if (o.path.empty() == o.family.empty()) throw ConfigError("give exactly one of --data or --family");
  if (!o.family.empty()) {
    if (o.n < 1) throw ConfigError("--family needs --n");
    return data::generate_synthetic(family_spec(o), o.n, o.data_seed);
  }
  std::optional<std::string> label;
  if (!o.label_column.empty()) label = o.label_column;
  auto d = data::load_csv(o.path, label);
  return o.no_normalize ? d : data::normalize_minmax(std::move(d));
}

void describe_data(artifacts::Record& rec, const DataOptions& o, const data::Dataset& d) {
  if (!o.family.empty()) {
    rec.set("data_source", "generated");
    rec.set("family", std::string(data::family_name(family_spec(o).family)));
    rec.set("d_noise", o.d_noise);
    rec.set("data_seed", o.data_seed);
  } else {
    rec.set("data_source", o.path);
    rec.set("label_column", o.label_column);
    rec.set("normalized", !o.no_normalize);
  }
  rec.set("n", static_cast<std::int64_t>(d.size()));
  rec.set("d", static_cast<std::int64_t>(d.dim()));
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(data::dataset_hash(d)));
  rec.set("dataset_hash", std::string(hash));
}

struct AlgoOptions {
  std::string algo = "mmc";
  std::string mechanism = "hypersphere";
  clustering::ClusterParams params;
  std::string model_in;
};

void add_algo_options(CLI::App* cmd, AlgoOptions& o, bool with_kernel_values) {
  cmd->add_option("--algo", o.algo, "mmc (isolation kernel) or dmc (gaussian kernel)")
      ->check(CLI::IsMember({"mmc", "dmc"}));
  cmd->add_option("--mechanism", o.mechanism, "isolation partitioning: hypersphere or voronoi")
      ->check(CLI::IsMember({"hypersphere", "voronoi"}));
  cmd->add_option("--k", o.params.k, "number of clusters")->required();
  cmd->add_option("--s", o.params.s, "sample size (clamped to n)");
  cmd->add_option("--t", o.params.t, "isolation partitionings");
  cmd->add_option("--landmarks", o.params.landmarks, "Nystrom landmarks (dmc)");
  cmd->add_option("--seed", o.params.seed, "run seed");
  cmd->add_option("--max-iters", o.params.max_refine_iters, "refinement iteration cap");
  if (with_kernel_values) {
    cmd->add_option("--tau", o.params.tau, "similarity threshold")->required();
    cmd->add_option("--psi", o.params.psi, "partitions per partitioning (mmc)");
    cmd->add_option("--sigma", o.params.sigma, "gaussian bandwidth (dmc)");
    cmd->add_option("--model", o.model_in, "reuse a saved kernel model instead of fitting");
  }
}

void resolve_kernel(AlgoOptions& o, CLI::App* cmd) {
  const bool dmc = o.algo == "dmc";
  const bool has_psi = cmd->count("--psi") > 0;
  const bool has_sigma = cmd->count("--sigma") > 0;
  if (dmc) {
    if (has_psi) throw ConfigError("--psi applies to --algo mmc only");
    if (!has_sigma && o.model_in.empty()) throw ConfigError("--algo dmc requires --sigma");
    o.params.kernel = clustering::KernelKind::gaussian_nystrom;
  } else {
    if (has_sigma) throw ConfigError("--sigma applies to --algo dmc only");
    o.params.kernel = o.mechanism == "voronoi" ? clustering::KernelKind::ik_voronoi
                                               : clustering::KernelKind::ik_hypersphere;
  }
}

void set_params(artifacts::Record& rec, const clustering::ClusterParams& p) {
  rec.set("kernel", std::string(clustering::kernel_kind_name(p.kernel)));
  rec.set("k", p.k);
  rec.set("s", static_cast<std::int64_t>(p.s));
  rec.set("tau", p.tau);
  if (clustering::is_isolation(p.kernel)) {
    rec.set("psi", p.psi);
    rec.set("t", p.t);
  } else {
    rec.set("sigma", p.sigma);
    rec.set("landmarks", static_cast<std::int64_t>(p.landmarks));
  }
  rec.set("seed", p.seed);
  rec.set("max_refine_iters", p.max_refine_iters);
}

std::string join_sizes(const std::vector<Index>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out += (i ? "," : "") + std::to_string(sizes[i]);
  return out;
}

void set_assignment(artifacts::Record& rec, const clustering::ClusterAssignment& a) {
  rec.set("objective_raw", a.objective.raw);
  rec.set("objective", a.objective.normalized);
  rec.set("initial_objective", a.initial_objective.normalized);
  rec.set("refine_iters", a.refine_iters_used);
  rec.set("cluster_sizes", join_sizes(a.cluster_sizes));
  rec.set("components", static_cast<std::int64_t>(a.component_sizes.size()));
  rec.set("zero_mass_fallbacks", static_cast<std::int64_t>(a.zero_mass_fallbacks));
  rec.set("fit_seconds", a.fit_seconds);
  rec.set("seed_seconds", a.seed_seconds);
  rec.set("assign_seconds", a.assign_seconds);
  rec.set("refine_seconds", a.refine_seconds);
}

artifacts::Record metrics_record(const data::Dataset& d, const clustering::ClusterAssignment& a) {
  artifacts::Record rec("metrics");
  rec.set("objective_raw", a.objective.raw);
  rec.set("objective", a.objective.normalized);
  if (d.has_labels()) {
    rec.set("f1", metrics::f1_score(a.labels, *d.labels));
    rec.set("ami", metrics::ami_score(a.labels, *d.labels));
  }
  return rec;
}

// Backend that fits (or loads) the model and keeps a copy for saving.
struct RecordingBackend {
  std::string model_in;
  std::string saved;

  std::unique_ptr<massdist::FeatureSpace> operator()(const data::Dataset& d,
                                                     const clustering::ClusterParams& p) {
    std::ostringstream text;
    std::unique_ptr<massdist::FeatureSpace> space;
    if (!model_in.empty()) {
      std::ifstream in(model_in);
      if (!in) throw DataError("cannot open model " + model_in);
      const auto model = kernels::load_model(in);
      if (const auto* ik = std::get_if<kernels::IKModel>(&model)) {
        if (!clustering::is_isolation(p.kernel)) throw ConfigError("model is an isolation kernel; use --algo mmc");
        if (ik->dim() != d.dim()) throw ConfigError("model dimension does not match the data");
        kernels::save_model(text, *ik);
        space = std::make_unique<massdist::IKFeatureSpace>(*ik, d);
      } else {
        const auto& ny = std::get<kernels::NystromModel>(model);
        if (clustering::is_isolation(p.kernel)) throw ConfigError("model is a Nystrom model; use --algo dmc");
        if (ny.dim() != d.dim()) throw ConfigError("model dimension does not match the data");
        kernels::save_model(text, ny);
        space = std::make_unique<massdist::DenseFeatureSpace>(ny, d);
      }
    } else if (clustering::is_isolation(p.kernel)) {
      const auto mech = p.kernel == clustering::KernelKind::ik_voronoi ? kernels::Mechanism::voronoi
                                                                       : kernels::Mechanism::hypersphere;
      const auto model = kernels::fit_ik(d, p.psi, p.t, mech, clustering::kernel_seed(p.seed));
      kernels::save_model(text, model);
      space = std::make_unique<massdist::IKFeatureSpace>(model, d);
    } else {
      const auto model = kernels::fit_nystrom(d, std::min(p.landmarks, d.size()), p.sigma,
                                              clustering::kernel_seed(p.seed));
      kernels::save_model(text, model);
      space = std::make_unique<massdist::DenseFeatureSpace>(model, d);
    }
    saved = text.str();
    return space;
  }
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(std::string(flag) + " is empty");
  return out;
}

// lo:step:hi ranges are accepted as well as comma lists.
std::vector<double> parse_grid(const std::string& text, const char* flag) {
  if (text.find(':') == std::string::npos) return parse_list(text, flag);
  std::string spec = text;
  for (auto& c : spec) c = c == ':' ? ',' : c;
  const auto parts = parse_list(spec, flag);
  if (parts.size() != 3 || parts[1] <= 0 || parts[2] < parts[0]) {
    throw ConfigError(std::string(flag) + ": expected lo:step:hi");
  }
  std::vector<double> out;
  const int steps = static_cast<int>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
  for (int i = 0; i <= steps; ++i) out.push_back(parts[0] + i * parts[1]);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  artifacts::write_atomic(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

// ---------------------------------------------------------------------------

int cmd_generate(const DataOptions& o, const std::string& out) {
  if (o.family.empty()) throw ConfigError("generate requires --family");
  if (o.n < 1) throw ConfigError("generate requires --n");
  const auto d = data::generate_synthetic(family_spec(o), o.n, o.data_seed);
  std::ostringstream text;
  data::write_csv(text, d);
  write_text(out, text.str());
  return kOk;
}

int cmd_cluster(const DataOptions& data_opts, AlgoOptions& algo, CLI::App* cmd, const fs::path& out) {
  resolve_kernel(algo, cmd);
  const auto d = load_data(data_opts);
  RecordingBackend backend{algo.model_in, {}};
  const auto a = clustering::run_mmc(d, algo.params, std::ref(backend));

  artifacts::Record manifest("run-manifest");
  manifest.set("command", "cluster");
  manifest.set("algorithm", algo.algo);
  describe_data(manifest, data_opts, d);
  set_params(manifest, algo.params);
  manifest.set("model_file", "model.txt");
  set_assignment(manifest, a);

  write_text(out / "labels.csv", artifacts::labels_csv(a.labels));
  write_text(out / "model.txt", backend.saved);
  write_text(out / "metrics.txt", metrics_record(d, a).str());
  write_text(out / "manifest.txt", manifest.str());
  std::cout << metrics_record(d, a).str();
  return kOk;
}

struct GridCliOptions {
  std::string kernel_grid;
  std::string tau_grid;
  int trials = 5;
  std::uint64_t seed = 0;
};

int cmd_grid(const DataOptions& data_opts, AlgoOptions& algo, const GridCliOptions& g, const fs::path& out) {
  const bool dmc = algo.algo == "dmc";
  algo.params.kernel = dmc ? clustering::KernelKind::gaussian_nystrom
                           : (algo.mechanism == "voronoi" ? clustering::KernelKind::ik_voronoi
                                                          : clustering::KernelKind::ik_hypersphere);
  const auto d = load_data(data_opts);
  auto grid = dmc ? clustering::default_dmc_grid() : clustering::default_mmc_grid();
  if (!g.kernel_grid.empty()) grid.kernel_values = parse_grid(g.kernel_grid, dmc ? "--sigma-grid" : "--psi-grid");
  if (!g.tau_grid.empty()) grid.taus = parse_grid(g.tau_grid, "--tau-grid");
  if (!dmc) {
    // psi above n cannot be fitted; drop it rather than fail every cell.
    std::erase_if(grid.kernel_values, [&](double v) { return v > static_cast<double>(d.size()); });
    if (grid.kernel_values.empty()) throw ConfigError("every psi in the grid exceeds n");
  }
  clustering::GridOptions options;
  options.trials = g.trials;
  options.base_seed = g.seed;
  options.base = algo.params;

  auto table = [&](const std::vector<clustering::GridRow>& rows) {
    std::ostringstream csv;
    csv << (dmc ? "sigma" : "psi") << ",tau,trial,seed,ok,f1,ami,objective,initial_objective,refine_iters,components,failure\n";
    for (const auto& r : rows) {
      csv << artifacts::format_double(r.kernel_value) << ',' << artifacts::format_double(r.tau) << ','
          << r.trial << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',' << artifacts::format_double(r.f1) << ','
          << artifacts::format_double(r.ami) << ',' << artifacts::format_double(r.objective) << ','
          << artifacts::format_double(r.initial_objective) << ',' << r.refine_iters << ',' << r.components
          << ",\"" << r.failure << "\"\n";
    }
    return csv.str();
  };

  clustering::GridResult result;
  try {
    result = clustering::grid_search(d, dmc ? clustering::Algorithm::dmc : clustering::Algorithm::mmc,
                                     grid, options);
  } catch (const clustering::GridSearchError& e) {
    // Still leave the per-cell failure log behind.
    write_text(out / "grid.csv", table(e.rows()));
    throw;
  }

  const auto& best = result.cells[result.best_cell];
  std::ostringstream cells;
  cells << (dmc ? "sigma" : "psi") << ",tau,successes,mean_score,mean_f1,mean_ami\n";
  for (const auto& c : result.cells) {
    cells << artifacts::format_double(c.kernel_value) << ',' << artifacts::format_double(c.tau) << ','
          << c.successes << ',' << artifacts::format_double(c.mean_score) << ','
          << artifacts::format_double(c.mean_f1) << ',' << artifacts::format_double(c.mean_ami) << '\n';
  }
  artifacts::Record summary("grid-summary");
  summary.set("command", "grid");
  summary.set("algorithm", algo.algo);
  describe_data(summary, data_opts, d);
  summary.set("trials", g.trials);
  summary.set("base_seed", g.seed);
  summary.set("scored_by", result.scored_by_f1 ? "f1" : "objective");
  summary.set("best_kernel_value", best.kernel_value);
  summary.set("best_tau", best.tau);
  summary.set("best_mean_score", best.mean_score);
  summary.set("best_mean_f1", best.mean_f1);
  summary.set("best_mean_ami", best.mean_ami);
  summary.set("best_successes", best.successes);

  artifacts::Record manifest("run-manifest");
  manifest.set("command", "cluster");
  manifest.set("algorithm", algo.algo);
  describe_data(manifest, data_opts, d);
  set_params(manifest, result.best_params);
  set_assignment(manifest, result.best_assignment);

  write_text(out / "grid.csv", table(result.rows));
  write_text(out / "cells.csv", cells.str());
  write_text(out / "labels.csv", artifacts::labels_csv(result.best_assignment.labels));
  write_text(out / "manifest.txt", manifest.str());
  write_text(out / "metrics.txt", metrics_record(d, result.best_assignment).str());
  write_text(out / "summary.txt", summary.str());
  std::cout << summary.str();
  return kOk;
}

struct AnalyzeOptions {
  std::string what;
  std::string kernel = "gaussian";
  double sigma = 0;
  int psi = 16;
  int t = clustering::kDefaultT;
  std::string tau_grid;
  double min_fraction = analysis::kDefaultMinFraction;
  Index batch = 50;
  std::uint64_t seed = 0;
};

Eigen::MatrixXd analysis_matrix(const AnalyzeOptions& o, const data::Dataset& d) {
  if (o.kernel == "gaussian") {
    if (!(o.sigma > 0)) throw ConfigError("--kernel gaussian requires --sigma");
    return analysis::gaussian_kernel_matrix(d.points, o.sigma);
  }
  const auto mech = o.kernel == "voronoi" ? kernels::Mechanism::voronoi : kernels::Mechanism::hypersphere;
  const auto model = kernels::fit_ik(d, o.psi, o.t, mech, o.seed);
  return analysis::kernel_matrix(massdist::IKFeatureSpace(model, d));
}

int cmd_analyze(const DataOptions& data_opts, const AnalyzeOptions& o, const fs::path& out) {
  const auto d = load_data(data_opts);
  artifacts::Record summary("analysis-" + o.what);
  describe_data(summary, data_opts, d);
  summary.set("kernel", o.kernel);
  if (o.kernel == "gaussian") summary.set("sigma", o.sigma);
  else {
    summary.set("psi", o.psi);
    summary.set("t", o.t);
    summary.set("seed", o.seed);
  }

  if (o.what == "cohesiveness") {
    const auto taus = o.tau_grid.empty() ? clustering::default_tau_grid() : parse_grid(o.tau_grid, "--tau-grid");
    const auto K = analysis_matrix(o, d);
    const auto curve = analysis::cohesiveness_curve(K, taus, d.has_labels() ? &*d.labels : nullptr);
    std::ostringstream csv;
    csv << "tau,component,size,cohesiveness,majority_class\n";
    for (const auto& rec : curve.records) {
      for (std::size_t c = 0; c < rec.components.size(); ++c) {
        const auto& comp = rec.components[c];
        int majority = -1;
        if (!comp.class_counts.empty()) {
          majority = curve.classes[std::max_element(comp.class_counts.begin(), comp.class_counts.end()) -
                                   comp.class_counts.begin()];
        }
        csv << artifacts::format_double(rec.tau) << ',' << c << ',' << comp.size << ','
            << (comp.size >= 2 ? artifacts::format_double(comp.cohesiveness) : "") << ',' << majority << '\n';
      }
    }
    write_text(out / "cohesiveness.csv", csv.str());
    if (d.has_labels() && curve.classes.size() == 2) {
      const auto order = analysis::classes_by_density(d);
      const auto cmp = analysis::compare_classes(curve, order[0], order[1], o.min_fraction);
      std::ostringstream pairs;
      pairs << "tau,dense,sparse,relative_gap\n";
      const auto gaps = cmp.relative_gaps();
      for (std::size_t i = 0; i < cmp.taus.size(); ++i) {
        pairs << artifacts::format_double(cmp.taus[i]) << ',' << artifacts::format_double(cmp.dense[i]) << ','
              << artifacts::format_double(cmp.sparse[i]) << ',' << artifacts::format_double(gaps[i]) << '\n';
      }
      write_text(out / "dense_vs_sparse.csv", pairs.str());
      summary.set("dense_class", order[0]);
      summary.set("sparse_class", order[1]);
      summary.set("shared_taus", static_cast<std::int64_t>(cmp.taus.size()));
      summary.set("dense_always_higher", cmp.dense_always_higher());
      const double min_gap = gaps.empty() ? std::nan("") : *std::min_element(gaps.begin(), gaps.end());
      summary.set("min_relative_gap", min_gap);
    }
  } else if (o.what == "condition-one") {
    const auto r = analysis::check_condition_one(analysis_matrix(o, d), d);
    summary.set("sparse_class", r.sparse_class);
    summary.set("sparse_peak_similarity", r.sparse_peak_similarity);
    summary.set("bottleneck", r.bottleneck);
    summary.set("triggered", r.triggered);
  } else if (o.what == "condition-two") {
    const auto r = analysis::check_condition_two(analysis_matrix(o, d), d);
    summary.set("dense_class", r.dense_class);
    summary.set("sparse_class", r.sparse_class);
    summary.set("dense_min", r.dense_min);
    summary.set("sparse_min", r.sparse_min);
    summary.set("ratio", r.ratio);
    summary.set("ratio_threshold", analysis::kConditionTwoRatio);
    summary.set("holds", r.holds);
  } else if (o.what == "correction") {
    std::unique_ptr<massdist::FeatureSpace> space;
    if (o.kernel == "gaussian") {
      if (!(o.sigma > 0)) throw ConfigError("--kernel gaussian requires --sigma");
      space = std::make_unique<massdist::DenseFeatureSpace>(
          kernels::fit_nystrom(d, std::min(clustering::kDefaultLandmarks, d.size()), o.sigma, o.seed), d);
    } else {
      const auto mech = o.kernel == "voronoi" ? kernels::Mechanism::voronoi : kernels::Mechanism::hypersphere;
      space = std::make_unique<massdist::IKFeatureSpace>(kernels::fit_ik(d, o.psi, o.t, mech, o.seed), d);
    }
    const auto series = analysis::correction_curve(*space, d, o.batch, o.seed);
    std::ostringstream csv;
    csv << "corrected,objective,ami\n";
    std::vector<double> obj, ami;
    for (const auto& p : series) {
      csv << p.corrected << ',' << artifacts::format_double(p.objective) << ',' << artifacts::format_double(p.ami) << '\n';
      obj.push_back(p.objective);
      ami.push_back(p.ami);
    }
    write_text(out / "correction.csv", csv.str());
    summary.set("batch", static_cast<std::int64_t>(o.batch));
    summary.set("spearman", analysis::spearman(obj, ami));
    summary.set("spearman_threshold", 0.95);
    summary.set("note", "threshold is a chosen operationalization of a visual trend");
  } else {
    throw ConfigError("unknown analysis '" + o.what + "'");
  }
  write_text(out / "summary.txt", summary.str());
  std::cout << summary.str();
  return kOk;
}

struct BenchOptions {
  std::string sizes = "1500,15000,150000,1500000";
  std::string family = "scaleup_arc_mix";
  double tau = 0.3;
  int psi = 16;
  int t = 100;
  Index s = 1000;
  int k = 3;
  std::uint64_t seed = 0;
};

int cmd_benchmark(const BenchOptions& b, const fs::path& out) {
  analysis::ScaleOptions o;
  const auto family = data::parse_family(b.family);
  if (!family) throw ConfigError("unknown family '" + b.family + "'");
  o.family.family = *family;
  o.sizes.clear();
  for (double v : parse_list(b.sizes, "--sizes")) o.sizes.push_back(static_cast<Index>(v));
  o.params.k = b.k;
  o.params.tau = b.tau;
  o.params.psi = b.psi;
  o.params.t = b.t;
  o.params.s = b.s;
  o.params.seed = b.seed;
  const auto report = analysis::scaleup(o);
  std::ostringstream csv;
  csv << "n,total_seconds,fit_seconds,seed_seconds,assign_seconds,refine_seconds,refine_iters,below_resolution\n";
  for (const auto& p : report.points) {
    csv << p.n << ',' << artifacts::format_double(p.total_seconds) << ',' << artifacts::format_double(p.fit_seconds)
        << ',' << artifacts::format_double(p.seed_seconds) << ',' << artifacts::format_double(p.assign_seconds)
        << ',' << artifacts::format_double(p.refine_seconds) << ',' << p.refine_iters << ','
        << (p.below_resolution ? 1 : 0) << '\n';
  }
  artifacts::Record summary("benchmark-scaleup");
  summary.set("family", b.family);
  summary.set("sizes", b.sizes);
  summary.set("psi", b.psi);
  summary.set("t", b.t);
  summary.set("s", static_cast<std::int64_t>(b.s));
  summary.set("tau", b.tau);
  summary.set("workers", worker_count());
  summary.set("slope", report.slope);
  summary.set("fitted_points", static_cast<std::int64_t>(report.fitted_points));
  write_text(out / "scaleup.csv", csv.str());
  write_text(out / "summary.txt", summary.str());
  std::cout << summary.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mass-maximization clustering with isolation and gaussian kernels"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, std::string("worker threads (default: $") + kWorkersEnv + " or all cores)");

  DataOptions data_opts;
  std::string out = "out";

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
  gen->add_option("--family", data_opts.family, "synthetic family")->required();
  gen->add_option("--n", data_opts.n, "points")->required();
  gen->add_option("--d-noise", data_opts.d_noise, "subspace_gaussian: dimensions per subspace");
  gen->add_option("--seed", data_opts.data_seed, "generator seed");
  gen->add_option("--out", out, "output CSV path")->required();

  AlgoOptions cluster_opts;
  auto* cluster = app.add_subcommand("cluster", "run MMC or DMC once");
  add_data_options(cluster, data_opts);
  add_algo_options(cluster, cluster_opts, true);
  cluster->add_option("--out", out, "output directory");

  AlgoOptions grid_algo;
  GridCliOptions grid_opts;
  auto* grid = app.add_subcommand("grid", "parameter search over psi (or sigma) and tau");
  add_data_options(grid, data_opts);
  add_algo_options(grid, grid_algo, false);
  grid->add_option("--psi-grid,--sigma-grid", grid_opts.kernel_grid, "comma list or lo:step:hi");
  grid->add_option("--tau-grid", grid_opts.tau_grid, "comma list or lo:step:hi");
  grid->add_option("--trials", grid_opts.trials, "seeds per cell");
  grid->add_option("--grid-seed", grid_opts.seed, "base seed for trial seeds");
  grid->add_option("--out", out, "output directory");

  AnalyzeOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "cohesiveness, failure conditions, correction curve");
  analyze->add_option("what", analyze_opts.what, "cohesiveness | condition-one | condition-two | correction")
      ->required()
      ->check(CLI::IsMember({"cohesiveness", "condition-one", "condition-two", "correction"}));
  add_data_options(analyze, data_opts);
  analyze->add_option("--kernel", analyze_opts.kernel, "gaussian | hypersphere | voronoi")
      ->check(CLI::IsMember({"gaussian", "hypersphere", "voronoi"}));
  analyze->add_option("--sigma", analyze_opts.sigma, "gaussian bandwidth");
  analyze->add_option("--psi", analyze_opts.psi, "isolation psi");
  analyze->add_option("--t", analyze_opts.t, "isolation partitionings");
  analyze->add_option("--tau-grid", analyze_opts.tau_grid, "comma list or lo:step:hi");
  analyze->add_option("--min-fraction", analyze_opts.min_fraction, "share of a class a component must hold");
  analyze->add_option("--batch", analyze_opts.batch, "correction batch size");
  analyze->add_option("--seed", analyze_opts.seed, "kernel and correction seed");
  analyze->add_option("--out", out, "output directory");

  BenchOptions bench_opts;
  std::string bench_what;
  auto* bench = app.add_subcommand("benchmark", "timing harnesses");
  bench->add_option("what", bench_what, "scaleup")->required()->check(CLI::IsMember({"scaleup"}));
  bench->add_option("--sizes", bench_opts.sizes, "comma-separated dataset sizes");
  bench->add_option("--family", bench_opts.family, "synthetic family");
  bench->add_option("--tau", bench_opts.tau, "similarity threshold");
  bench->add_option("--psi", bench_opts.psi, "isolation psi");
  bench->add_option("--t", bench_opts.t, "isolation partitionings");
  bench->add_option("--s", bench_opts.s, "sample size");
  bench->add_option("--k", bench_opts.k, "clusters");
  bench->add_option("--seed", bench_opts.seed, "run seed");
  bench->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigExit;
  }

  try {
    if (workers > 0) set_worker_count(workers);
    if (gen->parsed()) return cmd_generate(data_opts, out);
    if (cluster->parsed()) return cmd_cluster(data_opts, cluster_opts, cluster, out);
    if (grid->parsed()) return cmd_grid(data_opts, grid_algo, grid_opts, out);
    if (analyze->parsed()) return cmd_analyze(data_opts, analyze_opts, out);
    if (bench->parsed()) return cmd_benchmark(bench_opts, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kConfigExit;
  } catch (const DataError& e) {
    std::cerr << "error: data: " << e.what() << "\n";
    return kDataExit;
  } catch (const AlgorithmError& e) {
    std::cerr << "error: algorithm: " << e.what() << "\n";
    return kAlgorithmExit;
  }
  return kOk;
}
