// Copyright 2026 The reclink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reclink/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include "reclink/common.h"
#include "reclink/csv.h"

namespace reclink {

namespace {

std::ofstream OpenOutput(const std::string &dir, const std::string &name) {
  std::filesystem::create_directories(dir);
  std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

std::string FormatReal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string FormatMetric(const Metric &m) {
  return m ? FormatReal(*m) : "null";
}

struct FieldResult {
  FieldSimilarity similarity;
  std::vector<TokenizedEntry> entries;
  size_t features = 0;
};

FieldResult ScoreField(const DataSet &records, size_t k,
                       const PipelineConfig &config) {
  FieldResult r;
  FeatureLexicon lexicon = BuildLexicon(records, k, config.tokenizer);
  r.entries = TokenizeField(records, k, lexicon, config.tokenizer);
  r.features = lexicon.size();
  TfIdfMatrix tfidf = BuildTfIdf(r.entries, lexicon, records.num_records());
  if (config.similarity.method == Method::kSoftTfIdf) {
    JaroWinklerMatrix jw = BuildJaroWinklerMatrix(lexicon, config.similarity);
    r.similarity = SoftTfIdfField(tfidf, jw);
  } else {
    r.similarity = TfIdfField(tfidf);
  }
  return r;
}

}  // namespace

void PipelineConfig::Validate() const {
  if (tokenizer.ngram < 1) throw Error("N-gram length must be at least 1");
  if (threshold == ThresholdMode::kFixed && !std::isfinite(tau)) {
    throw Error("fixed threshold must be finite");
  }
  if (threshold == ThresholdMode::kSweep) {
    if (sweep_step < 0) throw Error("sweep step must be positive");
    if (sweep_step > 0 && sweep_stop < sweep_start) {
      throw Error("sweep stop lies below sweep start");
    }
    if (sweep_step == 0 && sweep_points < 1) {
      throw Error("sweep needs at least one point");
    }
  }
  if (!truth_column.empty() && !truth_file.empty()) {
    throw Error("give either a truth column or a truth file, not both");
  }
  for (const auto &f : fields) {
    if (f == truth_column) {
      throw Error("field '" + f + "' is the truth column");
    }
  }
}

ClusterSet ReadTruthFile(const std::string &path, size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open truth file '" + path + "'");
  ClusterSet truth = ReadClusters(in);
  if (truth.num_records() != n) {
    throw Error("truth file covers " + std::to_string(truth.num_records()) +
                " records, data has " + std::to_string(n));
  }
  return truth;
}

Input LoadInput(const PipelineConfig &config) {
  config.Validate();
  LoadOptions options;
  options.delimiter = config.delimiter;
  DataSet all = LoadDatasetFile(config.input, options);

  std::vector<size_t> selected;
  if (config.fields.empty()) {
    for (size_t k = 0; k < all.num_fields(); ++k) {
      if (all.schema()[k] != config.truth_column) selected.push_back(k);
    }
  } else {
    for (const auto &f : config.fields) selected.push_back(all.FieldIndex(f));
  }
  if (selected.empty()) throw Error("no fields to compare");

  std::optional<ClusterSet> truth;
  if (!config.truth_column.empty()) {
    size_t t = all.FieldIndex(config.truth_column);
    std::vector<std::string> labels = all.Column(t);
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].empty()) {
        throw Error("record " + std::to_string(i) + " has no truth label");
      }
    }
    truth = ClusterSet::FromLabels(labels);
  } else if (!config.truth_file.empty()) {
    truth = ReadTruthFile(config.truth_file, all.num_records());
  }
  return {all.Select(selected), std::move(truth)};
}

ScoredData Score(const DataSet &input, const PipelineConfig &config) {
  PipelineConfig cfg = config;
  if (!config.stop_word_file.empty()) {
    std::ifstream in(config.stop_word_file);
    if (!in) throw Error("cannot open '" + config.stop_word_file + "'");
    LoadStopWords(in, cfg.tokenizer);
  }
  cfg.similarity.Validate(input.num_fields());

  const DataSet records = cfg.sparsity == SparsityMode::kImputeMode
                              ? ImputeMode(input, cfg.tokenizer, cfg.seed)
                              : input;

  std::vector<std::future<FieldResult>> jobs;
  for (size_t k = 0; k < records.num_fields(); ++k) {
    jobs.push_back(std::async(std::launch::async, ScoreField,
                              std::cref(records), k, std::cref(cfg)));
  }
  std::vector<FieldSimilarity> sims;
  std::vector<std::vector<TokenizedEntry>> tokenized;
  std::vector<size_t> feature_counts;
  for (auto &job : jobs) {
    FieldResult r = job.get();
    sims.push_back(std::move(r.similarity));
    tokenized.push_back(std::move(r.entries));
    feature_counts.push_back(r.features);
  }

  std::vector<double> weights = cfg.similarity.weights;
  if (weights.empty()) weights.assign(records.num_fields(), 1.0);
  CompositeSimilarity raw = Composite(sims, weights);
  PresenceMask mask = ComputePresenceMask(tokenized);
  return {Adjust(raw, mask), std::move(mask), std::move(feature_counts)};
}

ClusterSet ClusterAt(const SimilarityMatrix &sim, double tau,
                     const PipelineConfig &config) {
  ThresholdedGraph graph = Threshold(sim, tau);
  ClusterSet clusters = Group(graph);
  if (config.refine) clusters = RefineAll(clusters, graph, config.refine_options);
  return clusters;
}

RunResult Run(const PipelineConfig &config) {
  Input input = LoadInput(config);
  ScoredData scored = Score(input.records, config);
  const SimilarityMatrix &sim = scored.similarity.values;

  RunResult result;
  result.tau_auto = AutoThreshold(sim);
  result.tau = config.threshold == ThresholdMode::kFixed ? config.tau
                                                         : result.tau_auto;
  result.clusters = ClusterAt(sim, result.tau, config);
  if (input.truth) {
    result.metrics = Evaluate(result.clusters, *input.truth, result.tau);
  }

  if (!config.output_dir.empty()) {
    std::ofstream clusters = OpenOutput(config.output_dir, "clusters.txt");
    WriteClusters(clusters, result.clusters);
    if (result.metrics) {
      std::ofstream metrics = OpenOutput(config.output_dir, "metrics.json");
      metrics << ToJson(*result.metrics).dump(2) << '\n';
    }
  }
  return result;
}

std::vector<double> SweepGrid(const PipelineConfig &config,
                              const ThresholdInterval &interval) {
  std::vector<double> grid;
  if (config.sweep_step > 0) {
    for (long k = 0;; ++k) {
      double tau = config.sweep_start + k * config.sweep_step;
      if (tau > config.sweep_stop + 1e-12) break;
      grid.push_back(tau);
    }
  } else if (interval.hi > interval.lo) {
    const int points = config.sweep_points;
    for (int k = 1; k <= points; ++k) {
      grid.push_back(interval.lo + (interval.hi - interval.lo) * k / points);
    }
  }
  if (grid.empty()) throw Error("empty threshold range");
  return grid;
}

std::vector<SweepRow> Sweep(const SimilarityMatrix &sim, const ClusterSet &truth,
                            const PipelineConfig &config) {
  std::vector<double> grid = SweepGrid(config, NontrivialInterval(sim));
  const double tau_auto = AutoThreshold(sim);

  std::vector<std::pair<double, bool>> points;
  for (double t : grid) points.emplace_back(t, false);
  points.emplace_back(tau_auto, true);
  std::stable_sort(points.begin(), points.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });

  std::vector<SweepRow> rows(points.size());
  std::vector<std::future<void>> jobs;
  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(8, std::thread::hardware_concurrency()));
  for (size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w]() {
      for (size_t r = w; r < points.size(); r += workers) {
        ClusterSet clusters = ClusterAt(sim, points[r].first, config);
        rows[r] = {points[r].first, points[r].second,
                   Evaluate(clusters, truth, points[r].first)};
      }
    }));
  }
  for (auto &job : jobs) job.get();
  return rows;
}

std::vector<SweepRow> Sweep(const PipelineConfig &config) {
  Input input = LoadInput(config);
  if (!input.truth) throw Error("a sweep needs ground truth");
  ScoredData scored = Score(input.records, config);
  std::vector<SweepRow> rows = Sweep(scored.similarity.values, *input.truth, config);
  if (!config.output_dir.empty()) {
    std::ofstream out = OpenOutput(config.output_dir, "sweep.csv");
    WriteSweepTable(out, rows);
  }
  return rows;
}

void WriteSweepTable(std::ostream &out, const std::vector<SweepRow> &rows) {
  out << "tau,auto,c,purity,inverse_purity,harmonic_mean,rel_cluster_error,"
         "precision,recall,f1,z_rand,rel_z_rand,nmi\n";
  for (const auto &row : rows) {
    const MetricsReport &m = row.metrics;
    out << FormatReal(row.tau) << ',' << (row.is_auto ? 1 : 0) << ',' << m.c
        << ',' << FormatReal(m.purity) << ',' << FormatReal(m.inverse_purity)
        << ',' << FormatReal(m.harmonic_mean) << ','
        << FormatReal(m.rel_cluster_error) << ',' << FormatMetric(m.precision)
        << ',' << FormatMetric(m.recall) << ',' << FormatMetric(m.f1) << ','
        << FormatMetric(m.z_rand) << ',' << FormatMetric(m.rel_z_rand) << ','
        << FormatReal(m.nmi) << '\n';
  }
}

DataSet Degrade(const DataSet &data, const std::vector<std::string> &fields,
                double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error("fraction must lie strictly between 0 and 1");
  }
  if (fields.empty()) throw Error("no fields to degrade");
  std::vector<size_t> columns;
  for (const auto &f : fields) {
    size_t k = data.FieldIndex(f);
    if (std::find(columns.begin(), columns.end(), k) != columns.end()) {
      throw Error("field '" + f + "' listed twice");
    }
    columns.push_back(k);
  }
  if (columns.size() >= data.num_fields()) {
    throw Error("at least one field must be left intact");
  }

  const size_t n = data.num_records();
  const size_t blanks = static_cast<size_t>(std::llround(fraction * n));
  std::vector<std::vector<std::string>> records;
  records.reserve(n);
  for (size_t i = 0; i < n; ++i) records.push_back(data.record(i));

  Rng rng(seed);
  for (size_t k : columns) {
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    rng.Shuffle(order);
    for (size_t b = 0; b < blanks; ++b) records[order[b]][k].clear();
  }
  return DataSet(data.schema(), std::move(records));
}

void WriteDataset(std::ostream &out, const DataSet &data, char delimiter) {
  WriteCsvRow(out, data.schema(), delimiter);
  for (size_t i = 0; i < data.num_records(); ++i) {
    WriteCsvRow(out, data.record(i), delimiter);
  }
}

}  // namespace reclink
