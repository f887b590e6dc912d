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

// End-to-end duplicate detection: load, score, cluster, refine, evaluate.

#ifndef RECLINK_PIPELINE_H_
#define RECLINK_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reclink/clustering.h"
#include "reclink/corpus.h"
#include "reclink/evaluation.h"
#include "reclink/similarity.h"
#include "reclink/sparsity.h"

namespace reclink {

enum class SparsityMode { kAdjust, kImputeMode };
enum class ThresholdMode { kAuto, kFixed, kSweep };

struct PipelineConfig {
  std::string input;
  char delimiter = ',';
  // Fields to compare. Empty means every column except the truth column.
  std::vector<std::string> fields;
  // Column holding ground-truth entity ids, or empty.
  std::string truth_column;
  // File of "record_index entity_id" rows, or empty.
  std::string truth_file;

  TokenizerConfig tokenizer;
  std::string stop_word_file;
  SimilarityParams similarity;
  SparsityMode sparsity = SparsityMode::kAdjust;

  ThresholdMode threshold = ThresholdMode::kAuto;
  double tau = 0.5;  // kFixed
  // kSweep: explicit grid when sweep_step > 0, otherwise sweep_points evenly
  // spaced values over the nontrivial interval.
  double sweep_start = 0;
  double sweep_stop = 0;
  double sweep_step = 0;
  int sweep_points = 200;

  bool refine = false;
  RefineOptions refine_options;

  std::string output_dir;
  uint64_t seed = 0;

  // Throws on inconsistent settings.
  void Validate() const;
};

// Records restricted to the compared fields, plus the ground truth if any.
struct Input {
  DataSet records;
  std::optional<ClusterSet> truth;
};

Input LoadInput(const PipelineConfig &config);

// Reads "record_index entity_id" lines for records 0..n-1.
ClusterSet ReadTruthFile(const std::string &path, size_t n);

struct ScoredData {
  CompositeSimilarity similarity;  // adjusted
  PresenceMask mask;
  // Lexicon size per field.
  std::vector<size_t> feature_counts;
};

// Tokenizes every field, computes the per-field similarity selected by
// `config.similarity.method`, combines, and applies the sparsity step.
ScoredData Score(const DataSet &records, const PipelineConfig &config);

// Threshold, group, and refine when enabled.
ClusterSet ClusterAt(const SimilarityMatrix &sim, double tau,
                     const PipelineConfig &config);

struct RunResult {
  double tau = 0;
  double tau_auto = 0;
  ClusterSet clusters;
  std::optional<MetricsReport> metrics;
};

// Scores and clusters at the configured (fixed or automatic) threshold.
// Writes clusters.txt and, with ground truth, metrics.json to
// config.output_dir when it is set.
RunResult Run(const PipelineConfig &config);

struct SweepRow {
  double tau = 0;
  bool is_auto = false;
  MetricsReport metrics;
};

// The thresholds a sweep visits, ascending, before the automatic one is
// added.
std::vector<double> SweepGrid(const PipelineConfig &config,
                              const ThresholdInterval &interval);

// One row per grid value plus a row at the automatic threshold, ordered by
// tau. Requires ground truth. Writes sweep.csv to config.output_dir when it
// is set.
std::vector<SweepRow> Sweep(const PipelineConfig &config);
std::vector<SweepRow> Sweep(const SimilarityMatrix &sim, const ClusterSet &truth,
                            const PipelineConfig &config);

void WriteSweepTable(std::ostream &out, const std::vector<SweepRow> &rows);

// Blanks round(fraction * n) entries of each listed field, chosen uniformly
// at random with `seed`. Other fields are untouched. fraction must lie in
// (0, 1) and at least one column must be left out of `fields`.
DataSet Degrade(const DataSet &data, const std::vector<std::string> &fields,
                double fraction, uint64_t seed);

void WriteDataset(std::ostream &out, const DataSet &data, char delimiter = ',');

}  // namespace reclink

#endif  // RECLINK_PIPELINE_H_
