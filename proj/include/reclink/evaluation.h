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

// Agreement between a clustering and a ground-truth clustering of the same
// records.

#ifndef RECLINK_EVALUATION_H_
#define RECLINK_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "reclink/clustering.h"

namespace reclink {

// A metric that may be undefined for degenerate inputs.
using Metric = std::optional<double>;

// Fraction of records that fall in the majority ground-truth cluster of their
// cluster.
double Purity(const ClusterSet &found, const ClusterSet &truth);
double InversePurity(const ClusterSet &found, const ClusterSet &truth);
// Harmonic mean of purity and inverse purity.
double HarmonicMean(const ClusterSet &found, const ClusterSet &truth);

// |c - c'| / c'.
double RelativeClusterError(const ClusterSet &found, const ClusterSet &truth);

// Counts of unordered co-clustered record pairs.
struct PairCounts {
  uint64_t found = 0;  // pairs sharing a cluster in `found`
  uint64_t truth = 0;  // pairs sharing a cluster in `truth`
  uint64_t both = 0;   // pairs sharing a cluster in both
  uint64_t total = 0;  // n choose 2
};
PairCounts CountPairs(const ClusterSet &found, const ClusterSet &truth);

struct PairMetrics {
  Metric precision;  // undefined when `found` has no pairs
  Metric recall;     // undefined when `truth` has no pairs
  Metric f1;         // undefined when `found` has no pairs
};
PairMetrics ComputePairMetrics(const ClusterSet &found,
                               const ClusterSet &truth);

// Mean and standard deviation of the number of pairs co-clustered in both
// partitions when the records of `found` are relabeled by a uniformly random
// permutation, i.e. over all clusterings with the cluster sizes of `found`.
struct PairOverlapNull {
  double mean = 0;
  double stddev = 0;
};
PairOverlapNull PairOverlapDistribution(const ClusterSet &found,
                                        const ClusterSet &truth);

// Standard score of the observed pair overlap under that distribution.
// Undefined when the standard deviation is zero.
Metric ZRand(const ClusterSet &found, const ClusterSet &truth);
// ZRand(found, truth) / ZRand(truth, truth).
Metric RelativeZRand(const ClusterSet &found, const ClusterSet &truth);

// Added inside the entropy logarithms so a single-cluster partition does not
// divide by zero.
inline constexpr double kEntropyGuard = 0x1.0p-52;

// Mutual information normalized by the geometric mean of the two entropies,
// clamped to [0, 1].
double NormalizedMutualInformation(const ClusterSet &found,
                                   const ClusterSet &truth);

struct MetricsReport {
  double purity = 0;
  double inverse_purity = 0;
  double harmonic_mean = 0;
  double rel_cluster_error = 0;
  Metric precision;
  Metric recall;
  Metric f1;
  Metric z_rand;
  Metric rel_z_rand;
  double nmi = 0;
  size_t n = 0;
  size_t c = 0;
  size_t c_true = 0;
  std::optional<double> tau;
};

// Throws if the two partitions cover different record counts.
MetricsReport Evaluate(const ClusterSet &found, const ClusterSet &truth,
                       std::optional<double> tau = std::nullopt);

// Undefined values become null.
nlohmann::ordered_json ToJson(const MetricsReport &report);

}  // namespace reclink

#endif  // RECLINK_EVALUATION_H_
