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

// Threshold-and-group clustering of a similarity matrix, the automatic
// threshold, and refinement of clusters that hinge on a single record.

#ifndef RECLINK_CLUSTERING_H_
#define RECLINK_CLUSTERING_H_

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <utility>
#include <vector>

#include "reclink/similarity.h"

namespace reclink {

using RecordIndex = uint32_t;
using Cluster = std::vector<RecordIndex>;

// Partition of {0, ..., n-1}. Stored canonically: every cluster sorted, and
// clusters ordered by their smallest record.
class ClusterSet {
 public:
  ClusterSet() = default;
  // Throws unless `clusters` is a partition of {0, ..., n-1} into nonempty
  // parts.
  ClusterSet(size_t n, std::vector<Cluster> clusters);

  // Records with equal labels share a cluster.
  template <typename Label>
  static ClusterSet FromLabels(const std::vector<Label> &labels);

  size_t num_records() const { return n_; }
  size_t size() const { return clusters_.size(); }
  const std::vector<Cluster> &clusters() const { return clusters_; }
  const Cluster &operator[](size_t c) const { return clusters_[c]; }

  // Dense cluster id of every record, numbered in canonical order.
  std::vector<uint32_t> Labels() const;

  bool operator==(const ClusterSet &other) const = default;

 private:
  size_t n_ = 0;
  std::vector<Cluster> clusters_;
};

// Records whose similarity reaches tau, as an undirected graph.
class ThresholdedGraph {
 public:
  ThresholdedGraph(size_t n, double tau,
                   std::vector<std::pair<RecordIndex, RecordIndex>> edges);

  size_t num_records() const { return adjacency_.size(); }
  double tau() const { return tau_; }
  // Each edge once, with first < second.
  const std::vector<std::pair<RecordIndex, RecordIndex>> &edges() const {
    return edges_;
  }
  // Sorted neighbours of a record.
  const std::vector<RecordIndex> &neighbors(RecordIndex r) const {
    return adjacency_[r];
  }
  bool connected(RecordIndex a, RecordIndex b) const;

 private:
  double tau_;
  std::vector<std::pair<RecordIndex, RecordIndex>> edges_;
  std::vector<std::vector<RecordIndex>> adjacency_;
};

// The range of thresholds that avoid trivial clusterings is (lo, hi]: lo is
// the smallest and hi the largest off-diagonal similarity, absent entries
// counting as zero.
struct ThresholdInterval {
  double lo = 0;
  double hi = 0;
  bool Contains(double tau) const { return tau > lo && tau <= hi; }
};
ThresholdInterval NontrivialInterval(const SimilarityMatrix &sim);

// Edge (i, j) for every pair with sim(i, j) >= tau.
ThresholdedGraph Threshold(const SimilarityMatrix &sim, double tau);

// Connected components.
ClusterSet Group(const ThresholdedGraph &graph);

// Per-record best match scores.
struct HStatistics {
  std::vector<double> h;  // h[i] = max over j != i of sim(i, j)
  double mean = 0;
  double stddev = 0;  // with the n - 1 denominator
  double max = 0;
};
HStatistics ComputeH(const SimilarityMatrix &sim);
HStatistics ComputeH(std::vector<double> h);

// mean + stddev when that is below the largest H value, else the mean.
double AutoThreshold(const HStatistics &stats);
double AutoThreshold(const SimilarityMatrix &sim);

// Fraction of the record pairs of `cluster` that are graph edges; 0 for a
// single record.
double Strength(const Cluster &cluster, const ThresholdedGraph &graph);

// True when removing one record splits the rest of the cluster into two or
// more connected components. Clusters of one or two records are stable.
bool NeedsRefinement(const Cluster &cluster, const ThresholdedGraph &graph);

// Removes the record whose removal maximizes the mean strength of the
// resulting components, then attaches it to the component with which it
// forms the strongest cluster. Ties go to the lowest record index and to the
// component holding the lowest record. Throws on a stable cluster.
std::vector<Cluster> RefineCluster(const Cluster &cluster,
                                   const ThresholdedGraph &graph);

struct RefineOptions {
  // Repeat passes until the partition stops changing.
  bool iterate = false;
  // Larger clusters are left as they are.
  size_t max_cluster_size = 2000;
};

struct RefineStats {
  size_t refined = 0;
  size_t skipped_large = 0;
  size_t passes = 0;
};

// Replaces every unstable cluster by its refinement.
ClusterSet RefineAll(const ClusterSet &clusters, const ThresholdedGraph &graph,
                     const RefineOptions &options = {},
                     RefineStats *stats = nullptr);

// "record_index cluster_id" lines in record order.
void WriteClusters(std::ostream &out, const ClusterSet &clusters);
ClusterSet ReadClusters(std::istream &in);

template <typename Label>
ClusterSet ClusterSet::FromLabels(const std::vector<Label> &labels) {
  std::vector<Cluster> clusters;
  std::vector<std::pair<Label, size_t>> order;
  order.reserve(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) order.emplace_back(labels[i], i);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });
  for (size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || order[k].first != order[k - 1].first) clusters.emplace_back();
    clusters.back().push_back(static_cast<RecordIndex>(order[k].second));
  }
  return ClusterSet(labels.size(), std::move(clusters));
}

}  // namespace reclink

#endif  // RECLINK_CLUSTERING_H_
