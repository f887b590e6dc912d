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

#include "reclink/clustering.h"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "reclink/common.h"

namespace reclink {

namespace {

// Strength comparisons treat values this close as ties.
constexpr double kTieTolerance = 1e-12;

class DisjointSets {
 public:
  explicit DisjointSets(size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  size_t Find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Union(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<size_t> parent_;
  std::vector<uint8_t> rank_;
};

// Subgraph induced by one cluster, in local indices 0..p-1.
struct LocalGraph {
  std::vector<std::vector<int>> adjacency;

  LocalGraph(const Cluster &cluster, const ThresholdedGraph &graph) {
    adjacency.resize(cluster.size());
    for (size_t u = 0; u < cluster.size(); ++u) {
      for (RecordIndex g : graph.neighbors(cluster[u])) {
        auto it = std::lower_bound(cluster.begin(), cluster.end(), g);
        if (it != cluster.end() && *it == g) {
          adjacency[u].push_back(static_cast<int>(it - cluster.begin()));
        }
      }
    }
  }

  size_t size() const { return adjacency.size(); }

  // Components after deleting `removed` (-1 for none), each in ascending
  // local order, ordered by smallest member.
  std::vector<std::vector<int>> Components(int removed) const {
    const int p = static_cast<int>(size());
    std::vector<int> label(p, -1);
    std::vector<std::vector<int>> components;
    std::vector<int> stack;
    for (int s = 0; s < p; ++s) {
      if (s == removed || label[s] >= 0) continue;
      const int id = static_cast<int>(components.size());
      components.emplace_back();
      label[s] = id;
      stack.push_back(s);
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        components[id].push_back(u);
        for (int v : adjacency[u]) {
          if (v != removed && label[v] < 0) {
            label[v] = id;
            stack.push_back(v);
          }
        }
      }
      std::sort(components[id].begin(), components[id].end());
    }
    return components;
  }

  // Strength of a node set given in ascending local order.
  double SetStrength(const std::vector<int> &nodes) const {
    const size_t p = nodes.size();
    if (p < 2) return 0.0;
    size_t twice_edges = 0;
    for (int u : nodes) {
      for (int v : adjacency[u]) {
        if (std::binary_search(nodes.begin(), nodes.end(), v)) ++twice_edges;
      }
    }
    return static_cast<double>(twice_edges) / (static_cast<double>(p) * (p - 1));
  }

  // Whether the graph, assumed connected, has a cut vertex.
  bool HasArticulationPoint() const {
    const int p = static_cast<int>(size());
    std::vector<int> order(p, -1), low(p, 0), parent(p, -1);
    std::vector<size_t> next(p, 0);
    int counter = 0;
    int root_children = 0;
    std::vector<int> stack = {0};
    order[0] = low[0] = counter++;
    while (!stack.empty()) {
      int u = stack.back();
      if (next[u] < adjacency[u].size()) {
        int v = adjacency[u][next[u]++];
        if (order[v] < 0) {
          parent[v] = u;
          order[v] = low[v] = counter++;
          if (u == 0) ++root_children;
          stack.push_back(v);
        } else if (v != parent[u]) {
          low[u] = std::min(low[u], order[v]);
        }
        continue;
      }
      stack.pop_back();
      int w = parent[u];
      if (w < 0) continue;
      low[w] = std::min(low[w], low[u]);
      if (w != 0 && low[u] >= order[w]) return true;
    }
    return root_children > 1;
  }
};

}  // namespace

ClusterSet::ClusterSet(size_t n, std::vector<Cluster> clusters)
    : n_(n), clusters_(std::move(clusters)) {
  std::vector<char> seen(n, 0);
  for (auto &c : clusters_) {
    if (c.empty()) throw Error("empty cluster");
    std::sort(c.begin(), c.end());
    for (RecordIndex r : c) {
      if (r >= n) throw Error("record index out of range in cluster");
      if (seen[r]) throw Error("record appears in two clusters");
      seen[r] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error("clusters do not cover every record");
  }
  std::sort(clusters_.begin(), clusters_.end(),
            [](const Cluster &a, const Cluster &b) { return a[0] < b[0]; });
}

std::vector<uint32_t> ClusterSet::Labels() const {
  std::vector<uint32_t> labels(n_);
  for (size_t c = 0; c < clusters_.size(); ++c) {
    for (RecordIndex r : clusters_[c]) labels[r] = static_cast<uint32_t>(c);
  }
  return labels;
}

ThresholdedGraph::ThresholdedGraph(
    size_t n, double tau, std::vector<std::pair<RecordIndex, RecordIndex>> edges)
    : tau_(tau), edges_(std::move(edges)), adjacency_(n) {
  for (auto &[a, b] : edges_) {
    if (a == b) throw Error("self loop in thresholded graph");
    if (a > b) std::swap(a, b);
    if (b >= n) throw Error("edge endpoint out of range");
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto &adj : adjacency_) std::sort(adj.begin(), adj.end());
}

bool ThresholdedGraph::connected(RecordIndex a, RecordIndex b) const {
  const auto &adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

ThresholdInterval NontrivialInterval(const SimilarityMatrix &sim) {
  const size_t n = sim.size();
  const size_t all_pairs = n * (n - 1) / 2;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  size_t stored = 0;
  sim.ForEachUpper([&](size_t, size_t, double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++stored;
  });
  if (stored < all_pairs) lo = std::min(lo, 0.0);
  if (stored == 0) lo = 0.0;
  return {lo, hi};
}

ThresholdedGraph Threshold(const SimilarityMatrix &sim, double tau) {
  const size_t n = sim.size();
  std::vector<std::pair<RecordIndex, RecordIndex>> edges;
  if (tau <= 0.0) {
    // Absent pairs have similarity 0 and pass as well.
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
  } else {
    sim.ForEachUpper([&](size_t i, size_t j, double v) {
      if (v >= tau) edges.emplace_back(i, j);
    });
  }
  return ThresholdedGraph(n, tau, std::move(edges));
}

ClusterSet Group(const ThresholdedGraph &graph) {
  const size_t n = graph.num_records();
  DisjointSets sets(n);
  for (auto [a, b] : graph.edges()) sets.Union(a, b);
  std::vector<size_t> roots(n);
  for (size_t i = 0; i < n; ++i) roots[i] = sets.Find(i);
  return ClusterSet::FromLabels(roots);
}

HStatistics ComputeH(const SimilarityMatrix &sim) {
  std::vector<double> h(sim.size(), 0.0);
  sim.ForEachUpper([&](size_t i, size_t j, double v) {
    h[i] = std::max(h[i], v);
    h[j] = std::max(h[j], v);
  });
  return ComputeH(std::move(h));
}

HStatistics ComputeH(std::vector<double> h) {
  if (h.size() < 2) throw Error("need at least two records");
  HStatistics stats;
  const double n = static_cast<double>(h.size());
  double sum = 0.0;
  stats.max = h[0];
  for (double v : h) {
    sum += v;
    stats.max = std::max(stats.max, v);
  }
  stats.mean = sum / n;
  double sq = 0.0;
  for (double v : h) sq += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(sq / (n - 1.0));
  stats.h = std::move(h);
  return stats;
}

double AutoThreshold(const HStatistics &stats) {
  const double upper = stats.mean + stats.stddev;
  return upper < stats.max ? upper : stats.mean;
}

double AutoThreshold(const SimilarityMatrix &sim) {
  return AutoThreshold(ComputeH(sim));
}

double Strength(const Cluster &cluster, const ThresholdedGraph &graph) {
  Cluster sorted = cluster;
  std::sort(sorted.begin(), sorted.end());
  LocalGraph local(sorted, graph);
  std::vector<int> all(sorted.size());
  std::iota(all.begin(), all.end(), 0);
  return local.SetStrength(all);
}

bool NeedsRefinement(const Cluster &cluster, const ThresholdedGraph &graph) {
  if (cluster.size() <= 2) return false;
  Cluster sorted = cluster;
  std::sort(sorted.begin(), sorted.end());
  LocalGraph local(sorted, graph);
  // A disconnected set of three or more records always has a removal that
  // leaves two components.
  if (local.Components(-1).size() > 1) return true;
  return local.HasArticulationPoint();
}

std::vector<Cluster> RefineCluster(const Cluster &cluster,
                                   const ThresholdedGraph &graph) {
  if (!NeedsRefinement(cluster, graph)) {
    throw Error("cluster is stable and needs no refinement");
  }
  Cluster sorted = cluster;
  std::sort(sorted.begin(), sorted.end());
  LocalGraph local(sorted, graph);
  const int p = static_cast<int>(local.size());

  int best_removed = -1;
  double best_mean = -1.0;
  for (int r = 0; r < p; ++r) {
    auto parts = local.Components(r);
    double total = 0.0;
    for (const auto &part : parts) total += local.SetStrength(part);
    double mean = total / parts.size();
    if (mean > best_mean + kTieTolerance) {
      best_mean = mean;
      best_removed = r;
    }
  }

  auto parts = local.Components(best_removed);
  size_t best_part = 0;
  double best_strength = -1.0;
  for (size_t j = 0; j < parts.size(); ++j) {
    std::vector<int> with = parts[j];
    with.insert(std::upper_bound(with.begin(), with.end(), best_removed),
                best_removed);
    double s = local.SetStrength(with);
    if (s > best_strength + kTieTolerance) {
      best_strength = s;
      best_part = j;
    }
  }
  parts[best_part].push_back(best_removed);

  std::vector<Cluster> out;
  out.reserve(parts.size());
  for (const auto &part : parts) {
    Cluster c;
    c.reserve(part.size());
    for (int u : part) c.push_back(sorted[u]);
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

ClusterSet RefineAll(const ClusterSet &clusters, const ThresholdedGraph &graph,
                     const RefineOptions &options, RefineStats *stats) {
  RefineStats local_stats;
  ClusterSet current = clusters;
  while (true) {
    ++local_stats.passes;
    std::vector<Cluster> next;
    next.reserve(current.size());
    for (const Cluster &c : current.clusters()) {
      if (c.size() > options.max_cluster_size) {
        ++local_stats.skipped_large;
        next.push_back(c);
        continue;
      }
      if (!NeedsRefinement(c, graph)) {
        next.push_back(c);
        continue;
      }
      ++local_stats.refined;
      for (auto &part : RefineCluster(c, graph)) next.push_back(std::move(part));
    }
    ClusterSet refined(current.num_records(), std::move(next));
    const bool changed = !(refined == current);
    current = std::move(refined);
    if (!options.iterate || !changed) break;
  }
  if (stats) *stats = local_stats;
  return current;
}

void WriteClusters(std::ostream &out, const ClusterSet &clusters) {
  std::vector<uint32_t> labels = clusters.Labels();
  for (size_t i = 0; i < labels.size(); ++i) {
    out << i << ' ' << labels[i] << '\n';
  }
}

ClusterSet ReadClusters(std::istream &in) {
  std::map<size_t, std::string> assignment;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    size_t record;
    std::string label;
    if (!(fields >> record >> label)) {
      throw Error("malformed cluster line " + std::to_string(line_no));
    }
    if (!assignment.emplace(record, label).second) {
      throw Error("record " + std::to_string(record) + " assigned twice");
    }
  }
  if (assignment.empty()) throw Error("empty cluster file");
  std::vector<std::string> labels;
  size_t expected = 0;
  for (auto &[record, label] : assignment) {
    if (record != expected++) {
      throw Error("cluster file does not list records 0.." +
                  std::to_string(assignment.size() - 1));
    }
    labels.push_back(std::move(label));
  }
  return ClusterSet::FromLabels(labels);
}

}  // namespace reclink
