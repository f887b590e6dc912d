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

#include "reclink/evaluation.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "reclink/common.h"

namespace reclink {

namespace {

uint64_t Choose2(uint64_t k) { return k * (k - (k > 0)) / 2; }

void CheckSameRecords(const ClusterSet &a, const ClusterSet &b) {
  if (a.num_records() != b.num_records()) {
    throw Error("clusterings cover " + std::to_string(a.num_records()) +
                " and " + std::to_string(b.num_records()) + " records");
  }
  if (a.num_records() == 0) throw Error("empty clustering");
}

// Nonzero cells of the contingency table between two clusterings.
struct Contingency {
  std::vector<uint64_t> row_sizes;  // |R_i|
  std::vector<uint64_t> col_sizes;  // |R'_j|
  // (i, j, |R_i intersect R'_j|)
  std::vector<std::tuple<uint32_t, uint32_t, uint64_t>> cells;
};

Contingency BuildContingency(const ClusterSet &rows, const ClusterSet &cols) {
  CheckSameRecords(rows, cols);
  Contingency t;
  std::vector<uint32_t> a = rows.Labels();
  std::vector<uint32_t> b = cols.Labels();
  t.row_sizes.assign(rows.size(), 0);
  t.col_sizes.assign(cols.size(), 0);
  std::unordered_map<uint64_t, uint64_t> counts;
  for (size_t r = 0; r < a.size(); ++r) {
    ++t.row_sizes[a[r]];
    ++t.col_sizes[b[r]];
    ++counts[(uint64_t(a[r]) << 32) | b[r]];
  }
  t.cells.reserve(counts.size());
  for (auto [key, count] : counts) {
    t.cells.emplace_back(uint32_t(key >> 32), uint32_t(key & 0xFFFFFFFFu),
                         count);
  }
  std::sort(t.cells.begin(), t.cells.end());
  return t;
}

double Entropy(const std::vector<uint64_t> &sizes, double n) {
  double h = 0.0;
  for (uint64_t s : sizes) {
    double p = s / n;
    h -= p * std::log(p + kEntropyGuard);
  }
  return h;
}

}  // namespace

double Purity(const ClusterSet &found, const ClusterSet &truth) {
  Contingency t = BuildContingency(found, truth);
  std::vector<uint64_t> best(found.size(), 0);
  for (auto [i, j, count] : t.cells) best[i] = std::max(best[i], count);
  uint64_t sum = 0;
  for (uint64_t b : best) sum += b;
  return static_cast<double>(sum) / found.num_records();
}

double InversePurity(const ClusterSet &found, const ClusterSet &truth) {
  return Purity(truth, found);
}

double HarmonicMean(const ClusterSet &found, const ClusterSet &truth) {
  double pur = Purity(found, truth);
  double inv = InversePurity(found, truth);
  return 2.0 * pur * inv / (pur + inv);
}

double RelativeClusterError(const ClusterSet &found, const ClusterSet &truth) {
  CheckSameRecords(found, truth);
  double c = static_cast<double>(found.size());
  double c_true = static_cast<double>(truth.size());
  return std::abs(c - c_true) / c_true;
}

PairCounts CountPairs(const ClusterSet &found, const ClusterSet &truth) {
  Contingency t = BuildContingency(found, truth);
  PairCounts counts;
  for (uint64_t s : t.row_sizes) counts.found += Choose2(s);
  for (uint64_t s : t.col_sizes) counts.truth += Choose2(s);
  for (auto [i, j, c] : t.cells) counts.both += Choose2(c);
  counts.total = Choose2(found.num_records());
  return counts;
}

PairMetrics ComputePairMetrics(const ClusterSet &found,
                               const ClusterSet &truth) {
  PairCounts counts = CountPairs(found, truth);
  PairMetrics m;
  const double both = static_cast<double>(counts.both);
  if (counts.found > 0) m.precision = both / counts.found;
  if (counts.truth > 0) m.recall = both / counts.truth;
  if (counts.found > 0) m.f1 = 2.0 * both / (counts.found + counts.truth);
  return m;
}

PairOverlapNull PairOverlapDistribution(const ClusterSet &found,
                                        const ClusterSet &truth) {
  CheckSameRecords(found, truth);
  using Real = long double;
  const Real n = found.num_records();
  const Real total = n * (n - 1) / 2;

  // Probabilities that specific records share clusters of `found` after a
  // random relabeling: one pair, two pairs with a common record, two
  // disjoint pairs.
  Real pairs = 0, triples = 0, sq = 0, quads = 0;
  for (const Cluster &c : found.clusters()) {
    Real s = c.size();
    pairs += s * (s - 1) / 2;
    triples += s * (s - 1) * (s - 2);
    sq += (s * (s - 1)) * (s * (s - 1));
    quads += s * (s - 1) * (s - 2) * (s - 3);
  }
  const Real ordered_pairs = 2 * pairs;
  const Real p1 = total > 0 ? pairs / total : 0;
  const Real p3 = n >= 3 ? triples / (n * (n - 1) * (n - 2)) : 0;
  const Real p4 = n >= 4 ? (ordered_pairs * ordered_pairs - sq + quads) /
                               (n * (n - 1) * (n - 2) * (n - 3))
                         : 0;

  // Ordered pairs of distinct truth pairs, split by whether they share a
  // record.
  Real truth_pairs = 0, sharing = 0;
  for (const Cluster &c : truth.clusters()) {
    Real s = c.size();
    truth_pairs += s * (s - 1) / 2;
    sharing += s * (s - 1) * (s - 2);
  }
  const Real disjoint = truth_pairs * (truth_pairs - 1) - sharing;

  Real var = truth_pairs * p1 * (1 - p1) + sharing * (p3 - p1 * p1) +
             disjoint * (p4 - p1 * p1);
  PairOverlapNull out;
  out.mean = static_cast<double>(truth_pairs * p1);
  out.stddev = var > 0 ? static_cast<double>(std::sqrt(var)) : 0.0;
  return out;
}

Metric ZRand(const ClusterSet &found, const ClusterSet &truth) {
  PairOverlapNull null = PairOverlapDistribution(found, truth);
  if (!(null.stddev > 1e-9)) return std::nullopt;
  PairCounts counts = CountPairs(found, truth);
  return (static_cast<double>(counts.both) - null.mean) / null.stddev;
}

Metric RelativeZRand(const ClusterSet &found, const ClusterSet &truth) {
  Metric z = ZRand(found, truth);
  Metric self = ZRand(truth, truth);
  if (!z || !self || *self == 0.0) return std::nullopt;
  return *z / *self;
}

double NormalizedMutualInformation(const ClusterSet &found,
                                   const ClusterSet &truth) {
  Contingency t = BuildContingency(found, truth);
  const double n = static_cast<double>(found.num_records());
  double mutual = 0.0;
  for (auto [i, j, count] : t.cells) {
    double c = static_cast<double>(count);
    mutual += c / n *
              std::log(n * c / (static_cast<double>(t.row_sizes[i]) *
                                static_cast<double>(t.col_sizes[j])));
  }
  double h_found = std::max(Entropy(t.row_sizes, n), kEntropyGuard);
  double h_truth = std::max(Entropy(t.col_sizes, n), kEntropyGuard);
  double nmi = mutual / std::sqrt(h_found * h_truth);
  return std::clamp(nmi, 0.0, 1.0);
}

MetricsReport Evaluate(const ClusterSet &found, const ClusterSet &truth,
                       std::optional<double> tau) {
  CheckSameRecords(found, truth);
  MetricsReport r;
  r.purity = Purity(found, truth);
  r.inverse_purity = InversePurity(found, truth);
  r.harmonic_mean = 2.0 * r.purity * r.inverse_purity /
                    (r.purity + r.inverse_purity);
  r.rel_cluster_error = RelativeClusterError(found, truth);
  PairMetrics pm = ComputePairMetrics(found, truth);
  r.precision = pm.precision;
  r.recall = pm.recall;
  r.f1 = pm.f1;
  r.z_rand = ZRand(found, truth);
  r.rel_z_rand = RelativeZRand(found, truth);
  r.nmi = NormalizedMutualInformation(found, truth);
  r.n = found.num_records();
  r.c = found.size();
  r.c_true = truth.size();
  r.tau = tau;
  return r;
}

nlohmann::ordered_json ToJson(const MetricsReport &r) {
  auto opt = [](const std::optional<double> &v) -> nlohmann::ordered_json {
    if (v) return *v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["purity"] = r.purity;
  j["inverse_purity"] = r.inverse_purity;
  j["harmonic_mean"] = r.harmonic_mean;
  j["rel_cluster_error"] = r.rel_cluster_error;
  j["precision"] = opt(r.precision);
  j["recall"] = opt(r.recall);
  j["f1"] = opt(r.f1);
  j["z_rand"] = opt(r.z_rand);
  j["rel_z_rand"] = opt(r.rel_z_rand);
  j["nmi"] = r.nmi;
  j["n"] = r.n;
  j["c"] = r.c;
  j["c_true"] = r.c_true;
  j["tau"] = opt(r.tau);
  return j;
}

}  // namespace reclink
