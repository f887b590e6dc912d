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

#include "reclink/sparsity.h"

#include <map>
#include <string>

#include "reclink/common.h"

namespace reclink {

PresenceMask::PresenceMask(size_t num_records, size_t num_fields)
    : n_(num_records), a_(num_fields), bits_(num_records * num_fields, 0) {}

int PresenceMask::Shared(size_t i, size_t j) const {
  int shared = 0;
  const uint8_t *ri = &bits_[i * a_];
  const uint8_t *rj = &bits_[j * a_];
  for (size_t k = 0; k < a_; ++k) shared += ri[k] & rj[k];
  return shared;
}

size_t PresenceMask::NumMissing() const {
  size_t missing = 0;
  for (uint8_t b : bits_) missing += b == 0;
  return missing;
}

PresenceMask ComputePresenceMask(
    const std::vector<std::vector<TokenizedEntry>> &fields) {
  if (fields.empty()) throw Error("no fields");
  const size_t n = fields[0].size();
  PresenceMask mask(n, fields.size());
  for (size_t k = 0; k < fields.size(); ++k) {
    if (fields[k].size() != n) throw Error("fields have different lengths");
    for (size_t i = 0; i < n; ++i) mask.set(i, k, !fields[k][i].missing());
  }
  return mask;
}

CompositeSimilarity Adjust(const CompositeSimilarity &st,
                           const PresenceMask &mask) {
  if (st.adjusted) throw Error("similarity has already been adjusted");
  const SparseMatrix &raw = st.values.matrix();
  if (static_cast<size_t>(raw.rows()) != mask.num_records()) {
    throw Error("presence mask and similarity disagree on record count");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(raw.nonZeros() + raw.rows());
  for (int i = 0; i < raw.outerSize(); ++i) {
    triplets.emplace_back(i, i, 1.0);
    for (SparseMatrix::InnerIterator it(raw, i); it; ++it) {
      if (it.col() == i) continue;
      int shared = mask.Shared(i, it.col());
      if (shared == 0) continue;
      triplets.emplace_back(i, it.col(), it.value() / shared);
    }
  }
  SparseMatrix adjusted(raw.rows(), raw.cols());
  adjusted.setFromTriplets(triplets.begin(), triplets.end());

  CompositeSimilarity out;
  out.values = SimilarityMatrix(std::move(adjusted));
  out.adjusted = true;
  out.max_score = 1.0;
  return out;
}

DataSet ImputeMode(const DataSet &data, const TokenizerConfig &config,
                   uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> records;
  records.reserve(data.num_records());
  for (size_t i = 0; i < data.num_records(); ++i) {
    records.push_back(data.record(i));
  }

  for (size_t k = 0; k < data.num_fields(); ++k) {
    std::vector<size_t> missing;
    // Folded entry -> (count, first spelling seen).
    std::map<std::string, std::pair<size_t, std::string>> frequency;
    for (size_t i = 0; i < data.num_records(); ++i) {
      const std::string &e = data.entry(i, k);
      if (Tokenize(e, config).empty()) {
        missing.push_back(i);
        continue;
      }
      auto [it, inserted] = frequency.try_emplace(FoldCase(e), 0, e);
      ++it->second.first;
    }
    if (missing.empty()) continue;
    if (frequency.empty()) {
      throw Error("field '" + data.schema()[k] + "' has no non-missing entry");
    }

    size_t best = 0;
    for (const auto &[key, value] : frequency) best = std::max(best, value.first);
    std::vector<const std::string *> modes;
    for (const auto &[key, value] : frequency) {
      if (value.first == best) modes.push_back(&value.second);
    }
    const std::string &fill =
        modes.size() == 1 ? *modes[0] : *modes[rng.Below(modes.size())];
    for (size_t i : missing) records[i][k] = fill;
  }
  return DataSet(data.schema(), std::move(records));
}

}  // namespace reclink
