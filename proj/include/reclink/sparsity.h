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

// Handling of missing entries: normalization of the composite score by the
// number of fields two records both fill in, or mode imputation.

#ifndef RECLINK_SPARSITY_H_
#define RECLINK_SPARSITY_H_

#include <cstdint>
#include <vector>

#include "reclink/corpus.h"
#include "reclink/similarity.h"

namespace reclink {

// Binary n x a mask, 1 where the entry has at least one lexicon feature.
class PresenceMask {
 public:
  PresenceMask(size_t num_records, size_t num_fields);

  size_t num_records() const { return n_; }
  size_t num_fields() const { return a_; }

  bool present(size_t i, size_t k) const { return bits_[i * a_ + k]; }
  void set(size_t i, size_t k, bool value) { bits_[i * a_ + k] = value; }

  // (B B^T)_{ij}: fields present in both records.
  int Shared(size_t i, size_t j) const;

  // Number of zero entries of B.
  size_t NumMissing() const;

 private:
  size_t n_, a_;
  std::vector<uint8_t> bits_;
};

// `fields` holds one tokenized column per field, all of the same length.
PresenceMask ComputePresenceMask(
    const std::vector<std::vector<TokenizedEntry>> &fields);

// Divides every off-diagonal score by the shared-field count of its pair
// (zero where nothing is shared) and sets the diagonal to 1. Throws if `st`
// has already been adjusted.
CompositeSimilarity Adjust(const CompositeSimilarity &st,
                           const PresenceMask &mask);

// Replaces every missing entry (no features under `config`) with the most
// frequent non-missing entry of its field, comparing entries after case
// folding. Ties are broken by one draw per field from a generator seeded with
// `seed`. Throws if some field has no non-missing entry.
DataSet ImputeMode(const DataSet &data, const TokenizerConfig &config,
                   uint64_t seed);

}  // namespace reclink

#endif  // RECLINK_SPARSITY_H_
