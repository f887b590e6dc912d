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

// Character-level (Jaro, Jaro-Winkler), feature-level (TF-IDF) and hybrid
// (soft TF-IDF) similarity between entries, and their per-record composite.

#ifndef RECLINK_SIMILARITY_H_
#define RECLINK_SIMILARITY_H_

#include <Eigen/SparseCore>
#include <ostream>
#include <string_view>
#include <vector>

#include "reclink/corpus.h"

namespace reclink {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Off-diagonal similarities below this are not stored.
inline constexpr double kSimilarityFloor = 1e-12;

enum class Method { kTfIdf, kSoftTfIdf };

struct SimilarityParams {
  // Jaro-Winkler prefix bonus per shared leading character.
  double prefix_factor = 0.1;
  // Shared prefixes longer than this count as this long.
  int max_prefix = 4;
  // Feature pairs with Jaro-Winkler similarity below theta do not interact.
  double theta = 0.90;
  Method method = Method::kSoftTfIdf;
  // Per-field weights of the composite score. Empty means all ones.
  std::vector<double> weights;

  // Throws unless prefix_factor * max_prefix <= 1, 0 <= theta < 1 and the
  // weights (if given) are positive and one per field.
  void Validate(size_t num_fields) const;
};

// Jaro similarity. Matching characters are assigned greedily left to right
// inside a window of floor(min(|s1|, |s2|) / 2); t is half the number of
// positions at which the matched sequences differ. Strings are compared by
// UTF-8 code point. Returns 0 when nothing matches, including empty input.
double Jaro(std::string_view s1, std::string_view s2);

// Jaro similarity plus the prefix bonus p * l * (1 - J), where l is the
// common prefix length capped at params.max_prefix.
double JaroWinkler(std::string_view s1, std::string_view s2,
                   const SimilarityParams &params = {});

// Symmetric n x n similarity with both triangles and the diagonal stored.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(SparseMatrix values);

  size_t size() const { return static_cast<size_t>(values_.rows()); }
  const SparseMatrix &matrix() const { return values_; }

  // Value at (i, j); absent entries are zero.
  double operator()(size_t i, size_t j) const;

  // Calls f(i, j, value) for every stored entry with i < j.
  template <typename F>
  void ForEachUpper(F &&f) const {
    for (int i = 0; i < values_.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(values_, i); it; ++it) {
        if (it.col() > i) f(size_t(i), size_t(it.col()), it.value());
      }
    }
  }

  // Number of stored entries with i < j.
  size_t NumUpper() const;

 private:
  SparseMatrix values_;
};

// Thresholded Jaro-Winkler similarity between the features of one field:
// entries with JW >= theta, zero elsewhere.
struct JaroWinklerMatrix {
  size_t field = 0;
  double theta = 0;
  SparseMatrix values;  // m x m, symmetric, unit diagonal
};

JaroWinklerMatrix BuildJaroWinklerMatrix(const FeatureLexicon &lexicon,
                                         const SimilarityParams &params);

// Log-scaled, IDF-weighted term frequencies, every nonzero row normalized to
// unit l1 norm.
struct TfIdfMatrix {
  size_t field = 0;
  SparseMatrix values;  // n x m
};

TfIdfMatrix BuildTfIdf(const std::vector<TokenizedEntry> &entries,
                       const FeatureLexicon &lexicon, size_t n);

struct FieldSimilarity {
  size_t field = 0;
  SimilarityMatrix values;
};

// Off-diagonal (i, j) is row i of the TF-IDF matrix times the thresholded
// Jaro-Winkler matrix times row j transposed. The diagonal is 1.
FieldSimilarity SoftTfIdfField(const TfIdfMatrix &tfidf,
                               const JaroWinklerMatrix &jw);

// Same with the Jaro-Winkler matrix replaced by the identity: the
// off-diagonal of TFIDF * TFIDF^T.
FieldSimilarity TfIdfField(const TfIdfMatrix &tfidf);

struct CompositeSimilarity {
  SimilarityMatrix values;
  // Set once the shared-field division has been applied.
  bool adjusted = false;
  // Upper bound of the off-diagonal values: sum of weights, or 1 once
  // adjusted.
  double max_score = 0;
};

// Weighted sum of the per-field similarities. Throws if the number of
// weights differs from the number of fields, or if sizes disagree.
CompositeSimilarity Composite(const std::vector<FieldSimilarity> &fields,
                              const std::vector<double> &weights);

// Writes "i j value" lines (0-based, 12 significant digits), row by row.
void WriteTriplets(std::ostream &out, const SparseMatrix &m);

}  // namespace reclink

#endif  // RECLINK_SIMILARITY_H_
