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

#include "reclink/similarity.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "reclink/common.h"

namespace reclink {

namespace {

using Triplet = Eigen::Triplet<double>;

// Decodes UTF-8. Malformed bytes become code points of their own, which is
// enough for equality comparison.
std::u32string Decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : 0;
    if (extra > 0 && i + extra >= s.size()) extra = 0;
    char32_t cp = extra == 0 ? c : (c & (0x3F >> extra));
    bool ok = true;
    for (int e = 1; e <= extra; ++e) {
      unsigned char cc = s[i + e];
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      cp = c;
      extra = 0;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

double JaroDecoded(const std::u32string &a, const std::u32string &b) {
  if (a.empty() || b.empty()) return 0.0;
  const size_t window = std::min(a.size(), b.size()) / 2;
  std::vector<char> used_b(b.size(), 0);
  std::vector<size_t> matched_a;  // positions in a, ascending
  matched_a.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    size_t lo = i > window ? i - window : 0;
    size_t hi = std::min(b.size() - 1, i + window);
    for (size_t j = lo; j <= hi; ++j) {
      if (!used_b[j] && b[j] == a[i]) {
        used_b[j] = 1;
        matched_a.push_back(i);
        break;
      }
    }
  }
  const size_t m = matched_a.size();
  if (m == 0) return 0.0;

  size_t mismatches = 0;
  size_t k = 0;
  for (size_t j = 0; j < b.size(); ++j) {
    if (!used_b[j]) continue;
    if (a[matched_a[k]] != b[j]) ++mismatches;
    ++k;
  }
  const double t = mismatches / 2.0;
  const double md = static_cast<double>(m);
  return (md / a.size() + md / b.size() + (md - t) / md) / 3.0;
}

double JaroWinklerDecoded(const std::u32string &a, const std::u32string &b,
                          const SimilarityParams &params) {
  const double j = JaroDecoded(a, b);
  size_t limit = std::min({a.size(), b.size(),
                           static_cast<size_t>(std::max(params.max_prefix, 0))});
  size_t prefix = 0;
  while (prefix < limit && a[prefix] == b[prefix]) ++prefix;
  return j + params.prefix_factor * static_cast<double>(prefix) * (1.0 - j);
}

// Symmetrizes the upper triangle of a product, drops values below the floor,
// clamps to [0, 1] and puts ones on the diagonal.
SimilarityMatrix FinishFieldSimilarity(const SparseMatrix &product) {
  const int n = static_cast<int>(product.rows());
  std::vector<Triplet> triplets;
  for (int i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, 1.0);
    for (SparseMatrix::InnerIterator it(product, i); it; ++it) {
      if (it.col() <= i) continue;
      double v = std::min(it.value(), 1.0);
      if (v < kSimilarityFloor) continue;
      triplets.emplace_back(i, it.col(), v);
      triplets.emplace_back(it.col(), i, v);
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return SimilarityMatrix(std::move(out));
}

}  // namespace

void SimilarityParams::Validate(size_t num_fields) const {
  if (prefix_factor < 0 || max_prefix < 0) {
    throw Error("prefix factor and prefix cap must be nonnegative");
  }
  if (prefix_factor * max_prefix > 1.0) {
    throw Error("prefix factor times prefix cap must not exceed 1");
  }
  if (!(theta >= 0.0 && theta < 1.0)) throw Error("theta must lie in [0, 1)");
  if (!weights.empty()) {
    if (weights.size() != num_fields) {
      throw Error("expected " + std::to_string(num_fields) + " weights, got " +
                  std::to_string(weights.size()));
    }
    for (double w : weights) {
      if (!(w > 0) || !std::isfinite(w)) throw Error("weights must be positive");
    }
  }
}

double Jaro(std::string_view s1, std::string_view s2) {
  return JaroDecoded(Decode(s1), Decode(s2));
}

double JaroWinkler(std::string_view s1, std::string_view s2,
                   const SimilarityParams &params) {
  return JaroWinklerDecoded(Decode(s1), Decode(s2), params);
}

SimilarityMatrix::SimilarityMatrix(SparseMatrix values)
    : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw Error("similarity matrix must be square");
  }
  values_.makeCompressed();
}

double SimilarityMatrix::operator()(size_t i, size_t j) const {
  const int *inner = values_.innerIndexPtr();
  const auto *outer = values_.outerIndexPtr();
  const int *begin = inner + outer[i];
  const int *end = inner + outer[i + 1];
  const int *it = std::lower_bound(begin, end, static_cast<int>(j));
  if (it == end || *it != static_cast<int>(j)) return 0.0;
  return values_.valuePtr()[it - inner];
}

size_t SimilarityMatrix::NumUpper() const {
  size_t count = 0;
  ForEachUpper([&](size_t, size_t, double) { ++count; });
  return count;
}

JaroWinklerMatrix BuildJaroWinklerMatrix(const FeatureLexicon &lexicon,
                                         const SimilarityParams &params) {
  const size_t m = lexicon.size();
  std::vector<std::u32string> decoded;
  decoded.reserve(m);
  for (const auto &f : lexicon.features()) decoded.push_back(Decode(f));

  std::vector<Triplet> triplets;
  for (size_t p = 0; p < m; ++p) {
    triplets.emplace_back(p, p, 1.0);
    for (size_t q = p + 1; q < m; ++q) {
      double v = JaroWinklerDecoded(decoded[p], decoded[q], params);
      if (v >= params.theta && v > 0.0) {
        triplets.emplace_back(p, q, v);
        triplets.emplace_back(q, p, v);
      }
    }
  }
  JaroWinklerMatrix out;
  out.field = lexicon.field();
  out.theta = params.theta;
  out.values.resize(m, m);
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  out.values.makeCompressed();
  return out;
}

TfIdfMatrix BuildTfIdf(const std::vector<TokenizedEntry> &entries,
                       const FeatureLexicon &lexicon, size_t n) {
  if (entries.size() != n) {
    throw Error("expected " + std::to_string(n) + " tokenized entries, got " +
                std::to_string(entries.size()));
  }
  const size_t m = lexicon.size();
  std::vector<size_t> df(m, 0);
  for (const auto &e : entries) {
    for (auto [j, count] : e.counts) {
      if (j < 0 || static_cast<size_t>(j) >= m) {
        throw Error("feature index out of lexicon range");
      }
      ++df[j];
    }
  }
  std::vector<double> idf(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    if (df[j] > 0) idf[j] = std::log(static_cast<double>(n) / df[j]);
  }

  std::vector<Triplet> triplets;
  for (size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (auto [j, count] : entries[i].counts) {
      norm += std::log(count + 1.0) * idf[j];
    }
    if (norm <= 0.0) continue;
    for (auto [j, count] : entries[i].counts) {
      double w = std::log(count + 1.0) * idf[j] / norm;
      if (w > 0.0) triplets.emplace_back(i, j, w);
    }
  }
  TfIdfMatrix out;
  out.field = lexicon.field();
  out.values.resize(n, m);
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  out.values.makeCompressed();
  return out;
}

FieldSimilarity SoftTfIdfField(const TfIdfMatrix &tfidf,
                               const JaroWinklerMatrix &jw) {
  if (tfidf.values.cols() != jw.values.rows()) {
    throw Error("TF-IDF and Jaro-Winkler matrices disagree on feature count");
  }
  SparseMatrix weighted = tfidf.values * jw.values;
  SparseMatrix transposed = tfidf.values.transpose();
  SparseMatrix product = weighted * transposed;
  return {tfidf.field, FinishFieldSimilarity(product)};
}

FieldSimilarity TfIdfField(const TfIdfMatrix &tfidf) {
  SparseMatrix transposed = tfidf.values.transpose();
  SparseMatrix product = tfidf.values * transposed;
  return {tfidf.field, FinishFieldSimilarity(product)};
}

CompositeSimilarity Composite(const std::vector<FieldSimilarity> &fields,
                              const std::vector<double> &weights) {
  if (fields.empty()) throw Error("no field similarities to combine");
  if (weights.size() != fields.size()) {
    throw Error("expected " + std::to_string(fields.size()) +
                " weights, got " + std::to_string(weights.size()));
  }
  const auto n = fields[0].values.matrix().rows();
  SparseMatrix sum(n, n);
  double total = 0.0;
  for (size_t k = 0; k < fields.size(); ++k) {
    if (fields[k].values.matrix().rows() != n) {
      throw Error("field similarities have different record counts");
    }
    sum += weights[k] * fields[k].values.matrix();
    total += weights[k];
  }
  CompositeSimilarity out;
  out.values = SimilarityMatrix(std::move(sum));
  out.adjusted = false;
  out.max_score = total;
  return out;
}

void WriteTriplets(std::ostream &out, const SparseMatrix &m) {
  char buf[64];
  for (int i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%.12g", it.value());
      out << i << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

}  // namespace reclink
