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

// Tabular records and their conversion into per-field feature multisets.

#ifndef RECLINK_CORPUS_H_
#define RECLINK_CORPUS_H_

#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace reclink {

// An n x a grid of string entries. Each row is a record, each column a
// field. Entries may be empty.
class DataSet {
 public:
  DataSet(std::vector<std::string> schema,
          std::vector<std::vector<std::string>> records);

  size_t num_records() const { return records_.size(); }
  size_t num_fields() const { return schema_.size(); }

  const std::vector<std::string> &schema() const { return schema_; }
  const std::vector<std::string> &record(size_t i) const { return records_[i]; }
  const std::string &entry(size_t i, size_t k) const { return records_[i][k]; }

  // Returns the index of a field, or throws naming the unknown field.
  size_t FieldIndex(std::string_view name) const;

  // Returns the values of one field, in record order.
  std::vector<std::string> Column(size_t k) const;

  // Projection onto the given fields, in the given order.
  DataSet Select(const std::vector<size_t> &fields) const;

  // Copy with one entry replaced.
  DataSet WithEntry(size_t i, size_t k, std::string value) const;

  bool operator==(const DataSet &other) const = default;

 private:
  std::vector<std::string> schema_;
  std::vector<std::vector<std::string>> records_;
};

struct LoadOptions {
  char delimiter = ',';
  // First row holds field names. When false, `schema` must be given.
  bool header = true;
  std::vector<std::string> schema;
};

// Parses delimited text. Outer whitespace of every entry is trimmed; inner
// whitespace is kept. Throws on empty input or on a row whose column count
// differs from the schema.
DataSet LoadDataset(std::istream &source, const LoadOptions &options = {});
DataSet LoadDatasetFile(const std::string &path,
                        const LoadOptions &options = {});

enum class FeatureMode { kWord, kNGram };

// The stop words used when none are configured.
std::set<std::string> DefaultStopWords();

struct TokenizerConfig {
  FeatureMode mode = FeatureMode::kWord;
  // Length of N-grams in code points. Only used in kNGram mode.
  int ngram = 3;
  // Lower-case ASCII letters before anything else.
  bool case_fold = true;
  // Compared after lower-casing regardless of `case_fold`.
  std::set<std::string> stop_words = DefaultStopWords();
};

// Adds the words of a stop-word file (one per line) to `config`.
void LoadStopWords(std::istream &in, TokenizerConfig &config);

std::string FoldCase(std::string_view s);

// Splits an entry into features. Word mode splits on whitespace runs.
// N-gram mode slides a window of `ngram` code points over the whole entry,
// spaces included; an entry of at most `ngram` code points is one token.
// Grams that are entirely whitespace and stop words are dropped.
std::vector<std::string> Tokenize(std::string_view entry,
                                  const TokenizerConfig &config);

// Ordered set of the distinct features of one field.
class FeatureLexicon {
 public:
  FeatureLexicon(size_t field, std::vector<std::string> features);

  size_t field() const { return field_; }
  size_t size() const { return features_.size(); }
  const std::vector<std::string> &features() const { return features_; }
  const std::string &feature(size_t j) const { return features_[j]; }

  // Index of a feature, or -1 when the token is not in the lexicon.
  int Find(std::string_view token) const;

 private:
  size_t field_;
  std::vector<std::string> features_;
  std::unordered_map<std::string, int> lookup_;
};

// All distinct tokens of field k, sorted by byte value. Throws if every entry
// of the field is empty after stop-word removal.
FeatureLexicon BuildLexicon(const DataSet &data, size_t k,
                            const TokenizerConfig &config);

// Feature multiset of one entry.
struct TokenizedEntry {
  // (feature index, occurrence count), sorted by feature index.
  std::vector<std::pair<int32_t, int32_t>> counts;
  // All tokens seen, including those outside the lexicon.
  int32_t raw_token_total = 0;

  // An entry with no lexicon features carries no information.
  bool missing() const { return counts.empty(); }
};

std::vector<TokenizedEntry> TokenizeField(const DataSet &data, size_t k,
                                          const FeatureLexicon &lexicon,
                                          const TokenizerConfig &config);

}  // namespace reclink

#endif  // RECLINK_CORPUS_H_
