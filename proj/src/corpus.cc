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

#include "reclink/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>

#include "reclink/common.h"
#include "reclink/csv.h"

namespace reclink {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

bool AllSpace(std::string_view s) {
  return std::all_of(s.begin(), s.end(), IsSpace);
}

// Byte offsets at which UTF-8 code points start, plus the end offset.
std::vector<size_t> CodePointOffsets(std::string_view s) {
  std::vector<size_t> offsets;
  for (size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) offsets.push_back(i);
  }
  offsets.push_back(s.size());
  return offsets;
}

}  // namespace

DataSet::DataSet(std::vector<std::string> schema,
                 std::vector<std::vector<std::string>> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
  if (schema_.empty()) throw Error("data set has no fields");
  if (records_.empty()) throw Error("data set has no records");
  for (size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].size() != schema_.size()) {
      throw Error("record " + std::to_string(i) + " has " +
                  std::to_string(records_[i].size()) + " entries, expected " +
                  std::to_string(schema_.size()));
    }
  }
}

size_t DataSet::FieldIndex(std::string_view name) const {
  auto it = std::find(schema_.begin(), schema_.end(), name);
  if (it == schema_.end()) {
    throw Error("unknown field '" + std::string(name) + "'");
  }
  return it - schema_.begin();
}

std::vector<std::string> DataSet::Column(size_t k) const {
  std::vector<std::string> column;
  column.reserve(records_.size());
  for (const auto &r : records_) column.push_back(r[k]);
  return column;
}

DataSet DataSet::Select(const std::vector<size_t> &fields) const {
  std::vector<std::string> schema;
  for (size_t k : fields) schema.push_back(schema_.at(k));
  std::vector<std::vector<std::string>> records;
  records.reserve(records_.size());
  for (const auto &r : records_) {
    std::vector<std::string> row;
    for (size_t k : fields) row.push_back(r[k]);
    records.push_back(std::move(row));
  }
  return DataSet(std::move(schema), std::move(records));
}

DataSet DataSet::WithEntry(size_t i, size_t k, std::string value) const {
  DataSet copy = *this;
  copy.records_.at(i).at(k) = std::move(value);
  return copy;
}

DataSet LoadDataset(std::istream &source, const LoadOptions &options) {
  std::vector<CsvRow> rows = ReadCsv(source, options.delimiter);
  // A line holding only whitespace is not a record.
  std::erase_if(rows, [](const CsvRow &r) {
    return r.size() == 1 && AllSpace(r[0]);
  });
  if (rows.empty()) throw Error("empty input");

  std::vector<std::string> schema = options.schema;
  size_t first = 0;
  if (options.header) {
    std::vector<std::string> header;
    for (const auto &f : rows[0]) header.push_back(Trim(f));
    if (schema.empty()) {
      schema = std::move(header);
    } else if (schema != header) {
      throw Error("header does not match the declared schema");
    }
    first = 1;
  }
  if (schema.empty()) throw Error("no schema given and no header row");
  if (first >= rows.size()) throw Error("input has a header but no records");

  std::vector<std::vector<std::string>> records;
  records.reserve(rows.size() - first);
  for (size_t r = first; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      throw Error("row " + std::to_string(r + 1) + " has " +
                  std::to_string(rows[r].size()) + " columns, expected " +
                  std::to_string(schema.size()));
    }
    std::vector<std::string> rec;
    rec.reserve(schema.size());
    for (const auto &f : rows[r]) rec.push_back(Trim(f));
    records.push_back(std::move(rec));
  }
  return DataSet(std::move(schema), std::move(records));
}

DataSet LoadDatasetFile(const std::string &path, const LoadOptions &options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return LoadDataset(in, options);
}

std::set<std::string> DefaultStopWords() {
  return {"and", "the", "or", "none", "na", ""};
}

void LoadStopWords(std::istream &in, TokenizerConfig &config) {
  std::string line;
  while (std::getline(in, line)) {
    config.stop_words.insert(FoldCase(Trim(line)));
  }
}

std::string FoldCase(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view entry,
                                  const TokenizerConfig &config) {
  if (config.ngram < 1) throw Error("N-gram length must be at least 1");
  const std::string text =
      config.case_fold ? FoldCase(entry) : std::string(entry);

  std::vector<std::string> raw;
  if (config.mode == FeatureMode::kWord) {
    size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && IsSpace(text[i])) ++i;
      size_t start = i;
      while (i < text.size() && !IsSpace(text[i])) ++i;
      if (i > start) raw.push_back(text.substr(start, i - start));
    }
  } else {
    std::vector<size_t> cp = CodePointOffsets(text);
    const size_t length = cp.size() - 1;
    const size_t n = static_cast<size_t>(config.ngram);
    if (length <= n) {
      if (length > 0) raw.push_back(text);
    } else {
      for (size_t i = 0; i + n <= length; ++i) {
        raw.push_back(text.substr(cp[i], cp[i + n] - cp[i]));
      }
    }
  }

  std::vector<std::string> tokens;
  tokens.reserve(raw.size());
  for (auto &t : raw) {
    if (AllSpace(t)) continue;
    if (config.stop_words.count(config.case_fold ? t : FoldCase(t))) continue;
    tokens.push_back(std::move(t));
  }
  return tokens;
}

FeatureLexicon::FeatureLexicon(size_t field, std::vector<std::string> features)
    : field_(field), features_(std::move(features)) {
  lookup_.reserve(features_.size());
  for (size_t j = 0; j < features_.size(); ++j) {
    if (!lookup_.emplace(features_[j], static_cast<int>(j)).second) {
      throw Error("duplicate feature '" + features_[j] + "'");
    }
  }
}

int FeatureLexicon::Find(std::string_view token) const {
  auto it = lookup_.find(std::string(token));
  return it == lookup_.end() ? -1 : it->second;
}

FeatureLexicon BuildLexicon(const DataSet &data, size_t k,
                            const TokenizerConfig &config) {
  if (k >= data.num_fields()) {
    throw Error("field index " + std::to_string(k) + " out of range");
  }
  std::set<std::string> distinct;
  for (size_t i = 0; i < data.num_records(); ++i) {
    for (auto &t : Tokenize(data.entry(i, k), config)) {
      distinct.insert(std::move(t));
    }
  }
  if (distinct.empty()) {
    throw Error("field '" + data.schema()[k] + "' has no features");
  }
  return FeatureLexicon(k, {distinct.begin(), distinct.end()});
}

std::vector<TokenizedEntry> TokenizeField(const DataSet &data, size_t k,
                                          const FeatureLexicon &lexicon,
                                          const TokenizerConfig &config) {
  std::vector<TokenizedEntry> out(data.num_records());
  for (size_t i = 0; i < data.num_records(); ++i) {
    std::map<int32_t, int32_t> counts;
    int32_t total = 0;
    for (const auto &t : Tokenize(data.entry(i, k), config)) {
      ++total;
      int j = lexicon.Find(t);
      if (j >= 0) ++counts[j];
    }
    out[i].counts.assign(counts.begin(), counts.end());
    out[i].raw_token_total = total;
  }
  return out;
}

}  // namespace reclink
