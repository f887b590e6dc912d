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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "reclink/common.h"
#include "reclink/corpus.h"

namespace reclink {
namespace {

DataSet OneField(std::vector<std::string> entries) {
  std::vector<std::vector<std::string>> rows;
  for (auto &e : entries) rows.push_back({e});
  return DataSet({"f"}, rows);
}

TokenizerConfig NoStopWords() {
  TokenizerConfig c;
  c.stop_words.clear();
  return c;
}

SimilarityMatrix FromDense(const std::vector<std::vector<double>> &dense) {
  const int n = static_cast<int>(dense.size());
  SparseMatrix m(n, n);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (dense[i][j] != 0) t.emplace_back(i, j, dense[i][j]);
    }
  }
  m.setFromTriplets(t.begin(), t.end());
  return SimilarityMatrix(std::move(m));
}

std::string RandomWord(std::mt19937 &gen, int max_len, int letters) {
  std::string s;
  int len = 1 + gen() % max_len;
  for (int i = 0; i < len; ++i) s += char('a' + gen() % letters);
  return s;
}

TEST(JaroTest, NightOwl) {
  EXPECT_NEAR(Jaro("NIGHTOWL", "NITHOWLG"), 0.869, 5e-4);
  // M = 7, t = 1.
  EXPECT_DOUBLE_EQ(Jaro("NIGHTOWL", "NITHOWLG"),
                   (7.0 / 8 + 7.0 / 8 + 6.0 / 7) / 3);
  SimilarityParams p;
  EXPECT_NEAR(JaroWinkler("NIGHTOWL", "NITHOWLG", p), 0.895, 5e-4);
}

TEST(JaroTest, Extremes) {
  EXPECT_DOUBLE_EQ(Jaro("abc", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(Jaro("abc", "xyz"), 0.0);
  EXPECT_DOUBLE_EQ(Jaro("", "abc"), 0.0);
  EXPECT_DOUBLE_EQ(Jaro("", ""), 0.0);
  EXPECT_DOUBLE_EQ(JaroWinkler("abcdefgh", "abcdefgh"), 1.0);
}

TEST(JaroTest, FractionalTranspositions) {
  // Window 1. Matches a-a, b-b, c-c with order a,b,c against b,a,c:
  // two mismatched positions, so t = 1.
  EXPECT_DOUBLE_EQ(Jaro("abc", "bac"), (1.0 + 1.0 + 2.0 / 3) / 3);
}

TEST(JaroTest, WindowLimitsMatches) {
  // Window floor(4/2) = 2: the 'a' at 0 cannot reach the 'a' at 3.
  EXPECT_DOUBLE_EQ(Jaro("axxx", "yyya"), 0.0);
}

TEST(JaroWinklerTest, PrefixCappedAtFour) {
  // Five shared leading characters, no other matches inside the window of 4:
  // M = 5, t = 0, J = (5/8 + 5/8 + 1) / 3 = 0.75, l = 4.
  const double j = 0.75;
  EXPECT_DOUBLE_EQ(Jaro("abcdeXYZ", "abcdePQR"), j);
  EXPECT_DOUBLE_EQ(JaroWinkler("abcdeXYZ", "abcdePQR"), j + 0.1 * 4 * (1 - j));
}

TEST(JaroWinklerTest, ComparesCodePoints) {
  EXPECT_DOUBLE_EQ(Jaro("\xc3\xa9t\xc3\xa9", "\xc3\xa9t\xc3\xa9"), 1.0);
  // Two-byte 'é' against one-byte 'e' never matches.
  EXPECT_DOUBLE_EQ(Jaro("\xc3\xa9", "e"), 0.0);
}

TEST(JaroWinklerTest, Properties) {
  std::mt19937 gen(7);
  SimilarityParams p;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string a = RandomWord(gen, 9, 4), b = RandomWord(gen, 9, 4);
    double j = Jaro(a, b), jw = JaroWinkler(a, b, p);
    EXPECT_DOUBLE_EQ(j, Jaro(b, a));
    EXPECT_DOUBLE_EQ(jw, JaroWinkler(b, a, p));
    EXPECT_GE(j, 0.0);
    EXPECT_LE(jw, 1.0);
    EXPECT_GE(jw, j);
    EXPECT_DOUBLE_EQ(JaroWinkler(a, a, p), 1.0);
  }
}

TEST(SimilarityParamsTest, Validate) {
  SimilarityParams p;
  EXPECT_NO_THROW(p.Validate(3));
  p.prefix_factor = 0.3;
  EXPECT_THROW(p.Validate(3), Error);
  p = {};
  p.theta = 1.0;
  EXPECT_THROW(p.Validate(3), Error);
  p = {};
  p.weights = {1, 1};
  EXPECT_THROW(p.Validate(3), Error);
  p.weights = {1, 0, 1};
  EXPECT_THROW(p.Validate(3), Error);
}

TEST(JaroWinklerMatrixTest, SingleFeature) {
  JaroWinklerMatrix m = BuildJaroWinklerMatrix(FeatureLexicon(0, {"abc"}), {});
  ASSERT_EQ(m.values.rows(), 1);
  EXPECT_EQ(m.values.coeff(0, 0), 1.0);
}

TEST(JaroWinklerMatrixTest, DissimilarFeaturesLeaveDiagonal) {
  JaroWinklerMatrix m =
      BuildJaroWinklerMatrix(FeatureLexicon(0, {"abc", "xyz"}), {});
  EXPECT_EQ(m.values.nonZeros(), 2);
  EXPECT_EQ(m.values.coeff(0, 1), 0.0);
}

TEST(JaroWinklerMatrixTest, MatchesDoubleLoop) {
  std::mt19937 gen(17);
  std::set<std::string> words;
  while (words.size() < 100) {
    std::string s;
    for (int i = 0; i < 8; ++i) s += char('a' + gen() % 3);
    words.insert(s);
  }
  FeatureLexicon lex(0, {words.begin(), words.end()});
  for (double theta : {0.0, 0.5, 0.9}) {
    SimilarityParams p;
    p.theta = theta;
    JaroWinklerMatrix m = BuildJaroWinklerMatrix(lex, p);
    for (size_t a = 0; a < lex.size(); ++a) {
      for (size_t b = 0; b < lex.size(); ++b) {
        double jw = JaroWinkler(lex.feature(a), lex.feature(b), p);
        double want = jw >= theta ? jw : 0.0;
        ASSERT_EQ(m.values.coeff(a, b), want) << a << ' ' << b;
      }
    }
  }
}

TEST(TfIdfTest, TwoEntryExample) {
  DataSet d = OneField({"a b", "a"});
  FeatureLexicon lex = BuildLexicon(d, 0, NoStopWords());
  TfIdfMatrix t = BuildTfIdf(TokenizeField(d, 0, lex, NoStopWords()), lex, 2);
  EXPECT_EQ(t.values.coeff(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(t.values.coeff(0, 1), 1.0);
  EXPECT_EQ(t.values.coeff(1, 0), 0.0);
  EXPECT_EQ(t.values.coeff(1, 1), 0.0);
  FieldSimilarity s = TfIdfField(t);
  EXPECT_EQ(s.values(0, 1), 0.0);
  EXPECT_EQ(s.values(0, 0), 1.0);
}

TEST(TfIdfTest, UbiquitousFeatureHasNoWeight) {
  DataSet d = OneField({"x", "x", "x"});
  FeatureLexicon lex = BuildLexicon(d, 0, NoStopWords());
  TfIdfMatrix t = BuildTfIdf(TokenizeField(d, 0, lex, NoStopWords()), lex, 3);
  EXPECT_EQ(t.values.nonZeros(), 0);
  DataSet single = OneField({"x"});
  t = BuildTfIdf(TokenizeField(single, 0, lex, NoStopWords()), lex, 1);
  EXPECT_EQ(t.values.nonZeros(), 0);
}

// Dense TF-IDF computed straight from the raw entries.
std::vector<std::vector<double>> OracleTfIdf(
    const std::vector<std::vector<std::string>> &tokens,
    const std::vector<std::string> &features) {
  const size_t n = tokens.size();
  std::map<std::string, double> df;
  for (const auto &entry : tokens) {
    std::set<std::string> seen(entry.begin(), entry.end());
    for (const auto &f : seen) df[f] += 1;
  }
  std::vector<std::vector<double>> w(n, std::vector<double>(features.size()));
  for (size_t i = 0; i < n; ++i) {
    double norm = 0;
    for (size_t p = 0; p < features.size(); ++p) {
      double tf = std::count(tokens[i].begin(), tokens[i].end(), features[p]);
      if (tf == 0) continue;
      w[i][p] = std::log(tf + 1) * std::log(double(n) / df[features[p]]);
      norm += w[i][p];
    }
    if (norm > 0) {
      for (double &v : w[i]) v /= norm;
    }
  }
  return w;
}

TEST(SoftTfIdfTest, MatchesFourIndexSum) {
  std::mt19937 gen(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + gen() % 19;
    std::vector<std::string> entries;
    std::vector<std::vector<std::string>> tokens;
    for (int i = 0; i < n; ++i) {
      std::string e;
      std::vector<std::string> words;
      for (int w = gen() % 4; w > 0; --w) {
        words.push_back(RandomWord(gen, 5, 4));
        e += words.back() + " ";
      }
      entries.push_back(e);
      tokens.push_back(words);
    }
    tokens[0] = {"seed"};
    entries[0] = "seed";
    const double theta = std::vector<double>{0.0, 0.5, 0.9}[trial % 3];
    SimilarityParams p;
    p.theta = theta;

    DataSet d = OneField(entries);
    FeatureLexicon lex = BuildLexicon(d, 0, NoStopWords());
    TfIdfMatrix t = BuildTfIdf(TokenizeField(d, 0, lex, NoStopWords()), lex, n);
    FieldSimilarity soft = SoftTfIdfField(t, BuildJaroWinklerMatrix(lex, p));
    FieldSimilarity exact = TfIdfField(t);

    auto w = OracleTfIdf(tokens, lex.features());
    const size_t m = lex.size();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double want_soft = 0, want_exact = 0;
        for (size_t a = 0; a < m; ++a) {
          if (w[i][a] == 0) continue;
          want_exact += w[i][a] * w[j][a];
          for (size_t b = 0; b < m; ++b) {
            double jw = JaroWinkler(lex.feature(a), lex.feature(b), p);
            if (jw >= theta) want_soft += w[i][a] * w[j][b] * jw;
          }
        }
        if (i == j) want_soft = want_exact = 1.0;
        ASSERT_NEAR(soft.values(i, j), want_soft, 1e-10) << i << ' ' << j;
        ASSERT_NEAR(exact.values(i, j), want_exact, 1e-10) << i << ' ' << j;
      }
    }
  }
}

TEST(SoftTfIdfTest, IdenticalAndMissingEntries) {
  DataSet d = OneField({"joe", "joe", "", "sam"});
  FeatureLexicon lex = BuildLexicon(d, 0, NoStopWords());
  TfIdfMatrix t = BuildTfIdf(TokenizeField(d, 0, lex, NoStopWords()), lex, 4);
  FieldSimilarity s = SoftTfIdfField(t, BuildJaroWinklerMatrix(lex, {}));
  EXPECT_DOUBLE_EQ(s.values(0, 1), 1.0);
  for (size_t j : {0, 1, 3}) EXPECT_EQ(s.values(2, j), 0.0);
  EXPECT_EQ(s.values(2, 2), 1.0);
}

TEST(SoftTfIdfTest, DominatesExactAndStaysInRange) {
  std::mt19937 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> entries;
    for (int i = 0; i < 30; ++i) {
      entries.push_back(RandomWord(gen, 6, 3) + " " + RandomWord(gen, 6, 3));
    }
    DataSet d = OneField(entries);
    FeatureLexicon lex = BuildLexicon(d, 0, NoStopWords());
    TfIdfMatrix t =
        BuildTfIdf(TokenizeField(d, 0, lex, NoStopWords()), lex, entries.size());
    for (int r = 0; r < t.values.outerSize(); ++r) {
      double sum = 0;
      for (SparseMatrix::InnerIterator it(t.values, r); it; ++it) {
        EXPECT_GE(it.value(), 0.0);
        sum += it.value();
      }
      if (sum > 0) EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    FieldSimilarity soft = SoftTfIdfField(t, BuildJaroWinklerMatrix(lex, {}));
    FieldSimilarity exact = TfIdfField(t);
    for (size_t i = 0; i < entries.size(); ++i) {
      for (size_t j = 0; j < entries.size(); ++j) {
        EXPECT_GE(soft.values(i, j), exact.values(i, j));
        EXPECT_LE(soft.values(i, j), 1.0);
        EXPECT_EQ(soft.values(i, j), soft.values(j, i));
      }
    }
  }
}

TEST(CompositeTest, WeightedSum) {
  std::vector<FieldSimilarity> fields;
  for (double v : {1.0, 1.0, 0.25}) {
    fields.push_back({fields.size(), FromDense({{1, v}, {v, 1}})});
  }
  CompositeSimilarity st = Composite(fields, {0.5, 0.5, 2.0});
  EXPECT_DOUBLE_EQ(st.values(0, 1), 1.5);
  EXPECT_DOUBLE_EQ(st.max_score, 3.0);
  EXPECT_FALSE(st.adjusted);
  st = Composite(fields, {1, 1, 1});
  EXPECT_DOUBLE_EQ(st.values(0, 1), 2.25);
  EXPECT_THROW(Composite(fields, {1, 1}), Error);
}

TEST(CompositeTest, JoeBruin) {
  // The third record gives "bruin" a nonzero IDF and keeps "CA" and "male"
  // from being ubiquitous.
  DataSet d({"name", "state", "sex"}, {{"Joe Bruin", "", "male"},
                                       {"Joe Bruin", "CA", ""},
                                       {"Joe Smith", "NY", "female"}});
  TokenizerConfig c;
  std::vector<FieldSimilarity> fields;
  for (size_t k = 0; k < 3; ++k) {
    FeatureLexicon lex = BuildLexicon(d, k, c);
    TfIdfMatrix t = BuildTfIdf(TokenizeField(d, k, lex, c), lex, 3);
    fields.push_back(SoftTfIdfField(t, BuildJaroWinklerMatrix(lex, {})));
  }
  CompositeSimilarity st = Composite(fields, {1, 1, 1});
  EXPECT_DOUBLE_EQ(st.values(0, 1), 1.0);
}

TEST(WriteTripletsTest, Format) {
  SimilarityMatrix m = FromDense({{1, 0.123456789012345}, {0.5, 0}});
  std::ostringstream out;
  WriteTriplets(out, m.matrix());
  EXPECT_EQ(out.str(), "0 0 1\n0 1 0.123456789012\n1 0 0.5\n");
}

}  // namespace
}  // namespace reclink
