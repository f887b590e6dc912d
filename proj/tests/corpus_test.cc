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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "reclink/common.h"
#include "reclink/csv.h"

namespace reclink {
namespace {

using ::testing::HasSubstr;

DataSet OneField(std::vector<std::string> entries) {
  std::vector<std::vector<std::string>> rows;
  for (auto &e : entries) rows.push_back({e});
  return DataSet({"f"}, rows);
}

TokenizerConfig NoStopWords(FeatureMode mode = FeatureMode::kWord) {
  TokenizerConfig c;
  c.mode = mode;
  c.stop_words.clear();
  return c;
}

TEST(LoadDatasetTest, HeaderAndRows) {
  std::istringstream in("a,b,c\n1,2,3\n4,,6\n");
  DataSet d = LoadDataset(in);
  EXPECT_EQ(d.num_records(), 2u);
  EXPECT_EQ(d.num_fields(), 3u);
  EXPECT_EQ(d.entry(1, 1), "");
  EXPECT_EQ(d.FieldIndex("c"), 2u);
}

TEST(LoadDatasetTest, TrimsOuterWhitespaceOnly) {
  std::istringstream in("name\n  Joe   Bruin \n");
  EXPECT_EQ(LoadDataset(in).entry(0, 0), "Joe   Bruin");
}

TEST(LoadDatasetTest, QuotedFields) {
  std::istringstream in("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n\"two\nlines\",z\n");
  DataSet d = LoadDataset(in);
  ASSERT_EQ(d.num_records(), 2u);
  EXPECT_EQ(d.entry(0, 0), "x, y");
  EXPECT_EQ(d.entry(0, 1), "say \"hi\"");
  EXPECT_EQ(d.entry(1, 0), "two\nlines");
}

TEST(LoadDatasetTest, OtherDelimiterAndNoHeader) {
  std::istringstream in("1\t2\n");
  LoadOptions opts;
  opts.delimiter = '\t';
  opts.header = false;
  opts.schema = {"x", "y"};
  DataSet d = LoadDataset(in, opts);
  EXPECT_EQ(d.schema(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(d.entry(0, 1), "2");
}

TEST(LoadDatasetTest, WrongColumnCountNamesRow) {
  std::istringstream in("a,b\n1,2\n3\n");
  try {
    LoadDataset(in);
    FAIL();
  } catch (const Error &e) {
    EXPECT_THAT(std::string(e.what()), HasSubstr("row 3"));
  }
}

TEST(LoadDatasetTest, EmptyInputFails) {
  std::istringstream in("");
  EXPECT_THROW(LoadDataset(in), Error);
  std::istringstream header_only("a,b\n");
  EXPECT_THROW(LoadDataset(header_only), Error);
}

TEST(LoadDatasetTest, UnterminatedQuoteFails) {
  std::istringstream in("a\n\"open\n");
  EXPECT_THROW(LoadDataset(in), Error);
}

TEST(LoadDatasetTest, UnknownFieldIsNamed) {
  std::istringstream in("a\n1\n");
  DataSet d = LoadDataset(in);
  try {
    d.FieldIndex("zip");
    FAIL();
  } catch (const Error &e) {
    EXPECT_THAT(std::string(e.what()), HasSubstr("zip"));
  }
}

TEST(CsvTest, WriteReadRoundTrip) {
  CsvRow row = {"plain", "with,comma", "quote\"d", " padded", "", "x\ny"};
  std::ostringstream out;
  WriteCsvRow(out, row);
  std::istringstream in(out.str());
  std::vector<CsvRow> back = ReadCsv(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], row);
}

TEST(TokenizeTest, WordsSplitOnWhitespaceRuns) {
  TokenizerConfig c = NoStopWords();
  c.case_fold = false;
  EXPECT_EQ(Tokenize("Albert Einstein", c),
            (std::vector<std::string>{"Albert", "Einstein"}));
  EXPECT_EQ(Tokenize("  a \t b  ", c), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(Tokenize("", c).empty());
}

TEST(TokenizeTest, ThirteenTrigramsOfAlbertEinstein) {
  TokenizerConfig c = NoStopWords(FeatureMode::kNGram);
  c.case_fold = false;
  std::vector<std::string> grams = Tokenize("Albert Einstein", c);
  std::sort(grams.begin(), grams.end());
  EXPECT_EQ(grams,
            (std::vector<std::string>{" Ei", "Alb", "Ein", "ber", "ein", "ert",
                                      "ins", "lbe", "nst", "rt ", "ste", "t E",
                                      "tei"}));
}

TEST(TokenizeTest, ShortEntryIsOneGram) {
  TokenizerConfig c = NoStopWords(FeatureMode::kNGram);
  EXPECT_EQ(Tokenize("ab", c), (std::vector<std::string>{"ab"}));
  EXPECT_EQ(Tokenize("abc", c), (std::vector<std::string>{"abc"}));
}

TEST(TokenizeTest, WhitespaceGramsDropped) {
  TokenizerConfig c = NoStopWords(FeatureMode::kNGram);
  c.ngram = 2;
  EXPECT_EQ(Tokenize("a  b", c), (std::vector<std::string>{"a ", " b"}));
}

TEST(TokenizeTest, GramsCountCodePoints) {
  TokenizerConfig c = NoStopWords(FeatureMode::kNGram);
  c.ngram = 2;
  EXPECT_EQ(Tokenize("caf\xc3\xa9", c),
            (std::vector<std::string>{"ca", "af", "f\xc3\xa9"}));
}

TEST(TokenizeTest, StopWordsDroppedAfterFolding) {
  TokenizerConfig c;
  EXPECT_TRUE(Tokenize("the", c).empty());
  EXPECT_EQ(Tokenize("Salt AND Pepper", c),
            (std::vector<std::string>{"salt", "pepper"}));
  c.case_fold = false;
  EXPECT_EQ(Tokenize("The Pub", c), (std::vector<std::string>{"Pub"}));
}

TEST(TokenizeTest, DefaultStopWords) {
  EXPECT_EQ(DefaultStopWords(),
            (std::set<std::string>{"", "and", "the", "or", "none", "na"}));
}

TEST(TokenizeTest, StopWordFileExtendsList) {
  TokenizerConfig c;
  std::istringstream file("Blvd.\nst.\n\n");
  LoadStopWords(file, c);
  EXPECT_EQ(Tokenize("Sunset Blvd.", c), (std::vector<std::string>{"sunset"}));
  EXPECT_TRUE(c.stop_words.count("and"));
}

TEST(TokenizeTest, PunctuationKept) {
  TokenizerConfig c;
  EXPECT_EQ(Tokenize("310/246-1501", c),
            (std::vector<std::string>{"310/246-1501"}));
}

TEST(TokenizeTest, WordTokensAreIdempotent) {
  std::mt19937 gen(3);
  const std::string alphabet = "ab \tC";
  TokenizerConfig c = NoStopWords();
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    for (int i = gen() % 12; i > 0; --i) s += alphabet[gen() % alphabet.size()];
    std::vector<std::string> once = Tokenize(s, c);
    std::string joined;
    for (size_t i = 0; i < once.size(); ++i) joined += (i ? " " : "") + once[i];
    EXPECT_EQ(Tokenize(joined, c), once) << '"' << s << '"';
  }
}

TEST(TokenizeTest, TrigramCountIsLengthMinusTwo) {
  std::mt19937 gen(5);
  TokenizerConfig c = NoStopWords(FeatureMode::kNGram);
  for (int trial = 0; trial < 100; ++trial) {
    std::string s;
    int len = 3 + gen() % 20;
    for (int i = 0; i < len; ++i) s += char('a' + gen() % 26);
    EXPECT_EQ(Tokenize(s, c).size(), size_t(len - 2));
  }
}

TEST(BuildLexiconTest, UnionOfTokens) {
  FeatureLexicon lex = BuildLexicon(OneField({"a b", "a"}), 0, NoStopWords());
  EXPECT_EQ(lex.features(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(lex.Find("b"), 1);
  EXPECT_EQ(lex.Find("c"), -1);
}

TEST(BuildLexiconTest, SortedWithoutFolding) {
  TokenizerConfig c;
  c.case_fold = false;
  FeatureLexicon lex =
      BuildLexicon(OneField({"Joe Bruin", "Joe Bruin", "Joan Lurin"}), 0, c);
  EXPECT_EQ(lex.features(),
            (std::vector<std::string>{"Bruin", "Joan", "Joe", "Lurin"}));
}

TEST(BuildLexiconTest, FoldedByDefault) {
  FeatureLexicon lex =
      BuildLexicon(OneField({"Joe Bruin", "JOE", "joan"}), 0, TokenizerConfig());
  EXPECT_EQ(lex.features(), (std::vector<std::string>{"bruin", "joan", "joe"}));
}

TEST(BuildLexiconTest, AllStopWordsIsAnError) {
  try {
    BuildLexicon(OneField({"the", "or"}), 0, TokenizerConfig());
    FAIL();
  } catch (const Error &e) {
    EXPECT_THAT(std::string(e.what()), HasSubstr("has no features"));
  }
}

TEST(BuildLexiconTest, IndependentOfRecordOrder) {
  std::vector<std::string> entries = {"x y", "b a", "y", "c a x", ""};
  FeatureLexicon lex = BuildLexicon(OneField(entries), 0, NoStopWords());
  std::mt19937 gen(1);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(entries.begin(), entries.end(), gen);
    EXPECT_EQ(BuildLexicon(OneField(entries), 0, NoStopWords()).features(),
              lex.features());
  }
  for (size_t j = 0; j < lex.size(); ++j) {
    EXPECT_EQ(lex.Find(lex.feature(j)), int(j));
  }
}

TEST(TokenizeFieldTest, CountsMultiplicity) {
  DataSet d = OneField({"a b a", "b"});
  FeatureLexicon lex = BuildLexicon(d, 0, NoStopWords());
  std::vector<TokenizedEntry> t = TokenizeField(d, 0, lex, NoStopWords());
  using Counts = std::vector<std::pair<int32_t, int32_t>>;
  EXPECT_EQ(t[0].counts, (Counts{{0, 2}, {1, 1}}));
  EXPECT_EQ(t[0].raw_token_total, 3);
  EXPECT_EQ(t[1].counts, (Counts{{1, 1}}));
}

TEST(TokenizeFieldTest, StopWordEntryIsMissing) {
  DataSet d = OneField({"the", "a"});
  TokenizerConfig c;
  FeatureLexicon lex = BuildLexicon(d, 0, c);
  std::vector<TokenizedEntry> t = TokenizeField(d, 0, lex, c);
  EXPECT_TRUE(t[0].missing());
  EXPECT_FALSE(t[1].missing());
}

TEST(TokenizeFieldTest, OutOfLexiconTokensOnlyCounted) {
  DataSet d = OneField({"c"});
  FeatureLexicon lex(0, {"a", "b"});
  std::vector<TokenizedEntry> t = TokenizeField(d, 0, lex, NoStopWords());
  EXPECT_TRUE(t[0].missing());
  EXPECT_EQ(t[0].raw_token_total, 1);
}

TEST(TokenizeFieldTest, IndicesAreValid) {
  std::mt19937 gen(11);
  std::vector<std::string> entries;
  for (int i = 0; i < 40; ++i) {
    std::string s;
    for (int j = gen() % 10; j > 0; --j) s += "abc "[gen() % 4];
    entries.push_back(s);
  }
  entries.push_back("abc");
  DataSet d = OneField(entries);
  TokenizerConfig c = NoStopWords(FeatureMode::kNGram);
  FeatureLexicon lex = BuildLexicon(d, 0, c);
  for (const TokenizedEntry &e : TokenizeField(d, 0, lex, c)) {
    for (auto [j, count] : e.counts) {
      EXPECT_GE(j, 0);
      EXPECT_LT(size_t(j), lex.size());
      EXPECT_GE(count, 1);
    }
  }
}

}  // namespace
}  // namespace reclink
