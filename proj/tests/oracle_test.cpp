// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "gramdiff/oracle.hpp"

#include <gtest/gtest.h>

#include <memory>

#include "test_support.hpp"

namespace gramdiff {
namespace {

TEST(LabelSet, TrimsAndDeduplicates) {
  LabelSet s;
  s.insert("  POSITIVE ");
  s.insert("POSITIVE");
  s.insert("\tjoy\t");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains("POSITIVE"));
  EXPECT_TRUE(s.contains("joy"));
  EXPECT_TRUE(s.contains(" POSITIVE "));  // lookups canonicalize too
}

TEST(LabelSet, CaseSensitive) {
  LabelSet s{"a", "A"};
  EXPECT_EQ(s.size(), 2u);
}

TEST(Jaccard, HandComputedValues) {
  EXPECT_DOUBLE_EQ(jaccard(LabelSet{"x", "y"}, LabelSet{"y", "z"}),
                   1.0 / 3.0);
  EXPECT_DOUBLE_EQ(jaccard(LabelSet{}, LabelSet{}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(LabelSet{"a"}, LabelSet{"b"}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard(LabelSet{"a", "b"}, LabelSet{"a", "b"}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(LabelSet{"a"}, LabelSet{}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard(LabelSet{"a", "b", "c"}, LabelSet{"a"}),
                   1.0 / 3.0);
}

TEST(Jaccard, ErroneousIsStrictlyBelowThreshold) {
  LabelSet a{"x", "y"}, b{"y", "z"};
  EXPECT_FALSE(evaluate(a, b, 1.0 / 3.0));  // equal is not below
  EXPECT_TRUE(evaluate(a, b, 0.34));
  EXPECT_FALSE(evaluate(a, a, 1.0));
  EXPECT_TRUE(evaluate(LabelSet{"a"}, LabelSet{"b"}, 0.0001));
  EXPECT_FALSE(evaluate(LabelSet{"a"}, LabelSet{"b"}, 0.0));  // JI==0==J
}

TEST(Buckets, SentimentBoundaries) {
  auto bucket = [](double score) {
    return bucket_sentiment(ScoredOutput{score, 1.0});
  };
  EXPECT_EQ(bucket(-1.0 + 1e-9), LabelSet{"NEGATIVE"});
  EXPECT_EQ(bucket(-0.25), LabelSet{"NEGATIVE"});
  EXPECT_EQ(bucket(-0.2499), LabelSet{"NEUTRAL"});
  EXPECT_EQ(bucket(0.0), LabelSet{"NEUTRAL"});
  EXPECT_EQ(bucket(0.2499), LabelSet{"NEUTRAL"});
  EXPECT_EQ(bucket(0.25), LabelSet{"POSITIVE"});
  EXPECT_EQ(bucket(1.0 - 1e-9), LabelSet{"POSITIVE"});
}

TEST(Classifiers, FixedAndKeyword) {
  FixedLabelClassifier fixed("f", LabelSet{"OK"});
  EXPECT_EQ(fixed.classify(sentence_from_text("anything at all")),
            LabelSet{"OK"});
  EXPECT_EQ(fixed.id(), "f");

  KeywordClassifier kw("k", "shot", LabelSet{"ERR"}, LabelSet{"OK"});
  EXPECT_EQ(kw.classify(sentence_from_text("John shot Mary")),
            LabelSet{"ERR"});
  EXPECT_EQ(kw.classify(sentence_from_text("John saw Mary")),
            LabelSet{"OK"});
  EXPECT_EQ(kw.classify(sentence_from_text("John shotgun Mary")),
            LabelSet{"OK"});  // whole-token match only
}

TEST(Classifiers, TokenSetAndSynonyms) {
  TokenSetClassifier plain("p");
  SynonymTokenClassifier syn("s", {{"dog", "canine"}, {"cat", "feline"}},
                             "shot");

  Sentence calm = sentence_from_text("the dog saw Mary");
  EXPECT_EQ(plain.classify(calm), (LabelSet{"the", "dog", "saw", "Mary"}));
  EXPECT_EQ(syn.classify(calm), (LabelSet{"the", "canine", "saw", "Mary"}));
  EXPECT_DOUBLE_EQ(jaccard(plain.classify(calm), syn.classify(calm)),
                   3.0 / 5.0);

  Sentence diverged = sentence_from_text("the dog shot Mary");
  EXPECT_EQ(syn.classify(diverged),
            (LabelSet{"~the", "~canine", "~shot", "~Mary"}));
  EXPECT_DOUBLE_EQ(jaccard(plain.classify(diverged), syn.classify(diverged)),
                   0.0);

  Sentence clean = sentence_from_text("John saw Mary");
  EXPECT_DOUBLE_EQ(jaccard(plain.classify(clean), syn.classify(clean)), 1.0);
}

TEST(Errors, MalformedResponseCarriesPayload) {
  MalformedResponseError e("missing labels", "{\"oops\":1}");
  EXPECT_EQ(e.payload(), "{\"oops\":1}");
  EXPECT_NE(std::string(e.what()).find("missing labels"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("{\"oops\":1}"), std::string::npos);
}

TEST(Errors, HierarchyIsCatchable) {
  try {
    throw TransportError("boom");
  } catch (const ClassifierError& e) {
    EXPECT_STREQ(e.what(), "boom");
  }
  try {
    throw MalformedResponseError("bad", "{}");
  } catch (const ClassifierError&) {
    SUCCEED();
  }
}

TEST(QueryCache, MemoizesPerClassifierAndSentence) {
  auto inner1 = std::make_shared<FixedLabelClassifier>("a", LabelSet{"X"});
  auto inner2 = std::make_shared<FixedLabelClassifier>("b", LabelSet{"Y"});
  auto c1 = std::make_shared<testsupport::CountingClassifier>("c1", inner1);
  auto c2 = std::make_shared<testsupport::CountingClassifier>("c2", inner2);
  QueryCache cache(c1, c2);

  Sentence s1 = sentence_from_text("one two");
  Sentence s2 = sentence_from_text("three");
  auto o1 = cache.evaluate_pair(s1, 0.5);
  EXPECT_EQ(o1.first, LabelSet{"X"});
  EXPECT_EQ(o1.second, LabelSet{"Y"});
  EXPECT_DOUBLE_EQ(o1.jaccard_value, 0.0);
  EXPECT_TRUE(o1.erroneous);

  cache.evaluate_pair(s1, 0.5);
  cache.evaluate_pair(s1, 0.5);
  EXPECT_EQ(c1->calls(), 1);
  EXPECT_EQ(c2->calls(), 1);

  cache.evaluate_pair(s2, 0.5);
  EXPECT_EQ(c1->calls(), 2);
  EXPECT_EQ(c2->calls(), 2);
  EXPECT_EQ(cache.lookups(), 4u);  // one per evaluate_pair call
  EXPECT_EQ(cache.misses(), 4u);   // one per classifier half per new sentence
}

TEST(QueryCache, ThresholdAppliedPerCall) {
  auto c1 = std::make_shared<TokenSetClassifier>("p");
  auto c2 = std::make_shared<SynonymTokenClassifier>(
      "s", std::map<std::string, std::string>{{"dog", "canine"}}, "");
  QueryCache cache(c1, c2);
  Sentence s = sentence_from_text("the dog saw Mary");  // JI = 3/5
  EXPECT_FALSE(cache.evaluate_pair(s, 0.6).erroneous);
  EXPECT_TRUE(cache.evaluate_pair(s, 0.61).erroneous);
}

TEST(QueryCache, RejectsBadPairs) {
  auto a = std::make_shared<FixedLabelClassifier>("same", LabelSet{"X"});
  auto b = std::make_shared<FixedLabelClassifier>("same", LabelSet{"Y"});
  EXPECT_THROW(QueryCache(a, b), std::invalid_argument);
  EXPECT_THROW(QueryCache(nullptr, a), std::invalid_argument);
  EXPECT_THROW(QueryCache(a, nullptr), std::invalid_argument);
}

TEST(QueryCache, QueryHelperForwards) {
  ClassifierHandle h = std::make_shared<FixedLabelClassifier>(
      "h", LabelSet{"L"});
  EXPECT_EQ(query(h, sentence_from_text("x")), LabelSet{"L"});
}

}  // namespace
}  // namespace gramdiff
