// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "gramdiff/classifiers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace gramdiff {
namespace {

Corpus tiny_corpus() {
  return Corpus{{sentence_from_text("a a"), "X"},
                {sentence_from_text("b b"), "Y"}};
}

TEST(Bow, CountsTokens) {
  Bow b = bow(sentence_from_text("a b a c a"));
  EXPECT_EQ(b, (Bow{{"a", 3}, {"b", 1}, {"c", 1}}));
}

TEST(NaiveBayes, HandComputedTwoClassModel) {
  NaiveBayesModel m = train_nb(tiny_corpus(), 1.0);
  ASSERT_EQ(m.vocabulary.size(), 2u);
  EXPECT_DOUBLE_EQ(m.priors.at("X"), 0.5);
  EXPECT_DOUBLE_EQ(m.priors.at("Y"), 0.5);
  // P(a|X) = (2+1)/(2+2) = 0.75; P(a|Y) = (0+1)/(2+2) = 0.25.
  EXPECT_NEAR(std::exp(m.log_likelihood.at("X").at("a")), 0.75, 1e-12);
  EXPECT_NEAR(std::exp(m.log_likelihood.at("Y").at("a")), 0.25, 1e-12);
  EXPECT_NEAR(std::exp(m.log_oov.at("X")), 0.25, 1e-12);

  EXPECT_EQ(m.predict(sentence_from_text("a")), LabelSet{"X"});
  EXPECT_EQ(m.predict(sentence_from_text("b")), LabelSet{"Y"});
  EXPECT_EQ(m.predict(sentence_from_text("a a b")), LabelSet{"X"});
  // Out-of-vocabulary only: posteriors tie, lexicographically first wins.
  EXPECT_EQ(m.predict(sentence_from_text("z")), LabelSet{"X"});
}

TEST(NaiveBayes, ProbabilityAxioms) {
  Corpus corpus;
  const char* texts[] = {"u v",  "v w u", "w w", "u u u",
                         "v",    "w u v", "u w", "v v w"};
  for (int i = 0; i < 8; ++i)
    corpus.push_back(
        {sentence_from_text(texts[i]), i % 2 ? "EVEN" : "ODD"});
  NaiveBayesModel m = train_nb(corpus, 0.7);

  double prior_sum = 0.0;
  for (const auto& [label, p] : m.priors) prior_sum += p;
  EXPECT_NEAR(prior_sum, 1.0, 1e-9);

  for (const auto& [label, ll] : m.log_likelihood) {
    double sum = 0.0;
    for (const auto& [token, lp] : ll) sum += std::exp(lp);
    EXPECT_NEAR(sum, 1.0, 1e-6) << label;
    EXPECT_GT(std::exp(m.log_oov.at(label)), 0.0);
  }
}

// Independent probability computation in plain product space (no logs):
// brute posterior over the full 27-sentence product language.
TEST(NaiveBayes, AgreesWithBruteForcePosterior) {
  Corpus corpus{
      {sentence_from_text("u u v"), "A"}, {sentence_from_text("v w w"), "B"},
      {sentence_from_text("w u w"), "C"}, {sentence_from_text("u v u"), "A"},
      {sentence_from_text("w w v"), "B"}, {sentence_from_text("u w u"), "C"},
  };
  const double alpha = 1.0;
  NaiveBayesModel m = train_nb(corpus, alpha);

  // Per-class token counts, recomputed independently.
  std::map<std::string, std::map<std::string, int>> counts;
  std::map<std::string, int> totals, docs;
  for (const auto& ex : corpus) {
    for (const std::string& t : ex.sentence.tokens) {
      ++counts[ex.label][t];
      ++totals[ex.label];
    }
    ++docs[ex.label];
  }
  const std::vector<std::string> vocab{"u", "v", "w"};

  const char* toks[] = {"u", "v", "w"};
  for (const char* t1 : toks) {
    for (const char* t2 : toks) {
      for (const char* t3 : toks) {
        Sentence s = sentence_from_text(std::string(t1) + " " + t2 + " " +
                                        t3);
        std::string best;
        long double best_score = -1.0L;
        for (const auto& [label, n_docs] : docs) {
          long double score =
              static_cast<long double>(n_docs) / corpus.size();
          for (const std::string& tok : s.tokens) {
            score *= (counts[label][tok] + alpha) /
                     (totals[label] + alpha * vocab.size());
          }
          if (score > best_score) {
            best_score = score;
            best = label;
          }
        }
        EXPECT_EQ(m.predict(s), LabelSet{best}) << s.text();
      }
    }
  }
}

TEST(NaiveBayes, TieBreaksLexicographically) {
  Corpus corpus{{sentence_from_text("t"), "B"},
                {sentence_from_text("t"), "A"}};
  NaiveBayesModel m = train_nb(corpus, 1.0);
  EXPECT_EQ(m.predict(sentence_from_text("t")), LabelSet{"A"});
}

TEST(NaiveBayes, ValidatesInputs) {
  EXPECT_THROW(train_nb(tiny_corpus(), 0.0), std::invalid_argument);
  EXPECT_THROW(train_nb(tiny_corpus(), -1.0), std::invalid_argument);
  Corpus one_label{{sentence_from_text("a"), "X"}};
  EXPECT_THROW(train_nb(one_label, 1.0), std::invalid_argument);
  EXPECT_THROW(train_nb(Corpus{}, 1.0), std::invalid_argument);
}

// Disjoint class vocabularies with a shared per-class keyword: tokens the
// two classes share would let weight averaging leave one training example
// with a slightly negative margin, and tokens unique to a single example of
// the lexicographically first label never trigger a mistake update at all.
Corpus separable_corpus() {
  Corpus c;
  const char* red[] = {"rosso crimson coat", "rosso ruby ring",
                       "rosso scarlet sky",  "rosso red door",
                       "rosso cherry lips",  "rosso brick wall"};
  const char* blue[] = {"blau azure sea",    "blau navy boat",
                        "blau cobalt wave",  "blau blue gate",
                        "blau sapphire bay", "blau indigo night"};
  for (const char* t : red) c.push_back({sentence_from_text(t), "RED"});
  for (const char* t : blue) c.push_back({sentence_from_text(t), "BLUE"});
  return c;
}

TEST(Perceptron, LearnsSeparableDataDeterministically) {
  Corpus c = separable_corpus();
  PerceptronModel m = train_perceptron(c, 10, 42);
  EXPECT_DOUBLE_EQ(accuracy(m, c), 1.0);

  PerceptronModel again = train_perceptron(c, 10, 42);
  EXPECT_EQ(m.weights, again.weights);
  EXPECT_EQ(m.bias, again.bias);

  // The class keywords carry decisive weight even next to unseen tokens.
  EXPECT_EQ(m.predict(sentence_from_text("rosso zzz")), LabelSet{"RED"});
  EXPECT_EQ(m.predict(sentence_from_text("blau zzz")), LabelSet{"BLUE"});
}

TEST(Perceptron, ZeroModelTiesBreakLexicographically) {
  PerceptronModel m;
  m.weights["B"] = {};
  m.weights["A"] = {};
  m.bias["B"] = 0.0;
  m.bias["A"] = 0.0;
  EXPECT_EQ(m.predict(sentence_from_text("anything")), LabelSet{"A"});
}

TEST(Perceptron, ValidatesInputs) {
  EXPECT_THROW(train_perceptron(Corpus{}, 5, 1), std::invalid_argument);
  EXPECT_THROW(train_perceptron(tiny_corpus(), 0, 1), std::invalid_argument);
}

TEST(Accuracy, FractionCorrect) {
  NaiveBayesModel m = train_nb(tiny_corpus(), 1.0);
  Corpus heldout{{sentence_from_text("a"), "X"},
                 {sentence_from_text("b"), "X"},
                 {sentence_from_text("a a"), "X"},
                 {sentence_from_text("b"), "Y"}};
  EXPECT_DOUBLE_EQ(accuracy(m, heldout), 0.75);
  EXPECT_THROW(accuracy(m, Corpus{}), std::invalid_argument);
}

TEST(ModelClassifier, WrapsModels) {
  NaiveBayesClassifier c("nb", train_nb(tiny_corpus(), 1.0));
  EXPECT_EQ(c.id(), "nb");
  EXPECT_EQ(c.classify(sentence_from_text("a")), LabelSet{"X"});
  EXPECT_DOUBLE_EQ(c.model().priors.at("X"), 0.5);
}

TEST(Augment, FractionOfBaseCorpusSize) {
  Corpus base = separable_corpus();  // 12 examples
  std::vector<Sentence> errors;
  for (int i = 0; i < 8; ++i)
    errors.push_back(sentence_from_text("err" + std::to_string(i)));
  auto oracle = std::make_shared<FixedLabelClassifier>(
      "o", LabelSet{"RED"});

  bool used_all = true;
  Corpus augmented = detail::augment_with_errors(base, errors, oracle, 0.25,
                                                 9, &used_all);
  // floor(0.25 * 12) = 3 sampled errors appended after the base corpus.
  ASSERT_EQ(augmented.size(), 15u);
  EXPECT_FALSE(used_all);
  for (std::size_t i = 12; i < 15; ++i) {
    EXPECT_EQ(augmented[i].label, "RED");
    bool from_pool = false;
    for (const Sentence& e : errors)
      if (e == augmented[i].sentence) from_pool = true;
    EXPECT_TRUE(from_pool);
  }
  // Distinct sample (permutation prefix, no repeats).
  EXPECT_NE(augmented[12].sentence, augmented[13].sentence);
  EXPECT_NE(augmented[13].sentence, augmented[14].sentence);

  // Same sample seed, same subset; different seed may differ.
  Corpus again = detail::augment_with_errors(base, errors, oracle, 0.25, 9,
                                             nullptr);
  for (std::size_t i = 12; i < 15; ++i)
    EXPECT_EQ(again[i].sentence, augmented[i].sentence);
}

TEST(Augment, OversizedRequestUsesAllErrors) {
  Corpus base = separable_corpus();
  std::vector<Sentence> errors{sentence_from_text("only one")};
  auto oracle = std::make_shared<FixedLabelClassifier>("o",
                                                       LabelSet{"BLUE"});
  bool used_all = false;
  // floor(0.5 * 12) = 6 wanted, 1 available.
  Corpus augmented = detail::augment_with_errors(base, errors, oracle, 0.5,
                                                 3, &used_all);
  EXPECT_TRUE(used_all);
  ASSERT_EQ(augmented.size(), 13u);
  EXPECT_EQ(augmented.back().sentence.text(), "only one");
}

TEST(Augment, FractionZeroAddsNothing) {
  Corpus base = separable_corpus();
  std::vector<Sentence> errors{sentence_from_text("e")};
  auto oracle = std::make_shared<FixedLabelClassifier>("o", LabelSet{"X"});
  EXPECT_EQ(
      detail::augment_with_errors(base, errors, oracle, 0.0, 1, nullptr)
          .size(),
      base.size());
}

TEST(Augment, OracleLabelIsFirstSortedItem) {
  Corpus base = separable_corpus();
  std::vector<Sentence> errors{sentence_from_text("multi")};
  auto oracle = std::make_shared<FixedLabelClassifier>(
      "o", LabelSet{"ZEBRA", "APPLE"});
  Corpus augmented =
      detail::augment_with_errors(base, errors, oracle, 0.5, 1, nullptr);
  EXPECT_EQ(augmented.back().label, "APPLE");
}

TEST(Retrain, FractionZeroReproducesBaseModel) {
  Corpus base = separable_corpus();
  PerceptronModel base_model = train_perceptron(base, 10, 7);
  std::vector<Sentence> errors{sentence_from_text("x y z")};
  auto oracle = std::make_shared<FixedLabelClassifier>("o",
                                                       LabelSet{"RED"});
  PerceptronModel re = retrain_with_errors(base_model, base, errors, oracle,
                                           0.0, 11, 7);
  EXPECT_EQ(re.weights, base_model.weights);
  EXPECT_EQ(re.bias, base_model.bias);
}

TEST(Retrain, MatchesTrainingOnAugmentedCorpus) {
  Corpus base = separable_corpus();
  std::vector<Sentence> errors{sentence_from_text("teal lake"),
                               sentence_from_text("maroon rust")};
  auto oracle = std::make_shared<FixedLabelClassifier>("o",
                                                       LabelSet{"BLUE"});

  NaiveBayesModel nb = train_nb(base, 1.0);
  NaiveBayesModel nb_re =
      retrain_with_errors(nb, base, errors, oracle, 1.0, 5, nullptr);
  Corpus augmented =
      detail::augment_with_errors(base, errors, oracle, 1.0, 5, nullptr);
  NaiveBayesModel nb_direct = train_nb(augmented, nb.alpha);
  EXPECT_EQ(nb_re.priors, nb_direct.priors);
  EXPECT_EQ(nb_re.log_likelihood, nb_direct.log_likelihood);

  PerceptronModel pm = train_perceptron(base, 10, 7);
  PerceptronModel pm_re =
      retrain_with_errors(pm, base, errors, oracle, 1.0, 5, 7);
  PerceptronModel pm_direct = train_perceptron(augmented, pm.epochs, 7);
  EXPECT_EQ(pm_re.weights, pm_direct.weights);
  EXPECT_EQ(pm_re.bias, pm_direct.bias);
}

}  // namespace
}  // namespace gramdiff
