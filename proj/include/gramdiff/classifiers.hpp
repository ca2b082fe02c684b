// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Built-in desk-scale text classifiers: a multinomial naive Bayes model
// with Laplace smoothing and an averaged multiclass perceptron, plus
// error-driven retraining.

#pragma once

#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramdiff/oracle.hpp"
#include "gramdiff/rng.hpp"

namespace gramdiff {

/// Token counts of one sentence.
using Bow = std::map<std::string, int>;

inline Bow bow(const Sentence& s) {
  Bow counts;
  for (const std::string& t : s.tokens) ++counts[t];
  return counts;
}

struct LabeledSentence {
  Sentence sentence;
  std::string label;
};

using Corpus = std::vector<LabeledSentence>;

namespace detail {
/// Argmax over label scores with ties broken toward the lexicographically
/// first label; scores iterate in sorted label order.
inline std::string argmax_label(const std::map<std::string, double>& scores) {
  std::string best;
  double best_score = 0.0;
  bool first = true;
  for (const auto& [label, score] : scores) {
    if (first || score > best_score) {
      best = label;
      best_score = score;
      first = false;
    }
  }
  return best;
}
}  // namespace detail

/// Multinomial naive Bayes with Laplace smoothing.
///
/// Invariants: priors sum to 1 (±1e-9); per class the smoothed token
/// likelihoods sum to 1 over the vocabulary (±1e-6). Out-of-vocabulary
/// tokens contribute only the smoothing mass alpha / (T_c + alpha*|V|).
struct NaiveBayesModel {
  double alpha = 1.0;
  std::map<std::string, double> priors;
  std::map<std::string, std::map<std::string, double>> log_likelihood;
  std::map<std::string, double> log_oov;  // per class, for unseen tokens
  std::set<std::string> vocabulary;

  /// Singleton predicted label, ties toward the lexicographically first.
  LabelSet predict(const Sentence& s) const {
    Bow counts = bow(s);
    std::map<std::string, double> scores;
    for (const auto& [label, prior] : priors) {
      double score = std::log(prior);
      const auto& ll = log_likelihood.at(label);
      for (const auto& [token, count] : counts) {
        auto it = ll.find(token);
        score += count * (it != ll.end() ? it->second : log_oov.at(label));
      }
      scores[label] = score;
    }
    return LabelSet{detail::argmax_label(scores)};
  }
};

/// Pre: alpha > 0 and the corpus carries at least two distinct labels.
inline NaiveBayesModel train_nb(const Corpus& corpus, double alpha = 1.0) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  NaiveBayesModel m;
  m.alpha = alpha;

  std::map<std::string, int> docs_per_label;
  std::map<std::string, std::map<std::string, int>> token_counts;
  std::map<std::string, int> total_tokens;
  for (const LabeledSentence& ls : corpus) {
    ++docs_per_label[ls.label];
    for (const std::string& t : ls.sentence.tokens) {
      ++token_counts[ls.label][t];
      ++total_tokens[ls.label];
      m.vocabulary.insert(t);
    }
  }
  if (docs_per_label.size() < 2)
    throw std::invalid_argument(
        "training corpus must carry at least two distinct labels");

  const double n = static_cast<double>(corpus.size());
  const double v = static_cast<double>(m.vocabulary.size());
  for (const auto& [label, docs] : docs_per_label) {
    m.priors[label] = docs / n;
    const double denom = total_tokens[label] + alpha * v;
    auto& ll = m.log_likelihood[label];
    for (const std::string& token : m.vocabulary) {
      auto it = token_counts[label].find(token);
      int c = it == token_counts[label].end() ? 0 : it->second;
      ll[token] = std::log((c + alpha) / denom);
    }
    m.log_oov[label] = std::log(alpha / denom);
  }
  return m;
}

/// Averaged multiclass perceptron over bag-of-words features. Stands in for
/// a linear SGD text classifier: same hypothesis class (per-label linear
/// scores over token counts), different update rule.
struct PerceptronModel {
  int epochs = 0;
  std::map<std::string, std::map<std::string, double>> weights;
  std::map<std::string, double> bias;

  LabelSet predict(const Sentence& s) const {
    Bow counts = bow(s);
    std::map<std::string, double> scores;
    for (const auto& [label, w] : weights) {
      double score = bias.at(label);
      for (const auto& [token, count] : counts) {
        auto it = w.find(token);
        if (it != w.end()) score += count * it->second;
      }
      scores[label] = score;
    }
    return LabelSet{detail::argmax_label(scores)};
  }
};

/// Pre: epochs > 0 and the corpus carries at least two distinct labels.
/// Training visits the corpus in a seeded shuffled order each epoch and
/// averages the weight vector over all updates, so results are
/// deterministic in (corpus, epochs, seed).
inline PerceptronModel train_perceptron(const Corpus& corpus, int epochs,
                                        std::uint64_t seed) {
  if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
  std::set<std::string> labels;
  for (const LabeledSentence& ls : corpus) labels.insert(ls.label);
  if (labels.size() < 2)
    throw std::invalid_argument(
        "training corpus must carry at least two distinct labels");

  PerceptronModel m;
  m.epochs = epochs;
  std::map<std::string, std::map<std::string, double>> acc_w;
  std::map<std::string, double> acc_b;
  for (const std::string& l : labels) {
    m.weights[l];
    m.bias[l] = 0.0;
    acc_b[l] = 0.0;
  }

  std::vector<Bow> features;
  features.reserve(corpus.size());
  for (const LabeledSentence& ls : corpus) features.push_back(bow(ls.sentence));

  Rng rng = Rng::stream(seed, 0x9e7c);
  double updates_seen = 1.0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::vector<std::size_t> order = rng.permutation(corpus.size());
    for (std::size_t idx : order) {
      const Bow& x = features[idx];
      const std::string& gold = corpus[idx].label;

      std::map<std::string, double> scores;
      for (const auto& [label, w] : m.weights) {
        double score = m.bias[label];
        for (const auto& [token, count] : x) {
          auto it = w.find(token);
          if (it != w.end()) score += count * it->second;
        }
        scores[label] = score;
      }
      std::string pred = detail::argmax_label(scores);
      if (pred != gold) {
        for (const auto& [token, count] : x) {
          m.weights[gold][token] += count;
          m.weights[pred][token] -= count;
          acc_w[gold][token] += updates_seen * count;
          acc_w[pred][token] -= updates_seen * count;
        }
        m.bias[gold] += 1.0;
        m.bias[pred] -= 1.0;
        acc_b[gold] += updates_seen;
        acc_b[pred] -= updates_seen;
      }
      updates_seen += 1.0;
    }
  }

  // Averaging trick: w_avg = w - acc / t.
  for (auto& [label, w] : m.weights) {
    for (auto& [token, value] : w) value -= acc_w[label][token] / updates_seen;
    m.bias[label] -= acc_b[label] / updates_seen;
  }
  return m;
}

template <typename Model>
double accuracy(const Model& model, const Corpus& heldout) {
  if (heldout.empty()) throw std::invalid_argument("empty held-out corpus");
  std::size_t correct = 0;
  for (const LabeledSentence& ls : heldout) {
    if (model.predict(ls.sentence) == LabelSet{ls.label}) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(heldout.size());
}

/// Adapts a model to the Classifier interface.
template <typename Model>
class ModelClassifier : public Classifier {
 public:
  ModelClassifier(std::string id, Model model)
      : id_(std::move(id)), model_(std::move(model)) {}
  LabelSet classify(const Sentence& s) const override {
    return model_.predict(s);
  }
  std::string id() const override { return id_; }
  const Model& model() const { return model_; }

 private:
  std::string id_;
  Model model_;
};

using NaiveBayesClassifier = ModelClassifier<NaiveBayesModel>;
using PerceptronClassifier = ModelClassifier<PerceptronModel>;

namespace detail {
/// Labels each error sentence through the oracle and samples
/// floor(fraction * |base|) of them uniformly without replacement. When the
/// request exceeds the available errors all of them are used and a warning
/// is emitted.
inline Corpus augment_with_errors(const Corpus& base,
                                  const std::vector<Sentence>& errors,
                                  const ClassifierHandle& oracle,
                                  double fraction, std::uint64_t sample_seed,
                                  bool* used_all_errors) {
  if (fraction < 0.0) throw std::invalid_argument("fraction must be >= 0");
  std::size_t want =
      static_cast<std::size_t>(fraction * static_cast<double>(base.size()));
  if (used_all_errors) *used_all_errors = false;
  if (want > errors.size()) {
    std::cerr << "warning: requested " << want
              << " error inputs but only " << errors.size()
              << " are available; using all of them\n";
    want = errors.size();
    if (used_all_errors) *used_all_errors = true;
  }

  Corpus augmented = base;
  Rng rng = Rng::stream(sample_seed, 0x5a3f);
  std::vector<std::size_t> order = rng.permutation(errors.size());
  for (std::size_t k = 0; k < want; ++k) {
    const Sentence& s = errors[order[k]];
    LabelSet verdict = oracle->classify(s);
    if (verdict.empty())
      throw std::invalid_argument("oracle returned no label for: " + s.text());
    augmented.push_back(LabeledSentence{s, *verdict.items().begin()});
  }
  return augmented;
}
}  // namespace detail

/// Retrains the model family on base plus an oracle-labeled sample of the
/// error sentences. fraction 0 degenerates to training on base alone, so a
/// matching train_seed reproduces the original model exactly.
inline NaiveBayesModel retrain_with_errors(
    const NaiveBayesModel& model, const Corpus& base,
    const std::vector<Sentence>& errors, const ClassifierHandle& oracle,
    double fraction, std::uint64_t sample_seed,
    bool* used_all_errors = nullptr) {
  return train_nb(detail::augment_with_errors(base, errors, oracle, fraction,
                                              sample_seed, used_all_errors),
                  model.alpha);
}

inline PerceptronModel retrain_with_errors(
    const PerceptronModel& model, const Corpus& base,
    const std::vector<Sentence>& errors, const ClassifierHandle& oracle,
    double fraction, std::uint64_t sample_seed, std::uint64_t train_seed,
    bool* used_all_errors = nullptr) {
  return train_perceptron(
      detail::augment_with_errors(base, errors, oracle, fraction, sample_seed,
                                  used_all_errors),
      model.epochs, train_seed);
}

}  // namespace gramdiff
