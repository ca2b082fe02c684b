// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Differential test oracle: label sets, Jaccard similarity, the erroneous
// predicate, the classifier interface and per-campaign query memoization.

#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "gramdiff/derivation.hpp"

namespace gramdiff {

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

/// Unordered set of labels. Labels are trimmed of surrounding whitespace on
/// insertion and compared case-sensitively.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<std::string> labels) {
    for (const std::string& l : labels) insert(l);
  }

  void insert(const std::string& label) { items_.insert(detail::trim(label)); }
  bool contains(const std::string& label) const {
    return items_.count(detail::trim(label)) > 0;
  }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::set<std::string>& items() const { return items_; }

  bool operator==(const LabelSet&) const = default;

 private:
  std::set<std::string> items_;
};

/// Jaccard index |a∩b| / |a∪b|; two empty sets are fully similar (1).
inline double jaccard(const LabelSet& a, const LabelSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const std::string& l : a.items()) inter += b.items().count(l);
  std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Differential verdict: the input is erroneous iff the two outputs'
/// Jaccard index falls strictly below the threshold j.
inline bool evaluate(const LabelSet& a, const LabelSet& b, double j) {
  return jaccard(a, b) < j;
}

/// Numeric sentiment as returned by scoring backends.
/// Pre: -1 < score < 1 and magnitude >= 0.
struct ScoredOutput {
  double score = 0.0;
  double magnitude = 0.0;
};

/// Buckets a score into a single sentiment label:
/// score <= -0.25 NEGATIVE, score >= 0.25 POSITIVE, NEUTRAL in between.
inline LabelSet bucket_sentiment(const ScoredOutput& out) {
  if (out.score <= -0.25) return LabelSet{"NEGATIVE"};
  if (out.score >= 0.25) return LabelSet{"POSITIVE"};
  return LabelSet{"NEUTRAL"};
}

/// Base for classifier failures that abort a running campaign.
class ClassifierError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Transport-level failure (connect, timeout, HTTP status) that persisted
/// through the retry budget.
class TransportError : public ClassifierError {
  using ClassifierError::ClassifierError;
};

/// Syntactically or semantically invalid classifier response; carries the
/// raw payload for diagnosis.
class MalformedResponseError : public ClassifierError {
 public:
  MalformedResponseError(const std::string& what, std::string payload)
      : ClassifierError(what + "; payload: " + payload),
        payload_(std::move(payload)) {}
  const std::string& payload() const { return payload_; }

 private:
  std::string payload_;
};

/// A text classifier. Implementations must be deterministic per input and
/// safe to call from several campaigns concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual LabelSet classify(const Sentence& s) const = 0;
  virtual std::string id() const = 0;
};

using ClassifierHandle = std::shared_ptr<const Classifier>;

inline LabelSet query(const ClassifierHandle& h, const Sentence& s) {
  return h->classify(s);
}

/// Always returns the same label set; useful as a degenerate oracle half.
class FixedLabelClassifier : public Classifier {
 public:
  FixedLabelClassifier(std::string id, LabelSet labels)
      : id_(std::move(id)), labels_(std::move(labels)) {}
  LabelSet classify(const Sentence&) const override { return labels_; }
  std::string id() const override { return id_; }

 private:
  std::string id_;
  LabelSet labels_;
};

/// Returns hit labels when any token equals the keyword, miss labels
/// otherwise. Paired with a fixed classifier this makes an oracle whose
/// errors are exactly the keyword-bearing sentences.
class KeywordClassifier : public Classifier {
 public:
  KeywordClassifier(std::string id, std::string keyword, LabelSet hit,
                    LabelSet miss)
      : id_(std::move(id)),
        keyword_(std::move(keyword)),
        hit_(std::move(hit)),
        miss_(std::move(miss)) {}
  LabelSet classify(const Sentence& s) const override {
    for (const std::string& t : s.tokens) {
      if (t == keyword_) return hit_;
    }
    return miss_;
  }
  std::string id() const override { return id_; }

 private:
  std::string id_;
  std::string keyword_;
  LabelSet hit_;
  LabelSet miss_;
};

/// Labels a sentence with its distinct tokens.
class TokenSetClassifier : public Classifier {
 public:
  explicit TokenSetClassifier(std::string id) : id_(std::move(id)) {}
  LabelSet classify(const Sentence& s) const override {
    LabelSet out;
    for (const std::string& t : s.tokens) out.insert(t);
    return out;
  }
  std::string id() const override { return id_; }

 private:
  std::string id_;
};

/// Token-set labels with a synonym substitution applied; when the sentence
/// contains the divergence token every label is prefixed so the output
/// shares nothing with a plain token-set classifier. Against
/// TokenSetClassifier this yields graded Jaccard values with a zero floor.
class SynonymTokenClassifier : public Classifier {
 public:
  SynonymTokenClassifier(std::string id,
                         std::map<std::string, std::string> synonyms,
                         std::string divergence_token)
      : id_(std::move(id)),
        synonyms_(std::move(synonyms)),
        divergence_token_(std::move(divergence_token)) {}

  LabelSet classify(const Sentence& s) const override {
    bool diverge = false;
    if (!divergence_token_.empty()) {
      for (const std::string& t : s.tokens) {
        if (t == divergence_token_) {
          diverge = true;
          break;
        }
      }
    }
    LabelSet out;
    for (const std::string& t : s.tokens) {
      auto it = synonyms_.find(t);
      const std::string& mapped = it == synonyms_.end() ? t : it->second;
      out.insert(diverge ? "~" + mapped : mapped);
    }
    return out;
  }
  std::string id() const override { return id_; }

 private:
  std::string id_;
  std::map<std::string, std::string> synonyms_;
  std::string divergence_token_;
};

/// Memoizes the classifier pair for one campaign, keyed by classifier id
/// and exact sentence text, so repeated evaluations of the current input
/// and remote re-queries are free.
class QueryCache {
 public:
  QueryCache(ClassifierHandle f1, ClassifierHandle f2)
      : f1_(std::move(f1)), f2_(std::move(f2)) {
    if (!f1_ || !f2_) throw std::invalid_argument("null classifier handle");
    if (f1_->id() == f2_->id())
      throw std::invalid_argument(
          "differential pair needs distinct classifier ids, got " + f1_->id());
  }

  struct Outcome {
    LabelSet first;
    LabelSet second;
    double jaccard_value;
    bool erroneous;
  };

  /// Classifies through both halves of the pair (memoized) and applies the
  /// erroneous predicate at threshold j.
  Outcome evaluate_pair(const Sentence& s, double j) {
    const std::string key = s.text();
    ++lookups_;
    Outcome out;
    out.first = cached(f1_, key, s);
    out.second = cached(f2_, key, s);
    out.jaccard_value = jaccard(out.first, out.second);
    out.erroneous = out.jaccard_value < j;
    return out;
  }

  std::size_t lookups() const { return lookups_; }
  std::size_t misses() const { return misses_; }

 private:
  const LabelSet& cached(const ClassifierHandle& h, const std::string& key,
                         const Sentence& s) {
    auto& per_classifier = memo_[h->id()];
    auto it = per_classifier.find(key);
    if (it == per_classifier.end()) {
      ++misses_;
      it = per_classifier.emplace(key, h->classify(s)).first;
    }
    return it->second;
  }

  ClassifierHandle f1_;
  ClassifierHandle f2_;
  std::map<std::string, std::map<std::string, LabelSet>> memo_;
  std::size_t lookups_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace gramdiff
