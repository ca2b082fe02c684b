// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test binaries: repository paths, hand-built tree
// construction, exhaustive tree enumeration and instrumented classifiers.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gramdiff/derivation.hpp"
#include "gramdiff/oracle.hpp"

namespace testsupport {

inline std::string data_path(const std::string& rel) {
  return std::string(GRAMDIFF_SOURCE_DIR) + "/" + rel;
}

inline gramdiff::DerivationTree leaf(const std::string& text) {
  return gramdiff::DerivationTree{gramdiff::terminal(text), -1, {}};
}

inline gramdiff::DerivationTree node(
    const std::string& nt, int alt_index,
    std::vector<gramdiff::DerivationTree> children) {
  return gramdiff::DerivationTree{gramdiff::nonterminal(nt), alt_index,
                                  std::move(children)};
}

/// All derivation trees rooted at `nt` whose height is at most `budget`.
/// Memoized per (nt, budget); the caller must keep the memo alive.
using TreeMemo =
    std::map<std::pair<std::string, int>,
             std::vector<gramdiff::DerivationTree>>;

inline const std::vector<gramdiff::DerivationTree>& enumerate_trees(
    const gramdiff::Grammar& g, const std::string& nt, int budget,
    TreeMemo& memo) {
  auto key = std::make_pair(nt, budget);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  std::vector<gramdiff::DerivationTree> out;
  const gramdiff::Production& p = g.production(nt);
  for (std::size_t ai = 0; ai < p.alternatives.size(); ++ai) {
    const gramdiff::Alternative& alt = p.alternatives[ai];
    if (g.alt_min_height(alt) > budget) continue;
    // Cross product over the per-symbol choices.
    std::vector<std::vector<gramdiff::DerivationTree>> pools;
    for (const gramdiff::Symbol& s : alt) {
      if (s.kind == gramdiff::Symbol::kTerminal) {
        pools.push_back({leaf(s.text)});
      } else {
        pools.push_back(enumerate_trees(g, s.text, budget - 1, memo));
      }
    }
    std::vector<std::size_t> idx(pools.size(), 0);
    for (;;) {
      gramdiff::DerivationTree t = node(nt, static_cast<int>(ai), {});
      for (std::size_t i = 0; i < pools.size(); ++i)
        t.children.push_back(pools[i][idx[i]]);
      out.push_back(std::move(t));
      std::size_t i = pools.size();
      while (i > 0) {
        --i;
        if (++idx[i] < pools[i].size()) break;
        idx[i] = 0;
        if (i == 0) goto done;
      }
      if (pools.empty()) break;
    }
  done:;
  }
  return memo.emplace(key, std::move(out)).first->second;
}

/// Wraps another classifier and counts classify() calls.
class CountingClassifier : public gramdiff::Classifier {
 public:
  CountingClassifier(std::string id, gramdiff::ClassifierHandle inner)
      : id_(std::move(id)), inner_(std::move(inner)) {}

  gramdiff::LabelSet classify(const gramdiff::Sentence& s) const override {
    ++calls_;
    return inner_->classify(s);
  }
  std::string id() const override { return id_; }
  int calls() const { return calls_; }

 private:
  std::string id_;
  gramdiff::ClassifierHandle inner_;
  mutable int calls_ = 0;
};

/// Succeeds until it has seen `limit` distinct sentences, then throws
/// TransportError on every later new sentence.
class FailingClassifier : public gramdiff::Classifier {
 public:
  FailingClassifier(std::string id, int limit)
      : id_(std::move(id)), limit_(limit) {}

  gramdiff::LabelSet classify(const gramdiff::Sentence& s) const override {
    if (!seen_.count(s.text()) &&
        static_cast<int>(seen_.size()) >= limit_)
      throw gramdiff::TransportError("simulated outage");
    seen_.insert(s.text());
    return gramdiff::LabelSet{"OK"};
  }
  std::string id() const override { return id_; }

 private:
  std::string id_;
  int limit_;
  mutable std::set<std::string> seen_;
};

}  // namespace testsupport
