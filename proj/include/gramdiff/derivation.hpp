// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Derivation trees: random generation, yields, one-leaf similarity and
// shape-preserving perturbation.

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramdiff/grammar.hpp"
#include "gramdiff/rng.hpp"

namespace gramdiff {

/// Node of a derivation tree. Terminal nodes are leaves; nonterminal nodes
/// carry the index of the chosen alternative and one child per symbol of it.
struct DerivationTree {
  Symbol symbol;
  int alt_index = -1;  // -1 for terminal leaves
  std::vector<DerivationTree> children;

  bool operator==(const DerivationTree&) const = default;
};

/// Whitespace-free tokens; text() round-trips through a whitespace split.
struct Sentence {
  std::vector<std::string> tokens;

  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    return out;
  }

  bool operator==(const Sentence&) const = default;
};

inline Sentence sentence_from_text(const std::string& text) {
  Sentence s;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t begin = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > begin) s.tokens.push_back(text.substr(begin, i - begin));
  }
  return s;
}

namespace detail {
inline void collect_yield(const DerivationTree& t, Sentence& out) {
  if (t.symbol.kind == Symbol::kTerminal) {
    out.tokens.push_back(t.symbol.text);
    return;
  }
  for (const DerivationTree& c : t.children) collect_yield(c, out);
}
}  // namespace detail

/// In-order terminal leaves. Well-formed trees yield at least one token.
inline Sentence yield_sentence(const DerivationTree& t) {
  Sentence s;
  detail::collect_yield(t, s);
  return s;
}

/// True iff t is a valid derivation over g: every nonterminal node expands
/// exactly the symbols of one of its production's alternatives. When
/// require_start is set the root must be g's start symbol.
inline bool well_formed(const Grammar& g, const DerivationTree& t,
                        bool require_start = false) {
  if (t.symbol.kind == Symbol::kTerminal) return t.children.empty();
  if (require_start && t.symbol.text != g.start()) return false;
  if (!g.defines(t.symbol.text)) return false;
  const Production& p = g.production(t.symbol.text);
  if (t.alt_index < 0 ||
      t.alt_index >= static_cast<int>(p.alternatives.size()))
    return false;
  const Alternative& alt = p.alternatives[t.alt_index];
  if (t.children.size() != alt.size()) return false;
  for (std::size_t i = 0; i < alt.size(); ++i) {
    if (t.children[i].symbol != alt[i]) return false;
    if (!well_formed(g, t.children[i])) return false;
  }
  return true;
}

inline int height(const DerivationTree& t) {
  int h = 0;
  for (const DerivationTree& c : t.children) h = std::max(h, height(c) + 1);
  return h;
}

/// Raised when no alternative of the symbol under expansion fits the
/// remaining depth budget; possible only for budgets below the grammar's
/// own minimum derivation height.
class DepthError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline DerivationTree generate_node(const Grammar& g, const std::string& name,
                                    int budget, Rng& rng) {
  const Production& p = g.production(name);
  // Alternatives are chosen uniformly among those completable within the
  // remaining budget; an alternative never becomes a dead end mid-recursion.
  std::vector<int> eligible;
  for (std::size_t i = 0; i < p.alternatives.size(); ++i) {
    if (g.alt_min_height(p.alternatives[i]) <= budget)
      eligible.push_back(static_cast<int>(i));
  }
  if (eligible.empty())
    throw DepthError("depth budget " + std::to_string(budget) +
                     " cannot complete nonterminal " + name);
  int choice = eligible[rng.index(eligible.size())];

  DerivationTree node;
  node.symbol = nonterminal(name);
  node.alt_index = choice;
  for (const Symbol& s : p.alternatives[choice]) {
    if (s.kind == Symbol::kTerminal) {
      node.children.push_back(DerivationTree{s, -1, {}});
    } else {
      node.children.push_back(generate_node(g, s.text, budget - 1, rng));
    }
  }
  return node;
}
}  // namespace detail

/// Random derivation from the start symbol; height(result) <= max_depth.
inline DerivationTree generate(const Grammar& g, Rng& rng, int max_depth = 16) {
  return detail::generate_node(g, g.start(), max_depth, rng);
}

namespace detail {
inline bool count_leaf_diffs(const DerivationTree& a, const DerivationTree& b,
                             int& diffs) {
  if (a.symbol.kind != b.symbol.kind) return false;
  if (a.symbol.kind == Symbol::kTerminal) {
    if (a.symbol.text != b.symbol.text && ++diffs > 1) return false;
    return true;
  }
  if (a.symbol.text != b.symbol.text ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!count_leaf_diffs(a.children[i], b.children[i], diffs)) return false;
  }
  return true;
}
}  // namespace detail

/// True iff the trees are identical except for the terminal text of exactly
/// one leaf. Identical trees are not similar.
inline bool similar(const DerivationTree& a, const DerivationTree& b) {
  int diffs = 0;
  return detail::count_leaf_diffs(a, b, diffs) && diffs == 1;
}

enum class PerturbMode {
  kRetry,   // keep trying unexamined leaves until one can be replaced
  kStrict,  // give up if the first randomly chosen leaf cannot be replaced
};

namespace detail {

struct LeafSite {
  DerivationTree* parent;  // node whose chosen alternative is the single leaf
  std::string token;
};

// Collects leaves eligible for replacement: the parent's chosen alternative
// must be exactly that one terminal, otherwise swapping it would change the
// tree's shape. Slots for other leaves stay null so leaf choice is uniform
// over all leaves.
inline void collect_leaf_sites(DerivationTree& t,
                               std::vector<LeafSite>& sites) {
  if (t.symbol.kind == Symbol::kTerminal) {
    sites.push_back(LeafSite{nullptr, t.symbol.text});
    return;
  }
  if (t.children.size() == 1 &&
      t.children[0].symbol.kind == Symbol::kTerminal) {
    sites.push_back(LeafSite{&t, t.children[0].symbol.text});
    return;
  }
  for (DerivationTree& c : t.children) collect_leaf_sites(c, sites);
}

}  // namespace detail

/// Replaces the terminal text of one uniformly chosen leaf with a different
/// single-terminal alternative of the leaf's parent, updating the parent's
/// alternative index. Returns nullopt when no examined leaf has a
/// replacement ("cannot perturb"). The result is always similar() to t.
inline std::optional<DerivationTree> perturb(const DerivationTree& t,
                                             const Grammar& g, Rng& rng,
                                             PerturbMode mode =
                                                 PerturbMode::kRetry) {
  DerivationTree copy = t;
  std::vector<detail::LeafSite> sites;
  detail::collect_leaf_sites(copy, sites);
  if (sites.empty()) return std::nullopt;

  std::vector<std::size_t> order = rng.permutation(sites.size());
  std::size_t examined = mode == PerturbMode::kStrict ? 1 : order.size();
  for (std::size_t k = 0; k < examined; ++k) {
    detail::LeafSite& site = sites[order[k]];
    if (site.parent == nullptr) continue;  // leaf fixed by a longer alternative
    std::set<std::string> alternatives =
        terminal_alternatives(g, site.parent->symbol.text, site.token);
    if (alternatives.empty()) continue;
    std::vector<std::string> pool(alternatives.begin(), alternatives.end());
    const std::string& replacement = pool[rng.index(pool.size())];

    const Production& p = g.production(site.parent->symbol.text);
    for (std::size_t i = 0; i < p.alternatives.size(); ++i) {
      const Alternative& alt = p.alternatives[i];
      if (alt.size() == 1 && alt[0] == terminal(replacement)) {
        site.parent->alt_index = static_cast<int>(i);
        break;
      }
    }
    site.parent->children[0].symbol.text = replacement;
    return copy;
  }
  return std::nullopt;
}

/// Indented dump for debugging; terminals quoted.
inline std::string to_indented(const DerivationTree& t, int indent = 0) {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  if (t.symbol.kind == Symbol::kTerminal) {
    out += '"' + t.symbol.text + "\"\n";
    return out;
  }
  out += t.symbol.text + "\n";
  for (const DerivationTree& c : t.children) out += to_indented(c, indent + 1);
  return out;
}

}  // namespace gramdiff
