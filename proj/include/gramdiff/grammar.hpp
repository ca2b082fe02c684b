// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Context-free grammar model and text format.
//
// File format, one rule per line:
//
//   # comment
//   S  -> NP VP
//   NP -> "John" | "Mary" | Det N
//
// Terminals are double-quoted and contain no whitespace or quotes;
// nonterminals are bare identifiers. Alternatives are separated by '|'.
// The first rule's left-hand side is the start symbol. A nonterminal may
// be defined only once.

#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gramdiff {

struct Symbol {
  enum Kind { kTerminal, kNonterminal };
  Kind kind = kTerminal;
  std::string text;  // surface form or nonterminal name

  bool operator==(const Symbol&) const = default;
};

inline Symbol terminal(std::string text) {
  return Symbol{Symbol::kTerminal, std::move(text)};
}
inline Symbol nonterminal(std::string name) {
  return Symbol{Symbol::kNonterminal, std::move(name)};
}

/// One alternative of a production; never empty.
using Alternative = std::vector<Symbol>;

struct Production {
  std::string lhs;
  std::vector<Alternative> alternatives;  // at least one

  bool operator==(const Production&) const = default;
};

/// Raised for malformed grammar text; the message carries line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Raised for structurally invalid grammars (undefined or non-productive
/// nonterminals, lookups of unknown rules).
class GrammarError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validated, immutable grammar.
///
/// Invariants established at construction:
///  - every referenced nonterminal is defined;
///  - every nonterminal derives at least one finite terminal string;
///  - each alternative is non-empty.
/// Unreachable nonterminals are allowed and reported via warnings().
class Grammar {
 public:
  static Grammar from_productions(std::vector<Production> productions);

  const std::string& start() const {
    if (productions_.empty()) throw GrammarError("grammar has no productions");
    return productions_.front().lhs;
  }
  const std::vector<Production>& productions() const { return productions_; }

  bool defines(const std::string& name) const {
    return index_.find(name) != index_.end();
  }

  const Production& production(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw GrammarError("undefined nonterminal " + name);
    return productions_[it->second];
  }

  /// Height of the shallowest complete derivation rooted at name, where a
  /// tree consisting of one expansion to terminals has height 1.
  int min_height(const std::string& name) const {
    return min_height_.at(name);
  }

  /// Height needed to complete the given alternative from its parent node.
  int alt_min_height(const Alternative& alt) const {
    int h = 0;
    for (const Symbol& s : alt) {
      if (s.kind == Symbol::kNonterminal) h = std::max(h, min_height(s.text));
    }
    return h + 1;
  }

  /// Unreachable-nonterminal warnings, in definition order.
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool operator==(const Grammar& other) const {
    return productions_ == other.productions_;
  }

  /// An empty grammar; usable only as a placeholder until assigned.
  Grammar() = default;

 private:
  std::vector<Production> productions_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, int> min_height_;
  std::vector<std::string> warnings_;
};

inline Grammar Grammar::from_productions(std::vector<Production> productions) {
  if (productions.empty()) throw GrammarError("grammar has no productions");
  Grammar g;
  g.productions_ = std::move(productions);
  for (std::size_t i = 0; i < g.productions_.size(); ++i) {
    const Production& p = g.productions_[i];
    if (p.alternatives.empty())
      throw GrammarError("nonterminal " + p.lhs + " has no alternatives");
    for (const Alternative& alt : p.alternatives) {
      if (alt.empty())
        throw GrammarError("empty alternative in rule for " + p.lhs);
    }
    if (!g.index_.emplace(p.lhs, i).second)
      throw GrammarError("duplicate definition of " + p.lhs);
  }

  for (const Production& p : g.productions_) {
    for (const Alternative& alt : p.alternatives) {
      for (const Symbol& s : alt) {
        if (s.kind == Symbol::kNonterminal && !g.index_.count(s.text))
          throw GrammarError("undefined nonterminal " + s.text +
                             " referenced from " + p.lhs);
      }
    }
  }

  // Least fixpoint of minimum derivation heights. Nonterminals that never
  // converge cannot derive a finite terminal string.
  const int kInf = 1 << 29;
  for (const Production& p : g.productions_) g.min_height_[p.lhs] = kInf;
  for (bool changed = true; changed;) {
    changed = false;
    for (const Production& p : g.productions_) {
      int best = kInf;
      for (const Alternative& alt : p.alternatives) {
        int h = 0;
        for (const Symbol& s : alt) {
          if (s.kind == Symbol::kNonterminal)
            h = std::max(h, g.min_height_[s.text]);
        }
        if (h < kInf) best = std::min(best, h + 1);
      }
      if (best < g.min_height_[p.lhs]) {
        g.min_height_[p.lhs] = best;
        changed = true;
      }
    }
  }
  for (const Production& p : g.productions_) {
    if (g.min_height_[p.lhs] >= kInf)
      throw GrammarError("non-productive nonterminal " + p.lhs);
  }

  // Reachability from the start symbol; unreachable rules only warn.
  std::set<std::string> reached{g.start()};
  std::vector<std::string> frontier{g.start()};
  while (!frontier.empty()) {
    std::string name = std::move(frontier.back());
    frontier.pop_back();
    for (const Alternative& alt : g.production(name).alternatives) {
      for (const Symbol& s : alt) {
        if (s.kind == Symbol::kNonterminal && reached.insert(s.text).second)
          frontier.push_back(s.text);
      }
    }
  }
  for (const Production& p : g.productions_) {
    if (!reached.count(p.lhs))
      g.warnings_.push_back("unreachable nonterminal " + p.lhs);
  }
  return g;
}

namespace detail {

inline bool identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Cursor over one rule line; positions are 1-based for error messages.
struct LineScanner {
  const std::string& line;
  int line_no;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_no, static_cast<int>(pos) + 1, what);
  }
  void skip_space() {
    while (pos < line.size() &&
           std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
  }
  bool done() {
    skip_space();
    return pos >= line.size();
  }
  char peek() const { return line[pos]; }

  std::string identifier() {
    skip_space();
    std::size_t begin = pos;
    while (pos < line.size() && identifier_char(line[pos])) ++pos;
    if (pos == begin) fail("expected a nonterminal name");
    return line.substr(begin, pos - begin);
  }

  void expect_arrow() {
    skip_space();
    if (line.compare(pos, 2, "->") != 0) fail("expected '->'");
    pos += 2;
  }

  std::string quoted_terminal() {
    std::size_t begin = pos;
    ++pos;  // opening quote
    std::string out;
    while (pos < line.size() && line[pos] != '"') {
      if (std::isspace(static_cast<unsigned char>(line[pos])))
        fail("whitespace inside a terminal");
      out += line[pos++];
    }
    if (pos >= line.size()) {
      pos = begin;
      fail("unterminated terminal");
    }
    ++pos;  // closing quote
    if (out.empty()) fail("empty terminal");
    return out;
  }
};

}  // namespace detail

/// Parses grammar text. Throws ParseError on malformed input and
/// GrammarError on structural problems.
inline Grammar parse_grammar(const std::string& text) {
  std::vector<Production> productions;
  std::map<std::string, int> first_defined_on;  // duplicate diagnostics
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    detail::LineScanner sc{line, line_no};
    Production prod;
    prod.lhs = sc.identifier();
    sc.expect_arrow();

    Alternative alt;
    auto close_alt = [&] {
      if (alt.empty()) sc.fail("empty alternative");
      prod.alternatives.push_back(std::move(alt));
      alt.clear();
    };
    while (!sc.done()) {
      char c = sc.peek();
      if (c == '|') {
        ++sc.pos;
        close_alt();
      } else if (c == '"') {
        alt.push_back(terminal(sc.quoted_terminal()));
      } else if (detail::identifier_char(c)) {
        alt.push_back(nonterminal(sc.identifier()));
      } else {
        sc.fail(std::string("unexpected character '") + c + "'");
      }
    }
    close_alt();

    auto [it, fresh] = first_defined_on.emplace(prod.lhs, line_no);
    if (!fresh)
      throw ParseError(line_no, 1,
                       "duplicate definition of " + prod.lhs +
                           " (first defined on line " +
                           std::to_string(it->second) + ")");
    productions.push_back(std::move(prod));
  }
  return Grammar::from_productions(std::move(productions));
}

inline Grammar parse_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open grammar file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grammar(buf.str());
}

/// Canonical text form; parse_grammar(to_text(g)) == g.
inline std::string to_text(const Grammar& g) {
  std::string out;
  for (const Production& p : g.productions()) {
    out += p.lhs;
    out += " ->";
    bool first_alt = true;
    for (const Alternative& alt : p.alternatives) {
      if (!first_alt) out += " |";
      first_alt = false;
      for (const Symbol& s : alt) {
        out += ' ';
        if (s.kind == Symbol::kTerminal)
          out += '"' + s.text + '"';
        else
          out += s.text;
      }
    }
    out += '\n';
  }
  return out;
}

/// Terminals appearing as complete single-symbol alternatives of lhs, minus
/// exclude. Multi-symbol alternatives never contribute, so swapping one of
/// these terminals for another preserves the derivation's shape.
inline std::set<std::string> terminal_alternatives(const Grammar& g,
                                                   const std::string& lhs,
                                                   const std::string& exclude) {
  std::set<std::string> out;
  for (const Alternative& alt : g.production(lhs).alternatives) {
    if (alt.size() == 1 && alt[0].kind == Symbol::kTerminal &&
        alt[0].text != exclude)
      out.insert(alt[0].text);
  }
  return out;
}

}  // namespace gramdiff
