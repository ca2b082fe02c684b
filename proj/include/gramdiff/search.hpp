// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Differential search campaigns over a grammar: directed perturbation walk
// with backtracking, the same walk without backtracking, and an independent
// random baseline.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "gramdiff/derivation.hpp"
#include "gramdiff/oracle.hpp"

namespace gramdiff {

enum class Strategy { kDirected, kRandom, kNoBacktrack };
enum class InitialMode { kAny, kForceError, kForceNonError };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kDirected: return "directed";
    case Strategy::kRandom: return "random";
    case Strategy::kNoBacktrack: return "no-backtrack";
  }
  return "directed";
}

inline const char* to_string(InitialMode m) {
  switch (m) {
    case InitialMode::kAny: return "any";
    case InitialMode::kForceError: return "force-error";
    case InitialMode::kForceNonError: return "force-non-error";
  }
  return "any";
}

struct CampaignConfig {
  Grammar grammar;
  std::string grammar_name;  // echoed in reports and file names
  ClassifierHandle f1;
  ClassifierHandle f2;
  double threshold = 0.15;  // J; must lie in [0, 1]
  int iterations = 2000;    // N; the initial input is recorded as index 0
  Strategy strategy = Strategy::kDirected;
  std::uint64_t seed = 0;
  InitialMode initial_mode = InitialMode::kAny;
  int max_initial_probes = 100;
  int max_depth = 16;
  bool strict_perturb = false;
  std::string name;  // campaign label for file naming; optional
};

/// One evaluated input. transition encodes previous-current/candidate
/// error status as NN, NE, EE or EN; accepted is false only for an EN
/// candidate under the directed strategy; regenerated marks candidates
/// that were freshly generated because the current tree had no
/// perturbable leaf.
struct IterationRecord {
  int index = 0;
  std::string sentence;
  bool is_error = false;
  double jaccard_value = 1.0;
  std::string transition = "NN";
  bool accepted = true;
  bool regenerated = false;
};

struct CampaignReport {
  // config echo
  std::string name;
  std::string strategy;
  std::string grammar_name;
  std::string f1_id;
  std::string f2_id;
  double threshold = 0.15;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::string initial_mode;
  int max_depth = 16;
  bool strict_perturb = false;

  std::vector<IterationRecord> trace;
  int n_inputs = 0;  // unique sentence texts across the trace
  int n_err = 0;     // unique erroneous sentence texts
  double err_r = 0.0;
  std::optional<int> iterations_to_first_error;
  bool partial = false;          // campaign aborted by a classifier failure
  std::string transport_error;   // empty unless partial
};

/// Raised when find_initial exhausts its probe budget.
class ProbeExhaustedError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Generates inputs until one matches the requested error status under the
/// pair held by the cache, up to max_probes attempts. Probes are memoized
/// but are not part of any trace.
inline DerivationTree find_initial(const Grammar& g, QueryCache& cache,
                                   double threshold, InitialMode mode,
                                   int max_probes, int max_depth, Rng& rng) {
  for (int probe = 0; probe < std::max(max_probes, 1); ++probe) {
    DerivationTree t = generate(g, rng, max_depth);
    if (mode == InitialMode::kAny) return t;
    bool err = cache.evaluate_pair(yield_sentence(t), threshold).erroneous;
    if (err == (mode == InitialMode::kForceError)) return t;
  }
  throw ProbeExhaustedError(
      std::string("no ") +
      (mode == InitialMode::kForceError ? "erroneous" : "non-erroneous") +
      " initial input found within " + std::to_string(max_probes) +
      " probes");
}

/// Runs one campaign to completion. A classifier failure (transport or
/// malformed response) stops the walk and returns the partial report with
/// the failure message; all other exceptions propagate.
inline CampaignReport run_campaign(const CampaignConfig& cfg) {
  if (cfg.threshold < 0.0 || cfg.threshold > 1.0)
    throw std::invalid_argument("threshold must lie in [0, 1]");
  if (cfg.iterations < 0)
    throw std::invalid_argument("iterations must be >= 0");

  CampaignReport rep;
  rep.name = cfg.name;
  rep.strategy = to_string(cfg.strategy);
  rep.grammar_name = cfg.grammar_name;
  rep.f1_id = cfg.f1 ? cfg.f1->id() : "";
  rep.f2_id = cfg.f2 ? cfg.f2->id() : "";
  rep.threshold = cfg.threshold;
  rep.iterations = cfg.iterations;
  rep.seed = cfg.seed;
  rep.initial_mode = to_string(cfg.initial_mode);
  rep.max_depth = cfg.max_depth;
  rep.strict_perturb = cfg.strict_perturb;

  QueryCache cache(cfg.f1, cfg.f2);
  Rng probe_rng = Rng::stream(cfg.seed, 1);  // initial-input stream
  Rng walk_rng = Rng::stream(cfg.seed, 2);   // perturbation/generation stream

  std::unordered_set<std::string> inputs;
  std::unordered_set<std::string> errors;
  auto note = [&](IterationRecord r) {
    inputs.insert(r.sentence);
    if (r.is_error) {
      errors.insert(r.sentence);
      if (!rep.iterations_to_first_error) rep.iterations_to_first_error = r.index;
    }
    rep.trace.push_back(std::move(r));
  };

  const PerturbMode pmode =
      cfg.strict_perturb ? PerturbMode::kStrict : PerturbMode::kRetry;
  try {
    DerivationTree cur =
        find_initial(cfg.grammar, cache, cfg.threshold, cfg.initial_mode,
                     cfg.max_initial_probes, cfg.max_depth, probe_rng);
    Sentence cur_sentence = yield_sentence(cur);
    auto first = cache.evaluate_pair(cur_sentence, cfg.threshold);
    note(IterationRecord{0, cur_sentence.text(), first.erroneous,
                         first.jaccard_value,
                         first.erroneous ? "NE" : "NN", true, false});

    for (int i = 1; i <= cfg.iterations; ++i) {
      DerivationTree cand;
      bool regenerated = false;
      if (cfg.strategy == Strategy::kRandom) {
        cand = generate(cfg.grammar, walk_rng, cfg.max_depth);
      } else {
        std::optional<DerivationTree> p =
            perturb(cur, cfg.grammar, walk_rng, pmode);
        if (p) {
          cand = std::move(*p);
        } else {
          // No leaf of the current tree can be replaced; fall back to a
          // fresh input. It is still subject to the acceptance rule below,
          // so a directed walk never abandons an erroneous current input.
          cand = generate(cfg.grammar, walk_rng, cfg.max_depth);
          regenerated = true;
        }
      }

      Sentence cand_sentence = yield_sentence(cand);
      auto cand_out = cache.evaluate_pair(cand_sentence, cfg.threshold);
      auto cur_out = cache.evaluate_pair(cur_sentence, cfg.threshold);

      std::string transition;
      transition += cur_out.erroneous ? 'E' : 'N';
      transition += cand_out.erroneous ? 'E' : 'N';
      bool accepted = cfg.strategy == Strategy::kDirected
                          ? !(cur_out.erroneous && !cand_out.erroneous)
                          : true;
      note(IterationRecord{i, cand_sentence.text(), cand_out.erroneous,
                           cand_out.jaccard_value, transition, accepted,
                           regenerated});
      if (accepted) {
        cur = std::move(cand);
        cur_sentence = std::move(cand_sentence);
      }
    }
  } catch (const ClassifierError& e) {
    rep.partial = true;
    rep.transport_error = e.what();
  }

  rep.n_inputs = static_cast<int>(inputs.size());
  rep.n_err = static_cast<int>(errors.size());
  rep.err_r = rep.n_inputs == 0
                  ? 0.0
                  : static_cast<double>(rep.n_err) / rep.n_inputs;
  return rep;
}

/// Pre: cfg.strategy matches the named strategy.
inline CampaignReport directed_search(const CampaignConfig& cfg) {
  if (cfg.strategy != Strategy::kDirected)
    throw std::invalid_argument("directed_search requires strategy=directed");
  return run_campaign(cfg);
}

inline CampaignReport random_search(const CampaignConfig& cfg) {
  if (cfg.strategy != Strategy::kRandom)
    throw std::invalid_argument("random_search requires strategy=random");
  return run_campaign(cfg);
}

inline CampaignReport no_backtrack_search(const CampaignConfig& cfg) {
  if (cfg.strategy != Strategy::kNoBacktrack)
    throw std::invalid_argument(
        "no_backtrack_search requires strategy=no-backtrack");
  return run_campaign(cfg);
}

}  // namespace gramdiff
