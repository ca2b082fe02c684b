// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Retraining study: train a pair of classifiers to separate two grammars,
// harvest disagreements with a directed campaign over the union grammar,
// feed an oracle-labeled fraction of them back into one classifier's
// training set, and measure how the error count and held-out accuracy move.

#pragma once

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gramdiff/classifiers.hpp"
#include "gramdiff/search.hpp"

namespace gramdiff {

/// Disjoint union of two grammars: nonterminals get distinct prefixes and a
/// fresh start symbol derives either original start, so the union generates
/// exactly the two languages with equal probability.
inline Grammar union_grammar(const Grammar& a, const Grammar& b,
                             const std::string& prefix_a = "L_",
                             const std::string& prefix_b = "R_",
                             const std::string& start = "S0") {
  auto renamed = [](const Grammar& g, const std::string& prefix) {
    std::vector<Production> out;
    for (const Production& p : g.productions()) {
      Production q;
      q.lhs = prefix + p.lhs;
      for (const Alternative& alt : p.alternatives) {
        Alternative r;
        for (const Symbol& s : alt) {
          r.push_back(s.kind == Symbol::kNonterminal
                          ? nonterminal(prefix + s.text)
                          : s);
        }
        q.alternatives.push_back(std::move(r));
      }
      out.push_back(std::move(q));
    }
    return out;
  };

  std::vector<Production> productions;
  productions.push_back(
      Production{start,
                 {{nonterminal(prefix_a + a.start())},
                  {nonterminal(prefix_b + b.start())}}});
  for (Production& p : renamed(a, prefix_a)) productions.push_back(std::move(p));
  for (Production& p : renamed(b, prefix_b)) productions.push_back(std::move(p));
  return Grammar::from_productions(std::move(productions));
}

struct MurqConfig {
  Grammar grammar1;
  Grammar grammar2;
  std::string label1 = "G1";
  std::string label2 = "G2";
  int train_per_class = 200;
  int heldout_per_class = 200;
  int iterations = 1000;  // campaign length N
  int repetitions = 50;
  std::vector<double> fractions =  // of the base corpus size
      {0.0, 0.02, 0.05, 0.07, 0.10, 0.12, 0.15, 0.17, 0.20, 0.22, 0.25};
  double threshold = 0.5;  // J; singleton labels make any (0,1] equivalent
  int epochs = 10;
  int max_depth = 16;
  std::uint64_t seed = 0;
  int parallelism = 1;  // repetitions are independent
};

struct RetrainRow {
  double fraction = 0.0;
  double mean_errors = 0.0;         // unique erroneous inputs per campaign
  double mean_accuracy_oracle = 0.0;     // naive Bayes, fixed per repetition
  double mean_accuracy_retrained = 0.0;  // perceptron after augmentation
};

struct RetrainReport {
  int iterations = 0;
  int repetitions = 0;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  double baseline_accuracy_oracle = 0.0;
  double baseline_accuracy_retrained = 0.0;
  std::vector<RetrainRow> rows;  // fractions ascending; rows[0] is 0%
};

namespace detail {

inline Corpus sample_corpus(const Grammar& g, const std::string& label,
                            int count, int max_depth, Rng& rng) {
  Corpus out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(LabeledSentence{yield_sentence(generate(g, rng, max_depth)),
                                  label});
  }
  return out;
}

inline std::vector<Sentence> unique_errors(const CampaignReport& rep) {
  std::vector<Sentence> out;
  std::set<std::string> seen;
  for (const IterationRecord& r : rep.trace) {
    if (r.is_error && seen.insert(r.sentence).second)
      out.push_back(sentence_from_text(r.sentence));
  }
  return out;
}

}  // namespace detail

/// Runs the full study. Deterministic in cfg.seed regardless of
/// parallelism: every repetition draws from its own derived streams and
/// rows are aggregated in repetition order.
inline RetrainReport run_murq(const MurqConfig& cfg) {
  if (cfg.repetitions <= 0)
    throw std::invalid_argument("repetitions must be positive");
  if (cfg.train_per_class <= 0 || cfg.heldout_per_class <= 0)
    throw std::invalid_argument("corpus sizes must be positive");
  std::vector<double> fractions = cfg.fractions;
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()),
                  fractions.end());
  if (fractions.empty() || fractions.front() < 0.0)
    throw std::invalid_argument("fractions must be non-negative");

  const Grammar campaign_grammar = union_grammar(cfg.grammar1, cfg.grammar2);

  struct RepOutcome {
    double acc_oracle = 0.0;
    double acc_baseline = 0.0;
    std::vector<double> errors;         // per fraction
    std::vector<double> acc_retrained;  // per fraction
  };
  std::vector<RepOutcome> outcomes(cfg.repetitions);

  auto run_repetition = [&](int rep) {
    const std::uint64_t rep_seed = mix64(cfg.seed ^ mix64(rep + 1));
    Rng corpus_rng = Rng::stream(rep_seed, 10);
    Corpus train = detail::sample_corpus(cfg.grammar1, cfg.label1,
                                         cfg.train_per_class, cfg.max_depth,
                                         corpus_rng);
    Corpus train2 = detail::sample_corpus(cfg.grammar2, cfg.label2,
                                          cfg.train_per_class, cfg.max_depth,
                                          corpus_rng);
    train.insert(train.end(), train2.begin(), train2.end());
    Corpus heldout = detail::sample_corpus(cfg.grammar1, cfg.label1,
                                           cfg.heldout_per_class,
                                           cfg.max_depth, corpus_rng);
    Corpus heldout2 = detail::sample_corpus(cfg.grammar2, cfg.label2,
                                            cfg.heldout_per_class,
                                            cfg.max_depth, corpus_rng);
    heldout.insert(heldout.end(), heldout2.begin(), heldout2.end());

    const std::uint64_t train_seed = mix64(rep_seed ^ 0xbee5);
    NaiveBayesModel nb = train_nb(train, 1.0);
    PerceptronModel base = train_perceptron(train, cfg.epochs, train_seed);

    RepOutcome& out = outcomes[rep];
    out.acc_oracle = accuracy(nb, heldout);
    out.acc_baseline = accuracy(base, heldout);

    auto oracle = std::make_shared<NaiveBayesClassifier>("oracle-nb", nb);

    CampaignConfig campaign;
    campaign.grammar = campaign_grammar;
    campaign.grammar_name = "union";
    campaign.f1 = oracle;
    campaign.threshold = cfg.threshold;
    campaign.iterations = cfg.iterations;
    campaign.strategy = Strategy::kDirected;
    campaign.seed = mix64(rep_seed ^ 0xcafe);
    campaign.initial_mode = InitialMode::kAny;
    campaign.max_depth = cfg.max_depth;

    campaign.f2 = std::make_shared<PerceptronClassifier>("subject-perceptron",
                                                         base);
    CampaignReport baseline_rep = run_campaign(campaign);
    std::vector<Sentence> errors = detail::unique_errors(baseline_rep);

    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
      double fraction = fractions[fi];
      double n_err;
      PerceptronModel retrained;
      if (fraction == 0.0) {
        retrained = base;  // train_seed reproduces the base model exactly
        n_err = baseline_rep.n_err;
      } else {
        const std::uint64_t sample_seed =
            mix64(rep_seed ^ mix64(0x1000 + static_cast<std::uint64_t>(fi)));
        retrained = retrain_with_errors(base, train, errors,
                                        ClassifierHandle(oracle), fraction,
                                        sample_seed, train_seed);
        campaign.f2 = std::make_shared<PerceptronClassifier>(
            "subject-perceptron", retrained);
        n_err = run_campaign(campaign).n_err;
      }
      out.errors.push_back(n_err);
      out.acc_retrained.push_back(accuracy(retrained, heldout));
    }
  };

  int workers = std::max(1, std::min(cfg.parallelism, cfg.repetitions));
  if (workers == 1) {
    for (int rep = 0; rep < cfg.repetitions; ++rep) run_repetition(rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int rep = next.fetch_add(1); rep < cfg.repetitions;
             rep = next.fetch_add(1))
          run_repetition(rep);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  RetrainReport report;
  report.iterations = cfg.iterations;
  report.repetitions = cfg.repetitions;
  report.seed = cfg.seed;
  report.threshold = cfg.threshold;
  for (const RepOutcome& out : outcomes) {
    report.baseline_accuracy_oracle += out.acc_oracle;
    report.baseline_accuracy_retrained += out.acc_baseline;
  }
  report.baseline_accuracy_oracle /= cfg.repetitions;
  report.baseline_accuracy_retrained /= cfg.repetitions;
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    RetrainRow row;
    row.fraction = fractions[fi];
    for (const RepOutcome& out : outcomes) {
      row.mean_errors += out.errors[fi];
      row.mean_accuracy_oracle += out.acc_oracle;
      row.mean_accuracy_retrained += out.acc_retrained[fi];
    }
    row.mean_errors /= cfg.repetitions;
    row.mean_accuracy_oracle /= cfg.repetitions;
    row.mean_accuracy_retrained /= cfg.repetitions;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace gramdiff
