// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Campaign suites: a declarative configuration expands into the cross
// product of grammars x thresholds x strategies, runs each campaign with a
// seed derived from the suite seed and campaign index, and emits traces,
// reports and an aggregate CSV.

#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "gramdiff/io.hpp"

namespace gramdiff {

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  int parallelism = 1;
  int iterations = 2000;
  std::vector<std::string> grammar_files;
  std::vector<double> thresholds;
  std::vector<Strategy> strategies;
  ClassifierHandle f1;
  ClassifierHandle f2;
  InitialMode initial_mode = InitialMode::kAny;
  int max_initial_probes = 100;
  int max_depth = 16;
  bool strict_perturb = false;
  std::vector<std::string> formats = {"jsonl", "json", "csv"};
};

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "directed") return Strategy::kDirected;
  if (s == "random") return Strategy::kRandom;
  if (s == "no-backtrack") return Strategy::kNoBacktrack;
  throw ConfigError("unknown strategy \"" + s + "\"");
}

inline InitialMode initial_mode_from_string(const std::string& s) {
  if (s == "any") return InitialMode::kAny;
  if (s == "force-error") return InitialMode::kForceError;
  if (s == "force-non-error") return InitialMode::kForceNonError;
  throw ConfigError("unknown initial mode \"" + s + "\"");
}

/// Loads a suite configuration. Relative grammar and model paths resolve
/// against base_dir (normally the config file's directory); thresholds are
/// clamped into [0, 1].
inline SuiteConfig suite_config_from_json(
    const Json& j, const std::filesystem::path& base_dir = {}) {
  SuiteConfig cfg;
  cfg.seed = detail::get_or<std::uint64_t>(j, "seed", 0);
  cfg.output_dir = detail::get_or<std::string>(j, "output_dir", "out");
  cfg.parallelism = detail::get_or<int>(j, "parallelism", 1);
  cfg.iterations = detail::get_or<int>(j, "iterations", 2000);
  if (cfg.iterations < 0) throw ConfigError("iterations must be >= 0");
  if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");

  for (const auto& g : detail::require(j, "grammars")) {
    std::filesystem::path p(g.get<std::string>());
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.grammar_files.push_back(p.string());
  }
  if (cfg.grammar_files.empty()) throw ConfigError("no grammars configured");

  for (const auto& t : detail::require(j, "thresholds"))
    cfg.thresholds.push_back(detail::clamp_threshold(t.get<double>()));
  if (cfg.thresholds.empty()) throw ConfigError("no thresholds configured");

  std::vector<std::string> strategy_names =
      detail::get_or<std::vector<std::string>>(
          j, "strategies", {"directed", "random"});
  for (const std::string& s : strategy_names)
    cfg.strategies.push_back(strategy_from_string(s));

  const Json& pair = detail::require(j, "classifiers");
  cfg.f1 = classifier_from_json(detail::require(pair, "f1"), base_dir);
  cfg.f2 = classifier_from_json(detail::require(pair, "f2"), base_dir);

  cfg.initial_mode = initial_mode_from_string(
      detail::get_or<std::string>(j, "initial_mode", "any"));
  cfg.max_initial_probes =
      detail::get_or<int>(j, "max_initial_probes", cfg.max_initial_probes);
  cfg.max_depth = detail::get_or<int>(j, "max_depth", cfg.max_depth);
  cfg.strict_perturb =
      detail::get_or<bool>(j, "strict_perturb", cfg.strict_perturb);
  cfg.formats = detail::get_or<std::vector<std::string>>(j, "formats",
                                                         cfg.formats);
  return cfg;
}

namespace detail {
inline std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
      c = c == '.' ? 'p' : '_';
  }
  return s;
}
}  // namespace detail

/// Aggregate CSV. A directed row whose (grammar, pair, J) also ran under
/// the random strategy carries the relative improvement
/// Imp% = (err_r_directed - err_r_random) / err_r_random * 100.
inline std::string suite_csv(const std::vector<CampaignReport>& reports) {
  std::string out = "strategy,grammar,pair,J,n_inputs,n_err,err_r,imp_pct\n";
  char buf[256];
  for (const CampaignReport& rep : reports) {
    std::string imp;
    if (rep.strategy == "directed") {
      for (const CampaignReport& other : reports) {
        if (other.strategy == "random" &&
            other.grammar_name == rep.grammar_name &&
            other.f1_id == rep.f1_id && other.f2_id == rep.f2_id &&
            other.threshold == rep.threshold && other.err_r > 0.0) {
          std::snprintf(buf, sizeof(buf), "%.2f",
                        (rep.err_r - other.err_r) / other.err_r * 100.0);
          imp = buf;
          break;
        }
      }
    }
    std::snprintf(buf, sizeof(buf), "%s,%s,%s+%s,%g,%d,%d,%.6f,%s\n",
                  rep.strategy.c_str(), rep.grammar_name.c_str(),
                  rep.f1_id.c_str(), rep.f2_id.c_str(), rep.threshold,
                  rep.n_inputs, rep.n_err, rep.err_r, imp.c_str());
    out += buf;
  }
  return out;
}

struct SuiteResult {
  std::vector<CampaignReport> reports;
  std::vector<std::string> files_written;
  int exit_code = 0;  // 4 when any campaign ended on a transport failure
};

/// Expands and runs the suite. Campaign seeds depend only on the suite
/// seed and the campaign's index in the expansion, so outputs do not
/// depend on the parallelism bound.
inline SuiteResult run_suite(const SuiteConfig& cfg) {
  std::vector<CampaignConfig> campaigns;
  for (const std::string& file : cfg.grammar_files) {
    Grammar g = parse_grammar_file(file);  // GrammarError propagates
    std::string stem = std::filesystem::path(file).stem().string();
    for (double threshold : cfg.thresholds) {
      for (Strategy strategy : cfg.strategies) {
        CampaignConfig c;
        c.grammar = g;
        c.grammar_name = stem;
        c.f1 = cfg.f1;
        c.f2 = cfg.f2;
        c.threshold = threshold;
        c.iterations = cfg.iterations;
        c.strategy = strategy;
        c.seed = mix64(cfg.seed ^ mix64(campaigns.size() + 1));
        c.initial_mode = cfg.initial_mode;
        c.max_initial_probes = cfg.max_initial_probes;
        c.max_depth = cfg.max_depth;
        c.strict_perturb = cfg.strict_perturb;
        char name[128];
        std::snprintf(name, sizeof(name), "c%03zu_%s_%s_J%s",
                      campaigns.size(), to_string(strategy), stem.c_str(),
                      detail::file_safe(std::to_string(threshold)).c_str());
        c.name = name;
        campaigns.push_back(std::move(c));
      }
    }
  }

  SuiteResult result;
  result.reports.resize(campaigns.size());
  auto run_one = [&](std::size_t k) {
    result.reports[k] = run_campaign(campaigns[k]);
  };
  int workers = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(std::max(cfg.parallelism, 1)),
      campaigns.size()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < campaigns.size(); ++k) run_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < campaigns.size();
             k = next.fetch_add(1))
          run_one(k);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  const std::filesystem::path out_dir(cfg.output_dir);
  auto wants = [&](const char* fmt) {
    for (const std::string& f : cfg.formats)
      if (f == fmt) return true;
    return false;
  };
  for (const CampaignReport& rep : result.reports) {
    if (rep.partial) result.exit_code = 4;
    if (wants("jsonl")) {
      auto p = out_dir / (rep.name + ".trace.jsonl");
      write_text_file(p, trace_to_jsonl(rep));
      result.files_written.push_back(p.string());
    }
    if (wants("json")) {
      auto p = out_dir / (rep.name + ".report.json");
      write_text_file(p, report_to_json(rep).dump(2) + "\n");
      result.files_written.push_back(p.string());
    }
  }
  if (wants("csv")) {
    auto p = out_dir / "summary.csv";
    write_text_file(p, suite_csv(result.reports));
    result.files_written.push_back(p.string());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Retraining study configuration
//
// Keys: grammar1, grammar2 (paths, required), iterations, repetitions,
// fractions (percentages of the base corpus), threshold, seed,
// train_per_class, heldout_per_class, epochs, max_depth, parallelism,
// output_dir.
inline MurqConfig murq_config_from_json(
    const Json& j, const std::filesystem::path& base_dir = {}) {
  auto grammar_path = [&](const std::string& key) {
    std::filesystem::path p(detail::require(j, key).get<std::string>());
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p.string();
  };
  MurqConfig cfg;
  cfg.grammar1 = parse_grammar_file(grammar_path("grammar1"));
  cfg.grammar2 = parse_grammar_file(grammar_path("grammar2"));
  cfg.label1 = detail::get_or<std::string>(j, "label1", cfg.label1);
  cfg.label2 = detail::get_or<std::string>(j, "label2", cfg.label2);
  cfg.iterations = detail::get_or<int>(j, "iterations", cfg.iterations);
  cfg.repetitions = detail::get_or<int>(j, "repetitions", cfg.repetitions);
  if (j.contains("fractions")) {
    cfg.fractions.clear();
    for (const auto& f : j.at("fractions"))
      cfg.fractions.push_back(f.get<double>() / 100.0);
  }
  cfg.threshold = detail::clamp_threshold(
      detail::get_or<double>(j, "threshold", cfg.threshold));
  cfg.seed = detail::get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.train_per_class =
      detail::get_or<int>(j, "train_per_class", cfg.train_per_class);
  cfg.heldout_per_class =
      detail::get_or<int>(j, "heldout_per_class", cfg.heldout_per_class);
  cfg.epochs = detail::get_or<int>(j, "epochs", cfg.epochs);
  cfg.max_depth = detail::get_or<int>(j, "max_depth", cfg.max_depth);
  cfg.parallelism = detail::get_or<int>(j, "parallelism", cfg.parallelism);
  return cfg;
}

}  // namespace gramdiff
