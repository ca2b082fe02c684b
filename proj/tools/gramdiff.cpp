// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// gramdiff command line: grammar validation, sentence generation, single
// perturbation steps, campaign suites and the retraining study.
//
// Exit codes: 0 success, 2 configuration error, 3 grammar error,
// 4 classifier transport failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gramdiff/io.hpp"
#include "gramdiff/suite.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGrammar = 3;
constexpr int kExitTransport = 4;

int cmd_validate(const std::string& grammar_file) {
  gramdiff::Grammar g = gramdiff::parse_grammar_file(grammar_file);
  std::printf("OK: %zu productions, start symbol %s\n",
              g.productions().size(), g.start().c_str());
  for (const std::string& w : g.warnings())
    std::printf("warning: %s\n", w.c_str());
  return 0;
}

int cmd_gen(const std::string& grammar_file, int count, std::uint64_t seed,
            int max_depth, bool show_tree, bool as_json) {
  gramdiff::Grammar g = gramdiff::parse_grammar_file(grammar_file);
  gramdiff::Rng rng = gramdiff::Rng::stream(seed, 2);
  for (int i = 0; i < count; ++i) {
    gramdiff::DerivationTree t = gramdiff::generate(g, rng, max_depth);
    std::printf("%s\n", gramdiff::yield_sentence(t).text().c_str());
    if (as_json)
      std::printf("%s\n", gramdiff::tree_to_json(t).dump().c_str());
    else if (show_tree)
      std::printf("%s", gramdiff::to_indented(t).c_str());
  }
  return 0;
}

int cmd_perturb(const std::string& grammar_file, std::uint64_t seed,
                int max_depth, bool strict) {
  gramdiff::Grammar g = gramdiff::parse_grammar_file(grammar_file);
  gramdiff::Rng rng = gramdiff::Rng::stream(seed, 2);
  gramdiff::DerivationTree t = gramdiff::generate(g, rng, max_depth);
  std::printf("input:  %s\n", gramdiff::yield_sentence(t).text().c_str());
  auto p = gramdiff::perturb(t, g, rng,
                             strict ? gramdiff::PerturbMode::kStrict
                                    : gramdiff::PerturbMode::kRetry);
  if (!p) {
    std::printf("Cannot Perturb Terminal\n");
    return 0;
  }
  std::printf("output: %s\n", gramdiff::yield_sentence(*p).text().c_str());
  std::printf("--- input tree\n%s--- output tree\n%s",
              gramdiff::to_indented(t).c_str(),
              gramdiff::to_indented(*p).c_str());
  return 0;
}

int cmd_run(const std::string& config_file,
            const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out_dir,
            const std::optional<int>& iterations) {
  auto path = std::filesystem::path(config_file);
  gramdiff::SuiteConfig cfg = gramdiff::suite_config_from_json(
      gramdiff::load_json_file(path), path.parent_path());
  if (seed) cfg.seed = *seed;
  if (out_dir) cfg.output_dir = *out_dir;
  if (iterations) {
    if (*iterations < 0) throw gramdiff::ConfigError("iterations must be >= 0");
    cfg.iterations = *iterations;
  }

  gramdiff::SuiteResult result = gramdiff::run_suite(cfg);
  for (const gramdiff::CampaignReport& rep : result.reports) {
    std::printf("%-40s n_inputs=%-6d n_err=%-6d err_r=%.4f%s\n",
                rep.name.c_str(), rep.n_inputs, rep.n_err, rep.err_r,
                rep.partial ? "  [partial]" : "");
    if (rep.partial)
      std::fprintf(stderr, "campaign %s aborted: %s\n", rep.name.c_str(),
                   rep.transport_error.c_str());
  }
  for (const std::string& f : result.files_written)
    std::printf("wrote %s\n", f.c_str());
  return result.exit_code;
}

int cmd_murq(const std::string& config_file,
             const std::optional<std::uint64_t>& seed,
             const std::optional<std::string>& out_dir) {
  auto path = std::filesystem::path(config_file);
  gramdiff::Json j = gramdiff::load_json_file(path);
  gramdiff::MurqConfig cfg =
      gramdiff::murq_config_from_json(j, path.parent_path());
  if (seed) cfg.seed = *seed;
  std::string output_dir = out_dir.value_or(
      gramdiff::detail::get_or<std::string>(j, "output_dir", "out"));

  gramdiff::RetrainReport rep = gramdiff::run_murq(cfg);
  std::printf("baseline accuracy: oracle %.4f, subject %.4f\n",
              rep.baseline_accuracy_oracle, rep.baseline_accuracy_retrained);
  std::printf("%-14s %-12s %-16s %s\n", "percent_added", "mean_errors",
              "accuracy_oracle", "accuracy_retrained");
  for (const gramdiff::RetrainRow& row : rep.rows) {
    std::printf("%-14.2f %-12.4f %-16.6f %.6f\n", row.fraction * 100.0,
                row.mean_errors, row.mean_accuracy_oracle,
                row.mean_accuracy_retrained);
  }
  auto base = std::filesystem::path(output_dir);
  gramdiff::write_text_file(base / "murq.report.json",
                            gramdiff::murq_report_to_json(rep).dump(2) + "\n");
  gramdiff::write_text_file(base / "murq.csv",
                            gramdiff::murq_report_to_csv(rep));
  std::printf("wrote %s\nwrote %s\n",
              (base / "murq.report.json").string().c_str(),
              (base / "murq.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-based differential testing of text classifiers"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a grammar file");
  std::string grammar_file;
  validate->add_option("grammar", grammar_file, "Grammar file")->required();

  auto* gen = app.add_subcommand("gen", "Generate random sentences");
  std::string gen_grammar;
  int gen_count = 5;
  std::uint64_t gen_seed = 0;
  int gen_depth = 16;
  bool gen_tree = false, gen_json = false;
  gen->add_option("--grammar", gen_grammar, "Grammar file")->required();
  gen->add_option("--count", gen_count, "Number of sentences");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--max-depth", gen_depth, "Derivation depth budget");
  gen->add_flag("--tree", gen_tree, "Print each derivation tree");
  gen->add_flag("--json", gen_json, "Print each tree as JSON");

  auto* perturb = app.add_subcommand("perturb",
                                     "Generate one sentence and perturb it");
  std::string pert_grammar;
  std::uint64_t pert_seed = 0;
  int pert_depth = 16;
  bool pert_strict = false;
  perturb->add_option("--grammar", pert_grammar, "Grammar file")->required();
  perturb->add_option("--seed", pert_seed, "Random seed");
  perturb->add_option("--max-depth", pert_depth, "Derivation depth budget");
  perturb->add_flag("--strict", pert_strict,
                    "Give up if the first chosen leaf has no replacement");

  auto* run = app.add_subcommand("run", "Run a campaign suite");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> run_out;
  std::optional<int> run_iters;
  run->add_option("--config", run_config, "Suite configuration JSON")
      ->required();
  run->add_option("--seed", run_seed, "Override the suite seed");
  run->add_option("--out", run_out, "Override the output directory");
  run->add_option("--iterations", run_iters,
                  "Override the per-campaign iteration count");

  auto* murq = app.add_subcommand("murq", "Run the retraining study");
  std::string murq_config;
  std::optional<std::uint64_t> murq_seed;
  std::optional<std::string> murq_out;
  murq->add_option("--config", murq_config, "Study configuration JSON")
      ->required();
  murq->add_option("--seed", murq_seed, "Override the study seed");
  murq->add_option("--out", murq_out, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*validate) return cmd_validate(grammar_file);
    if (*gen)
      return cmd_gen(gen_grammar, gen_count, gen_seed, gen_depth, gen_tree,
                     gen_json);
    if (*perturb)
      return cmd_perturb(pert_grammar, pert_seed, pert_depth, pert_strict);
    if (*run) return cmd_run(run_config, run_seed, run_out, run_iters);
    if (*murq) return cmd_murq(murq_config, murq_seed, murq_out);
  } catch (const gramdiff::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const gramdiff::ParseError& e) {
    std::fprintf(stderr, "grammar error: %s\n", e.what());
    return kExitGrammar;
  } catch (const gramdiff::GrammarError& e) {
    std::fprintf(stderr, "grammar error: %s\n", e.what());
    return kExitGrammar;
  } catch (const gramdiff::ClassifierError& e) {
    std::fprintf(stderr, "classifier error: %s\n", e.what());
    return kExitTransport;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
