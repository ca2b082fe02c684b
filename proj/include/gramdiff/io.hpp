// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON/CSV serialization and configuration: traces, reports, models,
// derivation trees, and the classifier factory used by config files.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gramdiff/classifiers.hpp"
#include "gramdiff/http_classifier.hpp"
#include "gramdiff/retrain.hpp"
#include "gramdiff/search.hpp"

namespace gramdiff {

using Json = nlohmann::json;

/// Raised for malformed or incomplete configuration input.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& require(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError("missing required key \"" + key + "\"");
  return j.at(key);
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("key \"" + key + "\" has the wrong type");
  }
}

inline double clamp_threshold(double j) {
  return j < 0.0 ? 0.0 : (j > 1.0 ? 1.0 : j);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Derivation trees

inline Json tree_to_json(const DerivationTree& t) {
  Json j;
  j["symbol"] = t.symbol.text;
  j["alt_index"] = t.alt_index;
  Json children = Json::array();
  for (const DerivationTree& c : t.children) children.push_back(tree_to_json(c));
  j["children"] = std::move(children);
  return j;
}

// ---------------------------------------------------------------------------
// Traces and reports

inline Json record_to_json(const IterationRecord& r) {
  Json j;
  j["index"] = r.index;
  j["sentence"] = r.sentence;
  j["is_error"] = r.is_error;
  j["jaccard_value"] = r.jaccard_value;
  j["transition"] = r.transition;
  j["accepted"] = r.accepted;
  j["regenerated"] = r.regenerated;
  return j;
}

/// One compact JSON object per iteration, one line each; keys are sorted by
/// the JSON library, so identical campaigns serialize byte-identically.
inline std::string trace_to_jsonl(const CampaignReport& rep) {
  std::string out;
  for (const IterationRecord& r : rep.trace) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

inline Json report_to_json(const CampaignReport& rep) {
  Json config;
  config["name"] = rep.name;
  config["strategy"] = rep.strategy;
  config["grammar"] = rep.grammar_name;
  config["f1"] = rep.f1_id;
  config["f2"] = rep.f2_id;
  config["threshold"] = rep.threshold;
  config["iterations"] = rep.iterations;
  config["seed"] = rep.seed;
  config["initial_mode"] = rep.initial_mode;
  config["max_depth"] = rep.max_depth;
  config["strict_perturb"] = rep.strict_perturb;

  Json j;
  j["config"] = std::move(config);
  j["n_inputs"] = rep.n_inputs;
  j["n_err"] = rep.n_err;
  j["err_r"] = rep.err_r;
  if (rep.iterations_to_first_error)
    j["iterations_to_first_error"] = *rep.iterations_to_first_error;
  else
    j["iterations_to_first_error"] = nullptr;
  j["partial"] = rep.partial;
  if (rep.partial)
    j["transport_error"] = rep.transport_error;
  else
    j["transport_error"] = nullptr;
  return j;
}

// ---------------------------------------------------------------------------
// Model persistence

inline Json model_to_json(const NaiveBayesModel& m) {
  Json j;
  j["type"] = "naive-bayes";
  j["alpha"] = m.alpha;
  j["priors"] = m.priors;
  j["log_likelihood"] = m.log_likelihood;
  j["log_oov"] = m.log_oov;
  j["vocabulary"] = std::vector<std::string>(m.vocabulary.begin(),
                                             m.vocabulary.end());
  return j;
}

inline NaiveBayesModel nb_from_json(const Json& j) {
  if (detail::get_or<std::string>(j, "type", "") != "naive-bayes")
    throw ConfigError("model type is not \"naive-bayes\"");
  NaiveBayesModel m;
  m.alpha = detail::require(j, "alpha").get<double>();
  m.priors = detail::require(j, "priors")
                 .get<std::map<std::string, double>>();
  m.log_likelihood =
      detail::require(j, "log_likelihood")
          .get<std::map<std::string, std::map<std::string, double>>>();
  m.log_oov = detail::require(j, "log_oov")
                  .get<std::map<std::string, double>>();
  for (const auto& v : detail::require(j, "vocabulary"))
    m.vocabulary.insert(v.get<std::string>());
  return m;
}

inline Json model_to_json(const PerceptronModel& m) {
  Json j;
  j["type"] = "perceptron";
  j["epochs"] = m.epochs;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  return j;
}

inline PerceptronModel perceptron_from_json(const Json& j) {
  if (detail::get_or<std::string>(j, "type", "") != "perceptron")
    throw ConfigError("model type is not \"perceptron\"");
  PerceptronModel m;
  m.epochs = detail::require(j, "epochs").get<int>();
  m.weights = detail::require(j, "weights")
                  .get<std::map<std::string, std::map<std::string, double>>>();
  m.bias = detail::require(j, "bias").get<std::map<std::string, double>>();
  return m;
}

// ---------------------------------------------------------------------------
// File helpers

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json load_json_file(const std::filesystem::path& path) {
  Json j = Json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded())
    throw ConfigError("invalid JSON in " + path.string());
  return j;
}

// ---------------------------------------------------------------------------
// Classifier factory
//
// Spec object: {"kind": ..., "id": ..., kind-specific keys}. Kinds:
//   nb, perceptron        model_file (path) or model (inline object)
//   http                  url, path, timeout_ms, retries, backoff_base_ms,
//                         top_k
//   fixed                 labels: [...]
//   keyword               token, hit: [...], miss: [...]
//   token-set             (no extra keys)
//   token-set-synonym     synonyms: {from: to}, divergence_token
inline ClassifierHandle classifier_from_json(
    const Json& spec, const std::filesystem::path& base_dir = {}) {
  const std::string kind = detail::require(spec, "kind").get<std::string>();
  auto label_set = [](const Json& arr) {
    LabelSet out;
    for (const auto& l : arr) out.insert(l.get<std::string>());
    return out;
  };
  auto model_json = [&](const Json& s) {
    if (s.contains("model")) return s.at("model");
    std::filesystem::path file(
        detail::require(s, "model_file").get<std::string>());
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    return load_json_file(file);
  };

  if (kind == "nb") {
    return std::make_shared<NaiveBayesClassifier>(
        detail::get_or<std::string>(spec, "id", "nb"),
        nb_from_json(model_json(spec)));
  }
  if (kind == "perceptron") {
    return std::make_shared<PerceptronClassifier>(
        detail::get_or<std::string>(spec, "id", "perceptron"),
        perceptron_from_json(model_json(spec)));
  }
  if (kind == "http") {
    HttpClassifierConfig cfg;
    cfg.base_url = detail::require(spec, "url").get<std::string>();
    cfg.path = detail::get_or<std::string>(spec, "path", cfg.path);
    cfg.id = detail::get_or<std::string>(spec, "id", cfg.id);
    cfg.timeout_ms = detail::get_or<int>(spec, "timeout_ms", cfg.timeout_ms);
    cfg.retries = detail::get_or<int>(spec, "retries", cfg.retries);
    cfg.backoff_base_ms =
        detail::get_or<int>(spec, "backoff_base_ms", cfg.backoff_base_ms);
    cfg.top_k = detail::get_or<int>(spec, "top_k", cfg.top_k);
    return std::make_shared<HttpClassifier>(cfg);
  }
  if (kind == "fixed") {
    return std::make_shared<FixedLabelClassifier>(
        detail::get_or<std::string>(spec, "id", "fixed"),
        label_set(detail::require(spec, "labels")));
  }
  if (kind == "keyword") {
    return std::make_shared<KeywordClassifier>(
        detail::get_or<std::string>(spec, "id", "keyword"),
        detail::require(spec, "token").get<std::string>(),
        label_set(detail::require(spec, "hit")),
        label_set(detail::require(spec, "miss")));
  }
  if (kind == "token-set") {
    return std::make_shared<TokenSetClassifier>(
        detail::get_or<std::string>(spec, "id", "token-set"));
  }
  if (kind == "token-set-synonym") {
    std::map<std::string, std::string> synonyms;
    if (spec.contains("synonyms"))
      synonyms = spec.at("synonyms").get<std::map<std::string, std::string>>();
    return std::make_shared<SynonymTokenClassifier>(
        detail::get_or<std::string>(spec, "id", "token-set-synonym"),
        std::move(synonyms),
        detail::get_or<std::string>(spec, "divergence_token", ""));
  }
  throw ConfigError("unknown classifier kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Retraining study serialization

inline Json murq_report_to_json(const RetrainReport& rep) {
  Json j;
  j["iterations"] = rep.iterations;
  j["repetitions"] = rep.repetitions;
  j["seed"] = rep.seed;
  j["threshold"] = rep.threshold;
  j["baseline_accuracy_oracle"] = rep.baseline_accuracy_oracle;
  j["baseline_accuracy_retrained"] = rep.baseline_accuracy_retrained;
  Json rows = Json::array();
  for (const RetrainRow& r : rep.rows) {
    Json row;
    row["percent_added"] = r.fraction * 100.0;
    row["mean_errors"] = r.mean_errors;
    row["accuracy_oracle"] = r.mean_accuracy_oracle;
    row["accuracy_retrained"] = r.mean_accuracy_retrained;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline std::string murq_report_to_csv(const RetrainReport& rep) {
  std::string out = "percent_added,mean_errors,accuracy_oracle,accuracy_retrained\n";
  char line[160];
  for (const RetrainRow& r : rep.rows) {
    std::snprintf(line, sizeof(line), "%.2f,%.4f,%.6f,%.6f\n",
                  r.fraction * 100.0, r.mean_errors, r.mean_accuracy_oracle,
                  r.mean_accuracy_retrained);
    out += line;
  }
  return out;
}

}  // namespace gramdiff
