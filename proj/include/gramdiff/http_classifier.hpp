// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// HTTP adapter for remote text classifiers.
//
// Request:  POST <path> with body {"text": "<sentence>"}.
// Response: {"labels": [...]} ranked best-first, truncated to top_k here,
//           or {"score": s, "magnitude": m} bucketed into one sentiment
//           label with -1 < s < 1 and m >= 0.

#pragma once

#include <chrono>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gramdiff/oracle.hpp"

namespace gramdiff {

struct HttpClassifierConfig {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  std::string path = "/classify";
  std::string id = "http";
  int timeout_ms = 2000;
  int retries = 3;           // attempts beyond the first
  int backoff_base_ms = 100; // doubles per attempt, capped at 2s
  int top_k = 5;             // rank truncation of label responses
};

class HttpClassifier : public Classifier {
 public:
  explicit HttpClassifier(HttpClassifierConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty())
      throw std::invalid_argument("http classifier needs a base_url");
    if (cfg_.top_k <= 0)
      throw std::invalid_argument("top_k must be positive");
  }

  std::string id() const override { return cfg_.id; }

  LabelSet classify(const Sentence& s) const override {
    nlohmann::json body;
    body["text"] = s.text();
    const std::string payload = body.dump();

    std::string last_failure;
    for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
      if (attempt > 0) {
        int delay = cfg_.backoff_base_ms << (attempt - 1);
        std::this_thread::sleep_for(
            std::chrono::milliseconds(std::min(delay, 2000)));
      }
      httplib::Client client(cfg_.base_url);
      client.set_connection_timeout(0, cfg_.timeout_ms * 1000);
      client.set_read_timeout(0, cfg_.timeout_ms * 1000);

      httplib::Result res =
          client.Post(cfg_.path, payload, "application/json");
      if (!res) {
        last_failure = "no response (" + httplib::to_string(res.error()) + ")";
        continue;  // transport problem: retry
      }
      if (res->status >= 500) {
        last_failure = "HTTP " + std::to_string(res->status);
        continue;  // server-side failure: retry
      }
      if (res->status != 200)
        throw TransportError("classifier " + cfg_.id + ": POST " +
                             cfg_.base_url + cfg_.path + " returned HTTP " +
                             std::to_string(res->status));
      return decode(res->body);
    }
    throw TransportError("classifier " + cfg_.id + ": POST " + cfg_.base_url +
                         cfg_.path + " failed after " +
                         std::to_string(cfg_.retries + 1) + " attempts: " +
                         last_failure);
  }

 private:
  LabelSet decode(const std::string& body) const {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded())
      throw MalformedResponseError("classifier " + cfg_.id +
                                       ": response is not valid JSON",
                                   body);
    if (j.is_object() && j.contains("labels")) {
      if (!j["labels"].is_array())
        throw MalformedResponseError(
            "classifier " + cfg_.id + ": \"labels\" is not an array", body);
      LabelSet out;
      int taken = 0;
      for (const auto& item : j["labels"]) {
        if (!item.is_string())
          throw MalformedResponseError(
              "classifier " + cfg_.id + ": non-string label", body);
        if (taken++ == cfg_.top_k) break;
        out.insert(item.get<std::string>());
      }
      return out;
    }
    if (j.is_object() && j.contains("score") && j.contains("magnitude")) {
      if (!j["score"].is_number() || !j["magnitude"].is_number())
        throw MalformedResponseError(
            "classifier " + cfg_.id + ": non-numeric score or magnitude",
            body);
      ScoredOutput scored{j["score"].get<double>(),
                          j["magnitude"].get<double>()};
      if (scored.score <= -1.0 || scored.score >= 1.0 ||
          scored.magnitude < 0.0)
        throw MalformedResponseError(
            "classifier " + cfg_.id + ": score or magnitude out of range",
            body);
      return bucket_sentiment(scored);
    }
    throw MalformedResponseError(
        "classifier " + cfg_.id +
            ": expected a \"labels\" array or \"score\"/\"magnitude\" pair",
        body);
  }

  HttpClassifierConfig cfg_;
};

}  // namespace gramdiff
