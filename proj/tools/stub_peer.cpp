/*
 * Copyright 2026 The CLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Reference peer for the line protocol, used by tests and the cost estimate.
//
//   stub_peer fixed        every instance scores [0.3, 0.7]
//   stub_peer badsum       rows sum to 0.9
//   stub_peer reorder      answers with the wrong request id
//   stub_peer sleep MS     like fixed, after sleeping MS milliseconds per batch
//   stub_peer toy          the built-in toy sentiment model
//   stub_peer exit         exits on the first request without answering

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "cle/models.hpp"

using nlohmann::json;

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "fixed";
  const int sleep_ms = mode == "sleep" && argc > 2 ? std::atoi(argv[2]) : 0;
  const auto toy = cle::toy_sentiment_model();

  std::string line;
  while (std::getline(std::cin, line)) {
    const json request = json::parse(line);
    if (mode == "exit") return 0;
    if (sleep_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
    json probs = json::array();
    if (mode == "toy") {
      std::vector<cle::Instance> batch;
      for (const json& doc : request["instances"]) batch.emplace_back(doc.get<std::string>());
      const Eigen::MatrixXd p = toy->predict_proba(batch);
      for (Eigen::Index i = 0; i < p.rows(); ++i) probs.push_back({p(i, 0), p(i, 1)});
    } else {
      const json row = mode == "badsum" ? json{0.3, 0.6} : json{0.3, 0.7};
      for (std::size_t i = 0; i < request["instances"].size(); ++i) probs.push_back(row);
    }
    const auto id = request["id"].get<std::int64_t>() + (mode == "reorder" ? 1 : 0);
    std::cout << json{{"id", id}, {"probs", probs}}.dump() << std::endl;
  }
  return 0;
}
