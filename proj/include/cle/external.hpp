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

#ifndef CLE_EXTERNAL_HPP_
#define CLE_EXTERNAL_HPP_

// Black boxes living outside the process, reached over a line-delimited JSON
// protocol:
//   request:  {"id": <int>, "instances": [...]}\n
//   response: {"id": <int>, "probs": [[...], ...]}\n
// Text instances travel as strings, tabular rows as value arrays and images
// as {"ppm_base64": "..."}.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "cle/models.hpp"

namespace cle {

struct ExternalOptions {
  Modality modality = Modality::kText;
  std::vector<std::string> classes;
  std::chrono::milliseconds timeout{60000};  // per batch
  int batch_size = 256;
  int max_in_flight = 4;  // HTTP only
};

nlohmann::json encode_instance(const Instance& instance);
std::string encode_request(std::int64_t id, std::span<const Instance> batch);

// Throws ProtocolError on malformed JSON, a wrong id, a wrong shape, or rows
// that are not probability vectors (tolerance 1e-6).
Eigen::MatrixXd parse_response(std::string_view line, std::int64_t expected_id,
                               std::size_t expected_rows, int classes);

// Spawns `command` under /bin/sh and talks to it over its stdin/stdout.
// Calls are serialized; the peer sees strictly increasing ids.
class SubprocessModel : public BlackBoxModel {
 public:
  SubprocessModel(std::string command, ExternalOptions options);
  ~SubprocessModel() override;
  SubprocessModel(const SubprocessModel&) = delete;
  SubprocessModel& operator=(const SubprocessModel&) = delete;

  Modality modality() const override { return options_.modality; }
  const std::vector<std::string>& classes() const override { return options_.classes; }
  bool reentrant() const override { return false; }
  Eigen::MatrixXd predict_proba(std::span<const Instance> batch) const override;

  std::int64_t batches_sent() const { return next_id_; }

 private:
  void write_line(const std::string& line) const;
  std::string read_line() const;
  void shutdown() noexcept;

  std::string command_;
  ExternalOptions options_;
  int pid_ = -1;
  int to_peer_ = -1;
  int from_peer_ = -1;
  mutable std::string buffer_;
  mutable std::int64_t next_id_ = 0;
  mutable bool broken_ = false;
  mutable std::mutex mutex_;
};

// POSTs each batch as one request line to `url` (http://host[:port]/path).
// Up to max_in_flight batches may be outstanding at once.
class HttpModel : public BlackBoxModel {
 public:
  HttpModel(std::string url, ExternalOptions options);

  Modality modality() const override { return options_.modality; }
  const std::vector<std::string>& classes() const override { return options_.classes; }
  bool reentrant() const override { return true; }
  Eigen::MatrixXd predict_proba(std::span<const Instance> batch) const override;

  std::int64_t batches_sent() const { return next_id_.load(); }

 private:
  std::string host_;
  int port_ = 80;
  std::string path_;
  ExternalOptions options_;
  mutable std::atomic<std::int64_t> next_id_{0};
  mutable std::unique_ptr<std::counting_semaphore<>> slots_;
};

std::shared_ptr<SubprocessModel> external_subprocess_model(std::string command,
                                                           ExternalOptions options);
std::shared_ptr<HttpModel> external_http_model(std::string url, ExternalOptions options);

}  // namespace cle

#endif  // CLE_EXTERNAL_HPP_
