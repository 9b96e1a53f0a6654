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

#include "cle/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <regex>
#include <thread>

#include <httplib.h>

#include "cle/error.hpp"
#include "cle/image.hpp"

namespace cle {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::vector<std::span<const Instance>> chunks(std::span<const Instance> batch, int size) {
  std::vector<std::span<const Instance>> out;
  for (std::size_t begin = 0; begin < batch.size(); begin += static_cast<std::size_t>(size)) {
    out.push_back(batch.subspan(begin, std::min<std::size_t>(size, batch.size() - begin)));
  }
  return out;
}

}  // namespace

json encode_instance(const Instance& instance) {
  if (const auto* text = std::get_if<std::string>(&instance)) return *text;
  if (const auto* row = std::get_if<TabularRow>(&instance)) {
    json values = json::array();
    for (const TabularValue& v : row->values) {
      if (const auto* d = std::get_if<double>(&v)) {
        values.push_back(*d);
      } else {
        values.push_back(std::get<std::string>(v));
      }
    }
    return values;
  }
  return json{{"ppm_base64", base64_encode(encode_ppm(std::get<Image>(instance)))}};
}

std::string encode_request(std::int64_t id, std::span<const Instance> batch) {
  json instances = json::array();
  for (const Instance& instance : batch) instances.push_back(encode_instance(instance));
  return json{{"id", id}, {"instances", std::move(instances)}}.dump() + "\n";
}

Eigen::MatrixXd parse_response(std::string_view line, std::int64_t expected_id,
                               std::size_t expected_rows, int classes) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocolError, std::string("unparseable response: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_number_integer() ||
      !doc.contains("probs") || !doc["probs"].is_array()) {
    throw Error(ErrorCode::kProtocolError, "response lacks an integer id or a probs array");
  }
  const auto id = doc["id"].get<std::int64_t>();
  if (id != expected_id) {
    throw Error(ErrorCode::kProtocolError, "response id " + std::to_string(id) + " does not match request " +
                                               std::to_string(expected_id));
  }
  const json& probs = doc["probs"];
  if (probs.size() != expected_rows) {
    throw Error(ErrorCode::kProtocolError, "response has " + std::to_string(probs.size()) +
                                               " rows, expected " + std::to_string(expected_rows));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(expected_rows), classes);
  for (std::size_t i = 0; i < expected_rows; ++i) {
    const json& row = probs[i];
    if (!row.is_array() || static_cast<int>(row.size()) != classes) {
      throw Error(ErrorCode::kProtocolError, "probability row has the wrong class count");
    }
    double sum = 0;
    for (int c = 0; c < classes; ++c) {
      if (!row[c].is_number()) throw Error(ErrorCode::kProtocolError, "non-numeric probability");
      const double p = row[c].get<double>();
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw Error(ErrorCode::kProtocolError, "probability outside [0, 1]");
      }
      out(static_cast<Eigen::Index>(i), c) = p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::kProtocolError, "probabilities sum to " + std::to_string(sum));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subprocess transport
// ---------------------------------------------------------------------------

SubprocessModel::SubprocessModel(std::string command, ExternalOptions options)
    : command_(std::move(command)), options_(std::move(options)) {
  if (options_.classes.empty()) throw Error(ErrorCode::kConfigError, "external model needs classes");
  if (options_.batch_size < 1) throw Error(ErrorCode::kConfigError, "batch size must be positive");
  ignore_sigpipe();
  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0) throw Error(ErrorCode::kIoError, "pipe failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::kIoError, "pipe failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorCode::kIoError, "fork failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
  ::fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
  pid_ = pid;
  to_peer_ = in_pipe[1];
  from_peer_ = out_pipe[0];
}

SubprocessModel::~SubprocessModel() { shutdown(); }

void SubprocessModel::shutdown() noexcept {
  if (to_peer_ >= 0) ::close(to_peer_);
  to_peer_ = -1;
  if (pid_ > 0) {
    // Give the peer a moment to exit on EOF before forcing it.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
        pid_ = -1;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
  }
  if (from_peer_ >= 0) ::close(from_peer_);
  from_peer_ = -1;
}

void SubprocessModel::write_line(const std::string& line) const {
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(to_peer_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      throw Error(ErrorCode::kPeerExit, std::string("peer closed its input: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

std::string SubprocessModel::read_line() const {
  const auto deadline = Clock::now() + options_.timeout;
  char chunk[65536];
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) {
      broken_ = true;
      throw Error(ErrorCode::kTimeout, "peer did not answer within the timeout");
    }
    pollfd fd{from_peer_, POLLIN, 0};
    const int ready = ::poll(&fd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIoError, "poll failed");
    }
    if (ready == 0) continue;
    const ssize_t n = ::read(from_peer_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      throw Error(ErrorCode::kPeerExit, "reading from peer failed");
    }
    if (n == 0) {
      broken_ = true;
      throw Error(ErrorCode::kPeerExit, "peer exited");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Eigen::MatrixXd SubprocessModel::predict_proba(std::span<const Instance> batch) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (broken_) throw Error(ErrorCode::kPeerExit, "peer connection is no longer usable");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(batch.size()), class_count());
  Eigen::Index row = 0;
  for (const auto part : chunks(batch, options_.batch_size)) {
    const std::int64_t id = next_id_++;
    write_line(encode_request(id, part));
    const std::string line = read_line();
    try {
      out.middleRows(row, static_cast<Eigen::Index>(part.size())) =
          parse_response(line, id, part.size(), class_count());
    } catch (const Error&) {
      broken_ = true;  // the stream position can no longer be trusted
      throw;
    }
    row += static_cast<Eigen::Index>(part.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTTP transport
// ---------------------------------------------------------------------------

HttpModel::HttpModel(std::string url, ExternalOptions options) : options_(std::move(options)) {
  if (options_.classes.empty()) throw Error(ErrorCode::kConfigError, "external model needs classes");
  if (options_.batch_size < 1) throw Error(ErrorCode::kConfigError, "batch size must be positive");
  static const std::regex pattern(R"(^http://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) {
    throw Error(ErrorCode::kConfigError, "unsupported model URL '" + url + "'");
  }
  host_ = m[1].str();
  if (m[2].matched) port_ = std::stoi(m[2].str());
  path_ = m[3].matched ? m[3].str() : "/";
  slots_ = std::make_unique<std::counting_semaphore<>>(std::max(1, options_.max_in_flight));
}

Eigen::MatrixXd HttpModel::predict_proba(std::span<const Instance> batch) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(batch.size()), class_count());
  Eigen::Index row = 0;
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - seconds);
  for (const auto part : chunks(batch, options_.batch_size)) {
    const std::int64_t id = next_id_++;
    slots_->acquire();
    httplib::Result result;
    {
      httplib::Client client(host_, port_);
      client.set_connection_timeout(seconds.count(), static_cast<time_t>(micros.count()));
      client.set_read_timeout(seconds.count(), static_cast<time_t>(micros.count()));
      client.set_write_timeout(seconds.count(), static_cast<time_t>(micros.count()));
      result = client.Post(path_, encode_request(id, part), "application/json");
    }
    slots_->release();
    if (!result) {
      const auto err = result.error();
      if (err == httplib::Error::Read || err == httplib::Error::Write) {
        throw Error(ErrorCode::kTimeout, "HTTP peer timed out: " + httplib::to_string(err));
      }
      throw Error(ErrorCode::kPeerExit, "HTTP peer unreachable: " + httplib::to_string(err));
    }
    if (result->status != 200) {
      throw Error(ErrorCode::kProtocolError, "HTTP status " + std::to_string(result->status));
    }
    std::string body = result->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    out.middleRows(row, static_cast<Eigen::Index>(part.size())) =
        parse_response(body, id, part.size(), class_count());
    row += static_cast<Eigen::Index>(part.size());
  }
  return out;
}

std::shared_ptr<SubprocessModel> external_subprocess_model(std::string command,
                                                           ExternalOptions options) {
  return std::make_shared<SubprocessModel>(std::move(command), std::move(options));
}

std::shared_ptr<HttpModel> external_http_model(std::string url, ExternalOptions options) {
  return std::make_shared<HttpModel>(std::move(url), std::move(options));
}

}  // namespace cle
