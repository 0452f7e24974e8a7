/*
 * Copyright 2026 The gshap authors.
 *
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

#include "gshap/external_model.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <mutex>
#include <thread>
#include <vector>

#include "gshap/error.hpp"
#include "gshap/text.hpp"

namespace gshap {

namespace {

constexpr int kReadTimeoutMs = 60000;

std::once_flag g_sigpipe_once;

// A write into a dead child's pipe must come back as EPIPE, not kill the
// whole process.
void IgnoreSigpipe() {
  std::call_once(g_sigpipe_once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

bool ParsesAsFloat(std::string_view field) {
  const std::string_view trimmed = TrimWhitespace(field);
  if (trimmed.empty()) return false;
  double value = 0.0;
  const auto result =
      std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  return result.ec == std::errc() && result.ptr == trimmed.data() + trimmed.size();
}

class Child {
 public:
  explicit Child(const std::string& command) {
    IgnoreSigpipe();
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 ||
        ::pipe(err_pipe) != 0) {
      throw ComputeError("cannot create pipes for external model: " +
                         std::string(std::strerror(errno)));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      throw ComputeError("cannot fork external model: " +
                         std::string(std::strerror(errno)));
    }
    if (pid_ == 0) {
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::dup2(err_pipe[1], STDERR_FILENO);
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      ::close(out_pipe[0]);
      ::close(out_pipe[1]);
      ::close(err_pipe[0]);
      ::close(err_pipe[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(),
              static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    in_fd_ = in_pipe[1];
    out_fd_ = out_pipe[0];
    err_fd_ = err_pipe[0];
    ::fcntl(err_fd_, F_SETFL, O_NONBLOCK);
  }

  ~Child() { Close(); }

  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  void WriteRequest(const std::string& request) {
    std::size_t written = 0;
    while (written < request.size()) {
      const ssize_t n =
          ::write(in_fd_, request.data() + written, request.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        Fail("request write failed: " + std::string(std::strerror(errno)));
      }
      written += static_cast<std::size_t>(n);
    }
  }

  std::string ReadLine() {
    for (;;) {
      const std::size_t newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      struct pollfd pfd = {out_fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, kReadTimeoutMs);
      if (ready == 0) Fail("timed out waiting for a response line");
      if (ready < 0) {
        if (errno == EINTR) continue;
        Fail("response poll failed: " + std::string(std::strerror(errno)));
      }
      char chunk[4096];
      const ssize_t n = ::read(out_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        Fail("response read failed: " + std::string(std::strerror(errno)));
      }
      if (n == 0) Fail("closed its output mid-response");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  // Wraps a protocol failure with everything known about the child: the
  // message, its exit status if it already died, and captured stderr.
  [[noreturn]] void Fail(const std::string& message) {
    std::string detail = "external model " + message;
    const std::string diagnostics = DrainStderr();
    int status = 0;
    if (pid_ > 0 && ReapWithGrace(&status) == pid_) {
      if (WIFEXITED(status)) {
        detail += " (exit status " + std::to_string(WEXITSTATUS(status)) + ")";
      } else if (WIFSIGNALED(status)) {
        detail += " (killed by signal " + std::to_string(WTERMSIG(status)) +
                  ")";
      }
      pid_ = -1;
    }
    if (!diagnostics.empty()) {
      detail += "; stderr: " + diagnostics;
    }
    Close();
    throw ComputeError(detail);
  }

  // Nonblocking reap with a short grace period: a child whose pipe just
  // hit EOF can lag its exit status by a scheduling quantum, while a child
  // that is still running must not block the error path.
  pid_t ReapWithGrace(int* status) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const pid_t reaped = ::waitpid(pid_, status, WNOHANG);
      if (reaped != 0) return reaped;
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    return 0;
  }

  std::string DrainStderr() {
    std::string out;
    char chunk[4096];
    for (;;) {
      const ssize_t n = ::read(err_fd_, chunk, sizeof(chunk));
      if (n <= 0) break;
      out.append(chunk, static_cast<std::size_t>(n));
      if (out.size() > 8192) break;
    }
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) {
      out.pop_back();
    }
    return out;
  }

  void Close() {
    if (in_fd_ >= 0) ::close(in_fd_);
    if (out_fd_ >= 0) ::close(out_fd_);
    if (err_fd_ >= 0) ::close(err_fd_);
    in_fd_ = out_fd_ = err_fd_ = -1;
    if (pid_ > 0) {
      int status = 0;
      ::waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  int err_fd_ = -1;
  std::string buffer_;
};

}  // namespace

// Children are spawned lazily up to a cap and handed out one per
// concurrent Predict. A child that saw a protocol error is discarded
// rather than returned, since its stream state is unknown.
struct ExternalModel::Pool {
  std::string command;
  std::size_t cap = 1;

  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::unique_ptr<Child>> idle;
  std::size_t live = 0;

  std::unique_ptr<Child> Acquire() {
    std::unique_lock<std::mutex> lock(mu);
    for (;;) {
      if (!idle.empty()) {
        std::unique_ptr<Child> child = std::move(idle.back());
        idle.pop_back();
        return child;
      }
      if (live < cap) {
        ++live;
        lock.unlock();
        try {
          return std::make_unique<Child>(command);
        } catch (...) {
          lock.lock();
          --live;
          cv.notify_one();
          throw;
        }
      }
      cv.wait(lock);
    }
  }

  void Release(std::unique_ptr<Child> child) {
    const std::lock_guard<std::mutex> lock(mu);
    idle.push_back(std::move(child));
    cv.notify_one();
  }

  void Discard() {
    const std::lock_guard<std::mutex> lock(mu);
    --live;
    cv.notify_one();
  }
};

ExternalModel::ExternalModel(std::string command, bool concurrent_safe)
    : command_(std::move(command)), concurrent_safe_(concurrent_safe),
      pool_(std::make_shared<Pool>()) {
  if (command_.empty()) {
    throw ConfigError("external model command is empty");
  }
  pool_->command = command_;
  if (concurrent_safe_) {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    pool_->cap = hw;
  }
}

ExternalModel::~ExternalModel() = default;

bool ExternalModel::ConcurrentSafe() const { return concurrent_safe_; }

ModelOutput ExternalModel::Predict(const FeatureMatrix& features) const {
  std::string request;
  const std::vector<std::string>& names = features.ColumnNames();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) request += ',';
    request += names[c];
  }
  request += '\n';
  for (std::size_t r = 0; r < features.Rows(); ++r) {
    for (std::size_t c = 0; c < features.Cols(); ++c) {
      if (c) request += ',';
      request += FormatDouble(features.At(r, c));
    }
    request += '\n';
  }
  request += '\n';

  std::unique_ptr<Child> child = pool_->Acquire();
  const std::size_t n = features.Rows();
  try {
    child->WriteRequest(request);

    const std::string first = child->ReadLine();
    const std::vector<std::string> head = SplitCsvLine(first);
    ModelOutput output = [&] {
      if (head.size() == 1 && ParsesAsFloat(head[0])) {
        std::vector<double> values(n);
        values[0] = ParseDouble(head[0], "external model response row 1");
        for (std::size_t r = 1; r < n; ++r) {
          const std::string line = child->ReadLine();
          const std::vector<std::string> fields = SplitCsvLine(line);
          if (fields.size() != 1) {
            throw ComputeError("external model response row " +
                               std::to_string(r + 1) + " has " +
                               std::to_string(fields.size()) +
                               " fields, expected 1");
          }
          values[r] = ParseDouble(fields[0], "external model response row " +
                                                 std::to_string(r + 1));
        }
        return ModelOutput::Scalars(std::move(values));
      }
      std::vector<std::string> class_names;
      class_names.reserve(head.size());
      for (const std::string& f : head) {
        class_names.push_back(std::string(TrimWhitespace(f)));
      }
      std::vector<double> values(n * class_names.size());
      for (std::size_t r = 0; r < n; ++r) {
        const std::string line = child->ReadLine();
        const std::vector<std::string> fields = SplitCsvLine(line);
        if (fields.size() != class_names.size()) {
          throw ComputeError("external model probability row " +
                             std::to_string(r + 1) + " has " +
                             std::to_string(fields.size()) +
                             " fields, expected " +
                             std::to_string(class_names.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
          values[r * class_names.size() + c] = ParseDouble(
              fields[c], "external model probability row " +
                             std::to_string(r + 1));
        }
      }
      return ModelOutput::Probabilities(std::move(values), n,
                                        std::move(class_names));
    }();
    pool_->Release(std::move(child));
    return output;
  } catch (const DataError& e) {
    // Unparseable response fields come out of the number parser as data
    // errors; at this boundary they are the adapter's failure to get a
    // well-formed response.
    child.reset();
    pool_->Discard();
    throw ComputeError(e.what());
  } catch (const Error&) {
    child.reset();
    pool_->Discard();
    throw;
  } catch (const std::exception& e) {
    child.reset();
    pool_->Discard();
    throw ComputeError(std::string("external model: ") + e.what());
  }
}

}  // namespace gshap
