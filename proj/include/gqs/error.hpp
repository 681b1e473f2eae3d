// Copyright 2026 The gqsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exception hierarchy shared by every gqsearch module.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gqs {

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A dense representation was requested beyond the configured cap.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Operand dimensions do not agree.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// An input violates a documented precondition or invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// An eigen-solver failed to converge; carries the residual norm.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string &what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// A sum that diverges because an eigenphase is exactly resonant.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string &what, std::size_t index)
        : Error(what + " (eigenvector " + std::to_string(index) + ")"),
          index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

  private:
    std::size_t index_;
};

/// Malformed experiment configuration. Line is 0 when not file-based.
class ConfigError : public Error {
  public:
    ConfigError(const std::string &what, std::size_t line = 0,
                std::string key = {})
        : Error(format(what, line, key)), line_(line), key_(std::move(key)) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string &key() const noexcept { return key_; }

  private:
    static std::string format(const std::string &what, std::size_t line,
                              const std::string &key) {
        std::string out = "config error";
        if (line != 0) {
            out += " at line " + std::to_string(line);
        }
        if (!key.empty()) {
            out += " [" + key + "]";
        }
        return out + ": " + what;
    }
    std::size_t line_;
    std::string key_;
};

} // namespace gqs
