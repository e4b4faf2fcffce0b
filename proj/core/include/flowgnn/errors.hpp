/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace flowgnn {

/// Base of every error raised by the library. `kind()` is a stable machine-readable tag.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

class ArgumentError : public Error {
  public:
    explicit ArgumentError(const std::string& what) : Error("argument", what) {}
};

class NumericError : public Error {
  public:
    explicit NumericError(const std::string& what) : Error("numeric", what) {}
};

class StateError : public Error {
  public:
    explicit StateError(const std::string& what) : Error("state", what) {}
};

class RoutingError : public Error {
  public:
    explicit RoutingError(const std::string& what) : Error("routing", what) {}
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class ProtocolError : public Error {
  public:
    explicit ProtocolError(const std::string& what) : Error("protocol", what) {}
};

class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line) : Error("parse", what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace flowgnn
