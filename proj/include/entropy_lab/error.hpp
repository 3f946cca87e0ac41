// Copyright 2026 The Entropy Lab Authors.
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

#ifndef ENTROPY_LAB_ERROR_HPP_
#define ENTROPY_LAB_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entropy_lab {

// A caller passed a value outside an operation's domain (dimension
// mismatch, action out of range, non-finite number).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed binary or text input. Carries the offending field and the byte
// offset (or line number for text formats) where parsing stopped.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string field, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " (field '" + field + "' at offset " +
                           std::to_string(offset) + ")"),
        field_(std::move(field)),
        offset_(offset) {}

  const std::string& field() const { return field_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string field_;
  std::size_t offset_;
};

// Invalid run configuration. `path` is the JSON path of the bad field,
// e.g. "agents[1].lr".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_ERROR_HPP_
