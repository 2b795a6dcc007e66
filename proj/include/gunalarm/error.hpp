/* Copyright 2026 The gunalarm Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef GUNALARM_ERROR_HPP_
#define GUNALARM_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gunalarm {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "bad configuration" catch the subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A box with non-positive width/height or non-finite coordinates.
class InvalidGeometryError : public Error {
 public:
  using Error::Error;
};

// Out-of-range thresholds, bad noise parameters, unknown config keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A backend was asked for a frame it does not hold.
class MissingFrameError : public Error {
 public:
  using Error::Error;
};

// Frames fed to the alarm machine out of order.
class SequencingError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Inputs that parse but are inconsistent with each other (id mismatch,
// overlapping scenes, length mismatch).
class InputError : public Error {
 public:
  using Error::Error;
};

// A per-window classifier or other detector backend failed.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Malformed file content. `source` names the file (or "<memory>") and `line`
// is 1-based; line 0 means the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
              what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace gunalarm

#endif  // GUNALARM_ERROR_HPP_
