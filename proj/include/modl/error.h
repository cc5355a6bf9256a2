// Copyright 2026 The modl-cocluster Authors.
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

#ifndef MODL_ERROR_H_
#define MODL_ERROR_H_

#include <stdexcept>
#include <string>

namespace modl {

// Malformed or inconsistent user input (bad TSV line, invalid partition,
// impossible generator parameters). Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, long line = 0)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + what
                            : what),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

// File could not be read or written. Exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// A model does not match the edge counts of the sample it claims to
// describe. Exit code 4.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace modl

#endif  // MODL_ERROR_H_
