// Copyright 2026 The mixtile Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXTILE_ERROR_H_
#define MIXTILE_ERROR_H_

#include <stdexcept>
#include <string>

namespace mixtile {

enum class ErrorKind {
  kParse,        // malformed document
  kValidation,   // well-formed input violating a domain invariant
  kCapacity,     // no tile fits the target's shared memory
  kEmptyResult,  // a stage produced nothing to hand to the next one
  kInvariant,    // internal consistency check failed
};

// Single exception type for the library. `field()` names the offending
// input field or constraint when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string field = {});

  ErrorKind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

[[noreturn]] void throw_parse(const std::string& message,
                              const std::string& field = {});
[[noreturn]] void throw_validation(const std::string& field,
                                   const std::string& message);

// Process exit code for an error kind: 1 empty result, 2 input error,
// 3 internal invariant violation.
int exit_code_for(ErrorKind kind);

const char* to_string(ErrorKind kind);

}  // namespace mixtile

#endif  // MIXTILE_ERROR_H_
