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

#include "mixtile/error.h"

#include <utility>

namespace mixtile {

Error::Error(ErrorKind kind, std::string message, std::string field)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      field_(std::move(field)) {}

void throw_parse(const std::string& message, const std::string& field) {
  throw Error(ErrorKind::kParse, message, field);
}

void throw_validation(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::kValidation, field + ": " + message, field);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyResult:
      return 1;
    case ErrorKind::kParse:
    case ErrorKind::kValidation:
    case ErrorKind::kCapacity:
      return 2;
    case ErrorKind::kInvariant:
      return 3;
  }
  return 3;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return "parse error";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kCapacity:
      return "capacity error";
    case ErrorKind::kEmptyResult:
      return "empty result";
    case ErrorKind::kInvariant:
      return "invariant violation";
  }
  return "error";
}

}  // namespace mixtile
