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

#ifndef MIXTILE_VERSION_H_
#define MIXTILE_VERSION_H_

namespace mixtile {

inline constexpr char kToolVersion[] = "0.1.0";
// Bumped on any breaking change to a cache, plan or CSV layout.
inline constexpr int kSchemaVersion = 1;

}  // namespace mixtile

#endif  // MIXTILE_VERSION_H_
