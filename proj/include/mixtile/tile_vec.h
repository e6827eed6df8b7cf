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

#ifndef MIXTILE_TILE_VEC_H_
#define MIXTILE_TILE_VEC_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace mixtile {

// Upper bound on loop axes per operator. Candidate sets hold millions of
// tiles, so tile vectors live inline instead of on the heap.
inline constexpr std::size_t kMaxAxes = 8;

// Fixed-capacity vector of tile extents, compared lexicographically.
// Unused slots stay zero so the defaulted comparison is well defined.
class TileVec {
 public:
  TileVec() = default;
  explicit TileVec(std::size_t size) : size_(static_cast<std::uint8_t>(size)) {}
  TileVec(std::initializer_list<std::int64_t> values) {
    for (std::int64_t v : values) push_back(v);
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::int64_t operator[](std::size_t i) const { return data_[i]; }
  void set(std::size_t i, std::int64_t v) {
    data_[i] = static_cast<std::int32_t>(v);
  }
  void push_back(std::int64_t v) {
    data_[size_++] = static_cast<std::int32_t>(v);
  }

  std::span<const std::int32_t> values() const { return {data_.data(), size_}; }

  friend auto operator<=>(const TileVec&, const TileVec&) = default;
  friend bool operator==(const TileVec&, const TileVec&) = default;

 private:
  std::array<std::int32_t, kMaxAxes> data_{};
  std::uint8_t size_ = 0;
};

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

// Rounds x up to a multiple of m.
inline std::int64_t ceil_by(std::int64_t x, std::int64_t m) {
  return ceil_div(x, m) * m;
}

}  // namespace mixtile

#endif  // MIXTILE_TILE_VEC_H_
