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

#include "mixtile/hardware.h"

#include <array>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mixtile/error.h"

namespace mixtile {
namespace {

using Json = nlohmann::json;

struct IntField {
  const char* key;
  std::int64_t HardwareDescriptor::*member;
};

constexpr std::array<IntField, 9> kIntFields = {{
    {"num_cores", &HardwareDescriptor::num_cores},
    {"regs_per_core", &HardwareDescriptor::regs_per_core},
    {"smem_per_core_bytes", &HardwareDescriptor::smem_per_core_bytes},
    {"global_bw_bytes_per_s", &HardwareDescriptor::global_bw_bytes_per_s},
    {"shared_bw_bytes_per_s", &HardwareDescriptor::shared_bw_bytes_per_s},
    {"peak_flops", &HardwareDescriptor::peak_flops},
    {"default_active_blocks", &HardwareDescriptor::default_active_blocks},
    {"active_blocks_per_core", &HardwareDescriptor::active_blocks_per_core},
    {"align_elems", &HardwareDescriptor::align_elems},
}};

bool is_known_key(const std::string& key) {
  if (key == "name") return true;
  for (const IntField& f : kIntFields) {
    if (key == f.key) return true;
  }
  return false;
}

}  // namespace

void validate(const HardwareDescriptor& hw) {
  if (hw.name.empty()) throw_validation("name", "must be a non-empty string");
  for (const IntField& f : kIntFields) {
    if (hw.*f.member <= 0) throw_validation(f.key, "must be strictly positive");
  }
  if ((hw.align_elems & (hw.align_elems - 1)) != 0) {
    throw_validation("align_elems", "must be a power of two");
  }
}

HardwareDescriptor load_hardware_descriptor(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw_parse(std::string("hardware descriptor: ") + e.what());
  }
  if (!doc.is_object()) throw_parse("hardware descriptor must be an object");

  for (const auto& [key, value] : doc.items()) {
    if (!is_known_key(key)) throw_validation(key, "unknown field");
  }

  HardwareDescriptor hw;
  if (!doc.contains("name")) throw_validation("name", "missing field");
  if (!doc["name"].is_string()) throw_parse("must be a string", "name");
  hw.name = doc["name"].get<std::string>();
  for (const IntField& f : kIntFields) {
    if (!doc.contains(f.key)) throw_validation(f.key, "missing field");
    const Json& v = doc[f.key];
    if (!v.is_number_integer()) {
      throw_parse(std::string(f.key) + ": must be an integer", f.key);
    }
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      throw_validation(f.key, "out of range");
    }
    hw.*f.member = v.get<std::int64_t>();
  }
  validate(hw);
  return hw;
}

HardwareDescriptor load_hardware_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kParse,
                "cannot open hardware descriptor '" + path.string() + "'",
                path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_hardware_descriptor(buffer.str());
}

std::string serialize(const HardwareDescriptor& hw) {
  Json doc = Json::object();
  doc["name"] = hw.name;
  for (const IntField& f : kIntFields) doc[f.key] = hw.*f.member;
  return doc.dump(2) + "\n";
}

}  // namespace mixtile
