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

#include "mixtile/workload.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "mixtile/error.h"

namespace mixtile {
namespace {

using Json = nlohmann::json;

// Extents are stored as 32-bit tile entries; keep products well inside int64.
constexpr std::int64_t kMaxExtent = std::int64_t{1} << 30;

const char* kind_name(AxisKind kind) {
  return kind == AxisKind::kSpace ? "space" : "reduce";
}

const char* role_name(AccessRole role) {
  return role == AccessRole::kInput ? "input" : "output";
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw_validation(what, "product overflows 64-bit range");
  }
  return out;
}

std::int64_t require_int(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw_parse(field + ": must be an integer", field);
  return v.get<std::int64_t>();
}

const std::string& require_string(const Json& v, const std::string& field) {
  if (!v.is_string()) throw_parse(field + ": must be a string", field);
  return v.get_ref<const std::string&>();
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = std::any_of(known.begin(), known.end(),
                          [&](const char* k) { return key == k; });
    if (!ok) throw_validation(where + key, "unknown field");
  }
}

}  // namespace

AxisSpec AxisSpec::fixed(std::string name, AxisKind kind, std::int64_t extent) {
  return AxisSpec{std::move(name), kind, false, extent, extent};
}

AxisSpec AxisSpec::ranged(std::string name, AxisKind kind, std::int64_t lo,
                          std::int64_t hi) {
  return AxisSpec{std::move(name), kind, true, lo, hi};
}

OperatorSpec OperatorSpec::create(std::string name, std::vector<AxisSpec> axes,
                                  std::vector<TensorAccess> accesses,
                                  std::int64_t elem_bytes,
                                  std::int64_t flops_per_point,
                                  std::optional<std::string> major_axis) {
  OperatorSpec spec;
  if (name.empty()) throw_validation("name", "must be non-empty");
  if (axes.empty()) throw_validation("axes", "at least one axis required");
  if (axes.size() > kMaxAxes) {
    throw_validation("axes", "at most " + std::to_string(kMaxAxes) +
                                 " axes are supported");
  }
  if (elem_bytes < 1) throw_validation("elem_bytes", "must be positive");
  if (flops_per_point < 1) {
    throw_validation("flops_per_point", "must be positive");
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const AxisSpec& a = axes[i];
    const std::string where = "axes[" + std::to_string(i) + "]";
    if (a.name.empty()) throw_validation(where + ".name", "must be non-empty");
    if (!seen.insert(a.name).second) {
      throw_validation(where + ".name", "duplicate axis '" + a.name + "'");
    }
    if (a.lo < 1) {
      throw_validation(where + (a.dynamic ? ".range" : ".extent"),
                       "extent must be >= 1");
    }
    if (a.lo > a.hi) throw_validation(where + ".range", "lo must be <= hi");
    if (!a.dynamic && a.lo != a.hi) {
      throw_validation(where + ".extent", "fixed axis must have lo == hi");
    }
    if (a.hi > kMaxExtent) throw_validation(where, "extent too large");
  }

  spec.space_ordinal_.assign(axes.size(), -1);
  for (std::size_t i = 0; i < axes.size(); ++i) {
    int idx = static_cast<int>(i);
    if (axes[i].kind == AxisKind::kSpace) {
      spec.space_ordinal_[i] = static_cast<int>(spec.space_axes_.size());
      spec.space_axes_.push_back(idx);
    } else {
      spec.reduce_axes_.push_back(idx);
    }
    if (axes[i].dynamic) spec.dynamic_axes_.push_back(idx);
  }
  if (spec.space_axes_.empty()) {
    throw_validation("axes", "at least one space axis required");
  }
  if (spec.reduce_axes_.empty()) {
    throw_validation("axes", "at least one reduce axis required");
  }
  if (spec.dynamic_axes_.size() > kMaxDynamicAxes) {
    throw_validation("axes", "at most " + std::to_string(kMaxDynamicAxes) +
                                 " dynamic axes are supported");
  }

  auto index_of = [&](const std::string& n) -> int {
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (axes[i].name == n) return static_cast<int>(i);
    }
    return -1;
  };

  int outputs = 0;
  int inputs = 0;
  std::set<std::string> tensors;
  std::vector<std::uint32_t> masks;
  std::uint32_t out_mask = 0;
  int output_access = -1;
  for (std::size_t t = 0; t < accesses.size(); ++t) {
    const TensorAccess& acc = accesses[t];
    const std::string where = "accesses[" + std::to_string(t) + "]";
    if (acc.tensor.empty()) {
      throw_validation(where + ".tensor", "must be non-empty");
    }
    if (!tensors.insert(acc.tensor).second) {
      throw_validation(where + ".tensor",
                       "duplicate tensor '" + acc.tensor + "'");
    }
    if (acc.axes.empty()) throw_validation(where + ".axes", "must be non-empty");
    std::uint32_t mask = 0;
    for (const std::string& n : acc.axes) {
      int idx = index_of(n);
      if (idx < 0) {
        throw_validation(where + ".axes", "unknown axis '" + n + "'");
      }
      if (mask & (1u << idx)) {
        throw_validation(where + ".axes", "axis '" + n + "' repeated");
      }
      mask |= 1u << idx;
    }
    if (acc.role == AccessRole::kOutput) {
      ++outputs;
      output_access = static_cast<int>(t);
      out_mask = mask;
    } else {
      ++inputs;
      masks.push_back(mask);
    }
  }
  if (outputs != 1) {
    throw_validation("accesses", "exactly one output access required, found " +
                                     std::to_string(outputs));
  }
  if (inputs == 0) throw_validation("accesses", "at least one input required");
  const std::string out_where =
      "accesses[" + std::to_string(output_access) + "].axes";
  for (int r : spec.reduce_axes_) {
    if (out_mask & (1u << r)) {
      throw_validation(out_where, "output references reduce axis '" +
                                      axes[r].name + "'");
    }
  }
  for (int s : spec.space_axes_) {
    if (!(out_mask & (1u << s))) {
      throw_validation(out_where, "output must reference space axis '" +
                                      axes[s].name + "'");
    }
  }

  if (major_axis) {
    int idx = index_of(*major_axis);
    if (idx < 0 || axes[idx].kind != AxisKind::kSpace) {
      throw_validation("major_axis", "must name a space axis");
    }
    spec.major_axis_ = idx;
  } else {
    spec.major_axis_ = index_of(accesses[output_access].axes.back());
  }

  spec.name_ = std::move(name);
  spec.axes_ = std::move(axes);
  spec.accesses_ = std::move(accesses);
  spec.elem_bytes_ = elem_bytes;
  spec.flops_per_point_ = flops_per_point;
  spec.input_masks_ = std::move(masks);
  spec.output_mask_ = out_mask;
  return spec;
}

int OperatorSpec::find_axis(std::string_view name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int OperatorSpec::axis_index(std::string_view name) const {
  int idx = find_axis(name);
  if (idx < 0) {
    throw_validation(std::string(name), "no such axis in '" + name_ + "'");
  }
  return idx;
}

WorkloadInstance::WorkloadInstance(OperatorSpec spec, Bindings bindings)
    : spec_(std::move(spec)), bindings_(std::move(bindings)) {
  for (const auto& [name, value] : bindings_) {
    int idx = spec_.find_axis(name);
    if (idx < 0) throw_validation(name, "binding names an unknown axis");
    if (!spec_.axes()[idx].dynamic) {
      throw_validation(name, "binding names a fixed axis");
    }
  }
  extents_.reserve(spec_.num_axes());
  for (const AxisSpec& a : spec_.axes()) {
    if (!a.dynamic) {
      extents_.push_back(a.lo);
      continue;
    }
    auto it = bindings_.find(a.name);
    if (it == bindings_.end()) {
      throw_validation(a.name, "dynamic axis is not bound");
    }
    if (it->second < a.lo || it->second > a.hi) {
      throw_validation(a.name, "binding " + std::to_string(it->second) +
                                   " outside [" + std::to_string(a.lo) + ", " +
                                   std::to_string(a.hi) + "]");
    }
    extents_.push_back(it->second);
  }
  std::int64_t points = spec_.flops_per_point();
  for (std::int64_t e : extents_) points = checked_mul(points, e, "flops");
}

std::int64_t WorkloadInstance::output_elems() const {
  std::int64_t n = 1;
  for (int a : spec_.space_axes()) n *= extents_[a];
  return n;
}

std::int64_t flops(const WorkloadInstance& instance) {
  std::int64_t n = instance.spec().flops_per_point();
  for (std::int64_t e : instance.extents()) n *= e;
  return n;
}

std::int64_t staged_smem_bytes(const OperatorSpec& spec,
                               const TileVec& smem_tile) {
  std::int64_t elems = 0;
  for (std::uint32_t mask : spec.input_masks()) {
    std::int64_t fp = 1;
    for (std::size_t a = 0; a < spec.num_axes(); ++a) {
      if (mask & (1u << a)) fp *= smem_tile[a];
    }
    elems += fp;
  }
  return elems * spec.elem_bytes();
}

DataVolumes data_volumes(const OperatorSpec& spec,
                         std::span<const std::int64_t> extents,
                         const TileVec& reg_tile, const TileVec& smem_tile) {
  std::int64_t blocks = 1;
  std::int64_t output_elems = 1;
  for (int a : spec.space_axes()) {
    blocks *= ceil_div(extents[a], smem_tile[a]);
    output_elems *= extents[a];
  }
  std::int64_t passes = 1;
  for (int a : spec.reduce_axes()) {
    passes *= ceil_div(extents[a], smem_tile[a]);
  }

  std::int64_t staged = 0;
  std::int64_t to_regs = 0;
  for (std::uint32_t mask : spec.input_masks()) {
    std::int64_t fp = 1;
    for (std::size_t a = 0; a < spec.num_axes(); ++a) {
      if (mask & (1u << a)) fp *= smem_tile[a];
    }
    std::int64_t replicas = 1;
    for (int a : spec.space_axes()) {
      if (!(mask & (1u << a))) {
        replicas *= smem_tile[a] / reg_tile[spec.space_ordinal(a)];
      }
    }
    staged += fp;
    to_regs += fp * replicas;
  }

  const std::int64_t eb = spec.elem_bytes();
  DataVolumes v;
  v.data_r = staged * blocks * passes * eb;
  v.data_trans_w = v.data_r;
  v.data_trans_r = to_regs * blocks * passes * eb;
  v.data_w = output_elems * eb;
  return v;
}

DataVolumes data_volumes(const WorkloadInstance& instance,
                         const TileVec& reg_tile, const TileVec& smem_tile) {
  return data_volumes(instance.spec(), instance.extents(), reg_tile,
                      smem_tile);
}

OperatorSpec parse_workload(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw_parse(std::string("workload: ") + e.what());
  }
  if (!doc.is_object()) throw_parse("workload must be an object");
  reject_unknown(doc,
                 {"name", "axes", "accesses", "elem_bytes", "flops_per_point",
                  "major_axis"},
                 "");

  auto need = [&](const char* key) -> const Json& {
    if (!doc.contains(key)) throw_validation(key, "missing field");
    return doc[key];
  };

  std::string name = require_string(need("name"), "name");
  const Json& jaxes = need("axes");
  if (!jaxes.is_array()) throw_parse("axes: must be an array", "axes");
  std::vector<AxisSpec> axes;
  for (std::size_t i = 0; i < jaxes.size(); ++i) {
    const Json& ja = jaxes[i];
    const std::string where = "axes[" + std::to_string(i) + "]";
    if (!ja.is_object()) throw_parse(where + ": must be an object", where);
    reject_unknown(ja, {"name", "kind", "extent", "range"}, where + ".");
    if (!ja.contains("name")) throw_validation(where + ".name", "missing");
    if (!ja.contains("kind")) throw_validation(where + ".kind", "missing");
    std::string aname = require_string(ja["name"], where + ".name");
    const std::string& k = require_string(ja["kind"], where + ".kind");
    AxisKind kind;
    if (k == "space") {
      kind = AxisKind::kSpace;
    } else if (k == "reduce") {
      kind = AxisKind::kReduce;
    } else {
      throw_validation(where + ".kind", "must be 'space' or 'reduce'");
    }
    bool has_extent = ja.contains("extent");
    bool has_range = ja.contains("range");
    if (has_extent == has_range) {
      throw_validation(where, "exactly one of 'extent' or 'range' required");
    }
    if (has_extent) {
      axes.push_back(AxisSpec::fixed(
          aname, kind, require_int(ja["extent"], where + ".extent")));
    } else {
      const Json& r = ja["range"];
      if (!r.is_array() || r.size() != 2) {
        throw_parse(where + ".range: must be [lo, hi]", where + ".range");
      }
      axes.push_back(AxisSpec::ranged(aname, kind,
                                      require_int(r[0], where + ".range"),
                                      require_int(r[1], where + ".range")));
    }
  }

  const Json& jacc = need("accesses");
  if (!jacc.is_array()) throw_parse("accesses: must be an array", "accesses");
  std::vector<TensorAccess> accesses;
  for (std::size_t i = 0; i < jacc.size(); ++i) {
    const Json& ja = jacc[i];
    const std::string where = "accesses[" + std::to_string(i) + "]";
    if (!ja.is_object()) throw_parse(where + ": must be an object", where);
    reject_unknown(ja, {"tensor", "axes", "role"}, where + ".");
    TensorAccess acc;
    if (!ja.contains("tensor")) throw_validation(where + ".tensor", "missing");
    acc.tensor = require_string(ja["tensor"], where + ".tensor");
    if (!ja.contains("axes") || !ja["axes"].is_array()) {
      throw_parse(where + ".axes: must be an array", where + ".axes");
    }
    for (const Json& n : ja["axes"]) {
      acc.axes.push_back(require_string(n, where + ".axes"));
    }
    if (!ja.contains("role")) throw_validation(where + ".role", "missing");
    const std::string& role = require_string(ja["role"], where + ".role");
    if (role == "input") {
      acc.role = AccessRole::kInput;
    } else if (role == "output") {
      acc.role = AccessRole::kOutput;
    } else {
      throw_validation(where + ".role", "must be 'input' or 'output'");
    }
    accesses.push_back(std::move(acc));
  }

  std::int64_t elem_bytes = require_int(need("elem_bytes"), "elem_bytes");
  std::int64_t fpp = 2;
  if (doc.contains("flops_per_point")) {
    fpp = require_int(doc["flops_per_point"], "flops_per_point");
  }
  std::optional<std::string> major;
  if (doc.contains("major_axis")) {
    major = require_string(doc["major_axis"], "major_axis");
  }
  return OperatorSpec::create(std::move(name), std::move(axes),
                              std::move(accesses), elem_bytes, fpp,
                              std::move(major));
}

OperatorSpec load_workload_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kParse,
                "cannot open workload '" + path.string() + "'", path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_workload(buffer.str());
}

std::string serialize(const OperatorSpec& spec) {
  Json doc = Json::object();
  doc["name"] = spec.name();
  Json axes = Json::array();
  for (const AxisSpec& a : spec.axes()) {
    Json ja = {{"name", a.name}, {"kind", kind_name(a.kind)}};
    if (a.dynamic) {
      ja["range"] = {a.lo, a.hi};
    } else {
      ja["extent"] = a.lo;
    }
    axes.push_back(std::move(ja));
  }
  doc["axes"] = std::move(axes);
  Json acc = Json::array();
  for (const TensorAccess& t : spec.accesses()) {
    acc.push_back(
        {{"tensor", t.tensor}, {"axes", t.axes}, {"role", role_name(t.role)}});
  }
  doc["accesses"] = std::move(acc);
  doc["elem_bytes"] = spec.elem_bytes();
  doc["flops_per_point"] = spec.flops_per_point();
  doc["major_axis"] = spec.axes()[spec.major_axis()].name;
  return doc.dump(2) + "\n";
}

std::string workload_hash(const OperatorSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize(spec)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mixtile
