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

#include "json_io.h"

#include "mixtile/error.h"

namespace mixtile::json_io {
namespace {

template <typename T>
T get(const Json& obj, const std::string& key) {
  const Json& v = member(obj, key);
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw_parse("field '" + key + "' has the wrong type", key);
  }
}

}  // namespace

const Json& member(const Json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw_parse("missing field '" + key + "'", key);
  }
  return obj.at(key);
}

Json reg_map(const UKernel& k, const OperatorSpec& spec) {
  Json j = Json::object();
  for (int a : spec.space_axes()) {
    j[spec.axes()[a].name] = k.reg_tile[spec.space_ordinal(a)];
  }
  return j;
}

Json smem_map(const UKernel& k, const OperatorSpec& spec) {
  Json j = Json::object();
  for (std::size_t a = 0; a < spec.num_axes(); ++a) {
    j[spec.axes()[a].name] = k.smem_tile[a];
  }
  return j;
}

UKernel kernel_from(const Json& reg, const Json& smem,
                    const OperatorSpec& spec) {
  UKernel k;
  for (int a : spec.space_axes()) {
    k.reg_tile.push_back(get<std::int64_t>(reg, spec.axes()[a].name));
  }
  for (const AxisSpec& ax : spec.axes()) {
    k.smem_tile.push_back(get<std::int64_t>(smem, ax.name));
  }
  return k;
}

Json to_json(const SweepParams& s) {
  return Json{{"eps_min", s.eps_min},   {"eps_max", s.eps_max},
              {"lam_min", s.lam_min},   {"lam_max", s.lam_max},
              {"eps_step", s.eps_step}, {"lam_step", s.lam_step}};
}

SweepParams sweep_from(const Json& j) {
  SweepParams s;
  s.eps_min = get<double>(j, "eps_min");
  s.eps_max = get<double>(j, "eps_max");
  s.lam_min = get<double>(j, "lam_min");
  s.lam_max = get<double>(j, "lam_max");
  s.eps_step = get<double>(j, "eps_step");
  s.lam_step = get<double>(j, "lam_step");
  return s;
}

Json to_json(const MetricBundle& m) {
  return Json{{"pad", m.pad},
              {"occ", m.occ},
              {"regs_in_block", m.regs_in_block},
              {"saturated", m.saturated},
              {"cmr", m.cmr},
              {"compute_intensive", m.compute_intensive},
              {"mem_latency_s", m.mem_latency_s},
              {"blocks_needed", m.blocks_needed},
              {"smem_bytes", m.smem_bytes}};
}

MetricBundle metrics_from(const Json& j) {
  MetricBundle m;
  m.pad = get<double>(j, "pad");
  m.occ = get<double>(j, "occ");
  m.regs_in_block = get<std::int64_t>(j, "regs_in_block");
  m.saturated = get<bool>(j, "saturated");
  m.cmr = get<double>(j, "cmr");
  m.compute_intensive = get<bool>(j, "compute_intensive");
  m.mem_latency_s = get<double>(j, "mem_latency_s");
  m.blocks_needed = get<std::int64_t>(j, "blocks_needed");
  m.smem_bytes = get<std::int64_t>(j, "smem_bytes");
  return m;
}

Json to_json(const Bindings& b) {
  Json j = Json::object();
  for (const auto& [k, v] : b) j[k] = v;
  return j;
}

Bindings bindings_from(const Json& j) {
  if (!j.is_object()) throw_parse("binding must be an object", "binding");
  Bindings b;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_integer()) throw_parse("binding values must be integers", k);
    b[k] = v.get<std::int64_t>();
  }
  return b;
}

}  // namespace mixtile::json_io
