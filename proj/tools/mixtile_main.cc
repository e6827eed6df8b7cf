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

// mixtile: tile-size tuner for operators with dynamic shapes.
//
//   mixtile tune  --hardware H --workload W [--range i=1..128] --cache C
//   mixtile plan  --hardware H --workload W --shape i=53 [--cache C]
//   mixtile sweep --hardware H --workload W --range i=1..128 --out S.csv
//   mixtile emit-loopnest --workload W --plan P.json
//
// Every flag can also be set through the environment variable MIXTILE_<FLAG>
// with dashes turned into underscores (MIXTILE_HARDWARE, MIXTILE_TOPK, ...).

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixtile/commands.h"
#include "mixtile/error.h"
#include "mixtile/version.h"

namespace {

using mixtile::RunConfig;

struct Flags {
  std::vector<std::string> shapes;
  std::vector<std::string> ranges;
  std::string coeffs = "1,1,1";
};

CLI::Option* env(CLI::Option* opt, const std::string& name) {
  return opt->envname("MIXTILE_" + name);
}

void add_inputs(CLI::App* cmd, RunConfig& c) {
  env(cmd->add_option("--hardware", c.hardware, "hardware descriptor JSON"),
      "HARDWARE");
  env(cmd->add_option("--workload", c.workload, "workload JSON"), "WORKLOAD");
}

void add_tuning(CLI::App* cmd, RunConfig& c, Flags& f) {
  auto& s = c.filter.sweep;
  env(cmd->add_option("--eps-min", s.eps_min, "padding threshold start"),
      "EPS_MIN");
  env(cmd->add_option("--eps-max", s.eps_max, "padding threshold end"),
      "EPS_MAX");
  env(cmd->add_option("--eps-step", s.eps_step, "padding threshold stride"),
      "EPS_STEP");
  env(cmd->add_option("--lam-min", s.lam_min, "occupancy threshold end"),
      "LAM_MIN");
  env(cmd->add_option("--lam-max", s.lam_max, "occupancy threshold start"),
      "LAM_MAX");
  env(cmd->add_option("--lam-step", s.lam_step, "occupancy threshold stride"),
      "LAM_STEP");
  env(cmd->add_option("--psi", c.filter.metric.psi,
                      "compute-to-memory ratio threshold"),
      "PSI");
  env(cmd->add_option("--rest-regs", c.filter.metric.rest_regs,
                      "registers per thread outside the register tile"),
      "REST_REGS");
  env(cmd->add_option("--cap", c.filter.enumerate.cap,
                      "candidate cap per shape"),
      "CAP");
  env(cmd->add_option("--final-cap", c.filter.final_cap,
                      "largest compile-stage set per shape"),
      "FINAL_CAP");
  env(cmd->add_option("--coeffs", f.coeffs, "SIA weights c0,c1,c2"), "COEFFS");
  env(cmd->add_option("--jobs", c.jobs, "worker threads")
          ->check(CLI::PositiveNumber),
      "JOBS");
}

void add_shapes(CLI::App* cmd, Flags& f) {
  cmd->add_option("--shape", f.shapes, "NAME=VALUE, repeatable");
  env(cmd->add_option("--range", f.ranges, "NAME=LO..HI[:STEP], repeatable"),
      "RANGE");
}

void add_ranking(CLI::App* cmd, RunConfig& c) {
  env(cmd->add_option("--topk", c.top_k, "plans to keep")
          ->check(CLI::PositiveNumber),
      "TOPK");
  env(cmd->add_flag("--normalize", c.normalize,
                    "min-max normalize SIA metrics per pool"),
      "NORMALIZE");
}

void add_output(CLI::App* cmd, RunConfig& c) {
  env(cmd->add_option("--out", c.out, "output path (default stdout)"), "OUT");
}

void finish(RunConfig& c, const Flags& f) {
  for (const std::string& s : f.shapes) {
    auto [name, value] = mixtile::parse_binding(s);
    c.shape[name] = value;
  }
  for (const std::string& r : f.ranges) {
    c.ranges.push_back(mixtile::parse_range(r));
  }
  c.filter.coeffs = mixtile::parse_coeffs(f.coeffs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tile-size tuner for operators with dynamic shapes", "mixtile"};
  app.set_version_flag("--version", mixtile::kToolVersion);
  app.require_subcommand(1);

  RunConfig config;
  Flags flags;

  CLI::App* tune = app.add_subcommand("tune", "compile-stage candidate sets");
  add_inputs(tune, config);
  add_tuning(tune, config, flags);
  add_shapes(tune, flags);
  add_output(tune, config);
  env(tune->add_option("--cache", config.cache, "candidate cache to write"),
      "CACHE");

  CLI::App* plan = app.add_subcommand("plan", "rank programs for one shape");
  add_inputs(plan, config);
  add_tuning(plan, config, flags);
  add_shapes(plan, flags);
  add_ranking(plan, config);
  add_output(plan, config);
  env(plan->add_option("--cache", config.cache,
                       "candidate cache to read (tuned on the fly if absent)"),
      "CACHE");
  env(plan->add_option("--emit", config.emit, "plan | loopnest | csv")
          ->check(CLI::IsMember({"plan", "loopnest", "csv"})),
      "EMIT");
  env(plan->add_option("--report", config.report, "text ranking report path"),
      "REPORT");
  env(plan->add_flag("--verify", config.verify,
                     "check the pool against the brute-force oracles"),
      "VERIFY");
  env(plan->add_flag("--timing", config.timing,
                     "record combine+rank wall clock in the outputs"),
      "TIMING");

  CLI::App* sweep = app.add_subcommand("sweep", "best plan per shape as CSV");
  add_inputs(sweep, config);
  add_tuning(sweep, config, flags);
  add_shapes(sweep, flags);
  add_ranking(sweep, config);
  add_output(sweep, config);

  CLI::App* emit =
      app.add_subcommand("emit-loopnest", "tiled loop nest of a planned shape");
  env(emit->add_option("--workload", config.workload, "workload JSON"),
      "WORKLOAD");
  env(emit->add_option("--plan", config.plan, "plan file from `plan`"),
      "PLAN");
  emit->add_option("--rank", config.rank, "ranked plan to emit (1-based)");
  add_output(emit, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return mixtile::exit_code_for(mixtile::ErrorKind::kParse);
  }

  try {
    finish(config, flags);
    if (*tune) return mixtile::cmd_tune(config, std::cout, std::cerr);
    if (*plan) return mixtile::cmd_plan(config, std::cout, std::cerr);
    if (*sweep) return mixtile::cmd_sweep(config, std::cout, std::cerr);
    if (*emit) return mixtile::cmd_emit_loopnest(config, std::cout, std::cerr);
  } catch (const mixtile::Error& e) {
    std::cerr << "mixtile: " << mixtile::to_string(e.kind());
    if (!e.field().empty()) std::cerr << " in '" << e.field() << "'";
    std::cerr << ": " << e.what() << "\n";
    return mixtile::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "mixtile: internal error: " << e.what() << "\n";
    return mixtile::exit_code_for(mixtile::ErrorKind::kInvariant);
  }
  return 0;
}
