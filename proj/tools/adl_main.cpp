/*
 * Copyright (c) 2026, The piadl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

// adl: parse, run, verify and role-check pi-ADL architectures.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "piadl/gaia.hpp"
#include "piadl/parser.hpp"
#include "piadl/runtime.hpp"
#include "piadl/trace_io.hpp"
#include "piadl/transport.hpp"
#include "piadl/typecheck.hpp"
#include "piadl/verifier.hpp"

namespace {

using namespace piadl;

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitDeadlock = 2;
constexpr int kExitBudget = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitFile = 66;

// Carries an exit code out of a subcommand.
struct Exit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "adl: cannot read " << path << "\n";
    throw Exit{kExitFile};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "adl: cannot write " << path << "\n";
    throw Exit{kExitFile};
  }
}

ArchitectureDef load_arch(const std::string& path, const std::string& text) {
  try {
    return parse_architecture(text);
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    throw Exit{kExitData};
  }
}

ArchitectureDef checked_arch(const std::string& path) {
  ArchitectureDef arch = load_arch(path, read_file(path));
  TypeReport report = type_check(arch);
  if (!report.ok()) {
    std::cerr << report.str();
    throw Exit{kExitData};
  }
  return arch;
}

std::shared_ptr<const gaia::RoleModel> load_roles(const std::string& path) {
  if (path.empty()) return transport::roles();
  try {
    return std::make_shared<const gaia::RoleModel>(gaia::parse_role_file(read_file(path)));
  } catch (const gaia::RoleError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    throw Exit{kExitData};
  }
}

Trace load_trace(const std::string& path) {
  try {
    return trace_from_string(read_file(path));
  } catch (const MalformedTrace& e) {
    std::cerr << path << ": " << e.what() << "\n";
    throw Exit{kExitData};
  }
}

// ---------------------------------------------------------------------------

struct ParseArgs {
  std::string file;
  bool print = false;
};

int cmd_parse(const ParseArgs& a) {
  const std::string text = read_file(a.file);
  ArchitectureDef arch;
  try {
    arch = parse_architecture(text);
  } catch (const ParseError& e) {
    std::cerr << a.file << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kExitFindings;
  }
  std::cout << "behaviours " << arch.behaviours.size() << ", abstractions "
            << arch.abstractions.size() << ", entry " << arch.entry << "\n";
  for (const auto* list : {&arch.behaviours, &arch.abstractions})
    for (const auto& t : *list) {
      std::cout << "  " << (t.kind == TemplateDef::Kind::kBehaviour ? "behaviour " : "abstraction ")
                << t.name;
      if (!t.params.empty()) {
        std::cout << "(";
        for (std::size_t i = 0; i < t.params.size(); ++i)
          std::cout << (i ? ", " : "") << t.params[i].name << ": " << t.params[i].type.str();
        std::cout << ")";
      }
      std::cout << ": " << t.decls.size() << " declarations, " << t.body.size()
                << " statements\n";
    }
  const TypeReport report = type_check(arch);
  std::cout << report.str();
  if (a.print) std::cout << "\n" << pretty_print(arch);
  return report.ok() ? kExitOk : kExitFindings;
}

struct RunArgs {
  std::string file;
  std::string input;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  std::uint64_t max_steps = 10000;
  std::string trace;
};

int cmd_run(const RunArgs& a) {
  const ArchitectureDef arch = checked_arch(a.file);
  const SchedulePolicy policy =
      a.seed ? SchedulePolicy::Seeded(*a.seed) : SchedulePolicy::Deterministic();
  const Trace trace = run(arch, parse_inputs(a.input), policy, a.max_steps);
  for (const auto& line : trace.outputs()) std::cout << line << "\n";
  if (!a.trace.empty()) write_file(a.trace, trace_to_string(trace));
  switch (trace.verdict) {
    case RunVerdict::kCompleted: return kExitOk;
    case RunVerdict::kDeadlocked:
      std::cerr << "adl: deadlocked after " << trace.events.size() << " steps\n";
      return kExitDeadlock;
    case RunVerdict::kBudgetExhausted:
      std::cerr << "adl: step budget of " << a.max_steps << " exhausted\n";
      return kExitBudget;
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string file;
  std::string roles;
  std::string trace;
  std::string input = "1,1";
  std::optional<std::int64_t> stock;
  std::optional<int> carriers;
  std::uint64_t depth = 200;
  std::size_t max_findings = 8;
  bool no_canon = false;
  bool reduce = false;
  bool strict = false;
};

int cmd_verify(const VerifyArgs& a) {
  auto roles = load_roles(a.roles);

  if (!a.trace.empty()) {
    const Trace trace = load_trace(a.trace);
    const std::int64_t stock = a.stock.value_or(transport::initial_stock(parse_inputs(a.input)));
    verifier::Observer obs(roles, std::make_unique<transport::TransportReducer>(stock), a.strict);
    const verifier::TraceReport r = verifier::check_trace(trace, obs);
    bool ok = r.safe();
    for (const auto& [role, v] : r.roles) {
      std::cout << "role " << role << " " << gaia::to_string(v) << "\n";
      ok = ok && v != gaia::Verdict::kViolated;
    }
    if (r.safety)
      std::cout << "SAFETY-VIOLATION step " << r.safety->step << " " << r.safety->predicate
                << ": " << r.safety->detail << "\n";
    else
      std::cout << "safety hold\n";
    std::cout << "world " << r.final_world.str() << "\n";
    return ok ? kExitOk : kExitFindings;
  }

  ArchitectureDef arch;
  std::vector<Value> inputs;
  if (a.file.empty()) {
    if (!a.carriers) {
      std::cerr << "adl verify: give an architecture file or --carriers\n";
      return kExitUsage;
    }
    try {
      auto sc = transport::build_architecture(*a.carriers, a.stock.value_or(1));
      arch = std::move(sc.arch);
      inputs = std::move(sc.inputs);
    } catch (const transport::InvalidScenario& e) {
      std::cerr << "adl verify: " << e.what() << "\n";
      return kExitUsage;
    }
  } else {
    arch = checked_arch(a.file);
    inputs = parse_inputs(a.input);
  }
  const std::int64_t stock = a.stock.value_or(transport::initial_stock(inputs));

  verifier::ExploreOptions opt;
  opt.depth = a.depth;
  opt.state_cap = verifier::state_cap_from_env();
  opt.canonical_channels = !a.no_canon;
  opt.max_findings = a.max_findings;
  opt.reduce_local_steps = a.reduce;
  verifier::Observer obs(roles, std::make_unique<transport::TransportReducer>(stock), a.strict);
  const verifier::ExplorationReport report = verifier::explore(load(arch, inputs), obs, opt);
  std::cout << report.str();
  if (!report.findings.empty()) return kExitFindings;
  return report.budget_exceeded ? kExitBudget : kExitOk;
}

struct GaiaArgs {
  std::string roles;
  std::string role;
  std::string trace;
  bool strict = false;
};

int cmd_gaia(const GaiaArgs& a) {
  auto roles = load_roles(a.roles);
  if (!roles->roles.contains(a.role)) {
    std::cerr << "adl gaia-check: no role named '" << a.role << "'\n";
    return kExitUsage;
  }
  const Trace trace = load_trace(a.trace);
  verifier::Observer obs(roles, std::make_unique<verifier::NullReducer>(), a.strict);
  for (const auto& e : trace.events) obs.observe(e);
  const gaia::Verdict v = obs.role_verdict(a.role);
  std::cout << gaia::to_string(v) << "\n";
  return v == gaia::Verdict::kViolated ? kExitFindings : kExitOk;
}

struct ScenarioArgs {
  std::string config;
  int carriers = 1;
  std::int64_t stock = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 5000;
  std::string trace;
};

int cmd_scenario(ScenarioArgs a, const CLI::App& sub) {
  if (!a.config.empty()) {
    try {
      const auto cfg = transport::parse_scenario_config(read_file(a.config));
      if (sub.count("--carriers") == 0) a.carriers = cfg.carriers;
      if (sub.count("--stock") == 0) a.stock = cfg.stock;
      if (sub.count("--seed") == 0) a.seed = cfg.seed;
      if (sub.count("--max-steps") == 0) a.max_steps = cfg.max_steps;
    } catch (const transport::InvalidScenario& e) {
      std::cerr << a.config << ": " << e.what() << "\n";
      return kExitData;
    }
  }
  transport::ScenarioResult r;
  try {
    r = transport::scenario(a.carriers, a.stock, a.seed, a.max_steps);
  } catch (const transport::InvalidScenario& e) {
    std::cerr << "adl scenario: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cout << r.summary.str();
  if (!a.trace.empty()) write_file(a.trace, trace_to_string(r.trace));
  const bool ok = r.summary.run == RunVerdict::kCompleted && !r.summary.safety &&
                  r.summary.conserved;
  return ok ? kExitOk : kExitFindings;
}

struct EmitArgs {
  std::optional<int> carriers;
  std::string mutant;
  std::string output;
};

int cmd_emit(const EmitArgs& a) {
  std::string text;
  try {
    if (!a.mutant.empty()) {
      auto m = transport::mutation_from_string(a.mutant);
      if (!m) {
        std::cerr << "adl emit: unknown mutant '" << a.mutant << "'\n";
        return kExitUsage;
      }
      text = transport::mutant_source(*m);
    } else {
      text = transport::build_architecture(a.carriers.value_or(1), 0).source;
    }
  } catch (const transport::InvalidScenario& e) {
    std::cerr << "adl emit: " << e.what() << "\n";
    return kExitUsage;
  }
  if (a.output.empty())
    std::cout << text;
  else
    write_file(a.output, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adl: parse, run and verify pi-ADL architectures"};
  app.require_subcommand(1);

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Print an AST summary and the type report");
  parse->add_option("file", pa.file, "Architecture file")->required();
  parse->add_flag("--print", pa.print, "Also pretty-print the architecture");

  RunArgs ra;
  auto* runc = app.add_subcommand("run", "Execute an architecture and print the `out` channel");
  runc->add_option("file", ra.file, "Architecture file")->required();
  runc->add_option("--input", ra.input, "Comma-separated values for `in`");
  auto* seed = runc->add_option("--seed", ra.seed, "Seeded scheduler");
  auto* det = runc->add_flag("--deterministic", ra.deterministic, "Lowest-transition scheduler (default)");
  seed->excludes(det);
  runc->add_option("--max-steps", ra.max_steps, "Step budget")->check(CLI::PositiveNumber);
  runc->add_option("--trace", ra.trace, "Write the trace to this file");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Explore all schedules, or check one trace");
  verify->add_option("file", va.file, "Architecture file");
  verify->add_option("--roles", va.roles, "Role file (default: the shipped transport roles)");
  verify->add_option("--trace", va.trace, "Check this trace instead of exploring");
  verify->add_option("--input", va.input, "Comma-separated values for `in`")->capture_default_str();
  verify->add_option("--stock", va.stock, "Initial stock (default: implied by the inputs)");
  verify->add_option("--carriers", va.carriers, "Explore the transport case with this many carriers")
      ->check(CLI::Range(1, 3));
  verify->add_option("--depth", va.depth, "Depth bound")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--max-findings", va.max_findings, "Stop after this many findings")
      ->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_flag("--no-canon", va.no_canon, "Do not renumber channels in state fingerprints");
  verify->add_flag("--reduce", va.reduce, "Expand only one invisible local step where possible");
  verify->add_flag("--strict", va.strict, "Unknown symbols violate role monitors");

  GaiaArgs ga;
  auto* gaia_check = app.add_subcommand("gaia-check", "Feed a trace to one role's monitors");
  gaia_check->add_option("--roles", ga.roles, "Role file (default: the shipped transport roles)");
  gaia_check->add_option("--role", ga.role, "Role name")->required();
  gaia_check->add_option("--trace", ga.trace, "Trace file")->required();
  gaia_check->add_flag("--strict", ga.strict, "Unknown symbols violate the monitor");

  ScenarioArgs sa;
  auto* scen = app.add_subcommand("scenario", "Run the transport case end to end");
  scen->add_option("--config", sa.config, "Scenario file (key=value)");
  scen->add_option("--carriers", sa.carriers, "Carriers (1-3)")->check(CLI::Range(1, 3));
  scen->add_option("--stock", sa.stock, "Stock in storehouse A")->check(CLI::NonNegativeNumber);
  scen->add_option("--seed", sa.seed, "Scheduler seed");
  scen->add_option("--max-steps", sa.max_steps, "Step budget")->check(CLI::PositiveNumber);
  scen->add_option("--trace", sa.trace, "Write the trace to this file");

  EmitArgs ea;
  auto* emit = app.add_subcommand("emit", "Print a corpus architecture or mutant");
  auto* ec = emit->add_option("--carriers", ea.carriers, "Transport architecture for N carriers")
                 ->check(CLI::Range(1, 3));
  auto* em = emit->add_option("--mutant", ea.mutant,
                              "drop_con_A, skip_readSign or ignore_collision");
  ec->excludes(em);
  emit->add_option("-o,--output", ea.output, "Write to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kExitUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(pa);
    if (runc->parsed()) return cmd_run(ra);
    if (verify->parsed()) return cmd_verify(va);
    if (gaia_check->parsed()) return cmd_gaia(ga);
    if (scen->parsed()) return cmd_scenario(sa, *scen);
    if (emit->parsed()) return cmd_emit(ea);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
