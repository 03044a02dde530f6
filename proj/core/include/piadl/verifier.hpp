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

#ifndef PIADL_VERIFIER_HPP_
#define PIADL_VERIFIER_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "piadl/gaia.hpp"
#include "piadl/runtime.hpp"
#include "piadl/world.hpp"

namespace piadl::verifier {

/// Which agent and role instance produced an event.
struct Attribution {
  std::string agent;  // empty for processes outside any agent lineage
  std::string role;   // role name, empty when the template plays no role
  int instance = -1;
};

class InconsistentEvent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Folds trace events into a WorldState.
class Reducer {
 public:
  virtual ~Reducer() = default;
  virtual std::unique_ptr<Reducer> clone() const = 0;
  /// Throws InconsistentEvent.
  virtual void apply(const Event& event, const Attribution& who) = 0;
  virtual const world::WorldState& world() const = 0;
  virtual void hash_into(Hasher& h) const = 0;
};

/// Keeps an empty world; for checks that only need role monitors.
class NullReducer : public Reducer {
 public:
  std::unique_ptr<Reducer> clone() const override {
    return std::make_unique<NullReducer>(*this);
  }
  void apply(const Event&, const Attribution&) override {}
  const world::WorldState& world() const override { return world_; }
  void hash_into(Hasher&) const override {}

 private:
  world::WorldState world_;
};

struct SafetyViolation {
  std::uint64_t step = 0;
  std::string predicate;
  std::string detail;
};

/**
 * Incremental checker state: agent attribution, one liveness monitor per
 * role instance, role guards and global invariants. Role names match ADL
 * templates case-insensitively (Move_full plays MOVE_FULL).
 */
class Observer {
 public:
  Observer(std::shared_ptr<const gaia::RoleModel> roles,
           std::unique_ptr<Reducer> reducer, bool strict = false);
  Observer(const Observer& other);
  Observer& operator=(const Observer& other);
  Observer(Observer&&) noexcept = default;
  Observer& operator=(Observer&&) noexcept = default;

  /// Returns the first safety violation the event causes, if any.
  std::optional<SafetyViolation> observe(const Event& event);

  /// Role instances whose monitor is violated.
  std::vector<std::string> violated_instances() const;
  /// Worst verdict over the role's instances; a fresh monitor's verdict when
  /// the role was never instantiated.
  gaia::Verdict role_verdict(const std::string& role) const;
  std::map<std::string, gaia::Verdict> role_verdicts() const;

  const world::WorldState& world() const { return reducer_->world(); }
  const Attribution& attribution(Pid pid) const;
  void hash_into(Hasher& h) const;

 private:
  struct Instance {
    std::string role;
    std::string agent;
    gaia::Monitor monitor;
  };
  struct Shared;

  std::shared_ptr<const Shared> shared_;
  std::unique_ptr<Reducer> reducer_;
  std::vector<Attribution> by_pid_;
  std::vector<Instance> instances_;
  int next_agent_ = 1;
};

struct TraceReport {
  std::map<std::string, gaia::Verdict> roles;
  std::optional<SafetyViolation> safety;
  world::WorldState final_world;

  bool safe() const { return !safety.has_value(); }
};

/// Replays `trace` through an observer. Throws MalformedTrace for event
/// sequences the observer cannot attribute.
TraceReport check_trace(const Trace& trace, const Observer& prototype);

/// Enabled set empty while some process has not terminated.
bool detect_deadlock(const Config& config);

struct Finding {
  enum class Kind { kDeadlock, kSafety, kLiveness };

  Kind kind = Kind::kDeadlock;
  std::string detail;
  std::vector<Transition> path;
  std::vector<Event> witness;
};

const char* to_string(Finding::Kind kind);

struct ExploreOptions {
  std::uint64_t depth = 200;
  std::uint64_t state_cap = 1'000'000;
  bool canonical_channels = true;
  std::size_t max_findings = 8;
  /// Expand a single invisible step when one exists: an assign, if, while
  /// or done, or an output of a process outside every agent lineage that
  /// leaves the observer unchanged. Skipped when it would close a cycle on
  /// the search stack. Preserves deadlocks and observer-detected violations.
  bool reduce_local_steps = false;
};

/// Reads ADL_STATE_CAP, falling back to `fallback`.
std::uint64_t state_cap_from_env(std::uint64_t fallback = 1'000'000);

struct ExplorationReport {
  std::uint64_t states = 0;
  std::uint64_t max_depth = 0;
  std::uint64_t depth_bound = 0;
  std::uint64_t truncated = 0;         // states cut off by the depth bound
  std::uint64_t maximal_paths = 0;     // terminal states reached
  std::uint64_t fingerprint_checks = 0;
  std::uint64_t fingerprint_mismatches = 0;
  bool budget_exceeded = false;
  bool finding_limit_reached = false;
  std::vector<Finding> findings;
  std::map<std::string, gaia::Verdict> liveness;  // worst over terminal states

  std::size_t count(Finding::Kind kind) const;
  std::string str() const;
};

/**
 * Depth-first enumeration of every schedule of `config` up to
 * `options.depth` steps. States are deduplicated by the configuration
 * fingerprint combined with the observer state; a state is revisited only
 * when reached at a smaller depth.
 */
ExplorationReport explore(const Config& config, const Observer& prototype,
                          const ExploreOptions& options);

/// Re-runs a finding's path and checks that it reproduces the finding.
bool replay_witness(const Config& initial, const Observer& prototype,
                    const Finding& finding);

}  // namespace piadl::verifier

#endif  // PIADL_VERIFIER_HPP_
