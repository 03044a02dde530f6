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

#ifndef PIADL_RUNTIME_HPP_
#define PIADL_RUNTIME_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "piadl/ast.hpp"
#include "piadl/hash.hpp"

namespace piadl {

using Pid = std::uint32_t;
using ChannelId = std::uint32_t;

inline constexpr ChannelId kNoChannel = ~ChannelId{0};

struct ChannelRef {
  ChannelId id = kNoChannel;
  friend bool operator==(const ChannelRef&, const ChannelRef&) = default;
};

/// A runtime value: an integer, a text, or a channel (mobility).
class Value {
 public:
  Value() : v_(std::int64_t{0}) {}
  static Value Int(std::int64_t i) { return Value(i); }
  static Value Text(std::string s) { return Value(std::move(s)); }
  static Value Chan(ChannelId id) { return Value(ChannelRef{id}); }

  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_chan() const { return std::holds_alternative<ChannelRef>(v_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  const std::string& as_text() const { return std::get<std::string>(v_); }
  ChannelId as_chan() const { return std::get<ChannelRef>(v_).id; }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  template <typename T>
  explicit Value(T v) : v_(std::move(v)) {}

  std::variant<std::int64_t, std::string, ChannelRef> v_;
};

/// Parses a comma-separated input list; integer tokens become Int, anything
/// else Text.
std::vector<Value> parse_inputs(std::string_view csv);

struct ChannelInfo {
  AdlType element;
  std::string name;  // declaration it was created for
};

/// Immutable, shareable compiled form of an architecture: variable slots per
/// template and an id for every statement list.
class Program {
 public:
  struct TemplateInfo {
    const TemplateDef* def = nullptr;
    std::vector<std::string> slot_names;
    std::vector<AdlType> slot_types;
    std::unordered_map<std::string, int> slot_of;
    std::uint32_t body_block = 0;
  };

  explicit Program(ArchitectureDef arch);

  const ArchitectureDef& arch() const { return *arch_; }
  const std::vector<TemplateInfo>& templates() const { return templates_; }
  const TemplateInfo& tmpl(std::uint32_t index) const {
    return templates_[index];
  }
  std::optional<std::uint32_t> template_index(const std::string& name) const;
  std::optional<std::uint32_t> abstraction_index(const std::string& name) const;
  std::uint32_t entry_index() const { return entry_; }

  const std::vector<Statement>& block(std::uint32_t id) const {
    return *blocks_[id];
  }
  std::uint32_t block_id(const std::vector<Statement>* stmts) const {
    return block_ids_.at(stmts);
  }

 private:
  void register_blocks(const std::vector<Statement>& stmts);

  std::unique_ptr<const ArchitectureDef> arch_;
  std::vector<TemplateInfo> templates_;
  std::map<std::string, std::uint32_t> template_by_name_;
  std::uint32_t entry_ = 0;
  std::vector<const std::vector<Statement>*> blocks_;
  std::unordered_map<const std::vector<Statement>*, std::uint32_t> block_ids_;
};

enum class ProcessStatus {
  kRunning,
  kBlockedSend,
  kBlockedReceive,
  kJoining,  // compose parent waiting for its branches
  kTerminated,
};

const char* to_string(ProcessStatus status);

struct Frame {
  std::uint32_t block = 0;
  std::uint32_t index = 0;
  friend bool operator==(const Frame&, const Frame&) = default;
};

struct ProcessInstance {
  Pid pid = 0;
  std::uint32_t template_index = 0;
  std::vector<Value> env;     // indexed by the template's slots
  std::vector<Frame> stack;   // continuation; empty when at end or terminated
  bool terminated = false;
  std::uint32_t pending_branches = 0;
  std::optional<Pid> join_parent;  // set on compose branches
};

struct Event {
  enum class Kind { kRendezvous, kSpawn, kFork, kOutput, kInput, kDone, kInternal };

  std::uint64_t step = 0;
  Kind kind = Kind::kInternal;
  std::vector<Pid> pids;
  std::string channel;  // channel debug name, `in`/`out`, or spawned template
  std::string value;    // rendered value, see render_value()

  friend bool operator==(const Event&, const Event&) = default;
};

const char* to_string(Event::Kind kind);
std::optional<Event::Kind> event_kind_from_string(std::string_view s);

/// Trace rendering: Int as decimal, Text double-quoted with \\ \" \t \n
/// escapes, channels as `name#id`.
std::string render_value(const Value& v, std::span<const ChannelInfo> channels);
std::optional<std::int64_t> event_int(const Event& e);
std::optional<std::string> event_text(const Event& e);

struct Transition {
  enum class Kind { kInternal, kFork, kDone, kOutput, kInput, kSpawn, kRendezvous };

  Kind kind = Kind::kInternal;
  Pid pid = 0;       // acting process; the sender for rendezvous
  Pid partner = 0;   // receiver for rendezvous
  ChannelId channel = kNoChannel;

  friend bool operator==(const Transition&, const Transition&) = default;
};

const char* to_string(Transition::Kind kind);

/// Scheduler ordering: (lower pid involved, channel id, kind rank, other pid).
bool transition_less(const Transition& a, const Transition& b);

class IllegalTransition : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Config {
  std::shared_ptr<const Program> program;
  std::vector<ProcessInstance> processes;  // indexed by pid, never removed
  std::vector<ChannelInfo> channels;       // indexed by channel id
  std::vector<Value> inputs;
  std::size_t input_pos = 0;
  std::vector<Event> events;
  std::uint64_t step = 0;
  bool record_events = true;

  ProcessStatus status(Pid pid) const;
  bool all_terminated() const;
  std::size_t live_count() const;
  std::string channel_name(ChannelId id) const;
};

Config load(std::shared_ptr<const Program> program, std::vector<Value> inputs);
Config load(const ArchitectureDef& arch, std::vector<Value> inputs);

/// Every transition fireable in `config`, sorted by transition_less.
std::vector<Transition> enabled(const Config& config);

/// Fires `t` in place and returns the event it produced.
/// Throws IllegalTransition if `t` is not enabled.
Event step_in_place(Config& config, const Transition& t);

std::pair<Config, Event> step(const Config& config, const Transition& t);

/**
 * Canonical digest of everything that determines future behaviour (process
 * continuations, environments, channel aliasing, remaining input). With
 * `canonical_channels`, channel ids are renumbered by first use so configs
 * that differ only in allocation order collide.
 */
Fingerprint fingerprint(const Config& config, bool canonical_channels = true);
void hash_config(Hasher& h, const Config& config, bool canonical_channels);

struct SchedulePolicy {
  enum class Kind { kDeterministic, kSeeded };
  Kind kind = Kind::kDeterministic;
  std::uint64_t seed = 0;

  static SchedulePolicy Deterministic() { return {}; }
  static SchedulePolicy Seeded(std::uint64_t s) { return {Kind::kSeeded, s}; }
};

/**
 * Picks transitions for run(). The seeded policy uses a 64-bit linear
 * congruential generator (multiplier 6364136223846793005, increment
 * 1442695040888963407); each pick advances the state once and takes
 * (state >> 33) mod n.
 */
class Scheduler {
 public:
  explicit Scheduler(SchedulePolicy policy);

  std::size_t pick_index(std::size_t n);
  const Transition& pick(std::span<const Transition> candidates);

 private:
  SchedulePolicy policy_;
  std::uint64_t state_;
};

const Transition& schedule_pick(std::span<const Transition> candidates,
                                Scheduler& scheduler);

enum class RunVerdict { kCompleted, kDeadlocked, kBudgetExhausted };

const char* to_string(RunVerdict v);
std::optional<RunVerdict> run_verdict_from_string(std::string_view s);

struct Trace {
  std::vector<Event> events;
  RunVerdict verdict = RunVerdict::kCompleted;

  /// Lines written to `out`, unquoted.
  std::vector<std::string> outputs() const;
};

Trace run(Config config, SchedulePolicy policy, std::uint64_t max_steps);
Trace run(const ArchitectureDef& arch, std::vector<Value> inputs,
          SchedulePolicy policy, std::uint64_t max_steps);

}  // namespace piadl

#endif  // PIADL_RUNTIME_HPP_
