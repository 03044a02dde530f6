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

#include "piadl/runtime.hpp"

#include <algorithm>
#include <charconv>
#include <tuple>

namespace piadl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<Value> parse_inputs(std::string_view csv) {
  std::vector<Value> out;
  if (trim(csv).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = csv.find(',', start);
    std::string_view tok = trim(csv.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start));
    if (auto i = parse_int(tok))
      out.push_back(Value::Int(*i));
    else
      out.push_back(Value::Text(std::string(tok)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Program

Program::Program(ArchitectureDef arch)
    : arch_(std::make_unique<const ArchitectureDef>(std::move(arch))) {
  auto add = [&](const TemplateDef& t) {
    TemplateInfo info;
    info.def = &t;
    auto slot = [&](const Declaration& d) {
      info.slot_of.emplace(d.name, static_cast<int>(info.slot_names.size()));
      info.slot_names.push_back(d.name);
      info.slot_types.push_back(d.type);
    };
    for (const auto& p : t.params) slot(p);
    for (const auto& d : t.decls) slot(d);
    register_blocks(t.body);
    info.body_block = block_ids_.at(&t.body);
    template_by_name_.emplace(t.name, static_cast<std::uint32_t>(templates_.size()));
    templates_.push_back(std::move(info));
  };
  for (const auto& b : arch_->behaviours) add(b);
  for (const auto& a : arch_->abstractions) add(a);
  entry_ = template_by_name_.at(arch_->entry);
}

void Program::register_blocks(const std::vector<Statement>& stmts) {
  block_ids_.emplace(&stmts, static_cast<std::uint32_t>(blocks_.size()));
  blocks_.push_back(&stmts);
  for (const auto& s : stmts) {
    if (s.kind == Statement::Kind::kCompose)
      for (const auto& b : s.branches) register_blocks(b);
    if (s.kind == Statement::Kind::kIf || s.kind == Statement::Kind::kWhile)
      register_blocks(s.body);
  }
}

std::optional<std::uint32_t> Program::template_index(
    const std::string& name) const {
  auto it = template_by_name_.find(name);
  if (it == template_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Program::abstraction_index(
    const std::string& name) const {
  auto idx = template_index(name);
  if (idx && templates_[*idx].def->kind == TemplateDef::Kind::kAbstraction)
    return idx;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Names

const char* to_string(ProcessStatus status) {
  switch (status) {
    case ProcessStatus::kRunning: return "running";
    case ProcessStatus::kBlockedSend: return "blocked-send";
    case ProcessStatus::kBlockedReceive: return "blocked-receive";
    case ProcessStatus::kJoining: return "joining";
    case ProcessStatus::kTerminated: return "terminated";
  }
  return "?";
}

const char* to_string(Event::Kind kind) {
  switch (kind) {
    case Event::Kind::kRendezvous: return "rendezvous";
    case Event::Kind::kSpawn: return "spawn";
    case Event::Kind::kFork: return "fork";
    case Event::Kind::kOutput: return "output";
    case Event::Kind::kInput: return "input";
    case Event::Kind::kDone: return "done";
    case Event::Kind::kInternal: return "internal";
  }
  return "?";
}

std::optional<Event::Kind> event_kind_from_string(std::string_view s) {
  for (auto k : {Event::Kind::kRendezvous, Event::Kind::kSpawn,
                 Event::Kind::kFork, Event::Kind::kOutput, Event::Kind::kInput,
                 Event::Kind::kDone, Event::Kind::kInternal})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

const char* to_string(Transition::Kind kind) {
  switch (kind) {
    case Transition::Kind::kInternal: return "internal";
    case Transition::Kind::kFork: return "fork";
    case Transition::Kind::kDone: return "done";
    case Transition::Kind::kOutput: return "output";
    case Transition::Kind::kInput: return "input";
    case Transition::Kind::kSpawn: return "spawn";
    case Transition::Kind::kRendezvous: return "rendezvous";
  }
  return "?";
}

const char* to_string(RunVerdict v) {
  switch (v) {
    case RunVerdict::kCompleted: return "completed";
    case RunVerdict::kDeadlocked: return "deadlocked";
    case RunVerdict::kBudgetExhausted: return "step-budget-exhausted";
  }
  return "?";
}

std::optional<RunVerdict> run_verdict_from_string(std::string_view s) {
  for (auto v : {RunVerdict::kCompleted, RunVerdict::kDeadlocked,
                 RunVerdict::kBudgetExhausted})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

bool transition_less(const Transition& a, const Transition& b) {
  auto key = [](const Transition& t) {
    const bool pair = t.kind == Transition::Kind::kRendezvous;
    const Pid lo = pair ? std::min(t.pid, t.partner) : t.pid;
    const Pid hi = pair ? std::max(t.pid, t.partner) : t.pid;
    return std::make_tuple(lo, t.channel, static_cast<int>(t.kind), hi, t.pid);
  };
  return key(a) < key(b);
}

// ---------------------------------------------------------------------------
// Values

std::string render_value(const Value& v, std::span<const ChannelInfo> channels) {
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_chan()) {
    const ChannelId id = v.as_chan();
    const std::string name = id < channels.size() ? channels[id].name : "?";
    return name + "#" + std::to_string(id);
  }
  std::string out = "\"";
  for (char c : v.as_text()) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::optional<std::int64_t> event_int(const Event& e) {
  return parse_int(e.value);
}

std::optional<std::string> event_text(const Event& e) {
  const std::string& s = e.value;
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\' && i + 2 < s.size()) {
      const char n = s[++i];
      out += n == 't' ? '\t' : n == 'n' ? '\n' : n;
    } else {
      out += s[i];
    }
  }
  return out;
}

namespace {

bool conforms(const Value& v, const AdlType& t,
              std::span<const ChannelInfo> channels) {
  if (v.is_int()) return t == AdlType::Integer();
  if (v.is_text()) return t == AdlType::Text();
  return t.is_connection() && v.as_chan() < channels.size() &&
         channels[v.as_chan()].element == t.element();
}

// ---------------------------------------------------------------------------
// Evaluation

struct Result {
  bool is_bool = false;
  bool b = false;
  Value v;
};

class Evaluator {
 public:
  Evaluator(const Program::TemplateInfo& tmpl, const ProcessInstance& proc)
      : tmpl_(tmpl), proc_(proc) {}

  Value value(const Expr& e) const {
    Result r = eval(e);
    if (r.is_bool) throw std::logic_error("boolean used as a value");
    return r.v;
  }

  bool cond(const Expr& e) const {
    Result r = eval(e);
    if (!r.is_bool) throw std::logic_error("condition is not boolean");
    return r.b;
  }

  const Value& var(const std::string& name) const {
    return proc_.env[slot(name)];
  }

  int slot(const std::string& name) const {
    auto it = tmpl_.slot_of.find(name);
    if (it == tmpl_.slot_of.end())
      throw std::logic_error("unbound name '" + name + "' in " +
                             tmpl_.def->name);
    return it->second;
  }

 private:
  static Result of(bool b) { return {true, b, {}}; }
  static Result of(Value v) { return {false, false, std::move(v)}; }

  Result eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::kIntLit: return of(Value::Int(e.int_value));
      case Expr::Kind::kTextLit: return of(Value::Text(e.text));
      case Expr::Kind::kVar: return of(var(e.text));
      case Expr::Kind::kBinary: break;
    }
    const Expr& l = e.operands[0];
    const Expr& r = e.operands[1];
    switch (e.op) {
      case BinOp::kAnd: return of(cond(l) && cond(r));
      case BinOp::kOr: return of(cond(l) || cond(r));
      case BinOp::kEq: {
        Result a = eval(l);
        Result b = eval(r);
        if (a.is_bool || b.is_bool) return of(a.is_bool == b.is_bool && a.b == b.b);
        return of(a.v == b.v);
      }
      default: break;
    }
    const std::int64_t a = value(l).as_int();
    const std::int64_t b = value(r).as_int();
    switch (e.op) {
      case BinOp::kAdd: return of(Value::Int(a + b));
      case BinOp::kSub: return of(Value::Int(a - b));
      case BinOp::kLt: return of(a < b);
      case BinOp::kGt: return of(a > b);
      case BinOp::kLe: return of(a <= b);
      case BinOp::kGe: return of(a >= b);
      default: break;
    }
    throw std::logic_error("unhandled operator");
  }

  const Program::TemplateInfo& tmpl_;
  const ProcessInstance& proc_;
};

void normalize(const Program& prog, ProcessInstance& p) {
  while (!p.stack.empty() &&
         p.stack.back().index >= prog.block(p.stack.back().block).size())
    p.stack.pop_back();
}

const Statement* current(const Program& prog, const ProcessInstance& p) {
  if (p.stack.empty()) return nullptr;
  return &prog.block(p.stack.back().block)[p.stack.back().index];
}

bool is_live(const ProcessInstance& p) {
  return !p.terminated && p.pending_branches == 0;
}

ChannelId fresh_channel(Config& c, const AdlType& type, const std::string& name) {
  const auto id = static_cast<ChannelId>(c.channels.size());
  c.channels.push_back({type.element(), name});
  return id;
}

void init_env(Config& c, ProcessInstance& p, const Program::TemplateInfo& info,
              const std::optional<Value>& arg,
              const std::optional<std::pair<std::string, Value>>& alias) {
  p.env.resize(info.slot_names.size());
  const std::size_t nparams = info.def->params.size();
  for (std::size_t i = 0; i < info.slot_names.size(); ++i) {
    const AdlType& t = info.slot_types[i];
    if (i < nparams) {
      if (arg && i == 0) {
        p.env[i] = *arg;
        continue;
      }
    }
    if (alias && i >= nparams && info.slot_names[i] == alias->first) {
      p.env[i] = alias->second;
    } else if (t.is_connection()) {
      p.env[i] = Value::Chan(fresh_channel(c, t, info.slot_names[i]));
    } else {
      p.env[i] = Value::Int(0);
    }
  }
}

void advance(const Program& prog, ProcessInstance& p) {
  ++p.stack.back().index;
  normalize(prog, p);
}

void terminate(Config& c, Pid pid) {
  ProcessInstance& p = c.processes[pid];
  p.terminated = true;
  p.stack.clear();
  if (p.join_parent) {
    ProcessInstance& parent = c.processes[*p.join_parent];
    --parent.pending_branches;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

ProcessStatus Config::status(Pid pid) const {
  const ProcessInstance& p = processes.at(pid);
  if (p.terminated) return ProcessStatus::kTerminated;
  if (p.pending_branches > 0) return ProcessStatus::kJoining;
  const Statement* s = current(*program, p);
  if (s == nullptr) return ProcessStatus::kRunning;
  if (s->kind == Statement::Kind::kSend && s->chan != kAmbientOut &&
      !program->abstraction_index(s->chan))
    return ProcessStatus::kBlockedSend;
  if (s->kind == Statement::Kind::kReceive) {
    if (s->chan != kAmbientIn || input_pos >= inputs.size())
      return ProcessStatus::kBlockedReceive;
  }
  return ProcessStatus::kRunning;
}

bool Config::all_terminated() const {
  return std::all_of(processes.begin(), processes.end(),
                     [](const ProcessInstance& p) { return p.terminated; });
}

std::size_t Config::live_count() const {
  return static_cast<std::size_t>(
      std::count_if(processes.begin(), processes.end(),
                    [](const ProcessInstance& p) { return !p.terminated; }));
}

std::string Config::channel_name(ChannelId id) const {
  return channels.at(id).name + "#" + std::to_string(id);
}

Config load(std::shared_ptr<const Program> program, std::vector<Value> inputs) {
  Config c;
  c.program = std::move(program);
  c.inputs = std::move(inputs);
  const auto entry = c.program->entry_index();
  const auto& info = c.program->tmpl(entry);
  ProcessInstance p;
  p.pid = 0;
  p.template_index = entry;
  init_env(c, p, info, std::nullopt, std::nullopt);
  p.stack.push_back({info.body_block, 0});
  normalize(*c.program, p);
  c.processes.push_back(std::move(p));
  return c;
}

Config load(const ArchitectureDef& arch, std::vector<Value> inputs) {
  return load(std::make_shared<const Program>(arch), std::move(inputs));
}

// ---------------------------------------------------------------------------
// Transitions

std::vector<Transition> enabled(const Config& config) {
  const Program& prog = *config.program;
  std::vector<Transition> out;
  std::vector<std::pair<Pid, ChannelId>> senders;
  std::vector<std::pair<Pid, ChannelId>> receivers;

  for (const auto& p : config.processes) {
    if (!is_live(p)) continue;
    const Statement* s = current(prog, p);
    if (s == nullptr) {
      out.push_back({Transition::Kind::kDone, p.pid, p.pid, kNoChannel});
      continue;
    }
    const auto& info = prog.tmpl(p.template_index);
    Evaluator ev(info, p);
    switch (s->kind) {
      case Statement::Kind::kAssign:
      case Statement::Kind::kIf:
      case Statement::Kind::kWhile:
        out.push_back({Transition::Kind::kInternal, p.pid, p.pid, kNoChannel});
        break;
      case Statement::Kind::kCompose:
        out.push_back({Transition::Kind::kFork, p.pid, p.pid, kNoChannel});
        break;
      case Statement::Kind::kDone:
        out.push_back({Transition::Kind::kDone, p.pid, p.pid, kNoChannel});
        break;
      case Statement::Kind::kSend:
        if (s->chan == kAmbientOut) {
          out.push_back({Transition::Kind::kOutput, p.pid, p.pid, kNoChannel});
        } else if (prog.abstraction_index(s->chan)) {
          out.push_back({Transition::Kind::kSpawn, p.pid, p.pid, kNoChannel});
        } else {
          senders.emplace_back(p.pid, ev.var(s->chan).as_chan());
        }
        break;
      case Statement::Kind::kReceive:
        if (s->chan == kAmbientIn) {
          if (config.input_pos < config.inputs.size() &&
              conforms(config.inputs[config.input_pos],
                       info.slot_types[ev.slot(s->target)], config.channels))
            out.push_back({Transition::Kind::kInput, p.pid, p.pid, kNoChannel});
        } else {
          receivers.emplace_back(p.pid, ev.var(s->chan).as_chan());
        }
        break;
    }
  }
  for (const auto& [sp, sc] : senders)
    for (const auto& [rp, rc] : receivers)
      if (sc == rc) out.push_back({Transition::Kind::kRendezvous, sp, rp, sc});
  std::sort(out.begin(), out.end(), transition_less);
  return out;
}

namespace {

Event fire(Config& c, const Transition& t) {
  const Program& prog = *c.program;
  Event ev;
  ev.step = c.step + 1;
  ev.pids.push_back(t.pid);

  ProcessInstance& self = c.processes.at(t.pid);
  const Statement* s = current(prog, self);
  const auto& info = prog.tmpl(self.template_index);

  switch (t.kind) {
    case Transition::Kind::kDone:
      ev.kind = Event::Kind::kDone;
      ev.channel = "-";
      ev.value = "-";
      terminate(c, t.pid);
      break;

    case Transition::Kind::kInternal: {
      ev.kind = Event::Kind::kInternal;
      ev.channel = "-";
      Evaluator e(info, self);
      if (s->kind == Statement::Kind::kAssign) {
        Value v = e.value(s->value);
        const int slot = e.slot(s->target);
        ev.value = "assign " + s->target + "=" + render_value(v, c.channels);
        self.env[slot] = std::move(v);
        advance(prog, self);
      } else if (s->kind == Statement::Kind::kIf) {
        const bool taken = e.cond(s->value);
        ev.value = taken ? "if true" : "if false";
        ++self.stack.back().index;
        if (taken) self.stack.push_back({prog.block_id(&s->body), 0});
        normalize(prog, self);
      } else {
        const bool taken = e.cond(s->value);
        ev.value = taken ? "while true" : "while false";
        if (taken)
          self.stack.push_back({prog.block_id(&s->body), 0});
        else
          ++self.stack.back().index;
        normalize(prog, self);
      }
      break;
    }

    case Transition::Kind::kFork: {
      ev.kind = Event::Kind::kFork;
      ev.channel = "-";
      ev.value = "compose/" + std::to_string(s->branches.size());
      const Pid parent = t.pid;
      std::vector<ProcessInstance> children;
      for (const auto& branch : s->branches) {
        ProcessInstance child;
        child.pid = static_cast<Pid>(c.processes.size() + children.size());
        child.template_index = self.template_index;
        child.env = self.env;
        child.stack.push_back({prog.block_id(&branch), 0});
        child.join_parent = parent;
        normalize(prog, child);
        ev.pids.push_back(child.pid);
        children.push_back(std::move(child));
      }
      self.pending_branches = static_cast<std::uint32_t>(children.size());
      advance(prog, self);
      // `self` is invalidated by the insertions below.
      for (auto& ch : children) c.processes.push_back(std::move(ch));
      break;
    }

    case Transition::Kind::kOutput: {
      ev.kind = Event::Kind::kOutput;
      ev.channel = kAmbientOut;
      ev.value = render_value(Evaluator(info, self).value(s->value), c.channels);
      advance(prog, self);
      break;
    }

    case Transition::Kind::kInput: {
      ev.kind = Event::Kind::kInput;
      ev.channel = kAmbientIn;
      const Value& v = c.inputs.at(c.input_pos++);
      ev.value = render_value(v, c.channels);
      self.env[Evaluator(info, self).slot(s->target)] = v;
      advance(prog, self);
      break;
    }

    case Transition::Kind::kSpawn: {
      ev.kind = Event::Kind::kSpawn;
      ev.channel = s->chan;
      Evaluator e(info, self);
      Value arg = e.value(s->value);
      std::optional<std::pair<std::string, Value>> alias;
      if (s->renames) alias.emplace(s->renames->inner, e.var(s->renames->outer));
      ev.value = render_value(arg, c.channels);
      const auto idx = *prog.abstraction_index(s->chan);
      const auto& child_info = prog.tmpl(idx);
      ProcessInstance child;
      child.pid = static_cast<Pid>(c.processes.size());
      child.template_index = idx;
      init_env(c, child, child_info, arg, alias);
      child.stack.push_back({child_info.body_block, 0});
      normalize(prog, child);
      ev.pids.push_back(child.pid);
      advance(prog, self);
      c.processes.push_back(std::move(child));
      break;
    }

    case Transition::Kind::kRendezvous: {
      ev.kind = Event::Kind::kRendezvous;
      ev.pids.push_back(t.partner);
      ev.channel = c.channel_name(t.channel);
      ProcessInstance& receiver = c.processes.at(t.partner);
      const Statement* rs = current(prog, receiver);
      const auto& rinfo = prog.tmpl(receiver.template_index);
      Value v = Evaluator(info, self).value(s->value);
      if (!conforms(v, c.channels.at(t.channel).element, c.channels))
        throw std::logic_error("type preservation violated on " + ev.channel);
      ev.value = render_value(v, c.channels);
      receiver.env[Evaluator(rinfo, receiver).slot(rs->target)] = std::move(v);
      advance(prog, self);
      advance(prog, receiver);
      break;
    }
  }

  ++c.step;
  if (c.record_events) c.events.push_back(ev);
  return ev;
}

}  // namespace

Event step_in_place(Config& config, const Transition& t) {
  const auto en = enabled(config);
  if (std::find(en.begin(), en.end(), t) == en.end())
    throw IllegalTransition(std::string("transition ") + to_string(t.kind) +
                            " of pid " + std::to_string(t.pid) +
                            " is not enabled");
  return fire(config, t);
}

std::pair<Config, Event> step(const Config& config, const Transition& t) {
  Config next = config;
  Event ev = step_in_place(next, t);
  return {std::move(next), std::move(ev)};
}

// ---------------------------------------------------------------------------
// Fingerprints

void hash_config(Hasher& h, const Config& config, bool canonical_channels) {
  std::unordered_map<ChannelId, std::uint64_t> renumber;
  auto chan = [&](ChannelId id) -> std::uint64_t {
    if (!canonical_channels) return id;
    auto [it, inserted] = renumber.emplace(id, renumber.size());
    return it->second;
  };
  h.add(config.input_pos);
  h.add(config.processes.size());
  for (const auto& p : config.processes) {
    h.add(p.terminated ? 1 : 0);
    if (p.terminated) continue;
    h.add(p.template_index);
    h.add(p.pending_branches);
    h.add(p.join_parent ? *p.join_parent + 1ULL : 0ULL);
    h.add(p.stack.size());
    for (const auto& f : p.stack) h.add((std::uint64_t{f.block} << 32) | f.index);
    for (const auto& v : p.env) {
      if (v.is_int()) {
        h.add(0x11);
        h.add(static_cast<std::uint64_t>(v.as_int()));
      } else if (v.is_text()) {
        h.add(0x22);
        h.add(v.as_text());
      } else {
        const auto& info = config.channels.at(v.as_chan());
        h.add(0x33);
        h.add(chan(v.as_chan()));
        h.add((static_cast<std::uint64_t>(info.element.base()) << 8) |
              static_cast<std::uint64_t>(info.element.connection_depth()));
      }
    }
  }
}

Fingerprint fingerprint(const Config& config, bool canonical_channels) {
  Hasher h;
  hash_config(h, config, canonical_channels);
  return h.digest();
}

// ---------------------------------------------------------------------------
// Scheduling

Scheduler::Scheduler(SchedulePolicy policy)
    : policy_(policy), state_(policy.seed) {}

std::size_t Scheduler::pick_index(std::size_t n) {
  if (n == 0) throw std::logic_error("pick from an empty candidate list");
  if (policy_.kind == SchedulePolicy::Kind::kDeterministic) return 0;
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return static_cast<std::size_t>((state_ >> 33) % n);
}

const Transition& Scheduler::pick(std::span<const Transition> candidates) {
  if (policy_.kind == SchedulePolicy::Kind::kDeterministic)
    return *std::min_element(candidates.begin(), candidates.end(), transition_less);
  return candidates[pick_index(candidates.size())];
}

const Transition& schedule_pick(std::span<const Transition> candidates,
                                Scheduler& scheduler) {
  return scheduler.pick(candidates);
}

std::vector<std::string> Trace::outputs() const {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind != Event::Kind::kOutput) continue;
    if (auto t = event_text(e))
      out.push_back(*t);
    else
      out.push_back(e.value);
  }
  return out;
}

Trace run(Config config, SchedulePolicy policy, std::uint64_t max_steps) {
  Scheduler sched(policy);
  Trace trace;
  config.record_events = true;
  for (;;) {
    const auto en = enabled(config);
    if (en.empty()) {
      trace.verdict = config.all_terminated() ? RunVerdict::kCompleted
                                              : RunVerdict::kDeadlocked;
      break;
    }
    if (config.step >= max_steps) {
      trace.verdict = RunVerdict::kBudgetExhausted;
      break;
    }
    fire(config, sched.pick(en));
  }
  trace.events = std::move(config.events);
  return trace;
}

Trace run(const ArchitectureDef& arch, std::vector<Value> inputs,
          SchedulePolicy policy, std::uint64_t max_steps) {
  return run(load(arch, std::move(inputs)), policy, max_steps);
}

}  // namespace piadl
