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

#include "piadl/verifier.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "piadl/trace_io.hpp"

namespace piadl::verifier {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

struct Observer::Shared {
  struct RoleInfo {
    const gaia::RoleSchema* schema = nullptr;
    std::shared_ptr<const gaia::Nfa> nfa;
    std::optional<world::SafetyPredicate> guard;
  };

  std::shared_ptr<const gaia::RoleModel> model;
  std::map<std::string, RoleInfo> roles;            // by role name
  std::map<std::string, std::string> role_of_tmpl;  // upper-case template -> role
  std::vector<world::SafetyPredicate> invariants;
  bool strict = false;
};

Observer::Observer(std::shared_ptr<const gaia::RoleModel> roles,
                   std::unique_ptr<Reducer> reducer, bool strict)
    : reducer_(std::move(reducer)) {
  auto shared = std::make_shared<Shared>();
  shared->model = std::move(roles);
  shared->strict = strict;
  if (shared->model) {
    for (const auto& [name, schema] : shared->model->roles) {
      Shared::RoleInfo info;
      info.schema = &schema;
      info.nfa = std::make_shared<const gaia::Nfa>(schema.closed_liveness(), schema.alphabet());
      if (!schema.safety.empty()) info.guard = world::SafetyPredicate::parse(schema.safety);
      shared->roles.emplace(name, std::move(info));
      shared->role_of_tmpl[upper(name)] = name;
    }
    for (const auto& inv : shared->model->invariants)
      shared->invariants.push_back(world::SafetyPredicate::parse(inv));
  }
  shared_ = std::move(shared);
}

Observer::Observer(const Observer& other)
    : shared_(other.shared_),
      reducer_(other.reducer_->clone()),
      by_pid_(other.by_pid_),
      instances_(other.instances_),
      next_agent_(other.next_agent_) {}

Observer& Observer::operator=(const Observer& other) {
  if (this != &other) {
    Observer copy(other);
    *this = std::move(copy);
  }
  return *this;
}

const Attribution& Observer::attribution(Pid pid) const {
  static const Attribution kNone;
  return pid < by_pid_.size() ? by_pid_[pid] : kNone;
}

std::optional<SafetyViolation> Observer::observe(const Event& event) {
  auto assign = [&](Pid pid, Attribution a) {
    if (by_pid_.size() <= pid) by_pid_.resize(pid + 1);
    by_pid_[pid] = std::move(a);
  };

  if (event.kind == Event::Kind::kSpawn) {
    if (event.pids.size() != 2)
      throw MalformedTrace(0, "spawn event needs parent and child pids");
    const Attribution parent = attribution(event.pids[0]);
    Attribution child;
    if (auto r = shared_->role_of_tmpl.find(upper(event.channel));
        r != shared_->role_of_tmpl.end()) {
      child.role = r->second;
      child.agent = parent.agent.empty() ? std::to_string(next_agent_++) : parent.agent;
      child.instance = static_cast<int>(instances_.size());
      instances_.push_back(
          {child.role, child.agent, gaia::Monitor(shared_->roles.at(child.role).nfa,
                                                  shared_->strict)});
    }
    assign(event.pids[1], std::move(child));
  } else if (event.kind == Event::Kind::kFork) {
    const Attribution parent = attribution(event.pids[0]);
    for (std::size_t i = 1; i < event.pids.size(); ++i) assign(event.pids[i], parent);
  }

  const Attribution who = event.pids.empty() ? Attribution{} : attribution(event.pids[0]);
  std::optional<std::string> symbol;
  if (event.kind == Event::Kind::kOutput) symbol = event_text(event);

  std::optional<SafetyViolation> violation;
  auto violate = [&](std::string pred, std::string detail) {
    if (!violation) violation = SafetyViolation{event.step, std::move(pred), std::move(detail)};
  };

  if (symbol && who.instance >= 0) {
    const auto& info = shared_->roles.at(who.role);
    if (info.guard && *symbol == info.schema->safety_trigger) {
      world::Bindings b;
      b.carrier = who.agent;
      if (auto c = world().carriers.find(who.agent); c != world().carriers.end())
        b.sign = c->second.position;
      try {
        if (!info.guard->eval(world(), b))
          violate(info.guard->source(), "role " + who.role + " of carrier " + who.agent +
                                            " at sign " + std::to_string(b.sign) + " on " +
                                            *symbol);
      } catch (const world::UnknownEntity& e) {
        violate(info.guard->source(), e.what());
      }
    }
  }

  try {
    reducer_->apply(event, who);
  } catch (const InconsistentEvent& e) {
    violate("consistent-world", e.what());
  }

  if (symbol && who.instance >= 0) instances_[who.instance].monitor.step(*symbol);

  for (const auto& inv : shared_->invariants) {
    try {
      if (!inv.eval(world())) {
        std::string detail = world().str();
        if (auto col = world().collision())
          detail = "carriers " + col->first + " and " + col->second + " share sign " +
                   std::to_string(world().carriers.at(col->first).position);
        violate(inv.source(), detail);
      }
    } catch (const world::UnknownEntity& e) {
      violate(inv.source(), e.what());
    }
  }
  return violation;
}

std::vector<std::string> Observer::violated_instances() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < instances_.size(); ++i)
    if (instances_[i].monitor.verdict() == gaia::Verdict::kViolated)
      out.push_back(instances_[i].role + " #" + std::to_string(i) + " (carrier " +
                    instances_[i].agent + ")");
  return out;
}

gaia::Verdict Observer::role_verdict(const std::string& role) const {
  const auto& info = shared_->roles.at(role);
  std::optional<gaia::Verdict> v;
  for (const auto& inst : instances_)
    if (inst.role == role) v = v ? gaia::worst(*v, inst.monitor.verdict()) : inst.monitor.verdict();
  if (v) return *v;
  return gaia::Monitor(info.nfa, shared_->strict).verdict();
}

std::map<std::string, gaia::Verdict> Observer::role_verdicts() const {
  std::map<std::string, gaia::Verdict> out;
  for (const auto& [name, info] : shared_->roles) out[name] = role_verdict(name);
  return out;
}

void Observer::hash_into(Hasher& h) const {
  reducer_->hash_into(h);
  h.add(by_pid_.size());
  for (const auto& a : by_pid_) {
    h.add(a.agent);
    h.add(static_cast<std::uint64_t>(a.instance + 1));
  }
  h.add(instances_.size());
  for (const auto& inst : instances_) inst.monitor.hash_into(h);
  h.add(static_cast<std::uint64_t>(next_agent_));
}

TraceReport check_trace(const Trace& trace, const Observer& prototype) {
  Observer obs(prototype);
  TraceReport report;
  for (const auto& e : trace.events) {
    auto v = obs.observe(e);
    if (v && !report.safety) report.safety = std::move(v);
  }
  report.roles = obs.role_verdicts();
  report.final_world = obs.world();
  return report;
}

bool detect_deadlock(const Config& config) {
  return !config.all_terminated() && enabled(config).empty();
}

const char* to_string(Finding::Kind kind) {
  switch (kind) {
    case Finding::Kind::kDeadlock: return "DEADLOCK";
    case Finding::Kind::kSafety: return "SAFETY-VIOLATION";
    case Finding::Kind::kLiveness: return "LIVENESS-VIOLATION";
  }
  return "?";
}

std::uint64_t state_cap_from_env(std::uint64_t fallback) {
  const char* v = std::getenv("ADL_STATE_CAP");
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (end == nullptr || *end != '\0' || n == 0) return fallback;
  return n;
}

std::size_t ExplorationReport::count(Finding::Kind kind) const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [&](const Finding& f) { return f.kind == kind; }));
}

std::string ExplorationReport::str() const {
  std::ostringstream os;
  for (const auto& f : findings) {
    os << to_string(f.kind) << ' ' << f.detail << '\n';
    for (const auto& e : f.witness) os << format_event(e) << '\n';
    os << '\n';
  }
  for (const auto& [role, v] : liveness) os << "# liveness " << role << ' ' << gaia::to_string(v) << '\n';
  if (truncated > 0) os << "# depth bound reached on " << truncated << " state(s)\n";
  if (budget_exceeded) os << "# state budget exceeded, results are partial\n";
  if (finding_limit_reached) os << "# finding limit reached, search stopped\n";
  os << "states=" << states << " depth=" << max_depth << " findings=" << findings.size() << '\n';
  return os.str();
}

namespace {

std::string describe_deadlock(const Config& c) {
  std::string out;
  for (const auto& p : c.processes) {
    const ProcessStatus s = c.status(p.pid);
    if (s == ProcessStatus::kTerminated) continue;
    if (!out.empty()) out += ", ";
    out += "pid " + std::to_string(p.pid) + " " +
           c.program->tmpl(p.template_index).def->name + " " + to_string(s);
  }
  return out;
}

Fingerprint state_key(const Config& c, const Observer& obs, bool canonical) {
  Hasher h;
  hash_config(h, c, canonical);
  obs.hash_into(h);
  return h.digest();
}

// True when no live process other than `a` and `b` can name `channel`.
bool held_only_by(const Config& c, ChannelId channel, Pid a, Pid b) {
  for (const auto& p : c.processes) {
    if (p.terminated || p.pid == a || p.pid == b) continue;
    for (const auto& v : p.env)
      if (v.is_chan() && v.as_chan() == channel) return false;
  }
  return true;
}

using Signature = std::vector<std::tuple<int, Pid, Pid>>;

Signature signature(const std::vector<Transition>& ts) {
  Signature s;
  for (const auto& t : ts) s.emplace_back(static_cast<int>(t.kind), t.pid, t.partner);
  return s;
}

class Explorer {
 public:
  Explorer(const Config& initial, const Observer& proto, const ExploreOptions& opt)
      : initial_(initial), proto_(proto), opt_(opt) {
    report_.depth_bound = opt.depth;
  }

  ExplorationReport run() {
    Config c = initial_;
    c.record_events = false;
    dfs(c, proto_, 0);
    report_.finding_limit_reached = report_.findings.size() >= opt_.max_findings;
    for (auto& f : report_.findings) f.witness = replay(f.path);
    return std::move(report_);
  }

 private:
  std::vector<Event> replay(const std::vector<Transition>& path) const {
    Config c = initial_;
    c.record_events = true;
    for (const auto& t : path) step_in_place(c, t);
    return c.events;
  }

  bool stopped() const {
    return report_.budget_exceeded || report_.findings.size() >= opt_.max_findings;
  }

  void add_finding(Finding::Kind kind, std::string detail) {
    if (stopped()) return;
    if (!finding_keys_.insert({static_cast<int>(kind), detail}).second) return;
    report_.findings.push_back({kind, std::move(detail), path_, {}});
  }

  void merge_liveness(const Observer& obs) {
    for (const auto& [role, v] : obs.role_verdicts()) {
      auto [it, fresh] = report_.liveness.emplace(role, v);
      if (!fresh) it->second = gaia::worst(it->second, v);
    }
  }

  // Equal fingerprints must mean equal enabled sets; sampled on 1/16 of them.
  void spot_check(const Config& c, const std::vector<Transition>* en) {
    const Fingerprint cfp = fingerprint(c, opt_.canonical_channels);
    if ((cfp.lo & 15) != 0) return;
    const auto sig = signature(en ? *en : enabled(c));
    auto [s, added] = samples_.try_emplace(cfp, sig);
    if (!added) {
      ++report_.fingerprint_checks;
      if (s->second != sig) ++report_.fingerprint_mismatches;
    }
  }

  void dfs(const Config& c, const Observer& obs, std::uint64_t depth) {
    if (stopped()) return;
    const Fingerprint key = state_key(c, obs, opt_.canonical_channels);
    auto [it, fresh] = visited_.try_emplace(key, depth);
    if (!fresh) {
      spot_check(c, nullptr);
      if (it->second <= depth) return;
      it->second = depth;
    } else if (++report_.states > opt_.state_cap) {
      report_.budget_exceeded = true;
      return;
    }
    report_.max_depth = std::max(report_.max_depth, depth);

    const std::vector<Transition> en = enabled(c);
    if (fresh) spot_check(c, &en);

    if (en.empty()) {
      merge_liveness(obs);
      if (c.all_terminated())
        ++report_.maximal_paths;
      else
        add_finding(Finding::Kind::kDeadlock, describe_deadlock(c));
      return;
    }
    if (depth >= opt_.depth) {
      ++report_.truncated;
      merge_liveness(obs);
      return;
    }

    if (opt_.reduce_local_steps) {
      for (const auto& t : en) {
        const bool local = t.kind == Transition::Kind::kInternal ||
                           t.kind == Transition::Kind::kDone;
        const bool quiet_output = t.kind == Transition::Kind::kOutput &&
                                  obs.attribution(t.pid).agent.empty();
        const bool private_rendezvous = t.kind == Transition::Kind::kRendezvous &&
                                        held_only_by(c, t.channel, t.pid, t.partner);
        if (!local && !quiet_output && !private_rendezvous) continue;
        Config child = c;
        Observer next(obs);
        const Event ev = step_in_place(child, t);
        if (next.observe(ev)) break;
        if (quiet_output || private_rendezvous) {
          Hasher before;
          Hasher after;
          obs.hash_into(before);
          next.hash_into(after);
          if (!(before.digest() == after.digest())) continue;
        }
        if (on_stack_.contains(state_key(child, next, opt_.canonical_channels))) break;
        on_stack_.insert(key);
        path_.push_back(t);
        dfs(child, next, depth + 1);
        path_.pop_back();
        on_stack_.erase(key);
        return;
      }
    }

    on_stack_.insert(key);
    for (const auto& t : en) {
      Config child = c;
      Observer next(obs);
      const Event ev = step_in_place(child, t);
      path_.push_back(t);
      auto violation = next.observe(ev);
      if (violation) {
        add_finding(Finding::Kind::kSafety, violation->predicate + ": " + violation->detail);
      } else if (auto bad = next.violated_instances(); !bad.empty()) {
        merge_liveness(next);
        add_finding(Finding::Kind::kLiveness, bad.front() + " violated after '" +
                                                  (event_text(ev) ? *event_text(ev) : ev.value) +
                                                  "'");
      } else {
        dfs(child, next, depth + 1);
      }
      path_.pop_back();
      if (stopped()) break;
    }
    on_stack_.erase(key);
  }

  const Config& initial_;
  const Observer& proto_;
  const ExploreOptions& opt_;
  ExplorationReport report_;
  std::unordered_map<Fingerprint, std::uint64_t, FingerprintHash> visited_;
  std::unordered_map<Fingerprint, Signature, FingerprintHash> samples_;
  std::unordered_set<Fingerprint, FingerprintHash> on_stack_;
  std::set<std::pair<int, std::string>> finding_keys_;
  std::vector<Transition> path_;
};

}  // namespace

ExplorationReport explore(const Config& config, const Observer& prototype,
                          const ExploreOptions& options) {
  if (options.depth < 1) throw std::invalid_argument("exploration depth must be at least 1");
  return Explorer(config, prototype, options).run();
}

bool replay_witness(const Config& initial, const Observer& prototype,
                    const Finding& finding) {
  Config c = initial;
  c.record_events = true;
  Observer obs(prototype);
  std::optional<SafetyViolation> violation;
  try {
    for (const auto& t : finding.path) {
      const Event ev = step_in_place(c, t);
      violation = obs.observe(ev);
    }
  } catch (const IllegalTransition&) {
    return false;
  }
  if (c.events != finding.witness) return false;
  switch (finding.kind) {
    case Finding::Kind::kDeadlock:
      return detect_deadlock(c) && describe_deadlock(c) == finding.detail;
    case Finding::Kind::kSafety:
      return violation.has_value() &&
             violation->predicate + ": " + violation->detail == finding.detail;
    case Finding::Kind::kLiveness:
      return !obs.violated_instances().empty();
  }
  return false;
}

}  // namespace piadl::verifier
