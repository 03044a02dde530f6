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

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "piadl/parser.hpp"
#include "piadl/runtime.hpp"
#include "piadl/trace_io.hpp"
#include "test_support.hpp"

using namespace piadl;
using piadl::test::corpus_file;

namespace {

ArchitectureDef listing() {
  static const ArchitectureDef arch = parse_architecture(corpus_file("transport.adl"));
  return arch;
}

std::vector<Value> ints(std::initializer_list<std::int64_t> xs) {
  std::vector<Value> out;
  for (auto x : xs) out.push_back(Value::Int(x));
  return out;
}

using Projection = std::multiset<std::pair<std::string, std::vector<std::string>>>;

// Straight-line reference for the listing: outputs per spawned agent.
struct ListingReference {
  Projection agents;

  void move_full(std::int64_t stock, std::int64_t pos) {
    std::vector<std::string> o;
    auto say = [&](auto v) {
      if constexpr (std::is_integral_v<decltype(v)>)
        o.push_back(std::to_string(v));
      else
        o.push_back(v);
    };
    if (pos < 1 || pos > 7) {
      say("Invalid position for Full carrier");
      agents.insert({"MOVE_FULL", o});
      return;
    }
    if (stock == 0) {
      say("No stock to transfer");
      agents.insert({"MOVE_FULL", o});
      return;
    }
    while (pos >= 1 && pos <= 6) {
      if (pos == 1) say("loadCarrier");
      say("readSign");
      say(pos);
      say("movetoNext");
      ++pos;
      say(pos);
      if (pos == 7) {
        say("readUnloadSign");
        say("waitforUnloading");
        say("unloadCarrier");
      }
    }
    agents.insert({"MOVE_FULL", o});
    storehouse_a(stock);
    move_empty(stock);
  }

  void storehouse_a(std::int64_t n) {
    std::vector<std::string> o{"Empty carrier at the LOADER",
                               "No of stock at STOREHOUSE_A = ", std::to_string(n)};
    if (n > 0) {
      o.push_back("decrementStock_at_STOREHOUSE_A");
      --n;
    }
    if (n == 0) o.push_back("STOREHOUSE_A_Empty");
    agents.insert({"STOREHOUSE_A", o});
  }

  void move_empty(std::int64_t y) {
    const std::int64_t remaining = y - 1;
    agents.insert({"STOREHOUSE_B", {"STOREHOUSE_B_Full-count", "1"}});
    std::vector<std::string> o{"readSign", "8", "movetoNext", "9",
                               "readSign", "9", "movetoNext", "1",
                               "readLoadSign", "waitforLoading"};
    if (remaining == 0) o.push_back("carrierParked");
    agents.insert({"MOVE_EMPTY", o});
    if (remaining > 0) move_full(remaining, 1);
  }
};

std::string rendered_output(const Event& e) {
  if (auto i = event_int(e)) return std::to_string(*i);
  return event_text(e).value_or(e.value);
}

// Groups output events by spawned agent; compose branches belong to the
// agent that forked them.
Projection project(const Trace& t) {
  std::map<Pid, Pid> root{{0, 0}};
  std::map<Pid, std::string> tmpl{{0, "ROUTE"}};
  std::map<Pid, std::vector<std::string>> outs;
  for (const auto& e : t.events) {
    if (e.kind == Event::Kind::kSpawn) {
      root[e.pids[1]] = e.pids[1];
      tmpl[e.pids[1]] = e.channel;
    } else if (e.kind == Event::Kind::kFork) {
      for (std::size_t i = 1; i < e.pids.size(); ++i) root[e.pids[i]] = root.at(e.pids[0]);
    } else if (e.kind == Event::Kind::kOutput) {
      outs[root.at(e.pids[0])].push_back(rendered_output(e));
    }
  }
  Projection p;
  for (const auto& [pid, name] : tmpl)
    if (pid != 0) p.insert({name, outs[pid]});
  return p;
}

bool conforms(const Value& v, const AdlType& type, const Config& c) {
  if (!type.is_connection()) return v.is_int() || v.is_text();
  if (!v.is_chan()) return false;
  return c.channels.at(v.as_chan()).element == type.element();
}

const Statement* current_statement(const Config& c, Pid pid) {
  const auto& p = c.processes.at(pid);
  if (p.stack.empty()) return nullptr;
  const auto& f = p.stack.back();
  const auto& block = c.program->block(f.block);
  return f.index < block.size() ? &block[f.index] : nullptr;
}

}  // namespace

TEST_CASE("load the listing") {
  const auto c = load(listing(), ints({1, 3}));
  REQUIRE(c.processes.size() == 1);
  CHECK(c.program->tmpl(c.processes[0].template_index).def->name == "ROUTE");
  CHECK(c.channels.size() == 1);
  CHECK(c.channels[0].name == "moveFull_Conn");
  CHECK(c.step == 0);
  CHECK(c.events.empty());
}

TEST_CASE("an empty behaviour terminates on its first step") {
  auto c = load(parse_architecture("B names behaviour { }"), {});
  const auto en = enabled(c);
  REQUIRE(en.size() == 1);
  const auto ev = step_in_place(c, en[0]);
  CHECK(ev.kind == Event::Kind::kDone);
  CHECK(c.all_terminated());
  CHECK(enabled(c).empty());
}

TEST_CASE("missing input blocks forever") {
  const auto t = run(listing(), ints({1}), SchedulePolicy::Deterministic(), 1000);
  CHECK(t.verdict == RunVerdict::kDeadlocked);
}

TEST_CASE("a matching send and receive give one rendezvous") {
  auto c = load(parse_architecture(
                    "B names behaviour { c: Connection[Integer]; x: Integer;"
                    " compose { via c send 5; and via c receive x; } }"),
                {});
  int rendezvous = 0;
  for (int i = 0; i < 10 && rendezvous == 0; ++i) {
    const auto en = enabled(c);
    REQUIRE_FALSE(en.empty());
    for (const auto& t : en)
      if (t.kind == Transition::Kind::kRendezvous) ++rendezvous;
    if (rendezvous == 0) step_in_place(c, en[0]);
  }
  CHECK(rendezvous == 1);
}

TEST_CASE("a lone receiver deadlocks") {
  auto c = load(parse_architecture(
                    "B names behaviour { c: Connection[Integer]; x: Integer; via c receive x; }"),
                {});
  CHECK(enabled(c).empty());
  CHECK_FALSE(c.all_terminated());
  CHECK(c.status(0) == ProcessStatus::kBlockedReceive);
}

TEST_CASE("ROUTE spawns MOVE_FULL with an aliased connection") {
  auto c = load(listing(), ints({1, 3}));
  const ChannelId route_conn = c.processes[0].env.at(
      c.program->tmpl(c.processes[0].template_index).slot_of.at("moveFull_Conn")).as_chan();
  for (int guard = 0; guard < 50; ++guard) {
    const auto en = enabled(c);
    REQUIRE_FALSE(en.empty());
    auto spawn = std::find_if(en.begin(), en.end(), [](const Transition& t) {
      return t.kind == Transition::Kind::kSpawn;
    });
    if (spawn == en.end()) {
      step_in_place(c, en[0]);
      continue;
    }
    const auto ev = step_in_place(c, *spawn);
    CHECK(ev.channel == "MOVE_FULL");
    CHECK(ev.value == "3");
    const auto& child = c.processes.at(ev.pids[1]);
    const auto& info = c.program->tmpl(child.template_index);
    CHECK(info.def->name == "MOVE_FULL");
    CHECK(child.env.at(info.slot_of.at("full_Conn")).as_chan() == route_conn);
    CHECK(child.env.at(info.slot_of.at("x")).as_int() == 3);
    return;
  }
  FAIL("no spawn within 50 steps");
}

TEST_CASE("a channel sent over a channel is used by the receiver") {
  const auto t = run(listing(), ints({1, 1}), SchedulePolicy::Deterministic(), 10000);
  REQUIRE(t.verdict == RunVerdict::kCompleted);
  std::map<Pid, std::string> tmpl;
  for (const auto& e : t.events)
    if (e.kind == Event::Kind::kSpawn) tmpl[e.pids[1]] = e.channel;
  const Event* mobile = nullptr;
  const Event* use = nullptr;
  for (const auto& e : t.events) {
    if (e.kind != Event::Kind::kRendezvous) continue;
    if (e.channel.rfind("con_A#", 0) == 0 && e.value.rfind("p#", 0) == 0) mobile = &e;
    if (mobile && e.channel == mobile->value && tmpl[e.pids[1]] == "STOREHOUSE_A") use = &e;
  }
  REQUIRE(mobile != nullptr);
  CHECK(tmpl[mobile->pids[1]] == "STOREHOUSE_A");
  REQUIRE(use != nullptr);
  CHECK(use->value == "1");
  CHECK(use->pids[1] == mobile->pids[1]);
}

TEST_CASE("done and assignment") {
  const auto t = run(parse_architecture(
                         "B names behaviour { x: Integer; x = 1; x = x - 1;"
                         " via out send x; done; via out send 9; }"),
                     {}, SchedulePolicy::Deterministic(), 100);
  CHECK(t.outputs() == std::vector<std::string>{"0"});
  CHECK(t.events.back().kind == Event::Kind::kDone);
  CHECK(t.verdict == RunVerdict::kCompleted);
}

TEST_CASE("deterministic pick prefers the lower pid") {
  const std::vector<Transition> cands{
      {Transition::Kind::kInternal, 7, 7, kNoChannel},
      {Transition::Kind::kInternal, 3, 3, kNoChannel}};
  Scheduler s(SchedulePolicy::Deterministic());
  CHECK(schedule_pick(cands, s).pid == 3);
}

TEST_CASE("seeded picks are reproducible") {
  Scheduler a(SchedulePolicy::Seeded(42)), b(SchedulePolicy::Seeded(42));
  for (int i = 0; i < 1000; ++i) CHECK(a.pick_index(5) == b.pick_index(5));
}

TEST_CASE("seeded picks follow the documented generator") {
  std::uint64_t state = 42;
  Scheduler s(SchedulePolicy::Seeded(42));
  for (int i = 0; i < 100; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    CHECK(s.pick_index(7) == (state >> 33) % 7);
  }
}

TEST_CASE("seeded binary picks are balanced") {
  for (std::uint64_t seed : {1ULL, 7ULL, 42ULL, 2026ULL}) {
    CAPTURE(seed);
    Scheduler s(SchedulePolicy::Seeded(seed));
    int ones = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) ones += static_cast<int>(s.pick_index(2));
    CHECK(ones >= n * 45 / 100);
    CHECK(ones <= n * 55 / 100);
    const double e = n / 2.0;
    const double chi2 = ((ones - e) * (ones - e) + ((n - ones) - e) * ((n - ones) - e)) / e;
    CHECK(chi2 < 10.83);  // 1 dof, p = 0.001
  }
}

TEST_CASE("run examples") {
  SUBCASE("no stock") {
    const auto t = run(listing(), ints({1, 0}), SchedulePolicy::Deterministic(), 1000);
    CHECK(t.verdict == RunVerdict::kCompleted);
    const auto out = t.outputs();
    auto it = std::find(out.begin(), out.end(), "No stock to transfer");
    REQUIRE(it != out.end());
    bool done_after = false;
    bool seen = false;
    for (const auto& e : t.events) {
      if (e.kind == Event::Kind::kOutput && e.value == "\"No stock to transfer\"") seen = true;
      if (seen && e.kind == Event::Kind::kDone) done_after = true;
    }
    CHECK(done_after);
  }
  SUBCASE("invalid position") {
    const auto t = run(listing(), ints({9, 5}), SchedulePolicy::Deterministic(), 1000);
    const auto out = t.outputs();
    CHECK(std::find(out.begin(), out.end(), "Invalid position for Full carrier") != out.end());
  }
  SUBCASE("one unit of stock") {
    const auto t = run(listing(), ints({1, 1}), SchedulePolicy::Deterministic(), 10000);
    const auto out = t.outputs();
    auto at = [&](const std::string& s) { return std::find(out.begin(), out.end(), s); };
    auto header = at("No of stock at STOREHOUSE_A = ");
    REQUIRE(header != out.end());
    REQUIRE(header + 1 != out.end());
    CHECK(*(header + 1) == "1");
    CHECK(at("decrementStock_at_STOREHOUSE_A") != out.end());
    CHECK(at("STOREHOUSE_A_Empty") != out.end());
  }
}

TEST_CASE("outputs agree with the straight-line reference") {
  for (std::int64_t start = 0; start <= 9; ++start) {
    for (std::int64_t stock = 0; stock <= 3; ++stock) {
      ListingReference ref;
      ref.move_full(stock, start);
      for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        CAPTURE(start);
        CAPTURE(stock);
        CAPTURE(seed);
        const auto policy = seed == 0 ? SchedulePolicy::Deterministic()
                                      : SchedulePolicy::Seeded(seed);
        const auto t = run(listing(), ints({start, stock}), policy, 100000);
        CHECK(t.verdict == RunVerdict::kCompleted);
        CHECK(project(t) == ref.agents);
      }
    }
  }
}

TEST_CASE("runs preserve the state invariants") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    auto c = load(listing(), ints({static_cast<std::int64_t>(seed % 8),
                                   static_cast<std::int64_t>(seed % 4)}));
    Scheduler sched(SchedulePolicy::Seeded(seed));
    std::size_t spawned = 0;
    std::size_t forked = 0;
    for (int i = 0; i < 5000; ++i) {
      const auto en = enabled(c);
      if (en.empty()) break;
      const auto& t = schedule_pick(en, sched);
      const Statement* rs = t.kind == Transition::Kind::kRendezvous
                                ? current_statement(c, t.partner)
                                : nullptr;
      const std::uint64_t before = c.step;
      const auto ev = step_in_place(c, t);
      REQUIRE(c.step == before + 1);
      REQUIRE(c.events.size() == c.step);
      if (ev.kind == Event::Kind::kSpawn) ++spawned;
      if (ev.kind == Event::Kind::kFork) forked += ev.pids.size() - 1;
      if (ev.kind == Event::Kind::kRendezvous) {
        REQUIRE(ev.pids.size() == 2);
        REQUIRE(rs != nullptr);
        const auto& recv = c.processes.at(ev.pids[1]);
        const auto& info = c.program->tmpl(recv.template_index);
        CHECK(render_value(recv.env.at(info.slot_of.at(rs->target)), c.channels) == ev.value);
      }
      REQUIRE(c.processes.size() == 1 + spawned + forked);
      std::size_t terminated = 0;
      for (const auto& p : c.processes) {
        if (p.terminated) {
          ++terminated;
          CHECK(p.stack.empty());
        }
        const auto& info = c.program->tmpl(p.template_index);
        for (std::size_t s = 0; s < p.env.size(); ++s)
          CHECK(conforms(p.env[s], info.slot_types[s], c));
      }
      CHECK(terminated + c.live_count() == c.processes.size());
    }
  }
}

TEST_CASE("runs are deterministic") {
  const auto a = run(listing(), ints({1, 2}), SchedulePolicy::Deterministic(), 100000);
  const auto b = run(listing(), ints({1, 2}), SchedulePolicy::Deterministic(), 100000);
  CHECK(a.events == b.events);
  for (std::uint64_t seed : {3ULL, 17ULL}) {
    const auto x = run(listing(), ints({1, 2}), SchedulePolicy::Seeded(seed), 100000);
    const auto y = run(listing(), ints({1, 2}), SchedulePolicy::Seeded(seed), 100000);
    CHECK(trace_to_string(x) == trace_to_string(y));
  }
}

TEST_CASE("renamed connections reach the parent") {
  const auto t = run(parse_architecture(
                         "B names behaviour { a: Connection[Integer]; v: Integer;\n"
                         " compose { via P send 0 where {a renames b};\n"
                         " and via a send 41; via a receive v; via out send v; } }\n"
                         "value P is abstraction(x: Integer) { b: Connection[Integer]; y: Integer;\n"
                         " via b receive y; via b send y + 1; }"),
                     {}, SchedulePolicy::Deterministic(), 1000);
  CHECK(t.verdict == RunVerdict::kCompleted);
  CHECK(t.outputs() == std::vector<std::string>{"42"});
}

TEST_CASE("the budget stops a run") {
  const auto t = run(parse_architecture(
                         "B names behaviour { x: Integer; while(x == 0) do { x = 0; } }"),
                     {}, SchedulePolicy::Deterministic(), 50);
  CHECK(t.verdict == RunVerdict::kBudgetExhausted);
  CHECK(t.events.size() == 50);
}

TEST_CASE("a disabled transition is rejected") {
  auto c = load(listing(), ints({1, 1}));
  CHECK_THROWS_AS(step_in_place(c, {Transition::Kind::kRendezvous, 0, 5, 0}),
                  IllegalTransition);
}

TEST_CASE("independent steps commute on the fingerprint") {
  auto c = load(parse_architecture(
                    "B names behaviour { x: Integer; y: Integer;"
                    " compose { x = 1; and y = 2; } }"),
                {});
  while (true) {
    const auto en = enabled(c);
    if (en.size() >= 2) break;
    REQUIRE(en.size() == 1);
    step_in_place(c, en[0]);
  }
  const auto en = enabled(c);
  auto ab = step(step(c, en[0]).first, en[1]).first;
  auto ba = step(step(c, en[1]).first, en[0]).first;
  CHECK(fingerprint(ab) == fingerprint(ba));
  CHECK(fingerprint(ab, false) == fingerprint(ba, false));
  CHECK_FALSE(fingerprint(ab) == fingerprint(c));
}

TEST_CASE("parse_inputs") {
  const auto v = parse_inputs("1,-2,abc");
  REQUIRE(v.size() == 3);
  CHECK(v[0] == Value::Int(1));
  CHECK(v[1] == Value::Int(-2));
  CHECK(v[2] == Value::Text("abc"));
}

TEST_CASE("trace files round trip") {
  const auto t = run(listing(), ints({1, 1}), SchedulePolicy::Seeded(5), 10000);
  const auto text = trace_to_string(t);
  const auto back = trace_from_string(text);
  CHECK(back.events == t.events);
  CHECK(back.verdict == t.verdict);
  CHECK(trace_to_string(back) == text);
  CHECK(text.rfind("#adl-trace v1\n", 0) == 0);
}

TEST_CASE("malformed trace files") {
  auto line_of = [](const std::string& text) {
    try {
      trace_from_string(text);
    } catch (const MalformedTrace& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("") == 1);
  CHECK(line_of("1\toutput\t0\tout\t1\n") == 1);
  CHECK(line_of("#adl-trace v1\n1\tbogus\t0\tout\t1\n") == 2);
  CHECK(line_of("#adl-trace v1\n2\toutput\t0\tout\t1\n") == 2);
  CHECK(line_of("#adl-trace v1\n1\trendezvous\t0\tc\t1\n") == 2);
  CHECK(line_of("#adl-trace v1\n1\toutput\t0\tout\n") == 2);
  CHECK(line_of("#adl-trace v1\n1\toutput\tx\tout\t1\n") == 2);
  CHECK(line_of("#adl-trace v1\n1\toutput\t0\tout\t1\n#verdict nope\n") == 3);
  CHECK(line_of("#adl-trace v1\n1\toutput\t0\tout\t1\n#verdict deadlocked\n") == -1);
}
