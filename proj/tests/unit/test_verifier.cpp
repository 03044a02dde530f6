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

#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "piadl/parser.hpp"
#include "piadl/trace_io.hpp"
#include "piadl/transport.hpp"
#include "piadl/verifier.hpp"
#include "test_support.hpp"

using namespace piadl;
using namespace piadl::verifier;
using piadl::test::corpus_file;
using world::SafetyPredicate;
using world::WorldState;

namespace {

Config listing_config(std::int64_t start, std::int64_t stock,
                      const std::string& file = "transport.adl") {
  return load(parse_architecture(corpus_file(file)),
              {Value::Int(start), Value::Int(stock)});
}

WorldState carrier_at(int sign, bool loaded) {
  WorldState w = WorldState::with_stock(0);
  w.carriers["c"] = {sign, loaded, false, world::kAwaitNothing};
  return w;
}

Fingerprint replay_path(Config c, const std::vector<Transition>& path) {
  for (const auto& t : path) step_in_place(c, t);
  return fingerprint(c);
}

// Drives a seeded run by hand so the final configuration is available.
Config seeded_final(Config c, std::uint64_t seed, std::uint64_t max_steps) {
  Scheduler s(SchedulePolicy::Seeded(seed));
  for (std::uint64_t i = 0; i < max_steps; ++i) {
    const auto en = enabled(c);
    if (en.empty()) break;
    step_in_place(c, schedule_pick(en, s));
  }
  return c;
}

Event ev(std::uint64_t step, Event::Kind kind, std::vector<Pid> pids,
         std::string channel, std::string value) {
  return {step, kind, std::move(pids), std::move(channel), std::move(value)};
}

}  // namespace

TEST_CASE("safety predicate examples") {
  const auto w = carrier_at(3, true);
  const auto p = SafetyPredicate::parse("is_Full(c) && can_movetoNext(3)");
  CHECK(eval_safety(p, w));
  CHECK(eval_safety(SafetyPredicate::parse("is_Full(c) && can_movetoNext(sn)"), w,
                    {"c", 3}));

  auto blocked = w;
  blocked.carriers["d"] = {4, false, false, world::kAwaitNothing};
  CHECK_FALSE(eval_safety(SafetyPredicate::parse("can_movetoNext(3)"), blocked));
  CHECK(eval_safety(SafetyPredicate::parse("can_movetoNext(4)"), blocked));

  CHECK_THROWS_AS(eval_safety(SafetyPredicate::parse("is_Full(z)"), w), world::UnknownEntity);
  CHECK_THROWS_AS(eval_safety(SafetyPredicate::parse("can_movetoNext(12)"), w),
                  world::UnknownEntity);
}

TEST_CASE("safety predicate atoms and connectives") {
  auto w = carrier_at(9, false);
  w.stockA = 2;
  w.initial_stock = 2;
  auto yes = [&](const char* src) { return eval_safety(SafetyPredicate::parse(src), w); };
  CHECK(yes("at(c, 9)"));
  CHECK_FALSE(yes("at(c, 8)"));
  CHECK(yes("can_movetoNext(9)"));
  CHECK(yes("!is_Full(c)"));
  CHECK(yes("count(A) == 2 && count(B) < 1"));
  CHECK(yes("count(A) >= 2 || false"));
  CHECK_FALSE(yes("count(A) > 2"));
  CHECK(yes("conserved && no_collision && true"));
  CHECK(yes("!(false || !true)"));
  for (const char* bad : {"", "is_Full(", "count(C) == 1", "&& true", "mystery", "true true"}) {
    CAPTURE(std::string(bad));
    CHECK_THROWS_AS(SafetyPredicate::parse(bad), world::PredicateError);
  }
}

TEST_CASE("world collision and conservation") {
  WorldState w = WorldState::with_stock(2);
  w.carriers["1"] = {4, true, false, 0};
  w.carriers["2"] = {4, false, false, 0};
  w.stockA = 1;
  CHECK(w.collision().has_value());
  CHECK(w.conserved());
  CHECK(w.loaded_count() == 1);
  w.carriers["2"].position = 0;
  w.carriers["3"] = {0, false, false, 0};
  CHECK_FALSE(w.collision().has_value());
  w.stockB = 1;
  CHECK_FALSE(w.conserved());
}

TEST_CASE("check_trace on a nominal run") {
  const auto t = run(listing_config(1, 1), SchedulePolicy::Deterministic(), 10000);
  REQUIRE(t.verdict == RunVerdict::kCompleted);
  const auto report = check_trace(t, transport::make_observer(1));
  CHECK(report.safe());
  CHECK(report.roles.at("Move_full") == gaia::Verdict::kAccepting);
  CHECK(report.roles.at("Move_empty") == gaia::Verdict::kAccepting);
  CHECK(report.final_world.stockB == 1);

  // The oracle agrees on the carrier's role symbols.
  const auto& role = transport::roles()->role("Move_full");
  std::vector<std::string> word;
  std::set<Pid> carrier;
  for (const auto& e : t.events) {
    if (e.kind == Event::Kind::kSpawn && e.channel == "MOVE_FULL") carrier.insert(e.pids[1]);
    if (e.kind == Event::Kind::kFork && carrier.count(e.pids[0]))
      carrier.insert(e.pids.begin() + 1, e.pids.end());
    if (e.kind == Event::Kind::kOutput && carrier.count(e.pids[0])) {
      auto s = event_text(e);
      if (s && role.alphabet().count(*s)) word.push_back(*s);
    }
  }
  CHECK(word.size() == 15);
  CHECK(gaia::brute_force_accepts(role.closed_liveness(), word));
  CHECK(check_trace(t, transport::make_observer(1)).roles == report.roles);
}

TEST_CASE("check_trace on an empty trace") {
  const auto report = check_trace(Trace{}, transport::make_observer(0));
  CHECK(report.safe());
  for (const auto& [role, v] : report.roles) {
    CAPTURE(role);
    CHECK(v == gaia::Verdict::kPossible);
  }
}

TEST_CASE("check_trace flags a forged collision") {
  Trace t;
  t.events = {
      ev(1, Event::Kind::kSpawn, {0, 1}, "MOVE_FULL", "1"),
      ev(2, Event::Kind::kSpawn, {0, 2}, "MOVE_FULL", "1"),
      ev(3, Event::Kind::kOutput, {1}, "out", "\"readSign\""),
      ev(4, Event::Kind::kOutput, {1}, "out", "4"),
      ev(5, Event::Kind::kOutput, {2}, "out", "\"readSign\""),
      ev(6, Event::Kind::kOutput, {2}, "out", "4"),
  };
  const auto report = check_trace(t, transport::make_observer(0));
  REQUIRE_FALSE(report.safe());
  CHECK(report.safety->step == 6);
  CHECK(report.safety->predicate == "no_collision");
  CHECK(report.safety->detail.find("share sign 4") != std::string::npos);

  const auto text = trace_to_string(t);
  const auto again = check_trace(trace_from_string(text), transport::make_observer(0));
  CHECK(again.safety->step == 6);
}

TEST_CASE("detect_deadlock") {
  SUBCASE("terminated") {
    auto c = load(parse_architecture("B names behaviour { }"), {});
    step_in_place(c, enabled(c)[0]);
    CHECK_FALSE(detect_deadlock(c));
  }
  SUBCASE("lone receiver") {
    const auto c = load(parse_architecture(
                            "B names behaviour { c: Connection[Integer]; x: Integer; via c receive x; }"),
                        {});
    CHECK(detect_deadlock(c));
  }
  SUBCASE("matched pair") {
    auto c = load(parse_architecture(
                      "B names behaviour { c: Connection[Integer]; x: Integer;"
                      " compose { via c send 1; and via c receive x; } }"),
                  {});
    while (true) {
      const auto en = enabled(c);
      REQUIRE_FALSE(en.empty());
      if (en.size() == 1 && en[0].kind == Transition::Kind::kRendezvous) break;
      step_in_place(c, en[0]);
    }
    CHECK_FALSE(detect_deadlock(c));
  }
}

TEST_CASE("explore the listing with one unit of stock") {
  ExploreOptions opt;
  opt.depth = 200;
  const auto r = explore(listing_config(1, 1), transport::make_observer(1), opt);
  CHECK(r.findings.empty());
  CHECK_FALSE(r.budget_exceeded);
  CHECK(r.truncated == 0);
  CHECK(r.states > 1000);
  CHECK(r.maximal_paths > 0);
  CHECK(r.fingerprint_checks > 0);
  CHECK(r.fingerprint_mismatches == 0);
  CHECK(r.liveness.at("Move_full") == gaia::Verdict::kAccepting);
  CHECK(r.str().find("states=" + std::to_string(r.states)) != std::string::npos);
}

TEST_CASE("explore finds the dropped handshake deadlock") {
  for (bool reduce : {false, true}) {
    CAPTURE(reduce);
    ExploreOptions opt;
    opt.reduce_local_steps = reduce;
    const auto init = listing_config(1, 1, "mutants/drop_con_A.adl");
    const auto r = explore(init, transport::make_observer(1), opt);
    REQUIRE(r.count(Finding::Kind::kDeadlock) >= 1);
    const auto& f = r.findings.front();
    CHECK(f.detail.find("STOREHOUSE_A blocked-receive") != std::string::npos);
    CHECK(f.witness.size() == f.path.size());
    CHECK(replay_witness(init, transport::make_observer(1), f));
    Config end = init;
    for (const auto& t : f.path) step_in_place(end, t);
    CHECK(detect_deadlock(end));
    CHECK(r.str().rfind("DEADLOCK ", 0) == 0);
  }
}

TEST_CASE("a forged witness does not replay") {
  const auto init = listing_config(1, 1, "mutants/drop_con_A.adl");
  const auto r = explore(init, transport::make_observer(1), {});
  REQUIRE_FALSE(r.findings.empty());
  auto f = r.findings.front();
  f.path.pop_back();
  f.witness.pop_back();
  CHECK_FALSE(replay_witness(init, transport::make_observer(1), f));
}

TEST_CASE("explore a lone receiver") {
  const auto c = load(parse_architecture(
                          "B names behaviour { c: Connection[Integer]; x: Integer; via c receive x; }"),
                      {});
  const auto r = explore(c, Observer(transport::roles(), std::make_unique<NullReducer>()), {});
  REQUIRE(r.count(Finding::Kind::kDeadlock) == 1);
  CHECK(r.findings[0].path.size() <= 1);
}

TEST_CASE("explore finds the skipped sign read") {
  const auto init = listing_config(1, 1, "mutants/skip_readSign.adl");
  const auto r = explore(init, transport::make_observer(1), {});
  REQUIRE_FALSE(r.findings.empty());
  for (const auto& f : r.findings) CHECK(replay_witness(init, transport::make_observer(1), f));
  CHECK(r.count(Finding::Kind::kLiveness) + r.count(Finding::Kind::kSafety) >= 1);
}

TEST_CASE("exploration limits") {
  ExploreOptions opt;
  opt.state_cap = 100;
  const auto capped = explore(listing_config(1, 1), transport::make_observer(1), opt);
  CHECK(capped.budget_exceeded);
  CHECK(capped.states <= 101);

  ExploreOptions shallow;
  shallow.depth = 10;
  const auto cut = explore(listing_config(1, 1), transport::make_observer(1), shallow);
  CHECK(cut.truncated > 0);
  CHECK(cut.max_depth <= 10);

  ExploreOptions one;
  one.max_findings = 1;
  const auto r = explore(listing_config(1, 2, "mutants/skip_readSign.adl"),
                         transport::make_observer(2), one);
  CHECK(r.findings.size() == 1);

  setenv("ADL_STATE_CAP", "1234", 1);
  CHECK(state_cap_from_env() == 1234);
  setenv("ADL_STATE_CAP", "junk", 1);
  CHECK(state_cap_from_env(77) == 77);
  unsetenv("ADL_STATE_CAP");
  CHECK(state_cap_from_env(88) == 88);
}

TEST_CASE("exploration covers every seeded run") {
  for (const char* file : {"mutants/drop_con_A.adl", "transport.adl"}) {
    CAPTURE(std::string(file));
    const auto init = listing_config(1, 1, file);
    ExploreOptions opt;
    opt.max_findings = 1000;
    const auto r = explore(init, transport::make_observer(1), opt);
    std::set<std::pair<std::uint64_t, std::uint64_t>> found;
    for (const auto& f : r.findings) {
      if (f.kind != Finding::Kind::kDeadlock) continue;
      const auto fp = replay_path(init, f.path);
      found.insert({fp.hi, fp.lo});
    }
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto end = seeded_final(init, seed, opt.depth);
      if (!detect_deadlock(end)) continue;
      const auto fp = fingerprint(end);
      CHECK(found.count({fp.hi, fp.lo}) == 1);
    }
  }
}

TEST_CASE("seeded safety violations are found by exploration") {
  const auto init = listing_config(1, 1, "mutants/skip_readSign.adl");
  const auto r = explore(init, transport::make_observer(1), {});
  std::set<std::string> predicates;
  for (const auto& f : r.findings)
    if (f.kind == Finding::Kind::kSafety) predicates.insert(f.detail.substr(0, f.detail.find(':')));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = run(init, SchedulePolicy::Seeded(seed), 200);
    const auto rep = check_trace(t, transport::make_observer(1));
    if (rep.safety) CHECK(predicates.count(rep.safety->predicate) == 1);
  }
}

TEST_CASE("finding kind names") {
  CHECK(std::string(to_string(Finding::Kind::kDeadlock)) == "DEADLOCK");
  CHECK(std::string(to_string(Finding::Kind::kSafety)) == "SAFETY-VIOLATION");
  CHECK(std::string(to_string(Finding::Kind::kLiveness)) == "LIVENESS-VIOLATION");
}
