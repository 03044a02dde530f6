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

#include "piadl/transport.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "piadl/parser.hpp"

namespace piadl::transport {

std::vector<int> full_route() { return {1, 2, 3, 4, 5, 6, 7}; }
std::vector<int> return_route() { return {8, 9}; }

// ---------------------------------------------------------------------------
// Fleet variant

namespace {

void wait_for_sign(std::ostream& os, const std::string& pos) {
  os << "next_part = " << pos << " + 1;\n";
  if (pos == "pos_empty") os << "if(next_part == 10) do\nnext_part = 1;\n";
  os << "ok = 0;\n"
        "/// ask the road keeper for the next partition until it is free\n"
        "while(ok == 0) do{\n"
        "via road send me;\n"
        "via me send id;\n"
        "via me send next_part;\n"
        "via me receive ok;\n"
        "if(ok == 0) do{\n"
        "via out send \"collisionSensorTrue\";\n"
        "via out send \"carrierWait\"; }\n"
        "}\n";
  os << "via out send \"readSign\";\n"
        "via out send " << pos << ";\n"
        "via out send \"movetoNext\";\n"
     << pos << " = next_part;\n"
        "via out send " << pos << ";\n"
        "/// release the partition left behind\n"
        "via road send me;\n"
        "via me send id;\n"
        "via me send 0;\n";
}

void retire(std::ostream& os) {
  os << "via road send me;\n"
        "via me send id;\n"
        "via me send -1;\n";
}

void carrier_decls(std::ostream& os) {
  os << "id: Integer;\n"
        "next_part: Integer;\n"
        "ok: Integer;\n"
        "init: Connection[Integer];\n"
        "me: Connection[Integer];\n";
}

}  // namespace

std::string fleet_source(int carriers) {
  if (carriers < 2 || carriers > 3)
    throw InvalidScenario("the fleet variant needs 2 or 3 carriers");
  std::ostringstream os;
  const auto each = [&](auto&& f) {
    for (int i = 1; i <= carriers; ++i) f(std::to_string(i));
  };

  os << "/// FLEET is the main behaviour of the multi-carrier transport:\n"
        "/// it reads a start sign and a stock share per carrier, starts the\n"
        "/// road keeper and then the carriers\n"
        "FLEET names behaviour\n{\n"
        "road: Connection[Connection[Integer]];\n"
        "setup: Connection[Integer];\n";
  each([&](const std::string& i) { os << "init" << i << ": Connection[Integer];\n"; });
  each([&](const std::string& i) {
    os << "start" << i << ": Integer;\nshare" << i << ": Integer;\n";
  });
  each([&](const std::string& i) {
    os << "via in receive start" << i << ";\nvia in receive share" << i << ";\n";
  });
  os << "compose {\n"
        "via ROAD send road where {setup renames init};\n"
        "and\n"
        "via setup send " << carriers << ";\n";
  each([&](const std::string& i) { os << "via setup send start" << i << ";\n"; });
  os << "compose {\n";
  each([&](const std::string& i) {
    if (i != "1") os << "and\n";
    const bool full = i == "1";
    os << "via " << (full ? "MOVE_FULL" : "MOVE_EMPTY") << " send road where {init" << i
       << " renames init};\n"
          "and\n"
          "via init" << i << " send " << i << ";\n"
          "via init" << i << " send start" << i << ";\n"
          "via init" << i << " send share" << i << ";\n";
    if (!full) os << "via init" << i << " send 0;\n";
  });
  os << "}/// end compose\n"
        "}/// end compose\n"
        "}/// end FLEET\n\n";

  os << "/// ROAD keeps, per carrier, the partition it occupies and the one it\n"
        "/// has claimed; a claim succeeds only on a partition no other carrier\n"
        "/// holds. Requests: a sign claims it, 0 releases, -1 retires\n"
        "value ROAD is abstraction(road: Connection[Connection[Integer]])\n{\n"
        "init: Connection[Integer];\n"
        "cl: Connection[Integer];\n"
        "active: Integer;\n"
        "id: Integer;\n"
        "sg: Integer;\n"
        "ok: Integer;\n";
  each([&](const std::string& i) { os << "at" << i << ": Integer;\nclaim" << i << ": Integer;\n"; });
  os << "via init receive active;\n";
  each([&](const std::string& i) {
    os << "via init receive at" << i << ";\nclaim" << i << " = at" << i << ";\n";
  });
  os << "while(active > 0) do{\n"
        "via road receive cl;\n"
        "via cl receive id;\n"
        "via cl receive sg;\n"
        "if(sg > 0) do{\n"
        "ok = 1;\n";
  each([&](const std::string& i) {
    os << "if(id == " << i << ") do{\n";
    std::string cond;
    each([&](const std::string& j) {
      if (j == i) return;
      if (!cond.empty()) cond += " || ";
      cond += "sg == at" + j + " || sg == claim" + j;
    });
    os << "if(" << cond << ") do\nok = 0;\n"
       << "if(ok == 1) do\nclaim" << i << " = sg; }\n";
  });
  os << "via cl send ok; }\n"
        "if(sg == 0) do{\n";
  each([&](const std::string& i) {
    os << "if(id == " << i << ") do\nat" << i << " = claim" << i << ";\n";
  });
  os << "}\n"
        "if(sg < 0) do{\n";
  each([&](const std::string& i) {
    os << "if(id == " << i << ") do{\nat" << i << " = 0;\nclaim" << i << " = 0; }\n";
  });
  os << "active = active - 1; }\n"
        "}/// end while\n"
        "}/// end ROAD\n\n";

  os << "/// MOVE_FULL drives a loaded carrier from the loader to the unloader\n"
        "value MOVE_FULL is abstraction(road: Connection[Connection[Integer]])\n{\n";
  carrier_decls(os);
  os << "pos_full: Integer;\n"
        "stock: Integer;\n"
        "moveEmpty_Conn: Connection[Integer];\n"
        "con_A: Connection[Connection[Integer]];\n"
        "p: Connection[Integer];\n"
        "via init receive id;\n"
        "via init receive pos_full;\n"
        "via init receive stock;\n"
        "if(stock == 0) do\n"
        "{ via out send \"No stock to transfer\";\n";
  retire(os);
  os << "done; }\n"
        "while(pos_full >= 1 && pos_full <= 6) do{\n"
        "if(pos_full == 1) do\n"
        "via out send \"loadCarrier\";\n";
  wait_for_sign(os, "pos_full");
  os << "if(pos_full == 7) do{\n"
        "via out send \"readUnloadSign\";\n"
        "via out send \"waitforUnloading\";\n"
        "via out send \"unloadCarrier\"; }\n"
        "}/// end while\n"
        "if(pos_full == 7) do{\n"
        "compose {\n"
        "via STOREHOUSE_A send p where {con_A renames con_B};\n"
        "and\n"
        "via con_A send p;\n"
        "via p send stock;\n"
        "compose {\n"
        "via MOVE_EMPTY send road where {moveEmpty_Conn renames init};\n"
        "and\n"
        "via moveEmpty_Conn send id;\n"
        "via moveEmpty_Conn send pos_full;\n"
        "via moveEmpty_Conn send stock - 1;\n"
        "via moveEmpty_Conn send 1;\n"
        "}/// end compose\n"
        "}/// end compose\n"
        "}/// end if\n"
        "}/// end MOVE_FULL\n\n";

  os << "/// MOVE_EMPTY drives an empty carrier over the return road to the\n"
        "/// loader, then loads again or parks\n"
        "value MOVE_EMPTY is abstraction(road: Connection[Connection[Integer]])\n{\n";
  carrier_decls(os);
  os << "pos_empty: Integer;\n"
        "remaining: Integer;\n"
        "delivered: Integer;\n"
        "refull_Conn: Connection[Integer];\n"
        "con_D: Connection[Connection[Integer]];\n"
        "q: Connection[Integer];\n"
        "via init receive id;\n"
        "via init receive pos_empty;\n"
        "via init receive remaining;\n"
        "via init receive delivered;\n"
        "if(delivered == 1) do{\n"
        "compose {\n"
        "via STOREHOUSE_B send q where {con_D renames con_E};\n"
        "and\n"
        "via con_D send q;\n"
        "via q send 1;\n"
        "}/// end compose\n"
        "}\n"
        "while(pos_empty >= 7 && pos_empty <= 9) do{\n";
  wait_for_sign(os, "pos_empty");
  os << "}/// end while\n"
        "via out send \"readLoadSign\";\n"
        "via out send \"waitforLoading\";\n"
        "if(remaining > 0) do{\n"
        "compose {\n"
        "via MOVE_FULL send road where {refull_Conn renames init};\n"
        "and\n"
        "via refull_Conn send id;\n"
        "via refull_Conn send pos_empty;\n"
        "via refull_Conn send remaining;\n"
        "}/// end compose\n"
        "}\n"
        "if(remaining == 0) do{\n";
  retire(os);
  os << "via out send \"carrierParked\"; }\n"
        "}/// end MOVE_EMPTY\n\n";

  // The storehouses are the listing's, unchanged.
  const std::string_view listing = corpus_transport_adl();
  for (std::string_view name : {"value STOREHOUSE_A", "value STOREHOUSE_B"}) {
    const std::size_t b = listing.find(name);
    const std::string end = "/// end " + std::string(name.substr(6));
    const std::size_t e = listing.find(end, b);
    if (b == std::string_view::npos || e == std::string_view::npos)
      throw std::logic_error("corpus lacks " + std::string(name));
    os << listing.substr(b, e + end.size() - b) << "\n\n";
  }
  return os.str();
}

std::vector<Value> fleet_inputs(int carriers, std::int64_t stock, int start) {
  static constexpr int kStarts[] = {0, 9, 8};
  std::vector<Value> in;
  for (int i = 0; i < carriers; ++i) {
    const std::int64_t share = stock / carriers + (i < stock % carriers ? 1 : 0);
    in.push_back(Value::Int(i == 0 ? start : kStarts[i]));
    in.push_back(Value::Int(share));
  }
  return in;
}

Scenario build_architecture(int carriers, std::int64_t stock, int start) {
  if (carriers < 1 || carriers > 3)
    throw InvalidScenario("carriers must be between 1 and 3, got " + std::to_string(carriers));
  if (stock < 0) throw InvalidScenario("stock must not be negative");
  Scenario sc;
  sc.carriers = carriers;
  sc.stock = stock;
  if (carriers == 1) {
    sc.source = std::string(corpus_transport_adl());
    sc.inputs = {Value::Int(start), Value::Int(stock)};
  } else {
    if (start < 1 || start > 7)
      throw InvalidScenario("fleet carrier 1 must start on the full route (1..7)");
    sc.source = fleet_source(carriers);
    sc.inputs = fleet_inputs(carriers, stock, start);
  }
  sc.arch = parse_architecture(sc.source);
  return sc;
}

// ---------------------------------------------------------------------------
// Mutants

const char* to_string(Mutation m) {
  switch (m) {
    case Mutation::kDropConA: return "drop_con_A";
    case Mutation::kSkipReadSign: return "skip_readSign";
    case Mutation::kIgnoreCollision: return "ignore_collision";
  }
  return "?";
}

std::optional<Mutation> mutation_from_string(std::string_view s) {
  for (auto m : {Mutation::kDropConA, Mutation::kSkipReadSign, Mutation::kIgnoreCollision})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

namespace {

std::string replace(std::string_view src, std::string_view from, std::string_view to,
                    bool all) {
  std::string out(src);
  std::size_t at = out.find(from);
  if (at == std::string::npos)
    throw std::invalid_argument("mutation target '" + std::string(from) + "' not found");
  while (at != std::string::npos) {
    out.replace(at, from.size(), to);
    if (!all) break;
    at = out.find(from, at + to.size());
  }
  return out;
}

}  // namespace

std::string mutate(std::string_view source, Mutation m) {
  switch (m) {
    case Mutation::kDropConA:
      return replace(source, "via con_A send p;\n", "", false);
    case Mutation::kSkipReadSign: {
      // Only the MOVE_FULL loop; MOVE_EMPTY keeps reading signs.
      const std::size_t from = source.find("value MOVE_FULL");
      if (from == std::string_view::npos)
        throw std::invalid_argument("mutation target MOVE_FULL not found");
      return std::string(source.substr(0, from)) +
             replace(source.substr(from), "via out send \"readSign\";\n", "", false);
    }
    case Mutation::kIgnoreCollision:
      return replace(source, "via out send \"carrierWait\"; }\n",
                     "via out send \"carrierWait\";\nok = 1; }\n", true);
  }
  throw std::invalid_argument("unknown mutation");
}

std::string mutant_source(Mutation m) {
  if (m == Mutation::kIgnoreCollision) return mutate(fleet_source(2), m);
  return mutate(corpus_transport_adl(), m);
}

std::shared_ptr<const gaia::RoleModel> roles() {
  static const auto model =
      std::make_shared<const gaia::RoleModel>(gaia::parse_role_file(corpus_transport_roles()));
  return model;
}

std::int64_t initial_stock(const std::vector<Value>& inputs) {
  std::int64_t total = 0;
  for (std::size_t i = 1; i < inputs.size(); i += 2)
    if (inputs[i].is_int()) total += inputs[i].as_int();
  return total;
}

// ---------------------------------------------------------------------------
// World

world::WorldState world_reduce(world::WorldState s, const Event& event,
                               const std::string& carrier) {
  using verifier::InconsistentEvent;
  if (event.kind != Event::Kind::kOutput) return s;
  world::CarrierState* c = nullptr;
  if (!carrier.empty()) c = &s.carriers[carrier];

  const auto text = event_text(event);
  const auto number = event_int(event);
  const std::string who = "carrier " + carrier;

  if (text && *text == "decrementStock_at_STOREHOUSE_A") {
    if (s.unconfirmed_debits > 0) {
      --s.unconfirmed_debits;
    } else {
      if (s.stockA <= 0) throw InconsistentEvent("storehouse A debited while empty");
      --s.stockA;
    }
    return s;
  }
  if (c == nullptr) return s;

  if (number) {
    const int awaiting = c->awaiting;
    c->awaiting = world::kAwaitNothing;
    if (awaiting == world::kAwaitSign) {
      if (!world::is_sign(static_cast<int>(*number)))
        throw InconsistentEvent(who + " read an unknown sign " + std::to_string(*number));
      c->position = static_cast<int>(*number);
    } else if (awaiting == world::kAwaitArrival && *number != c->position) {
      throw InconsistentEvent(who + " reports sign " + std::to_string(*number) +
                              " after moving to " + std::to_string(c->position));
    }
    return s;
  }
  if (!text) return s;

  if (*text == "loadCarrier") {
    if (c->loaded) throw InconsistentEvent(who + " loaded twice");
    if (s.stockA <= 0) throw InconsistentEvent(who + " loaded from an empty storehouse A");
    c->loaded = true;
    --s.stockA;
    ++s.unconfirmed_debits;
  } else if (*text == "unloadCarrier") {
    if (!c->loaded) throw InconsistentEvent(who + " unloaded while empty");
    c->loaded = false;
    ++s.stockB;
    ++s.trips;
  } else if (*text == "readSign") {
    c->awaiting = world::kAwaitSign;
    c->waiting = false;
  } else if (*text == "movetoNext") {
    if (!world::is_sign(c->position))
      throw InconsistentEvent(who + " moves before reading a sign");
    c->position = world::next_sign(c->position);
    c->awaiting = world::kAwaitArrival;
    c->waiting = false;
  } else if (*text == "collisionSensorTrue" || *text == "carrierWait") {
    c->waiting = true;
  } else if (*text == "carrierParked") {
    c->position = 0;
    c->awaiting = world::kAwaitNothing;
  }
  return s;
}

TransportReducer::TransportReducer(std::int64_t stock)
    : state_(world::WorldState::with_stock(stock)) {}

std::unique_ptr<verifier::Reducer> TransportReducer::clone() const {
  return std::make_unique<TransportReducer>(*this);
}

void TransportReducer::apply(const Event& event, const verifier::Attribution& who) {
  state_ = world_reduce(state_, event, who.agent);
}

verifier::Observer make_observer(std::int64_t stock, bool strict) {
  return verifier::Observer(roles(), std::make_unique<TransportReducer>(stock), strict);
}

// ---------------------------------------------------------------------------
// Scenarios

std::string ScenarioSummary::str() const {
  std::ostringstream os;
  os << "carriers=" << carriers << " stock=" << stock << " seed=" << seed
     << " run=" << to_string(run) << " steps=" << steps << '\n';
  os << "trips=" << trips << " stockA=" << stockA << " stockB=" << stockB
     << " conserved=" << (conserved ? "yes" : "no") << '\n';
  if (safety)
    os << "safety=violated step=" << safety->step << ' ' << safety->predicate << ": "
       << safety->detail << '\n';
  else
    os << "safety=hold\n";
  for (const auto& [role, v] : verdicts) os << "role " << role << ' ' << gaia::to_string(v) << '\n';
  for (const auto& n : notes) os << "note " << n << '\n';
  return os.str();
}

ScenarioResult scenario(const Scenario& sc, SchedulePolicy policy, std::uint64_t max_steps,
                        bool strict) {
  ScenarioResult r;
  r.trace = run(sc.arch, sc.inputs, policy, max_steps);
  verifier::Observer obs = make_observer(sc.stock, strict);
  ScenarioSummary& s = r.summary;
  s.carriers = sc.carriers;
  s.stock = sc.stock;
  s.seed = policy.kind == SchedulePolicy::Kind::kSeeded ? policy.seed : 0;
  s.run = r.trace.verdict;
  s.steps = r.trace.events.size();
  for (const auto& e : r.trace.events) {
    auto v = obs.observe(e);
    if (v && !s.safety) s.safety = std::move(v);
    if (!obs.world().conserved()) s.conserved = false;
  }
  s.trips = obs.world().trips;
  s.stockA = obs.world().stockA;
  s.stockB = obs.world().stockB;
  s.verdicts = obs.role_verdicts();

  static constexpr std::string_view kNotable[] = {
      "No stock to transfer", "Invalid position for Full carrier", "STOREHOUSE_A_Empty"};
  const auto outs = r.trace.outputs();
  for (auto n : kNotable)
    if (std::find(outs.begin(), outs.end(), n) != outs.end()) s.notes.emplace_back(n);
  if (s.run != RunVerdict::kCompleted) s.notes.emplace_back(to_string(s.run));
  return r;
}

ScenarioResult scenario(int carriers, std::int64_t stock, std::uint64_t seed,
                        std::uint64_t max_steps) {
  return scenario(build_architecture(carriers, stock), SchedulePolicy::Seeded(seed), max_steps);
}

ScenarioConfig parse_scenario_config(std::string_view text) {
  ScenarioConfig cfg;
  std::istringstream is{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidScenario("line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size() || v < 0)
      throw InvalidScenario("line " + std::to_string(line_no) + ": bad value for " + key);
    if (key == "carriers")
      cfg.carriers = static_cast<int>(v);
    else if (key == "stock")
      cfg.stock = v;
    else if (key == "seed")
      cfg.seed = static_cast<std::uint64_t>(v);
    else if (key == "maxSteps")
      cfg.max_steps = static_cast<std::uint64_t>(v);
    else
      throw InvalidScenario("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return cfg;
}

}  // namespace piadl::transport
