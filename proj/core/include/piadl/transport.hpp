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

#ifndef PIADL_TRANSPORT_HPP_
#define PIADL_TRANSPORT_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "piadl/ast.hpp"
#include "piadl/gaia.hpp"
#include "piadl/runtime.hpp"
#include "piadl/verifier.hpp"
#include "piadl/world.hpp"

namespace piadl::transport {

/// Shipped corpus text, compiled into the library.
std::string_view corpus_transport_adl();
std::string_view corpus_transport_roles();

/// Signs of the full route (loader to unloader) and of the return road.
std::vector<int> full_route();
std::vector<int> return_route();

class InvalidScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  int carriers = 1;
  std::int64_t stock = 0;
  std::string source;  // ADL text of `arch`
  ArchitectureDef arch;
  std::vector<Value> inputs;
};

/**
 * One carrier: the shipped listing with inputs (start, stock). Two or three
 * carriers: a generated fleet that shares the road through a ROAD keeper
 * process; carrier 1 starts loaded at `start`, carriers 2 and 3 start empty
 * at signs 9 and 8. Throws InvalidScenario.
 */
Scenario build_architecture(int carriers, std::int64_t stock, int start = 1);

/// ADL text of the fleet variant for 2 or 3 carriers.
std::string fleet_source(int carriers);
std::vector<Value> fleet_inputs(int carriers, std::int64_t stock, int start = 1);

enum class Mutation {
  kDropConA,         // MOVE_FULL never hands `p` to storehouse A
  kSkipReadSign,     // MOVE_FULL moves without reading the sign
  kIgnoreCollision,  // fleet carriers drive on after sensing a collision
};

const char* to_string(Mutation m);
std::optional<Mutation> mutation_from_string(std::string_view s);

/// Applies `m` to ADL source text. Throws std::invalid_argument when the
/// text lacks the statement the mutation targets.
std::string mutate(std::string_view source, Mutation m);
/// The mutant shipped under corpus/mutants.
std::string mutant_source(Mutation m);

std::shared_ptr<const gaia::RoleModel> roles();

/// Initial stock implied by scenario inputs: (start, stock) for the listing,
/// (start, share) pairs for the fleet.
std::int64_t initial_stock(const std::vector<Value>& inputs);

/**
 * Event-to-world rules, by output of the carrier's processes:
 *   loadCarrier        loaded, stockA - 1 (confirmed later by storehouse A)
 *   unloadCarrier      unloaded, stockB + 1, one more trip
 *   readSign <n>       carrier placed at sign n
 *   movetoNext <n>     carrier advanced one sign; n must be that sign
 *   collisionSensorTrue / carrierWait   waiting
 *   carrierParked      carrier leaves the road
 * and "decrementStock_at_STOREHOUSE_A" from any process confirms a load, or
 * debits stockA when no load is pending. Throws InconsistentEvent.
 */
world::WorldState world_reduce(world::WorldState state, const Event& event,
                               const std::string& carrier = {});

class TransportReducer : public verifier::Reducer {
 public:
  explicit TransportReducer(std::int64_t stock);

  std::unique_ptr<verifier::Reducer> clone() const override;
  void apply(const Event& event, const verifier::Attribution& who) override;
  const world::WorldState& world() const override { return state_; }
  void hash_into(Hasher& h) const override { state_.hash_into(h); }

 private:
  world::WorldState state_;
};

verifier::Observer make_observer(std::int64_t stock, bool strict = false);

struct ScenarioSummary {
  int carriers = 1;
  std::int64_t stock = 0;
  std::uint64_t seed = 0;
  int trips = 0;
  std::int64_t stockA = 0;
  std::int64_t stockB = 0;
  RunVerdict run = RunVerdict::kCompleted;
  std::uint64_t steps = 0;
  std::map<std::string, gaia::Verdict> verdicts;
  std::optional<verifier::SafetyViolation> safety;
  bool conserved = true;  // after every event
  std::vector<std::string> notes;

  std::string str() const;
};

struct ScenarioResult {
  Trace trace;
  ScenarioSummary summary;
};

ScenarioResult scenario(int carriers, std::int64_t stock, std::uint64_t seed,
                        std::uint64_t max_steps);
/// Runs a prepared architecture, e.g. a mutant, under the transport observer.
ScenarioResult scenario(const Scenario& sc, SchedulePolicy policy,
                        std::uint64_t max_steps, bool strict = false);

/// `key=value` lines: carriers, stock, seed, maxSteps; `#` comments.
struct ScenarioConfig {
  int carriers = 1;
  std::int64_t stock = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 5000;
};

ScenarioConfig parse_scenario_config(std::string_view text);

}  // namespace piadl::transport

#endif  // PIADL_TRANSPORT_HPP_
