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

#ifndef PIADL_WORLD_HPP_
#define PIADL_WORLD_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "piadl/hash.hpp"

namespace piadl::world {

/// Road ring: signs 1..9, loader at 1, unloader at 7, return road 8 and 9.
inline constexpr int kSignCount = 9;
inline constexpr int kLoaderSign = 1;
inline constexpr int kUnloaderSign = 7;

constexpr int next_sign(int sign) { return sign % kSignCount + 1; }
constexpr bool is_sign(int sign) { return sign >= 1 && sign <= kSignCount; }

inline constexpr int kAwaitNothing = 0;
inline constexpr int kAwaitSign = 1;      // after readSign: the sign just read
inline constexpr int kAwaitArrival = 2;   // after movetoNext: the sign reached

struct CarrierState {
  int position = 0;  // 0 while off the road
  bool loaded = false;
  bool waiting = false;
  int awaiting = 0;  // kAwait* : what the carrier's next integer output means

  friend bool operator==(const CarrierState&, const CarrierState&) = default;
};

struct WorldState {
  std::map<std::string, CarrierState> carriers;
  std::int64_t stockA = 0;
  std::int64_t stockB = 0;
  std::int64_t initial_stock = 0;
  std::int64_t unconfirmed_debits = 0;  // loads not yet acknowledged by storehouse A
  int trips = 0;

  static WorldState with_stock(std::int64_t stock);

  bool occupied(int sign) const;
  std::int64_t loaded_count() const;
  /// stockA + stockB + loaded carriers == initial stock.
  bool conserved() const;
  /// Two carriers sharing a sign, if any.
  std::optional<std::pair<std::string, std::string>> collision() const;

  void hash_into(Hasher& h) const;
  std::string str() const;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

class UnknownEntity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PredicateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values for the free names `c` (acting carrier) and `sn` (its sign).
struct Bindings {
  std::string carrier;
  int sign = 0;
};

/**
 * Boolean formula over world atoms:
 *
 *   is_Full(c)  can_movetoNext(sn)  at(c, sign)  count(A|B) <cmp> n
 *   no_collision  conserved  true  false
 *
 * combined with `!`, `&&`, `||` and parentheses. Carrier arguments are
 * carrier ids; `c` and `sn` resolve through Bindings when bound.
 */
class SafetyPredicate {
 public:
  struct Node;

  static SafetyPredicate parse(std::string_view source);

  /// Throws UnknownEntity for carriers or signs absent from `state`.
  bool eval(const WorldState& state, const Bindings& bindings = {}) const;
  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

bool eval_safety(const SafetyPredicate& pred, const WorldState& state,
                 const Bindings& bindings = {});

}  // namespace piadl::world

#endif  // PIADL_WORLD_HPP_
