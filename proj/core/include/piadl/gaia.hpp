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

#ifndef PIADL_GAIA_HPP_
#define PIADL_GAIA_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "piadl/hash.hpp"

namespace piadl::gaia {

/**
 * Liveness expression over activity and protocol symbols.
 *
 * Concrete syntax: infix `.` (sequence), infix `|` (choice), postfix `*`,
 * `+`, `?` (and `ω`, read as `*` on finite traces). Sequence binds tighter
 * than choice.
 */
struct LivenessExpr {
  enum class Kind { kAtom, kSeq, kChoice, kStar, kPlus, kOptional, kRef };

  Kind kind = Kind::kAtom;
  std::string name;  // kAtom symbol or kRef definition name
  std::vector<LivenessExpr> children;

  static LivenessExpr Atom(std::string symbol);
  static LivenessExpr Ref(std::string name);
  static LivenessExpr Seq(std::vector<LivenessExpr> parts);
  static LivenessExpr Choice(std::vector<LivenessExpr> parts);
  static LivenessExpr Star(LivenessExpr e);
  static LivenessExpr Plus(LivenessExpr e);
  static LivenessExpr Optional(LivenessExpr e);

  friend bool operator==(const LivenessExpr&, const LivenessExpr&) = default;
};

std::string to_string(const LivenessExpr& e);
std::set<std::string> atoms(const LivenessExpr& e);
bool is_closed(const LivenessExpr& e);

struct LivenessDef {
  std::string name;
  LivenessExpr expr;
};

class RoleError : public std::runtime_error {
 public:
  enum class Kind {
    kParse,
    kUndeclaredAtom,
    kCyclicDefinition,
    kUnknownRef,
    kOverlap,  // a symbol is both an activity and a protocol
  };

  RoleError(Kind kind, const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

/// Identifiers in `defined` parse as Ref, everything else as Atom.
LivenessExpr parse_liveness(std::string_view text,
                            const std::set<std::string>& defined = {});

/// Substitutes every Ref reachable from `root`. Throws kCyclicDefinition or
/// kUnknownRef.
LivenessExpr expand(std::span<const LivenessDef> defs, const std::string& root);

struct Permission {
  enum class Mode { kReads, kChanges };
  enum class Scope { kInternal, kExternal };

  std::string resource;
  Mode mode = Mode::kReads;
  Scope scope = Scope::kInternal;
};

struct RoleSchema {
  std::string name;
  std::string description;
  std::set<std::string> activities;
  std::set<std::string> protocols;
  std::vector<Permission> permissions;
  std::vector<LivenessDef> liveness;
  std::string safety;  // predicate source; empty when none
  std::string safety_trigger = "movetoNext";

  /// The definition named like the role, else the first one.
  const std::string& liveness_root() const;
  std::set<std::string> alphabet() const;
  LivenessExpr closed_liveness() const;
};

/// Inter-role protocol metadata (initiator, responder, inputs).
struct ProtocolDef {
  std::string name;
  std::string initiator;
  std::string responder;
  std::vector<std::string> inputs;
  std::string purpose;
};

struct RoleModel {
  std::map<std::string, RoleSchema> roles;
  std::vector<ProtocolDef> protocols;
  std::vector<std::string> invariants;  // global safety predicate sources

  const RoleSchema& role(const std::string& name) const;
};

/**
 * Line-oriented role file:
 *
 *   role <Name>
 *     description "<text>"
 *     activities <sym>...
 *     protocols <sym>...
 *     reads <resource>(<internal|external>)...
 *     changes <resource>(<internal|external>)...
 *     liveness <Def> = <expr>
 *     safety <predicate>
 *     safety-at <symbol>
 *   end
 *   protocol <name> from <Role> to <Role> in <input>... ["<purpose>"]
 *   invariant <predicate>
 *
 * `#` starts a comment line.
 */
RoleModel parse_role_file(std::string_view src);

enum class Verdict { kAccepting, kPossible, kViolated };

const char* to_string(Verdict v);
/// Orders verdicts by severity: accepting < possible < violated.
Verdict worst(Verdict a, Verdict b);

/// Thompson NFA with epsilon edges.
class Nfa {
 public:
  struct Edge {
    int symbol;
    int to;
  };

  Nfa(const LivenessExpr& closed_expr, std::set<std::string> alphabet);

  int state_count() const { return static_cast<int>(eps_.size()); }
  int start() const { return start_; }
  int accept() const { return accept_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  int symbol_index(std::string_view symbol) const;

  const std::vector<int>& eps(int s) const { return eps_[s]; }
  const std::vector<Edge>& edges(int s) const { return edges_[s]; }
  bool live(int s) const { return live_[s]; }

 private:
  struct Fragment {
    int in;
    int out;
  };

  int add_state();
  Fragment build(const LivenessExpr& e);

  std::vector<std::string> alphabet_;
  std::vector<std::vector<int>> eps_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<bool> live_;  // can reach accept
  int start_ = 0;
  int accept_ = 0;
};

/**
 * Three-valued monitor over an NFA. The current state set only ever holds
 * live states, so `violated` is exactly the empty set and is absorbing.
 */
class Monitor {
 public:
  explicit Monitor(std::shared_ptr<const Nfa> nfa, bool strict = false);

  Verdict step(std::string_view symbol);
  Verdict verdict() const;
  bool watches(std::string_view symbol) const;

  const Nfa& nfa() const { return *nfa_; }
  const std::vector<int>& states() const { return current_; }
  void hash_into(Hasher& h) const;

 private:
  void close(std::vector<int>& set) const;

  std::shared_ptr<const Nfa> nfa_;
  bool strict_;
  std::vector<int> current_;  // sorted
};

/// Alphabet defaults to the expression's atoms.
Monitor compile_monitor(const LivenessExpr& closed_expr, bool strict = false);
Monitor compile_monitor(const LivenessExpr& closed_expr,
                        std::set<std::string> alphabet, bool strict = false);
Monitor compile_monitor(const RoleSchema& role, bool strict = false);

Verdict monitor_step(Monitor& m, std::string_view symbol);

/// Reference membership test by recursive matching over all split points.
/// Exponential without its memo table; intended for traces of length <= 12.
bool brute_force_accepts(const LivenessExpr& closed_expr,
                         std::span<const std::string> trace);

}  // namespace piadl::gaia

#endif  // PIADL_GAIA_HPP_
