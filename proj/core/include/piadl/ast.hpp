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

#ifndef PIADL_AST_HPP_
#define PIADL_AST_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace piadl {

/**
 * Location in the original source text (1-based).
 *
 * Positions never participate in structural equality: two trees that differ
 * only in where they were parsed from compare equal.
 */
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

/**
 * Connection types only ever wrap a scalar at the bottom, so a type is fully
 * described by its scalar base and the number of Connection[...] layers.
 * Connection[Connection[Integer]] is {kInteger, 2}.
 */
class AdlType {
 public:
  enum class Base { kInteger, kText };

  AdlType() = default;
  AdlType(Base base, int connection_depth)
      : base_(base), depth_(connection_depth) {}

  static AdlType Integer() { return {Base::kInteger, 0}; }
  static AdlType Text() { return {Base::kText, 0}; }
  static AdlType Connection(const AdlType& element) {
    return {element.base_, element.depth_ + 1};
  }

  bool is_connection() const { return depth_ > 0; }
  Base base() const { return base_; }
  int connection_depth() const { return depth_; }

  // Precondition: is_connection().
  AdlType element() const { return {base_, depth_ - 1}; }

  std::string str() const;

  friend bool operator==(const AdlType&, const AdlType&) = default;

 private:
  Base base_ = Base::kInteger;
  int depth_ = 0;
};

enum class BinOp { kAdd, kSub, kEq, kLt, kGt, kLe, kGe, kAnd, kOr };

const char* to_string(BinOp op);
int precedence(BinOp op);

struct Expr {
  enum class Kind { kIntLit, kTextLit, kVar, kBinary };

  Kind kind = Kind::kIntLit;
  std::int64_t int_value = 0;
  std::string text;  // literal text or variable name
  BinOp op = BinOp::kAdd;
  std::vector<Expr> operands;  // exactly two for kBinary
  SourcePos pos;

  static Expr Int(std::int64_t v, SourcePos p = {});
  static Expr Str(std::string s, SourcePos p = {});
  static Expr Var(std::string name, SourcePos p = {});
  static Expr Binary(BinOp op, Expr lhs, Expr rhs, SourcePos p = {});

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Renames {
  std::string outer;  // connection in the instantiating scope
  std::string inner;  // connection declared by the abstraction

  friend bool operator==(const Renames&, const Renames&) = default;
};

struct Statement {
  enum class Kind { kSend, kReceive, kCompose, kIf, kWhile, kAssign, kDone };

  Kind kind = Kind::kDone;
  std::string chan;    // kSend, kReceive
  std::string target;  // kReceive, kAssign
  Expr value;          // kSend, kAssign; condition for kIf/kWhile
  std::optional<Renames> renames;
  std::vector<std::vector<Statement>> branches;  // kCompose
  std::vector<Statement> body;                   // kIf, kWhile
  SourcePos pos;

  static Statement Send(std::string chan, Expr value,
                        std::optional<Renames> renames = std::nullopt,
                        SourcePos p = {});
  static Statement Receive(std::string chan, std::string target,
                           SourcePos p = {});
  static Statement Compose(std::vector<std::vector<Statement>> branches,
                           SourcePos p = {});
  static Statement If(Expr cond, std::vector<Statement> body, SourcePos p = {});
  static Statement While(Expr cond, std::vector<Statement> body,
                         SourcePos p = {});
  static Statement Assign(std::string target, Expr value, SourcePos p = {});
  static Statement Done(SourcePos p = {});

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Declaration {
  std::string name;
  AdlType type;
  SourcePos pos;

  friend bool operator==(const Declaration&, const Declaration&) = default;
};

/// A behaviour (no params) or an abstraction (parameterised template).
struct TemplateDef {
  enum class Kind { kBehaviour, kAbstraction };

  Kind kind = Kind::kBehaviour;
  std::string name;
  std::vector<Declaration> params;
  std::vector<Declaration> decls;
  std::vector<Statement> body;
  SourcePos pos;

  friend bool operator==(const TemplateDef&, const TemplateDef&) = default;
};

using BehaviourDef = TemplateDef;
using AbstractionDef = TemplateDef;

struct ArchitectureDef {
  std::vector<BehaviourDef> behaviours;
  std::vector<AbstractionDef> abstractions;
  std::string entry;

  const TemplateDef* find_behaviour(const std::string& name) const;
  const TemplateDef* find_abstraction(const std::string& name) const;
  const TemplateDef& entry_behaviour() const;

  friend bool operator==(const ArchitectureDef&,
                         const ArchitectureDef&) = default;
};

/// Names that are always in scope: `in` feeds environment input, `out`
/// prints.
inline constexpr const char* kAmbientIn = "in";
inline constexpr const char* kAmbientOut = "out";

/**
 * Canonical source text. Reparsing the result yields a structurally equal
 * ArchitectureDef; comments are not preserved.
 */
std::string pretty_print(const ArchitectureDef& arch);
std::string pretty_print(const Expr& expr);

/**
 * Connection identifiers used by `body` (as send/receive channels or as the
 * outer side of a renames clause) that are not in `bound`.
 */
std::set<std::string> free_connections(std::span<const Statement> body,
                                       const std::set<std::string>& bound = {});

/// free_connections of a template's body, binding its params, its
/// declarations and every abstraction name of `arch`.
std::set<std::string> free_connections(const ArchitectureDef& arch,
                                       const TemplateDef& tmpl);

}  // namespace piadl

#endif  // PIADL_AST_HPP_
