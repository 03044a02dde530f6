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

#include "piadl/typecheck.hpp"

#include <map>
#include <optional>
#include <sstream>

namespace piadl {

const char* to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::kUnknownName: return "UnknownName";
    case Diagnostic::Kind::kTypeMismatch: return "TypeMismatch";
    case Diagnostic::Kind::kArityMismatch: return "ArityMismatch";
    case Diagnostic::Kind::kDuplicateName: return "DuplicateName";
  }
  return "?";
}

std::string TypeReport::str() const {
  if (ok()) return "ok\n";
  std::ostringstream os;
  for (const auto& d : diagnostics) {
    os << d.pos.line << ':' << d.pos.column << ": " << to_string(d.kind)
       << " in " << d.in_template << ": " << d.message << '\n';
  }
  return os.str();
}

namespace {

// Booleans exist only as condition values.
struct ExprType {
  bool is_bool = false;
  AdlType type;

  std::string str() const { return is_bool ? "Boolean" : type.str(); }
  friend bool operator==(const ExprType&, const ExprType&) = default;
};

class Checker {
 public:
  explicit Checker(const ArchitectureDef& arch) : arch_(arch) {}

  TypeReport run() {
    for (const auto& b : arch_.behaviours) check_template(b);
    for (const auto& a : arch_.abstractions) check_template(a);
    return std::move(report_);
  }

 private:
  void report(Diagnostic::Kind kind, std::string message, SourcePos pos,
              std::string expected = {}, std::string found = {}) {
    report_.diagnostics.push_back({kind, std::move(message),
                                   std::move(expected), std::move(found), pos,
                                   current_->name});
  }

  void mismatch(const std::string& what, const std::string& expected,
                const std::string& found, SourcePos pos) {
    report(Diagnostic::Kind::kTypeMismatch,
           what + ": expected " + expected + ", found " + found, pos, expected,
           found);
  }

  void check_template(const TemplateDef& t) {
    current_ = &t;
    scope_.clear();
    auto bind = [&](const Declaration& d) {
      if (!scope_.emplace(d.name, d.type).second)
        report(Diagnostic::Kind::kDuplicateName,
               "'" + d.name + "' declared twice", d.pos);
    };
    for (const auto& p : t.params) bind(p);
    for (const auto& d : t.decls) bind(d);
    block(t.body);
  }

  std::optional<AdlType> lookup(const std::string& name, SourcePos pos) {
    auto it = scope_.find(name);
    if (it != scope_.end()) return it->second;
    report(Diagnostic::Kind::kUnknownName, "unknown name '" + name + "'", pos);
    return std::nullopt;
  }

  void block(const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) statement(s);
  }

  void statement(const Statement& s) {
    switch (s.kind) {
      case Statement::Kind::kSend:
        send(s);
        break;
      case Statement::Kind::kReceive:
        receive(s);
        break;
      case Statement::Kind::kCompose:
        for (const auto& b : s.branches) block(b);
        break;
      case Statement::Kind::kIf:
      case Statement::Kind::kWhile: {
        auto cond = expr(s.value);
        if (cond && !cond->is_bool)
          mismatch("condition", "Boolean", cond->str(), s.value.pos);
        block(s.body);
        break;
      }
      case Statement::Kind::kAssign: {
        auto target = lookup(s.target, s.pos);
        auto value = expr(s.value);
        if (target && value && !(value == ExprType{false, *target}))
          mismatch("assignment to '" + s.target + "'", target->str(),
                   value->str(), s.pos);
        break;
      }
      case Statement::Kind::kDone:
        break;
    }
  }

  void send(const Statement& s) {
    auto value = expr(s.value);
    if (const TemplateDef* abs = arch_.find_abstraction(s.chan)) {
      instantiate(s, *abs, value);
      return;
    }
    if (s.renames)
      report(Diagnostic::Kind::kTypeMismatch,
             "renames clause on a send to non-abstraction '" + s.chan + "'",
             s.pos);
    if (s.chan == kAmbientOut) {
      if (value && (value->is_bool || value->type.is_connection()))
        mismatch("send on 'out'", "Integer or Text", value->str(), s.pos);
      return;
    }
    if (s.chan == kAmbientIn) {
      report(Diagnostic::Kind::kTypeMismatch, "cannot send on 'in'", s.pos,
             "output connection", "in");
      return;
    }
    auto chan = lookup(s.chan, s.pos);
    if (!chan) return;
    if (!chan->is_connection()) {
      mismatch("send via '" + s.chan + "'", "Connection", chan->str(), s.pos);
      return;
    }
    if (value && !(*value == ExprType{false, chan->element()}))
      mismatch("send via '" + s.chan + "'", chan->element().str(),
               value->str(), s.pos);
  }

  void instantiate(const Statement& s, const TemplateDef& abs,
                   const std::optional<ExprType>& value) {
    if (abs.params.size() != 1) {
      report(Diagnostic::Kind::kArityMismatch,
             "abstraction '" + abs.name + "' takes " +
                 std::to_string(abs.params.size()) +
                 " parameters, instantiation passes 1",
             s.pos);
    } else if (value && !(*value == ExprType{false, abs.params[0].type})) {
      mismatch("argument of '" + abs.name + "'", abs.params[0].type.str(),
               value->str(), s.pos);
    }
    if (!s.renames) return;
    auto outer = lookup(s.renames->outer, s.pos);
    const Declaration* inner = nullptr;
    for (const auto& d : abs.decls)
      if (d.name == s.renames->inner) inner = &d;
    if (inner == nullptr) {
      report(Diagnostic::Kind::kUnknownName,
             "abstraction '" + abs.name + "' declares no connection '" +
                 s.renames->inner + "'",
             s.pos);
      return;
    }
    if (!inner->type.is_connection()) {
      mismatch("renamed '" + inner->name + "'", "Connection",
               inner->type.str(), s.pos);
      return;
    }
    if (outer && !(*outer == inner->type))
      mismatch("renames " + s.renames->outer + " -> " + s.renames->inner,
               inner->type.str(), outer->str(), s.pos);
  }

  void receive(const Statement& s) {
    auto target = lookup(s.target, s.pos);
    if (s.chan == kAmbientIn) {
      if (target && target->is_connection())
        mismatch("receive from 'in'", "Integer", target->str(), s.pos);
      return;
    }
    if (s.chan == kAmbientOut) {
      report(Diagnostic::Kind::kTypeMismatch, "cannot receive from 'out'",
             s.pos, "input connection", "out");
      return;
    }
    auto chan = lookup(s.chan, s.pos);
    if (!chan) return;
    if (!chan->is_connection()) {
      mismatch("receive via '" + s.chan + "'", "Connection", chan->str(),
               s.pos);
      return;
    }
    if (target && !(*target == chan->element()))
      mismatch("receive via '" + s.chan + "' into '" + s.target + "'",
               chan->element().str(), target->str(), s.pos);
  }

  std::optional<ExprType> expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::kIntLit:
        return ExprType{false, AdlType::Integer()};
      case Expr::Kind::kTextLit:
        return ExprType{false, AdlType::Text()};
      case Expr::Kind::kVar: {
        auto t = lookup(e.text, e.pos);
        if (!t) return std::nullopt;
        return ExprType{false, *t};
      }
      case Expr::Kind::kBinary:
        break;
    }
    auto lhs = expr(e.operands[0]);
    auto rhs = expr(e.operands[1]);
    const ExprType integer{false, AdlType::Integer()};
    const ExprType boolean{true, AdlType::Integer()};
    auto require = [&](const std::optional<ExprType>& t, const ExprType& want,
                       const Expr& at) {
      if (t && !(*t == want))
        mismatch(std::string("operand of '") + to_string(e.op) + "'",
                 want.str(), t->str(), at.pos);
    };
    switch (e.op) {
      case BinOp::kAdd:
      case BinOp::kSub:
        require(lhs, integer, e.operands[0]);
        require(rhs, integer, e.operands[1]);
        return integer;
      case BinOp::kLt:
      case BinOp::kGt:
      case BinOp::kLe:
      case BinOp::kGe:
        require(lhs, integer, e.operands[0]);
        require(rhs, integer, e.operands[1]);
        return boolean;
      case BinOp::kEq:
        if (lhs && rhs && !(*lhs == *rhs))
          mismatch("operands of '=='", lhs->str(), rhs->str(), e.pos);
        return boolean;
      case BinOp::kAnd:
      case BinOp::kOr:
        require(lhs, boolean, e.operands[0]);
        require(rhs, boolean, e.operands[1]);
        return boolean;
    }
    return std::nullopt;
  }

  const ArchitectureDef& arch_;
  const TemplateDef* current_ = nullptr;
  std::map<std::string, AdlType> scope_;
  TypeReport report_;
};

}  // namespace

TypeReport type_check(const ArchitectureDef& arch) {
  return Checker(arch).run();
}

}  // namespace piadl
