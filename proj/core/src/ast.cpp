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

#include "piadl/ast.hpp"

#include <sstream>
#include <stdexcept>

namespace piadl {

std::string AdlType::str() const {
  std::string s = base_ == Base::kInteger ? "Integer" : "Text";
  for (int i = 0; i < depth_; ++i) s = "Connection[" + s + "]";
  return s;
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kEq: return "==";
    case BinOp::kLt: return "<";
    case BinOp::kGt: return ">";
    case BinOp::kLe: return "<=";
    case BinOp::kGe: return ">=";
    case BinOp::kAnd: return "&&";
    case BinOp::kOr: return "||";
  }
  return "?";
}

int precedence(BinOp op) {
  switch (op) {
    case BinOp::kOr: return 1;
    case BinOp::kAnd: return 2;
    case BinOp::kEq:
    case BinOp::kLt:
    case BinOp::kGt:
    case BinOp::kLe:
    case BinOp::kGe: return 3;
    case BinOp::kAdd:
    case BinOp::kSub: return 4;
  }
  return 0;
}

Expr Expr::Int(std::int64_t v, SourcePos p) {
  Expr e;
  e.kind = Kind::kIntLit;
  e.int_value = v;
  e.pos = p;
  return e;
}

Expr Expr::Str(std::string s, SourcePos p) {
  Expr e;
  e.kind = Kind::kTextLit;
  e.text = std::move(s);
  e.pos = p;
  return e;
}

Expr Expr::Var(std::string name, SourcePos p) {
  Expr e;
  e.kind = Kind::kVar;
  e.text = std::move(name);
  e.pos = p;
  return e;
}

Expr Expr::Binary(BinOp op, Expr lhs, Expr rhs, SourcePos p) {
  Expr e;
  e.kind = Kind::kBinary;
  e.op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  e.pos = p;
  return e;
}

Statement Statement::Send(std::string chan, Expr value,
                          std::optional<Renames> renames, SourcePos p) {
  Statement s;
  s.kind = Kind::kSend;
  s.chan = std::move(chan);
  s.value = std::move(value);
  s.renames = std::move(renames);
  s.pos = p;
  return s;
}

Statement Statement::Receive(std::string chan, std::string target,
                             SourcePos p) {
  Statement s;
  s.kind = Kind::kReceive;
  s.chan = std::move(chan);
  s.target = std::move(target);
  s.pos = p;
  return s;
}

Statement Statement::Compose(std::vector<std::vector<Statement>> branches,
                             SourcePos p) {
  Statement s;
  s.kind = Kind::kCompose;
  s.branches = std::move(branches);
  s.pos = p;
  return s;
}

Statement Statement::If(Expr cond, std::vector<Statement> body, SourcePos p) {
  Statement s;
  s.kind = Kind::kIf;
  s.value = std::move(cond);
  s.body = std::move(body);
  s.pos = p;
  return s;
}

Statement Statement::While(Expr cond, std::vector<Statement> body,
                           SourcePos p) {
  Statement s;
  s.kind = Kind::kWhile;
  s.value = std::move(cond);
  s.body = std::move(body);
  s.pos = p;
  return s;
}

Statement Statement::Assign(std::string target, Expr value, SourcePos p) {
  Statement s;
  s.kind = Kind::kAssign;
  s.target = std::move(target);
  s.value = std::move(value);
  s.pos = p;
  return s;
}

Statement Statement::Done(SourcePos p) {
  Statement s;
  s.kind = Kind::kDone;
  s.pos = p;
  return s;
}

const TemplateDef* ArchitectureDef::find_behaviour(
    const std::string& name) const {
  for (const auto& b : behaviours)
    if (b.name == name) return &b;
  return nullptr;
}

const TemplateDef* ArchitectureDef::find_abstraction(
    const std::string& name) const {
  for (const auto& a : abstractions)
    if (a.name == name) return &a;
  return nullptr;
}

const TemplateDef& ArchitectureDef::entry_behaviour() const {
  const TemplateDef* b = find_behaviour(entry);
  if (b == nullptr)
    throw std::logic_error("architecture has no entry behaviour '" + entry +
                           "'");
  return *b;
}

namespace {

void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kIntLit:
      os << e.int_value;
      return;
    case Expr::Kind::kTextLit:
      os << '"' << e.text << '"';
      return;
    case Expr::Kind::kVar:
      os << e.text;
      return;
    case Expr::Kind::kBinary:
      break;
  }
  const int prec = precedence(e.op);
  const Expr& lhs = e.operands[0];
  const Expr& rhs = e.operands[1];
  const bool lparen =
      lhs.kind == Expr::Kind::kBinary && precedence(lhs.op) < prec;
  const bool rparen =
      rhs.kind == Expr::Kind::kBinary && precedence(rhs.op) <= prec;
  if (lparen) os << '(';
  print_expr(os, lhs);
  if (lparen) os << ')';
  os << ' ' << to_string(e.op) << ' ';
  if (rparen) os << '(';
  print_expr(os, rhs);
  if (rparen) os << ')';
}

class Printer {
 public:
  explicit Printer(std::ostream& os) : os_(os) {}

  void print(const TemplateDef& t) {
    if (t.kind == TemplateDef::Kind::kBehaviour) {
      os_ << t.name << " names behaviour\n";
    } else {
      os_ << "value " << t.name << " is abstraction(";
      for (std::size_t i = 0; i < t.params.size(); ++i) {
        if (i > 0) os_ << ", ";
        os_ << t.params[i].name << ": " << t.params[i].type.str();
      }
      os_ << ")\n";
    }
    os_ << "{\n";
    ++depth_;
    for (const auto& d : t.decls) {
      indent();
      os_ << d.name << ": " << d.type.str() << ";\n";
    }
    block(t.body);
    --depth_;
    os_ << "}\n";
  }

 private:
  void indent() {
    for (int i = 0; i < depth_; ++i) os_ << "  ";
  }

  void block(const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) stmt(s);
  }

  void nested(const std::vector<Statement>& stmts) {
    os_ << "{\n";
    ++depth_;
    block(stmts);
    --depth_;
    indent();
    os_ << "}\n";
  }

  void stmt(const Statement& s) {
    indent();
    switch (s.kind) {
      case Statement::Kind::kSend:
        os_ << "via " << s.chan << " send ";
        print_expr(os_, s.value);
        if (s.renames)
          os_ << " where {" << s.renames->outer << " renames "
              << s.renames->inner << "}";
        os_ << ";\n";
        break;
      case Statement::Kind::kReceive:
        os_ << "via " << s.chan << " receive " << s.target << ";\n";
        break;
      case Statement::Kind::kCompose:
        os_ << "compose {\n";
        ++depth_;
        for (std::size_t i = 0; i < s.branches.size(); ++i) {
          if (i > 0) {
            --depth_;
            indent();
            os_ << "and\n";
            ++depth_;
          }
          block(s.branches[i]);
        }
        --depth_;
        indent();
        os_ << "}\n";
        break;
      case Statement::Kind::kIf:
      case Statement::Kind::kWhile:
        os_ << (s.kind == Statement::Kind::kIf ? "if (" : "while (");
        print_expr(os_, s.value);
        os_ << ") do ";
        nested(s.body);
        break;
      case Statement::Kind::kAssign:
        os_ << s.target << " = ";
        print_expr(os_, s.value);
        os_ << ";\n";
        break;
      case Statement::Kind::kDone:
        os_ << "done;\n";
        break;
    }
  }

  std::ostream& os_;
  int depth_ = 0;
};

void collect_free(std::span<const Statement> body,
                  const std::set<std::string>& bound,
                  std::set<std::string>& out) {
  auto use = [&](const std::string& name) {
    if (!bound.contains(name)) out.insert(name);
  };
  for (const auto& s : body) {
    switch (s.kind) {
      case Statement::Kind::kSend:
        use(s.chan);
        if (s.renames) use(s.renames->outer);
        break;
      case Statement::Kind::kReceive:
        use(s.chan);
        break;
      case Statement::Kind::kCompose:
        for (const auto& b : s.branches) collect_free(b, bound, out);
        break;
      case Statement::Kind::kIf:
      case Statement::Kind::kWhile:
        collect_free(s.body, bound, out);
        break;
      case Statement::Kind::kAssign:
      case Statement::Kind::kDone:
        break;
    }
  }
}

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::ostringstream os;
  print_expr(os, expr);
  return os.str();
}

std::string pretty_print(const ArchitectureDef& arch) {
  std::ostringstream os;
  Printer printer(os);
  // The entry behaviour must come first so it stays the entry on reparse.
  bool first = true;
  auto emit = [&](const TemplateDef& t) {
    if (!first) os << '\n';
    first = false;
    printer.print(t);
  };
  if (const TemplateDef* entry = arch.find_behaviour(arch.entry)) emit(*entry);
  for (const auto& b : arch.behaviours)
    if (b.name != arch.entry) emit(b);
  for (const auto& a : arch.abstractions) emit(a);
  return os.str();
}

std::set<std::string> free_connections(std::span<const Statement> body,
                                       const std::set<std::string>& bound) {
  std::set<std::string> out;
  collect_free(body, bound, out);
  return out;
}

std::set<std::string> free_connections(const ArchitectureDef& arch,
                                       const TemplateDef& tmpl) {
  std::set<std::string> bound;
  for (const auto& p : tmpl.params) bound.insert(p.name);
  for (const auto& d : tmpl.decls) bound.insert(d.name);
  for (const auto& a : arch.abstractions) bound.insert(a.name);
  return free_connections(tmpl.body, bound);
}

}  // namespace piadl
