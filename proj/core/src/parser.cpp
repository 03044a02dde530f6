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

#include "piadl/parser.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <set>

namespace piadl {

ParseError::ParseError(Reason reason, std::string message, int line,
                       int column, std::vector<std::string> expected)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      reason_(reason),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

constexpr std::array<std::string_view, 18> kKeywords = {
    "names",   "behaviour", "value", "is",         "abstraction", "via",
    "send",    "receive",   "compose", "and",      "where",       "renames",
    "if",      "while",     "do",    "done",       "Connection",  "Integer"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (src.substr(i, 3) == "///") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = col;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      tok.lexeme = std::string(src.substr(i, j - i));
      tok.kind = is_keyword(tok.lexeme) ? Token::Kind::kKeyword
                                        : Token::Kind::kIdentifier;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      tok.kind = Token::Kind::kInteger;
      tok.lexeme = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      const std::size_t close = src.find('"', i + 1);
      if (close == std::string_view::npos)
        throw ParseError(ParseError::Reason::kUnterminatedString,
                         "unterminated string literal", line, col);
      tok.kind = Token::Kind::kText;
      tok.lexeme = std::string(src.substr(i + 1, close - i - 1));
      advance(close - i + 1);
    } else {
      static constexpr std::array<std::string_view, 4> kTwoChar = {"==", "<=",
                                                                   ">=", "&&"};
      std::string_view two = src.substr(i, 2);
      bool matched = false;
      for (auto op : kTwoChar) {
        if (two == op) {
          tok.kind = Token::Kind::kOperator;
          tok.lexeme = std::string(op);
          matched = true;
        }
      }
      if (!matched && two == "||") {
        tok.kind = Token::Kind::kOperator;
        tok.lexeme = "||";
        matched = true;
      }
      if (matched) {
        advance(2);
      } else if (std::string_view("+-<>=").find(c) != std::string_view::npos) {
        tok.kind = Token::Kind::kOperator;
        tok.lexeme = std::string(1, c);
        advance(1);
      } else if (std::string_view(";:,(){}[]").find(c) !=
                 std::string_view::npos) {
        tok.kind = Token::Kind::kPunctuation;
        tok.lexeme = std::string(1, c);
        advance(1);
      } else {
        throw ParseError(ParseError::Reason::kIllegalCharacter,
                         std::string("illegal character '") + c + "'", line,
                         col);
      }
    }
    out.push_back(std::move(tok));
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {
    Token end;
    end.kind = Token::Kind::kEnd;
    if (toks_.empty()) {
      end.line = 1;
      end.column = 1;
    } else {
      end.line = toks_.back().line;
      end.column = toks_.back().column;
    }
    toks_.push_back(end);
  }

  ArchitectureDef program() {
    ArchitectureDef arch;
    std::set<std::string> names;
    while (peek().kind != Token::Kind::kEnd) {
      TemplateDef t;
      if (peek().is(Token::Kind::kKeyword, "value")) {
        t = abstraction();
        if (!names.insert(t.name).second) duplicate(t);
        arch.abstractions.push_back(std::move(t));
      } else if (peek().kind == Token::Kind::kIdentifier) {
        t = behaviour();
        if (!names.insert(t.name).second) duplicate(t);
        if (arch.behaviours.empty()) arch.entry = t.name;
        arch.behaviours.push_back(std::move(t));
      } else {
        fail({"behaviour name", "value"});
      }
    }
    if (arch.behaviours.empty()) {
      if (arch.abstractions.empty()) fail({"behaviour name", "value"});
      throw ParseError(ParseError::Reason::kSyntax,
                       "program declares no behaviour", 1, 1, {"behaviour"});
    }
    return arch;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  SourcePos here() const { return {peek().line, peek().column}; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Kind::kEnd ? "end of input"
                                                    : "'" + t.lexeme + "'";
    std::string msg = "unexpected " + found + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += " or ";
      msg += expected[i];
    }
    throw ParseError(ParseError::Reason::kSyntax, msg, t.line, t.column,
                     std::move(expected));
  }

  [[noreturn]] void duplicate(const TemplateDef& t) const {
    throw ParseError(ParseError::Reason::kSyntax,
                     "duplicate definition of '" + t.name + "'", t.pos.line,
                     t.pos.column);
  }

  bool accept(Token::Kind k, std::string_view lx) {
    if (peek().is(k, lx)) {
      take();
      return true;
    }
    return false;
  }
  bool accept_punct(std::string_view p) {
    return accept(Token::Kind::kPunctuation, p);
  }
  bool accept_kw(std::string_view k) { return accept(Token::Kind::kKeyword, k); }

  void expect(Token::Kind k, std::string_view lx) {
    if (!accept(k, lx)) fail({"'" + std::string(lx) + "'"});
  }
  void expect_punct(std::string_view p) { expect(Token::Kind::kPunctuation, p); }
  void expect_kw(std::string_view k) { expect(Token::Kind::kKeyword, k); }

  std::string ident() {
    if (peek().kind != Token::Kind::kIdentifier) fail({"identifier"});
    return take().lexeme;
  }

  TemplateDef behaviour() {
    TemplateDef t;
    t.kind = TemplateDef::Kind::kBehaviour;
    t.pos = here();
    t.name = ident();
    expect_kw("names");
    expect_kw("behaviour");
    template_block(t);
    return t;
  }

  TemplateDef abstraction() {
    TemplateDef t;
    t.kind = TemplateDef::Kind::kAbstraction;
    t.pos = here();
    expect_kw("value");
    t.pos = here();
    t.name = ident();
    expect_kw("is");
    expect_kw("abstraction");
    expect_punct("(");
    if (!accept_punct(")")) {
      do {
        Declaration d;
        d.pos = here();
        d.name = ident();
        expect_punct(":");
        d.type = type();
        t.params.push_back(std::move(d));
      } while (accept_punct(","));
      expect_punct(")");
    }
    template_block(t);
    return t;
  }

  AdlType type() {
    if (accept_kw("Integer")) return AdlType::Integer();
    if (accept_kw("Connection")) {
      expect_punct("[");
      AdlType inner = type();
      expect_punct("]");
      return AdlType::Connection(inner);
    }
    fail({"'Integer'", "'Connection'"});
  }

  void template_block(TemplateDef& t) {
    expect_punct("{");
    bool seen_stmt = false;
    while (!accept_punct("}")) {
      if (peek().kind == Token::Kind::kIdentifier &&
          peek(1).is(Token::Kind::kPunctuation, ":")) {
        if (seen_stmt)
          throw ParseError(ParseError::Reason::kSyntax,
                           "declaration of '" + peek().lexeme +
                               "' after the first statement",
                           peek().line, peek().column, {"statement"});
        Declaration d;
        d.pos = here();
        d.name = ident();
        expect_punct(":");
        d.type = type();
        expect_punct(";");
        t.decls.push_back(std::move(d));
        continue;
      }
      if (accept_punct(";")) continue;
      seen_stmt = true;
      t.body.push_back(statement());
    }
  }

  // Statements until one of the given stop tokens (not consumed).
  std::vector<Statement> statements_until(
      std::initializer_list<std::pair<Token::Kind, std::string_view>> stops) {
    std::vector<Statement> out;
    for (;;) {
      for (const auto& [k, lx] : stops)
        if (peek().is(k, lx)) return out;
      if (peek().kind == Token::Kind::kEnd) fail({"'}'"});
      if (accept_punct(";")) continue;
      out.push_back(statement());
    }
  }

  std::vector<Statement> block() {
    expect_punct("{");
    auto body = statements_until({{Token::Kind::kPunctuation, "}"}});
    expect_punct("}");
    return body;
  }

  Statement statement() {
    const SourcePos pos = here();
    if (accept_kw("via")) {
      std::string chan = ident();
      if (accept_kw("send")) {
        Expr value = expr();
        std::optional<Renames> renames;
        if (accept_kw("where")) {
          expect_punct("{");
          Renames r;
          r.outer = ident();
          expect_kw("renames");
          r.inner = ident();
          expect_punct("}");
          renames = std::move(r);
        }
        expect_punct(";");
        return Statement::Send(std::move(chan), std::move(value),
                               std::move(renames), pos);
      }
      if (accept_kw("receive")) {
        std::string target = ident();
        expect_punct(";");
        return Statement::Receive(std::move(chan), std::move(target), pos);
      }
      fail({"'send'", "'receive'"});
    }
    if (accept_kw("compose")) {
      expect_punct("{");
      std::vector<std::vector<Statement>> branches;
      branches.push_back(statements_until({{Token::Kind::kKeyword, "and"},
                                           {Token::Kind::kPunctuation, "}"}}));
      while (accept_kw("and"))
        branches.push_back(statements_until(
            {{Token::Kind::kKeyword, "and"}, {Token::Kind::kPunctuation, "}"}}));
      if (branches.size() < 2) fail({"'and'"});
      expect_punct("}");
      return Statement::Compose(std::move(branches), pos);
    }
    if (accept_kw("if") || peek().is(Token::Kind::kKeyword, "while")) {
      const bool is_while = accept_kw("while");
      expect_punct("(");
      Expr cond = expr();
      expect_punct(")");
      expect_kw("do");
      std::vector<Statement> body;
      if (peek().is(Token::Kind::kPunctuation, "{")) {
        body = block();
      } else if (is_while) {
        fail({"'{'"});
      } else {
        body.push_back(statement());
      }
      return is_while ? Statement::While(std::move(cond), std::move(body), pos)
                      : Statement::If(std::move(cond), std::move(body), pos);
    }
    if (accept_kw("done")) {
      expect_punct(";");
      return Statement::Done(pos);
    }
    if (peek().kind == Token::Kind::kIdentifier &&
        peek(1).is(Token::Kind::kOperator, "=")) {
      std::string target = ident();
      take();
      Expr value = expr();
      expect_punct(";");
      return Statement::Assign(std::move(target), std::move(value), pos);
    }
    fail({"'via'", "'compose'", "'if'", "'while'", "'done'", "assignment"});
  }

  static std::optional<BinOp> binop(const Token& t) {
    if (t.kind != Token::Kind::kOperator) return std::nullopt;
    static const std::pair<std::string_view, BinOp> kOps[] = {
        {"+", BinOp::kAdd}, {"-", BinOp::kSub}, {"==", BinOp::kEq},
        {"<", BinOp::kLt},  {">", BinOp::kGt},  {"<=", BinOp::kLe},
        {">=", BinOp::kGe}, {"&&", BinOp::kAnd}, {"||", BinOp::kOr}};
    for (const auto& [lx, op] : kOps)
      if (t.lexeme == lx) return op;
    return std::nullopt;
  }

  // Precedence climbing; all binary operators are left-associative.
  Expr expr(int min_prec = 1) {
    Expr lhs = primary();
    for (;;) {
      auto op = binop(peek());
      if (!op || precedence(*op) < min_prec) return lhs;
      const SourcePos pos = here();
      take();
      Expr rhs = expr(precedence(*op) + 1);
      lhs = Expr::Binary(*op, std::move(lhs), std::move(rhs), pos);
    }
  }

  Expr primary() {
    const SourcePos pos = here();
    const Token& t = peek();
    if (t.kind == Token::Kind::kInteger) return Expr::Int(integer(false), pos);
    if (t.is(Token::Kind::kOperator, "-") &&
        peek(1).kind == Token::Kind::kInteger) {
      take();
      return Expr::Int(integer(true), pos);
    }
    if (t.kind == Token::Kind::kText) return Expr::Str(take().lexeme, pos);
    if (t.kind == Token::Kind::kIdentifier) return Expr::Var(take().lexeme, pos);
    if (accept_punct("(")) {
      Expr e = expr();
      expect_punct(")");
      return e;
    }
    fail({"expression"});
  }

  std::int64_t integer(bool negative) {
    const Token t = take();
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.lexeme.data(),
                                   t.lexeme.data() + t.lexeme.size(), v);
    if (ec != std::errc())
      throw ParseError(ParseError::Reason::kSyntax,
                       "integer literal out of range", t.line, t.column);
    return negative ? -v : v;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ArchitectureDef parse_architecture(std::string_view src) {
  Parser p(tokenize(src));
  return p.program();
}

}  // namespace piadl
