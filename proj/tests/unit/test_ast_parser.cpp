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

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "piadl/ast.hpp"
#include "piadl/parser.hpp"
#include "piadl/typecheck.hpp"
#include "test_support.hpp"

using namespace piadl;
using piadl::test::corpus_file;

namespace {

const char* kCorpusFiles[] = {
    "transport.adl",           "fleet2.adl",
    "fleet3.adl",              "mutants/drop_con_A.adl",
    "mutants/skip_readSign.adl", "mutants/ignore_collision.adl",
};

std::vector<std::string> lexemes(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.lexeme);
  return out;
}

// Random architectures built from the AST factories.
class ArchGen {
 public:
  explicit ArchGen(std::uint64_t seed) : rng_(seed) {}

  ArchitectureDef arch() {
    ArchitectureDef a;
    const int nb = pick(1, 2);
    const int na = pick(0, 3);
    for (int i = 0; i < na; ++i) abstraction_names_.push_back("ABS" + std::to_string(i));
    for (int i = 0; i < nb; ++i) {
      TemplateDef t;
      t.kind = TemplateDef::Kind::kBehaviour;
      t.name = "B" + std::to_string(i);
      fill(t);
      a.behaviours.push_back(std::move(t));
    }
    for (int i = 0; i < na; ++i) {
      TemplateDef t;
      t.kind = TemplateDef::Kind::kAbstraction;
      t.name = abstraction_names_[i];
      t.params.push_back({"arg", type(), {}});
      fill(t);
      a.abstractions.push_back(std::move(t));
    }
    a.entry = a.behaviours.front().name;
    return a;
  }

 private:
  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  std::string ident() {
    static const char* names[] = {"x", "pos_full", "stock", "c1", "k_2", "abc"};
    return names[pick(0, 5)];
  }

  AdlType type() {
    AdlType t = AdlType::Integer();
    for (int d = pick(0, 2); d > 0; --d) t = AdlType::Connection(t);
    return t;
  }

  void fill(TemplateDef& t) {
    for (int i = pick(0, 3); i > 0; --i)
      t.decls.push_back({ident() + std::to_string(i), type(), {}});
    t.body = block(2);
  }

  Expr arith(int depth) {
    const int k = depth <= 0 ? pick(0, 1) : pick(0, 3);
    if (k == 0) return Expr::Int(pick(-20, 200));
    if (k == 1) return Expr::Var(ident());
    return Expr::Binary(pick(0, 1) ? BinOp::kAdd : BinOp::kSub, arith(depth - 1),
                        arith(depth - 1));
  }

  Expr compare(int depth) {
    static const BinOp ops[] = {BinOp::kEq, BinOp::kLt, BinOp::kGt, BinOp::kLe,
                                BinOp::kGe};
    return Expr::Binary(ops[pick(0, 4)], arith(depth), arith(depth));
  }

  Expr cond(int depth) {
    if (depth <= 0 || pick(0, 2) == 0) return compare(1);
    return Expr::Binary(pick(0, 1) ? BinOp::kAnd : BinOp::kOr, cond(depth - 1),
                        cond(depth - 1));
  }

  Expr value() {
    if (pick(0, 4) == 0) {
      static const char* texts[] = {"", "loadCarrier", "No of stock = ", "a b  c"};
      return Expr::Str(texts[pick(0, 3)]);
    }
    return arith(2);
  }

  std::vector<Statement> block(int depth) {
    std::vector<Statement> out;
    for (int i = pick(0, 4); i > 0; --i) out.push_back(statement(depth));
    return out;
  }

  std::vector<Statement> nonempty(int depth) {
    auto b = block(depth);
    if (b.empty()) b.push_back(Statement::Done());
    return b;
  }

  Statement statement(int depth) {
    const int k = depth <= 0 ? pick(0, 3) : pick(0, 6);
    switch (k) {
      case 0:
        if (!abstraction_names_.empty() && pick(0, 2) == 0) {
          const auto& abs = abstraction_names_[pick(0, static_cast<int>(abstraction_names_.size()) - 1)];
          std::optional<Renames> r;
          if (pick(0, 1)) r = Renames{ident(), ident()};
          return Statement::Send(abs, arith(1), r);
        }
        return Statement::Send(pick(0, 1) ? "out" : ident(), value());
      case 1:
        return Statement::Receive(pick(0, 1) ? "in" : ident(), ident());
      case 2:
        return Statement::Assign(ident(), arith(2));
      case 3:
        return Statement::Done();
      case 4: {
        std::vector<std::vector<Statement>> branches;
        for (int i = pick(2, 3); i > 0; --i) branches.push_back(nonempty(depth - 1));
        return Statement::Compose(std::move(branches));
      }
      case 5:
        return Statement::If(cond(2), block(depth - 1));
      default:
        return Statement::While(cond(2), block(depth - 1));
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> abstraction_names_;
};

}  // namespace

TEST_CASE("tokenize splits a receive statement") {
  const auto toks = tokenize("via in receive stockCount;");
  REQUIRE(toks.size() == 5);
  CHECK(lexemes(toks) == std::vector<std::string>{"via", "in", "receive", "stockCount", ";"});
  CHECK(toks[0].kind == Token::Kind::kKeyword);
  CHECK(toks[1].kind == Token::Kind::kIdentifier);
  CHECK(toks[2].kind == Token::Kind::kKeyword);
  CHECK(toks[3].kind == Token::Kind::kIdentifier);
  CHECK(toks[4].kind == Token::Kind::kPunctuation);
  CHECK(toks[3].line == 1);
  CHECK(toks[3].column == 16);
}

TEST_CASE("tokenize drops comments") {
  CHECK(tokenize("/// comment only").empty());
  CHECK(tokenize("  \n\t/// a\n   /// b \n\n").empty());
  CHECK(tokenize("").empty());
}

TEST_CASE("tokenize reads a text literal as one token") {
  const auto toks = tokenize("\"Invalid position for Full carrier\"");
  REQUIRE(toks.size() == 1);
  CHECK(toks[0].kind == Token::Kind::kText);
  CHECK(toks[0].lexeme == "Invalid position for Full carrier");
}

TEST_CASE("tokenize keywords and operators") {
  for (const char* kw : {"names", "behaviour", "value", "is", "abstraction", "via",
                         "send", "receive", "compose", "and", "where", "renames",
                         "if", "while", "do", "done", "Connection", "Integer"}) {
    CHECK(is_keyword(kw));
  }
  CHECK_FALSE(is_keyword("in"));
  CHECK_FALSE(is_keyword("out"));
  const auto toks = tokenize("a<=b||c>=d&&e==1-2+x<y>z");
  std::vector<std::string> ops;
  for (const auto& t : toks)
    if (t.kind == Token::Kind::kOperator) ops.push_back(t.lexeme);
  CHECK(ops == std::vector<std::string>{"<=", "||", ">=", "&&", "==", "-", "+", "<", ">"});
}

TEST_CASE("tokenize errors") {
  try {
    tokenize("via out send \"open");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.reason() == ParseError::Reason::kUnterminatedString);
    CHECK(e.line() == 1);
  }
  try {
    tokenize("x = 1;\n  y @ 2;");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.reason() == ParseError::Reason::kIllegalCharacter);
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("parse the ROUTE behaviour") {
  const auto arch = parse_architecture(corpus_file("transport.adl"));
  CHECK(arch.entry == "ROUTE");
  REQUIRE(arch.behaviours.size() == 1);
  const auto& route = arch.entry_behaviour();
  CHECK(route.kind == TemplateDef::Kind::kBehaviour);
  REQUIRE(route.decls.size() == 3);
  CHECK(route.decls[0].name == "moveFull_Conn");
  CHECK(route.decls[0].type == AdlType::Connection(AdlType::Integer()));
  CHECK(route.decls[1].type == AdlType::Integer());
  REQUIRE(route.body.size() == 3);
  CHECK(route.body[0] == Statement::Receive("in", "full_road_part"));
  CHECK(route.body[1] == Statement::Receive("in", "stockCount"));
  REQUIRE(route.body[2].kind == Statement::Kind::kCompose);
  REQUIRE(route.body[2].branches.size() == 2);
  CHECK(route.body[2].branches[0][0] ==
        Statement::Send("MOVE_FULL", Expr::Var("stockCount"),
                        Renames{"moveFull_Conn", "full_Conn"}));
  CHECK(arch.abstractions.size() == 4);
  REQUIRE(arch.find_abstraction("MOVE_FULL") != nullptr);
  CHECK(arch.find_abstraction("NOPE") == nullptr);
}

TEST_CASE("parse an abstraction with a connection parameter") {
  const auto arch = parse_architecture(
      "B names behaviour { }\n"
      "value S is abstraction(input: Connection[Integer]) { }");
  const auto* s = arch.find_abstraction("S");
  REQUIRE(s != nullptr);
  CHECK(s->kind == TemplateDef::Kind::kAbstraction);
  REQUIRE(s->params.size() == 1);
  CHECK(s->params[0].name == "input");
  CHECK(s->params[0].type == AdlType::Connection(AdlType::Integer()));
  CHECK(s->params[0].type.connection_depth() == 1);
  CHECK(s->body.empty());
}

TEST_CASE("parse rejects a one-branch compose") {
  CHECK_THROWS_AS(parse_architecture("B names behaviour { compose { done; } }"),
                  ParseError);
}

TEST_CASE("parse rejects a declaration after a statement") {
  CHECK_THROWS_AS(parse_architecture("B names behaviour { x: Integer; x = 1; y: Integer; }"),
                  ParseError);
}

TEST_CASE("parse normalises single-statement if to a block") {
  const auto a = parse_architecture("B names behaviour { x: Integer; if(x == 0) do via out send 1; }");
  const auto b = parse_architecture("B names behaviour { x: Integer; if(x == 0) do { via out send 1; } }");
  CHECK(a == b);
  CHECK(a.entry_behaviour().body[0].body.size() == 1);
}

TEST_CASE("parse accepts stray semicolons after a block") {
  CHECK_NOTHROW(parse_architecture(
      "B names behaviour { x: Integer; if(x == 0) do{ done; }; while(x < 3) do{ x = x + 1; } }"));
}

TEST_CASE("parse reports the expected set") {
  try {
    parse_architecture("B names behaviour { via out send 1 }");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.reason() == ParseError::Reason::kSyntax);
    CHECK_FALSE(e.expected().empty());
  }
}

TEST_CASE("an empty program is rejected") {
  CHECK_THROWS_AS(parse_architecture(""), ParseError);
  CHECK_THROWS_AS(parse_architecture("/// nothing"), ParseError);
}

TEST_CASE("pretty print of the smallest program reparses equal") {
  const auto arch = parse_architecture("B names behaviour { }");
  const auto text = pretty_print(arch);
  CHECK(parse_architecture(text) == arch);
}

TEST_CASE("pretty print separates compose branches with and") {
  const auto arch = parse_architecture(
      "B names behaviour { compose { done; and via out send 1; } }");
  const auto text = pretty_print(arch);
  CHECK(text.find(" and") != std::string::npos);
  CHECK(parse_architecture(text) == arch);
}

TEST_CASE("pretty print keeps needed parentheses") {
  const auto e = Expr::Binary(BinOp::kSub, Expr::Var("a"),
                              Expr::Binary(BinOp::kSub, Expr::Var("b"), Expr::Int(1)));
  CHECK(pretty_print(e) == "a - (b - 1)");
  const auto f = Expr::Binary(BinOp::kSub,
                              Expr::Binary(BinOp::kSub, Expr::Var("a"), Expr::Var("b")),
                              Expr::Int(1));
  CHECK(pretty_print(f) == "a - b - 1");
}

TEST_CASE("corpus round trips through the printer") {
  for (const char* f : kCorpusFiles) {
    CAPTURE(std::string(f));
    const auto once = parse_architecture(corpus_file(f));
    const auto text = pretty_print(once);
    const auto twice = parse_architecture(text);
    CHECK(twice == once);
    CHECK(pretty_print(twice) == text);
  }
}

TEST_CASE("random architectures round trip through the printer") {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    CAPTURE(seed);
    ArchGen gen(seed);
    const auto arch = gen.arch();
    const auto text = pretty_print(arch);
    ArchitectureDef back;
    REQUIRE_NOTHROW(back = parse_architecture(text));
    CHECK(back == arch);
  }
}

TEST_CASE("structural equality is an equivalence") {
  ArchGen g1(7), g2(7), g3(8);
  const auto a = g1.arch();
  const auto b = g2.arch();
  const auto c = g3.arch();
  CHECK(a == a);
  CHECK(a == b);
  CHECK(b == a);
  CHECK((a == c) == (c == a));
}

TEST_CASE("parse error positions lie within the source") {
  const std::string base = corpus_file("transport.adl");
  std::mt19937_64 rng(99);
  const std::string junk = "{};()=<>|&@#\"x 1";
  int errors = 0;
  for (int i = 0; i < 400; ++i) {
    std::string src = base;
    const std::size_t at = rng() % src.size();
    if (rng() % 2)
      src.erase(at, 1 + rng() % 8);
    else
      src.insert(at, 1, junk[rng() % junk.size()]);
    try {
      parse_architecture(src);
    } catch (const ParseError& e) {
      ++errors;
      std::vector<std::size_t> lengths{0};
      for (char ch : src) {
        if (ch == '\n')
          lengths.push_back(0);
        else
          ++lengths.back();
      }
      CAPTURE(e.what());
      REQUIRE(e.line() >= 1);
      REQUIRE(e.line() <= static_cast<int>(lengths.size()));
      CHECK(e.column() >= 1);
      CHECK(e.column() <= static_cast<int>(lengths[e.line() - 1]) + 1);
    }
  }
  CHECK(errors > 50);
}

TEST_CASE("type check accepts the corpus") {
  for (const char* f : kCorpusFiles) {
    CAPTURE(std::string(f));
    const auto report = type_check(parse_architecture(corpus_file(f)));
    CHECK(report.ok());
    CHECK(report.str() == "ok\n");
  }
}

TEST_CASE("type check of the listing declarations") {
  // Hand-typed declarations of MOVE_FULL.
  const auto arch = parse_architecture(corpus_file("transport.adl"));
  const auto* mf = arch.find_abstraction("MOVE_FULL");
  REQUIRE(mf != nullptr);
  const auto ci = AdlType::Connection(AdlType::Integer());
  const std::vector<std::pair<std::string, AdlType>> expect = {
      {"pos_full", AdlType::Integer()},
      {"empty_road_part", AdlType::Integer()},
      {"stock", AdlType::Integer()},
      {"a", AdlType::Integer()},
      {"moveEmpty_Conn", ci},
      {"full_Conn", ci},
      {"con_A", AdlType::Connection(ci)},
      {"p", ci},
  };
  REQUIRE(mf->decls.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(mf->decls[i].name == expect[i].first);
    CHECK(mf->decls[i].type == expect[i].second);
  }
  CHECK(mf->params[0].type == AdlType::Integer());
}

TEST_CASE("sending a value on a connection of connections is a mismatch") {
  const std::string src =
      "B names behaviour {\n"
      "stock: Integer;\n"
      "p: Connection[Integer];\n"
      "con_A: Connection[Connection[Integer]];\n"
      "via p send stock;\n"
      "via con_A send stock;\n"
      "}\n";
  const auto report = type_check(parse_architecture(src));
  REQUIRE(report.diagnostics.size() == 1);
  const auto& d = report.diagnostics[0];
  CHECK(d.kind == Diagnostic::Kind::kTypeMismatch);
  CHECK(d.expected == "Connection[Integer]");
  CHECK(d.found == "Integer");
  CHECK(d.pos.line == 6);
  CHECK_FALSE(report.ok());
}

TEST_CASE("type check diagnostics") {
  SUBCASE("unknown name") {
    const auto r = type_check(parse_architecture("B names behaviour { via q send 1; }"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].kind == Diagnostic::Kind::kUnknownName);
  }
  SUBCASE("instantiation argument") {
    const auto r = type_check(parse_architecture(
        "B names behaviour { c: Connection[Integer]; via A send c; }\n"
        "value A is abstraction(x: Integer) { }"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].kind == Diagnostic::Kind::kTypeMismatch);
  }
  SUBCASE("renames of different types") {
    const auto r = type_check(parse_architecture(
        "B names behaviour { c: Connection[Integer]; via A send 1 where {c renames k}; }\n"
        "value A is abstraction(x: Integer) { k: Connection[Connection[Integer]]; }"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].kind == Diagnostic::Kind::kTypeMismatch);
  }
  SUBCASE("receive into a mismatched variable") {
    const auto r = type_check(parse_architecture(
        "B names behaviour { c: Connection[Integer]; k: Connection[Integer]; via c receive k; }"));
    REQUIRE_FALSE(r.ok());
  }
  SUBCASE("arithmetic on text") {
    const auto r = type_check(parse_architecture(
        "B names behaviour { x: Integer; x = \"a\" + 1; }"));
    REQUIRE_FALSE(r.ok());
  }
  SUBCASE("out accepts text and integers") {
    const auto r = type_check(parse_architecture(
        "B names behaviour { via out send \"t\"; via out send 3; }"));
    CHECK(r.ok());
  }
}

TEST_CASE("type check is deterministic") {
  ArchGen gen(3);
  for (int i = 0; i < 50; ++i) {
    const auto arch = gen.arch();
    CHECK(type_check(arch).str() == type_check(arch).str());
  }
}

TEST_CASE("free connections") {
  const auto arch = parse_architecture(corpus_file("transport.adl"));
  const auto* sa = arch.find_abstraction("STOREHOUSE_A");
  REQUIRE(sa != nullptr);
  CHECK(free_connections(arch, *sa) == std::set<std::string>{"out"});
  CHECK(free_connections(std::span<const Statement>{}).empty());
  const std::vector<Statement> one{Statement::Send("c", Expr::Int(1))};
  CHECK(free_connections(one) == std::set<std::string>{"c"});
  CHECK(free_connections(one, {"c"}).empty());
}
