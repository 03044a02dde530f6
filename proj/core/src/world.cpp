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

#include "piadl/world.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

namespace piadl::world {

WorldState WorldState::with_stock(std::int64_t stock) {
  WorldState w;
  w.stockA = stock;
  w.initial_stock = stock;
  return w;
}

bool WorldState::occupied(int sign) const {
  for (const auto& [id, c] : carriers)
    if (c.position == sign) return true;
  return false;
}

std::int64_t WorldState::loaded_count() const {
  std::int64_t n = 0;
  for (const auto& [id, c] : carriers) n += c.loaded ? 1 : 0;
  return n;
}

bool WorldState::conserved() const {
  return stockA >= 0 && stockB >= 0 &&
         stockA + stockB + loaded_count() == initial_stock;
}

std::optional<std::pair<std::string, std::string>> WorldState::collision() const {
  for (auto a = carriers.begin(); a != carriers.end(); ++a) {
    if (a->second.position == 0) continue;
    for (auto b = std::next(a); b != carriers.end(); ++b)
      if (b->second.position == a->second.position) return {{a->first, b->first}};
  }
  return std::nullopt;
}

void WorldState::hash_into(Hasher& h) const {
  h.add(carriers.size());
  for (const auto& [id, c] : carriers) {
    h.add(id);
    h.add(static_cast<std::uint64_t>(c.position));
    h.add((c.loaded ? 1u : 0u) | (c.waiting ? 2u : 0u) | (static_cast<unsigned>(c.awaiting) << 2));
  }
  h.add(static_cast<std::uint64_t>(stockA));
  h.add(static_cast<std::uint64_t>(stockB));
  h.add(static_cast<std::uint64_t>(unconfirmed_debits));
  h.add(static_cast<std::uint64_t>(trips));
}

std::string WorldState::str() const {
  std::ostringstream os;
  os << "stockA=" << stockA << " stockB=" << stockB << " trips=" << trips;
  for (const auto& [id, c] : carriers) {
    os << " carrier " << id << "@" << c.position;
    if (c.loaded) os << " loaded";
    if (c.waiting) os << " waiting";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

struct SafetyPredicate::Node {
  enum class Kind { kConst, kNot, kAnd, kOr, kIsFull, kCanMove, kAt, kCount,
                    kNoCollision, kConserved };
  enum class Cmp { kEq, kNe, kLt, kLe, kGt, kGe };

  Kind kind = Kind::kConst;
  bool constant = false;
  std::vector<std::string> args;
  Cmp cmp = Cmp::kEq;
  std::int64_t bound = 0;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using Node = SafetyPredicate::Node;
using NodePtr = std::shared_ptr<const Node>;

class PredParser {
 public:
  explicit PredParser(std::string_view src) : src_(src) { lex(); }

  NodePtr parse() {
    NodePtr n = disjunction();
    if (pos_ != toks_.size()) fail("unexpected '" + toks_[pos_] + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw PredicateError("predicate '" + std::string(src_) + "': " + msg);
  }

  void lex() {
    std::size_t i = 0;
    while (i < src_.size()) {
      const char ch = src_[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
      } else if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
          ++j;
        toks_.emplace_back(src_.substr(i, j - i));
        i = j;
      } else {
        static constexpr std::string_view kTwo[] = {"&&", "||", "==", "!=", "<=", ">="};
        bool two = false;
        for (auto op : kTwo)
          if (src_.substr(i, 2) == op) {
            toks_.emplace_back(op);
            i += 2;
            two = true;
            break;
          }
        if (two) continue;
        if (std::string_view("()!,<>").find(ch) == std::string_view::npos)
          fail(std::string("illegal character '") + ch + "'");
        toks_.emplace_back(1, ch);
        ++i;
      }
    }
  }

  bool accept(std::string_view t) {
    if (pos_ < toks_.size() && toks_[pos_] == t) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view t) {
    if (!accept(t)) fail("expected '" + std::string(t) + "'");
  }

  std::string word() {
    if (pos_ >= toks_.size()) fail("unexpected end");
    const std::string& t = toks_[pos_];
    if (!(std::isalnum(static_cast<unsigned char>(t[0])) || t[0] == '_'))
      fail("expected a name, got '" + t + "'");
    ++pos_;
    return t;
  }

  NodePtr disjunction() {
    NodePtr left = conjunction();
    while (accept("||")) left = binary(Node::Kind::kOr, left, conjunction());
    return left;
  }

  NodePtr conjunction() {
    NodePtr left = unary();
    while (accept("&&")) left = binary(Node::Kind::kAnd, left, unary());
    return left;
  }

  static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->children = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr unary() {
    if (accept("!")) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::kNot;
      n->children = {unary()};
      return n;
    }
    if (accept("(")) {
      NodePtr n = disjunction();
      expect(")");
      return n;
    }
    return atom();
  }

  NodePtr atom() {
    const std::string name = word();
    auto n = std::make_shared<Node>();
    if (name == "true" || name == "false") {
      n->constant = name == "true";
      return n;
    }
    if (name == "no_collision") {
      n->kind = Node::Kind::kNoCollision;
      return n;
    }
    if (name == "conserved") {
      n->kind = Node::Kind::kConserved;
      return n;
    }
    expect("(");
    n->args.push_back(word());
    while (accept(",")) n->args.push_back(word());
    expect(")");
    auto arity = [&](std::size_t k) {
      if (n->args.size() != k)
        fail(name + " takes " + std::to_string(k) + " argument(s)");
    };
    if (name == "is_Full") {
      arity(1);
      n->kind = Node::Kind::kIsFull;
    } else if (name == "can_movetoNext") {
      arity(1);
      n->kind = Node::Kind::kCanMove;
    } else if (name == "at") {
      arity(2);
      n->kind = Node::Kind::kAt;
    } else if (name == "count") {
      arity(1);
      if (n->args[0] != "A" && n->args[0] != "B") fail("count takes A or B");
      n->kind = Node::Kind::kCount;
      static const std::pair<std::string_view, Node::Cmp> kCmps[] = {
          {"==", Node::Cmp::kEq}, {"!=", Node::Cmp::kNe}, {"<", Node::Cmp::kLt},
          {"<=", Node::Cmp::kLe}, {">", Node::Cmp::kGt}, {">=", Node::Cmp::kGe}};
      bool found = false;
      for (auto [s, c] : kCmps)
        if (accept(s)) {
          n->cmp = c;
          found = true;
          break;
        }
      if (!found) fail("count needs a comparison");
      const std::string num = word();
      auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n->bound);
      if (ec != std::errc() || p != num.data() + num.size())
        fail("expected an integer, got '" + num + "'");
    } else {
      fail("unknown atom '" + name + "'");
    }
    return n;
  }

  std::string_view src_;
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

const CarrierState& carrier(const WorldState& w, const Bindings& b,
                            const std::string& arg) {
  const std::string id = arg == "c" && !b.carrier.empty() ? b.carrier : arg;
  auto it = w.carriers.find(id);
  if (it == w.carriers.end()) throw UnknownEntity("unknown carrier '" + id + "'");
  return it->second;
}

int sign(const Bindings& b, const std::string& arg) {
  int s = 0;
  if (arg == "sn") {
    s = b.sign;
  } else {
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), s);
    if (ec != std::errc() || p != arg.data() + arg.size())
      throw UnknownEntity("unknown sign '" + arg + "'");
  }
  if (!is_sign(s)) throw UnknownEntity("no sign " + std::to_string(s) + " on the road");
  return s;
}

bool eval_node(const Node& n, const WorldState& w, const Bindings& b) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::kConst: return n.constant;
    case K::kNot: return !eval_node(*n.children[0], w, b);
    case K::kAnd: return eval_node(*n.children[0], w, b) && eval_node(*n.children[1], w, b);
    case K::kOr: return eval_node(*n.children[0], w, b) || eval_node(*n.children[1], w, b);
    case K::kIsFull: return carrier(w, b, n.args[0]).loaded;
    case K::kCanMove: return !w.occupied(next_sign(sign(b, n.args[0])));
    case K::kAt: return carrier(w, b, n.args[0]).position == sign(b, n.args[1]);
    case K::kNoCollision: return !w.collision().has_value();
    case K::kConserved: return w.conserved();
    case K::kCount: {
      const std::int64_t v = n.args[0] == "A" ? w.stockA : w.stockB;
      switch (n.cmp) {
        case Node::Cmp::kEq: return v == n.bound;
        case Node::Cmp::kNe: return v != n.bound;
        case Node::Cmp::kLt: return v < n.bound;
        case Node::Cmp::kLe: return v <= n.bound;
        case Node::Cmp::kGt: return v > n.bound;
        case Node::Cmp::kGe: return v >= n.bound;
      }
    }
  }
  return false;
}

}  // namespace

SafetyPredicate SafetyPredicate::parse(std::string_view source) {
  SafetyPredicate p;
  p.root_ = PredParser(source).parse();
  p.source_ = std::string(source);
  return p;
}

bool SafetyPredicate::eval(const WorldState& state, const Bindings& bindings) const {
  return eval_node(*root_, state, bindings);
}

bool eval_safety(const SafetyPredicate& pred, const WorldState& state,
                 const Bindings& bindings) {
  return pred.eval(state, bindings);
}

}  // namespace piadl::world
