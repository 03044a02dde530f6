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

#include "piadl/gaia.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>
#include <tuple>

namespace piadl::gaia {

// ---------------------------------------------------------------------------
// Expressions

LivenessExpr LivenessExpr::Atom(std::string symbol) {
  return {Kind::kAtom, std::move(symbol), {}};
}
LivenessExpr LivenessExpr::Ref(std::string name) {
  return {Kind::kRef, std::move(name), {}};
}
LivenessExpr LivenessExpr::Seq(std::vector<LivenessExpr> parts) {
  return {Kind::kSeq, {}, std::move(parts)};
}
LivenessExpr LivenessExpr::Choice(std::vector<LivenessExpr> parts) {
  return {Kind::kChoice, {}, std::move(parts)};
}
LivenessExpr LivenessExpr::Star(LivenessExpr e) {
  return {Kind::kStar, {}, {std::move(e)}};
}
LivenessExpr LivenessExpr::Plus(LivenessExpr e) {
  return {Kind::kPlus, {}, {std::move(e)}};
}
LivenessExpr LivenessExpr::Optional(LivenessExpr e) {
  return {Kind::kOptional, {}, {std::move(e)}};
}

namespace {

int expr_prec(const LivenessExpr& e) {
  switch (e.kind) {
    case LivenessExpr::Kind::kChoice: return 1;
    case LivenessExpr::Kind::kSeq: return 2;
    case LivenessExpr::Kind::kAtom:
    case LivenessExpr::Kind::kRef: return 4;
    default: return 3;
  }
}

void print(std::ostream& os, const LivenessExpr& e, int min_prec) {
  const bool paren = expr_prec(e) < min_prec;
  if (paren) os << '(';
  switch (e.kind) {
    case LivenessExpr::Kind::kAtom:
    case LivenessExpr::Kind::kRef:
      os << e.name;
      break;
    case LivenessExpr::Kind::kSeq:
    case LivenessExpr::Kind::kChoice: {
      const char* sep = e.kind == LivenessExpr::Kind::kSeq ? " . " : " | ";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i > 0) os << sep;
        print(os, e.children[i], expr_prec(e) + 1);
      }
      break;
    }
    case LivenessExpr::Kind::kStar:
    case LivenessExpr::Kind::kPlus:
    case LivenessExpr::Kind::kOptional:
      print(os, e.children[0], 4);
      os << (e.kind == LivenessExpr::Kind::kStar   ? '*'
             : e.kind == LivenessExpr::Kind::kPlus ? '+'
                                                   : '?');
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const LivenessExpr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::set<std::string> atoms(const LivenessExpr& e) {
  std::set<std::string> out;
  std::function<void(const LivenessExpr&)> walk = [&](const LivenessExpr& x) {
    if (x.kind == LivenessExpr::Kind::kAtom) out.insert(x.name);
    for (const auto& c : x.children) walk(c);
  };
  walk(e);
  return out;
}

bool is_closed(const LivenessExpr& e) {
  if (e.kind == LivenessExpr::Kind::kRef) return false;
  return std::all_of(e.children.begin(), e.children.end(),
                     [](const LivenessExpr& c) { return is_closed(c); });
}

// ---------------------------------------------------------------------------
// Liveness parser

namespace {

class LivenessParser {
 public:
  LivenessParser(std::string_view text, const std::set<std::string>& defined)
      : text_(text), defined_(defined) {}

  LivenessExpr parse() {
    LivenessExpr e = choice();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    throw RoleError(RoleError::Kind::kParse,
                    "liveness expression '" + std::string(text_) + "': " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(std::string_view s) {
    skip_ws();
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  LivenessExpr choice() {
    std::vector<LivenessExpr> parts{seq()};
    while (accept("|")) parts.push_back(seq());
    if (parts.size() == 1) return std::move(parts[0]);
    return LivenessExpr::Choice(std::move(parts));
  }

  LivenessExpr seq() {
    std::vector<LivenessExpr> parts{postfix()};
    while (accept(".")) parts.push_back(postfix());
    if (parts.size() == 1) return std::move(parts[0]);
    return LivenessExpr::Seq(std::move(parts));
  }

  LivenessExpr postfix() {
    LivenessExpr e = primary();
    for (;;) {
      if (accept("*") || accept("\xCF\x89"))
        e = LivenessExpr::Star(std::move(e));
      else if (accept("+"))
        e = LivenessExpr::Plus(std::move(e));
      else if (accept("?"))
        e = LivenessExpr::Optional(std::move(e));
      else
        return e;
    }
  }

  LivenessExpr primary() {
    if (accept("(")) {
      LivenessExpr e = choice();
      if (!accept(")")) error("expected ')'");
      return e;
    }
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) error("expected a symbol or '('");
    std::string name(text_.substr(start, pos_ - start));
    if (defined_.contains(name)) return LivenessExpr::Ref(std::move(name));
    return LivenessExpr::Atom(std::move(name));
  }

  std::string_view text_;
  const std::set<std::string>& defined_;
  std::size_t pos_ = 0;
};

}  // namespace

LivenessExpr parse_liveness(std::string_view text,
                            const std::set<std::string>& defined) {
  return LivenessParser(text, defined).parse();
}

LivenessExpr expand(std::span<const LivenessDef> defs, const std::string& root) {
  auto find = [&](const std::string& name) -> const LivenessDef* {
    for (const auto& d : defs)
      if (d.name == name) return &d;
    return nullptr;
  };
  std::vector<std::string> active;
  std::function<LivenessExpr(const LivenessExpr&)> subst =
      [&](const LivenessExpr& e) -> LivenessExpr {
    if (e.kind != LivenessExpr::Kind::kRef) {
      LivenessExpr out = e;
      for (auto& c : out.children) c = subst(c);
      return out;
    }
    if (std::find(active.begin(), active.end(), e.name) != active.end())
      throw RoleError(RoleError::Kind::kCyclicDefinition,
                      "liveness definition '" + e.name + "' refers to itself");
    const LivenessDef* d = find(e.name);
    if (d == nullptr)
      throw RoleError(RoleError::Kind::kUnknownRef,
                      "unknown liveness definition '" + e.name + "'");
    active.push_back(e.name);
    LivenessExpr out = subst(d->expr);
    active.pop_back();
    return out;
  };
  return subst(LivenessExpr::Ref(root));
}

// ---------------------------------------------------------------------------
// Role files

const std::string& RoleSchema::liveness_root() const {
  for (const auto& d : liveness)
    if (d.name == name) return d.name;
  if (liveness.empty())
    throw RoleError(RoleError::Kind::kUnknownRef,
                    "role '" + name + "' has no liveness definition");
  return liveness.front().name;
}

std::set<std::string> RoleSchema::alphabet() const {
  std::set<std::string> out = activities;
  out.insert(protocols.begin(), protocols.end());
  return out;
}

LivenessExpr RoleSchema::closed_liveness() const {
  return expand(liveness, liveness_root());
}

const RoleSchema& RoleModel::role(const std::string& name) const {
  auto it = roles.find(name);
  if (it == roles.end())
    throw RoleError(RoleError::Kind::kUnknownRef, "no role named '" + name + "'");
  return it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::pair<std::string_view, std::string_view> head(std::string_view line) {
  const std::size_t sp = line.find_first_of(" \t");
  if (sp == std::string_view::npos) return {line, {}};
  return {line.substr(0, sp), trim(line.substr(sp))};
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::string quoted(std::string_view s, int line) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    throw RoleError(RoleError::Kind::kParse, "expected a quoted string", line);
  return std::string(s.substr(1, s.size() - 2));
}

void check_role(RoleSchema& role, const std::vector<int>& def_lines) {
  for (const auto& a : role.activities)
    if (role.protocols.contains(a))
      throw RoleError(RoleError::Kind::kOverlap,
                      "'" + a + "' is both an activity and a protocol of role " +
                          role.name);
  std::set<std::string> defined;
  for (const auto& d : role.liveness) defined.insert(d.name);
  const auto alphabet = role.alphabet();
  for (std::size_t i = 0; i < role.liveness.size(); ++i) {
    for (const auto& a : atoms(role.liveness[i].expr))
      if (!alphabet.contains(a))
        throw RoleError(RoleError::Kind::kUndeclaredAtom,
                        "'" + a + "' in liveness of role " + role.name +
                            " is neither an activity nor a protocol",
                        def_lines[i]);
  }
  // Every definition must expand; this also rejects cycles that are not
  // reachable from the root.
  for (const auto& d : role.liveness) expand(role.liveness, d.name);
}

}  // namespace

RoleModel parse_role_file(std::string_view src) {
  RoleModel model;
  std::istringstream is{std::string(src)};
  std::string raw;
  int line_no = 0;
  std::optional<RoleSchema> role;
  std::vector<std::pair<std::string, int>> pending_defs;  // text, line
  std::vector<std::string> def_names;

  auto finish_role = [&](int line) {
    std::set<std::string> defined(def_names.begin(), def_names.end());
    std::vector<int> lines;
    for (std::size_t i = 0; i < pending_defs.size(); ++i) {
      role->liveness.push_back(
          {def_names[i], parse_liveness(pending_defs[i].first, defined)});
      lines.push_back(pending_defs[i].second);
    }
    check_role(*role, lines);
    const std::string name = role->name;
    if (!model.roles.emplace(name, std::move(*role)).second)
      throw RoleError(RoleError::Kind::kParse, "duplicate role '" + name + "'", line);
    role.reset();
    pending_defs.clear();
    def_names.clear();
  };

  while (std::getline(is, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto [kw, rest] = head(line);

    if (!role) {
      if (kw == "role") {
        if (rest.empty()) throw RoleError(RoleError::Kind::kParse, "role needs a name", line_no);
        role.emplace();
        role->name = std::string(rest);
      } else if (kw == "protocol") {
        ProtocolDef p;
        std::string_view body = rest;
        const std::size_t q = body.find('"');
        if (q != std::string_view::npos) {
          p.purpose = quoted(body.substr(q), line_no);
          body = body.substr(0, q);
        }
        auto w = words(body);
        if (w.size() < 5 || w[1] != "from" || w[3] != "to")
          throw RoleError(RoleError::Kind::kParse,
                          "expected 'protocol <name> from <role> to <role> [in <input>...]'",
                          line_no);
        p.name = w[0];
        p.initiator = w[2];
        p.responder = w[4];
        if (w.size() > 5) {
          if (w[5] != "in") throw RoleError(RoleError::Kind::kParse, "expected 'in'", line_no);
          p.inputs.assign(w.begin() + 6, w.end());
        }
        model.protocols.push_back(std::move(p));
      } else if (kw == "invariant") {
        model.invariants.emplace_back(rest);
      } else {
        throw RoleError(RoleError::Kind::kParse,
                        "unexpected '" + std::string(kw) + "' outside a role", line_no);
      }
      continue;
    }

    if (kw == "end") {
      finish_role(line_no);
    } else if (kw == "description") {
      role->description = quoted(rest, line_no);
    } else if (kw == "activities") {
      for (auto& w : words(rest)) role->activities.insert(w);
    } else if (kw == "protocols") {
      for (auto& w : words(rest)) role->protocols.insert(w);
    } else if (kw == "reads" || kw == "changes") {
      for (auto& w : words(rest)) {
        Permission perm;
        perm.mode = kw == "reads" ? Permission::Mode::kReads : Permission::Mode::kChanges;
        const std::size_t open = w.find('(');
        if (open == std::string::npos || w.back() != ')')
          throw RoleError(RoleError::Kind::kParse,
                          "permission '" + w + "' must look like resource(scope)", line_no);
        perm.resource = w.substr(0, open);
        const std::string scope = w.substr(open + 1, w.size() - open - 2);
        if (scope == "internal")
          perm.scope = Permission::Scope::kInternal;
        else if (scope == "external")
          perm.scope = Permission::Scope::kExternal;
        else
          throw RoleError(RoleError::Kind::kParse, "unknown scope '" + scope + "'", line_no);
        role->permissions.push_back(std::move(perm));
      }
    } else if (kw == "liveness") {
      const std::size_t eq = rest.find('=');
      if (eq == std::string_view::npos)
        throw RoleError(RoleError::Kind::kParse, "expected '<Name> = <expr>'", line_no);
      std::string name(trim(rest.substr(0, eq)));
      if (std::find(def_names.begin(), def_names.end(), name) != def_names.end())
        throw RoleError(RoleError::Kind::kParse, "duplicate definition '" + name + "'", line_no);
      def_names.push_back(std::move(name));
      pending_defs.emplace_back(std::string(trim(rest.substr(eq + 1))), line_no);
    } else if (kw == "safety") {
      role->safety = std::string(rest);
    } else if (kw == "safety-at") {
      role->safety_trigger = std::string(rest);
    } else {
      throw RoleError(RoleError::Kind::kParse, "unknown role field '" + std::string(kw) + "'",
                      line_no);
    }
  }
  if (role)
    throw RoleError(RoleError::Kind::kParse, "role '" + role->name + "' is missing 'end'",
                    line_no);
  return model;
}

// ---------------------------------------------------------------------------
// Verdicts and monitors

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kAccepting: return "accepting";
    case Verdict::kPossible: return "possible";
    case Verdict::kViolated: return "violated";
  }
  return "?";
}

Verdict worst(Verdict a, Verdict b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

Nfa::Nfa(const LivenessExpr& closed_expr, std::set<std::string> alphabet) {
  for (const auto& a : atoms(closed_expr)) alphabet.insert(a);
  alphabet_.assign(alphabet.begin(), alphabet.end());
  Fragment f = build(closed_expr);
  start_ = f.in;
  accept_ = f.out;

  // Backward reachability from the accepting state.
  std::vector<std::vector<int>> rev(eps_.size());
  for (int s = 0; s < state_count(); ++s) {
    for (int t : eps_[s]) rev[t].push_back(s);
    for (const auto& e : edges_[s]) rev[e.to].push_back(s);
  }
  live_.assign(eps_.size(), false);
  std::vector<int> work{accept_};
  live_[accept_] = true;
  while (!work.empty()) {
    const int s = work.back();
    work.pop_back();
    for (int p : rev[s])
      if (!live_[p]) {
        live_[p] = true;
        work.push_back(p);
      }
  }
}

int Nfa::symbol_index(std::string_view symbol) const {
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), symbol);
  if (it == alphabet_.end() || *it != symbol) return -1;
  return static_cast<int>(it - alphabet_.begin());
}

int Nfa::add_state() {
  eps_.emplace_back();
  edges_.emplace_back();
  return static_cast<int>(eps_.size()) - 1;
}

Nfa::Fragment Nfa::build(const LivenessExpr& e) {
  using K = LivenessExpr::Kind;
  switch (e.kind) {
    case K::kAtom: {
      const int s = add_state();
      const int t = add_state();
      edges_[s].push_back({symbol_index(e.name), t});
      return {s, t};
    }
    case K::kSeq: {
      Fragment first = build(e.children.front());
      Fragment cur = first;
      for (std::size_t i = 1; i < e.children.size(); ++i) {
        Fragment next = build(e.children[i]);
        eps_[cur.out].push_back(next.in);
        cur = next;
      }
      return {first.in, cur.out};
    }
    case K::kChoice: {
      const int s = add_state();
      std::vector<int> outs;
      for (const auto& c : e.children) {
        Fragment f = build(c);
        eps_[s].push_back(f.in);
        outs.push_back(f.out);
      }
      const int t = add_state();
      for (int o : outs) eps_[o].push_back(t);
      return {s, t};
    }
    case K::kStar:
    case K::kPlus:
    case K::kOptional: {
      const int s = add_state();
      Fragment f = build(e.children[0]);
      const int t = add_state();
      eps_[s].push_back(f.in);
      eps_[f.out].push_back(t);
      if (e.kind != K::kPlus) eps_[s].push_back(t);
      if (e.kind != K::kOptional) eps_[f.out].push_back(f.in);
      return {s, t};
    }
    case K::kRef:
      break;
  }
  throw RoleError(RoleError::Kind::kUnknownRef,
                  "cannot compile unexpanded reference '" + e.name + "'");
}

Monitor::Monitor(std::shared_ptr<const Nfa> nfa, bool strict)
    : nfa_(std::move(nfa)), strict_(strict) {
  current_.push_back(nfa_->start());
  close(current_);
}

void Monitor::close(std::vector<int>& set) const {
  std::vector<bool> seen(nfa_->state_count(), false);
  std::vector<int> work;
  for (int s : set)
    if (!seen[s]) {
      seen[s] = true;
      work.push_back(s);
    }
  while (!work.empty()) {
    const int s = work.back();
    work.pop_back();
    for (int t : nfa_->eps(s))
      if (!seen[t]) {
        seen[t] = true;
        work.push_back(t);
      }
  }
  set.clear();
  for (int s = 0; s < nfa_->state_count(); ++s)
    if (seen[s] && nfa_->live(s)) set.push_back(s);
}

bool Monitor::watches(std::string_view symbol) const {
  return nfa_->symbol_index(symbol) >= 0;
}

Verdict Monitor::step(std::string_view symbol) {
  const int sym = nfa_->symbol_index(symbol);
  if (sym < 0) {
    if (strict_) current_.clear();
    return verdict();
  }
  std::vector<int> next;
  for (int s : current_)
    for (const auto& e : nfa_->edges(s))
      if (e.symbol == sym) next.push_back(e.to);
  close(next);
  current_ = std::move(next);
  return verdict();
}

Verdict Monitor::verdict() const {
  if (current_.empty()) return Verdict::kViolated;
  if (std::binary_search(current_.begin(), current_.end(), nfa_->accept()))
    return Verdict::kAccepting;
  return Verdict::kPossible;
}

void Monitor::hash_into(Hasher& h) const {
  h.add(current_.size());
  for (int s : current_) h.add(static_cast<std::uint64_t>(s));
}

Monitor compile_monitor(const LivenessExpr& closed_expr, bool strict) {
  return compile_monitor(closed_expr, {}, strict);
}

Monitor compile_monitor(const LivenessExpr& closed_expr,
                        std::set<std::string> alphabet, bool strict) {
  if (!is_closed(closed_expr))
    throw RoleError(RoleError::Kind::kUnknownRef,
                    "monitor expression must be closed: " + to_string(closed_expr));
  return Monitor(std::make_shared<const Nfa>(closed_expr, std::move(alphabet)), strict);
}

Monitor compile_monitor(const RoleSchema& role, bool strict) {
  return compile_monitor(role.closed_liveness(), role.alphabet(), strict);
}

Verdict monitor_step(Monitor& m, std::string_view symbol) { return m.step(symbol); }

// ---------------------------------------------------------------------------
// Oracle

namespace {

class Matcher {
 public:
  explicit Matcher(std::span<const std::string> trace) : trace_(trace) {}

  // Does trace[i, j) belong to the language of e?
  bool match(const LivenessExpr& e, std::size_t i, std::size_t j) {
    const auto key = std::make_tuple(&e, std::size_t{0}, i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = false;
    using K = LivenessExpr::Kind;
    switch (e.kind) {
      case K::kAtom:
        r = j == i + 1 && trace_[i] == e.name;
        break;
      case K::kSeq:
        r = seq(e, 0, i, j);
        break;
      case K::kChoice:
        for (const auto& c : e.children) r = r || match(c, i, j);
        break;
      case K::kStar:
        r = star(e.children[0], i, j);
        break;
      case K::kPlus:
        for (std::size_t m = i; m <= j && !r; ++m)
          r = match(e.children[0], i, m) && star(e.children[0], m, j);
        break;
      case K::kOptional:
        r = i == j || match(e.children[0], i, j);
        break;
      case K::kRef:
        throw RoleError(RoleError::Kind::kUnknownRef, "oracle needs a closed expression");
    }
    memo_[key] = r;
    return r;
  }

 private:
  // children[k..] of a sequence match trace[i, j)
  bool seq(const LivenessExpr& e, std::size_t k, std::size_t i, std::size_t j) {
    if (k == e.children.size()) return i == j;
    const auto key = std::make_tuple(&e, k + 1, i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = false;
    for (std::size_t m = i; m <= j && !r; ++m)
      r = match(e.children[k], i, m) && seq(e, k + 1, m, j);
    memo_[key] = r;
    return r;
  }

  // Zero or more non-empty pieces.
  bool star(const LivenessExpr& body, std::size_t i, std::size_t j) {
    if (i == j) return true;
    const auto key = std::make_tuple(&body, std::size_t{~0ULL}, i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = false;
    for (std::size_t m = i + 1; m <= j && !r; ++m)
      r = match(body, i, m) && star(body, m, j);
    memo_[key] = r;
    return r;
  }

  std::span<const std::string> trace_;
  std::map<std::tuple<const LivenessExpr*, std::size_t, std::size_t, std::size_t>, bool> memo_;
};

}  // namespace

bool brute_force_accepts(const LivenessExpr& closed_expr,
                         std::span<const std::string> trace) {
  return Matcher(trace).match(closed_expr, 0, trace.size());
}

}  // namespace piadl::gaia
