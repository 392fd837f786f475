#include "confluo/term.hpp"

#include <algorithm>
#include <atomic>
#include <functional>

#include "confluo/error.hpp"
#include "syntax.hpp"

namespace confluo {

struct Term::Node {
  Kind kind;
  std::uint32_t index = 0;
  std::string name;
  Term a, b;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::uint32_t loose = 0;
  bool has_free = false;
  bool has_lam = false;
};

namespace {

constexpr std::size_t kMix = 0x9e3779b97f4a7c15ULL;

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + kMix + (seed << 6) + (seed >> 2));
}

std::atomic<std::uint64_t> g_fresh_counter{0};

}  // namespace

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->hash = combine(1, std::hash<std::string>{}(name));
  n->name = std::move(name);
  n->has_free = true;
  return Term(std::move(n));
}

Term Term::constant(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->hash = combine(2, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::bound(std::uint32_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bound;
  n->index = index;
  n->hash = combine(3, index);
  n->loose = index + 1;
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->hash = combine(combine(4, fun.hash()), arg.hash());
  n->size = 1 + fun.size() + arg.size();
  n->loose = std::max(fun.loose(), arg.loose());
  n->has_free = fun.has_free_vars() || arg.has_free_vars();
  n->has_lam = fun.has_lambda() || arg.has_lambda();
  n->a = std::move(fun);
  n->b = std::move(arg);
  return Term(std::move(n));
}

Term Term::app(Term head, std::span<const Term> args) {
  for (const auto& a : args) head = app(std::move(head), a);
  return head;
}

Term Term::lam_raw(std::string hint, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->hash = combine(5, body.hash());
  n->size = 1 + body.size();
  n->loose = body.loose() > 0 ? body.loose() - 1 : 0;
  n->has_free = body.has_free_vars();
  n->has_lam = true;
  n->name = std::move(hint);
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::lam(std::string_view binder, const Term& body) {
  return lam_raw(std::string(binder), abstract(body, binder, 0));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
std::uint32_t Term::index() const { return node_->index; }
const Term& Term::fun() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
const Term& Term::body() const { return node_->a; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }
std::uint32_t Term::loose() const { return node_->loose; }
bool Term::has_free_vars() const { return node_->has_free; }
bool Term::has_lambda() const { return node_->has_lam; }

bool operator==(const Term& x, const Term& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  if (x.hash() != y.hash() || x.size() != y.size() || x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return x.name() == y.name();
    case Term::Kind::Bound:
      return x.index() == y.index();
    case Term::Kind::App:
      return x.fun() == y.fun() && x.arg() == y.arg();
    case Term::Kind::Lam:
      return x.body() == y.body();
  }
  return false;
}

// ---------------------------------------------------------------------------

std::pair<std::size_t, bool> TermIndex::insert(const Term& t) {
  auto [it, inserted] = index_.try_emplace(t, items_.size());
  if (inserted) items_.push_back(t);
  return {it->second, inserted};
}

std::optional<std::size_t> TermIndex::find(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

std::string base_name(std::string_view name) {
  auto hash = name.find('#');
  return std::string(hash == std::string_view::npos ? name : name.substr(0, hash));
}

std::string fresh_name(std::string_view base) {
  auto b = base_name(base);
  if (b.empty()) b = "x";
  return b + "#" + std::to_string(++g_fresh_counter);
}

namespace {

Term instantiate_at(const Term& t, const Term& with, std::uint32_t depth) {
  if (t.loose() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      if (t.index() == depth) return with;
      return Term::bound(t.index() - 1);
    case Term::Kind::App:
      return Term::app(instantiate_at(t.fun(), with, depth), instantiate_at(t.arg(), with, depth));
    case Term::Kind::Lam:
      return Term::lam_raw(t.name(), instantiate_at(t.body(), with, depth + 1));
    default:
      return t;
  }
}

}  // namespace

Term instantiate(const Term& body, const Term& with) { return instantiate_at(body, with, 0); }

Term abstract(const Term& t, std::string_view x, std::uint32_t depth) {
  if (!t.has_free_vars()) return t;
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == x ? Term::bound(depth) : t;
    case Term::Kind::App:
      return Term::app(abstract(t.fun(), x, depth), abstract(t.arg(), x, depth));
    case Term::Kind::Lam:
      return Term::lam_raw(t.name(), abstract(t.body(), x, depth + 1));
    default:
      return t;
  }
}

OpenedLam open_fresh(const Term& lam) {
  std::string name = fresh_name(lam.name());
  return {name, instantiate(lam.body(), Term::var(name))};
}

OpenedLam open_named(const Term& lam) {
  std::string name = base_name(lam.name());
  if (name.empty() || occurs_free(lam.body(), name)) return open_fresh(lam);
  return {name, instantiate(lam.body(), Term::var(name))};
}

bool occurs_free(const Term& t, std::string_view x) {
  if (!t.has_free_vars()) return false;
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == x;
    case Term::Kind::App:
      return occurs_free(t.fun(), x) || occurs_free(t.arg(), x);
    case Term::Kind::Lam:
      return occurs_free(t.body(), x);
    default:
      return false;
  }
}

namespace {

void collect(const Term& t, Term::Kind kind, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      if (t.kind() == kind) out.insert(t.name());
      break;
    case Term::Kind::App:
      collect(t.fun(), kind, out);
      collect(t.arg(), kind, out);
      break;
    case Term::Kind::Lam:
      collect(t.body(), kind, out);
      break;
    case Term::Kind::Bound:
      break;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  if (t.has_free_vars()) collect(t, Term::Kind::Var, out);
  return out;
}

std::set<std::string> constants_of(const Term& t) {
  std::set<std::string> out;
  collect(t, Term::Kind::Const, out);
  return out;
}

bool is_closed(const Term& t) { return !t.has_free_vars(); }

Spine spine(const Term& t) {
  Spine s;
  Term cur = t;
  while (cur.is_app()) {
    s.args.push_back(cur.arg());
    cur = cur.fun();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

// ---------------------------------------------------------------------------

const Term* Substitution::lookup(std::string_view x) const {
  auto it = bindings_.find(x);
  return it == bindings_.end() ? nullptr : &it->second;
}

std::set<std::string> Substitution::domain() const {
  std::set<std::string> out;
  for (const auto& [x, _] : bindings_) out.insert(x);
  return out;
}

Substitution Substitution::restricted(const std::set<std::string>& vars) const {
  Substitution out;
  for (const auto& [x, t] : bindings_)
    if (vars.count(x)) out.bind(x, t);
  return out;
}

Term substitute(const Term& t, const Substitution& s) {
  if (!t.has_free_vars() || s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Term* img = s.lookup(t.name());
      return img ? *img : t;
    }
    case Term::Kind::App:
      return Term::app(substitute(t.fun(), s), substitute(t.arg(), s));
    case Term::Kind::Lam:
      // Images are locally closed, so no renaming is ever needed here.
      return Term::lam_raw(t.name(), substitute(t.body(), s));
    default:
      return t;
  }
}

Substitution compose(const Substitution& s, const Substitution& t) {
  Substitution out;
  for (const auto& [x, img] : s.bindings()) out.bind(x, substitute(img, t));
  for (const auto& [x, img] : t.bindings())
    if (!s.contains(x)) out.bind(x, img);
  return out;
}

// ---------------------------------------------------------------------------

Position Position::child(std::uint8_t dir) const {
  Position p = *this;
  p.path_.push_back(dir);
  return p;
}

Position Position::concat(const Position& rest) const {
  Position p = *this;
  p.path_.insert(p.path_.end(), rest.path_.begin(), rest.path_.end());
  return p;
}

bool Position::is_prefix_of(const Position& other) const {
  return path_.size() <= other.path_.size() &&
         std::equal(path_.begin(), path_.end(), other.path_.begin());
}

std::string Position::to_string() const {
  if (path_.empty()) return "e";
  std::string s;
  for (auto d : path_) s.push_back(static_cast<char>('0' + d));
  return s;
}

namespace {

void positions_rec(const Term& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  auto descend = [&](const Term& sub, std::uint8_t dir) {
    cur = cur.child(dir);
    positions_rec(sub, cur, out);
    auto path = cur.path();
    path.pop_back();
    cur = Position(std::move(path));
  };
  if (t.is_app()) {
    descend(t.fun(), 1);
    descend(t.arg(), 2);
  } else if (t.is_lam()) {
    descend(t.body(), 1);
  }
}

[[noreturn]] void invalid(const Position& p) {
  throw InvalidPosition("position " + p.to_string() + " does not address a subterm");
}

Term replace_rec(const Term& t, const Position& p, std::size_t i, const Term& u) {
  if (i == p.depth()) return u;
  auto dir = p.path()[i];
  if (t.is_app() && (dir == 1 || dir == 2)) {
    if (dir == 1) return Term::app(replace_rec(t.fun(), p, i + 1, u), t.arg());
    return Term::app(t.fun(), replace_rec(t.arg(), p, i + 1, u));
  }
  if (t.is_lam() && dir == 1) {
    auto opened = open_named(t);
    Term body = replace_rec(opened.body, p, i + 1, u);
    if (occurs_free(u, opened.name))
      throw CaptureAtPosition("replacement mentions " + opened.name +
                              ", bound on the path to " + p.to_string());
    return Term::lam_raw(t.name(), abstract(body, opened.name));
  }
  invalid(p);
}

Term rewrite_rec(const Term& t, const Position& p, std::size_t i,
                 const std::function<Term(const Term&)>& f) {
  if (i == p.depth()) return f(t);
  auto dir = p.path()[i];
  if (t.is_app() && dir == 1) return Term::app(rewrite_rec(t.fun(), p, i + 1, f), t.arg());
  if (t.is_app() && dir == 2) return Term::app(t.fun(), rewrite_rec(t.arg(), p, i + 1, f));
  if (t.is_lam() && dir == 1) {
    auto opened = open_fresh(t);
    return Term::lam_raw(t.name(), abstract(rewrite_rec(opened.body, p, i + 1, f), opened.name));
  }
  invalid(p);
}

void occurrences_rec(const Term& t, const Term& u, Position& cur, std::vector<Position>& out) {
  if (u.size() < t.size()) return;
  if (u == t) {
    out.push_back(cur);
    return;
  }
  auto descend = [&](const Term& sub, std::uint8_t dir) {
    cur = cur.child(dir);
    occurrences_rec(t, sub, cur, out);
    auto path = cur.path();
    path.pop_back();
    cur = Position(std::move(path));
  };
  if (u.is_app()) {
    descend(u.fun(), 1);
    descend(u.arg(), 2);
  } else if (u.is_lam()) {
    descend(open_fresh(u).body, 1);
  }
}

}  // namespace

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  positions_rec(t, cur, out);
  return out;
}

Term subterm_at(const Term& t, const Position& p) {
  Term cur = t;
  for (auto dir : p.path()) {
    if (cur.is_app() && dir == 1) {
      cur = cur.fun();
    } else if (cur.is_app() && dir == 2) {
      cur = cur.arg();
    } else if (cur.is_lam() && dir == 1) {
      cur = open_named(cur).body;
    } else {
      invalid(p);
    }
  }
  return cur;
}

Term replace_at(const Term& t, const Position& p, const Term& u) { return replace_rec(t, p, 0, u); }

Term rewrite_at(const Term& t, const Position& p, const std::function<Term(const Term&)>& f) {
  return rewrite_rec(t, p, 0, f);
}

std::vector<Position> occurrences(const Term& t, const Term& u) {
  std::vector<Position> out;
  Position cur;
  occurrences_rec(t, u, cur, out);
  return out;
}

// ---------------------------------------------------------------------------

void Signature::declare(std::string symbol, std::size_t arity) {
  symbols_[std::move(symbol)].arity = arity;
}

void Signature::set_defined(std::string_view symbol, bool defined) {
  auto it = symbols_.find(symbol);
  if (it == symbols_.end()) throw UndeclaredSymbol("undeclared symbol '" + std::string(symbol) + "'");
  it->second.defined = defined;
}

bool Signature::contains(std::string_view symbol) const { return symbols_.find(symbol) != symbols_.end(); }

const SymbolInfo& Signature::info(std::string_view symbol) const {
  auto it = symbols_.find(symbol);
  if (it == symbols_.end()) throw UndeclaredSymbol("undeclared symbol '" + std::string(symbol) + "'");
  return it->second;
}

bool is_applicative(const Term& t) { return !t.has_lambda(); }

bool is_algebraic(const Term& t) {
  if (!is_applicative(t)) return false;
  if (!t.is_app()) return true;
  if (t.fun().is_var()) return false;
  return is_algebraic(t.fun()) && is_algebraic(t.arg());
}

bool is_arity_compliant(const Term& t, const Signature& sig) {
  switch (t.kind()) {
    case Term::Kind::Const:
      sig.info(t.name());
      return true;
    case Term::Kind::Lam:
      return is_arity_compliant(t.body(), sig);
    case Term::Kind::App: {
      auto sp = spine(t);
      bool ok = true;
      if (sp.head.is_const()) {
        ok = sp.args.size() <= sig.arity(sp.head.name());
      } else if (sp.head.is_lam()) {
        ok = is_arity_compliant(sp.head, sig);
      }
      // Keep visiting so that undeclared symbols are always reported.
      for (const auto& a : sp.args) ok = is_arity_compliant(a, sig) && ok;
      return ok;
    }
    default:
      return true;
  }
}

Classification classify(const Term& t, const Signature& sig) {
  Classification c;
  c.arity_compliant = is_arity_compliant(t, sig);
  c.applicative = is_applicative(t);
  c.algebraic = is_algebraic(t);
  return c;
}

// ---------------------------------------------------------------------------

Term parse_term(std::string_view text, const Signature& sig) {
  syntax::Parser p(syntax::tokenize(text), [&sig](std::string_view s) { return sig.contains(s); });
  Term t = p.term();
  if (!p.at(syntax::Tok::End)) p.fail("unexpected " + syntax::describe(p.peek()) + " after term");
  return t;
}

namespace {

class Printer {
 public:
  Printer(const Term& t, const Signature* sig) {
    avoid_ = free_vars(t);
    for (auto& c : constants_of(t)) avoid_.insert(c);
    if (sig)
      for (const auto& [name, _] : sig->symbols()) avoid_.insert(name);
  }

  void print(const Term& t, std::string& out) {
    switch (t.kind()) {
      case Term::Kind::Var:
      case Term::Kind::Const:
        out += t.name();
        return;
      case Term::Kind::Bound:
        out += t.index() < scope_.size() ? scope_[scope_.size() - 1 - t.index()] : "?";
        return;
      case Term::Kind::Lam: {
        std::string name = pick(t.name());
        out += "\\" + name + ". ";
        scope_.push_back(name);
        print(t.body(), out);
        scope_.pop_back();
        return;
      }
      case Term::Kind::App: {
        auto sp = spine(t);
        print_atom(sp.head, out, sp.head.is_lam());
        for (const auto& a : sp.args) {
          out += ' ';
          print_atom(a, out, a.is_app() || a.is_lam());
        }
        return;
      }
    }
  }

 private:
  void print_atom(const Term& t, std::string& out, bool parens) {
    if (parens) out += '(';
    print(t, out);
    if (parens) out += ')';
  }

  std::string pick(const std::string& hint) {
    std::string base = base_name(hint);
    if (base.empty()) base = "x";
    std::string cand = base;
    for (int k = 1; avoid_.count(cand) || std::find(scope_.begin(), scope_.end(), cand) != scope_.end(); ++k)
      cand = base + std::to_string(k);
    return cand;
  }

  std::set<std::string> avoid_;
  std::vector<std::string> scope_;
};

}  // namespace

std::string print_term(const Term& t, const Signature* sig) {
  std::string out;
  Printer(t, sig).print(t, out);
  return out;
}

}  // namespace confluo
