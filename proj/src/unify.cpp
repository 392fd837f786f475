#include "confluo/unify.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "confluo/error.hpp"

namespace confluo {

bool match_into(const Term& pattern, const Term& subject, Substitution& s) {
  switch (pattern.kind()) {
    case Term::Kind::Var:
      if (const Term* bound = s.lookup(pattern.name())) return *bound == subject;
      if (subject.loose() != 0) return false;
      s.bind(pattern.name(), subject);
      return true;
    case Term::Kind::Const:
      return subject.is_const() && subject.name() == pattern.name();
    case Term::Kind::App:
      return subject.is_app() && match_into(pattern.fun(), subject.fun(), s) &&
             match_into(pattern.arg(), subject.arg(), s);
    default:
      return false;
  }
}

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  if (!is_algebraic(pattern)) throw NonAlgebraicPattern("pattern " + print_term(pattern) + " is not algebraic");
  Substitution s;
  if (!match_into(pattern, subject, s)) return std::nullopt;
  return s;
}

namespace {

// Triangular bindings: a variable maps to a term that may mention other
// bound variables.
using Bindings = std::map<std::string, Term, std::less<>>;

Term walk(Term t, const Bindings& b) {
  while (t.is_var()) {
    auto it = b.find(t.name());
    if (it == b.end()) break;
    t = it->second;
  }
  return t;
}

bool occurs(const std::string& x, const Term& t, const Bindings& b) {
  Term u = walk(t, b);
  if (u.is_var()) return u.name() == x;
  if (u.is_app()) return occurs(x, u.fun(), b) || occurs(x, u.arg(), b);
  return false;
}

Term resolve(const Term& t, const Bindings& b) {
  Term u = walk(t, b);
  if (u.is_app()) return Term::app(resolve(u.fun(), b), resolve(u.arg(), b));
  return u;
}

}  // namespace

std::optional<Substitution> mgu(const Term& s, const Term& t) {
  for (const Term* u : {&s, &t})
    if (!is_algebraic(*u)) throw NonAlgebraicInput("term " + print_term(*u) + " is not algebraic");
  auto sv = free_vars(s);
  for (const auto& x : free_vars(t))
    if (sv.count(x)) throw SharedVariables("variable " + x + " occurs on both sides");

  Bindings b;
  std::vector<std::pair<Term, Term>> work{{s, t}};
  while (!work.empty()) {
    auto [l, r] = work.back();
    work.pop_back();
    l = walk(l, b);
    r = walk(r, b);
    if (l == r) continue;
    // Variables of `s` are kept as representatives so results read in its names.
    if (r.is_var()) std::swap(l, r);
    if (l.is_var()) {
      if (occurs(l.name(), r, b)) return std::nullopt;
      b.emplace(l.name(), r);
    } else if (l.is_app() && r.is_app()) {
      work.emplace_back(l.arg(), r.arg());
      work.emplace_back(l.fun(), r.fun());
    } else {
      return std::nullopt;
    }
  }
  Substitution out;
  for (const auto& [x, u] : b) out.bind(x, resolve(u, b));
  return out;
}

Rule rename_apart(const Rule& r, const std::set<std::string>& avoid) {
  Substitution ren;
  for (const auto& x : r.vars())
    if (avoid.count(x)) ren.bind(x, Term::var(fresh_name(base_name(x))));
  if (ren.empty()) return r;
  Rule out{r.name, {}, substitute(r.lhs, ren), substitute(r.rhs, ren)};
  for (const auto& c : r.conditions) out.conditions.push_back({substitute(c.lhs, ren), substitute(c.rhs, ren)});
  return out;
}

}  // namespace confluo
