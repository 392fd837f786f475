#include "confluo/beta.hpp"

#include <algorithm>

#include "confluo/error.hpp"

namespace confluo {

namespace {

bool is_redex(const Term& t) { return t.is_app() && t.fun().is_lam(); }

Term contract(const Term& redex) { return instantiate(redex.fun().body(), redex.arg()); }

Term close_over(const std::string& hint, const std::string& name, const Term& body) {
  return Term::lam_raw(hint, abstract(body, name));
}

void redexes_rec(const Term& t, Position& cur, std::vector<Position>& out) {
  if (!t.has_lambda()) return;
  auto descend = [&](const Term& sub, std::uint8_t dir) {
    cur = cur.child(dir);
    redexes_rec(sub, cur, out);
    auto path = cur.path();
    path.pop_back();
    cur = Position(std::move(path));
  };
  if (t.is_app()) {
    if (t.fun().is_lam()) out.push_back(cur);
    descend(t.fun(), 1);
    descend(t.arg(), 2);
  } else if (t.is_lam()) {
    descend(t.body(), 1);
  }
}

void reducts_rec(const Term& t, std::vector<Term>& out) {
  if (!t.has_lambda()) return;
  if (t.is_lam()) {
    auto opened = open_fresh(t);
    std::vector<Term> inner;
    reducts_rec(opened.body, inner);
    for (auto& r : inner) out.push_back(close_over(t.name(), opened.name, r));
  } else if (t.is_app()) {
    if (t.fun().is_lam()) out.push_back(contract(t));
    std::vector<Term> inner;
    reducts_rec(t.fun(), inner);
    for (auto& r : inner) out.push_back(Term::app(r, t.arg()));
    inner.clear();
    reducts_rec(t.arg(), inner);
    for (auto& r : inner) out.push_back(Term::app(t.fun(), r));
  }
}

void parallel_rec(const Term& t, std::size_t cap, TermIndex& out) {
  auto add = [&](const Term& u) {
    out.insert(u);
    if (out.size() > cap) throw SizeLimit("more than " + std::to_string(cap) + " parallel β-reducts");
  };
  if (!t.has_lambda()) {
    add(t);
    return;
  }
  if (t.is_lam()) {
    auto opened = open_fresh(t);
    TermIndex inner;
    parallel_rec(opened.body, cap, inner);
    for (const auto& b : inner) add(close_over(t.name(), opened.name, b));
    return;
  }
  // Application.
  TermIndex funs, args;
  parallel_rec(t.fun(), cap, funs);
  parallel_rec(t.arg(), cap, args);
  for (const auto& f : funs)
    for (const auto& a : args) add(Term::app(f, a));
  if (t.fun().is_lam()) {
    auto opened = open_fresh(t.fun());
    TermIndex bodies;
    parallel_rec(opened.body, cap, bodies);
    for (const auto& b : bodies) {
      Term raw = abstract(b, opened.name);
      for (const auto& a : args) add(instantiate(raw, a));
    }
  }
}

}  // namespace

Term HeadForm::reassemble() const {
  Term t = Term::app(head, args);
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) t = Term::lam(*it, t);
  return t;
}

HeadForm head_form(const Term& t) {
  HeadForm hf;
  Term cur = t;
  while (cur.is_lam()) {
    auto opened = open_fresh(cur);
    hf.binders.push_back(opened.name);
    cur = opened.body;
  }
  auto sp = spine(cur);
  hf.head = sp.head;
  hf.args = std::move(sp.args);
  hf.shape = hf.head.is_lam() ? HeadForm::Shape::Redex : HeadForm::Shape::Atomic;
  return hf;
}

std::vector<Position> beta_redexes(const Term& t) {
  std::vector<Position> out;
  Position cur;
  redexes_rec(t, cur, out);
  return out;
}

bool is_beta_normal(const Term& t) {
  if (!t.has_lambda()) return true;
  if (t.is_app()) return !t.fun().is_lam() && is_beta_normal(t.fun()) && is_beta_normal(t.arg());
  if (t.is_lam()) return is_beta_normal(t.body());
  return true;
}

Term beta_step_at(const Term& t, const Position& p) {
  return rewrite_at(t, p, [&p](const Term& sub) {
    if (!is_redex(sub)) throw InvalidPosition("no β-redex at position " + p.to_string());
    return contract(sub);
  });
}

std::vector<Term> beta_reducts(const Term& t) {
  std::vector<Term> out;
  reducts_rec(t, out);
  return out;
}

std::optional<Term> head_step(const Term& t) {
  if (t.is_lam()) {
    auto opened = open_fresh(t);
    auto r = head_step(opened.body);
    if (!r) return std::nullopt;
    return close_over(t.name(), opened.name, *r);
  }
  if (!t.is_app()) return std::nullopt;
  auto sp = spine(t);
  if (!sp.head.is_lam()) return std::nullopt;
  Term reduct = instantiate(sp.head.body(), sp.args.front());
  return Term::app(reduct, std::span<const Term>(sp.args).subspan(1));
}

std::optional<Term> leftmost_outermost_step(const Term& t) {
  if (!t.has_lambda()) return std::nullopt;
  if (t.is_lam()) {
    auto opened = open_fresh(t);
    auto r = leftmost_outermost_step(opened.body);
    if (!r) return std::nullopt;
    return close_over(t.name(), opened.name, *r);
  }
  if (!t.is_app()) return std::nullopt;
  if (t.fun().is_lam()) return contract(t);
  if (auto f = leftmost_outermost_step(t.fun())) return Term::app(*f, t.arg());
  if (auto a = leftmost_outermost_step(t.arg())) return Term::app(t.fun(), *a);
  return std::nullopt;
}

BetaResult beta_nf(const Term& t, std::size_t fuel) {
  Term cur = t;
  for (std::size_t used = 0;; ++used) {
    if (is_beta_normal(cur)) return NormalForm{cur, used};
    if (used == fuel) return FuelExhausted{cur, used};
    cur = *leftmost_outermost_step(cur);
  }
}

std::vector<Term> parallel_beta_reducts(const Term& t, std::size_t cap) {
  TermIndex out;
  parallel_rec(t, cap, out);
  return out.items();
}

Term complete_development(const Term& t) {
  if (!t.has_lambda()) return t;
  if (t.is_lam()) {
    auto opened = open_fresh(t);
    return close_over(t.name(), opened.name, complete_development(opened.body));
  }
  if (!t.is_app()) return t;
  Term arg = complete_development(t.arg());
  if (t.fun().is_lam()) {
    auto opened = open_fresh(t.fun());
    Term body = complete_development(opened.body);
    return instantiate(abstract(body, opened.name), arg);
  }
  return Term::app(complete_development(t.fun()), arg);
}

std::vector<Term> succ_children(const Term& t) {
  HeadForm hf = head_form(t);
  if (hf.shape == HeadForm::Shape::Redex) return {*head_step(t)};
  return hf.args;
}

std::optional<WnMeasure> wn_measure(const Term& t, std::size_t fuel) {
  auto r = beta_nf(t, fuel);
  if (auto* nf = std::get_if<NormalForm>(&r)) return WnMeasure{nf->steps, t.size()};
  return std::nullopt;
}

}  // namespace confluo
