#include "confluo/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "confluo/beta.hpp"
#include "confluo/error.hpp"
#include "confluo/unify.hpp"

namespace confluo {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t rel_hash(const RelationSpec& r) {
  return mix(mix(static_cast<std::size_t>(r.kind), r.level), static_cast<std::size_t>(r.b_base));
}

Step prefixed(const Step& s, std::uint8_t dir) {
  Step out = s;
  out.pos = Position{dir}.concat(s.pos);
  return out;
}

}  // namespace

std::string RelationSpec::to_string() const {
  std::string k;
  switch (kind) {
    case RelKind::A: k = "A"; break;
    case RelKind::B: k = "B"; break;
    case RelKind::BetaUnionA: k = "beta+A"; break;
    case RelKind::BetaUnionB: k = "beta+B"; break;
    case RelKind::BetaOnly: return "beta";
  }
  k += "_" + (level == kOmega ? std::string("omega") : std::to_string(level));
  if (is_b() && b_base == BBase::A) k += " (B_0 = A)";
  return k;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Joinable: return "joinable";
    case Outcome::NotJoinable: return "not-joinable";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

std::size_t Engine::KeyHash::operator()(const Key& k) const {
  return mix(k.t.hash(), rel_hash({k.kind, k.level, k.base}));
}

std::size_t Engine::CondKeyHash::operator()(const CondKey& k) const {
  return mix(mix(k.d.hash(), k.c.hash()), rel_hash(k.rel));
}

Engine::Engine(const RewriteSystem& sys, StepBudget budget) : sys_(sys), budget_(budget) {}

RelationSpec Engine::resolve(RelationSpec rel) const {
  if (rel.kind == RelKind::BetaOnly) return RelationSpec::beta();
  if (rel.level == kOmega) {
    rel.level = budget_.max_level;
    omega_run_ = true;
  }
  if (!rel.is_b()) rel.b_base = BBase::Empty;
  return rel;
}

std::optional<RelationSpec> Engine::condition_relation(const RelationSpec& rel, RelationSpec* rule_rel) const {
  switch (rel.kind) {
    case RelKind::BetaOnly:
      return std::nullopt;
    case RelKind::A:
    case RelKind::BetaUnionA:
      if (rel.level == 0) return std::nullopt;
      *rule_rel = {RelKind::A, rel.level, BBase::Empty};
      return RelationSpec{RelKind::A, rel.level - 1, BBase::Empty};
    case RelKind::B:
    case RelKind::BetaUnionB:
      if (rel.level == 0) {
        if (rel.b_base == BBase::Empty) return std::nullopt;
        return condition_relation({RelKind::A, budget_.max_level, BBase::Empty}, rule_rel);
      }
      *rule_rel = {RelKind::B, rel.level, rel.b_base};
      return RelationSpec{RelKind::BetaUnionB, rel.level - 1, rel.b_base};
  }
  return std::nullopt;
}

Outcome Engine::condition_verdict(const Term& d, const Term& c, const RelationSpec& rel) const {
  CondKey key{d, c, rel};
  {
    std::shared_lock lock(mu_);
    if (auto it = conds_.find(key); it != conds_.end()) return it->second;
  }
  Outcome o = join_search(d, rel, c, rel, false).outcome;
  std::unique_lock lock(mu_);
  conds_.emplace(std::move(key), o);
  return o;
}

Outcome Engine::check_conditions(const Rule& r, const Substitution& s, const RelationSpec& cond_rel) const {
  bool unknown = false;
  for (const auto& cond : r.conditions) {
    Term d = substitute(cond.lhs, s);
    Term c = substitute(cond.rhs, s);
    Outcome o = condition_verdict(d, c, cond_rel);
    if (o == Outcome::NotJoinable) {
      bool floor = cond_rel.level == 0 && (cond_rel.kind == RelKind::A || cond_rel.b_base == BBase::Empty);
      if (floor && omega_run_ && !level_limit_hit_) {
        RelationSpec up = cond_rel;
        up.level = 1;
        if (condition_verdict(d, c, up) == Outcome::Joinable) level_limit_hit_ = true;
      }
      return Outcome::NotJoinable;
    }
    if (o == Outcome::Unknown) unknown = true;
  }
  return unknown ? Outcome::Unknown : Outcome::Joinable;
}

std::vector<Reduct> Engine::root_rule_steps(const Term& t, const RelationSpec& rel, bool* undecided) const {
  std::vector<Reduct> out;
  RelationSpec rule_rel;
  auto cond_rel = condition_relation(rel, &rule_rel);
  if (!cond_rel) return out;
  Term head = t;
  while (head.is_app()) head = head.fun();
  if (!head.is_const()) return out;
  for (std::size_t idx : sys_.rules_for(head.name())) {
    const Rule& r = sys_.rules()[idx];
    Substitution s;
    if (!match_into(r.lhs, t, s)) continue;
    Outcome o = r.conditions.empty() ? Outcome::Joinable : check_conditions(r, s, *cond_rel);
    if (o == Outcome::Unknown && undecided) *undecided = true;
    if (o != Outcome::Joinable) continue;
    out.push_back({substitute(r.rhs, s), Step{{}, Step::Kind::Rule, r.name, rule_rel, s}});
  }
  return out;
}

std::shared_ptr<const Reducts> Engine::reducts_of(const Term& t, const RelationSpec& rel) const {
  Key key{t, rel.kind, rel.level, rel.b_base};
  if (!t.is_var()) {
    std::shared_lock lock(mu_);
    if (auto it = reducts_.find(key); it != reducts_.end()) return it->second;
  }
  auto out = std::make_shared<Reducts>();
  if (rel.has_beta() && t.is_app() && t.fun().is_lam())
    out->items.push_back({instantiate(t.fun().body(), t.arg()), Step{{}, Step::Kind::Beta, "", rel, {}}});
  for (auto& r : root_rule_steps(t, rel, &out->condition_undecided)) out->items.push_back(std::move(r));
  if (t.is_app()) {
    auto f = reducts_of(t.fun(), rel);
    for (const auto& r : f->items) out->items.push_back({Term::app(r.term, t.arg()), prefixed(r.step, 1)});
    auto a = reducts_of(t.arg(), rel);
    for (const auto& r : a->items) out->items.push_back({Term::app(t.fun(), r.term), prefixed(r.step, 2)});
    out->condition_undecided |= f->condition_undecided || a->condition_undecided;
  } else if (t.is_lam()) {
    auto opened = open_named(t);
    auto b = reducts_of(opened.body, rel);
    for (const auto& r : b->items)
      out->items.push_back({Term::lam_raw(t.name(), abstract(r.term, opened.name)), prefixed(r.step, 1)});
    out->condition_undecided |= b->condition_undecided;
  }
  if (t.is_var()) return out;
  std::unique_lock lock(mu_);
  return reducts_.emplace(std::move(key), std::move(out)).first->second;
}

std::shared_ptr<const Reducts> Engine::one_step_reducts(const Term& t, const RelationSpec& rel) const {
  return reducts_of(t, resolve(rel));
}

Exploration::Exploration(const Term& start) {
  nodes.insert(start);
  parent.push_back(0);
  via.emplace_back();
  depth.push_back(0);
  frontier.push_back(0);
}

std::vector<std::size_t> Exploration::expand(const Engine& e, const RelationSpec& rel_in) {
  RelationSpec rel = e.resolve(rel_in);
  std::vector<std::size_t> fresh;
  for (std::size_t n : frontier) {
    auto rs = e.reducts_of(nodes[n], rel);
    undecided |= rs->condition_undecided;
    for (const auto& r : rs->items) {
      auto [idx, inserted] = nodes.insert(r.term);
      if (!inserted) continue;
      parent.push_back(n);
      via.push_back(r.step);
      depth.push_back(level + 1);
      fresh.push_back(idx);
    }
  }
  ++level;
  frontier = fresh;
  return fresh;
}

std::vector<Reduct> Exploration::path_to(std::size_t n) const {
  std::vector<Reduct> out;
  while (n != 0) {
    out.push_back({nodes[n], via[n]});
    n = parent[n];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Exploration Engine::explore(const Term& t, const RelationSpec& rel_in, std::size_t depth) const {
  RelationSpec rel = resolve(rel_in);
  Exploration x(t);
  while (!x.frontier.empty() && x.level < depth && x.nodes.size() <= budget_.max_graph) x.expand(*this, rel);
  return x;
}

JoinVerdict Engine::join_search(const Term& u, const RelationSpec& ru, const Term& v, const RelationSpec& rv,
                                bool traces) const {
  JoinVerdict out;
  if (u == v) {
    out.outcome = Outcome::Joinable;
    out.witness = u;
    return out;
  }
  Exploration l(u), r(v);
  for (;;) {
    bool l_can = !l.frontier.empty() && l.level < budget_.join_depth;
    bool r_can = !r.frontier.empty() && r.level < budget_.join_depth;
    if (!l_can && !r_can) {
      bool closed = l.frontier.empty() && r.frontier.empty() && !l.undecided && !r.undecided;
      out.outcome = closed ? Outcome::NotJoinable : Outcome::Unknown;
      return out;
    }
    bool left_side = l_can && (!r_can || l.frontier.size() <= r.frontier.size());
    Exploration& s = left_side ? l : r;
    Exploration& o = left_side ? r : l;
    auto fresh = s.expand(*this, left_side ? ru : rv);
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::size_t best_depth = 0;
    std::string best_print;
    for (std::size_t n : fresh) {
      auto m = o.nodes.find(s.nodes[n]);
      if (!m) continue;
      std::size_t d = s.depth[n] + o.depth[*m];
      std::string p = print_term(s.nodes[n]);
      if (!best || d < best_depth || (d == best_depth && p < best_print)) {
        best = {n, *m};
        best_depth = d;
        best_print = std::move(p);
      }
    }
    if (best) {
      out.outcome = Outcome::Joinable;
      out.witness = s.nodes[best->first];
      if (traces) {
        auto sp = s.path_to(best->first);
        auto op = o.path_to(best->second);
        out.left = left_side ? sp : op;
        out.right = left_side ? op : sp;
      }
      return out;
    }
    if (l.nodes.size() + r.nodes.size() > budget_.max_graph) {
      out.outcome = Outcome::Unknown;
      return out;
    }
  }
}

JoinVerdict Engine::joinable(const Term& u, const Term& v, const RelationSpec& rel) const {
  RelationSpec r = resolve(rel);
  return join_search(u, r, v, r, true);
}

JoinVerdict Engine::meet(const Term& u, const RelationSpec& ru, const Term& v, const RelationSpec& rv) const {
  return join_search(u, resolve(ru), v, resolve(rv), true);
}

NormalizeResult Engine::normalize(const Term& t, const RelationSpec& rel_in, Strategy strategy) const {
  RelationSpec rel = resolve(rel_in);
  NormalizeResult out;
  if (strategy == Strategy::LeftmostOutermost) {
    Term cur = t;
    for (std::size_t steps = 0;; ++steps) {
      auto rs = reducts_of(cur, rel);
      ++out.explored;
      if (rs->items.empty()) {
        if (rs->condition_undecided) out.unknown = true;
        else out.normal_forms.push_back(cur);
        return out;
      }
      if (steps == budget_.beta_fuel) {
        out.unknown = true;
        return out;
      }
      cur = rs->items.front().term;
    }
  }
  TermIndex seen;
  seen.insert(t);
  std::deque<Term> queue{t};
  while (!queue.empty()) {
    Term cur = queue.front();
    queue.pop_front();
    ++out.explored;
    auto rs = reducts_of(cur, rel);
    if (rs->condition_undecided) out.unknown = true;
    if (rs->items.empty() && !rs->condition_undecided) out.normal_forms.push_back(cur);
    for (const auto& r : rs->items) {
      if (seen.size() >= budget_.max_graph) {
        out.unknown = true;
        return out;
      }
      if (seen.insert(r.term).second) queue.push_back(r.term);
    }
  }
  return out;
}

std::vector<Term> Engine::parallel_reducts(const Term& t, const RelationSpec& rel_in, Flavor flavor,
                                           std::size_t cap) const {
  RelationSpec rel = resolve(rel_in);
  if (rel.has_beta()) rel.kind = rel.is_b() ? RelKind::B : RelKind::A;
  std::function<TermIndex(const Term&)> par = [&](const Term& u) {
    TermIndex out;
    auto add = [&](const Term& x) {
      out.insert(x);
      if (out.size() > cap) throw SizeLimit("more than " + std::to_string(cap) + " parallel reducts");
    };
    add(u);
    if (u.is_app()) {
      auto fs = par(u.fun());
      auto as = par(u.arg());
      for (const auto& f : fs)
        for (const auto& a : as) add(Term::app(f, a));
    } else if (u.is_lam()) {
      auto opened = open_named(u);
      for (const auto& b : par(opened.body)) add(Term::lam_raw(u.name(), abstract(b, opened.name)));
    }
    for (const auto& step : root_rule_steps(u, rel, nullptr)) {
      if (flavor == Flavor::Flat) {
        add(step.term);
        continue;
      }
      // (rule): the images of σ are reduced in parallel in the same step.
      const Rule& r = *sys_.find(step.step.rule);
      std::vector<std::pair<std::string, std::vector<Term>>> choices;
      for (const auto& [x, img] : step.step.sigma.bindings()) {
        auto ps = par(img);
        choices.emplace_back(x, ps.items());
      }
      std::vector<std::size_t> pick(choices.size(), 0);
      for (;;) {
        Substitution tau;
        for (std::size_t i = 0; i < choices.size(); ++i) tau.bind(choices[i].first, choices[i].second[pick[i]]);
        add(substitute(r.rhs, tau));
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].second.size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
    return out;
  };
  return par(t).items();
}

Derivation Engine::justify(const Term& start, const std::vector<Reduct>& path) const {
  Derivation d{start, {}};
  for (const auto& r : path) {
    DerivationStep ds{r.step, r.term, {}};
    if (r.step.kind == Step::Kind::Rule) {
      const Rule* rule = sys_.find(r.step.rule);
      RelationSpec rule_rel;
      auto cond_rel = condition_relation(r.step.rel, &rule_rel);
      for (const auto& c : rule->conditions) {
        Term lhs = substitute(c.lhs, r.step.sigma);
        Term rhs = substitute(c.rhs, r.step.sigma);
        auto v = join_search(lhs, *cond_rel, rhs, *cond_rel, true);
        ConditionProof proof{lhs, rhs, v.witness.value_or(lhs), {}};
        proof.sides.push_back(justify(lhs, v.left));
        proof.sides.push_back(justify(rhs, v.right));
        ds.conditions.push_back(std::move(proof));
      }
    }
    d.steps.push_back(std::move(ds));
  }
  return d;
}

std::optional<Derivation> Engine::record_derivation(const Term& t, const RelationSpec& rel_in,
                                                    const Term& target) const {
  RelationSpec rel = resolve(rel_in);
  Exploration s(t);
  if (t == target) return Derivation{t, {}};
  while (!s.frontier.empty() && s.level < budget_.join_depth && s.nodes.size() <= budget_.max_graph) {
    for (std::size_t n : s.expand(*this, rel))
      if (s.nodes[n] == target) return justify(t, s.path_to(n));
  }
  return std::nullopt;
}

namespace {

void trace_lines(const Derivation& d, const Signature* sig, const std::string& indent, std::string& out) {
  for (const auto& s : d.steps) {
    out += indent + s.step.pos.to_string() + " ";
    if (s.step.kind == Step::Kind::Beta) {
      out += "beta ";
    } else {
      out += "rule " + s.step.rule + " ";
    }
    out += print_term(s.result, sig) + "\n";
    for (const auto& c : s.conditions) {
      out += indent + "  cond " + print_term(c.lhs, sig) + " = " + print_term(c.rhs, sig) + " joined at " +
             print_term(c.witness, sig) + "\n";
      for (std::size_t i = 0; i < c.sides.size(); ++i) {
        out += indent + "  " + (i == 0 ? "lhs " : "rhs ") + print_term(c.sides[i].start, sig) + "\n";
        trace_lines(c.sides[i], sig, indent + "    ", out);
      }
    }
  }
}

}  // namespace

std::string format_trace(const Derivation& d, const Signature* sig) {
  std::string out = "start " + print_term(d.start, sig) + "\n";
  trace_lines(d, sig, "", out);
  return out;
}

Reducts one_step_reducts(const Term& t, const RelationSpec& rel, const RewriteSystem& sys, const StepBudget& b) {
  Engine e(sys, b);
  return *e.one_step_reducts(t, rel);
}

JoinVerdict joinable(const Term& u, const Term& v, const RelationSpec& rel, const RewriteSystem& sys,
                     const StepBudget& b) {
  Engine e(sys, b);
  return e.joinable(u, v, rel);
}

}  // namespace confluo
