#include <doctest.h>

#include <set>

#include "confluo/analysis.hpp"
#include "confluo/criteria.hpp"
#include "confluo/unify.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace confluo;

namespace {

const char* kY = "((\\x. \\f. f (x x f)) (\\x. \\f. f (x x f)) s)";

void first_seen(const Term& t, std::vector<std::string>& order) {
  if (t.is_var()) {
    if (std::find(order.begin(), order.end(), t.name()) == order.end()) order.push_back(t.name());
  } else if (t.is_app()) {
    first_seen(t.fun(), order);
    first_seen(t.arg(), order);
  } else if (t.is_lam()) {
    first_seen(t.body(), order);
  }
}

// Pair printed with variables renamed in order of first appearance, so
// copies that differ only in variable names compare equal.
std::string canonical(const CriticalPair& cp) {
  std::vector<std::string> order;
  for (const auto& c : cp.conditions) {
    first_seen(c.lhs, order);
    first_seen(c.rhs, order);
  }
  first_seen(cp.left, order);
  first_seen(cp.right, order);
  Substitution ren;
  for (std::size_t i = 0; i < order.size(); ++i) ren.bind(order[i], Term::var("v" + std::to_string(i)));
  std::string out = cp.rule_outer + "/" + cp.rule_inner + "@" + cp.overlap_pos.to_string() + ":";
  for (const auto& c : cp.conditions)
    out += print_term(substitute(c.lhs, ren)) + "=" + print_term(substitute(c.rhs, ren)) + ";";
  return out + print_term(substitute(cp.left, ren)) + "|" + print_term(substitute(cp.right, ren));
}

std::multiset<std::string> canonical_set(const std::vector<CriticalPair>& cps) {
  std::multiset<std::string> out;
  for (const auto& cp : cps) out.insert(canonical(cp));
  return out;
}

// Number of overlaps, counted by trying every rule pair at every
// non-variable position of the outer left-hand side.
std::size_t count_overlaps(const RewriteSystem& sys) {
  std::size_t n = 0;
  for (const auto& outer : sys.rules())
    for (const auto& inner0 : sys.rules()) {
      Rule inner = rename_apart(inner0, outer.vars());
      std::vector<Position> ps;
      oracle::all_positions(outer.lhs, {}, ps);
      for (const auto& p : ps) {
        Term sub = subterm_at(outer.lhs, p);
        if (sub.is_var()) continue;
        if (p.empty() && outer.name == inner0.name) continue;
        if (mgu(sub, inner.lhs)) ++n;
      }
    }
  return n;
}

Term P(const char* s, const RewriteSystem& sys) { return oracle::parse(s, sys.signature()); }

}  // namespace

TEST_CASE("critical_pairs examples") {
  auto tree = corpus::load("tree");
  auto cps = critical_pairs(tree);
  const CriticalPair* occ = nullptr;
  for (const auto& cp : cps)
    if (cp.rule_outer == "occ_ff" && cp.rule_inner == "occ_tt") occ = &cp;
  REQUIRE(occ);
  CHECK(occ->overlap_pos.empty());
  CHECK_FALSE(occ->trivial);
  REQUIRE(occ->conditions.size() == 2);
  CHECK(occ->conditions[0].lhs == occ->conditions[1].lhs);
  CHECK(occ->conditions[0].lhs == P("gt (len l) x", tree));
  std::set<std::string> targets{print_term(occ->conditions[0].rhs), print_term(occ->conditions[1].rhs)};
  CHECK(targets == std::set<std::string>{"ff", "tt"});
  CHECK(occ->right == Term::constant("ff"));
  CHECK(occ->left == P("occ o (get l x)", tree));
  CHECK(describe(*occ) == "occ_ff/occ_tt at e: gt (len l) x = ff /\\ gt (len l) x = tt => (occ o (get l x), ff)");

  auto car = parse_system("sig car : 1 ; sig cons : 2 ; rule car: car (cons x l) -> x ;");
  CHECK(critical_pairs(car).empty());

  auto fg = parse_system("sig f : 1 ; sig g : 1 ; sig a : 0 ; sig b : 0 ; sig c : 0 ;\n"
                         "rule fg: f (g x) -> a ; rule gb: g b -> c ;");
  auto p = critical_pairs(fg);
  REQUIRE(p.size() == 1);
  CHECK(p[0].overlap_pos == Position{2});
  CHECK(p[0].left == P("f c", fg));
  CHECK(p[0].right == P("a", fg));
  CHECK(p[0].conditions.empty());
  CHECK(p[0].rule_outer == "fg");
  CHECK(p[0].rule_inner == "gb");
}

TEST_CASE("critical pairs are instances of both rules") {
  for (const char* name : {"tree", "full", "minus_cond", "needs_beta_4"}) {
    auto sys = corpus::load(name);
    auto cps = critical_pairs(sys);
    CHECK(cps.size() == count_overlaps(sys));
    for (const auto& cp : cps) {
      const Rule* outer = sys.find(cp.rule_outer);
      const Rule* inner = sys.find(cp.rule_inner);
      REQUIRE(outer);
      REQUIRE(inner);
      CHECK_FALSE(cp.trivial);
      CHECK(cp.conditions.size() == outer->conditions.size() + inner->conditions.size());
      // right is an instance of the outer rhs; left differs from an outer lhs
      // instance only at the overlap, where it holds an inner rhs instance.
      if (!outer->rhs.has_lambda()) CHECK(match(outer->rhs, cp.right));
      Term sub = subterm_at(outer->lhs, cp.overlap_pos);
      CHECK_FALSE(sub.is_var());
      if (!inner->rhs.has_lambda()) CHECK(match(inner->rhs, subterm_at(cp.left, cp.overlap_pos)));
    }
  }
}

TEST_CASE("critical_pairs does not depend on rule order") {
  for (const char* name : {"tree", "full", "minus_cond"}) {
    auto sys = corpus::load(name);
    auto rules = sys.rules();
    std::reverse(rules.begin(), rules.end());
    RewriteSystem rev(sys.signature(), rules);
    CHECK(canonical_set(critical_pairs(sys)) == canonical_set(critical_pairs(rev)));
  }
  // Root overlaps come in both orders, mirrored.
  auto cps = critical_pairs(corpus::load("full"));
  for (const auto& cp : cps) {
    if (!cp.overlap_pos.empty()) continue;
    bool mirrored = false;
    for (const auto& other : cps)
      if (other.rule_outer == cp.rule_inner && other.rule_inner == cp.rule_outer && other.overlap_pos.empty()) {
        CriticalPair flip = other;
        std::swap(flip.left, flip.right);
        std::reverse(flip.conditions.begin(), flip.conditions.end());
        flip.rule_outer = cp.rule_outer;
        flip.rule_inner = cp.rule_inner;
        mirrored |= canonical(flip) == canonical(cp);
      }
    CHECK(mirrored);
  }
}

TEST_CASE("orthonormality") {
  auto full = corpus::load("full");
  auto v = orthonormality(full);
  CHECK(v.ok);
  CHECK(v.failures.empty());
  // Every pair of the full system carries the clash.
  auto cps = critical_pairs(full);
  CHECK(cps.size() == 8);
  std::set<std::string> roots;
  for (const auto& cp : cps) {
    CHECK(has_condition_clash(cp.conditions));
    CHECK(cp.overlap_pos.empty());
    roots.insert(cp.rule_outer + "/" + cp.rule_inner);
  }
  CHECK(roots == std::set<std::string>{"occ_ff/occ_tt", "occ_tt/occ_ff", "filter_tt/filter_ff",
                                       "filter_ff/filter_tt", "app_tt/app_ff", "app_ff/app_tt", "rep_tt/rep_ff",
                                       "rep_ff/rep_tt"});

  auto minus = orthonormality(corpus::load("minus_cond"));
  CHECK_FALSE(minus.ok);
  bool open = false;
  for (const auto& f : minus.failures)
    open |= f.kind == OrthonormalFailure::Kind::BadCondition && f.which == "open";
  CHECK(open);

  auto same = parse_system("sig p : 1 ; sig f : 1 ; sig tt : 0 ; sig a : 0 ; sig b : 0 ;\n"
                           "rule fa: p x = tt => f x -> a ; rule fb: p x = tt => f x -> b ;");
  auto sv = orthonormality(same);
  CHECK_FALSE(sv.ok);
  REQUIRE(!sv.failures.empty());
  CHECK(sv.failures[0].kind == OrthonormalFailure::Kind::FeasiblePair);
  CHECK(sv.failures[0].pair.has_value());

  auto nl = parse_system("sig eq : 2 ; sig tt : 0 ; rule eq: eq x x -> tt ;");
  auto nv = orthonormality(nl);
  CHECK_FALSE(nv.ok);
  CHECK(nv.failures[0].kind == OrthonormalFailure::Kind::NotLeftLinear);
  CHECK(nv.failures[0].describe() == "NotLeftLinear(eq)");

  auto redex = parse_system("sig f : 1 ; sig a : 0 ; rule r: x = (\\z. z) a => f x -> a ;");
  CHECK(orthonormality(redex).failures[0].which == "not-beta-nf");
  auto def = parse_system("sig f : 1 ; sig g : 0 ; sig a : 0 ; rule r: x = g => f x -> a ; rule g: g -> a ;");
  CHECK(orthonormality(def).failures[0].which == "contains-defined-symbol");
}

TEST_CASE("dropping a condition of an occ rule makes its pair feasible") {
  auto full = corpus::load("full");
  auto rules = full.rules();
  for (auto& r : rules)
    if (r.name == "occ_tt") r.conditions.clear();
  auto v = orthonormality(RewriteSystem(full.signature(), rules));
  CHECK_FALSE(v.ok);
  REQUIRE(v.failures.size() == 2);
  for (const auto& f : v.failures) {
    CHECK(f.kind == OrthonormalFailure::Kind::FeasiblePair);
    CHECK(f.pair->conditions.size() == 1);
  }
}

TEST_CASE("has_condition_clash") {
  Term d = Term::var("d");
  CHECK(has_condition_clash({{d, Term::constant("tt")}, {d, Term::constant("ff")}}));
  CHECK_FALSE(has_condition_clash({{d, Term::constant("tt")}, {d, Term::constant("tt")}}));
  CHECK_FALSE(has_condition_clash({{d, Term::constant("tt")}, {Term::var("e"), Term::constant("ff")}}));
  CHECK_FALSE(has_condition_clash({}));
}

TEST_CASE("confluence_probe finds the minus peak") {
  auto sys = corpus::load("minus_cond");
  auto seeds = corpus::seeds("minus", sys.signature());
  auto rep = confluence_probe(sys, {RelKind::BetaUnionA, kOmega, BBase::Empty}, seeds);
  CHECK(rep.joined + rep.unknown + rep.counterexamples.size() == rep.peaks_tested);
  CHECK(rep.records.size() == rep.peaks_tested);
  REQUIRE_FALSE(rep.counterexamples.empty());
  bool found = false;
  for (const auto& c : rep.counterexamples) {
    if (c.left == Term::constant("zero") && c.right == P("s zero", sys)) found = true;
    if (c.right == Term::constant("zero") && c.left == P("s zero", sys)) found = true;
    CHECK(c.verdict == Outcome::NotJoinable);
    REQUIRE(c.to_left);
    REQUIRE(c.to_right);
    CHECK(c.to_left->start == c.source);
    CHECK(c.to_left->end() == c.left);
    CHECK(c.to_right->end() == c.right);
  }
  CHECK(found);
}

TEST_CASE("confluence_probe on the failure systems") {
  for (const char* name : {"needs_beta_1", "needs_beta_2", "needs_beta_3", "needs_beta_4"}) {
    CAPTURE(name);
    auto sys = corpus::load(name);
    auto seeds = corpus::seeds("needs_beta", sys.signature());
    auto b = confluence_probe(sys, {RelKind::BetaUnionB, kOmega, BBase::A}, seeds);
    REQUIRE(b.counterexamples.size() == 1);
    std::set<std::string> ends{print_term(b.counterexamples[0].left), print_term(b.counterexamples[0].right)};
    CHECK(ends == std::set<std::string>{"a", "b"});
    auto a = confluence_probe(sys, {RelKind::BetaUnionA, kOmega, BBase::Empty}, seeds);
    CHECK(a.counterexamples.empty());
  }
}

TEST_CASE("confluence_probe on the Tree corpus") {
  auto sys = corpus::load("tree");
  auto seeds = corpus::seeds("tree", sys.signature());
  auto rep = confluence_probe(sys, {RelKind::BetaUnionB, kOmega, BBase::Empty}, seeds, {}, 2);
  CHECK(rep.counterexamples.empty());
  CHECK(rep.peaks_tested > 0);
  CHECK(rep.joined + rep.unknown == rep.peaks_tested);
}

TEST_CASE("probe reports do not depend on the thread count") {
  auto sys = corpus::load("full");
  auto seeds = corpus::seeds("full", sys.signature());
  Engine e1(sys), e4(sys);
  RelationSpec rel{RelKind::BetaUnionB, kOmega, BBase::Empty};
  auto one = confluence_probe(e1, rel, seeds, 2, 1);
  auto four = confluence_probe(e4, rel, seeds, 2, 4);
  CHECK(to_json(one).dump() == to_json(four).dump());
  CHECK(one.counterexamples.empty());
}

TEST_CASE("commutation_probe") {
  auto tree = corpus::load("tree");
  auto seeds = corpus::seeds("tree", tree.signature());
  auto ba = commutation_probe(tree, RelationSpec::beta(), {RelKind::A, kOmega, BBase::Empty}, seeds);
  CHECK(ba.counterexamples.empty());
  CHECK(ba.peaks_tested > 0);
  auto bb = commutation_probe(tree, RelationSpec::beta(), RelationSpec::beta(), seeds);
  CHECK(bb.counterexamples.empty());

  auto minus = corpus::load("minus_cond");
  Term y = P(kY, minus);
  Term seed = Term::app(Term::app(Term::constant("minus"), y), y);
  auto m = commutation_probe(minus, RelationSpec::beta(), {RelKind::A, kOmega, BBase::Empty}, {seed});
  CHECK_FALSE(m.counterexamples.empty());
  auto mb = commutation_probe(minus, RelationSpec::beta(), RelationSpec::beta(), {seed});
  CHECK(mb.counterexamples.empty());
}

TEST_CASE("reduction graph export") {
  auto sys = corpus::load("tree");
  Engine e(sys);
  std::string dot = reduction_graph_dot(e, P("car (cons (len nil) nil)", sys), {RelKind::A, kOmega}, 5);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("len_nil") != std::string::npos);
  CHECK(dot.find("car_cons") != std::string::npos);
  CHECK(dot.back() == '\n');
}
