// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "confluo/analysis.hpp"
#include "confluo/beta.hpp"
#include "confluo/cli.hpp"
#include "confluo/criteria.hpp"
#include "confluo/rewrite.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace confluo;

namespace {

const char* kY = "((\\x. \\f. f (x x f)) (\\x. \\f. f (x x f)) s)";

struct Result {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    else detail += "; ";
    pass = false;
    detail += why;
  }
};

struct Cli {
  int code;
  std::string out;
};

Cli cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str() + err.str()};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

bool is_rel_normal(const Engine& e, const Term& t, const RelationSpec& rel) {
  auto r = e.one_step_reducts(t, rel);
  return r->items.empty() && !r->condition_undecided;
}

std::set<std::string> printed(std::initializer_list<Term> ts) {
  std::set<std::string> out;
  for (const auto& t : ts) out.insert(print_term(t));
  return out;
}

bool contains(const std::vector<Term>& v, const Term& t) { return std::find(v.begin(), v.end(), t) != v.end(); }

// Arity-compliant first-order terms over a signature, by applicative size
// (f t1 … tn has size 1 + n + Σ|ti|).
class FirstOrder {
 public:
  explicit FirstOrder(const Signature& sig) {
    for (const auto& [name, info] : sig.symbols()) symbols_.emplace_back(name, info.arity);
  }

  std::vector<Term> up_to(std::size_t n) {
    std::vector<Term> out;
    for (std::size_t k = 1; k <= n; ++k) {
      auto& v = exactly(k);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

 private:
  const std::vector<Term>& exactly(std::size_t n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    std::vector<Term> out;
    for (const auto& [f, arity] : symbols_) {
      if (n < 1 + 2 * arity) continue;
      fill(Term::constant(f), arity, n - 1 - arity, out);
    }
    return memo_[n] = std::move(out);
  }

  // Applies `head` to `left` more arguments of total size `budget`.
  void fill(const Term& head, std::size_t left, std::size_t budget, std::vector<Term>& out) {
    if (left == 0) {
      if (budget == 0) out.push_back(head);
      return;
    }
    for (std::size_t k = 1; k + (left - 1) <= budget; ++k)
      for (const auto& a : exactly(k)) fill(Term::app(head, a), left - 1, budget - k, out);
  }

  std::vector<std::pair<std::string, std::size_t>> symbols_;
  std::map<std::size_t, std::vector<Term>> memo_;
};

// Criterion 1 -------------------------------------------------------------

Result counterexample_reproduction() {
  Result r;
  auto t0 = std::chrono::steady_clock::now();
  auto run = cli({"probe", corpus::path("corpus/minus_cond.crs"), corpus::path("seeds/minus.terms"), "--rel",
                  "beta-a"});
  double cli_time = seconds_since(t0);
  if (run.code != kExitCounterexample) r.fail("probe exit " + std::to_string(run.code));

  auto sys = corpus::load("minus_cond");
  const auto& sig = sys.signature();
  Engine e(sys);
  RelationSpec rel{RelKind::BetaUnionA, kOmega, BBase::Empty};

  // Y →*_β s Y
  Term y = oracle::parse(kY, sig);
  if (!e.explore(y, RelationSpec::beta(), 3).nodes.contains(Term::app(Term::constant("s"), y)))
    r.fail("Y does not reach s Y");

  auto seeds = corpus::seeds("minus", sig);
  auto rep = confluence_probe(e, rel, seeds);
  Term zero = Term::constant("zero"), one = oracle::parse("s zero", sig);
  bool found = false;
  for (const auto& c : rep.counterexamples)
    if (printed({c.left, c.right}) == printed({zero, one}) && is_rel_normal(e, c.left, rel) &&
        is_rel_normal(e, c.right, rel))
      found = true;
  if (!found) r.fail("no (zero, s zero) peak with normal endpoints");
  if (cli_time >= 5.0) r.fail("took " + fmt(cli_time) + " s");
  if (r.pass)
    r.detail = "peak (zero, s zero), both normal; " + std::to_string(rep.peaks_tested) + " peaks in " +
               fmt(cli_time) + " s";
  return r;
}

// Criterion 2 -------------------------------------------------------------

Result failure_systems() {
  Result r;
  double worst = 0;
  for (const char* name : {"needs_beta_1", "needs_beta_2", "needs_beta_3", "needs_beta_4"}) {
    std::string file = corpus::path(std::string("corpus/") + name + ".crs");
    std::string seeds = corpus::path("seeds/needs_beta.terms");
    auto t0 = std::chrono::steady_clock::now();
    auto b = cli({"probe", file, seeds, "--rel", "beta-b", "--b-base", "a"});
    auto a = cli({"probe", file, seeds, "--rel", "beta-a"});
    double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    if (b.code != kExitCounterexample) r.fail(std::string(name) + ": beta-b exit " + std::to_string(b.code));
    if (a.code != kExitOk) r.fail(std::string(name) + ": beta-a exit " + std::to_string(a.code));

    auto sys = corpus::load(name);
    auto seed = corpus::seeds("needs_beta", sys.signature());
    auto rb = confluence_probe(sys, {RelKind::BetaUnionB, kOmega, BBase::A}, seed);
    bool ab = false;
    for (const auto& c : rb.counterexamples)
      ab |= printed({c.left, c.right}) == printed({Term::constant("a"), Term::constant("b")});
    if (!ab) r.fail(std::string(name) + ": no (a, b) peak");
    auto ra = confluence_probe(sys, {RelKind::BetaUnionA, kOmega, BBase::Empty}, seed);
    if (!ra.counterexamples.empty()) r.fail(std::string(name) + ": A-reachable counterexample");
    if (dt >= 5.0) r.fail(std::string(name) + " took " + fmt(dt) + " s");
  }
  if (r.pass) r.detail = "(a, b) under beta-b for all four, none under beta-a; slowest " + fmt(worst) + " s";
  return r;
}

// Criterion 3 -------------------------------------------------------------

Result orthonormality_claims() {
  Result r;
  std::string file = corpus::path("corpus/full.crs");
  auto check = cli({"check", file});
  if (check.code != kExitOk || check.out.find("orthonormal: true") == std::string::npos)
    r.fail("check does not report orthonormal: true");
  auto cp = cli({"cp", file});
  for (const char* pair : {"occ_ff/occ_tt at e", "occ_tt/occ_ff at e", "rep_tt/rep_ff at e", "rep_ff/rep_tt at e"})
    if (cp.out.find(pair) == std::string::npos) r.fail(std::string("cp misses ") + pair);

  auto sys = corpus::load("full");
  for (const auto& p : critical_pairs(sys)) {
    bool root_occ_or_rep = p.overlap_pos.empty() && (p.rule_outer.rfind("occ", 0) == 0 || p.rule_outer.rfind("rep", 0) == 0);
    if (!root_occ_or_rep) continue;
    if (p.conditions.size() != 2 || !(p.conditions[0].lhs == p.conditions[1].lhs) ||
        printed({p.conditions[0].rhs, p.conditions[1].rhs}) != std::set<std::string>{"tt", "ff"})
      r.fail("pair " + describe(p) + " lacks the tt/ff clash");
  }

  auto rules = sys.rules();
  for (auto& rule : rules)
    if (rule.name == "occ_tt") rule.conditions.clear();
  auto v = orthonormality(RewriteSystem(sys.signature(), rules));
  bool feasible = !v.ok && !v.failures.empty();
  for (const auto& f : v.failures) feasible &= f.kind == OrthonormalFailure::Kind::FeasiblePair;
  if (!feasible) r.fail("dropping the occ_tt condition does not give FeasiblePair");
  if (r.pass) r.detail = "orthonormal; occ and rep root overlaps clash on tt/ff; unconditional occ_tt is FeasiblePair";
  return r;
}

// Criterion 4 -------------------------------------------------------------

Result corpus_probe() {
  Result r;
  auto sys = corpus::load("full");
  auto seeds = corpus::seeds("full", sys.signature());
  std::set<std::string> heads;
  std::size_t wrapped = 0;
  for (const auto& s : seeds) {
    auto c = constants_of(s);
    heads.insert(c.begin(), c.end());
    wrapped += !beta_redexes(s).empty();
  }
  if (seeds.size() < 20) r.fail("only " + std::to_string(seeds.size()) + " seeds");
  for (const char* f : {"occ", "rep", "app", "filter"})
    if (!heads.count(f)) r.fail(std::string("no seed uses ") + f);
  if (wrapped == 0) r.fail("no seed has a beta-redex");

  auto t0 = std::chrono::steady_clock::now();
  auto run = cli({"probe", corpus::path("corpus/full.crs"), corpus::path("seeds/full.terms"), "--rel", "beta-b",
                  "--peak-width", "3"});
  double dt = seconds_since(t0);
  if (run.code != kExitOk) r.fail("probe exit " + std::to_string(run.code));
  if (run.out.find("counterexamples: 0\n") == std::string::npos) r.fail("counterexamples reported");
  auto at = run.out.find("unknown: ");
  if (at == std::string::npos) r.fail("no Unknown rate in the report");
  if (dt >= 60.0) r.fail("took " + fmt(dt) + " s");
  if (r.pass) {
    auto line = [&](const char* key) {
      auto p = run.out.find(key);
      return run.out.substr(p, run.out.find('\n', p) - p);
    };
    r.detail = std::to_string(seeds.size()) + " seeds, " + line("peaks tested") + ", " + line("unknown") +
               ", 0 counterexamples, " + fmt(dt) + " s";
  }
  return r;
}

// Criterion 5 -------------------------------------------------------------

Result diamond() {
  Result r;
  std::vector<Term> atoms{Term::constant("a"), Term::constant("b")};
  auto terms = oracle::Enumerator(atoms, true).up_to(7);
  oracle::RandomTerms rnd(atoms, 20240601);
  for (int i = 0; i < 200; ++i) terms.push_back(rnd(10));
  std::size_t checked = 0, failures = 0;
  for (const auto& t : terms) {
    Term cd = complete_development(t);
    for (const auto& u : parallel_beta_reducts(t)) {
      ++checked;
      if (!contains(parallel_beta_reducts(u), cd)) {
        if (failures++ == 0) r.fail("fails on " + print_term(t) + " => " + print_term(u));
      }
    }
  }
  if (failures) r.detail += " (" + std::to_string(failures) + " failures)";
  else r.detail = std::to_string(terms.size()) + " terms, " + std::to_string(checked) + " parallel reducts";
  return r;
}

// Criterion 6 -------------------------------------------------------------

Result sandwich_and_head() {
  Result r;
  auto sys = corpus::load("tree");
  Engine e(sys);
  auto first = FirstOrder(sys.signature()).up_to(8);

  // Terms with a head redex (λx.M) N over part of the Tree signature.
  std::vector<Term> atoms;
  for (const char* c : {"car", "cons", "nil", "zero", "len", "s"}) atoms.push_back(Term::constant(c));
  oracle::Enumerator gen(atoms, true);
  std::vector<Term> headed;
  for (std::size_t m = 1; m <= 5; ++m)
    for (std::size_t n = 1; m + n <= 6; ++n)
      for (const auto& body : gen.exactly(m, 1))
        for (const auto& arg : gen.exactly(n))
          headed.push_back(Term::app(Term::lam_raw("x", body), arg));

  std::size_t sandwich = 0, commute = 0, failures = 0;
  auto note = [&](const std::string& what) {
    if (failures++ == 0) r.fail(what);
  };
  for (std::size_t level = 1; level <= 3; ++level) {
    RelationSpec rel{RelKind::A, level, BBase::Empty};
    for (const auto* set : {&first, &headed})
      for (const auto& t : *set) {
        auto par = e.parallel_reducts(t, rel, Flavor::Nested);
        ++sandwich;
        for (const auto& x : e.one_step_reducts(t, rel)->items)
          if (!contains(par, x.term)) note("one step not parallel: " + print_term(t));
        auto many = e.explore(t, rel, 100);
        for (const auto& u : par)
          if (!many.nodes.contains(u)) note("parallel step not many: " + print_term(t));

        auto th = head_step(t);
        if (!th) continue;
        auto par_h = e.parallel_reducts(*th, rel, Flavor::Nested);
        for (const auto& u : par) {
          ++commute;
          Term cur = u;
          bool ok = contains(par_h, cur);
          for (int k = 0; !ok && k < 20; ++k) {
            auto next = head_step(cur);
            if (!next) break;
            cur = *next;
            ok = contains(par_h, cur);
          }
          if (!ok) note("head commutation fails on " + print_term(t) + " => " + print_term(u));
        }
      }
  }
  if (failures) r.detail += " (" + std::to_string(failures) + " failures)";
  else
    r.detail = std::to_string(first.size() + headed.size()) + " terms x 3 levels: " + std::to_string(sandwich) +
               " sandwich checks, " + std::to_string(commute) + " head-commutation pairs";
  return r;
}

// Criterion 7 -------------------------------------------------------------

Result projection() {
  Result r;
  auto sys = corpus::load("tree");
  const auto& sig = sys.signature();
  Engine e(sys);
  auto seeds = corpus::seeds("tree", sig);
  // Every first-order seed also under two β-wrappers.
  for (std::size_t i = 0, n = seeds.size(); i < n; ++i) {
    if (!beta_redexes(seeds[i]).empty()) continue;
    seeds.push_back(Term::app(oracle::parse("\\x. x"), seeds[i]));
    seeds.push_back(Term::app(Term::lam_raw("f", Term::app(Term::bound(0), seeds[i])), oracle::parse("\\y. y")));
  }
  for (const char* s : {"(\\x. len (cons x x)) nil", "(\\f. f (f nil)) (\\l. cons zero l)",
                        "(\\x. gt x (s zero)) (len (cons zero (cons zero nil)))",
                        "(\\y. occ (cons y nil) (nd y (cons (nd zero nil) nil))) zero"})
    seeds.push_back(oracle::parse(s, sig));

  std::string report;
  for (auto kind : {RelKind::BetaUnionA, RelKind::BetaUnionB}) {
    RelationSpec rel{kind, kOmega, BBase::Empty};
    std::size_t derivations = 0, failures = 0;
    for (const auto& s : seeds) {
      auto sn = beta_nf(s, 10000);
      if (!is_normal(sn) || !is_arity_compliant(std::get<NormalForm>(sn).term, sig)) continue;
      Term bs = std::get<NormalForm>(sn).term;
      auto reach = e.explore(s, rel, 20);
      for (const auto& t : reach.nodes) {
        auto d = e.record_derivation(s, rel, t);
        if (!d || !(d->end() == t)) continue;
        ++derivations;
        auto tn = beta_nf(t, 10000);
        bool ok = is_normal(tn) && e.record_derivation(bs, {RelKind::A, kOmega}, std::get<NormalForm>(tn).term);
        if (!ok && failures++ == 0) r.fail("no projection for " + print_term(s) + " ->* " + print_term(t));
      }
    }
    if (derivations < 100) r.fail(RelationSpec{kind}.to_string() + ": only " + std::to_string(derivations));
    report += (report.empty() ? "" : ", ") + std::to_string(derivations) + " " + rel.to_string() + " derivations";
  }
  if (r.pass) r.detail = report + ", all projected";
  return r;
}

// Criterion 8 -------------------------------------------------------------

Result well_foundedness() {
  Result r;
  std::vector<Term> atoms{Term::constant("a"), Term::constant("b")};
  auto pool = oracle::Enumerator(atoms, true).up_to(7);
  oracle::RandomTerms rnd(atoms, 77);
  for (int i = 0; i < 300; ++i) pool.push_back(rnd(12));
  std::size_t wn = 0, steps = 0, failures = 0;
  for (const auto& t : pool) {
    auto m = wn_measure(t, 200);
    if (!m) continue;
    ++wn;
    // h_steps counted again by stepping leftmost-outermost by hand.
    std::size_t count = 0;
    Term cur = t;
    while (auto next = leftmost_outermost_step(cur)) {
      cur = *next;
      ++count;
    }
    if (count != m->h_steps || m->size != t.size()) {
      if (failures++ == 0) r.fail("measure of " + print_term(t) + " is off");
      continue;
    }
    for (const auto& c : succ_children(t)) {
      ++steps;
      auto mc = wn_measure(c, 200);
      if (!mc || !(*mc < *m))
        if (failures++ == 0) r.fail("no decrease from " + print_term(t) + " to " + print_term(c));
    }
  }
  if (wn < 200) r.fail("only " + std::to_string(wn) + " normalizing terms");
  if (r.pass) r.detail = std::to_string(wn) + " terms, " + std::to_string(steps) + " child steps decrease";
  return r;
}

// Criterion 9 -------------------------------------------------------------

Result beta_factoring() {
  Result r;
  std::vector<Term> sym{Term::constant("f"), Term::constant("g"), Term::constant("a"), Term::var("x"),
                        Term::var("y")};
  std::vector<Term> algebraic;
  for (const auto& s : oracle::Enumerator(sym, false).up_to(6))
    if (is_algebraic(s) && s.has_free_vars()) algebraic.push_back(s);
  std::vector<Term> images;
  for (const auto& t : oracle::Enumerator({Term::constant("a"), Term::constant("c")}, true).up_to(4))
    if (!beta_redexes(t).empty() || t.size() <= 2) images.push_back(t);

  std::size_t pairs = 0, checked = 0, failures = 0;
  for (std::size_t i = 0; i < algebraic.size(); ++i) {
    const Term& s = algebraic[i];
    for (std::size_t j = 0; j < images.size(); j += 3) {
      Substitution sigma{{"x", images[j]}, {"y", images[(j * 7 + i) % images.size()]}};
      ++pairs;
      Term inst = substitute(s, sigma);
      auto px = parallel_beta_reducts(*sigma.lookup("x"));
      auto py = parallel_beta_reducts(*sigma.lookup("y"));
      for (const auto& v : parallel_beta_reducts(inst)) {
        ++checked;
        auto pv = parallel_beta_reducts(v);
        bool ok = false;
        for (const auto& x2 : px) {
          for (const auto& y2 : py)
            if (contains(pv, substitute(s, Substitution{{"x", x2}, {"y", y2}}))) {
              ok = true;
              break;
            }
          if (ok) break;
        }
        if (!ok && failures++ == 0) r.fail("no sigma' for " + print_term(inst) + " => " + print_term(v));
      }
    }
  }
  if (pairs < 100) r.fail("only " + std::to_string(pairs) + " pairs");
  if (r.pass) r.detail = std::to_string(pairs) + " pairs, " + std::to_string(checked) + " parallel reducts factor";
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"counterexample reproduction", counterexample_reproduction},
      {"failure systems", failure_systems},
      {"orthonormality", orthonormality_claims},
      {"confluence probe", corpus_probe},
      {"diamond", diamond},
      {"sandwich and head commutation", sandwich_and_head},
      {"projection", projection},
      {"well-foundedness", well_foundedness},
      {"algebraic beta factoring", beta_factoring},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Result res;
    try {
      res = criteria[i].second();
    } catch (const std::exception& ex) {
      res.fail(std::string("exception: ") + ex.what());
    }
    failed += !res.pass;
    std::cout << "criterion " << (i + 1) << " " << (res.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << res.detail << " [" << fmt(seconds_since(t0)) << " s]" << std::endl;
  }
  return failed ? 1 : 0;
}
