#include "confluo/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

#include "confluo/beta.hpp"
#include "confluo/unify.hpp"

namespace confluo {

bool is_left_linear(const Term& t) {
  std::map<std::string, int> seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term u = stack.back();
    stack.pop_back();
    if (u.is_var() && ++seen[u.name()] > 1) return false;
    if (u.is_app()) {
      stack.push_back(u.fun());
      stack.push_back(u.arg());
    } else if (u.is_lam()) {
      stack.push_back(open_fresh(u).body);
    }
  }
  return true;
}

namespace {

// Renames the variables introduced by renaming apart to primed names.
void tidy(CriticalPair& cp) {
  std::set<std::string> used;
  auto note = [&](const Term& t) {
    auto fv = free_vars(t);
    used.insert(fv.begin(), fv.end());
  };
  note(cp.left);
  note(cp.right);
  for (const auto& c : cp.conditions) {
    note(c.lhs);
    note(c.rhs);
  }
  Substitution ren;
  std::set<std::string> taken;
  for (const auto& x : used)
    if (x.find('#') == std::string::npos) taken.insert(x);
  for (const auto& x : used) {
    if (x.find('#') == std::string::npos) continue;
    std::string name = base_name(x) + "'";
    while (taken.count(name)) name += "'";
    taken.insert(name);
    ren.bind(x, Term::var(name));
  }
  if (ren.empty()) return;
  cp.left = substitute(cp.left, ren);
  cp.right = substitute(cp.right, ren);
  for (auto& c : cp.conditions) {
    c.lhs = substitute(c.lhs, ren);
    c.rhs = substitute(c.rhs, ren);
  }
}

}  // namespace

std::vector<CriticalPair> critical_pairs(const RewriteSystem& sys) {
  std::vector<CriticalPair> out;
  const auto& rules = sys.rules();
  for (std::size_t a = 0; a < rules.size(); ++a) {
    const Rule& outer = rules[a];
    for (std::size_t b = 0; b < rules.size(); ++b) {
      Rule inner = rename_apart(rules[b], outer.vars());
      for (const auto& p : positions(outer.lhs)) {
        if (a == b && p.empty()) continue;
        Term sub = subterm_at(outer.lhs, p);
        if (sub.is_var()) continue;
        auto sigma = mgu(sub, inner.lhs);
        if (!sigma) continue;
        CriticalPair cp;
        for (const auto& c : outer.conditions)
          cp.conditions.push_back({substitute(c.lhs, *sigma), substitute(c.rhs, *sigma)});
        for (const auto& c : inner.conditions)
          cp.conditions.push_back({substitute(c.lhs, *sigma), substitute(c.rhs, *sigma)});
        cp.left = substitute(replace_at(outer.lhs, p, inner.rhs), *sigma);
        cp.right = substitute(outer.rhs, *sigma);
        cp.overlap_pos = p;
        cp.rule_outer = outer.name;
        cp.rule_inner = inner.name;
        tidy(cp);
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

bool has_condition_clash(const std::vector<Condition>& conds) {
  for (std::size_t i = 0; i < conds.size(); ++i)
    for (std::size_t j = 0; j < conds.size(); ++j)
      if (i != j && conds[i].lhs == conds[j].lhs && conds[i].rhs != conds[j].rhs) return true;
  return false;
}

std::string OrthonormalFailure::describe(const Signature* sig) const {
  switch (kind) {
    case Kind::NotLeftLinear:
      return "NotLeftLinear(" + rule + ")";
    case Kind::BadCondition:
      return "BadCondition(" + rule + ", " + which + ")";
    case Kind::FeasiblePair:
      return "FeasiblePair(" + confluo::describe(*pair, sig) + ")";
  }
  return "?";
}

OrthonormalVerdict orthonormality(const RewriteSystem& sys) {
  OrthonormalVerdict v;
  auto defined = defined_symbols(sys);
  auto fail = [&](OrthonormalFailure f) { v.failures.push_back(std::move(f)); };
  for (const auto& r : sys.rules()) {
    if (!is_left_linear(r.lhs)) fail({OrthonormalFailure::Kind::NotLeftLinear, r.name, "", std::nullopt});
    for (const auto& c : r.conditions) {
      if (!is_closed(c.rhs)) fail({OrthonormalFailure::Kind::BadCondition, r.name, "open", std::nullopt});
      if (!is_beta_normal(c.rhs)) fail({OrthonormalFailure::Kind::BadCondition, r.name, "not-beta-nf", std::nullopt});
      auto consts = constants_of(c.rhs);
      if (std::any_of(consts.begin(), consts.end(), [&](const std::string& f) { return defined.count(f) > 0; }))
        fail({OrthonormalFailure::Kind::BadCondition, r.name, "contains-defined-symbol", std::nullopt});
    }
  }
  for (auto& cp : critical_pairs(sys))
    if (!has_condition_clash(cp.conditions)) fail({OrthonormalFailure::Kind::FeasiblePair, "", "", std::move(cp)});
  v.ok = v.failures.empty();
  return v;
}

void ProbeReport::merge(ProbeReport other) {
  peaks_tested += other.peaks_tested;
  joined += other.joined;
  unknown += other.unknown;
  level_limit_hit |= other.level_limit_hit;
  for (auto& c : other.counterexamples) counterexamples.push_back(std::move(c));
  for (auto& c : other.records) records.push_back(std::move(c));
}

namespace {

void tally(ProbeReport& rep, PeakRecord rec) {
  ++rep.peaks_tested;
  if (rec.verdict == Outcome::Joinable) ++rep.joined;
  else if (rec.verdict == Outcome::Unknown) ++rep.unknown;
  else rep.counterexamples.push_back(rec);
  rec.to_left.reset();
  rec.to_right.reset();
  rep.records.push_back(std::move(rec));
}

// Runs `per_seed` over all seeds, possibly in parallel, and merges the
// results in seed order so the report does not depend on scheduling.
template <class F>
ProbeReport over_seeds(const std::vector<Term>& seeds, unsigned threads, F per_seed) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size())));
  std::vector<ProbeReport> parts(seeds.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) parts[i] = per_seed(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < seeds.size(); i += threads) parts[i] = per_seed(i);
      });
    for (auto& t : pool) t.join();
  }
  ProbeReport out;
  for (auto& p : parts) out.merge(std::move(p));
  return out;
}

// Orders the two ends of a peak canonically.
void orient(PeakRecord& r, const Signature* sig) {
  if (print_term(r.right, sig) < print_term(r.left, sig)) {
    std::swap(r.left, r.right);
    std::swap(r.to_left, r.to_right);
  }
}

void sort_records(std::vector<PeakRecord>& v, const Signature* sig) {
  std::stable_sort(v.begin(), v.end(), [&](const PeakRecord& a, const PeakRecord& b) {
    if (a.seed != b.seed) return a.seed < b.seed;
    auto pa = std::make_pair(print_term(a.left, sig), print_term(a.right, sig));
    auto pb = std::make_pair(print_term(b.left, sig), print_term(b.right, sig));
    return pa < pb;
  });
}

}  // namespace

ProbeReport confluence_probe(const Engine& e, const RelationSpec& rel, const std::vector<Term>& seeds,
                             std::size_t peak_width, unsigned threads) {
  const Signature* sig = &e.system().signature();
  auto rep = over_seeds(seeds, threads, [&](std::size_t i) {
    ProbeReport r;
    Exploration x = e.explore(seeds[i], rel, peak_width);
    for (std::size_t a = 0; a < x.nodes.size(); ++a)
      for (std::size_t b = a + 1; b < x.nodes.size(); ++b) {
        PeakRecord rec{i, seeds[i], x.nodes[a], x.nodes[b], Outcome::Unknown, std::nullopt, std::nullopt};
        rec.verdict = e.joinable(x.nodes[a], x.nodes[b], rel).outcome;
        if (rec.verdict == Outcome::NotJoinable) {
          rec.to_left = e.justify(seeds[i], x.path_to(a));
          rec.to_right = e.justify(seeds[i], x.path_to(b));
        }
        orient(rec, sig);
        tally(r, std::move(rec));
      }
    sort_records(r.records, sig);
    sort_records(r.counterexamples, sig);
    return r;
  });
  rep.level_limit_hit = e.level_limit_hit();
  return rep;
}

ProbeReport confluence_probe(const RewriteSystem& sys, const RelationSpec& rel, const std::vector<Term>& seeds,
                             const StepBudget& budget, std::size_t peak_width) {
  Engine e(sys, budget);
  return confluence_probe(e, rel, seeds, peak_width);
}

ProbeReport commutation_probe(const Engine& e, const RelationSpec& rel_l, const RelationSpec& rel_r,
                              const std::vector<Term>& seeds, std::size_t peak_width, unsigned threads) {
  const Signature* sig = &e.system().signature();
  auto rep = over_seeds(seeds, threads, [&](std::size_t i) {
    ProbeReport r;
    Exploration xl = e.explore(seeds[i], rel_l, peak_width);
    Exploration xr = e.explore(seeds[i], rel_r, peak_width);
    for (std::size_t a = 0; a < xl.nodes.size(); ++a)
      for (std::size_t b = 0; b < xr.nodes.size(); ++b) {
        if (a == 0 && b == 0) continue;
        PeakRecord rec{i, seeds[i], xl.nodes[a], xr.nodes[b], Outcome::Unknown, std::nullopt, std::nullopt};
        rec.verdict = e.meet(xl.nodes[a], rel_r, xr.nodes[b], rel_l).outcome;
        if (rec.verdict == Outcome::NotJoinable) {
          rec.to_left = e.justify(seeds[i], xl.path_to(a));
          rec.to_right = e.justify(seeds[i], xr.path_to(b));
        }
        tally(r, std::move(rec));
      }
    sort_records(r.records, sig);
    sort_records(r.counterexamples, sig);
    return r;
  });
  rep.level_limit_hit = e.level_limit_hit();
  return rep;
}

ProbeReport commutation_probe(const RewriteSystem& sys, const RelationSpec& rel_l, const RelationSpec& rel_r,
                              const std::vector<Term>& seeds, const StepBudget& budget, std::size_t peak_width) {
  Engine e(sys, budget);
  return commutation_probe(e, rel_l, rel_r, seeds, peak_width);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string step_label(const Step& s) {
  return (s.kind == Step::Kind::Beta ? std::string("beta") : s.rule) + "@" + s.pos.to_string();
}

}  // namespace

std::string reduction_graph_dot(const Engine& e, const Term& t, const RelationSpec& rel, std::size_t depth,
                                std::size_t max_nodes) {
  const Signature* sig = &e.system().signature();
  Exploration x(t);
  while (!x.frontier.empty() && x.level < depth && x.nodes.size() < max_nodes) x.expand(e, rel);
  std::string out = "digraph reducts {\n  node [shape=box, fontname=\"monospace\"];\n";
  std::size_t shown = std::min(x.nodes.size(), max_nodes);
  for (std::size_t i = 0; i < shown; ++i) {
    auto rs = e.one_step_reducts(x.nodes[i], rel);
    bool normal = rs->items.empty() && !rs->condition_undecided;
    out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(print_term(x.nodes[i], sig)) + "\"" +
           (normal ? ", peripheries=2" : "") + "];\n";
  }
  for (std::size_t i = 0; i < shown; ++i) {
    if (x.depth[i] >= depth) continue;
    for (const auto& r : e.one_step_reducts(x.nodes[i], rel)->items) {
      auto j = x.nodes.find(r.term);
      if (!j || *j >= shown) continue;
      out += "  n" + std::to_string(i) + " -> n" + std::to_string(*j) + " [label=\"" +
             dot_escape(step_label(r.step)) + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

std::string describe(const CriticalPair& cp, const Signature* sig) {
  std::string out = cp.rule_outer + "/" + cp.rule_inner + " at " + cp.overlap_pos.to_string() + ": ";
  for (std::size_t i = 0; i < cp.conditions.size(); ++i) {
    if (i) out += " /\\ ";
    out += print_term(cp.conditions[i].lhs, sig) + " = " + print_term(cp.conditions[i].rhs, sig);
  }
  if (!cp.conditions.empty()) out += " => ";
  return out + "(" + print_term(cp.left, sig) + ", " + print_term(cp.right, sig) + ")";
}

nlohmann::json to_json(const Derivation& d, const Signature* sig) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : d.steps) {
    nlohmann::json j{{"pos", s.step.pos.to_string()},
                     {"kind", s.step.kind == Step::Kind::Beta ? "beta" : "rule"},
                     {"term", print_term(s.result, sig)}};
    if (s.step.kind == Step::Kind::Rule) j["rule"] = s.step.rule;
    if (!s.conditions.empty()) {
      nlohmann::json cs = nlohmann::json::array();
      for (const auto& c : s.conditions) {
        nlohmann::json cj{{"lhs", print_term(c.lhs, sig)},
                          {"rhs", print_term(c.rhs, sig)},
                          {"witness", print_term(c.witness, sig)}};
        if (c.sides.size() == 2) {
          cj["lhs_derivation"] = to_json(c.sides[0], sig);
          cj["rhs_derivation"] = to_json(c.sides[1], sig);
        }
        cs.push_back(cj);
      }
      j["conditions"] = cs;
    }
    steps.push_back(j);
  }
  return {{"start", print_term(d.start, sig)}, {"steps", steps}};
}

nlohmann::json to_json(const CriticalPair& cp, const Signature* sig) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : cp.conditions) conds.push_back({{"lhs", print_term(c.lhs, sig)}, {"rhs", print_term(c.rhs, sig)}});
  return {{"outer", cp.rule_outer},
          {"inner", cp.rule_inner},
          {"position", cp.overlap_pos.to_string()},
          {"conditions", conds},
          {"left", print_term(cp.left, sig)},
          {"right", print_term(cp.right, sig)},
          {"clash", has_condition_clash(cp.conditions)}};
}

nlohmann::json to_json(const OrthonormalVerdict& v, const Signature* sig) {
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : v.failures) fs.push_back(f.describe(sig));
  return {{"ok", v.ok}, {"failures", fs}};
}

nlohmann::json to_json(const ProbeReport& r, const Signature* sig) {
  nlohmann::json peaks = nlohmann::json::array();
  for (const auto& p : r.records)
    peaks.push_back({{"seed", p.seed},
                     {"source", print_term(p.source, sig)},
                     {"left", print_term(p.left, sig)},
                     {"right", print_term(p.right, sig)},
                     {"verdict", to_string(p.verdict)}});
  nlohmann::json ces = nlohmann::json::array();
  for (const auto& p : r.counterexamples) {
    nlohmann::json j{{"seed", p.seed},
                     {"source", print_term(p.source, sig)},
                     {"left", print_term(p.left, sig)},
                     {"right", print_term(p.right, sig)},
                     {"verdict", to_string(p.verdict)}};
    if (p.to_left) j["to_left"] = to_json(*p.to_left, sig);
    if (p.to_right) j["to_right"] = to_json(*p.to_right, sig);
    ces.push_back(j);
  }
  return {{"peaks_tested", r.peaks_tested}, {"joined", r.joined},        {"unknown", r.unknown},
          {"counterexamples", ces},         {"peaks", peaks},            {"level_limit_hit", r.level_limit_hit}};
}

}  // namespace confluo
