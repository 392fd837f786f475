#include "confluo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "confluo/analysis.hpp"
#include "confluo/criteria.hpp"
#include "confluo/error.hpp"
#include "confluo/rewrite.hpp"
#include "confluo/system.hpp"

namespace confluo {

namespace {

struct Options {
  std::string system;
  std::string term;
  std::string term2;
  std::string seeds;
  std::string rel = "beta-a";
  std::string level = "omega";
  std::string b_base = "empty";
  std::string format = "text";
  std::string strategy = "bfs";
  std::string rel_left = "beta";
  std::string rel_right = "a";
  StepBudget budget;
  std::size_t peak_width = 3;
  unsigned threads = 0;
  bool allow_free = false;
};

// Failure that maps straight to an exit code.
struct Exit {
  int code;
  std::string message;
};

RelationSpec relation(const std::string& name, const Options& o, bool strict = true) {
  RelationSpec r;
  if (name == "beta") r.kind = RelKind::BetaOnly;
  else if (name == "a") r.kind = RelKind::A;
  else if (name == "b") r.kind = RelKind::B;
  else if (name == "beta-a") r.kind = RelKind::BetaUnionA;
  else if (name == "beta-b") r.kind = RelKind::BetaUnionB;
  else throw Exit{kExitParse, "unknown relation '" + name + "'"};
  if (o.level != "omega") {
    if (r.kind != RelKind::BetaOnly) r.level = std::stoul(o.level);
    else if (strict) throw Exit{kExitParse, "--level does not apply to --rel beta"};
  }
  r.b_base = o.b_base == "a" ? BBase::A : BBase::Empty;
  return r;
}

RewriteSystem load(const Options& o) {
  try {
    return load_system(o.system);
  } catch (const Error& e) {
    throw Exit{kExitParse, o.system + ": " + e.what()};
  }
}

Term term_arg(const std::string& text, const RewriteSystem& sys, const Options& o, const std::string& where) {
  Term t;
  try {
    t = parse_term(text, sys.signature());
  } catch (const SyntaxError& e) {
    throw Exit{kExitParse, where + ": " + e.what()};
  }
  auto fv = free_vars(t);
  if (!fv.empty() && !o.allow_free)
    throw Exit{kExitUndeclared, where + ": undeclared symbol '" + *fv.begin() +
                                    "' (pass --allow-free to read it as a variable)"};
  return t;
}

std::vector<Term> read_seeds(const RewriteSystem& sys, const Options& o) {
  std::ifstream in(o.seeds);
  if (!in) throw Exit{kExitParse, "cannot read " + o.seeds};
  std::vector<Term> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(term_arg(line, sys, o, o.seeds + ":" + std::to_string(n)));
  }
  return out;
}

bool structured(const Options& o) { return o.format == "structured"; }

void print_probe(const ProbeReport& r, const std::string& title, const Signature* sig, const Options& o,
                 std::ostream& out) {
  if (structured(o)) {
    auto j = to_json(r, sig);
    j["relation"] = title;
    out << j.dump(2) << "\n";
    return;
  }
  out << "relation: " << title << "\n";
  out << "peaks tested: " << r.peaks_tested << "\n";
  out << "joined: " << r.joined << "\n";
  double rate = r.peaks_tested ? 100.0 * static_cast<double>(r.unknown) / static_cast<double>(r.peaks_tested) : 0.0;
  std::ostringstream pct;
  pct.precision(1);
  pct << std::fixed << rate;
  out << "unknown: " << r.unknown << " (" << pct.str() << "%)\n";
  out << "counterexamples: " << r.counterexamples.size() << "\n";
  std::size_t k = 0;
  for (const auto& c : r.counterexamples) {
    out << "counterexample " << ++k << " from " << print_term(c.source, sig) << "\n";
    out << "  left:  " << print_term(c.left, sig) << "\n";
    out << "  right: " << print_term(c.right, sig) << "\n";
    out << "  verdict: " << to_string(c.verdict) << "\n";
    for (const auto* d : {&c.to_left, &c.to_right}) {
      if (!*d) continue;
      out << "  derivation to " << (d == &c.to_left ? "left" : "right") << ":\n";
      std::istringstream lines(format_trace(**d, sig));
      for (std::string l; std::getline(lines, l);) out << "    " << l << "\n";
    }
  }
  if (r.level_limit_hit) out << "note: the level limit was reached; a larger --max-level may change the result\n";
}

int probe_exit(const ProbeReport& r) {
  if (!r.counterexamples.empty()) return kExitCounterexample;
  if (r.unknown > 0) return kExitUnknown;
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  auto sys = load(o);
  auto rep = check_criteria(sys);
  if (structured(o)) out << to_json(rep, &sys.signature()).dump(2) << "\n";
  else out << format_report(rep, &sys.signature());
  return kExitOk;
}

int cmd_cp(const Options& o, std::ostream& out) {
  auto sys = load(o);
  auto cps = critical_pairs(sys);
  const Signature* sig = &sys.signature();
  if (structured(o)) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& cp : cps) j.push_back(to_json(cp, sig));
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << cps.size() << " critical pair(s)\n";
  for (const auto& cp : cps)
    out << describe(cp, sig) << (has_condition_clash(cp.conditions) ? "  [conditions clash]" : "") << "\n";
  return kExitOk;
}

int cmd_reduce(const Options& o, std::ostream& out) {
  auto sys = load(o);
  Term t = term_arg(o.term, sys, o, "term");
  RelationSpec rel = relation(o.rel, o);
  Engine e(sys, o.budget);
  const Signature* sig = &sys.signature();
  if (o.format == "dot") {
    out << reduction_graph_dot(e, t, rel, o.budget.join_depth);
    return kExitOk;
  }
  std::vector<Reduct> path;
  Term cur = t;
  enum { Normal, Exhausted, Undecided } end;
  for (;;) {
    auto rs = e.one_step_reducts(cur, rel);
    if (rs->items.empty()) {
      end = rs->condition_undecided ? Undecided : Normal;
      break;
    }
    if (path.size() == o.budget.beta_fuel) {
      end = Exhausted;
      break;
    }
    path.push_back(rs->items.front());
    cur = path.back().term;
  }
  Derivation d = e.justify(t, path);
  if (structured(o)) {
    auto j = to_json(d, sig);
    j["result"] = end == Normal ? "normal-form" : end == Exhausted ? "fuel-exhausted" : "undecided";
    out << j.dump(2) << "\n";
  } else {
    out << format_trace(d, sig);
    if (end == Normal) out << "normal form: " << print_term(cur, sig) << "\n";
    else if (end == Exhausted) out << "FuelExhausted after " << path.size() << " steps: " << print_term(cur, sig) << "\n";
    else out << "stuck: a condition could not be decided within budget at " << print_term(cur, sig) << "\n";
  }
  return end == Normal ? kExitOk : kExitUnknown;
}

int cmd_normalize(const Options& o, std::ostream& out) {
  auto sys = load(o);
  Term t = term_arg(o.term, sys, o, "term");
  RelationSpec rel = relation(o.rel, o);
  Engine e(sys, o.budget);
  const Signature* sig = &sys.signature();
  if (o.format == "dot") {
    out << reduction_graph_dot(e, t, rel, o.budget.join_depth);
    return kExitOk;
  }
  if (o.strategy != "bfs" && o.strategy != "lo") throw Exit{kExitParse, "unknown strategy '" + o.strategy + "'"};
  auto r = e.normalize(t, rel, o.strategy == "lo" ? Strategy::LeftmostOutermost : Strategy::FullBfs);
  if (structured(o)) {
    nlohmann::json nfs = nlohmann::json::array();
    for (const auto& n : r.normal_forms) nfs.push_back(print_term(n, sig));
    out << nlohmann::json{{"normal_forms", nfs}, {"unknown", r.unknown}, {"explored", r.explored}}.dump(2) << "\n";
  } else {
    out << "normal forms: " << r.normal_forms.size() << "\n";
    for (const auto& n : r.normal_forms) out << "  " << print_term(n, sig) << "\n";
    out << "explored: " << r.explored << "\n";
    if (r.unknown) out << "unknown: the budget was hit, more normal forms may exist\n";
  }
  if (e.level_limit_hit() && !structured(o))
    out << "note: the level limit was reached; a larger --max-level may change the result\n";
  return r.unknown ? kExitUnknown : kExitOk;
}

int cmd_join(const Options& o, std::ostream& out) {
  auto sys = load(o);
  Term u = term_arg(o.term, sys, o, "first term");
  Term v = term_arg(o.term2, sys, o, "second term");
  RelationSpec rel = relation(o.rel, o);
  Engine e(sys, o.budget);
  const Signature* sig = &sys.signature();
  auto j = e.joinable(u, v, rel);
  if (structured(o)) {
    nlohmann::json doc{{"verdict", to_string(j.outcome)}};
    if (j.witness) {
      doc["witness"] = print_term(*j.witness, sig);
      doc["left"] = to_json(e.justify(u, j.left), sig);
      doc["right"] = to_json(e.justify(v, j.right), sig);
    }
    out << doc.dump(2) << "\n";
  } else {
    out << "verdict: " << to_string(j.outcome) << "\n";
    if (j.witness) {
      out << "witness: " << print_term(*j.witness, sig) << "\n";
      out << "left derivation:\n" << format_trace(e.justify(u, j.left), sig);
      out << "right derivation:\n" << format_trace(e.justify(v, j.right), sig);
    }
  }
  switch (j.outcome) {
    case Outcome::Joinable: return kExitOk;
    case Outcome::NotJoinable: return kExitCounterexample;
    default: return kExitUnknown;
  }
}

int cmd_probe(const Options& o, std::ostream& out) {
  auto sys = load(o);
  auto seeds = read_seeds(sys, o);
  RelationSpec rel = relation(o.rel, o);
  Engine e(sys, o.budget);
  auto r = confluence_probe(e, rel, seeds, o.peak_width, o.threads);
  print_probe(r, rel.to_string(), &sys.signature(), o, out);
  return probe_exit(r);
}

int cmd_commute(const Options& o, std::ostream& out) {
  auto sys = load(o);
  auto seeds = read_seeds(sys, o);
  RelationSpec l = relation(o.rel_left, o, false);
  RelationSpec r = relation(o.rel_right, o, false);
  Engine e(sys, o.budget);
  auto rep = commutation_probe(e, l, r, seeds, o.peak_width, o.threads);
  print_probe(rep, l.to_string() + " / " + r.to_string(), &sys.signature(), o, out);
  return probe_exit(rep);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Conditional rewriting combined with the untyped lambda calculus", "confluo"};
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--rel", o.rel, "Relation")->check(CLI::IsMember({"beta", "a", "b", "beta-a", "beta-b"}));
  app.add_option("--level", o.level, "Level of A/B relations: a number or 'omega'")
      ->check([](const std::string& s) {
        return s == "omega" || (!s.empty() && std::all_of(s.begin(), s.end(), ::isdigit))
                   ? std::string()
                   : std::string("expected a number or 'omega'");
      });
  app.add_option("--b-base", o.b_base, "What B_0 is")->check(CLI::IsMember({"empty", "a"}));
  app.add_option("--max-level", o.budget.max_level, "Level standing in for omega")->check(CLI::PositiveNumber);
  app.add_option("--join-depth", o.budget.join_depth, "BFS levels per side of a join search")
      ->check(CLI::PositiveNumber);
  app.add_option("--fuel", o.budget.beta_fuel, "Step budget of reduce and leftmost-outermost normalize")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-graph", o.budget.max_graph, "Cap on explored graph size")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured", "dot"}));
  app.add_option("--peak-width", o.peak_width, "Steps on each side of a probed peak");
  app.add_option("--threads", o.threads, "Worker threads for probes (0: one per core)");
  app.add_flag("--allow-free", o.allow_free, "Read undeclared identifiers in input terms as variables");

  auto* check = app.add_subcommand("check", "Report the syntactic criteria and applicable theorems");
  auto* reduce = app.add_subcommand("reduce", "Leftmost-outermost derivation with condition proofs");
  auto* normalize = app.add_subcommand("normalize", "Normal forms reachable within budget");
  auto* join = app.add_subcommand("join", "Decide joinability of two terms within budget");
  auto* cp = app.add_subcommand("cp", "List conditional critical pairs");
  auto* probe = app.add_subcommand("probe", "Look for unjoinable peaks from seed terms");
  auto* commute = app.add_subcommand("commute", "Look for non-commuting pairs from seed terms");
  for (auto* c : {check, reduce, normalize, join, cp, probe, commute})
    c->add_option("system", o.system, "Rule file")->required();
  for (auto* c : {reduce, normalize, join}) c->add_option("term", o.term, "Term")->required();
  join->add_option("term2", o.term2, "Second term")->required();
  for (auto* c : {probe, commute}) c->add_option("seeds", o.seeds, "Seed file, one term per line")->required();
  normalize->add_option("--strategy", o.strategy, "bfs or lo")->check(CLI::IsMember({"bfs", "lo"}));
  commute->add_option("--left-rel", o.rel_left, "Relation of the left leg")
      ->check(CLI::IsMember({"beta", "a", "b", "beta-a", "beta-b"}));
  commute->add_option("--right-rel", o.rel_right, "Relation of the right leg")
      ->check(CLI::IsMember({"beta", "a", "b", "beta-a", "beta-b"}));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*reduce) return cmd_reduce(o, out);
    if (*normalize) return cmd_normalize(o, out);
    if (*join) return cmd_join(o, out);
    if (*cp) return cmd_cp(o, out);
    if (*probe) return cmd_probe(o, out);
    if (*commute) return cmd_commute(o, out);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace confluo
