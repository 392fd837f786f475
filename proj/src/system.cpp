#include "confluo/system.hpp"

#include <fstream>
#include <sstream>

#include "confluo/error.hpp"
#include "syntax.hpp"

namespace confluo {

const std::string& Rule::head_symbol() const { return spine(lhs).head.name(); }

void validate_rule(const Rule& r, const Signature& sig) {
  if (r.lhs.is_var() || !is_algebraic(r.lhs) || !spine(r.lhs).head.is_const())
    throw NonAlgebraicLhs("rule " + r.name + ": left-hand side " + print_term(r.lhs, &sig) +
                          " is not a non-variable algebraic term");
  auto lvars = free_vars(r.lhs);
  auto check = [&](const Term& t, const char* where) {
    for (const auto& x : free_vars(t))
      if (!lvars.count(x))
        throw VariableEscape("rule " + r.name + ": variable " + x + " of the " + where +
                             " does not occur in the left-hand side");
    is_arity_compliant(t, sig);  // throws on undeclared symbols
  };
  check(r.lhs, "left-hand side");
  check(r.rhs, "right-hand side");
  for (const auto& c : r.conditions) {
    check(c.lhs, "condition");
    check(c.rhs, "condition");
  }
}

RewriteSystem::RewriteSystem(Signature sig, std::vector<Rule> rules)
    : sig_(std::move(sig)), rules_(std::move(rules)) {
  std::set<std::string> names;
  for (const auto& [sym, _] : sig_.symbols()) sig_.set_defined(sym, false);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& r = rules_[i];
    if (!names.insert(r.name).second) throw Error("duplicate rule name " + r.name);
    validate_rule(r, sig_);
    sig_.set_defined(r.head_symbol());
    by_head_[r.head_symbol()].push_back(i);
  }
}

const Rule* RewriteSystem::find(std::string_view name) const {
  for (const auto& r : rules_)
    if (r.name == name) return &r;
  return nullptr;
}

const std::vector<std::size_t>& RewriteSystem::rules_for(std::string_view symbol) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_head_.find(symbol);
  return it == by_head_.end() ? kNone : it->second;
}

RewriteSystem parse_system(std::string_view text) {
  using syntax::Tok;
  auto tokens = syntax::tokenize(text);

  // Declarations may follow the rules that use them.
  Signature sig;
  for (std::size_t i = 0; i + 3 < tokens.size(); ++i) {
    if (tokens[i].kind == Tok::Ident && tokens[i].text == "sig" && tokens[i + 1].kind == Tok::Ident &&
        tokens[i + 2].kind == Tok::Colon && tokens[i + 3].kind == Tok::Number)
      sig.declare(tokens[i + 1].text, std::stoul(tokens[i + 3].text));
  }

  syntax::Parser p(std::move(tokens), [&sig](std::string_view s) { return sig.contains(s); });
  std::vector<Rule> rules;
  while (!p.at(Tok::End)) {
    const auto& kw = p.expect(Tok::Ident, "'sig' or 'rule'");
    if (kw.text == "sig") {
      p.expect(Tok::Ident, "symbol name");
      p.expect(Tok::Colon, "':'");
      p.expect(Tok::Number, "arity");
      if (p.at(Tok::Semi)) p.next();
      continue;
    }
    if (kw.text != "rule") throw SyntaxError("expected 'sig' or 'rule', found '" + kw.text + "'", kw.line, kw.column);
    Rule r;
    const auto& name = p.expect(Tok::Ident, "rule name");
    r.name = name.text;
    p.expect(Tok::Colon, "':'");
    Term first = p.term();
    if (p.at(Tok::Equals)) {
      p.next();
      r.conditions.push_back({first, p.term()});
      while (p.at(Tok::And)) {
        p.next();
        Term d = p.term();
        p.expect(Tok::Equals, "'='");
        r.conditions.push_back({d, p.term()});
      }
      p.expect(Tok::Implies, "'=>'");
      r.lhs = p.term();
    } else {
      r.lhs = first;
    }
    p.expect(Tok::Arrow, "'->'");
    r.rhs = p.term();
    p.expect(Tok::Semi, "';'");
    rules.push_back(std::move(r));
  }
  return RewriteSystem(std::move(sig), std::move(rules));
}

RewriteSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

std::set<std::string> defined_symbols(const RewriteSystem& sys) {
  std::set<std::string> out;
  for (const auto& r : sys.rules()) out.insert(r.head_symbol());
  return out;
}

std::string print_rule(const Rule& r, const Signature* sig) {
  std::string out = "rule " + r.name + ": ";
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    if (i) out += " /\\ ";
    out += print_term(r.conditions[i].lhs, sig) + " = " + print_term(r.conditions[i].rhs, sig);
  }
  if (!r.conditions.empty()) out += " => ";
  out += print_term(r.lhs, sig) + " -> " + print_term(r.rhs, sig) + " ;";
  return out;
}

std::string print_system(const RewriteSystem& sys) {
  std::string out;
  for (const auto& [sym, info] : sys.signature().symbols())
    out += "sig " + sym + " : " + std::to_string(info.arity) + " ;\n";
  for (const auto& r : sys.rules()) out += print_rule(r, &sys.signature()) + "\n";
  return out;
}

}  // namespace confluo
