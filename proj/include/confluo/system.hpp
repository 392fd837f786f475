#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "confluo/term.hpp"

namespace confluo {

/// d = c: d is the side that gets reduced, c the target side.
struct Condition {
  Term lhs;
  Term rhs;
};

/// d1 = c1 ∧ … ∧ dn = cn ⊃ l → r
struct Rule {
  std::string name;
  std::vector<Condition> conditions;
  Term lhs;
  Term rhs;

  const std::string& head_symbol() const;
  std::set<std::string> vars() const { return free_vars(lhs); }
};

/// Throws NonAlgebraicLhs or VariableEscape when `r` breaks the rule
/// invariants, UndeclaredSymbol when it uses a constant missing from `sig`.
void validate_rule(const Rule& r, const Signature& sig);

class RewriteSystem {
 public:
  RewriteSystem() = default;
  /// Validates every rule and recomputes the defined-symbol flags.
  RewriteSystem(Signature sig, std::vector<Rule> rules);

  const Signature& signature() const { return sig_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule* find(std::string_view name) const;
  /// Indices of the rules whose left-hand side has head `symbol`.
  const std::vector<std::size_t>& rules_for(std::string_view symbol) const;

 private:
  Signature sig_;
  std::vector<Rule> rules_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_head_;
};

/// Parses the rule-file format. Throws SyntaxError, VariableEscape,
/// NonAlgebraicLhs.
RewriteSystem parse_system(std::string_view text);
/// Reads and parses a file; throws Error when it cannot be read.
RewriteSystem load_system(const std::filesystem::path& path);

std::set<std::string> defined_symbols(const RewriteSystem& sys);

std::string print_rule(const Rule& r, const Signature* sig = nullptr);
std::string print_system(const RewriteSystem& sys);

}  // namespace confluo
