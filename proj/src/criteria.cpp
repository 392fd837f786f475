#include "confluo/criteria.hpp"

#include <algorithm>

namespace confluo {

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::Thm3_1: return "Thm3.1";
    case Theorem::Thm3_2: return "Thm3.2";
    case Theorem::Thm4_1: return "Thm4.1";
    case Theorem::Thm4_2: return "Thm4.2";
    case Theorem::Thm5: return "Thm5";
  }
  return "?";
}

namespace {

// f l⃗ with exactly α_f arguments.
bool full_application(const Term& l, const Signature& sig) {
  Spine s = spine(l);
  return s.head.is_const() && sig.arity(s.head.name()) == s.args.size();
}

}  // namespace

CriteriaReport check_criteria(const RewriteSystem& sys) {
  const Signature& sig = sys.signature();
  CriteriaReport r;
  r.left_linear = r.semi_closed = r.right_applicative = r.right_algebraic = true;
  r.applicative = r.algebraic = r.almost_arity_compliant = r.arity_compliant = true;
  for (const auto& rule : sys.rules()) {
    r.left_linear &= is_left_linear(rule.lhs);
    r.right_applicative &= is_applicative(rule.rhs);
    r.right_algebraic &= is_algebraic(rule.rhs);
    std::vector<Term> all{rule.lhs, rule.rhs};
    bool conds_compliant = true;
    for (const auto& c : rule.conditions) {
      r.semi_closed &= is_algebraic(c.rhs) && is_closed(c.rhs);
      all.push_back(c.lhs);
      all.push_back(c.rhs);
      conds_compliant &= is_arity_compliant(c.lhs, sig) && is_arity_compliant(c.rhs, sig);
    }
    for (const auto& t : all) {
      r.applicative &= is_applicative(t);
      r.algebraic &= is_algebraic(t);
    }
    bool almost = is_arity_compliant(rule.lhs, sig) && is_arity_compliant(rule.rhs, sig) &&
                  full_application(rule.lhs, sig);
    r.almost_arity_compliant &= almost;
    r.arity_compliant &= almost && conds_compliant;
  }
  r.orthonormal = orthonormality(sys);
  auto& th = r.applicable_theorems;
  if (r.left_linear && r.semi_closed && r.right_applicative) th.push_back(Theorem::Thm3_1);
  if (r.arity_compliant && r.algebraic) th.push_back(Theorem::Thm3_2);
  if (r.left_linear && r.semi_closed && r.algebraic) th.push_back(Theorem::Thm4_1);
  if (r.arity_compliant && r.algebraic) th.push_back(Theorem::Thm4_2);
  if (r.orthonormal.ok) th.push_back(Theorem::Thm5);
  return r;
}

std::string format_report(const CriteriaReport& r, const Signature* sig) {
  auto flag = [](const char* name, bool b) { return std::string(name) + ": " + (b ? "true" : "false") + "\n"; };
  std::string out;
  out += flag("left_linear", r.left_linear);
  out += flag("semi_closed", r.semi_closed);
  out += flag("right_applicative", r.right_applicative);
  out += flag("right_algebraic", r.right_algebraic);
  out += flag("applicative", r.applicative);
  out += flag("algebraic", r.algebraic);
  out += flag("almost_arity_compliant", r.almost_arity_compliant);
  out += flag("arity_compliant", r.arity_compliant);
  out += flag("orthonormal", r.orthonormal.ok);
  for (const auto& f : r.orthonormal.failures) out += "  " + f.describe(sig) + "\n";
  out += "applicable_theorems:";
  for (auto t : r.applicable_theorems) out += std::string(" ") + to_string(t);
  if (r.applicable_theorems.empty()) out += " none";
  return out + "\n";
}

nlohmann::json to_json(const CriteriaReport& r, const Signature* sig) {
  nlohmann::json th = nlohmann::json::array();
  for (auto t : r.applicable_theorems) th.push_back(to_string(t));
  return {{"left_linear", r.left_linear},
          {"semi_closed", r.semi_closed},
          {"right_applicative", r.right_applicative},
          {"right_algebraic", r.right_algebraic},
          {"applicative", r.applicative},
          {"algebraic", r.algebraic},
          {"almost_arity_compliant", r.almost_arity_compliant},
          {"arity_compliant", r.arity_compliant},
          {"orthonormal", to_json(r.orthonormal, sig)},
          {"applicable_theorems", th}};
}

}  // namespace confluo
