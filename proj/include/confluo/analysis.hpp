#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "confluo/rewrite.hpp"
#include "confluo/system.hpp"

namespace confluo {

/// d⃗σ = c⃗σ ∧ d⃗′σ = c⃗′σ ⊃ (l[r′]_p σ, rσ)
struct CriticalPair {
  std::vector<Condition> conditions;
  Term left;
  Term right;
  Position overlap_pos;
  std::string rule_outer;
  std::string rule_inner;
  bool trivial = false;
};

/// Overlaps of every pair of rules renamed apart at every non-variable
/// position of the outer left-hand side, except a rule with itself at the
/// root.
std::vector<CriticalPair> critical_pairs(const RewriteSystem& sys);

bool is_left_linear(const Term& t);

struct OrthonormalFailure {
  enum class Kind { NotLeftLinear, BadCondition, FeasiblePair };
  Kind kind;
  std::string rule;                  // NotLeftLinear, BadCondition
  std::string which;                 // BadCondition: open, not-beta-nf, contains-defined-symbol
  std::optional<CriticalPair> pair;  // FeasiblePair

  std::string describe(const Signature* sig = nullptr) const;
};

struct OrthonormalVerdict {
  bool ok = true;
  std::vector<OrthonormalFailure> failures;
};

OrthonormalVerdict orthonormality(const RewriteSystem& sys);

/// Some i ≠ j with d_i α-equal d_j and c_i not α-equal c_j.
bool has_condition_clash(const std::vector<Condition>& conds);

struct PeakRecord {
  std::size_t seed = 0;  // index into the seed list
  Term source;
  Term left;
  Term right;
  Outcome verdict = Outcome::Unknown;
  std::optional<Derivation> to_left;  // kept for counterexamples only
  std::optional<Derivation> to_right;
};

struct ProbeReport {
  std::size_t peaks_tested = 0;
  std::size_t joined = 0;
  std::size_t unknown = 0;
  std::vector<PeakRecord> counterexamples;
  std::vector<PeakRecord> records;  // one per peak, in canonical order
  bool level_limit_hit = false;

  void merge(ProbeReport other);
};

/// Peaks u ← s → t with both legs of at most `peak_width` steps, each tested
/// with joinable(u, t). Seeds are processed on `threads` worker threads.
ProbeReport confluence_probe(const Engine& e, const RelationSpec& rel, const std::vector<Term>& seeds,
                             std::size_t peak_width = 3, unsigned threads = 0);
ProbeReport confluence_probe(const RewriteSystem& sys, const RelationSpec& rel, const std::vector<Term>& seeds,
                             const StepBudget& budget = {}, std::size_t peak_width = 3);

/// Pairs u ←relL^{≤w} s →relR^{≤w} t, each searched for v with
/// u →relR* v ←relL* t.
ProbeReport commutation_probe(const Engine& e, const RelationSpec& rel_l, const RelationSpec& rel_r,
                              const std::vector<Term>& seeds, std::size_t peak_width = 1, unsigned threads = 0);
ProbeReport commutation_probe(const RewriteSystem& sys, const RelationSpec& rel_l, const RelationSpec& rel_r,
                              const std::vector<Term>& seeds, const StepBudget& budget = {},
                              std::size_t peak_width = 1);

/// Reduct graph of `t` as DOT, at most `max_nodes` nodes.
std::string reduction_graph_dot(const Engine& e, const Term& t, const RelationSpec& rel, std::size_t depth,
                                std::size_t max_nodes = 200);

nlohmann::json to_json(const Derivation& d, const Signature* sig = nullptr);
nlohmann::json to_json(const CriticalPair& cp, const Signature* sig = nullptr);
nlohmann::json to_json(const OrthonormalVerdict& v, const Signature* sig = nullptr);
nlohmann::json to_json(const ProbeReport& r, const Signature* sig = nullptr);
std::string describe(const CriticalPair& cp, const Signature* sig = nullptr);

}  // namespace confluo
