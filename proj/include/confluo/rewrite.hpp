#pragma once

#include <atomic>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "confluo/system.hpp"
#include "confluo/term.hpp"

namespace confluo {

enum class RelKind { A, B, BetaUnionA, BetaUnionB, BetaOnly };

/// →_{B_0}: empty, or the whole of →_A.
enum class BBase { Empty, A };

/// Union over all levels, approximated by StepBudget::max_level.
inline constexpr std::size_t kOmega = std::numeric_limits<std::size_t>::max();

struct RelationSpec {
  RelKind kind = RelKind::BetaUnionA;
  std::size_t level = kOmega;
  BBase b_base = BBase::Empty;

  bool has_beta() const {
    return kind == RelKind::BetaUnionA || kind == RelKind::BetaUnionB || kind == RelKind::BetaOnly;
  }
  bool is_b() const { return kind == RelKind::B || kind == RelKind::BetaUnionB; }
  std::string to_string() const;
  bool operator==(const RelationSpec&) const = default;

  static RelationSpec beta() { return {RelKind::BetaOnly, 0, BBase::Empty}; }
};

struct StepBudget {
  std::size_t max_level = 5;
  std::size_t join_depth = 50;  // BFS levels per side of a joinability search
  std::size_t beta_fuel = 10000;
  std::size_t max_graph = 20000;
};

struct Step {
  enum class Kind { Beta, Rule };
  Position pos;
  Kind kind = Kind::Beta;
  std::string rule;  // empty for β
  RelationSpec rel;  // rule steps: the stratum the step belongs to, A_i or B_i
  Substitution sigma;
};

struct Reduct {
  Term term;
  Step step;
};

struct Reducts {
  std::vector<Reduct> items;  // pre-order positions, rules in file order
  bool condition_undecided = false;
};

enum class Outcome { Joinable, NotJoinable, Unknown };
const char* to_string(Outcome o);

struct JoinVerdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<Term> witness;
  std::vector<Reduct> left;   // u →* witness
  std::vector<Reduct> right;  // v →* witness
};

enum class Strategy { FullBfs, LeftmostOutermost };

struct NormalizeResult {
  std::vector<Term> normal_forms;  // in discovery order
  bool unknown = false;
  std::size_t explored = 0;
};

enum class Flavor { Nested, Flat };

struct Derivation;

struct ConditionProof {
  Term lhs;
  Term rhs;
  Term witness;
  std::vector<Derivation> sides;  // lhs →* witness, rhs →* witness
};

struct DerivationStep {
  Step step;
  Term result;
  std::vector<ConditionProof> conditions;
};

struct Derivation {
  Term start;
  std::vector<DerivationStep> steps;

  const Term& end() const { return steps.empty() ? start : steps.back().result; }
};

/// Line-oriented trace: `<pos> <kind> [<rule>] <term>` per step, condition
/// proofs indented by two spaces.
std::string format_trace(const Derivation& d, const Signature* sig = nullptr);

class Engine;

/// Breadth-first exploration of a reduct graph with parent links.
class Exploration {
 public:
  Exploration(const Term& start);

  /// Expands one BFS level; returns the indices of the new nodes.
  std::vector<std::size_t> expand(const Engine& e, const RelationSpec& rel);
  /// Steps from the start to node `n`.
  std::vector<Reduct> path_to(std::size_t n) const;

  TermIndex nodes;
  std::vector<std::size_t> parent;
  std::vector<Step> via;
  std::vector<std::size_t> depth;
  std::vector<std::size_t> frontier;
  std::size_t level = 0;
  bool undecided = false;
};

/// Reduction engine for one system and budget. Results are memoised; the
/// caches are guarded so one engine may be shared between threads.
class Engine {
 public:
  explicit Engine(const RewriteSystem& sys, StepBudget budget = {});

  const RewriteSystem& system() const { return sys_; }
  const StepBudget& budget() const { return budget_; }

  /// Omega replaced by max_level.
  RelationSpec resolve(RelationSpec rel) const;

  std::shared_ptr<const Reducts> one_step_reducts(const Term& t, const RelationSpec& rel) const;
  JoinVerdict joinable(const Term& u, const Term& v, const RelationSpec& rel) const;
  /// Common reduct of u under `ru` and v under `rv`.
  JoinVerdict meet(const Term& u, const RelationSpec& ru, const Term& v, const RelationSpec& rv) const;
  /// Every term reachable in at most `depth` steps, stopping at max_graph.
  Exploration explore(const Term& t, const RelationSpec& rel, std::size_t depth) const;
  NormalizeResult normalize(const Term& t, const RelationSpec& rel, Strategy s = Strategy::FullBfs) const;
  /// Throws SizeLimit when more than `cap` results would be produced.
  std::vector<Term> parallel_reducts(const Term& t, const RelationSpec& rel, Flavor flavor,
                                     std::size_t cap = 10000) const;
  std::optional<Derivation> record_derivation(const Term& t, const RelationSpec& rel, const Term& target) const;
  /// Adds condition proofs to a path found by a search.
  Derivation justify(const Term& start, const std::vector<Reduct>& path) const;

  /// Rule steps at the root of `t` whose conditions hold.
  std::vector<Reduct> root_rule_steps(const Term& t, const RelationSpec& rel, bool* undecided) const;

  /// Set when a condition that failed at the lowest level of an Omega run
  /// succeeds one level higher, so a larger max_level could change results.
  bool level_limit_hit() const { return level_limit_hit_; }

 private:
  struct Key {
    Term t;
    RelKind kind;
    std::size_t level;
    BBase base;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct CondKey {
    Term d, c;
    RelationSpec rel;
    bool operator==(const CondKey&) const = default;
  };
  struct CondKeyHash {
    std::size_t operator()(const CondKey& k) const;
  };

  // How rule steps of `rel` are enabled: the relation their conditions are
  // joined in, or nothing when `rel` has no rule steps at all.
  std::optional<RelationSpec> condition_relation(const RelationSpec& rel, RelationSpec* rule_rel) const;
  std::shared_ptr<const Reducts> reducts_of(const Term& t, const RelationSpec& rel) const;
  friend class Exploration;
  Outcome check_conditions(const Rule& r, const Substitution& s, const RelationSpec& cond_rel) const;
  Outcome condition_verdict(const Term& d, const Term& c, const RelationSpec& rel) const;
  JoinVerdict join_search(const Term& u, const RelationSpec& ru, const Term& v, const RelationSpec& rv,
                          bool traces) const;

  RewriteSystem sys_;
  StepBudget budget_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<Key, std::shared_ptr<const Reducts>, KeyHash> reducts_;
  mutable std::unordered_map<CondKey, Outcome, CondKeyHash> conds_;
  mutable std::atomic<bool> level_limit_hit_{false};
  mutable std::atomic<bool> omega_run_{false};
};

// Convenience wrappers with a throwaway engine.
Reducts one_step_reducts(const Term& t, const RelationSpec& rel, const RewriteSystem& sys, const StepBudget& b = {});
JoinVerdict joinable(const Term& u, const Term& v, const RelationSpec& rel, const RewriteSystem& sys,
                     const StepBudget& b = {});

}  // namespace confluo
