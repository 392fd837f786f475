#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "confluo/term.hpp"

namespace confluo {

/// λx1…xk. v a0 … an, with binders opened by fresh variables.
struct HeadForm {
  enum class Shape { Atomic, Redex };  // (a) v is a variable/constant, (b) v is an abstraction

  std::vector<std::string> binders;
  Term head;
  std::vector<Term> args;
  Shape shape = Shape::Atomic;

  Term reassemble() const;
};

HeadForm head_form(const Term& t);

struct NormalForm {
  Term term;
  std::size_t steps = 0;
};
struct FuelExhausted {
  Term partial;
  std::size_t steps_used = 0;
};
using BetaResult = std::variant<NormalForm, FuelExhausted>;

inline bool is_normal(const BetaResult& r) { return std::holds_alternative<NormalForm>(r); }

/// Positions of all β-redexes, in pre-order.
std::vector<Position> beta_redexes(const Term& t);
bool is_beta_normal(const Term& t);
/// Contracts the redex at `p`. Throws InvalidPosition if there is none.
Term beta_step_at(const Term& t, const Position& p);
/// One reduct per redex, in the order of beta_redexes.
std::vector<Term> beta_reducts(const Term& t);

/// The head step λx⃗.(λy.b) a0 a⃗ → λx⃗.b{y→a0} a⃗, or nothing for shape (a).
std::optional<Term> head_step(const Term& t);
/// One leftmost-outermost step, or nothing on a normal form.
std::optional<Term> leftmost_outermost_step(const Term& t);
/// Leftmost-outermost normalization; each contraction costs one unit of fuel.
BetaResult beta_nf(const Term& t, std::size_t fuel);

inline constexpr std::size_t kDefaultParallelCap = 100'000;

/// {u | t ⇉β u}. Throws SizeLimit when more than `cap` reducts exist.
std::vector<Term> parallel_beta_reducts(const Term& t, std::size_t cap = kDefaultParallelCap);
/// Contracts every redex of t, nested ones included.
Term complete_development(const Term& t);

/// Children of t under ≻ (head reduct for shape (b), arguments for shape (a)).
std::vector<Term> succ_children(const Term& t);

struct WnMeasure {
  std::size_t h_steps = 0;
  std::size_t size = 0;
  auto operator<=>(const WnMeasure&) const = default;
};
/// (number of leftmost-outermost steps to normal form, node count), or
/// nothing when normalization does not finish within `fuel` steps.
std::optional<WnMeasure> wn_measure(const Term& t, std::size_t fuel);

}  // namespace confluo
