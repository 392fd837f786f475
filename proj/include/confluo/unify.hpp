#pragma once

#include <optional>
#include <set>
#include <string>

#include "confluo/system.hpp"
#include "confluo/term.hpp"

namespace confluo {

/// The σ with substitute(pattern, σ) α-equal to `subject`, if any. Repeated
/// pattern variables need α-equal images. Throws NonAlgebraicPattern.
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/// As `match` without the algebraic check, extending `s` in place. On
/// failure `s` is left partially extended. For callers that validated the
/// pattern already (rule left-hand sides).
bool match_into(const Term& pattern, const Term& subject, Substitution& s);

/// Most general unifier of two algebraic terms with disjoint variables.
/// Throws NonAlgebraicInput, SharedVariables.
std::optional<Substitution> mgu(const Term& s, const Term& t);

/// α-copy of `r` whose variables avoid `avoid`.
Rule rename_apart(const Rule& r, const std::set<std::string>& avoid);

}  // namespace confluo
