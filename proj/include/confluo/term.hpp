#pragma once

#include <compare>
#include <functional>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace confluo {

/// An untyped λ-term over named free variables and curried constants.
///
/// Terms are immutable, reference-counted values stored in locally nameless
/// form: variables bound by an abstraction are de Bruijn indices (`Bound`),
/// free variables keep their names. The binder name of an abstraction is only
/// a printing hint. As a consequence `operator==` is α-equivalence and the
/// cached hash is α-invariant.
///
/// Every public operation expects and returns locally closed terms (no
/// dangling `Bound` index); `Bound` nodes only appear inside `body()`.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, Const, App, Lam, Bound };

  Term() = default;

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term app(Term fun, Term arg);
  static Term app(Term head, std::span<const Term> args);
  /// λbinder.body, abstracting the free variable `binder` of `body`.
  static Term lam(std::string_view binder, const Term& body);

  // Raw locally nameless constructors.
  static Term bound(std::uint32_t index);
  static Term lam_raw(std::string hint, Term body);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_lam() const { return kind() == Kind::Lam; }
  bool is_bound() const { return kind() == Kind::Bound; }

  /// Variable or constant name; binder hint for abstractions.
  const std::string& name() const;
  std::uint32_t index() const;
  const Term& fun() const;
  const Term& arg() const;
  /// Raw body of an abstraction, with the binder as `Bound(0)`.
  const Term& body() const;

  /// Node count (variables, constants, applications and abstractions).
  std::size_t size() const;
  std::size_t hash() const;
  /// One past the largest dangling de Bruijn index (0 when locally closed).
  std::uint32_t loose() const;
  bool has_free_vars() const;
  bool has_lambda() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Insertion-ordered set of terms modulo α.
class TermIndex {
 public:
  /// Returns (index, inserted).
  std::pair<std::size_t, bool> insert(const Term& t);
  std::optional<std::size_t> find(const Term& t) const;
  bool contains(const Term& t) const { return find(t).has_value(); }
  const Term& operator[](std::size_t i) const { return items_[i]; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<Term>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<Term> items_;
  std::unordered_map<Term, std::size_t, TermHash> index_;
};

/// Returns `base` with any `#n` suffix removed.
std::string base_name(std::string_view name);
/// Globally fresh variable name of the form `base#n`.
std::string fresh_name(std::string_view base);

/// Replaces `Bound(0)` of an abstraction body by `with` (locally closed).
Term instantiate(const Term& body, const Term& with);
/// Turns free occurrences of `x` into `Bound(depth)`.
Term abstract(const Term& t, std::string_view x, std::uint32_t depth = 0);

struct OpenedLam {
  std::string name;
  Term body;
};
/// Opens an abstraction with a globally fresh variable.
OpenedLam open_fresh(const Term& lam);
/// Opens an abstraction reusing its binder hint unless that name already
/// occurs free in the body.
OpenedLam open_named(const Term& lam);

bool occurs_free(const Term& t, std::string_view x);
std::set<std::string> free_vars(const Term& t);
std::set<std::string> constants_of(const Term& t);
bool is_closed(const Term& t);

/// head a1 ... an with head not an application.
struct Spine {
  Term head;
  std::vector<Term> args;
};
Spine spine(const Term& t);

// ---------------------------------------------------------------------------
// Substitutions

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init)
      : bindings_(init) {}

  void bind(std::string x, Term t) { bindings_.insert_or_assign(std::move(x), std::move(t)); }
  const Term* lookup(std::string_view x) const;
  bool contains(std::string_view x) const { return lookup(x) != nullptr; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  std::set<std::string> domain() const;
  const std::map<std::string, Term, std::less<>>& bindings() const { return bindings_; }

  /// Keeps only the bindings of the given variables.
  Substitution restricted(const std::set<std::string>& vars) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term, std::less<>> bindings_;
};

/// Capture-avoiding, simultaneous application of `s` to `t`.
Term substitute(const Term& t, const Substitution& s);
/// (s ∘ t): applies `s` first, then `t`, on every variable.
Substitution compose(const Substitution& s, const Substitution& t);

// ---------------------------------------------------------------------------
// Positions

/// Path from the root: 1 = function side of an application or the body of
/// an abstraction, 2 = argument side.
class Position {
 public:
  Position() = default;
  Position(std::initializer_list<std::uint8_t> dirs) : path_(dirs) {}
  explicit Position(std::vector<std::uint8_t> dirs) : path_(std::move(dirs)) {}

  const std::vector<std::uint8_t>& path() const { return path_; }
  bool empty() const { return path_.empty(); }
  std::size_t depth() const { return path_.size(); }
  Position child(std::uint8_t dir) const;
  Position concat(const Position& rest) const;
  bool is_prefix_of(const Position& other) const;
  /// "e" for the root, otherwise the digits, e.g. "212".
  std::string to_string() const;

  auto operator<=>(const Position&) const = default;

 private:
  std::vector<std::uint8_t> path_;
};

/// All positions of `t` in pre-order (root first, function side before
/// argument side).
std::vector<Position> positions(const Term& t);
/// Throws InvalidPosition. Binders crossed on the way are opened with their
/// own name when that is unambiguous, otherwise with a fresh one.
Term subterm_at(const Term& t, const Position& p);
/// Throws InvalidPosition, or CaptureAtPosition when the path crosses a
/// binder whose variable occurs free in `u`.
Term replace_at(const Term& t, const Position& p, const Term& u);
/// Applies `f` to the subterm at `p`. Binders crossed on the way are opened
/// with fresh variables and closed again afterwards, so the result of `f` may
/// mention them. Throws InvalidPosition.
Term rewrite_at(const Term& t, const Position& p, const std::function<Term(const Term&)>& f);
/// Positions of `u` holding `t`; binders of `u` never capture variables of `t`.
std::vector<Position> occurrences(const Term& t, const Term& u);

// ---------------------------------------------------------------------------
// Signatures and classification

struct SymbolInfo {
  std::size_t arity = 0;
  bool defined = false;
};

class Signature {
 public:
  void declare(std::string symbol, std::size_t arity);
  void set_defined(std::string_view symbol, bool defined = true);
  bool contains(std::string_view symbol) const;
  const SymbolInfo& info(std::string_view symbol) const;  // throws UndeclaredSymbol
  std::size_t arity(std::string_view symbol) const { return info(symbol).arity; }
  bool defined(std::string_view symbol) const { return info(symbol).defined; }
  const std::map<std::string, SymbolInfo, std::less<>>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }

 private:
  std::map<std::string, SymbolInfo, std::less<>> symbols_;
};

struct Classification {
  bool applicative = false;
  bool algebraic = false;
  bool arity_compliant = false;
};

bool is_applicative(const Term& t);
bool is_algebraic(const Term& t);
/// Throws UndeclaredSymbol.
bool is_arity_compliant(const Term& t, const Signature& sig);
/// Throws UndeclaredSymbol.
Classification classify(const Term& t, const Signature& sig);

// ---------------------------------------------------------------------------
// Concrete syntax

/// Parses the term grammar. Identifiers declared in `sig` are constants, all
/// others variables. Throws SyntaxError.
Term parse_term(std::string_view text, const Signature& sig = {});
/// Prints with minimal parentheses. Binder names avoid free variables, the
/// constants of the term and those of `sig`.
std::string print_term(const Term& t, const Signature* sig = nullptr);

}  // namespace confluo
