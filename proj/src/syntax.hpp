#pragma once

// Lexer and term parser shared by the term and rule-file front ends.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "confluo/term.hpp"

namespace confluo::syntax {

enum class Tok {
  Ident,
  Number,
  Lambda,   // '\' or 'λ'
  Dot,
  LParen,
  RParen,
  Arrow,    // ->
  Implies,  // =>
  Equals,   // =
  And,      // /\ or ∧
  Semi,
  Colon,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

/// Throws SyntaxError on characters outside the grammar.
std::vector<Token> tokenize(std::string_view text);

std::string describe(const Token& t);

class Parser {
 public:
  using IsConstant = std::function<bool(std::string_view)>;

  Parser(std::vector<Token> tokens, IsConstant is_constant);

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& expect(Tok k, std::string_view what);
  [[noreturn]] void fail(const std::string& msg) const;

  /// term ::= lam | app ; lam ::= '\' ident+ '.' term ; app ::= atom+ [lam]
  Term term();

 private:
  Term application();
  Term atom();
  Term lambda();
  Term resolve(const Token& ident) const;

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  IsConstant is_constant_;
  std::vector<std::string> scope_;
};

}  // namespace confluo::syntax
