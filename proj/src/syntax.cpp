#include "syntax.hpp"

#include <cctype>

#include "confluo/error.hpp"

namespace confluo::syntax {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    std::size_t l = line, cl = col;
    auto push = [&](Tok k, std::size_t n) {
      out.push_back({k, std::string(text.substr(i, n)), l, cl});
      advance(n);
    };
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      if (j + 1 < text.size() && text[j] == '#' &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        j += 2;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      push(Tok::Ident, j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Tok::Number, j - i);
    } else if (c == '\\') {
      push(Tok::Lambda, 1);
    } else if (starts("\xCE\xBB")) {  // λ
      push(Tok::Lambda, 2);
    } else if (starts("\xE2\x88\xA7")) {  // ∧
      push(Tok::And, 3);
    } else if (starts("/\\")) {
      push(Tok::And, 2);
    } else if (starts("->")) {
      push(Tok::Arrow, 2);
    } else if (starts("=>")) {
      push(Tok::Implies, 2);
    } else if (c == '=') {
      push(Tok::Equals, 1);
    } else if (c == '.') {
      push(Tok::Dot, 1);
    } else if (c == '(') {
      push(Tok::LParen, 1);
    } else if (c == ')') {
      push(Tok::RParen, 1);
    } else if (c == ';') {
      push(Tok::Semi, 1);
    } else if (c == ':') {
      push(Tok::Colon, 1);
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

Parser::Parser(std::vector<Token> tokens, IsConstant is_constant)
    : tokens_(std::move(tokens)), is_constant_(std::move(is_constant)) {}

const Token& Parser::expect(Tok k, std::string_view what) {
  if (!at(k)) fail("expected " + std::string(what) + ", found " + describe(peek()));
  return next();
}

void Parser::fail(const std::string& msg) const {
  throw SyntaxError(msg, peek().line, peek().column);
}

Term Parser::term() {
  if (at(Tok::Lambda)) return lambda();
  return application();
}

Term Parser::lambda() {
  expect(Tok::Lambda, "'\\'");
  std::vector<std::string> binders;
  while (at(Tok::Ident)) binders.push_back(next().text);
  if (binders.empty()) fail("expected binder after '\\', found " + describe(peek()));
  expect(Tok::Dot, "'.'");
  for (const auto& b : binders) scope_.push_back(b);
  Term body = term();
  scope_.resize(scope_.size() - binders.size());
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::lam_raw(*it, body);
  return body;
}

Term Parser::application() {
  Term acc;
  while (at(Tok::Ident) || at(Tok::LParen)) {
    Term a = atom();
    acc = acc.valid() ? Term::app(acc, a) : a;
  }
  if (!acc.valid()) fail("expected term, found " + describe(peek()));
  if (at(Tok::Lambda)) acc = Term::app(acc, lambda());
  return acc;
}

Term Parser::atom() {
  if (at(Tok::LParen)) {
    next();
    Term t = term();
    expect(Tok::RParen, "')'");
    return t;
  }
  return resolve(expect(Tok::Ident, "identifier"));
}

Term Parser::resolve(const Token& ident) const {
  for (std::size_t k = scope_.size(); k-- > 0;) {
    if (scope_[k] == ident.text) return Term::bound(static_cast<std::uint32_t>(scope_.size() - 1 - k));
  }
  if (is_constant_ && is_constant_(ident.text)) return Term::constant(ident.text);
  return Term::var(ident.text);
}

}  // namespace confluo::syntax
