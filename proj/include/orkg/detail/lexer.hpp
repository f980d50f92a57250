#pragma once

// Shared tokenizer for the Turtle subset, N-Triples and the SPARQL subset.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace orkg::detail {

enum class TokenKind {
  kIriRef,    // <...>, text is the IRI
  kPName,     // prefix:local, text is the raw name
  kBlank,     // _:label, text is the label
  kString,    // "...", text is unescaped
  kInteger,   // 42, -7
  kDecimal,   // 4.2
  kVariable,  // ?x, text is the name without '?'
  kWord,      // bare identifier: a, SELECT, @prefix (with '@')
  kPunct,     // . ; , { } ( ) ^^ * and comparison operators
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(TokenKind::kPunct, t); }
};

struct LexerOptions {
  // Treat `<` followed by space, '=' or a digit as a comparison operator.
  bool comparison_operators = false;
  bool variables = false;
};

// Throws SyntaxError on unterminated IRIs/strings or stray characters.
std::vector<Token> tokenize(std::string_view text, LexerOptions options = {});

std::string escape_string(std::string_view s);
std::string token_kind_name(TokenKind kind);

}  // namespace orkg::detail
