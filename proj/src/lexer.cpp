#include "orkg/detail/lexer.hpp"

#include <cctype>

#include "orkg/error.hpp"

namespace orkg::detail {

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  Lexer(std::string_view text, LexerOptions options) : text_(text), options_(options) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        out.push_back(tok);
        return out;
      }
      lex_one(tok);
      out.push_back(std::move(tok));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& reason) const {
    throw SyntaxError(line_, column_, reason);
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == '#') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void lex_one(Token& tok) {
    char c = peek();
    if (c == '<') {
      char next = peek(1);
      if (options_.comparison_operators &&
          (next == ' ' || next == '=' || next == '\t' ||
           std::isdigit(static_cast<unsigned char>(next)) || next == '-' || next == '+' ||
           next == '.')) {
        advance();
        tok.kind = TokenKind::kPunct;
        tok.text = "<";
        if (peek() == '=') {
          advance();
          tok.text = "<=";
        }
        return;
      }
      lex_iri(tok);
      return;
    }
    if (c == '"') {
      lex_string(tok);
      return;
    }
    if (c == '_' && peek(1) == ':') {
      advance();
      advance();
      tok.kind = TokenKind::kBlank;
      while (std::isalnum(static_cast<unsigned char>(peek()))) tok.text += advance();
      if (tok.text.empty()) fail("empty blank node label");
      return;
    }
    if (c == '?' && options_.variables) {
      advance();
      tok.kind = TokenKind::kVariable;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') tok.text += advance();
      if (tok.text.empty()) fail("empty variable name");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number(tok);
      return;
    }
    if (c == '^' && peek(1) == '^') {
      advance();
      advance();
      tok.kind = TokenKind::kPunct;
      tok.text = "^^";
      return;
    }
    if (c == '@' || is_name_start(c) || c == ':') {
      lex_name(tok);
      return;
    }
    if (options_.comparison_operators && (c == '>' || c == '=' || c == '!')) {
      tok.kind = TokenKind::kPunct;
      tok.text = std::string(1, advance());
      if (peek() == '=') tok.text += advance();
      if (tok.text == "!") fail("unexpected '!'");
      return;
    }
    static constexpr std::string_view kPunct = ".;,{}()*";
    if (kPunct.find(c) != std::string_view::npos) {
      tok.kind = TokenKind::kPunct;
      tok.text = std::string(1, advance());
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void lex_iri(Token& tok) {
    advance();
    tok.kind = TokenKind::kIriRef;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated IRI");
      char c = peek();
      if (c == '>') {
        advance();
        break;
      }
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"') {
        fail("invalid character in IRI");
      }
      tok.text += advance();
    }
    if (tok.text.empty()) fail("empty IRI");
  }

  void lex_string(Token& tok) {
    advance();
    tok.kind = TokenKind::kString;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      char c = advance();
      if (c == '"') return;
      if (c == '\n') fail("newline in string");
      if (c != '\\') {
        tok.text += c;
        continue;
      }
      if (pos_ >= text_.size()) fail("unterminated escape");
      char e = advance();
      switch (e) {
        case 'n': tok.text += '\n'; break;
        case 'r': tok.text += '\r'; break;
        case 't': tok.text += '\t'; break;
        case '"': tok.text += '"'; break;
        case '\\': tok.text += '\\'; break;
        case 'u':
        case 'U': {
          std::size_t n = e == 'u' ? 4 : 8;
          std::string hex;
          for (std::size_t i = 0; i < n; ++i) {
            if (!std::isxdigit(static_cast<unsigned char>(peek()))) fail("bad unicode escape");
            hex += advance();
          }
          append_utf8(tok.text, std::stoul(hex, nullptr, 16));
          break;
        }
        default:
          fail(std::string("unknown escape \\") + e);
      }
    }
  }

  void lex_number(Token& tok) {
    tok.kind = TokenKind::kInteger;
    if (peek() == '-' || peek() == '+') tok.text += advance();
    while (std::isdigit(static_cast<unsigned char>(peek()))) tok.text += advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      tok.kind = TokenKind::kDecimal;
      tok.text += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) tok.text += advance();
    }
  }

  void lex_name(Token& tok) {
    if (peek() == '@') tok.text += advance();
    bool has_colon = false;
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ':') {
        has_colon = true;
        tok.text += advance();
      } else if (is_name_char(c)) {
        // A trailing '.' terminates the statement rather than the name.
        if (c == '.' && !is_name_char(peek(1))) break;
        tok.text += advance();
      } else {
        break;
      }
    }
    tok.kind = has_colon && tok.text[0] != '@' ? TokenKind::kPName : TokenKind::kWord;
  }

  std::string_view text_;
  LexerOptions options_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text, LexerOptions options) {
  return Lexer(text, options).run();
}

std::string escape_string(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIriRef: return "IRI";
    case TokenKind::kPName: return "prefixed name";
    case TokenKind::kBlank: return "blank node";
    case TokenKind::kString: return "string";
    case TokenKind::kInteger: return "integer";
    case TokenKind::kDecimal: return "decimal";
    case TokenKind::kVariable: return "variable";
    case TokenKind::kWord: return "word";
    case TokenKind::kPunct: return "punctuation";
    case TokenKind::kEnd: return "end of input";
  }
  return "token";
}

}  // namespace orkg::detail
