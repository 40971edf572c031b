#include "core/lexer.hpp"

#include <cctype>

#include "core/error.hpp"

namespace deplogic::detail {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };

  while (i < source.size()) {
    const char c = source[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    const std::size_t tok_line = line;
    const std::size_t tok_col = column;
    if (is_ident_start(c)) {
      std::size_t end = i;
      while (end < source.size() && is_ident_char(source[end])) ++end;
      tokens.push_back({TokenKind::kIdent, std::string(source.substr(i, end - i)),
                        tok_line, tok_col});
      advance(end - i);
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '(': kind = TokenKind::kLParen; break;
      case ')': kind = TokenKind::kRParen; break;
      case ',': kind = TokenKind::kComma; break;
      case ';': kind = TokenKind::kSemicolon; break;
      case '=': kind = TokenKind::kEquals; break;
      case '!': kind = TokenKind::kBang; break;
      case '&': kind = TokenKind::kAmp; break;
      case '|': kind = TokenKind::kPipe; break;
      default:
        throw SyntaxError(tok_line, tok_col,
                          std::string("unexpected character '") + c + "'");
    }
    tokens.push_back({kind, std::string(1, c), tok_line, tok_col});
    advance(1);
  }
  tokens.push_back({TokenKind::kEnd, "", line, column});
  return tokens;
}

std::string describe(const Token& token) {
  if (token.kind == TokenKind::kEnd) return "end of input";
  return "'" + token.text + "'";
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t idx = pos_ + ahead;
  return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& tok = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return tok;
}

bool TokenStream::accept(TokenKind kind) {
  if (peek().kind != kind) return false;
  next();
  return true;
}

const Token& TokenStream::expect(TokenKind kind, std::string_view what) {
  if (peek().kind != kind) {
    fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
  }
  return next();
}

void TokenStream::fail(const Token& at, const std::string& message) const {
  throw SyntaxError(at.line, at.column, message);
}

}  // namespace deplogic::detail
