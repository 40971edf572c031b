#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace deplogic::detail {

enum class TokenKind {
  kIdent,
  kLParen,
  kRParen,
  kComma,
  kSemicolon,
  kEquals,
  kBang,
  kAmp,
  kPipe,
  kEnd,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

// Splits formula source into tokens. '#' starts a comment running to the end
// of the line. Throws SyntaxError on characters outside the grammar.
std::vector<Token> tokenize(std::string_view source);

std::string describe(const Token& token);

// Cursor over a token vector with the lookahead the recursive-descent parsers
// need.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool accept(TokenKind kind);
  const Token& expect(TokenKind kind, std::string_view what);
  [[noreturn]] void fail(const Token& at, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace deplogic::detail
