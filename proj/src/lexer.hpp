#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rbn/errors.hpp"

namespace rbn::detail {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Pipe,
  Equal,
  NotEqual,
  Bang,
  Amp,
  Slash,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

// Whitespace-insensitive; `#` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

const char* describe(Tok kind);

}  // namespace rbn::detail
