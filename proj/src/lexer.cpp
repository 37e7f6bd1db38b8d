#include "lexer.hpp"

#include <cctype>
#include <cstdio>

namespace rbn::detail {

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Pipe: return "'|'";
    case Tok::Equal: return "'='";
    case Tok::NotEqual: return "'!='";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of input";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourceSpan at;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++at.line;
        at.column = 1;
      } else {
        ++at.column;
      }
    }
    at.offset = i;
  };
  auto is_ident_start = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  auto is_ident = [](unsigned char c) { return std::isalnum(c) || c == '_'; };
  auto is_digit = [](unsigned char c) { return c >= '0' && c <= '9'; };

  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const SourceSpan start = at;
    if (is_ident_start(c)) {
      std::size_t n = 1;
      while (i + n < text.size() && is_ident(static_cast<unsigned char>(text[i + n]))) ++n;
      out.push_back({Tok::Ident, std::string(text.substr(i, n)), start});
      advance(n);
      continue;
    }
    if (is_digit(c)) {
      std::size_t n = 1;
      while (i + n < text.size() && is_digit(static_cast<unsigned char>(text[i + n]))) ++n;
      if (i + n + 1 < text.size() && text[i + n] == '.' && is_digit(static_cast<unsigned char>(text[i + n + 1]))) {
        ++n;
        while (i + n < text.size() && is_digit(static_cast<unsigned char>(text[i + n]))) ++n;
      }
      out.push_back({Tok::Number, std::string(text.substr(i, n)), start});
      advance(n);
      continue;
    }
    Tok kind;
    std::size_t n = 1;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case '|': kind = Tok::Pipe; break;
      case '=': kind = Tok::Equal; break;
      case '&': kind = Tok::Amp; break;
      case '/': kind = Tok::Slash; break;
      case '!':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          kind = Tok::NotEqual;
          n = 2;
        } else {
          kind = Tok::Bang;
        }
        break;
      default: {
        if (std::isprint(c)) throw ParseError(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
        char hex[8];
        std::snprintf(hex, sizeof hex, "0x%02x", c);
        throw ParseError(start, std::string("unexpected byte ") + hex);
      }
    }
    out.push_back({kind, std::string(text.substr(i, n)), start});
    advance(n);
  }
  out.push_back({Tok::End, "", at});
  return out;
}

}  // namespace rbn::detail
