#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spdsim/diagnostics.hpp"

namespace spdsim::text {

enum class TokenKind { Word, Number, String, Punct, End };

enum class NumberUnit { None, Seconds, Milliseconds, Minutes, Percent };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;       // word spelling, string contents, or punct spelling
  double number = 0;      // Number tokens
  NumberUnit unit = NumberUnit::None;
  bool integral = false;  // Number had no fractional part
  SourceSpan span;
};

// Converts a Number token's value to seconds; the caller has checked the unit
// is one of Seconds/Milliseconds/Minutes.
double toSeconds(const Token& number);

// Splits source into tokens. Never throws; malformed input produces Error
// diagnostics and the offending characters are skipped. The result always
// ends with an End token.
std::vector<Token> lex(std::string_view source, const std::string& file,
                       std::vector<Diagnostic>& diags);

}  // namespace spdsim::text
