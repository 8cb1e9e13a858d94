#pragma once

#include <string>
#include <vector>

#include "text/lexer.hpp"

namespace spdsim::text {

// Token-stream helpers shared by the recursive-descent parsers. Subclasses
// report problems through diags and use sync points for recovery; no
// exceptions cross parse boundaries.
class ParserBase {
 protected:
  ParserBase(const std::vector<Token>& tokens, std::vector<Diagnostic>& diags)
      : toks_(tokens), diags_(diags) {}

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool atEnd() const { return peek().kind == TokenKind::End; }

  bool atWord(const char* w) const {
    return peek().kind == TokenKind::Word && peek().text == w;
  }
  bool atPunct(const char* p) const {
    return peek().kind == TokenKind::Punct && peek().text == p;
  }
  bool acceptWord(const char* w) {
    if (!atWord(w)) return false;
    advance();
    return true;
  }
  bool acceptPunct(const char* p) {
    if (!atPunct(p)) return false;
    advance();
    return true;
  }

  void error(const std::string& code, const std::string& message) {
    error(code, message, peek().span);
  }
  void error(const std::string& code, const std::string& message,
             const SourceSpan& span) {
    diags_.push_back({Severity::Error, code, message, span});
  }

  bool expectWord(const char* w) {
    if (acceptWord(w)) return true;
    error("EXPECTED_TOKEN", std::string("expected '") + w + "', found " + describe(peek()));
    return false;
  }
  bool expectPunct(const char* p) {
    if (acceptPunct(p)) return true;
    error("EXPECTED_TOKEN", std::string("expected '") + p + "', found " + describe(peek()));
    return false;
  }
  bool expectString(std::string& out, SourceSpan* span = nullptr) {
    if (peek().kind != TokenKind::String) {
      error("EXPECTED_TOKEN", "expected a quoted name, found " + describe(peek()));
      return false;
    }
    if (span) *span = peek().span;
    out = advance().text;
    return true;
  }
  bool expectNumber(Token& out) {
    if (peek().kind != TokenKind::Number) {
      error("EXPECTED_TOKEN", "expected a number, found " + describe(peek()));
      return false;
    }
    out = advance();
    return true;
  }

  // Skips to the close of the current brace block. Call with the '{' already
  // consumed; consumes the matching '}'.
  void skipBlockRemainder() {
    int depth = 1;
    while (!atEnd() && depth > 0) {
      if (atPunct("{")) ++depth;
      if (atPunct("}")) --depth;
      advance();
    }
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::Word:
        return "'" + t.text + "'";
      case TokenKind::Number:
        return "number '" + t.text + "'";
      case TokenKind::String:
        return "\"" + t.text + "\"";
      case TokenKind::Punct:
        return "'" + t.text + "'";
      case TokenKind::End:
        return "end of input";
    }
    return "token";
  }

 private:
  const std::vector<Token>& toks_;
  size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
};

}  // namespace spdsim::text
