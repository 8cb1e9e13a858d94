#include "text/lexer.hpp"

#include <cctype>
#include <charconv>

namespace spdsim::text {
namespace {

bool isWordStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool isDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Cursor {
 public:
  Cursor(std::string_view src, std::string file)
      : src_(src), file_(std::move(file)) {}

  bool done() const { return pos_ >= src_.size(); }
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  SourceSpan here() const { return {file_, line_, col_, 0}; }

 private:
  std::string_view src_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

double toSeconds(const Token& number) {
  switch (number.unit) {
    case NumberUnit::Milliseconds:
      return number.number / 1000.0;
    case NumberUnit::Minutes:
      return number.number * 60.0;
    default:
      return number.number;
  }
}

std::vector<Token> lex(std::string_view source, const std::string& file,
                       std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  Cursor cur(source, file);

  while (!cur.done()) {
    char c = cur.peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      cur.advance();
      continue;
    }
    if (c == '#') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }

    SourceSpan start = cur.here();
    if (isWordStart(c)) {
      std::string word;
      word += cur.advance();
      // A dash continues a word only when followed by another word character,
      // so "fire-on-value" is one token but "x -1" stays two.
      while (isWordChar(cur.peek()) ||
             (cur.peek() == '-' && isWordChar(cur.peek(1)))) {
        word += cur.advance();
      }
      start.length = static_cast<int>(word.size());
      out.push_back({TokenKind::Word, std::move(word), 0, NumberUnit::None, false, start});
      continue;
    }

    if (isDigit(c) || ((c == '+' || c == '-') && isDigit(cur.peek(1)))) {
      std::string lit;
      if (c == '+' || c == '-') lit += cur.advance();
      while (isDigit(cur.peek())) lit += cur.advance();
      bool integral = true;
      if (cur.peek() == '.' && isDigit(cur.peek(1))) {
        integral = false;
        lit += cur.advance();
        while (isDigit(cur.peek())) lit += cur.advance();
      }

      NumberUnit unit = NumberUnit::None;
      if (cur.peek() == '%') {
        cur.advance();
        unit = NumberUnit::Percent;
      } else if (cur.peek() == 'm' && cur.peek(1) == 's' && !isWordChar(cur.peek(2))) {
        cur.advance();
        cur.advance();
        unit = NumberUnit::Milliseconds;
      } else if (cur.peek() == 'm' && cur.peek(1) == 'i' && cur.peek(2) == 'n' &&
                 !isWordChar(cur.peek(3))) {
        cur.advance();
        cur.advance();
        cur.advance();
        unit = NumberUnit::Minutes;
      } else if (cur.peek() == 's' && !isWordChar(cur.peek(1))) {
        cur.advance();
        unit = NumberUnit::Seconds;
      }

      double value = 0;
      auto [ptr, ec] = std::from_chars(
          lit.data() + (lit[0] == '+' || lit[0] == '-' ? 1 : 0),
          lit.data() + lit.size(), value);
      (void)ptr;
      if (ec != std::errc{}) {
        diags.push_back({Severity::Error, "BAD_NUMBER",
                         "malformed number literal '" + lit + "'", start});
        continue;
      }
      if (lit[0] == '-') value = -value;
      start.length = static_cast<int>(lit.size());
      out.push_back({TokenKind::Number, lit, value, unit, integral, start});
      continue;
    }

    if (c == '"') {
      cur.advance();
      std::string contents;
      bool closed = false;
      while (!cur.done()) {
        char d = cur.advance();
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\' && (cur.peek() == '"' || cur.peek() == '\\')) {
          contents += cur.advance();
          continue;
        }
        if (d == '\n') break;  // strings do not span lines
        contents += d;
      }
      if (!closed) {
        diags.push_back({Severity::Error, "UNTERMINATED_STRING",
                         "string literal is not closed", start});
        continue;
      }
      start.length = static_cast<int>(contents.size()) + 2;
      out.push_back({TokenKind::String, std::move(contents), 0, NumberUnit::None, false, start});
      continue;
    }

    if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',' || c == '=') {
      cur.advance();
      start.length = 1;
      out.push_back({TokenKind::Punct, std::string(1, c), 0, NumberUnit::None, false, start});
      continue;
    }
    if (c == '>' || c == '<') {
      cur.advance();
      std::string op(1, c);
      if (cur.peek() == '=') {
        cur.advance();
        op += '=';
      }
      start.length = static_cast<int>(op.size());
      out.push_back({TokenKind::Punct, std::move(op), 0, NumberUnit::None, false, start});
      continue;
    }

    diags.push_back({Severity::Error, "UNEXPECTED_CHAR",
                     std::string("unexpected character '") + c + "'", start});
    cur.advance();
  }

  out.push_back({TokenKind::End, "", 0, NumberUnit::None, false, cur.here()});
  return out;
}

}  // namespace spdsim::text
