#pragma once

// Tokenizer shared by the program, norm, relation and division file readers.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scbta/syntax.hpp"

namespace scbta {

enum class TokenKind { Ident, Var, Int, Punct, End };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;

  bool is(std::string_view punct) const {
    return kind == TokenKind::Punct && text == punct;
  }
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    std::size_t start = i, l = line, cl = col;
    if (std::islower(static_cast<unsigned char>(c)) ||
        std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && word_char(src[i])) advance(1);
      bool is_var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      out.push_back({is_var ? TokenKind::Var : TokenKind::Ident,
                     std::string(src.substr(start, i - start)), l, cl});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        advance(1);
      }
      if (i < src.size() && word_char(src[i])) {
        throw SyntaxError("malformed number", l, cl);
      }
      out.push_back({TokenKind::Int, std::string(src.substr(start, i - start)),
                     l, cl});
      continue;
    }
    if (c == '\'') {
      // Quoted symbol; only needed for things like '.' in norm files.
      advance(1);
      while (i < src.size() && src[i] != '\'' && src[i] != '\n') advance(1);
      if (i >= src.size() || src[i] != '\'') {
        throw SyntaxError("unterminated quoted symbol", l, cl);
      }
      std::string text(src.substr(start + 1, i - start - 1));
      advance(1);
      if (text.empty()) throw SyntaxError("empty quoted symbol", l, cl);
      out.push_back({TokenKind::Ident, std::move(text), l, cl});
      continue;
    }
    static constexpr std::string_view two[] = {":-", ">=", "<=", "=<"};
    bool matched = false;
    for (auto op : two) {
      if (src.substr(i, 2) == op) {
        out.push_back({TokenKind::Punct, std::string(op == "=<" ? "<=" : op),
                       l, cl});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view one = "()[]|,.:/{}=<>+-*";
    if (one.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::Punct, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({TokenKind::End, "", line, col});
  return out;
}

/// Cursor over a token vector with expectation helpers.
class TokenStream {
 public:
  explicit TokenStream(std::string_view src) : toks_(tokenize(src)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool accept(std::string_view punct) {
    if (peek().is(punct)) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect(std::string_view punct) {
    if (!peek().is(punct)) fail("expected '" + std::string(punct) + "'");
    return next();
  }
  const Token& expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input"
                                                 : "'" + t.text + "'";
    throw SyntaxError(msg + ", found " + found, t.line, t.column);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace scbta
