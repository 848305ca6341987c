#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "xtrio/error.hpp"

namespace xtrio {

enum class TokenKind { Ident, Int, Punct, Newline, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Tokenizer shared by the formula grammar and the model DSL.
///
/// Identifiers are dotted names (`Rob.load1`). `#` starts a comment that runs
/// to the end of the line. Newlines are reported only when `keep_newlines`
/// is set (the model DSL is line oriented, formulas are not).
class Lexer {
 public:
  explicit Lexer(std::string_view text, bool keep_newlines = false)
      : text_(text), keep_newlines_(keep_newlines) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      const bool end = t.kind == TokenKind::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

 private:
  Token next() {
    for (;;) {
      if (pos_ >= text_.size()) return make(TokenKind::End, "", line_, col_);
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        const int l = line_, k = col_;
        advance();
        if (keep_newlines_) return make(TokenKind::Newline, "\n", l, k);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      break;
    }
    const int l = line_, k = col_;
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      for (;;) {
        while (pos_ < text_.size() && is_word(text_[pos_])) s += advance();
        // A dot continues the name only when a word character follows.
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' && is_word(text_[pos_ + 1])) {
          s += advance();
          continue;
        }
        break;
      }
      return make(TokenKind::Ident, std::move(s), l, k);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) s += advance();
      return make(TokenKind::Int, std::move(s), l, k);
    }
    static constexpr std::array<std::string_view, 7> multi = {"<->", "->", "&&", "||", "!=", ":=", "=="};
    for (std::string_view m : multi) {
      if (text_.substr(pos_, m.size()) == m) {
        for (std::size_t i = 0; i < m.size(); ++i) advance();
        return make(TokenKind::Punct, std::string(m), l, k);
      }
    }
    static constexpr std::string_view single = "()!,-+*={};:[]|";
    if (single.find(c) != std::string_view::npos) {
      advance();
      return make(TokenKind::Punct, std::string(1, c), l, k);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, k);
  }

  static bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  static Token make(TokenKind kind, std::string text, int line, int col) {
    return Token{kind, std::move(text), line, col};
  }

  std::string_view text_;
  bool keep_newlines_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Punct && t.text == p;
  }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Ident && t.text == w;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    take();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    take();
    return true;
  }
  const Token& expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
    return take();
  }
  const Token& expect_word(std::string_view w) {
    if (!is_word(w)) fail("expected '" + std::string(w) + "'");
    return take();
  }
  const Token& expect(TokenKind kind, std::string_view what) {
    if (peek().kind != kind) fail("expected " + std::string(what));
    return take();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string found = t.kind == TokenKind::End       ? "end of input"
                              : t.kind == TokenKind::Newline ? "end of line"
                                                             : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.line, t.column);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace xtrio
