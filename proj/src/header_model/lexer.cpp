#include "lexer.hpp"

#include <cctype>

namespace sigrec::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  LexResult run() {
    LexResult out;
    bool line_start = true;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        advance();
        line_start = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        advance();
        advance();
        while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ < text_.size()) {
          advance();
          advance();
        }
        continue;
      }
      if (c == '#' && line_start) {
        skip_directive();
        ++out.preprocessor_lines;
        continue;
      }
      line_start = false;
      Token tok;
      tok.line = line_;
      tok.column = column_;
      tok.offset = pos_;
      if (ident_start(c)) {
        tok.kind = TokKind::Ident;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
      } else if (c == '@' && pos_ + 1 < text_.size() && ident_start(text_[pos_ + 1])) {
        tok.kind = TokKind::AtKeyword;
        advance();
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        tok.kind = TokKind::Number;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
          advance();
      } else if (c == '"' || c == '\'' || (c == '@' && peek(1) == '"')) {
        tok.kind = TokKind::String;
        if (c == '@') advance();
        char quote = text_[pos_];
        advance();
        while (pos_ < text_.size() && text_[pos_] != quote && text_[pos_] != '\n') {
          if (text_[pos_] == '\\') advance();
          if (pos_ < text_.size()) advance();
        }
        if (pos_ < text_.size() && text_[pos_] == quote) advance();
      } else if (c == '.' && peek(1) == '.' && peek(2) == '.') {
        tok.kind = TokKind::Punct;
        advance();
        advance();
        advance();
      } else {
        tok.kind = TokKind::Punct;
        advance();
      }
      tok.end = pos_;
      tok.text = std::string(text_.substr(tok.offset, tok.end - tok.offset));
      out.tokens.push_back(std::move(tok));
    }
    Token end;
    end.kind = TokKind::End;
    end.line = line_;
    end.column = column_;
    end.offset = end.end = text_.size();
    out.tokens.push_back(end);
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_directive() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '\\' && peek(1) == '\n') {
        advance();
        advance();
        continue;
      }
      if (text_[pos_] == '/' && peek(1) == '*') {
        advance();
        advance();
        while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ < text_.size()) {
          advance();
          advance();
        }
        continue;
      }
      if (text_[pos_] == '\n') return;
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

LexResult lex(std::string_view text) { return Lexer(text).run(); }

}  // namespace sigrec::detail
