#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sigrec::detail {

enum class TokKind { Ident, AtKeyword, Number, String, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int column = 1;
  std::size_t offset = 0;
  std::size_t end = 0;

  bool is(std::string_view s) const { return kind != TokKind::End && text == s; }
  bool is_ident() const { return kind == TokKind::Ident; }
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an End token
  int preprocessor_lines = 0;
};

/// Tokenizes Objective-C source. Comments are dropped; preprocessor
/// directives (including continuation lines) are dropped and counted.
LexResult lex(std::string_view text);

}  // namespace sigrec::detail
