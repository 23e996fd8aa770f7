// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "resbound/expr.hpp"

namespace resbound {

enum class TokenKind { Number, Ident, Punct, End };

struct Token {
    TokenKind kind;
    std::string text;
    int line;
    int column;
};

/// Splits assertion and expression text. Throws ParseError on stray characters.
std::vector<Token> tokenize(std::string_view text);

class TokenStream {
  public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    [[nodiscard]] bool at(std::string_view punct_or_ident) const;
    [[nodiscard]] bool at_end() const { return peek().kind == TokenKind::End; }
    bool accept(std::string_view text);
    const Token& expect(std::string_view text, std::string_view production);
    const Token& expect_ident(std::string_view production);
    [[noreturn]] void fail(std::string_view expected) const;
    [[nodiscard]] std::size_t position() const { return pos_; }
    void rewind(std::size_t pos) { pos_ = pos; }

  private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

/// expr := mult (('+'|'-') mult)*, mult := unary (('*'|'/') unary)*,
/// unary := ('+'|'-') unary | power, power := primary ('**' unary)?
Expr parse_expr(TokenStream& ts);

/// Whole-string parse; trailing input is an error.
Expr parse_expr(std::string_view text);

} // namespace resbound
