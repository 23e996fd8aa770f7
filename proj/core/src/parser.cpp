// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cctype>

#include <fmt/format.h>

#include "resbound/errors.hpp"
#include "resbound/parser.hpp"

namespace resbound {

namespace {

constexpr std::array<std::string_view, 10> kLongPuncts = {"==>", "**", "<=", ">=", "&&", "||", ":-", "==", "!=", "=>"};
constexpr std::string_view kShortPuncts = "+-*/()[],:.#<>=|{};";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const int l0 = line;
        const int c0 = col;
        if (digit(c)) {
            std::size_t j = i;
            while (j < text.size() && digit(text[j])) {
                ++j;
            }
            if (j + 1 < text.size() && text[j] == '.' && digit(text[j + 1])) {
                ++j;
                while (j < text.size() && digit(text[j])) {
                    ++j;
                }
            }
            out.push_back({TokenKind::Number, std::string(text.substr(i, j - i)), l0, c0});
            advance(j - i);
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) {
                ++j;
            }
            out.push_back({TokenKind::Ident, std::string(text.substr(i, j - i)), l0, c0});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const auto p : kLongPuncts) {
            if (text.substr(i, p.size()) == p) {
                out.push_back({TokenKind::Punct, std::string(p), l0, c0});
                advance(p.size());
                matched = true;
                break;
            }
        }
        if (matched) {
            continue;
        }
        if (kShortPuncts.find(c) != std::string_view::npos) {
            out.push_back({TokenKind::Punct, std::string(1, c), l0, c0});
            advance(1);
            continue;
        }
        throw ParseError(fmt::format("unexpected character '{}'", c), l0, c0);
    }
    out.push_back({TokenKind::End, "", line, col});
    return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

const Token& TokenStream::next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) {
        ++pos_;
    }
    return t;
}

bool TokenStream::at(std::string_view text) const {
    const Token& t = peek();
    return t.kind != TokenKind::End && t.kind != TokenKind::Number && t.text == text;
}

bool TokenStream::accept(std::string_view text) {
    if (at(text)) {
        next();
        return true;
    }
    return false;
}

const Token& TokenStream::expect(std::string_view text, std::string_view production) {
    if (!at(text)) {
        fail(fmt::format("'{}' in {}", text, production));
    }
    return next();
}

const Token& TokenStream::expect_ident(std::string_view production) {
    if (peek().kind != TokenKind::Ident) {
        fail(fmt::format("identifier in {}", production));
    }
    return next();
}

void TokenStream::fail(std::string_view expected) const {
    const Token& t = peek();
    const std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(fmt::format("expected {}, found {}", expected, found), t.line, t.column);
}

namespace {

struct Parsed {
    Expr e;
    bool int_literal = false; // possibly negated integer literal
    bool unsigned_int = false;
};

Parsed parse_sum(TokenStream& ts);
Parsed parse_unary(TokenStream& ts);

Expr parse_arg(TokenStream& ts) { return parse_sum(ts).e; }

Parsed parse_call(TokenStream& ts, const Token& name) {
    const std::string& f = name.text;
    if (f == "sum" || f == "prod") {
        const std::string index = ts.expect_ident(f).text;
        ts.expect(",", f);
        const Expr lo = parse_arg(ts);
        ts.expect(",", f);
        const Expr hi = parse_arg(ts);
        ts.expect(",", f);
        const Expr body = parse_arg(ts);
        ts.expect(")", f);
        return {f == "sum" ? sum(index, lo, hi, body) : prod(index, lo, hi, body)};
    }
    if (f == "min" || f == "max") {
        const std::string array = ts.expect_ident(f).text;
        ts.expect(")", f);
        return {f == "min" ? min_of(array) : max_of(array)};
    }
    if (f == "falling") {
        const Expr arg = parse_arg(ts);
        ts.expect(",", f);
        if (ts.peek().kind != TokenKind::Number || ts.peek().text.find('.') != std::string::npos) {
            ts.fail("natural degree in falling");
        }
        const unsigned degree = static_cast<unsigned>(std::stoul(ts.next().text));
        ts.expect(")", f);
        return {falling(arg, degree)};
    }
    if (f == "exp" || f == "power" || f == "log" || f == "ln") {
        const Expr first = parse_arg(ts);
        if (f != "ln" && ts.accept(",")) {
            const Expr second = parse_arg(ts);
            ts.expect(")", f);
            if (f == "log") {
                return {log(first, second)};
            }
            return {pow(first, second, f == "exp" ? PowerSpelling::ExpCall : PowerSpelling::PowerCall)};
        }
        ts.expect(")", f);
        if (f == "exp") {
            return {pow(euler(), first, PowerSpelling::ExpCall)};
        }
        if (f == "power") {
            ts.fail("',' in power");
        }
        return {ln(first)};
    }
    // metric(Arg) terms such as nat(N) or length(A) act as size variables.
    const Token& arg = ts.expect_ident("size metric term");
    ts.expect(")", "size metric term");
    return {var(f + "(" + arg.text + ")")};
}

Parsed parse_primary(TokenStream& ts) {
    const Token& t = ts.peek();
    if (t.kind == TokenKind::Number) {
        ts.next();
        const auto value = parse_rational(t.text);
        const bool is_int = t.text.find('.') == std::string::npos;
        return {constant(*value, t.text), is_int, is_int};
    }
    if (t.kind == TokenKind::Ident) {
        const Token name = ts.next();
        if (ts.accept("(")) {
            return parse_call(ts, name);
        }
        return {var(name.text)};
    }
    if (ts.accept("(")) {
        Parsed inner = parse_sum(ts);
        ts.expect(")", "parenthesized expression");
        return {inner.e};
    }
    ts.fail("expression");
}

Parsed parse_power(TokenStream& ts) {
    Parsed base = parse_primary(ts);
    if (ts.accept("**")) {
        const Parsed exponent = parse_unary(ts);
        return {pow(base.e, exponent.e)};
    }
    return base;
}

Parsed parse_unary(TokenStream& ts) {
    if (ts.accept("+")) {
        return parse_unary(ts);
    }
    if (ts.accept("-")) {
        Parsed operand = parse_unary(ts);
        if (const auto* c = operand.e.as<Const>()) {
            return {constant(-c->value, c->spelling), operand.int_literal, false};
        }
        return {-operand.e};
    }
    return parse_power(ts);
}

Parsed parse_mult(TokenStream& ts) {
    Parsed acc = parse_unary(ts);
    while (true) {
        if (ts.accept("*")) {
            acc = {acc.e * parse_unary(ts).e};
        } else if (ts.at("/")) {
            const Token& slash = ts.next();
            const Parsed rhs = parse_unary(ts);
            const auto* num = acc.e.as<Const>();
            const auto* den = rhs.e.as<Const>();
            if (acc.int_literal && rhs.unsigned_int && den->value != 0) {
                const std::string mag = num->spelling + "/" + den->spelling;
                acc = {constant(num->value / den->value, mag)};
                continue;
            }
            if (den && den->value == 0) {
                throw ParseError("division by the constant 0", slash.line, slash.column);
            }
            acc = {acc.e / rhs.e};
        } else {
            return acc;
        }
    }
}

Parsed parse_sum(TokenStream& ts) {
    Parsed acc = parse_mult(ts);
    while (true) {
        if (ts.accept("+")) {
            acc = {acc.e + parse_mult(ts).e};
        } else if (ts.accept("-")) {
            acc = {acc.e - parse_mult(ts).e};
        } else {
            return acc;
        }
    }
}

} // namespace

Expr parse_expr(TokenStream& ts) { return parse_sum(ts).e; }

Expr parse_expr(std::string_view text) {
    TokenStream ts(tokenize(text));
    Expr e = parse_expr(ts);
    if (!ts.at_end()) {
        ts.fail("end of expression");
    }
    return e;
}

} // namespace resbound
