// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <doctest.h>

#include "resbound/expr.hpp"
#include "resbound/parser.hpp"

namespace resbound::testing {

inline Rational exact_at(const std::string& text, const Env& env) {
    const ExtReal v = evaluate(parse_expr(text), env);
    REQUIRE(v.is_exact());
    return v.exact_value();
}

inline Rational exact_at(const Expr& e, const Env& env) {
    const ExtReal v = evaluate(e, env);
    REQUIRE(v.is_exact());
    return v.exact_value();
}

inline Env at_x(std::int64_t n) { return {{"x", Rational(n)}}; }

} // namespace resbound::testing
