// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "oracle.hpp"
#include "resbound/errors.hpp"
#include "resbound/normal_form.hpp"

using namespace resbound;
using namespace resbound::testing;

TEST_SUITE("expr") {

TEST_CASE("evaluate") {
    CHECK(exact_at("2**x", at_x(3)) == 8);
    CHECK(exact_at("0.5*x**2+1.5*x+1", at_x(4)) == 15);
    // 11 + 12 + 15
    CHECK(exact_at("sum(j,1,x,j*2**(x-j))+x*2**(x-1)+2*2**x-1", at_x(3)) == 38);
    CHECK(exact_at("sum(j,5,x,j)", at_x(3)) == 0);
    CHECK(exact_at("prod(j,5,x,j)", at_x(3)) == 1);
    CHECK(exact_at("prod(j,1,x,j)", at_x(5)) == 120);
    CHECK(exact_at("(-0.62)**x", at_x(2)) == q(961, 2500));
    CHECK(exact_at("3/2*x", at_x(4)) == 6);
    CHECK(exact_at("log(2,x)", at_x(32)) == 5);
}

TEST_CASE("evaluate errors") {
    CHECK_THROWS_AS(evaluate(parse_expr("x+y"), at_x(1)), UnboundVariable);
    CHECK_THROWS_AS(evaluate(parse_expr("log(2,x)"), at_x(-1)), DomainError);
    CHECK_THROWS_AS(evaluate(parse_expr("1/(x-1)"), at_x(1)), DomainError);
    CHECK_THROWS_AS(evaluate(parse_expr("min(xs)+1"), at_x(1)), MinMaxUnsupported);
    CHECK_THROWS_AS(constant(1) / constant(0), DomainError);
    CHECK_THROWS_AS(parse_expr("1/0"), ParseError);
}

TEST_CASE("irrational values are flagged inexact") {
    const ExtReal v = evaluate(parse_expr("2**(x/2)"), at_x(1));
    CHECK_FALSE(v.is_exact());
    CHECK(v.to_double() == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(evaluate(parse_expr("log(2,x)"), at_x(3)).is_exact());
}

TEST_CASE("extended reals") {
    const ExtReal inf = ExtReal::pos_inf();
    CHECK((inf + ExtReal::exact(5)).kind() == ExtReal::Kind::PosInf);
    CHECK((-inf).kind() == ExtReal::Kind::NegInf);
    CHECK(compare(ExtReal::neg_inf(), ExtReal::exact(-1000)) < 0);
    CHECK(compare(ExtReal::exact(q(1, 3)), ExtReal::approx(0.3)) > 0);
    CHECK((ExtReal::exact(-2) * inf).kind() == ExtReal::Kind::NegInf);
}

TEST_CASE("differentiate") {
    CHECK(normalize(differentiate(parse_expr("x**2"), "x")) == normalize(parse_expr("2*x")));
    const Expr d = differentiate(parse_expr("2**x"), "x");
    CHECK(evaluate_numeric(d, {{"x", 3.0}}) == doctest::Approx(std::log(2.0) * 8));
    const Expr p = differentiate(parse_expr("x*2**(x-1)"), "x");
    CHECK(evaluate_numeric(p, {{"x", 3.0}}) == doctest::Approx(4 + std::log(2.0) * 12));
    CHECK_THROWS_AS(differentiate(parse_expr("sum(j,1,x,j)"), "x"), UnsupportedForm);
}

TEST_CASE("differentiate agrees with central differences") {
    const char* fixtures[] = {"x**3-4*x+7", "2**x", "3*1.5**(2*x-1)", "x*2**(x-1)", "log(2,x+1)",
                              "x**2*log(2,x)", "0.5*x**2+1.5*x+1", "exp(x)"};
    constexpr double h = 1e-6;
    for (const char* f : fixtures) {
        CAPTURE(f);
        const Expr e = parse_expr(f);
        const Expr d = differentiate(e, "x");
        for (double x : {1.0, 2.0, 5.0, 10.0}) {
            const double num =
                (evaluate_numeric(e, {{"x", x + h}}) - evaluate_numeric(e, {{"x", x - h}})) / (2 * h);
            const double sym = evaluate_numeric(d, {{"x", x}});
            CHECK(std::abs(num - sym) / std::max(1.0, std::abs(sym)) <= 1e-6);
        }
    }
}

TEST_CASE("discrete derivative") {
    CHECK(to_string(normalize(discrete_derivative(parse_expr("2**x"), "x"))) ==
          to_string(normalize(parse_expr("2**x"))));
    CHECK(normalize(discrete_derivative(parse_expr("falling(x,2)"), "x")) == normalize(parse_expr("2*x")));
    CHECK(to_string(normalize(discrete_derivative(parse_expr("7"), "x"))) == "0");

    const char* forms[] = {"falling(x,3)", "x**4", "2**x", "3**(2*x+1)", "x*2**(a-x)", "log(2,x+1)", "1/(x+1)"};
    for (const char* f : forms) {
        CAPTURE(f);
        const Expr e = parse_expr(f);
        const Expr d = discrete_derivative(e, "x");
        for (std::int64_t n = 0; n <= 30; ++n) {
            Env env = at_x(n);
            Env next = at_x(n + 1);
            env["a"] = next["a"] = 4;
            const ExtReal want = evaluate(e, next) - evaluate(e, env);
            const ExtReal got = evaluate(d, env);
            if (want.is_exact() && got.is_exact()) {
                CHECK(got.exact_value() == want.exact_value());
            } else {
                CHECK(got.to_double() == doctest::Approx(want.to_double()).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("normalize") {
    CHECK(normalize(parse_expr("x+x")) == normalize(parse_expr("2*x")));
    CHECK(normalize(parse_expr("(x+1)**2")) == normalize(parse_expr("x**2+2*x+1")));
    CHECK(to_string(normalize(parse_expr("2**(x+1)-2*2**x"))) == "0");
    const Expr once = normalize(parse_expr("(x+y)*(x-y)*2**(x+3)+log(2,x)*3-x"));
    CHECK(normalize(once) == once);
}

TEST_CASE("normalize preserves values") {
    std::mt19937_64 rng(test_seed());
    for (int i = 0; i < 200; ++i) {
        const TermSum a = random_terms(rng);
        const TermSum b = random_terms(rng);
        const std::string text = "(" + render_terms(a) + ")*(" + render_terms(b) + ")-(" + render_terms(b) + ")";
        const Expr e = parse_expr(text);
        const Expr n = normalize(e);
        for (std::int64_t x = 0; x <= 6; ++x) {
            CHECK(exact_at(n, at_x(x)) == exact_at(e, at_x(x)));
        }
    }
}

TEST_CASE("as_polynomial") {
    const auto c = as_polynomial(normalize(parse_expr("0.5*x**2+1.5*x+1")), "x");
    REQUIRE(c);
    CHECK(*c == std::vector<Rational>{1, q(3, 2), q(1, 2)});
    CHECK_FALSE(as_polynomial(normalize(parse_expr("2**x")), "x"));
    CHECK(*as_polynomial(normalize(parse_expr("7")), "x") == std::vector<Rational>{7});
    const Expr rebuilt = from_coefficients(*c, "x");
    CHECK(exact_at(rebuilt, at_x(9)) == exact_at("0.5*x**2+1.5*x+1", at_x(9)));
}

TEST_CASE("taylor_exponential") {
    CHECK(normalize(taylor_exponential(parse_expr("exp(x)"), "x", 2)) == normalize(parse_expr("1+x+x**2/2")));
    const Expr t1 = taylor_exponential(parse_expr("2**x"), "x", 1);
    CHECK(evaluate_numeric(t1, {{"x", 2.0}}) == doctest::Approx(1 + 2 * std::log(2.0)));
    CHECK(to_string(normalize(taylor_exponential(parse_expr("1**x"), "x", 8))) == "1");
    const Expr t8 = taylor_exponential(parse_expr("exp(x)"), "x", 8);
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        CHECK(std::abs(evaluate_numeric(t8, {{"x", x}}) - std::exp(x)) / std::exp(x) <= 1e-4);
    }
    CHECK_THROWS_AS(taylor_exponential(parse_expr("x**x"), "x", 8), UnsupportedForm);
    CHECK_THROWS_AS(taylor_exponential(parse_expr("2**log(2,x)"), "x", 8), UnsupportedForm);
}

TEST_CASE("parser grammar") {
    CHECK(parse_expr("-x+ +3") == parse_expr("-x+3"));
    CHECK(exact_at("2**3**2", {}) == 512);
    CHECK(exact_at("10-4-3", {}) == 3);
    CHECK(exact_at("exp(2,3)", {}) == 8);
    CHECK(parse_expr("min(xs)").is<MinOf>());
    CHECK(parse_expr("max(xs)").is<MaxOf>());
    CHECK(parse_expr("sum(i,1,n,i)").is<Summation>());
    CHECK(parse_expr("prod(i,1,n,i)").is<Product>());
    CHECK(parse_expr("log(2,n)").is<Log>());
    CHECK_THROWS_AS(parse_expr("x+"), ParseError);
    CHECK_THROWS_AS(parse_expr("x $ 2"), ParseError);
    CHECK_THROWS_AS(parse_expr("(x"), ParseError);
    for (const char* s : {"2.3*n+9.0", "sum(j,1,x,j*2**(x-j))", "log(2,n/8)+4", "exp(2,nat(N))-1000", "3/2"}) {
        CHECK(parse_expr(to_string(parse_expr(s))) == parse_expr(s));
    }
}

} // TEST_SUITE
