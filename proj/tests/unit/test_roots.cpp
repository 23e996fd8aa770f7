// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "oracle.hpp"
#include "properties.hpp"
#include "resbound/errors.hpp"
#include "resbound/normal_form.hpp"
#include "resbound/roots.hpp"

using namespace resbound;
using namespace resbound::testing;

namespace {

std::vector<double> values(const RootSet& rs) {
    std::vector<double> out;
    for (const auto& r : rs.roots) {
        out.push_back(r.value);
    }
    return out;
}

Rational horner(const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

// Ascending coefficients of prod (x - r_i).
std::vector<Rational> from_roots(const std::vector<Rational>& rs) {
    std::vector<Rational> c{1};
    for (const auto& r : rs) {
        std::vector<Rational> next(c.size() + 1, Rational(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

} // namespace

TEST_SUITE("roots") {

TEST_CASE("poly_roots examples") {
    const auto a = poly_roots(std::vector<Rational>{2, -3, 1});
    REQUIRE(a.roots.size() == 2);
    CHECK(a.roots[0].exact == Rational(1));
    CHECK(a.roots[1].exact == Rational(2));
    const auto b = poly_roots(std::vector<Rational>{-5, 1});
    REQUIRE(b.roots.size() == 1);
    CHECK(b.roots[0].exact == Rational(5));
    CHECK(poly_roots(std::vector<Rational>{1, 0, 1}).roots.empty());
    CHECK_THROWS_AS(poly_roots(std::vector<Rational>{0, 0}), ZeroPolynomial);
    CHECK(to_string(a) == "{1 (exact), 2 (exact)} analytic");
}

TEST_CASE("poly_roots discards negative roots") {
    // (x+3)(x-4)(x+1/2)
    const auto rs = poly_roots(from_roots({-3, 4, q(-1, 2)}));
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].value == doctest::Approx(4));
}

TEST_CASE("exact roots are exact zeros") {
    const std::vector<std::vector<Rational>> polys = {
        {2, -3, 1}, {-6, 11, -6, 1}, {24, -50, 35, -10, 1}, {0, 0, 1}, {-2, 0, 1}, {q(-3, 4), 1}};
    for (const auto& p : polys) {
        for (const auto& r : poly_roots(p).roots) {
            if (r.exact) {
                CHECK(horner(p, *r.exact) == 0);
            } else {
                CHECK(std::abs(to_double(horner(p, from_double(r.value)))) <= 1e-9);
            }
        }
    }
}

TEST_CASE("random factorable polynomials up to degree 6") {
    std::mt19937_64 rng(test_seed());
    std::uniform_int_distribution<int> root(0, 400);
    std::uniform_int_distribution<int> degree(1, 6);
    for (int i = 0; i < 150; ++i) {
        std::vector<Rational> rs;
        const int d = degree(rng);
        for (int k = 0; k < d; ++k) {
            rs.push_back(q(root(rng), 4));
        }
        std::sort(rs.begin(), rs.end());
        rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
        const auto got = values(poly_roots(from_roots(rs)));
        CAPTURE(i);
        REQUIRE(got.size() == rs.size());
        for (std::size_t k = 0; k < rs.size(); ++k) {
            CHECK(std::abs(got[k] - to_double(rs[k])) <= 1e-6);
        }
    }
}

TEST_CASE("sturm agrees with poly_roots") {
    const std::vector<Rational> p = from_roots({1, 2, 3, 5, 8, 13});
    CHECK(sturm_count(p, -1, std::nullopt) == 6);
    CHECK(sturm_count(p, 2, Rational(8)) == 3);
    const auto s = values(sturm_roots(p));
    const auto a = values(poly_roots(p));
    REQUIRE(s.size() == a.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i] == doctest::Approx(a[i]).epsilon(1e-9));
    }
}

TEST_CASE("classify_position") {
    const SafeRootConfig cfg;
    CHECK(classify_position(parse_expr("x-2"), "x", 1.9, cfg) == RootPosition::ExactIsRight);
    CHECK(classify_position(parse_expr("x-2"), "x", 2.1, cfg) == RootPosition::ExactIsLeft);
    CHECK(classify_position(parse_expr("2-x"), "x", 1.9, cfg) == RootPosition::ExactIsRight);
    CHECK(classify_position(parse_expr("2-x"), "x", 2.1, cfg) == RootPosition::ExactIsLeft);
    CHECK(classify_position(parse_expr("x-2"), "x", 2.0, cfg) == RootPosition::ExactIsLeft);
}

TEST_CASE("safe_root") {
    const SafeRootConfig cfg;
    const Expr fib = parse_expr("(2**x-1000)-(1.45*1.62**x-1)");
    const double below = safe_root(fib, "x", 10.89, RequiredSide::RootAtOrBelow, cfg);
    CHECK(below == doctest::Approx(10.2).epsilon(0.01));
    CHECK(evaluate_numeric(fib, {{"x", below}}) < 0);
    CHECK(nat_snap(below, SnapDirection::TowardUpper) == 10);

    const double past = safe_root(parse_expr("x-2"), "x", 1.95, RequiredSide::RootAtOrAbove, cfg);
    CHECK(past >= 2.0);
    CHECK(past < 2.0 + cfg.delta);
    CHECK(safe_root(parse_expr("x-2"), "x", 1.95, RequiredSide::RootAtOrBelow, cfg) == 1.95);
}

TEST_CASE("safe_root side property") {
    const auto r = safe_root_side(100, test_seed());
    CHECK_MESSAGE(r.ok(), r.summary());
}

TEST_CASE("nat_snap") {
    CHECK(nat_snap(10.18, SnapDirection::TowardUpper) == 10);
    CHECK(nat_snap(1.09311, SnapDirection::TowardLower) == 2);
    CHECK(nat_snap(4.0, SnapDirection::TowardLower) == 4);
    CHECK(nat_snap(4.0, SnapDirection::TowardUpper) == 4);
}

} // TEST_SUITE

TEST_SUITE("intervals") {

TEST_CASE("nat_round") {
    CHECK(nat_round(1.09311, 4.09311) == NatInterval{2, 4});
    CHECK(nat_round(3.0, 3.0) == NatInterval{3, 3});
    CHECK_FALSE(nat_round(2.2, 2.8));
    CHECK(nat_round(0.5, std::nullopt) == NatInterval{1, std::nullopt});
}

TEST_CASE("interval ops") {
    const auto all_from_1 = NatIntervalSet::range(1, std::nullopt);
    CHECK(complement_in(NatIntervalSet{{2, 4}}, all_from_1) == NatIntervalSet{{1, 1}, {5, std::nullopt}});
    CHECK(intersect(NatIntervalSet{{1, 16}}, NatIntervalSet::all()) == NatIntervalSet{{1, 16}});
    CHECK(unite(NatIntervalSet{{0, 0}}, NatIntervalSet{{1, 16}}) == NatIntervalSet{{0, 16}});
    CHECK(NatIntervalSet{{5, 7}, {2, 4}} == NatIntervalSet{{2, 7}});
    CHECK(to_string(NatIntervalSet{{0, 10}, {15, std::nullopt}}) == "[0,10] U [15,inf]");
    CHECK(to_string(NatIntervalSet{}) == "{}");
    CHECK(truncate(NatIntervalSet::all(), 64) == NatIntervalSet{{0, 64}});
    CHECK(NatIntervalSet{{1, 10}, {100, 120}}.size() == 31);
    CHECK_FALSE(NatIntervalSet::all().size());
}

TEST_CASE("complement covers") {
    std::mt19937_64 rng(test_seed());
    std::uniform_int_distribution<int> d(0, 40);
    for (int i = 0; i < 300; ++i) {
        std::vector<NatInterval> a;
        std::vector<NatInterval> s;
        for (int k = 0; k < 3; ++k) {
            const std::int64_t lo = d(rng);
            a.push_back({lo, lo + d(rng) / 4});
            const std::int64_t slo = d(rng);
            s.push_back({slo, slo + d(rng)});
        }
        const NatIntervalSet sa(a);
        const NatIntervalSet ss(s);
        const auto c = complement_in(sa, ss);
        CHECK(unite(c, intersect(sa, ss)) == ss);
        CHECK(intersect(c, sa).empty());
        for (std::int64_t n = 0; n <= 90; ++n) {
            CHECK(unite(sa, ss).contains(n) == (sa.contains(n) || ss.contains(n)));
        }
    }
}

} // TEST_SUITE
