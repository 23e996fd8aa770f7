// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <chrono>

#include <doctest.h>

#include "helpers.hpp"
#include "properties.hpp"
#include "resbound/errors.hpp"
#include "table2.hpp"

using namespace resbound;
using namespace resbound::testing;

namespace {

const std::optional<std::int64_t> inf;

NatIntervalSet crosscheck_domain(const NatIntervalSet& s) {
    const std::int64_t top = std::max<std::int64_t>(2 * s.max_finite_endpoint().value_or(0), 64);
    return truncate(s, top);
}

AnalysisResult single(const std::string& pred, const std::vector<std::string>& args, const std::string& arg,
                      const char* lb, const char* ub, const std::string& metric = "nat") {
    AnalysisResult a;
    a.pred = pred;
    a.args = args;
    a.size_vars = {{"x", arg, metric}};
    if (lb) {
        a.bounds.lower = parse_expr(lb);
    }
    if (ub) {
        a.bounds.upper = parse_expr(ub);
    }
    return a;
}

} // namespace

TEST_SUITE("verdict") {

TEST_CASE("table 2") {
    for (const auto& row : table2_rows()) {
        CAPTURE(row.id);
        const auto t0 = std::chrono::steady_clock::now();
        const auto p = check_assertion(parse_assertion(row.spec), analysis_of(row));
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        CHECK(ms < 1000);
        if (row.f.empty()) {
            continue; // C2: any oracle-consistent refinement
        }
        CHECK(to_string(p.falsity) == row.f);
        CHECK(to_string(p.truth) == row.t);
        CHECK(to_string(p.unknown) == row.c);
    }
}

TEST_CASE("table 2 soundness") {
    const auto r = fixture_soundness(200);
    CHECK_MESSAGE(r.ok(), r.summary());
}

TEST_CASE("hanoi") {
    const Assertion spec = parse_ciao(
        ":- check pred hanoi(A,B,C,D) : intervals(nat(A),[i(1,inf)]) + costb(steps,exp(2,nat(A)-3)+2,exp(2,nat(A)-3)+30).");
    const auto p = check_assertion(spec, single("hanoi", {"A", "B", "C", "D"}, "A", kHanoi, kHanoi));
    CHECK(p.falsity == NatIntervalSet{{1, 1}, {5, inf}});
    CHECK(p.truth == NatIntervalSet{{2, 4}});
    CHECK(p.unknown.empty());
}

TEST_CASE("vacuous specification") {
    const Assertion spec = parse_ciao(":- check pred p(A) : intervals(nat(A),[i(3,40)]) + costb(steps,0,inf).");
    const auto p = check_assertion(spec, single("p", {"A"}, "A", "x**2", "2**x"));
    CHECK(p.truth == NatIntervalSet{{3, 40}});
    CHECK(p.falsity.empty());
    CHECK(p.unknown.empty());
}

TEST_CASE("missing analysis upper bound") {
    const Assertion spec = parse_ciao(":- check pred p(A) + costb(steps,0,100).");
    const auto p = check_assertion(spec, single("p", {"A"}, "A", "x", nullptr));
    CHECK(p.truth.empty());
    CHECK(p.falsity == NatIntervalSet{{101, inf}});
}

TEST_CASE("lower default") {
    Assertion spec = parse_ciao(":- check pred p(A) + cost(ub,steps,50).");
    AnalysisResult a = single("p", {"A"}, "A", "x-10", "x-10");
    a.nonnegative = false;
    CHECK(check_assertion(spec, a).truth == NatIntervalSet{{10, 60}});
    spec.bounds.lower_default = LowerDefault::NegInf;
    CHECK(check_assertion(spec, a).truth == NatIntervalSet{{0, 60}});
}

TEST_CASE("unsupported functions are unknown") {
    const Assertion spec = parse_ciao(":- check pred p(A) : intervals(nat(A),[i(0,30)]) + costb(steps,0,100).");
    const auto p = check_assertion(spec, single("p", {"A"}, "A", "0", "max(xs)"));
    CHECK(p.unknown == NatIntervalSet{{0, 30}});
    const auto q = check_assertion(spec, single("p", {"A"}, "A", "0", "prod(j,1,x,j)"));
    CHECK(q.unknown == NatIntervalSet{{0, 30}});
}

TEST_CASE("map_variables") {
    const Assertion spec = parse_ciao(":- check pred nrev(A,B) + costb(steps,0,10*length(A)).");
    const auto m = map_variables(spec, single("nrev", {"X", "Y"}, "X", "x", "x**2", "length"));
    CHECK(to_string(*m.bounds.upper) == "length(A)**2");
    CHECK_THROWS_AS(map_variables(spec, single("nrev", {"X"}, "X", "x", "x", "length")), PredicateMismatch);
    CHECK_THROWS_AS(map_variables(spec, single("rev", {"X", "Y"}, "X", "x", "x", "length")), PredicateMismatch);
    CHECK_THROWS_AS(map_variables(spec, single("nrev", {"X", "Y"}, "X", "x", "x", "nat")), MetricMismatch);
}

TEST_CASE("multi-variable") {
    const Assertion spec = parse_ciao(":- check pred inc_append(A,B,C) + (cost(ub,steps,2*length(A)-10)).");
    AnalysisResult a;
    a.pred = "inc_append";
    a.args = {"A", "B", "C"};
    a.size_vars = {{"a", "A", "length"}, {"b", "B", "length"}};
    a.bounds.lower = a.bounds.upper = parse_expr("b+a+3");
    const auto p = check_assertion(spec, a);
    CHECK(p.multivariable);
    REQUIRE(p.true_regions.size() == 1);
    REQUIRE(p.false_regions.size() == 1);
    CHECK(to_string(p.true_regions[0]) == "[leq(13,length(A)-length(B))]");
    CHECK(to_string(p.false_regions[0]) == "[lt(-13,-length(A)+length(B))]");
    CHECK(partition_coverage(p).ok());

    a.bounds.upper = parse_expr("a*b");
    const auto n = check_assertion(spec, a);
    CHECK(n.true_regions.empty());
    CHECK(n.false_regions.empty());
    CHECK_FALSE(n.unknown_regions.empty());
}

TEST_CASE("eval_check") {
    const auto rows = table2_rows();
    const auto& a3 = rows[2];
    const auto e = eval_check(parse_assertion(a3.spec), analysis_of(a3), NatIntervalSet{{1, 12}});
    CHECK(e.falsity == NatIntervalSet{{1, 10}});
    CHECK(e.truth == NatIntervalSet{{11, 12}});

    const auto& d3 = rows[9];
    const NatIntervalSet s{{1, 10}, {100, 120}};
    const auto d = eval_check(parse_assertion(d3.spec), analysis_of(d3), s);
    CHECK(d.truth == s);
    CHECK(d.falsity.empty());

    const auto empty = eval_check(parse_assertion(d3.spec), analysis_of(d3), NatIntervalSet{});
    CHECK(empty.entries().empty());
    CHECK_THROWS_AS(eval_check(parse_assertion(d3.spec), analysis_of(d3), NatIntervalSet::all()), DomainUnbounded);
}

TEST_CASE("root and eval agree") {
    for (const auto& row : table2_rows()) {
        if (row.id == "A2") {
            continue;
        }
        CAPTURE(row.id);
        const Assertion spec = parse_assertion(row.spec);
        const auto root = check_assertion(spec, analysis_of(row));
        const NatIntervalSet s = crosscheck_domain(root.domain);
        const auto eval = eval_check(spec, analysis_of(row), s);
        CHECK(intersect(root.truth, s) == eval.truth);
        CHECK(intersect(root.falsity, s) == eval.falsity);
        CHECK(intersect(root.unknown, s) == eval.unknown);
    }
}

TEST_CASE("A2 differs from pointwise evaluation only at 14") {
    const auto row = table2_rows()[1];
    const Assertion spec = parse_assertion(row.spec);
    const NatIntervalSet s{{0, 64}};
    const auto root = check_assertion(spec, analysis_of(row));
    const auto eval = eval_check(spec, analysis_of(row), s);
    CHECK(intersect(root.unknown, s) == NatIntervalSet{{14, 14}});
    CHECK(eval.unknown.empty());
    CHECK(eval.falsity == unite(intersect(root.falsity, s), NatIntervalSet{{14, 14}}));
    CHECK(eval.truth == intersect(root.truth, s));
}

TEST_CASE("shrinking S only removes points") {
    for (const auto& row : table2_rows()) {
        CAPTURE(row.id);
        Assertion spec = parse_assertion(row.spec);
        const auto wide = check_assertion(spec, analysis_of(row));
        const Expr size = spec.precond.intervals ? spec.precond.intervals->size : parse_expr("x");
        spec.precond.intervals = IntervalPrecond{size, intersect(wide.domain, NatIntervalSet{{3, 9}, {20, 40}})};
        const auto narrow = check_assertion(spec, analysis_of(row));
        CHECK(intersect(narrow.truth, wide.falsity).empty());
        CHECK(intersect(narrow.falsity, wide.truth).empty());
        CHECK(partition_coverage(narrow).ok());
    }
}

TEST_CASE("root versus eval on fixed domains") {
    for (const char* id : {"A3", "D3"}) {
        for (std::int64_t hi : {12, 100}) {
            CAPTURE(id);
            CAPTURE(hi);
            const auto r = root_vs_eval(id, NatIntervalSet{{1, hi}});
            if (std::string(id) == "A3" && hi == 100) {
                // the pointwise False at 14 is not reproduced by the universal form
                CHECK_FALSE(r.ok());
            } else {
                CHECK_MESSAGE(r.ok(), r.summary());
            }
        }
    }
}

TEST_CASE("synthesize_output") {
    const Assertion fact = parse_ciao(
        ":- check pred fact(N,Ret) : intervals(nat(N),[i(1,inf)]) + costb(energy_nJ,6.0,2.3*nat(N)+9.0).");
    const auto p = check_assertion(fact, single("fact", {"N", "Ret"}, "N", "2.845*x+1.94", "2.845*x+1.94"));
    const auto out = synthesize_output(fact, p);
    REQUIRE(out.size() == 2);
    CHECK(emit(out[0]) ==
          ":- false pred fact(N,Ret) : intervals(nat(N),[i(1,1),i(13,inf)]) + costb(energy_nJ,6.0,2.3*nat(N)+9.0).");
    CHECK(emit(out[1]) ==
          ":- checked pred fact(N,Ret) : intervals(nat(N),[i(2,12)]) + costb(energy_nJ,6.0,2.3*nat(N)+9.0).");

    const Assertion log = parse_ciao(":- check pred simple_log(N,_) + costb(steps,0,3000).");
    const auto l = synthesize_output(log, check_assertion(log, single("simple_log", {"N", "S"}, "N",
                                                                      "log(2,x/8)+4", "log(2,x/8)+4")));
    REQUIRE(l.size() == 2);
    CHECK(l[0].status == Status::Checked);
    CHECK(l[0].precond.intervals->set == NatIntervalSet{{0, 23968}});
    CHECK(l[1].status == Status::Check);
    CHECK(l[1].precond.intervals->set == NatIntervalSet{{23969, inf}});

    const Assertion all = parse_ciao(":- check pred p(A) : (list(A)) + costb(steps,0,100).");
    const auto u = synthesize_output(all, check_assertion(all, single("p", {"A"}, "A", "0", "max(xs)")));
    REQUIRE(u.size() == 1);
    CHECK(emit(u[0]) == emit(all));
}

} // TEST_SUITE
