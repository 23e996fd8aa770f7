// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resbound/assertlang.hpp"
#include "resbound/parser.hpp"
#include "resbound/verdict.hpp"
#include "oracle.hpp"

namespace resbound::testing {

struct Row {
    std::string id;
    std::string spec;
    std::string pred;
    std::vector<std::string> args;
    std::string arg;    // argument measured by x
    std::string metric; // nat or length
    std::optional<std::string> lb;
    std::optional<std::string> ub;
    // expected classes, "{}" when empty
    std::string f;
    std::string t;
    std::string c;
};

inline const char* kFib = "1.45*1.62**x+0.55*(-0.62)**x-1";
inline const char* kNrev = "0.5*x**2+1.5*x+1";
inline const char* kQsortUb = "sum(j,1,x,j*2**(x-j))+x*2**(x-1)+2*2**x-1";
inline const char* kPal = "x*2**(x-1)+2*2**x-1";
inline const char* kHanoi = "2**(x+1)-2";

inline std::vector<Row> table2_rows() {
    const std::vector<std::string> fib{"N", "R"};
    const std::vector<std::string> nrev{"A", "B"};
    const std::vector<std::string> client{"Op", "I", "B"};
    return {
        {"A1", ":- pred fib(N,R) + cost(ub,steps,exp(2,nat(N))-1000).", "fib", fib, "N", "nat", kFib, kFib,
         "[0,10]", "[11,inf]", "{}"},
        {"A2", ":- pred fib(N,R) + (cost(ub,steps,exp(2,nat(N))-1000), cost(lb,steps,exp(2,nat(N))-10000)).",
         "fib", fib, "N", "nat", kFib, kFib, "[0,10] U [15,inf]", "[11,13]", "[14,14]"},
        {"A3",
         ":- pred fib(N,R) : intervals(nat(N),[i(1,12)]) + (cost(ub,steps,exp(2,nat(N))-1000), "
         "cost(lb,steps,exp(2,nat(N))-10000)).",
         "fib", fib, "N", "nat", kFib, kFib, "[1,10]", "[11,12]", "{}"},
        {"B1", ":- pred nrev(A,B) + (cost(lb,steps,length(A)), cost(ub,steps,exp(length(A),2))).", "nrev", nrev,
         "A", "length", kNrev, kNrev, "[0,3]", "[4,inf]", "{}"},
        {"B2", ":- pred nrev(A,B) + (cost(lb,steps,length(A)), cost(ub,steps,10*length(A))).", "nrev", nrev, "A",
         "length", kNrev, kNrev, "[0,0] U [17,inf]", "[1,16]", "{}"},
        {"C1", ":- pred qsort(A,B) + cost(ub,steps,exp(length(A),2)).", "qsort", nrev, "A", "length", "x+5",
         kQsortUb, "[0,2]", "{}", "[3,inf]"},
        {"C2", ":- pred qsort(A,B) + cost(ub,steps,exp(length(A),3)).", "qsort", nrev, "A", "length", "x+5",
         kQsortUb, "", "", ""},
        {"D1", ":- pred main(Op,I,B) + cost(ub,bits_received,exp(length(I),2)).", "main", client, "I", "length",
         std::nullopt, "8*x", "{}", "[0,0] U [8,inf]", "[1,7]"},
        {"D2", ":- pred main(Op,I,B) + cost(ub,bits_received,10*length(I)).", "main", client, "I", "length",
         std::nullopt, "8*x", "{}", "[0,inf]", "{}"},
        {"D3",
         ":- pred main(Op,I,B) : intervals(length(I),[i(1,10),i(100,inf)]) + "
         "cost(ub,bits_received,10*length(I)).",
         "main", client, "I", "length", std::nullopt, "8*x", "{}", "[1,10] U [100,inf]", "{}"},
        {"E1", ":- pred reverse(A,B) + cost(ub,steps,500*length(A)).", "reverse", nrev, "A", "length", "x+2",
         "x+2", "[0,0]", "[1,inf]", "{}"},
        {"F1", ":- pred palindrome(X,Y) + cost(ub,output_elements,exp(length(X),2)).", "palindrome", {"X", "Y"},
         "X", "length", kPal, kPal, "[0,inf]", "{}", "{}"},
        {"F2", ":- pred palindrome(X,Y) + cost(ub,output_elements,exp(length(X),3)).", "palindrome", {"X", "Y"},
         "X", "length", kPal, kPal, "[0,2] U [5,inf]", "[3,4]", "{}"},
        {"G1", ":- pred powset(A,B) + cost(ub,output_elements,exp(length(A),4)).", "powset", nrev, "A", "length",
         std::nullopt, "0.5*2**(x+1)", "{}", "[2,16]", "[0,1] U [17,inf]"},
        {"H1", ":- pred hanoi(A,B,C,D) + costb(steps,exp(2,nat(A)-3)+2,exp(2,nat(A)-3)+30).", "hanoi",
         {"A", "B", "C", "D"}, "A", "nat", kHanoi, kHanoi, "[0,1] U [5,inf]", "[2,4]", "{}"},
    };
}

inline AnalysisResult analysis_of(const Row& r) {
    AnalysisResult a;
    a.pred = r.pred;
    a.args = r.args;
    a.size_vars = {{"x", r.arg, r.metric}};
    if (r.lb) {
        a.bounds.lower = parse_expr(*r.lb);
    }
    if (r.ub) {
        a.bounds.upper = parse_expr(*r.ub);
    }
    return a;
}

/// Hand-written reference bounds for each row.
inline BoundOracle oracle_of(const std::string& id) {
    const Fn fib = [](std::int64_t n) { return q(145, 100) * rpow(q(81, 50), n) + q(55, 100) * rpow(q(-31, 50), n) - 1; };
    const Fn nrev = [](std::int64_t n) { return q(1, 2) * n * n + q(3, 2) * n + 1; };
    const Fn qs_ub = [](std::int64_t n) {
        return loop_sum(1, n, [n](std::int64_t j) { return Rational(j) * rpow(2, n - j); }) + Rational(n) * rpow(2, n - 1) +
               2 * rpow(2, n) - 1;
    };
    const Fn pal = [](std::int64_t n) { return Rational(n) * rpow(2, n - 1) + 2 * rpow(2, n) - 1; };
    const Fn hanoi = [](std::int64_t n) { return rpow(2, n + 1) - 2; };
    const auto poly = [](std::int64_t c, int k) { return Fn([c, k](std::int64_t n) { return Rational(c) * rpow(Rational(n), k); }); };
    const Fn two_minus = [](std::int64_t n) { return rpow(2, n) - 1000; };
    const Fn two_minus_big = [](std::int64_t n) { return rpow(2, n) - 10000; };
    if (id == "A1") return {fib, fib, {}, two_minus};
    if (id == "A2" || id == "A3") return {fib, fib, two_minus_big, two_minus};
    if (id == "B1") return {nrev, nrev, poly(1, 1), poly(1, 2)};
    if (id == "B2") return {nrev, nrev, poly(1, 1), poly(10, 1)};
    if (id == "C1") return {[](std::int64_t n) { return Rational(n + 5); }, qs_ub, {}, poly(1, 2)};
    if (id == "C2") return {[](std::int64_t n) { return Rational(n + 5); }, qs_ub, {}, poly(1, 3)};
    if (id == "D1") return {{}, poly(8, 1), {}, poly(1, 2)};
    if (id == "D2" || id == "D3") return {{}, poly(8, 1), {}, poly(10, 1)};
    if (id == "E1") {
        const Fn r = [](std::int64_t n) { return Rational(n + 2); };
        return {r, r, {}, poly(500, 1)};
    }
    if (id == "F1") return {pal, pal, {}, poly(1, 2)};
    if (id == "F2") return {pal, pal, {}, poly(1, 3)};
    if (id == "G1") return {{}, [](std::int64_t n) { return rpow(2, n); }, {}, poly(1, 4)};
    return {hanoi, hanoi, [](std::int64_t n) { return rpow(2, n - 3) + 2; }, [](std::int64_t n) { return rpow(2, n - 3) + 30; }};
}

} // namespace resbound::testing
