// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. Criteria listed in
// kKnownDeviations are expected to fail; the process exits non-zero when any
// other criterion fails or when a known deviation starts passing.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "job.hpp"
#include "oracle.hpp"
#include "properties.hpp"
#include "resbound/compare.hpp"
#include "resbound/errors.hpp"
#include "resbound/roots.hpp"
#include "table2.hpp"

using namespace resbound;
using namespace resbound::testing;

namespace {

// pinned tolerances and sizes
constexpr double kMaxMillisPerAssertion = 1000;
constexpr double kMaxSuiteSeconds = 60;
constexpr std::int64_t kPointsPerRegion = 1000;
constexpr std::size_t kFuzzPairs = 200;
constexpr std::size_t kSafeRootCases = 100;
constexpr unsigned kMaxFallingDegree = 8;
constexpr std::size_t kRoundTrips = 500;
constexpr std::int64_t kClosedFormMaxA = 15;

const std::set<std::string> kKnownDeviations = {"2f", "4b"};

const std::optional<std::int64_t> inf;

struct Result {
    bool pass = false;
    std::string detail;
};

struct Runner {
    int unexpected = 0;
    std::vector<VerdictPartition> partitions;

    void run(const std::string& id, const std::string& title, const std::function<Result()>& body) {
        Result o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool known = kKnownDeviations.count(id) > 0;
        std::string tag;
        if (!o.pass && known) {
            tag = " [known deviation]";
        } else if (o.pass && known) {
            tag = " [known deviation now passes]";
            ++unexpected;
        } else if (!o.pass) {
            ++unexpected;
        }
        fmt::print("{} {:<3} {} ({:.2f} s){}\n", o.pass ? "PASS" : "FAIL", id, title, s, tag);
        if (!o.detail.empty()) {
            fmt::print("         {}\n", o.detail);
        }
        std::fflush(stdout);
    }
};


std::string classes(const VerdictPartition& p) {
    return fmt::format("F {} T {} C {}", to_string(p.falsity), to_string(p.truth), to_string(p.unknown));
}

AnalysisResult single(const std::string& pred, const std::vector<std::string>& args, const std::string& arg,
                      const char* lb, const char* ub) {
    AnalysisResult a;
    a.pred = pred;
    a.args = args;
    a.size_vars = {{"x", arg, "nat"}};
    a.bounds.lower = parse_expr(lb);
    a.bounds.upper = parse_expr(ub);
    return a;
}

Result table2(Runner& run) {
    std::vector<std::string> bad;
    double worst = 0;
    for (const auto& row : table2_rows()) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto p = check_assertion(parse_assertion(row.spec), analysis_of(row));
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        worst = std::max(worst, ms);
        run.partitions.push_back(p);
        if (ms >= kMaxMillisPerAssertion) {
            bad.push_back(fmt::format("{} took {:.1f} ms", row.id, ms));
        }
        if (row.f.empty()) {
            // any refinement the pointwise oracle accepts
            PropertyResult r;
            const auto o = oracle_of(row.id);
            for (const auto& [set, want] : {std::pair{p.truth, Point::True}, std::pair{p.falsity, Point::False}}) {
                for (const auto& iv : set.intervals()) {
                    const std::int64_t hi = iv.hi ? std::min(*iv.hi, iv.lo + kPointsPerRegion) : iv.lo + kPointsPerRegion;
                    for (std::int64_t n = iv.lo; n <= hi; ++n) {
                        if (classify(o, n) != want) {
                            r.fail(fmt::format("{} at {}", row.id, n));
                        }
                    }
                }
            }
            if (!r.ok() || !partition_coverage(p).ok()) {
                bad.push_back(row.id + " refinement rejected by oracle");
            }
            continue;
        }
        if (to_string(p.falsity) != row.f || to_string(p.truth) != row.t || to_string(p.unknown) != row.c) {
            bad.push_back(row.id + ": " + classes(p));
        }
    }
    if (!bad.empty()) {
        return {false, fmt::format("{} mismatches: {}", bad.size(), fmt::join(bad, "; "))};
    }
    return {true, fmt::format("15/15 rows, slowest {:.2f} ms", worst)};
}

Result fact(Runner& run) {
    const Assertion spec =
        parse_assertion("#pragma check fact(n) : (1 <= n) ==> (6.0 <= energy_nJ <= 2.3*n+9.0)");
    AnalysisResult a = single("fact", {"n"}, "n", "2.845*x+1.94", "2.845*x+1.94");
    const auto p = check_assertion(spec, a);
    run.partitions.push_back(p);
    const bool ok = p.truth == NatIntervalSet{{2, 12}} && p.falsity == NatIntervalSet{{1, 1}, {13, inf}} &&
                    p.unknown.empty();
    return {ok, classes(p)};
}

Result hanoi(Runner& run) {
    const auto from1 = NatIntervalSet::range(1, inf);
    const auto lower = leq_f(parse_expr("2**(x-3)+2"), parse_expr(kHanoi), from1).satisfied;
    const auto upper = leq_f(parse_expr(kHanoi), parse_expr("2**(x-3)+30"), from1).satisfied;
    const auto both = intersect(lower, upper);
    const auto rounded = nat_round(1.09311, 4.09311);
    const Assertion spec = parse_assertion(
        ":- check pred hanoi(A,B,C,D) : intervals(nat(A),[i(1,inf)]) + costb(steps,exp(2,nat(A)-3)+2,exp(2,nat(A)-3)+30).");
    const auto p = check_assertion(spec, single("hanoi", {"A", "B", "C", "D"}, "A", kHanoi, kHanoi));
    run.partitions.push_back(p);
    const bool ok = both == NatIntervalSet{{2, 4}} && rounded == NatInterval{2, 4} && p.truth == NatIntervalSet{{2, 4}};
    return {ok, fmt::format("conjunction {}, rounding {}, verdict {}", to_string(both),
                            rounded ? to_string(*rounded) : "none", classes(p))};
}

Result simple_log(Runner& run) {
    const Assertion spec = parse_assertion(":- check pred simple_log(N,_) + costb(steps,0,3000).");
    const auto p = check_assertion(spec, single("simple_log", {"N", "S"}, "N", "log(2,x/8)+4", "log(2,x/8)+4"));
    run.partitions.push_back(p);
    const auto out = synthesize_output(spec, p);
    const bool ok = p.truth == NatIntervalSet{{0, 23968}} && p.unknown == NatIntervalSet{{23969, inf}} &&
                    out.size() == 2 && out[0].status == Status::Checked && out[1].status == Status::Check;
    return {ok, classes(p)};
}

Result fib(Runner& run) {
    const Expr f = parse_expr("(2**x-1000)-(1.45*1.62**x-1)");
    const double safe = safe_root(f, "x", 10.89, RequiredSide::RootAtOrBelow, SafeRootConfig{});
    const std::int64_t boundary = nat_snap(safe, SnapDirection::TowardUpper);
    const auto row = table2_rows()[0];
    const auto p = check_assertion(parse_assertion(row.spec), analysis_of(row));
    run.partitions.push_back(p);
    const bool ok = boundary == 10 && p.falsity == NatIntervalSet{{0, 10}} && p.truth == NatIntervalSet{{11, inf}};
    return {ok, fmt::format("safe root {:.4f} -> {}, {}", safe, boundary, classes(p))};
}

Result inc_append(Runner& run) {
    const Assertion spec = parse_assertion(":- check pred inc_append(A,B,C) + (cost(ub,steps,2*length(A)-10)).");
    AnalysisResult a;
    a.pred = "inc_append";
    a.args = {"A", "B", "C"};
    a.size_vars = {{"a", "A", "length"}, {"b", "B", "length"}};
    a.bounds.lower = a.bounds.upper = parse_expr("b+a+3");
    const auto p = check_assertion(spec, a);
    run.partitions.push_back(p);
    std::string text;
    for (const auto& o : synthesize_output(spec, p)) {
        text += emit(o) + "\n";
    }
    const bool ok = text.find("intervals([[leq(13,length(A)-length(B))]])") != std::string::npos &&
                    text.find("intervals([[lt(-13,-length(A)+length(B))]])") != std::string::npos;
    return {ok, ok ? "" : text};
}

Result biquad(Runner& run) {
    const Assertion spec =
        parse_assertion("#pragma check biquadCascade(state,xn,N) : (1 <= N) ==> (energy_nJ <= 122)");
    const auto p = check_assertion(spec, single("biquadCascade", {"A", "B", "C"}, "C", "16.502*x+5.445",
                                                "16.652*x+5.445"));
    run.partitions.push_back(p);
    const bool ok = p.truth == NatIntervalSet{{1, 7}} && p.falsity == NatIntervalSet{{8, inf}} && p.unknown.empty();
    return {ok, classes(p) + "; upper bound at N=7 is 16.652*7+5.445 = 122.009 > 122"};
}

Result from(const PropertyResult& r) { return {r.ok(), r.summary()}; }

Result root_vs_eval_all() {
    std::vector<std::string> differing;
    PropertyResult all;
    for (const char* id : {"A3", "D3"}) {
        for (std::int64_t hi : {12, 100, 1000}) {
            const auto r = root_vs_eval(id, NatIntervalSet{{1, hi}});
            all.merge(r);
            if (!r.ok()) {
                differing.push_back(fmt::format("{} on [1,{}]", id, hi));
            }
        }
    }
    if (differing.empty()) {
        return {true, all.summary()};
    }
    return {false, fmt::format("disagree: {}\n         {}", fmt::join(differing, ", "), all.summary())};
}

Result coverage(const Runner& run) {
    PropertyResult r;
    for (const auto& p : run.partitions) {
        r.merge(partition_coverage(p));
    }
    // plus Eval partitions and the fuzzed verdicts
    for (const auto& row : table2_rows()) {
        const Assertion spec = parse_assertion(row.spec);
        r.merge(partition_coverage(eval_check(spec, analysis_of(row), truncate(spec_domain(spec), 200))));
    }
    std::mt19937_64 rng(test_seed());
    for (std::size_t i = 0; i < kFuzzPairs; ++i) {
        Assertion spec;
        spec.scope = {"p", {"x"}};
        spec.syntax = Syntax::XC;
        const std::string lo = render_terms(random_terms(rng));
        spec.bounds.upper = parse_expr(render_terms(random_terms(rng)));
        if (i % 2 == 0) {
            spec.bounds.lower = parse_expr(render_terms(random_terms(rng)));
        }
        AnalysisResult a;
        a.pred = "p";
        a.args = {"x"};
        a.size_vars = {{"x", "x", "nat"}};
        a.bounds.lower = parse_expr(lo);
        a.bounds.upper = parse_expr(lo + "+" + render_terms(random_terms(rng)));
        a.nonnegative = false;
        r.merge(partition_coverage(check_assertion(spec, a)));
    }
    return from(r);
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    Runner run;
    const std::uint64_t seed = test_seed();
    fmt::print("seed {}\n", seed);

    run.run("1", "Table 2 golden verdicts", [&] { return table2(run); });
    run.run("2a", "fact: checked [2,12], false [1,1] U [13,inf]", [&] { return fact(run); });
    run.run("2b", "hanoi: real interval rounds to [2,4]", [&] { return hanoi(run); });
    run.run("2c", "simple_log: checked [0,23968], check [23969,inf]", [&] { return simple_log(run); });
    run.run("2d", "fib: safe root gives boundary 10", [&] { return fib(run); });
    run.run("2e", "inc_append: leq/lt size-constraint regions", [&] { return inc_append(run); });
    run.run("2f", "biquad: checked 1..7, false from 8", [&] { return biquad(run); });
    run.run("3", "finite calculus closed forms, a in [0,15]", [] { return from(closed_form_sums(kClosedFormMaxA)); });
    run.run("4a", "oracle soundness, fixtures and fuzzed pairs", [&] {
        PropertyResult r = fixture_soundness(kPointsPerRegion);
        r.merge(fuzzed_soundness(kFuzzPairs, kPointsPerRegion, seed));
        return from(r);
    });
    run.run("4b", "Root vs Eval on A3 and D3", [] { return root_vs_eval_all(); });
    run.run("4c", "safe_root side postcondition", [&] { return from(safe_root_side(kSafeRootCases, seed)); });
    run.run("4d", "falling power round trip, m <= 8", [] { return from(falling_round_trip(kMaxFallingDegree)); });
    run.run("4e", "discrete derivative of discrete integral", [] { return from(delta_sigma_identity()); });
    run.run("4f", "assertion round trip", [&] { return from(assertion_round_trip(kRoundTrips, seed)); });
    run.run("4g", "partition disjointness and coverage", [&] { return coverage(run); });

    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    run.run("4t", fmt::format("suite runtime under {:.0f} s", kMaxSuiteSeconds), [&] {
        return Result{total < kMaxSuiteSeconds, fmt::format("{:.2f} s", total)};
    });
    fmt::print("{} unexpected result(s)\n", run.unexpected);
    return run.unexpected == 0 ? 0 : 1;
}
