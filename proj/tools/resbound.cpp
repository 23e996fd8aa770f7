// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "job.hpp"
#include "resbound/compare.hpp"
#include "resbound/errors.hpp"
#include "resbound/fincalc.hpp"
#include "resbound/normal_form.hpp"
#include "resbound/parser.hpp"
#include "resbound/roots.hpp"

using namespace resbound;

namespace {

constexpr int kInputError = 3;

std::int64_t parse_count(const std::string& s, const std::string& what) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 0) {
        throw JobError("bad " + what + ": '" + s + "'");
    }
    return v;
}

// L:H with H possibly inf, or an i(..) list.
NatIntervalSet parse_on(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        return parse_interval_text(text);
    }
    const std::string hi = text.substr(colon + 1);
    const std::int64_t lo = parse_count(text.substr(0, colon), "range");
    if (hi == "inf") {
        return NatIntervalSet::range(lo, std::nullopt);
    }
    const std::int64_t h = parse_count(hi, "range");
    if (h < lo) {
        throw JobError("empty range '" + text + "'");
    }
    return NatIntervalSet::range(lo, h);
}

int cmd_check(const std::string& path, const std::string& format, bool timings, unsigned threads) {
    const auto job = job::load_job_file(path);
    const auto report = job::run_check(job, threads);
    if (format == "json") {
        std::cout << job::render_json(report, timings).dump(2) << "\n";
    } else {
        std::cout << job::render_text(report, timings);
    }
    return report.exit_code();
}

int cmd_sumclose(const std::string& text) {
    const auto out = eliminate_summations(parse_expr(text));
    if (!out.closed()) {
        std::cerr << "no closed form: " << out.unsupported().reason << " in " << to_string(out.unsupported().offending)
                  << "\n";
        return kInputError;
    }
    std::cout << to_string(out.result()) << "\n";
    return 0;
}

int cmd_roots(const std::string& text) {
    const Expr e = normalize(parse_expr(text));
    const auto vars = free_vars(e);
    if (vars.size() > 1) {
        throw UnsupportedForm("roots needs a single variable");
    }
    const auto coeffs = as_polynomial(e, vars.empty() ? std::string("x") : *vars.begin());
    if (!coeffs) {
        throw UnsupportedForm("not a polynomial: " + to_string(e));
    }
    std::cout << to_string(poly_roots(*coeffs)) << "\n";
    return 0;
}

int cmd_compare(const std::string& lhs, const std::string& op, const std::string& rhs, const std::string& on) {
    const Expr l = parse_expr(lhs);
    const Expr r = parse_expr(rhs);
    const NatIntervalSet s = parse_on(on);
    ComparisonResult res;
    if (op == "<") {
        res = less_f(l, r, s);
    } else if (op == "<=") {
        res = leq_f(l, r, s);
    } else if (op == ">") {
        res = less_f(r, l, s);
    } else if (op == ">=") {
        res = leq_f(r, l, s);
    } else {
        throw JobError("operator must be one of < <= > >=");
    }
    std::cout << "holds " << to_string(res.satisfied) << "\n";
    std::cout << "unresolved " << to_string(res.residual_unknown) << "\n";
    if (res.approximation_used) {
        std::cout << "approximation used\n";
    }
    return 0;
}

int cmd_plot(const std::string& path, std::size_t index, const std::string& range, std::int64_t step) {
    const auto job = job::load_job_file(path);
    if (index < 1 || index > job.assertions.size()) {
        throw JobError(fmt::format("assertion index {} out of range 1..{}", index, job.assertions.size()));
    }
    const Assertion spec = parse_assertion(job.assertions[index - 1]);
    const NatIntervalSet r = parse_on(range);
    if (r.intervals().size() != 1) {
        throw JobError("plot range must be a single interval");
    }
    std::cout << job::plot_csv(spec, job::find_analysis(job, spec), r.intervals().front(), step);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval-based checking of resource usage assertions"};
    app.require_subcommand(1);

    std::string job_path;
    std::string format = "text";
    bool timings = false;
    unsigned threads = 0;
    auto* check = app.add_subcommand("check", "verify every check assertion of a job file");
    check->add_option("job", job_path, "job file (JSON)")->required();
    check->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
    check->add_flag("--timings", timings, "add wall time per assertion");
    check->add_option("--threads", threads, "worker threads, 0 for one per core");

    std::string expr;
    auto* sumclose = app.add_subcommand("sumclose", "closed form of the summations in an expression");
    sumclose->add_option("expr", expr)->required();
    auto* roots = app.add_subcommand("roots", "non-negative real roots of a polynomial");
    roots->add_option("expr", expr)->required();

    std::string lhs;
    std::string op;
    std::string rhs;
    std::string on = "0:inf";
    auto* compare = app.add_subcommand("compare", "naturals where lhs op rhs is proved");
    compare->add_option("lhs", lhs)->required();
    compare->add_option("op", op)->required();
    compare->add_option("rhs", rhs)->required();
    compare->add_option("--on", on, "L:H or [i(L,H),...]");

    std::size_t index = 1;
    std::string range;
    std::int64_t step = 1;
    auto* plot = app.add_subcommand("plot", "CSV of analysis and spec bounds");
    plot->add_option("job", job_path)->required();
    plot->add_option("--assertion", index, "1-based position in the job")->required();
    plot->add_option("--range", range, "L:H")->required();
    plot->add_option("--step", step)->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*check) {
            return cmd_check(job_path, format, timings, threads);
        }
        if (*sumclose) {
            return cmd_sumclose(expr);
        }
        if (*roots) {
            return cmd_roots(expr);
        }
        if (*compare) {
            return cmd_compare(lhs, op, rhs, on);
        }
        return cmd_plot(job_path, index, range, step);
    } catch (const Error& e) {
        std::cerr << "resbound: " << e.what() << "\n";
        return kInputError;
    }
}
