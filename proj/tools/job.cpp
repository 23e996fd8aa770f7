// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include "job.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "resbound/errors.hpp"
#include "resbound/parser.hpp"

namespace resbound::job {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw JobError(path + ": " + what); }

const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) {
        bad(path, "missing field '" + key + "'");
    }
    return obj.at(key);
}

std::string string_at(const json& v, const std::string& path) {
    if (!v.is_string()) {
        bad(path, "expected a string");
    }
    return v.get<std::string>();
}

std::optional<Expr> bound_at(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return std::nullopt;
    }
    const std::string text = string_at(obj.at(key), path + "/" + key);
    try {
        return parse_expr(text);
    } catch (const ParseError& e) {
        bad(path + "/" + key, e.what());
    }
}

JobOptions load_options(const json& j) {
    JobOptions o;
    if (!j.is_object()) {
        bad("/options", "expected an object");
    }
    try {
        o.taylor_order = j.value("taylor_order", o.taylor_order);
        o.delta = j.value("delta", o.delta);
        o.kappa = j.value("kappa", o.kappa);
        o.enum_threshold = j.value("enum_threshold", o.enum_threshold);
        o.oracle_crosscheck = j.value("oracle_crosscheck", o.oracle_crosscheck);
    } catch (const json::exception& e) {
        bad("/options", e.what());
    }
    if (o.taylor_order == 0 || o.taylor_order > 20) {
        bad("/options/taylor_order", "must be in 1..20");
    }
    if (!(o.delta > 0) || !(o.kappa > 0)) {
        bad("/options", "delta and kappa must be positive");
    }
    return o;
}

AnalysisResult load_analysis(const json& j, const std::string& path) {
    if (!j.is_object()) {
        bad(path, "expected an object");
    }
    AnalysisResult a;
    a.pred = string_at(field(j, "pred", path), path + "/pred");
    const json& args = field(j, "args", path);
    if (!args.is_array()) {
        bad(path + "/args", "expected an array");
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        a.args.push_back(string_at(args[i], fmt::format("{}/args/{}", path, i)));
    }
    const json& svs = field(j, "size_vars", path);
    if (!svs.is_array() || svs.empty()) {
        bad(path + "/size_vars", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < svs.size(); ++i) {
        const std::string p = fmt::format("{}/size_vars/{}", path, i);
        SizeVar sv;
        sv.name = string_at(field(svs[i], "name", p), p + "/name");
        sv.arg = string_at(field(svs[i], "arg", p), p + "/arg");
        if (svs[i].contains("metric")) {
            sv.metric = string_at(svs[i].at("metric"), p + "/metric");
        }
        if (std::find(a.args.begin(), a.args.end(), sv.arg) == a.args.end()) {
            bad(p + "/arg", "'" + sv.arg + "' is not an argument of " + a.pred);
        }
        a.size_vars.push_back(std::move(sv));
    }
    a.bounds.lower = bound_at(j, "lb", path);
    a.bounds.upper = bound_at(j, "ub", path);
    std::set<std::string> names;
    for (const auto& sv : a.size_vars) {
        names.insert(sv.name);
    }
    for (const auto* b : {&a.bounds.lower, &a.bounds.upper}) {
        if (!*b) {
            continue;
        }
        for (const auto& v : free_vars(**b)) {
            if (!names.contains(v)) {
                bad(path, "bound mentions '" + v + "', which is not a size variable");
            }
        }
    }
    if (j.contains("domain") && !j.at("domain").is_null()) {
        try {
            a.domain = parse_interval_text(string_at(j.at("domain"), path + "/domain"));
        } catch (const ParseError& e) {
            bad(path + "/domain", e.what());
        }
    }
    if (j.contains("resource")) {
        string_at(j.at("resource"), path + "/resource");
    }
    if (j.contains("nonnegative")) {
        if (!j.at("nonnegative").is_boolean()) {
            bad(path + "/nonnegative", "expected a boolean");
        }
        a.nonnegative = j.at("nonnegative").get<bool>();
    }
    return a;
}

std::string signature(const std::string& pred, std::size_t arity) { return pred + "/" + std::to_string(arity); }

bool any_unsupported(const BoundPair& b) {
    for (const auto* e : {&b.lower, &b.upper}) {
        if (*e && (contains_min_max(**e) || contains_product(**e))) {
            return true;
        }
    }
    return false;
}

std::int64_t largest_endpoint(const VerdictPartition& p) {
    std::int64_t m = 0;
    for (const auto* s : {&p.domain, &p.truth, &p.falsity, &p.unknown}) {
        for (const auto& iv : s->intervals()) {
            m = std::max(m, iv.hi.value_or(iv.lo));
        }
    }
    return m;
}

Crosscheck crosscheck(const Assertion& spec, const AnalysisResult& a, const VerdictPartition& p) {
    Crosscheck c;
    const std::int64_t n = std::max<std::int64_t>(2 * largest_endpoint(p), 64);
    c.domain = truncate(p.domain, n);
    c.eval = eval_check(spec, a, c.domain);
    c.agrees = truncate(p.truth, n) == c.eval.truth && truncate(p.falsity, n) == c.eval.falsity &&
               truncate(p.unknown, n) == c.eval.unknown;
    return c;
}

Item check_one(const Job& job, const std::string& source) {
    Item item;
    item.source = source;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        item.spec = parse_assertion(source);
        if (item.spec->status == Status::Check) {
            const AnalysisResult& a = find_analysis(job, *item.spec);
            if (any_unsupported(item.spec->bounds) || any_unsupported(a.bounds)) {
                item.warnings.emplace_back("bound uses min, max or a product; treated as unknown");
            }
            item.partition = check_assertion(*item.spec, a, check_options(job.options));
            item.outputs = synthesize_output(*item.spec, *item.partition);
            if (job.options.oracle_crosscheck && !item.partition->multivariable) {
                item.crosscheck = crosscheck(*item.spec, a, *item.partition);
            }
        }
    } catch (const Error& e) {
        item.error = e.what();
    }
    item.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return item;
}

std::string partition_line(char tag, const NatIntervalSet& s) { return fmt::format("  {} {}\n", tag, to_string(s)); }

std::string cell(const std::optional<Expr>& e, const Env& env) {
    if (!e) {
        return "";
    }
    try {
        const ExtReal v = evaluate(*e, env);
        if (v.kind() == ExtReal::Kind::PosInf) {
            return "inf";
        }
        if (v.kind() == ExtReal::Kind::NegInf) {
            return "-inf";
        }
        if (v.is_exact() && is_integer(v.exact_value())) {
            return boost::multiprecision::numerator(v.exact_value()).str();
        }
        return fmt::format("{}", v.to_double());
    } catch (const Error&) {
        return "";
    }
}

} // namespace

Job load_job(const json& j) {
    if (!j.is_object()) {
        bad("/", "expected an object");
    }
    if (!j.contains("v") || j.at("v") != 1) {
        bad("/v", "schema version must be 1");
    }
    Job job;
    if (j.contains("options")) {
        job.options = load_options(j.at("options"));
    }
    if (j.contains("assertions")) {
        const json& as = j.at("assertions");
        if (!as.is_array()) {
            bad("/assertions", "expected an array");
        }
        for (std::size_t i = 0; i < as.size(); ++i) {
            job.assertions.push_back(string_at(as[i], fmt::format("/assertions/{}", i)));
        }
    }
    std::set<std::string> seen;
    if (j.contains("analysis")) {
        const json& an = j.at("analysis");
        if (!an.is_array()) {
            bad("/analysis", "expected an array");
        }
        for (std::size_t i = 0; i < an.size(); ++i) {
            const std::string path = fmt::format("/analysis/{}", i);
            AnalysisResult a = load_analysis(an[i], path);
            if (!seen.insert(signature(a.pred, a.args.size())).second) {
                bad(path, "duplicate analysis record for " + signature(a.pred, a.args.size()));
            }
            job.analysis.push_back(std::move(a));
        }
    }
    return job;
}

Job load_job_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw JobError(path.string() + ": cannot open");
    }
    try {
        return load_job(json::parse(in));
    } catch (const json::parse_error& e) {
        throw JobError(path.string() + ": " + e.what());
    }
}

CheckOptions check_options(const JobOptions& o) {
    CheckOptions c;
    c.compare.taylor_order = o.taylor_order;
    c.compare.enum_threshold = o.enum_threshold;
    c.compare.safe.delta = o.delta;
    c.compare.safe.kappa = o.kappa;
    return c;
}

const AnalysisResult& find_analysis(const Job& job, const Assertion& spec) {
    for (const auto& a : job.analysis) {
        if (a.pred == spec.scope.pred && a.args.size() == spec.scope.args.size()) {
            return a;
        }
    }
    throw JobError("no analysis record for " + signature(spec.scope.pred, spec.scope.args.size()));
}

int Report::exit_code() const {
    bool any_false = false;
    bool any_unknown = false;
    for (const auto& it : items) {
        if (it.error) {
            return 3;
        }
        for (const auto& out : it.outputs) {
            any_false = any_false || out.status == Status::False;
            any_unknown = any_unknown || out.status == Status::Check;
        }
    }
    return any_false ? 1 : any_unknown ? 2 : 0;
}

Report run_check(const Job& job, unsigned threads) {
    Report r;
    r.items.resize(job.assertions.size());
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, job.assertions.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < job.assertions.size(); i = next++) {
            r.items[i] = check_one(job, job.assertions[i]);
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(work);
    }
    work();
    return r;
}

std::string render_text(const Report& r, bool timings) {
    std::string out;
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        const Item& it = r.items[i];
        out += fmt::format("[{}]", i + 1);
        if (it.spec) {
            out += fmt::format(" {} {}", to_string(it.spec->status), signature(it.spec->scope.pred, it.spec->scope.args.size()));
        }
        if (timings) {
            out += fmt::format(" ({:.3f} ms)", it.millis);
        }
        out += "\n";
        if (it.error) {
            out += "  error: " + *it.error + "\n";
            continue;
        }
        for (const auto& w : it.warnings) {
            out += "  warning: " + w + "\n";
        }
        if (!it.partition) {
            out += "  not checked\n";
            continue;
        }
        const auto& p = *it.partition;
        if (p.multivariable) {
            for (const auto& e : p.entries()) {
                out += fmt::format("  {} {}\n", to_string(e.outcome), to_string(std::get<SizeConstraintSet>(e.region)));
            }
        } else {
            out += partition_line('F', p.falsity) + partition_line('T', p.truth) + partition_line('C', p.unknown);
        }
        if (it.crosscheck) {
            out += fmt::format("  eval on {}: {}\n", to_string(it.crosscheck->domain),
                               it.crosscheck->agrees ? "agrees"
                                                     : fmt::format("differs (F {} T {} C {})",
                                                                   to_string(it.crosscheck->eval.falsity),
                                                                   to_string(it.crosscheck->eval.truth),
                                                                   to_string(it.crosscheck->eval.unknown)));
        }
        for (const auto& a : it.outputs) {
            out += emit(a, Syntax::Ciao) + "\n";
        }
        for (const auto& a : it.outputs) {
            out += emit(a, Syntax::XC) + "\n";
        }
    }
    return out;
}

json render_json(const Report& r, bool timings) {
    json items = json::array();
    for (const auto& it : r.items) {
        json j;
        j["source"] = it.source;
        if (it.error) {
            j["error"] = *it.error;
            items.push_back(std::move(j));
            continue;
        }
        j["warnings"] = it.warnings;
        if (it.partition) {
            json parts = json::array();
            for (const auto& e : it.partition->entries()) {
                const std::string region = std::holds_alternative<NatIntervalSet>(e.region)
                                               ? interval_text(std::get<NatIntervalSet>(e.region))
                                               : to_string(std::get<SizeConstraintSet>(e.region));
                parts.push_back({{"outcome", to_string(e.outcome)}, {"region", region}});
            }
            j["partition"] = std::move(parts);
            j["approximation_used"] = it.partition->approximation_used;
            json ciao = json::array();
            json xc = json::array();
            for (const auto& a : it.outputs) {
                ciao.push_back(emit(a, Syntax::Ciao));
                xc.push_back(emit(a, Syntax::XC));
            }
            j["ciao"] = std::move(ciao);
            j["xc"] = std::move(xc);
        }
        if (it.crosscheck) {
            j["crosscheck"] = {{"domain", interval_text(it.crosscheck->domain)}, {"agrees", it.crosscheck->agrees}};
        }
        if (timings) {
            j["millis"] = it.millis;
        }
        items.push_back(std::move(j));
    }
    return {{"v", 1}, {"exit_code", r.exit_code()}, {"items", std::move(items)}};
}

std::string plot_csv(const Assertion& spec, const AnalysisResult& analysis, const NatInterval& range,
                     std::int64_t step) {
    if (!range.hi) {
        throw DomainUnbounded();
    }
    if (step < 1) {
        throw JobError("plot step must be positive");
    }
    const AnalysisResult a = map_variables(spec, analysis);
    std::set<std::string> vars;
    for (const auto& sv : a.size_vars) {
        vars.insert(sv.name);
    }
    if (vars.size() != 1) {
        throw UnsupportedForm("plots need a single size variable");
    }
    std::string out = "n,analysis_lb,analysis_ub,spec_lb,spec_ub\n";
    for (std::int64_t n = range.lo; n <= *range.hi; n += step) {
        const Env env{{*vars.begin(), Rational(n)}};
        out += fmt::format("{},{},{},{},{}\n", n, cell(a.bounds.lower, env), cell(a.bounds.upper, env),
                           cell(spec.bounds.lower, env), cell(spec.bounds.upper, env));
    }
    return out;
}

} // namespace resbound::job
