// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "resbound/errors.hpp"
#include "resbound/normal_form.hpp"
#include "resbound/verdict.hpp"

namespace resbound {

namespace {

std::string metric_term(const std::string& metric, const std::string& arg) { return metric + "(" + arg + ")"; }

void collect(const std::optional<Expr>& e, std::set<std::string>& out) {
    if (e) {
        const auto vs = free_vars(*e);
        out.insert(vs.begin(), vs.end());
    }
}

std::set<std::string> spec_vars(const Assertion& spec) {
    std::set<std::string> used;
    collect(spec.bounds.lower, used);
    collect(spec.bounds.upper, used);
    if (spec.precond.intervals) {
        collect(spec.precond.intervals->size, used);
    }
    if (spec.precond.constraints) {
        for (const auto& c : spec.precond.constraints->conjuncts) {
            collect(c.lhs, used);
            collect(c.rhs, used);
        }
    }
    return used;
}

// Spec-side bounds after the BoundPair defaults.
struct Effective {
    std::optional<Expr> spec_lower;
    std::optional<Expr> spec_upper;
    std::optional<Expr> an_lower;
    std::optional<Expr> an_upper;
    // spec lower is a constant <= 0 under a non-negative resource
    bool lower_vacuous = false;
};

Effective effective(const Assertion& spec, const AnalysisResult& a) {
    Effective e;
    e.spec_upper = spec.bounds.upper;
    e.spec_lower = spec.bounds.lower;
    if (!e.spec_lower && spec.bounds.lower_default == LowerDefault::Zero) {
        e.spec_lower = constant(0);
    }
    e.an_upper = a.bounds.upper;
    e.an_lower = a.bounds.lower;
    if (!e.an_lower && a.nonnegative) {
        e.an_lower = constant(0);
    }
    if (!e.spec_lower) {
        e.lower_vacuous = true;
    } else if (a.nonnegative) {
        const Expr n = normalize(*e.spec_lower);
        if (free_vars(n).empty()) {
            try {
                const ExtReal v = evaluate(n, {});
                e.lower_vacuous = compare(v, ExtReal::exact(0)) <= 0;
            } catch (const Error&) {
            }
        }
    }
    return e;
}

bool unsupported(const std::optional<Expr>& e) {
    return e && (contains_min_max(*e) || contains_product(*e));
}

SizeConstraint negated(const SizeConstraint& c) {
    using K = SizeConstraint::Kind;
    return {c.kind == K::Lt ? K::Leq : K::Lt, c.rhs, c.lhs};
}

std::optional<SizeConstraintSet> interval_constraints(const IntervalPrecond& ip) {
    const auto& ivs = ip.set.intervals();
    if (ivs.size() != 1) {
        return std::nullopt;
    }
    SizeConstraintSet cs;
    using K = SizeConstraint::Kind;
    if (ivs[0].lo > 0) {
        cs.conjuncts.push_back({K::Leq, constant(ivs[0].lo), ip.size});
    }
    if (ivs[0].hi) {
        cs.conjuncts.push_back({K::Leq, ip.size, constant(*ivs[0].hi)});
    }
    return cs;
}

VerdictPartition check_multi(const Assertion& spec, const Effective& e) {
    VerdictPartition p;
    p.multivariable = true;
    SizeConstraintSet dom;
    bool dom_ok = true;
    if (spec.precond.constraints) {
        dom = *spec.precond.constraints;
    } else if (spec.precond.intervals) {
        const auto cs = interval_constraints(*spec.precond.intervals);
        dom_ok = cs.has_value();
        if (cs) {
            dom = *cs;
        }
    }
    const SizeConstraintSet none{{}, false};
    bool failed = !dom_ok;
    auto holds = [&](const Expr& f, const Expr& g, bool strict) {
        if (failed) {
            return none;
        }
        const auto r = compare_linear(f, g, dom, strict);
        if (const auto* lc = std::get_if<LinearComparison>(&r)) {
            return lc->holds;
        }
        failed = true;
        return none;
    };
    const SizeConstraintSet c1 = !e.spec_upper ? dom : !e.an_upper ? none : holds(*e.an_upper, *e.spec_upper, false);
    const SizeConstraintSet c4 =
        e.lower_vacuous ? dom : !e.an_lower ? none : holds(*e.spec_lower, *e.an_lower, false);
    const SizeConstraintSet c2 =
        !e.spec_upper || !e.an_lower ? none : holds(*e.spec_upper, *e.an_lower, true);
    const SizeConstraintSet c3 = e.lower_vacuous || !e.an_upper ? none : holds(*e.an_upper, *e.spec_lower, true);
    if (failed) {
        p.unknown_regions.push_back(dom);
        return p;
    }
    std::vector<SizeConstraintSet> decided;
    if (const auto t = conjoin(c1, c4); constraint_sat(t)) {
        p.true_regions.push_back(t);
        decided.push_back(t);
    }
    for (const auto& f : {c2, c3}) {
        if (constraint_sat(f)) {
            p.false_regions.push_back(simplify(f));
            decided.push_back(f);
        }
    }
    // dom minus every decided region, as a disjunction of conjunctions.
    std::vector<SizeConstraintSet> rest{simplify(dom)};
    for (const auto& r : decided) {
        std::vector<SizeConstraintSet> next;
        for (const auto& part : rest) {
            for (const auto& c : r.conjuncts) {
                const auto piece = conjoin(part, SizeConstraintSet{{negated(c)}, true});
                if (constraint_sat(piece)) {
                    next.push_back(piece);
                }
            }
        }
        rest = std::move(next);
    }
    p.unknown_regions = std::move(rest);
    return p;
}

// Pointwise Corollary 1 at one natural.
Outcome eval_point(const Effective& e, const std::string& v, std::int64_t n) {
    Env env;
    if (!v.empty()) {
        env[v] = Rational(n);
    }
    auto val = [&](const std::optional<Expr>& x) { return evaluate(*x, env); };
    try {
        const bool upper_ok = !e.spec_upper || (e.an_upper && compare(val(e.an_upper), val(e.spec_upper)) <= 0);
        const bool lower_ok = e.lower_vacuous || (e.an_lower && compare(val(e.spec_lower), val(e.an_lower)) <= 0);
        if (upper_ok && lower_ok) {
            return Outcome::True;
        }
        const bool above = e.spec_upper && e.an_lower && compare(val(e.spec_upper), val(e.an_lower)) < 0;
        const bool below = !e.lower_vacuous && e.an_upper && compare(val(e.an_upper), val(e.spec_lower)) < 0;
        return above || below ? Outcome::False : Outcome::Unknown;
    } catch (const Error&) {
        return Outcome::Unknown;
    }
}

std::string single_var(const Effective& e, const AnalysisResult& a) {
    std::set<std::string> vs;
    collect(e.spec_lower, vs);
    collect(e.spec_upper, vs);
    collect(e.an_lower, vs);
    collect(e.an_upper, vs);
    if (vs.size() == 1) {
        return *vs.begin();
    }
    return a.size_vars.empty() ? std::string{} : a.size_vars.front().name;
}

std::size_t bound_var_count(const Effective& e) {
    std::set<std::string> vs;
    collect(e.spec_lower, vs);
    collect(e.spec_upper, vs);
    collect(e.an_lower, vs);
    collect(e.an_upper, vs);
    return vs.size();
}

Expr size_term(const Assertion& spec, const std::string& v) {
    if (spec.precond.intervals) {
        return spec.precond.intervals->size;
    }
    return var(v);
}

} // namespace

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::True:
        return "T";
    case Outcome::False:
        return "F";
    case Outcome::Unknown:
        break;
    }
    return "C";
}

std::vector<PartitionEntry> VerdictPartition::entries() const {
    std::vector<PartitionEntry> out;
    if (multivariable) {
        for (const auto& r : false_regions) {
            out.push_back({r, Outcome::False});
        }
        for (const auto& r : true_regions) {
            out.push_back({r, Outcome::True});
        }
        for (const auto& r : unknown_regions) {
            out.push_back({r, Outcome::Unknown});
        }
        return out;
    }
    if (!falsity.empty()) {
        out.push_back({falsity, Outcome::False});
    }
    if (!truth.empty()) {
        out.push_back({truth, Outcome::True});
    }
    if (!unknown.empty()) {
        out.push_back({unknown, Outcome::Unknown});
    }
    return out;
}

NatIntervalSet spec_domain(const Assertion& spec) {
    return spec.precond.intervals ? spec.precond.intervals->set : NatIntervalSet::all();
}

AnalysisResult map_variables(const Assertion& spec, const AnalysisResult& analysis) {
    if (spec.scope.pred != analysis.pred || spec.scope.args.size() != analysis.args.size()) {
        throw PredicateMismatch("spec is about " + spec.scope.pred + "/" + std::to_string(spec.scope.args.size()) +
                                ", analysis about " + analysis.pred + "/" + std::to_string(analysis.args.size()));
    }
    const auto used = spec_vars(spec);
    AnalysisResult out = analysis;
    std::vector<std::string> targets;
    for (const auto& sv : analysis.size_vars) {
        const auto it = std::find(analysis.args.begin(), analysis.args.end(), sv.arg);
        if (it == analysis.args.end()) {
            throw PredicateMismatch("size variable " + sv.name + " measures unknown argument " + sv.arg);
        }
        const std::string& arg = spec.scope.args[static_cast<std::size_t>(it - analysis.args.begin())];
        const std::string wanted = metric_term(sv.metric, arg);
        for (const auto& u : used) {
            const std::string tail = "(" + arg + ")";
            if (u != wanted && u.size() > tail.size() && u.ends_with(tail)) {
                throw MetricMismatch("spec measures " + arg + " as " + u + ", analysis as " + wanted);
            }
        }
        if (used.contains(wanted)) {
            targets.push_back(wanted);
        } else if (used.contains(arg) || spec.syntax == Syntax::XC) {
            targets.push_back(arg);
        } else {
            targets.push_back(wanted);
        }
    }
    // Two passes so that a target never collides with a name still to be renamed.
    auto rename_all = [&](std::optional<Expr>& e) {
        if (!e) {
            return;
        }
        for (std::size_t i = 0; i < analysis.size_vars.size(); ++i) {
            e = rename_var(*e, analysis.size_vars[i].name, "\x01" + std::to_string(i));
        }
        for (std::size_t i = 0; i < analysis.size_vars.size(); ++i) {
            e = rename_var(*e, "\x01" + std::to_string(i), targets[i]);
        }
    };
    rename_all(out.bounds.lower);
    rename_all(out.bounds.upper);
    for (std::size_t i = 0; i < out.size_vars.size(); ++i) {
        out.size_vars[i].name = targets[i];
    }
    return out;
}

VerdictPartition check_assertion(const Assertion& spec, const AnalysisResult& analysis, const CheckOptions& opts) {
    const AnalysisResult a = map_variables(spec, analysis);
    const Effective e = effective(spec, a);
    if (spec.precond.constraints || bound_var_count(e) > 1) {
        return check_multi(spec, e);
    }
    VerdictPartition p;
    const std::string v = single_var(e, a);
    p.size = size_term(spec, v);
    const NatIntervalSet s = intersect(spec_domain(spec), a.domain.value_or(NatIntervalSet::all()));
    p.domain = s;
    if (unsupported(e.spec_lower) || unsupported(e.spec_upper) || unsupported(e.an_lower) ||
        unsupported(e.an_upper)) {
        p.unknown = s;
        return p;
    }
    // Reuses one comparison when both sides of a condition coincide with an earlier one.
    std::map<std::string, ComparisonResult> memo;
    auto run = [&](bool strict, const Expr& l, const Expr& r) {
        const std::string key = (strict ? "<" : "<=") + to_string(normalize(l)) + "|" + to_string(normalize(r));
        if (const auto it = memo.find(key); it != memo.end()) {
            return it->second.satisfied;
        }
        ComparisonResult res = strict ? less_f(l, r, s, opts.compare) : leq_f(l, r, s, opts.compare);
        p.approximation_used = p.approximation_used || res.approximation_used;
        memo.emplace(key, res);
        return res.satisfied;
    };
    const NatIntervalSet none;
    const NatIntervalSet c1 = !e.spec_upper ? s : !e.an_upper ? none : run(false, *e.an_upper, *e.spec_upper);
    const NatIntervalSet c4 = e.lower_vacuous ? s : !e.an_lower ? none : run(false, *e.spec_lower, *e.an_lower);
    const NatIntervalSet c2 = !e.spec_upper || !e.an_lower ? none : run(true, *e.spec_upper, *e.an_lower);
    const NatIntervalSet c3 = e.lower_vacuous || !e.an_upper ? none : run(true, *e.an_upper, *e.spec_lower);
    p.truth = intersect(c1, c4);
    p.falsity = complement_in(p.truth, unite(c2, c3));
    p.unknown = complement_in(unite(p.truth, p.falsity), s);
    return p;
}

VerdictPartition eval_check(const Assertion& spec, const AnalysisResult& analysis, const NatIntervalSet& s) {
    if (!s.bounded()) {
        throw DomainUnbounded();
    }
    const AnalysisResult a = map_variables(spec, analysis);
    const Effective e = effective(spec, a);
    if (bound_var_count(e) > 1) {
        throw UnsupportedForm("pointwise evaluation needs a single size variable");
    }
    VerdictPartition p;
    const std::string v = single_var(e, a);
    p.size = size_term(spec, v);
    p.domain = s;
    std::map<Outcome, std::vector<NatInterval>> runs;
    for (const auto& iv : s.intervals()) {
        for (std::int64_t n = iv.lo; n <= *iv.hi; ++n) {
            auto& r = runs[eval_point(e, v, n)];
            if (!r.empty() && r.back().hi && *r.back().hi + 1 == n) {
                r.back().hi = n;
            } else {
                r.push_back({n, n});
            }
        }
    }
    p.truth = NatIntervalSet(runs[Outcome::True]);
    p.falsity = NatIntervalSet(runs[Outcome::False]);
    p.unknown = NatIntervalSet(runs[Outcome::Unknown]);
    return p;
}

std::vector<Assertion> synthesize_output(const Assertion& spec, const VerdictPartition& partition) {
    std::vector<Assertion> out;
    const NatIntervalSet full = spec_domain(spec);
    for (const auto& entry : partition.entries()) {
        Assertion a = spec;
        a.status = entry.outcome == Outcome::False  ? Status::False
                   : entry.outcome == Outcome::True ? Status::Checked
                                                    : Status::Check;
        if (const auto* set = std::get_if<NatIntervalSet>(&entry.region)) {
            if (!(*set == full)) {
                a.precond.intervals = IntervalPrecond{partition.size.value_or(var("N")), *set};
                a.precond.constraints.reset();
            }
        } else {
            const auto& cs = std::get<SizeConstraintSet>(entry.region);
            if (!cs.conjuncts.empty()) {
                a.precond.constraints = cs;
                a.precond.intervals.reset();
            }
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace resbound
