// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "resbound/compare.hpp"
#include "resbound/errors.hpp"
#include "resbound/fincalc.hpp"
#include "resbound/normal_form.hpp"

namespace resbound {

namespace {

constexpr double kMargin = 1e-9;
constexpr int kAdjustSteps = 64;
// Below e^(1/e) log_b(h) <= h fails for some h.
constexpr double kLogBoundBase = 1.4447;

// c * x^k * e^(lambda x), coefficient kept as sign and log magnitude.
struct NumTerm {
    int sign = 1;
    double logmag = 0;
    int k = 0;
    double lambda = 0;
};

using NumTerms = std::vector<NumTerm>;

std::optional<NumTerms> to_numterms(const Expr& f, const std::string& x) {
    NumTerms out;
    const Poly p = to_poly(f);
    for (const auto& [key, t] : p.terms()) {
        double coef = to_double(t.coef);
        NumTerm nt;
        for (const auto& [v, k] : t.mono.vars) {
            if (v != x || k < 0) {
                return std::nullopt;
            }
            nt.k = k;
        }
        for (const auto& [base, lf] : t.mono.exps) {
            for (const auto& [v, c] : lf.coeffs) {
                if (v != x) {
                    return std::nullopt;
                }
            }
            if (!base.is_euler() && *base.value <= 0) {
                return std::nullopt;
            }
            const double ln_a = base.is_euler() ? 1.0 : std::log(to_double(*base.value));
            nt.lambda += to_double(lf.coeff(x)) * ln_a;
            nt.logmag += to_double(lf.constant) * ln_a;
        }
        for (const auto& [akey, atom] : t.mono.atoms) {
            if (depends_on(atom.expr, x)) {
                return std::nullopt;
            }
            coef *= std::pow(evaluate_numeric(atom.expr, {}), atom.exponent);
        }
        if (!std::isfinite(coef) || coef == 0) {
            if (coef == 0) {
                continue;
            }
            return std::nullopt;
        }
        nt.sign = coef > 0 ? 1 : -1;
        nt.logmag += std::log(std::abs(coef));
        out.push_back(nt);
    }
    return out;
}

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

// Sign of sum(terms) at x with a relative margin; 0 when undecided.
int numeric_sign(const NumTerms& terms, double x) {
    if (terms.empty()) {
        return 0;
    }
    std::vector<double> logs;
    for (const auto& t : terms) {
        if (t.k > 0 && x == 0) {
            logs.push_back(-std::numeric_limits<double>::infinity());
            continue;
        }
        logs.push_back(t.logmag + t.lambda * x + (t.k > 0 ? t.k * std::log(x) : 0.0));
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    if (!std::isfinite(top)) {
        return 0;
    }
    double sum = 0;
    double scale = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double v = std::exp(logs[i] - top);
        sum += terms[i].sign * v;
        scale += v;
    }
    if (sum > kMargin * scale) {
        return 1;
    }
    if (sum < -kMargin * scale) {
        return -1;
    }
    return 0;
}

// Shifted form at x = y + s, grouped by power of y; every group must be
// non-negative after bases absorb smaller bases, and the y^0 group positive.
bool syntactically_positive(const NumTerms& terms, double s) {
    std::map<int, std::vector<NumTerm>> groups;
    for (const auto& t : terms) {
        for (int j = 0; j <= t.k; ++j) {
            NumTerm u = t;
            u.k = j;
            u.logmag = t.logmag + t.lambda * s + log_binomial(t.k, j) + (t.k - j) * std::log(s);
            groups[j].push_back(u);
        }
    }
    if (!groups.contains(0)) {
        return false;
    }
    for (auto& [j, g] : groups) {
        std::sort(g.begin(), g.end(), [](const NumTerm& a, const NumTerm& b) {
            return a.lambda != b.lambda ? a.lambda > b.lambda : a.sign > b.sign;
        });
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& t : g) {
            top = std::max(top, t.logmag);
        }
        double pool = 0;
        for (const auto& t : g) {
            const double v = std::exp(t.logmag - top);
            if (t.sign > 0) {
                pool += v;
                continue;
            }
            pool -= v;
            if (pool < kMargin) {
                return false;
            }
        }
        if (j == 0 && pool < kMargin) {
            return false;
        }
    }
    return true;
}

NumTerms derivative(const NumTerms& terms) {
    NumTerms out;
    for (const auto& t : terms) {
        if (t.k > 0) {
            out.push_back({t.sign, t.logmag + std::log(t.k), t.k - 1, t.lambda});
        }
        if (t.lambda != 0) {
            out.push_back({t.lambda > 0 ? t.sign : -t.sign, t.logmag + std::log(std::abs(t.lambda)), t.k, t.lambda});
        }
    }
    return out;
}

bool dominates(const NumTerms& terms, double s, int depth) {
    if (syntactically_positive(terms, s)) {
        return true;
    }
    if (depth <= 0 || numeric_sign(terms, s) <= 0) {
        return false;
    }
    return dominates(derivative(terms), s, depth - 1);
}

// Exact sign test of f at a natural.
class Probe {
  public:
    Probe(Expr f, std::string x) : f_(std::move(f)), x_(std::move(x)) {
        const Poly p = to_poly(f_);
        for (const auto& [key, t] : p.terms()) {
            terms_.push_back(t.mono.to_expr_scaled(t.coef));
        }
    }

    [[nodiscard]] bool holds(std::int64_t n, bool strict) const {
        if (fast_holds(n)) {
            return true;
        }
        try {
            const ExtReal v = evaluate(f_, {{x_, Rational(n)}});
            if (v.is_exact()) {
                const int s = v.sign();
                return strict ? s > 0 : s >= 0;
            }
            if (!v.is_finite()) {
                return v.kind() == ExtReal::Kind::PosInf;
            }
            return v.to_double() > kMargin * std::max(1.0, scale(n));
        } catch (const Error&) {
            return false;
        }
    }

  private:
    [[nodiscard]] bool fast_holds(std::int64_t n) const {
        double sum = 0;
        double sc = 0;
        try {
            for (const auto& t : terms_) {
                const double v = evaluate_numeric(t, {{x_, static_cast<double>(n)}});
                sum += v;
                sc += std::abs(v);
            }
        } catch (const Error&) {
            return false;
        }
        return std::isfinite(sum) && std::isfinite(sc) && sum > 1e-7 * sc && sum > 0;
    }

    [[nodiscard]] double scale(std::int64_t n) const {
        double sc = 0;
        for (const auto& t : terms_) {
            sc += std::abs(evaluate_numeric(t, {{x_, static_cast<double>(n)}}));
        }
        return sc;
    }

    Expr f_;
    std::string x_;
    std::vector<Expr> terms_;
};

Rational horner(const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

// Naturals where the polynomial is positive (non-negative when !strict).
// Every natural next to a root is tested exactly; gaps between them are root free.
NatIntervalSet polynomial_region(const std::vector<Rational>& coeffs, bool strict) {
    if (std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; })) {
        return strict ? NatIntervalSet{} : NatIntervalSet::all();
    }
    const auto ok = [&](std::int64_t n) {
        const Rational v = horner(coeffs, Rational(n));
        return strict ? v > 0 : v >= 0;
    };
    std::set<std::int64_t> critical{0};
    for (const auto& r : poly_roots(coeffs).roots) {
        if (r.value > 1e15) {
            throw UnsupportedForm("root out of range");
        }
        const auto fl = static_cast<std::int64_t>(std::floor(r.value));
        for (std::int64_t d = -1; d <= 2; ++d) {
            if (fl + d >= 0) {
                critical.insert(fl + d);
            }
        }
    }
    std::vector<NatInterval> out;
    const std::vector<std::int64_t> ks(critical.begin(), critical.end());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ok(ks[i])) {
            out.push_back({ks[i], ks[i]});
        }
        const std::int64_t gap_lo = ks[i] + 1;
        if (i + 1 < ks.size()) {
            if (ks[i + 1] > gap_lo && ok(gap_lo)) {
                out.push_back({gap_lo, ks[i + 1] - 1});
            }
        } else if (ok(gap_lo)) {
            out.push_back({gap_lo, std::nullopt});
        }
    }
    return NatIntervalSet(std::move(out));
}

NatIntervalSet polynomial_region(const Expr& e, const std::string& x, bool strict) {
    const auto c = as_polynomial(e, x);
    if (!c) {
        throw UnsupportedForm("not a polynomial: " + to_string(e));
    }
    return polynomial_region(*c, strict);
}

// g <= f on `domain`, with oscillating terms and logs replaced.
struct LowerBound {
    Expr g;
    NatIntervalSet domain = NatIntervalSet::all();
};

std::optional<LowerBound> bound_below(const Expr& f, const std::string& x) {
    LowerBound out;
    Expr acc = constant(0);
    const Poly p = to_poly(f);
    for (const auto& [key, t] : p.terms()) {
        Monomial m = t.mono;
        Rational coef = t.coef;
        bool flipped = false;
        std::map<ExpBase, LinearForm> exps;
        for (const auto& [base, lf] : m.exps) {
            if (base.is_euler() || *base.value >= 0) {
                exps[base] += lf;
                continue;
            }
            if (!is_integer(lf.constant) || !is_integer(lf.coeff(x))) {
                return std::nullopt;
            }
            exps[ExpBase{-*base.value}] += lf;
            flipped = true;
        }
        m.exps = std::move(exps);
        if (flipped) {
            coef = -abs(coef);
        }

        std::optional<std::string> log_key;
        for (const auto& [akey, atom] : m.atoms) {
            if (!depends_on(atom.expr, x)) {
                continue;
            }
            if (log_key || atom.exponent != 1 || !atom.expr.is<Log>()) {
                return std::nullopt;
            }
            log_key = akey;
        }
        if (!log_key) {
            acc = acc + m.to_expr_scaled(coef);
            continue;
        }
        const Log lg = *m.atoms.at(*log_key).expr.as<Log>();
        m.atoms.erase(*log_key);
        if (flipped || !m.atoms.empty()) {
            return std::nullopt;
        }
        std::optional<Rational> base;
        if (const auto* c = lg.base.as<Const>()) {
            base = c->value;
        } else if (!lg.base.is<Euler>()) {
            return std::nullopt;
        }
        const Expr h = normalize(lg.arg);
        if (coef < 0) {
            // log_b(h) <= h for h > 0 once b >= e^(1/e); at h = 0 the term is +inf.
            if (base && to_double(*base) < kLogBoundBase) {
                return std::nullopt;
            }
            acc = acc + m.to_expr_scaled(coef) * h;
            out.domain = intersect(out.domain, polynomial_region(h, x, false));
        } else {
            // log_b(h) >= 0 where h >= b; 3 stands in for e.
            if (base && *base <= 1) {
                return std::nullopt;
            }
            const Rational b = base ? *base : Rational(3);
            out.domain = intersect(out.domain, polynomial_region(normalize(h - constant(b)), x, false));
        }
    }
    out.g = normalize(acc);
    return out;
}

struct PathResult {
    NatIntervalSet satisfied;
    NatIntervalSet unknown;
};

double surrogate_at(const std::vector<double>& c, double x) {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

int fsign(double v) { return (v > kMargin) - (v < -kMargin); }

void mark(std::vector<NatInterval>& into, double lo, std::optional<double> hi) {
    if (const auto iv = nat_round(lo, hi)) {
        into.push_back(*iv);
    }
}

// Taylor surrogate roots, corrected by safe_root and checked pointwise.
PathResult exponential_path(const Expr& f, const Expr& g, const std::string& x, bool strict,
                            const CompareOptions& opts) {
    const auto gt = to_numterms(g, x);
    if (!gt) {
        return {{}, NatIntervalSet::all()};
    }
    int max_k = 0;
    for (const auto& t : *gt) {
        max_k = std::max(max_k, t.k);
    }
    std::vector<double> sur(static_cast<std::size_t>(max_k) + opts.taylor_order + 1, 0.0);
    for (const auto& t : *gt) {
        const double c = t.sign * std::exp(t.logmag);
        double lam_j = 1;
        for (unsigned j = 0; j <= opts.taylor_order; ++j) {
            sur[t.k + j] += c * lam_j / to_double(factorial(j));
            lam_j *= t.lambda;
        }
    }
    if (std::any_of(sur.begin(), sur.end(), [](double c) { return !std::isfinite(c); })) {
        return {{}, NatIntervalSet::all()};
    }
    std::vector<double> roots;
    try {
        for (const auto& r : poly_roots(sur).roots) {
            if (r.value >= 0 && (roots.empty() || r.value - roots.back() > 1e-9)) {
                roots.push_back(r.value);
            }
        }
    } catch (const Error&) {
        return {{}, NatIntervalSet::all()};
    }

    const Probe probe(f, x);
    std::vector<NatInterval> sat;
    std::vector<NatInterval> unknown;
    const std::size_t m = roots.size();
    for (std::size_t i = 0; i <= m; ++i) {
        const double low = i == 0 ? 0.0 : roots[i - 1];
        const std::optional<double> high = i == m ? std::nullopt : std::optional<double>(roots[i]);
        const double w = high ? (low + *high) / 2 : low + 1;
        const int s_sur = fsign(surrogate_at(sur, w));
        const int s_g = numeric_sign(*gt, w);
        if (s_sur != s_g || s_g == 0) {
            mark(unknown, low, high);
            continue;
        }
        if (s_g < 0) {
            continue;
        }
        std::int64_t lo = 0;
        std::optional<std::int64_t> hi;
        try {
            if (i > 0) {
                lo = nat_snap(safe_root(g, x, low, RequiredSide::RootAtOrAbove, opts.safe), SnapDirection::TowardLower);
            }
            if (high) {
                hi = nat_snap(safe_root(g, x, *high, RequiredSide::RootAtOrBelow, opts.safe), SnapDirection::TowardUpper);
            }
        } catch (const Error&) {
            mark(unknown, low, high);
            continue;
        }
        int steps = 0;
        while ((!hi || lo <= *hi) && !probe.holds(lo, strict) && steps++ < kAdjustSteps) {
            ++lo;
        }
        steps = 0;
        while (hi && lo <= *hi && !probe.holds(*hi, strict) && steps++ < kAdjustSteps) {
            --*hi;
        }
        if (hi && lo > *hi) {
            continue;
        }
        if (lo > 0 && probe.holds(lo - 1, strict)) {
            --lo;
        }
        if (hi && probe.holds(*hi + 1, strict)) {
            ++*hi;
        }
        const NatInterval iv{lo, hi};
        bool ok = false;
        if (hi) {
            ok = std::holds_alternative<Verified>(enumerate_check(f, iv, opts.enum_threshold, strict));
        } else {
            ok = probe.holds(lo, strict) && dominates(*gt, static_cast<double>(lo) + 1, opts.dominance_depth);
        }
        (ok ? sat : unknown).push_back(iv);
    }
    return {NatIntervalSet(std::move(sat)), NatIntervalSet(std::move(unknown))};
}

ComparisonResult compare(const Expr& psi1, const Expr& psi2, const NatIntervalSet& s, bool strict,
                         const CompareOptions& opts) {
    ComparisonResult out;
    if (s.empty()) {
        return out;
    }
    const auto give_up = [&] {
        out.satisfied = {};
        out.residual_unknown = s;
        return out;
    };
    for (const Expr* e : {&psi1, &psi2}) {
        if (contains_min_max(*e) || contains_product(*e)) {
            return give_up();
        }
    }
    const IntegrationOutcome a = eliminate_summations(psi1);
    const IntegrationOutcome b = eliminate_summations(psi2);
    if (!a.closed() || !b.closed()) {
        return give_up();
    }
    try {
        const Expr f = normalize(b.result() - a.result());
        const std::set<std::string> vars = free_vars(f);
        if (vars.size() > 1) {
            return give_up();
        }
        if (vars.empty()) {
            const ExtReal v = evaluate(f, {});
            int sign = v.sign();
            if (!v.is_exact() && v.is_finite() && std::abs(v.to_double()) < kMargin) {
                return give_up();
            }
            if (strict ? sign > 0 : sign >= 0) {
                out.satisfied = s;
            }
            out.approximation_used = !v.is_exact();
            return out;
        }
        const std::string x = *vars.begin();
        if (const auto coeffs = as_polynomial(f, x)) {
            out.satisfied = intersect(polynomial_region(*coeffs, strict), s);
            return out;
        }
        out.approximation_used = true;
        const auto lb = bound_below(f, x);
        if (!lb) {
            return give_up();
        }
        const NatIntervalSet dom = intersect(lb->domain, s);
        PathResult r;
        if (const auto gc = as_polynomial(lb->g, x)) {
            r.satisfied = polynomial_region(*gc, strict);
        } else {
            r = exponential_path(f, lb->g, x, strict, opts);
        }
        out.satisfied = intersect(r.satisfied, dom);
        out.residual_unknown = complement_in(out.satisfied, unite(complement_in(dom, s), intersect(r.unknown, s)));
        return out;
    } catch (const Error&) {
        return give_up();
    }
}

} // namespace

ComparisonResult less_f(const Expr& psi1, const Expr& psi2, const NatIntervalSet& s, const CompareOptions& opts) {
    return compare(psi1, psi2, s, true, opts);
}

ComparisonResult leq_f(const Expr& psi1, const Expr& psi2, const NatIntervalSet& s, const CompareOptions& opts) {
    return compare(psi1, psi2, s, false, opts);
}

EnumerationResult enumerate_check(const Expr& f, const NatInterval& iv, std::int64_t threshold, bool strict) {
    if (!iv.hi || *iv.hi - iv.lo + 1 > threshold) {
        return TooLarge{};
    }
    const auto vars = free_vars(f);
    const Probe probe(f, vars.empty() ? std::string("x") : *vars.begin());
    for (std::int64_t n = iv.lo; n <= *iv.hi; ++n) {
        if (!probe.holds(n, strict)) {
            return CounterexampleAt{n};
        }
    }
    return Verified{};
}

Dominance eventual_dominance(const Expr& f, const std::string& var, std::int64_t c, int depth) {
    const auto terms = to_numterms(normalize(f), var);
    if (!terms) {
        return Dominance::Unknown;
    }
    return dominates(*terms, static_cast<double>(c) + 1, depth) ? Dominance::True : Dominance::Unknown;
}

Dominance eventual_dominance(const Expr& f, std::int64_t c, int depth) {
    const auto vars = free_vars(f);
    if (vars.size() > 1) {
        return Dominance::Unknown;
    }
    return eventual_dominance(f, vars.empty() ? std::string("x") : *vars.begin(), c, depth);
}

} // namespace resbound
