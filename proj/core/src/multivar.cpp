// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <numeric>
#include <set>

#include "resbound/errors.hpp"
#include "resbound/multivar.hpp"

namespace resbound {

namespace {

// e > 0 when strict, e >= 0 otherwise.
struct Ineq {
    LinearForm e;
    bool strict = false;
};

Ineq to_ineq(const SizeConstraint& c) {
    const auto l = as_linear(c.rhs - c.lhs);
    if (!l) {
        throw UnsupportedForm("non-affine size constraint: " + to_string(c));
    }
    return {*l, c.kind == SizeConstraint::Kind::Lt};
}

std::vector<Ineq> to_ineqs(const SizeConstraintSet& cs) {
    std::vector<Ineq> out;
    for (const auto& c : cs.conjuncts) {
        out.push_back(to_ineq(c));
    }
    return out;
}

bool feasible(std::vector<Ineq> sys) {
    std::set<std::string> vars;
    for (const auto& q : sys) {
        for (const auto& [v, c] : q.e.coeffs) {
            vars.insert(v);
        }
    }
    for (const auto& v : vars) {
        LinearForm nonneg;
        nonneg.coeffs[v] = 1;
        sys.push_back({nonneg, false});
    }
    for (const auto& v : vars) {
        std::vector<Ineq> pos;
        std::vector<Ineq> neg;
        std::vector<Ineq> next;
        for (auto& q : sys) {
            const Rational a = q.e.coeff(v);
            if (a > 0) {
                pos.push_back(q);
            } else if (a < 0) {
                neg.push_back(q);
            } else {
                next.push_back(q);
            }
        }
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                const Rational ap = p.e.coeff(v);
                const Rational an = -n.e.coeff(v);
                Ineq c{p.e * an + n.e * ap, p.strict || n.strict};
                c.e.coeffs.erase(v);
                next.push_back(std::move(c));
            }
        }
        sys = std::move(next);
    }
    for (const auto& q : sys) {
        if (q.strict ? q.e.constant <= 0 : q.e.constant < 0) {
            return false;
        }
    }
    return true;
}

Ineq negate(const Ineq& q) { return {q.e * Rational(-1), !q.strict}; }

BigInt lcm_of(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

// Primitive integer coefficients; constant rounded down where that is exact over the naturals.
Ineq tighten(Ineq q) {
    if (q.e.coeffs.empty()) {
        return q;
    }
    BigInt den = 1;
    for (const auto& [v, c] : q.e.coeffs) {
        den = lcm_of(den, boost::multiprecision::denominator(c));
    }
    q.e *= Rational(den);
    BigInt g = 0;
    for (const auto& [v, c] : q.e.coeffs) {
        g = boost::multiprecision::gcd(g, abs(boost::multiprecision::numerator(c)));
    }
    q.e *= Rational(1) / Rational(g);
    if (q.strict) {
        if (is_integer(q.e.constant)) {
            // integer e > 0 is e - 1 >= 0; keep the strict spelling.
            return q;
        }
        q.strict = false;
    }
    q.e.constant = Rational(floor(q.e.constant));
    return q;
}

bool implicit(const Ineq& q) {
    // v >= 0 and sums of non-negative terms are always true.
    if (q.strict || q.e.constant < 0) {
        return false;
    }
    for (const auto& [v, c] : q.e.coeffs) {
        if (c < 0) {
            return false;
        }
    }
    return true;
}

SizeConstraint render(const Ineq& q) {
    LinearForm varpart = q.e;
    varpart.constant = 0;
    const auto kind = q.strict ? SizeConstraint::Kind::Lt : SizeConstraint::Kind::Leq;
    return {kind, constant(-q.e.constant), varpart.to_expr()};
}

SizeConstraintSet build(std::vector<Ineq> sys) {
    SizeConstraintSet out;
    if (!feasible(sys)) {
        out.satisfiable = false;
        return out;
    }
    for (auto& q : sys) {
        q = tighten(q);
    }
    for (std::size_t i = 0; i < sys.size();) {
        std::vector<Ineq> rest;
        for (std::size_t j = 0; j < sys.size(); ++j) {
            if (j != i) {
                rest.push_back(sys[j]);
            }
        }
        const bool redundant = implicit(sys[i]) || [&] {
            rest.push_back(negate(sys[i]));
            return !feasible(rest);
        }();
        if (redundant) {
            sys.erase(sys.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    for (const auto& q : sys) {
        out.conjuncts.push_back(render(q));
    }
    return out;
}

} // namespace

std::string to_string(const SizeConstraint& c) {
    return std::string(c.kind == SizeConstraint::Kind::Lt ? "lt(" : "leq(") + to_string(c.lhs) + "," +
           to_string(c.rhs) + ")";
}

std::string to_string(const SizeConstraintSet& cs) {
    std::string out = "[";
    for (std::size_t i = 0; i < cs.conjuncts.size(); ++i) {
        out += (i ? "," : "") + to_string(cs.conjuncts[i]);
    }
    return out + "]";
}

bool constraint_sat(const SizeConstraintSet& cs) { return cs.satisfiable && feasible(to_ineqs(cs)); }

SizeConstraintSet simplify(const SizeConstraintSet& cs) {
    if (!cs.satisfiable) {
        return cs;
    }
    return build(to_ineqs(cs));
}

SizeConstraintSet conjoin(const SizeConstraintSet& a, const SizeConstraintSet& b) {
    if (!a.satisfiable || !b.satisfiable) {
        return {{}, false};
    }
    std::vector<Ineq> sys = to_ineqs(a);
    const auto more = to_ineqs(b);
    sys.insert(sys.end(), more.begin(), more.end());
    return build(std::move(sys));
}

bool satisfies(const SizeConstraintSet& cs, const Env& env) {
    if (!cs.satisfiable) {
        return false;
    }
    for (const auto& c : cs.conjuncts) {
        const ExtReal l = evaluate(c.lhs, env);
        const ExtReal r = evaluate(c.rhs, env);
        const int cmp = compare(l, r);
        if (c.kind == SizeConstraint::Kind::Lt ? cmp >= 0 : cmp > 0) {
            return false;
        }
    }
    return true;
}

std::variant<LinearComparison, NonlinearUnsupported> compare_linear(const Expr& f, const Expr& g,
                                                                    const SizeConstraintSet& domain, bool strict) {
    const auto d = as_linear(normalize(g - f));
    if (!d) {
        return NonlinearUnsupported{"difference is not affine: " + to_string(normalize(g - f))};
    }
    std::vector<Ineq> base;
    try {
        if (!domain.satisfiable) {
            return LinearComparison{domain, domain};
        }
        base = to_ineqs(domain);
    } catch (const UnsupportedForm& e) {
        return NonlinearUnsupported{e.what()};
    }
    const Ineq holds{*d, strict};
    std::vector<Ineq> h = base;
    h.push_back(holds);
    std::vector<Ineq> x = base;
    x.push_back(negate(holds));
    return LinearComparison{build(std::move(h)), build(std::move(x))};
}

} // namespace resbound
