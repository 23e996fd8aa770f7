// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <mutex>
#include <vector>

#include "resbound/fincalc.hpp"
#include "resbound/normal_form.hpp"

namespace resbound {

BigInt stirling2(unsigned m, unsigned k) {
    if (k > m) {
        return 0;
    }
    static std::mutex mu;
    static std::vector<std::vector<BigInt>> rows{{BigInt(1)}};
    std::lock_guard lock(mu);
    while (rows.size() <= m) {
        const auto n = static_cast<unsigned>(rows.size());
        const auto& prev = rows.back();
        std::vector<BigInt> row(n + 1);
        for (unsigned j = 1; j <= n; ++j) {
            const BigInt keep = j < prev.size() ? BigInt(j * prev[j]) : BigInt(0);
            row[j] = keep + prev[j - 1];
        }
        rows.push_back(std::move(row));
    }
    return rows[m][k];
}

Expr power_to_falling(unsigned m, const std::string& var) {
    std::optional<Expr> acc;
    for (unsigned k = m + 1; k-- > 0;) {
        const BigInt s = stirling2(m, k);
        if (s == 0) {
            continue;
        }
        Expr term = falling(resbound::var(var), k);
        if (s != 1) {
            term = constant(Rational(s)) * term;
        }
        acc = acc ? *acc + term : term;
    }
    return *acc;
}

Expr falling_to_power(unsigned k, const std::string& var) { return normalize(falling(resbound::var(var), k)); }

namespace {

using Coeffs = std::vector<Rational>;

// P(x+1) - P(x).
Coeffs forward_difference(const Coeffs& p) {
    Coeffs out(p.size() > 0 ? p.size() - 1 : 0);
    for (std::size_t n = 1; n < p.size(); ++n) {
        // (x+1)^n - x^n = sum_{j<n} C(n,j) x^j
        BigInt binom = 1;
        for (std::size_t j = 0; j < n; ++j) {
            out[j] += p[n] * Rational(binom);
            binom = binom * (n - j) / (j + 1);
        }
    }
    return out;
}

bool all_zero(const Coeffs& p) {
    for (const auto& c : p) {
        if (c != 0) {
            return false;
        }
    }
    return true;
}

// Q with sum P(x) a^{mx+...} dx = Q(x) a^{mx+...}; repeated summation by parts.
Coeffs integrate_times_exponential(const Coeffs& p, const Rational& g) {
    if (all_zero(p)) {
        return {};
    }
    const Rational d = g - 1;
    const Coeffs inner = integrate_times_exponential(forward_difference(p), g);
    Coeffs q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        q[i] = p[i] / d;
        if (i < inner.size()) {
            q[i] -= g / d * inner[i];
        }
    }
    return q;
}

Expr polynomial_expr(const Coeffs& q, const std::string& x) { return from_coefficients(q, x); }

// Integral of the polynomial sum p_k x^k via falling powers.
Expr integrate_polynomial(const Coeffs& p, const std::string& x) {
    Expr acc = constant(0);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0) {
            continue;
        }
        for (unsigned j = 0; j <= k; ++j) {
            const BigInt s = stirling2(static_cast<unsigned>(k), j);
            if (s == 0) {
                continue;
            }
            acc = acc + constant(p[k] * Rational(s) / (j + 1)) * falling(var(x), j + 1);
        }
    }
    return acc;
}

struct Group {
    std::optional<ExpBase> base;
    LinearForm exponent;
    Monomial rest;
    Coeffs poly;
};

} // namespace

IntegrationOutcome discrete_integral(const Expr& e, const std::string& x) {
    const Poly p = to_poly(e);
    // Terms sharing the x-free factor and exponential are integrated together.
    std::map<std::string, Group> groups;
    for (const auto& [key, t] : p.terms()) {
        for (const auto& [akey, atom] : t.mono.atoms) {
            if (depends_on(atom.expr, x)) {
                return Unsupported{"no summation rule for " + akey, atom.expr};
            }
        }
        Monomial rest = t.mono;
        int degree = 0;
        if (const auto it = rest.vars.find(x); it != rest.vars.end()) {
            degree = it->second;
            rest.vars.erase(it);
        }
        if (degree < 0) {
            return Unsupported{"negative power of " + x, t.mono.to_expr()};
        }
        std::optional<ExpBase> base;
        LinearForm exponent;
        for (auto it = rest.exps.begin(); it != rest.exps.end();) {
            if (it->second.coeff(x) == 0) {
                ++it;
                continue;
            }
            if (base) {
                return Unsupported{"product of exponentials in " + x, t.mono.to_expr()};
            }
            base = it->first;
            exponent = it->second;
            it = rest.exps.erase(it);
        }
        if (base && base->is_euler()) {
            return Unsupported{"base-e exponential has no rational summation rule", t.mono.to_expr()};
        }
        const std::string gkey = rest.key() + "|" + (base ? to_string(*base->value) + "^" + to_string(exponent) : "");
        Group& g = groups[gkey];
        g.base = base;
        g.exponent = exponent;
        g.rest = rest;
        if (g.poly.size() <= static_cast<std::size_t>(degree)) {
            g.poly.resize(degree + 1);
        }
        g.poly[degree] += t.coef;
    }

    Expr acc = constant(0);
    for (const auto& [gkey, g] : groups) {
        const Expr rest = g.rest.to_expr();
        if (!g.base) {
            acc = acc + rest * integrate_polynomial(g.poly, x);
            continue;
        }
        const Rational m = g.exponent.coeff(x);
        if (!is_integer(m)) {
            return Unsupported{"non-integer exponent step", pow(constant(*g.base->value), g.exponent.to_expr())};
        }
        const Rational step = pow(*g.base->value, boost::multiprecision::numerator(m).convert_to<std::int64_t>());
        if (step == 1) {
            return Unsupported{"degenerate geometric sum (a^m = 1)",
                               pow(constant(*g.base->value), g.exponent.to_expr())};
        }
        const Coeffs q = integrate_times_exponential(g.poly, step);
        acc = acc + rest * polynomial_expr(q, x) * pow(constant(*g.base->value), g.exponent.to_expr());
    }
    return normalize(acc);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Failure {
    Unsupported u;
};

Expr eliminate(const Expr& e) {
    return std::visit(
        overloaded{
            [&](const Binary& b) -> Expr {
                const Expr l = eliminate(b.lhs);
                const Expr r = eliminate(b.rhs);
                switch (b.op) {
                case BinaryOp::Add: return l + r;
                case BinaryOp::Sub: return l - r;
                case BinaryOp::Mul: return l * r;
                case BinaryOp::Div: break;
                }
                return l / r;
            },
            [&](const Power& p) -> Expr { return pow(eliminate(p.base), eliminate(p.exponent), p.spelling); },
            [&](const Log& l) -> Expr { return log(eliminate(l.base), eliminate(l.arg)); },
            [&](const FallingPower& f) -> Expr { return falling(eliminate(f.arg), f.degree); },
            [&](const Product& s) -> Expr {
                return prod(s.index, eliminate(s.lower), eliminate(s.upper), eliminate(s.body));
            },
            [&](const Summation& s) -> Expr {
                const Expr body = eliminate(s.body);
                const Expr lower = eliminate(s.lower);
                const Expr upper = eliminate(s.upper);
                const IntegrationOutcome f = discrete_integral(body, s.index);
                if (!f.closed()) {
                    const Unsupported& inner = f.unsupported();
                    throw Failure{{inner.reason + " (" + to_string(inner.offending) + ")", e}};
                }
                return substitute(f.result(), s.index, upper + constant(1)) - substitute(f.result(), s.index, lower);
            },
            [&](const auto&) -> Expr { return e; },
        },
        e.node().v);
}

} // namespace

IntegrationOutcome eliminate_summations(const Expr& e) {
    if (!contains_summation(e)) {
        return normalize(e);
    }
    try {
        return normalize(eliminate(e));
    } catch (const Failure& f) {
        return f.u;
    }
}

} // namespace resbound
