// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <mutex>

#include "resbound/errors.hpp"
#include "resbound/normal_form.hpp"

namespace resbound {

// ---------------------------------------------------------------------------
// LinearForm

Rational LinearForm::coeff(const std::string& v) const {
    const auto it = coeffs.find(v);
    return it == coeffs.end() ? Rational(0) : it->second;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
    constant += o.constant;
    for (const auto& [v, c] : o.coeffs) {
        Rational& slot = coeffs[v];
        slot += c;
        if (slot == 0) {
            coeffs.erase(v);
        }
    }
    return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
    LinearForm neg = o;
    neg *= Rational(-1);
    return *this += neg;
}

LinearForm& LinearForm::operator*=(const Rational& k) {
    if (k == 0) {
        constant = 0;
        coeffs.clear();
        return *this;
    }
    constant *= k;
    for (auto& [v, c] : coeffs) {
        c *= k;
    }
    return *this;
}

namespace {

// Appends `coef * body` to `acc` choosing + or - by sign; body may be null for constants.
// `body` already carries the magnitude of `coef`.
Expr append_signed(const std::optional<Expr>& acc, const Rational& coef, const std::optional<Expr>& body) {
    const Rational mag = coef < 0 ? Rational(-coef) : coef;
    Expr piece;
    if (!body) {
        piece = constant(mag);
    } else {
        piece = *body;
    }
    if (!acc) {
        return coef < 0 ? (body ? -piece : constant(coef)) : piece;
    }
    return coef < 0 ? *acc - piece : *acc + piece;
}

} // namespace

Expr LinearForm::to_expr() const {
    std::optional<Expr> acc;
    for (const auto& [v, c] : coeffs) {
        const Rational mag = c < 0 ? Rational(-c) : c;
        acc = append_signed(acc, c, mag == 1 ? var(v) : resbound::constant(mag) * var(v));
    }
    if (constant != 0 || !acc) {
        acc = append_signed(acc, constant, std::nullopt);
    }
    return *acc;
}

std::string to_string(const LinearForm& l) { return to_string(l.to_expr()); }

// ---------------------------------------------------------------------------
// ExpBase / Monomial

double ExpBase::to_double() const { return value ? resbound::to_double(*value) : std::exp(1.0); }

bool operator<(const ExpBase& a, const ExpBase& b) {
    if (a.is_euler() || b.is_euler()) {
        return a.is_euler() && !b.is_euler();
    }
    return *a.value < *b.value;
}

namespace {

Expr base_expr(const ExpBase& b) { return b.value ? constant(*b.value) : euler(); }

// Moves the integer part of a rational-base exponent into a coefficient factor.
Rational fold_exponent(const ExpBase& base, LinearForm& l) {
    if (base.is_euler()) {
        return Rational(1);
    }
    const BigInt k = floor(l.constant);
    if (k == 0) {
        return Rational(1);
    }
    l.constant -= Rational(k);
    return pow(*base.value, k.convert_to<std::int64_t>());
}

} // namespace

Expr Monomial::to_expr() const { return to_expr_scaled(Rational(1)); }

Expr Monomial::to_expr_scaled(const Rational& scale) const {
    std::optional<Expr> acc;
    if (scale != 1 || is_one()) {
        acc = constant(scale);
    }
    auto push = [&](const Expr& f) { acc = acc ? *acc * f : f; };
    for (const auto& [v, k] : vars) {
        push(k == 1 ? var(v) : pow(var(v), constant(k)));
    }
    for (const auto& [b, l] : exps) {
        push(pow(base_expr(b), l.to_expr()));
    }
    for (const auto& [key, a] : atoms) {
        push(a.exponent == 1 ? a.expr : pow(a.expr, constant(a.exponent)));
    }
    return acc ? *acc : constant(1);
}

std::string Monomial::key() const { return is_one() ? std::string() : to_string(to_expr()); }

Term multiply(const Term& a, const Term& b) {
    Term out{a.coef * b.coef, a.mono};
    for (const auto& [v, k] : b.mono.vars) {
        int& slot = out.mono.vars[v];
        slot += k;
        if (slot == 0) {
            out.mono.vars.erase(v);
        }
    }
    for (const auto& [base, l] : b.mono.exps) {
        LinearForm& slot = out.mono.exps[base];
        slot += l;
        out.coef *= fold_exponent(base, slot);
        if (slot.is_zero()) {
            out.mono.exps.erase(base);
        }
    }
    for (const auto& [key, atom] : b.mono.atoms) {
        auto it = out.mono.atoms.find(key);
        if (it == out.mono.atoms.end()) {
            out.mono.atoms.emplace(key, atom);
            continue;
        }
        it->second.exponent += atom.exponent;
        if (it->second.exponent == 0) {
            out.mono.atoms.erase(it);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(const Rational& c) {
    Poly p;
    if (c != 0) {
        p.terms_.emplace(std::string(), Term{c, {}});
    }
    return p;
}

Poly Poly::from_term(Term t) {
    Poly p;
    p.add_term(t);
    return p;
}

std::optional<Rational> Poly::as_constant() const {
    if (terms_.empty()) {
        return Rational(0);
    }
    if (terms_.size() == 1 && terms_.begin()->second.mono.is_one()) {
        return terms_.begin()->second.coef;
    }
    return std::nullopt;
}

void Poly::add_term(const Term& t) {
    if (t.coef == 0) {
        return;
    }
    const std::string key = t.mono.key();
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, t);
        return;
    }
    it->second.coef += t.coef;
    if (it->second.coef == 0) {
        terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [key, t] : o.terms_) {
        add_term(t);
    }
    return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += o.scaled(Rational(-1)); }

Poly Poly::scaled(const Rational& k) const {
    Poly out;
    if (k == 0) {
        return out;
    }
    for (const auto& [key, t] : terms_) {
        out.terms_.emplace(key, Term{t.coef * k, t.mono});
    }
    return out;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ka, ta] : a.terms()) {
        for (const auto& [kb, tb] : b.terms()) {
            out.add_term(multiply(ta, tb));
        }
    }
    return out;
}

Expr Poly::to_expr() const {
    std::optional<Expr> acc;
    for (const auto& [key, t] : terms_) {
        const Rational mag = t.coef < 0 ? Rational(-t.coef) : t.coef;
        acc = append_signed(acc, t.coef,
                            t.mono.is_one() ? std::nullopt : std::optional<Expr>(t.mono.to_expr_scaled(mag)));
    }
    return acc ? *acc : resbound::constant(0);
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

constexpr int kMaxExpansionPower = 64;

Poly atom_poly(const Expr& expr, int exponent = 1) {
    Term t{Rational(1), {}};
    t.mono.atoms.emplace(to_string(expr), Atom{expr, exponent});
    return Poly::from_term(t);
}

std::optional<Term> single_term(const Poly& p) {
    if (p.terms().size() != 1) {
        return std::nullopt;
    }
    return p.terms().begin()->second;
}

// Term raised to an integer power; None when a zero coefficient would be inverted.
std::optional<Term> term_power(const Term& t, std::int64_t n) {
    if (n < 0 && t.coef == 0) {
        return std::nullopt;
    }
    Term out{pow(t.coef, n), {}};
    for (const auto& [v, k] : t.mono.vars) {
        out.mono.vars[v] = static_cast<int>(k * n);
    }
    for (const auto& [base, l] : t.mono.exps) {
        LinearForm scaled = l * Rational(n);
        out.coef *= fold_exponent(base, scaled);
        if (!scaled.is_zero()) {
            out.mono.exps[base] = scaled;
        }
    }
    for (const auto& [key, a] : t.mono.atoms) {
        out.mono.atoms.emplace(key, Atom{a.expr, static_cast<int>(a.exponent * n)});
    }
    return out;
}

// Linear view of a poly whose terms are constants or single variables.
std::optional<LinearForm> poly_linear(const Poly& p) {
    LinearForm out;
    for (const auto& [key, t] : p.terms()) {
        const Monomial& m = t.mono;
        if (!m.exps.empty() || !m.atoms.empty()) {
            return std::nullopt;
        }
        if (m.vars.empty()) {
            out.constant += t.coef;
        } else if (m.vars.size() == 1 && m.vars.begin()->second == 1) {
            out.coeffs[m.vars.begin()->first] += t.coef;
        } else {
            return std::nullopt;
        }
    }
    return out;
}

// e^c for constant c, as a base-e exponential factor with exponent 1*c.
std::optional<std::pair<ExpBase, LinearForm>> pure_exponential(const Poly& p) {
    const auto t = single_term(p);
    if (!t || t->coef != 1 || !t->mono.vars.empty() || !t->mono.atoms.empty() || t->mono.exps.size() != 1) {
        return std::nullopt;
    }
    return *t->mono.exps.begin();
}

Poly exponential_poly(const ExpBase& base, LinearForm exponent) {
    Term t{Rational(1), {}};
    t.coef *= fold_exponent(base, exponent);
    if (!exponent.is_zero()) {
        t.mono.exps.emplace(base, exponent);
    }
    return Poly::from_term(t);
}

Poly normalize_power(const Power& p) {
    const Poly base = p.base.is<Euler>() ? exponential_poly(ExpBase{}, LinearForm{Rational(1), {}}) : to_poly(p.base);
    const Poly exponent = to_poly(p.exponent);
    const Expr base_e = base.to_expr();
    const Expr exp_e = exponent.to_expr();

    if (const auto n = exponent.as_constant(); n && is_integer(*n)) {
        const BigInt big = boost::multiprecision::numerator(*n);
        if (big == 0) {
            return Poly::constant(Rational(1));
        }
        if (big > kMaxExpansionPower * 64 || big < -kMaxExpansionPower * 64) {
            return atom_poly(pow(base_e, exp_e));
        }
        const auto k = big.convert_to<std::int64_t>();
        if (const auto t = single_term(base)) {
            if (const auto r = term_power(*t, k)) {
                return Poly::from_term(*r);
            }
        }
        if (base.is_zero()) {
            return k > 0 ? Poly() : atom_poly(pow(base_e, exp_e));
        }
        if (k > 0 && k <= kMaxExpansionPower) {
            Poly acc = Poly::constant(Rational(1));
            for (std::int64_t i = 0; i < k; ++i) {
                acc = acc * base;
            }
            return acc;
        }
        return atom_poly(base_e, static_cast<int>(k));
    }

    if (const auto c = base.as_constant()) {
        const auto lin = poly_linear(exponent);
        if (*c == 1) {
            return Poly::constant(Rational(1));
        }
        if (lin && *c != 0 && !lin->is_constant()) {
            return exponential_poly(ExpBase{*c}, *lin);
        }
        return atom_poly(pow(base_e, exp_e));
    }

    if (const auto pe = pure_exponential(base); pe && pe->second.is_constant()) {
        if (const auto lin = poly_linear(exponent)) {
            return exponential_poly(pe->first, *lin * pe->second.constant);
        }
    }
    return atom_poly(pow(base_e, exp_e));
}

bool is_euler_poly(const Poly& p) {
    const auto pe = pure_exponential(p);
    return pe && pe->first.is_euler() && pe->second == LinearForm{Rational(1), {}};
}

Poly normalize_log(const Log& l) {
    const bool natural = l.base.is<Euler>();
    const Poly base = natural ? Poly() : to_poly(l.base);
    const bool euler_base = natural || is_euler_poly(base);
    const Poly arg = to_poly(l.arg);
    const Expr arg_e = arg.to_expr();

    if (const auto c = arg.as_constant()) {
        if (*c == 1) {
            return Poly();
        }
        if (!euler_base) {
            if (const auto b = base.as_constant()) {
                if (const auto k = exact_log(*b, *c)) {
                    return Poly::constant(Rational(*k));
                }
            }
        }
    }
    if (const auto pe = pure_exponential(arg)) {
        const bool same_base = euler_base ? pe->first.is_euler()
                                          : (!pe->first.is_euler() && base.as_constant() == pe->first.value);
        if (same_base) {
            return to_poly(pe->second.to_expr());
        }
    }
    if (euler_base) {
        return atom_poly(ln(arg_e));
    }
    return atom_poly(log(base.to_expr(), arg_e));
}

Poly normalize_falling(const FallingPower& f) {
    const Poly arg = to_poly(f.arg);
    Poly acc = Poly::constant(Rational(1));
    for (unsigned i = 0; i < f.degree; ++i) {
        acc = acc * (arg - Poly::constant(Rational(i)));
    }
    return acc;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

Poly to_poly(const Expr& e) {
    return std::visit(
        overloaded{
            [](const Const& c) { return Poly::constant(c.value); },
            [](const Euler&) { return exponential_poly(ExpBase{}, LinearForm{Rational(1), {}}); },
            [](const Var& v) {
                Term t{Rational(1), {}};
                t.mono.vars[v.name] = 1;
                return Poly::from_term(t);
            },
            [](const Binary& b) {
                const Poly x = to_poly(b.lhs);
                const Poly y = to_poly(b.rhs);
                switch (b.op) {
                case BinaryOp::Add: return x + y;
                case BinaryOp::Sub: return x - y;
                case BinaryOp::Mul: return x * y;
                case BinaryOp::Div: break;
                }
                if (const auto t = single_term(y)) {
                    if (const auto inv = term_power(*t, -1)) {
                        return x * Poly::from_term(*inv);
                    }
                }
                if (y.is_zero()) {
                    return x * atom_poly(constant(0), -1);
                }
                return x * atom_poly(y.to_expr(), -1);
            },
            [](const Power& p) { return normalize_power(p); },
            [](const Log& l) { return normalize_log(l); },
            [](const Summation& s) {
                return atom_poly(sum(s.index, normalize(s.lower), normalize(s.upper), normalize(s.body)));
            },
            [](const Product& s) {
                return atom_poly(prod(s.index, normalize(s.lower), normalize(s.upper), normalize(s.body)));
            },
            [](const FallingPower& f) { return normalize_falling(f); },
            [&](const MinOf&) { return atom_poly(e); },
            [&](const MaxOf&) { return atom_poly(e); },
        },
        e.node().v);
}

Expr normalize(const Expr& e) { return to_poly(e).to_expr(); }

std::optional<std::vector<Rational>> as_polynomial(const Expr& e, const std::string& var) {
    const Poly p = to_poly(e);
    std::vector<Rational> coeffs;
    for (const auto& [key, t] : p.terms()) {
        const Monomial& m = t.mono;
        if (!m.exps.empty() || !m.atoms.empty()) {
            return std::nullopt;
        }
        std::size_t degree = 0;
        if (!m.vars.empty()) {
            if (m.vars.size() != 1 || m.vars.begin()->first != var || m.vars.begin()->second < 0) {
                return std::nullopt;
            }
            degree = static_cast<std::size_t>(m.vars.begin()->second);
        }
        if (coeffs.size() <= degree) {
            coeffs.resize(degree + 1);
        }
        coeffs[degree] += t.coef;
    }
    while (!coeffs.empty() && coeffs.back() == 0) {
        coeffs.pop_back();
    }
    return coeffs;
}

Expr from_coefficients(const std::vector<Rational>& coeffs, const std::string& var) {
    Poly p;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        Term t{coeffs[i], {}};
        if (i > 0) {
            t.mono.vars[var] = static_cast<int>(i);
        }
        p.add_term(t);
    }
    return p.to_expr();
}

std::optional<LinearForm> as_linear(const Expr& e) { return poly_linear(to_poly(e)); }

// ---------------------------------------------------------------------------
// Derivatives

namespace {

Expr ln_of(const Expr& base) {
    if (base.is<Euler>()) {
        return constant(1);
    }
    return ln(base);
}

Expr d(const Expr& e, const std::string& x) {
    if (!depends_on(e, x)) {
        if (contains_min_max(e)) {
            throw UnsupportedForm("min/max cannot be differentiated");
        }
        return constant(0);
    }
    return std::visit(
        overloaded{
            [&](const Var&) { return constant(1); },
            [&](const Binary& b) -> Expr {
                switch (b.op) {
                case BinaryOp::Add: return d(b.lhs, x) + d(b.rhs, x);
                case BinaryOp::Sub: return d(b.lhs, x) - d(b.rhs, x);
                case BinaryOp::Mul: return d(b.lhs, x) * b.rhs + b.lhs * d(b.rhs, x);
                case BinaryOp::Div: break;
                }
                return (d(b.lhs, x) * b.rhs - b.lhs * d(b.rhs, x)) / pow(b.rhs, constant(2));
            },
            [&](const Power& p) -> Expr {
                const bool base_dep = depends_on(p.base, x);
                const bool exp_dep = depends_on(p.exponent, x);
                if (!exp_dep) {
                    return p.exponent * pow(p.base, p.exponent - constant(1)) * d(p.base, x);
                }
                if (const auto* c = p.base.as<Const>(); c && c->value <= 0) {
                    throw UnsupportedForm("exponential with non-positive base " + to_string(p.base));
                }
                const Expr self = pow(p.base, p.exponent);
                if (!base_dep) {
                    return self * ln_of(p.base) * d(p.exponent, x);
                }
                return self * (d(p.exponent, x) * ln_of(p.base) + p.exponent * d(p.base, x) / p.base);
            },
            [&](const Log& l) -> Expr {
                if (depends_on(l.base, x)) {
                    return d(ln(l.arg) / ln_of(l.base), x);
                }
                return d(l.arg, x) / (l.arg * ln_of(l.base));
            },
            [&](const FallingPower&) -> Expr { return d(normalize(e), x); },
            [&](const auto&) -> Expr {
                throw UnsupportedForm("cannot differentiate " + to_string(e));
            },
        },
        e.node().v);
}

} // namespace

Expr differentiate(const Expr& e, const std::string& var) { return normalize(d(normalize(e), var)); }

Expr discrete_derivative(const Expr& e, const std::string& x) {
    if (const auto* f = e.as<FallingPower>(); f && f->arg.is<Var>() && f->arg.as<Var>()->name == x) {
        if (f->degree == 0) {
            return constant(0);
        }
        return constant(static_cast<std::int64_t>(f->degree)) * falling(f->arg, f->degree - 1);
    }
    if (const auto* p = e.as<Power>()) {
        const auto* c = p->base.as<Const>();
        const auto lin = as_linear(p->exponent);
        if (c && lin && lin->coeffs.size() == 1 && lin->coeffs.begin()->first == x) {
            const Rational m = lin->coeffs.begin()->second;
            if (m == 1 && c->value == 2) {
                return e;
            }
            if (is_integer(m)) {
                const Rational k = pow(c->value, boost::multiprecision::numerator(m).convert_to<std::int64_t>()) - 1;
                return constant(k) * e;
            }
        }
    }
    if (!depends_on(e, x)) {
        return constant(0);
    }
    return substitute(e, x, var(x) + constant(1)) - e;
}

const Rational& factorial(unsigned n) {
    static const std::vector<Rational> table = [] {
        std::vector<Rational> t(65);
        t[0] = 1;
        for (unsigned i = 1; i < t.size(); ++i) {
            t[i] = t[i - 1] * i;
        }
        return t;
    }();
    if (n < table.size()) {
        return table[n];
    }
    static std::mutex mu;
    static std::map<unsigned, Rational> extra;
    std::lock_guard lock(mu);
    auto it = extra.find(n);
    if (it == extra.end()) {
        Rational v = table.back();
        for (unsigned i = static_cast<unsigned>(table.size()); i <= n; ++i) {
            v *= i;
        }
        it = extra.emplace(n, v).first;
    }
    return it->second;
}

Expr taylor_exponential(const Expr& e, const std::string& var, unsigned order) {
    Expr base;
    Expr g;
    Rational scale = 1;
    if (const auto* p = e.as<Power>()) {
        base = p->base;
        g = p->exponent;
    } else {
        const Poly poly = to_poly(e);
        const auto t = single_term(poly);
        if (!t || !t->mono.vars.empty() || !t->mono.atoms.empty() || t->mono.exps.size() != 1) {
            throw UnsupportedForm("not an exponential: " + to_string(e));
        }
        scale = t->coef;
        base = base_expr(t->mono.exps.begin()->first);
        g = t->mono.exps.begin()->second.to_expr();
    }
    if (!as_polynomial(g, var)) {
        throw UnsupportedForm("exponent is not a polynomial in " + var + ": " + to_string(g));
    }
    Expr log_base;
    if (base.is<Euler>()) {
        log_base = constant(1);
    } else {
        const auto b = to_poly(base).as_constant();
        if (!b) {
            throw UnsupportedForm("non-constant exponential base: " + to_string(base));
        }
        if (*b <= 0) {
            throw UnsupportedForm("exponential base must be positive: " + to_string(base));
        }
        log_base = ln(constant(*b));
    }
    Expr series = constant(0);
    for (unsigned k = 0; k <= order; ++k) {
        series = series + constant(Rational(1) / factorial(k)) * pow(log_base * g, constant(k));
    }
    return normalize(constant(scale) * series);
}

} // namespace resbound
