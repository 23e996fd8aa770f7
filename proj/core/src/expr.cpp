// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "resbound/errors.hpp"
#include "resbound/expr.hpp"

namespace resbound {

namespace {

template <typename T>
Expr make(T node) {
    return Expr(std::make_shared<const Node>(Node{std::move(node)}));
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    for (int i = 1;; ++i) {
        std::string cand = base + "_" + std::to_string(i);
        if (!avoid.contains(cand)) {
            return cand;
        }
    }
}

void collect_binders(const Expr& e, std::set<std::string>& out) {
    std::visit(overloaded{
                   [&](const Binary& b) {
                       collect_binders(b.lhs, out);
                       collect_binders(b.rhs, out);
                   },
                   [&](const Power& p) {
                       collect_binders(p.base, out);
                       collect_binders(p.exponent, out);
                   },
                   [&](const Log& l) {
                       collect_binders(l.base, out);
                       collect_binders(l.arg, out);
                   },
                   [&](const Summation& s) {
                       out.insert(s.index);
                       collect_binders(s.lower, out);
                       collect_binders(s.upper, out);
                       collect_binders(s.body, out);
                   },
                   [&](const Product& s) {
                       out.insert(s.index);
                       collect_binders(s.lower, out);
                       collect_binders(s.upper, out);
                       collect_binders(s.body, out);
                   },
                   [&](const FallingPower& f) { collect_binders(f.arg, out); },
                   [](const auto&) {},
               },
               e.node().v);
}

// Renames every binder in `e` equal to `index` (and its bound occurrences).
Expr rename_binders(const Expr& e, const std::string& index, const std::set<std::string>& avoid) {
    return std::visit(
        overloaded{
            [&](const Binary& b) -> Expr {
                return make(Binary{b.op, rename_binders(b.lhs, index, avoid), rename_binders(b.rhs, index, avoid)});
            },
            [&](const Power& p) -> Expr {
                return make(Power{rename_binders(p.base, index, avoid), rename_binders(p.exponent, index, avoid),
                                  p.spelling});
            },
            [&](const Log& l) -> Expr {
                return make(Log{rename_binders(l.base, index, avoid), rename_binders(l.arg, index, avoid)});
            },
            [&](const Summation& s) -> Expr {
                Summation out{s.index, rename_binders(s.lower, index, avoid), rename_binders(s.upper, index, avoid),
                              rename_binders(s.body, index, avoid)};
                if (s.index == index) {
                    out.index = fresh_name(index, avoid);
                    out.body = rename_var(out.body, index, out.index);
                }
                return make(std::move(out));
            },
            [&](const Product& s) -> Expr {
                Product out{s.index, rename_binders(s.lower, index, avoid), rename_binders(s.upper, index, avoid),
                            rename_binders(s.body, index, avoid)};
                if (s.index == index) {
                    out.index = fresh_name(index, avoid);
                    out.body = rename_var(out.body, index, out.index);
                }
                return make(std::move(out));
            },
            [&](const FallingPower& f) -> Expr {
                return make(FallingPower{rename_binders(f.arg, index, avoid), f.degree});
            },
            [&](const auto&) -> Expr { return e; },
        },
        e.node().v);
}

std::set<std::string> all_names(const Expr& e) {
    std::set<std::string> names = free_vars(e);
    collect_binders(e, names);
    return names;
}

} // namespace

Expr::Expr() : node_(std::make_shared<const Node>(Node{Const{Rational(0), {}}})) {}

Expr constant(const Rational& value, std::string spelling) { return make(Const{value, std::move(spelling)}); }
Expr constant(std::int64_t value) { return make(Const{Rational(value), {}}); }
Expr euler() { return make(Euler{}); }
Expr var(std::string name) { return make(Var{std::move(name)}); }
Expr operator+(const Expr& a, const Expr& b) { return make(Binary{BinaryOp::Add, a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make(Binary{BinaryOp::Sub, a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return make(Binary{BinaryOp::Mul, a, b}); }

Expr operator/(const Expr& a, const Expr& b) {
    if (const auto* c = b.as<Const>(); c && c->value == 0) {
        throw DomainError("division by the constant 0");
    }
    return make(Binary{BinaryOp::Div, a, b});
}

Expr operator-(const Expr& a) { return constant(0) - a; }

Expr pow(const Expr& base, const Expr& exponent, PowerSpelling spelling) {
    return make(Power{base, exponent, spelling});
}

Expr log(const Expr& base, const Expr& arg) { return make(Log{base, arg}); }
Expr ln(const Expr& arg) { return make(Log{euler(), arg}); }

Expr sum(const std::string& index, const Expr& lower, const Expr& upper, const Expr& body) {
    std::set<std::string> avoid = all_names(body);
    avoid.insert(index);
    return make(Summation{index, lower, upper, rename_binders(body, index, avoid)});
}

Expr prod(const std::string& index, const Expr& lower, const Expr& upper, const Expr& body) {
    std::set<std::string> avoid = all_names(body);
    avoid.insert(index);
    return make(Product{index, lower, upper, rename_binders(body, index, avoid)});
}

Expr falling(const Expr& arg, unsigned degree) { return make(FallingPower{arg, degree}); }
Expr min_of(std::string array) { return make(MinOf{std::move(array)}); }
Expr max_of(std::string array) { return make(MaxOf{std::move(array)}); }

bool operator==(const Expr& a, const Expr& b) {
    if (&a.node() == &b.node()) {
        return true;
    }
    if (a.node().v.index() != b.node().v.index()) {
        return false;
    }
    return std::visit(
        overloaded{
            [&](const Const& x) { return x.value == b.as<Const>()->value; },
            [&](const Euler&) { return true; },
            [&](const Var& x) { return x.name == b.as<Var>()->name; },
            [&](const Binary& x) {
                const auto* y = b.as<Binary>();
                return x.op == y->op && x.lhs == y->lhs && x.rhs == y->rhs;
            },
            [&](const Power& x) {
                const auto* y = b.as<Power>();
                return x.base == y->base && x.exponent == y->exponent;
            },
            [&](const Log& x) {
                const auto* y = b.as<Log>();
                return x.base == y->base && x.arg == y->arg;
            },
            [&](const Summation& x) {
                const auto* y = b.as<Summation>();
                return x.index == y->index && x.lower == y->lower && x.upper == y->upper && x.body == y->body;
            },
            [&](const Product& x) {
                const auto* y = b.as<Product>();
                return x.index == y->index && x.lower == y->lower && x.upper == y->upper && x.body == y->body;
            },
            [&](const FallingPower& x) {
                const auto* y = b.as<FallingPower>();
                return x.degree == y->degree && x.arg == y->arg;
            },
            [&](const MinOf& x) { return x.array == b.as<MinOf>()->array; },
            [&](const MaxOf& x) { return x.array == b.as<MaxOf>()->array; },
        },
        a.node().v);
}

std::set<std::string> free_vars(const Expr& e) {
    std::set<std::string> out;
    std::visit(overloaded{
                   [&](const Var& v) { out.insert(v.name); },
                   [&](const Binary& b) {
                       out.merge(free_vars(b.lhs));
                       out.merge(free_vars(b.rhs));
                   },
                   [&](const Power& p) {
                       out.merge(free_vars(p.base));
                       out.merge(free_vars(p.exponent));
                   },
                   [&](const Log& l) {
                       out.merge(free_vars(l.base));
                       out.merge(free_vars(l.arg));
                   },
                   [&](const Summation& s) {
                       auto body = free_vars(s.body);
                       body.erase(s.index);
                       out.merge(body);
                       out.merge(free_vars(s.lower));
                       out.merge(free_vars(s.upper));
                   },
                   [&](const Product& s) {
                       auto body = free_vars(s.body);
                       body.erase(s.index);
                       out.merge(body);
                       out.merge(free_vars(s.lower));
                       out.merge(free_vars(s.upper));
                   },
                   [&](const FallingPower& f) { out.merge(free_vars(f.arg)); },
                   [](const auto&) {},
               },
               e.node().v);
    return out;
}

bool depends_on(const Expr& e, const std::string& var) { return free_vars(e).contains(var); }

namespace {

template <typename Bound>
Expr substitute_binder(const Bound& s, const std::string& name, const Expr& replacement) {
    Expr lower = substitute(s.lower, name, replacement);
    Expr upper = substitute(s.upper, name, replacement);
    if (s.index == name) {
        return make(Bound{s.index, lower, upper, s.body});
    }
    std::string index = s.index;
    Expr body = s.body;
    if (depends_on(replacement, index)) {
        std::set<std::string> avoid = all_names(body);
        avoid.merge(free_vars(replacement));
        avoid.insert(name);
        index = fresh_name(s.index, avoid);
        body = rename_var(body, s.index, index);
    }
    return make(Bound{index, lower, upper, substitute(body, name, replacement)});
}

} // namespace

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
    return std::visit(
        overloaded{
            [&](const Var& v) -> Expr { return v.name == name ? replacement : e; },
            [&](const Binary& b) -> Expr {
                return make(Binary{b.op, substitute(b.lhs, name, replacement), substitute(b.rhs, name, replacement)});
            },
            [&](const Power& p) -> Expr {
                return make(Power{substitute(p.base, name, replacement), substitute(p.exponent, name, replacement),
                                  p.spelling});
            },
            [&](const Log& l) -> Expr {
                return make(Log{substitute(l.base, name, replacement), substitute(l.arg, name, replacement)});
            },
            [&](const Summation& s) -> Expr { return substitute_binder(s, name, replacement); },
            [&](const Product& s) -> Expr { return substitute_binder(s, name, replacement); },
            [&](const FallingPower& f) -> Expr {
                return make(FallingPower{substitute(f.arg, name, replacement), f.degree});
            },
            [&](const auto&) -> Expr { return e; },
        },
        e.node().v);
}

Expr rename_var(const Expr& e, const std::string& from, const std::string& to) {
    if (from == to) {
        return e;
    }
    return substitute(e, from, var(to));
}

namespace {

template <typename Pred>
bool any_node(const Expr& e, Pred pred) {
    if (pred(e)) {
        return true;
    }
    return std::visit(overloaded{
                          [&](const Binary& b) { return any_node(b.lhs, pred) || any_node(b.rhs, pred); },
                          [&](const Power& p) { return any_node(p.base, pred) || any_node(p.exponent, pred); },
                          [&](const Log& l) { return any_node(l.base, pred) || any_node(l.arg, pred); },
                          [&](const Summation& s) {
                              return any_node(s.lower, pred) || any_node(s.upper, pred) || any_node(s.body, pred);
                          },
                          [&](const Product& s) {
                              return any_node(s.lower, pred) || any_node(s.upper, pred) || any_node(s.body, pred);
                          },
                          [&](const FallingPower& f) { return any_node(f.arg, pred); },
                          [](const auto&) { return false; },
                      },
                      e.node().v);
}

} // namespace

bool contains_summation(const Expr& e) {
    return any_node(e, [](const Expr& x) { return x.is<Summation>(); });
}
bool contains_product(const Expr& e) {
    return any_node(e, [](const Expr& x) { return x.is<Product>(); });
}
bool contains_min_max(const Expr& e) {
    return any_node(e, [](const Expr& x) { return x.is<MinOf>() || x.is<MaxOf>(); });
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Level { kAdd = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5 };

struct Printed {
    std::string text;
    int level;
};

Printed print(const Expr& e);

std::string at_least(const Expr& e, int level) {
    Printed p = print(e);
    if (p.level < level) {
        return "(" + p.text + ")";
    }
    return p.text;
}

bool is_int_const(const Expr& e) {
    const auto* c = e.as<Const>();
    return c && is_integer(c->value);
}

Printed print_const(const Const& c) {
    const Rational mag = c.value < 0 ? Rational(-c.value) : c.value;
    std::string body;
    if (!c.spelling.empty()) {
        if (const auto parsed = parse_rational(c.spelling); parsed && *parsed == mag) {
            body = c.spelling;
        }
    }
    if (body.empty()) {
        body = to_string(mag);
    }
    const bool fraction = body.find('/') != std::string::npos;
    if (c.value < 0) {
        return {"-" + body, fraction ? kMul : kUnary};
    }
    return {body, fraction ? kMul : kAtom};
}

Printed print(const Expr& e) {
    return std::visit(
        overloaded{
            [](const Const& c) { return print_const(c); },
            [](const Euler&) { return Printed{"exp(1)", kAtom}; },
            [](const Var& v) { return Printed{v.name, kAtom}; },
            [&](const Binary& b) {
                switch (b.op) {
                case BinaryOp::Add: return Printed{at_least(b.lhs, kAdd) + "+" + at_least(b.rhs, kMul), kAdd};
                case BinaryOp::Sub: {
                    const auto* zero = b.lhs.as<Const>();
                    if (zero && zero->value == 0 && !b.rhs.is<Const>()) {
                        return Printed{"-" + at_least(b.rhs, kUnary), kUnary};
                    }
                    return Printed{at_least(b.lhs, kAdd) + "-" + at_least(b.rhs, kMul), kAdd};
                }
                case BinaryOp::Mul: return Printed{at_least(b.lhs, kMul) + "*" + at_least(b.rhs, kUnary), kMul};
                case BinaryOp::Div: {
                    // int/int would read back as a rational literal.
                    std::string lhs = (is_int_const(b.lhs) && is_int_const(b.rhs))
                                          ? "(" + print(b.lhs).text + ")"
                                          : at_least(b.lhs, kMul);
                    return Printed{lhs + "/" + at_least(b.rhs, kUnary), kMul};
                }
                }
                return Printed{"?", kAtom};
            },
            [](const Power& p) {
                if (p.base.is<Euler>()) {
                    return Printed{"exp(" + print(p.exponent).text + ")", kAtom};
                }
                switch (p.spelling) {
                case PowerSpelling::ExpCall:
                    return Printed{"exp(" + print(p.base).text + "," + print(p.exponent).text + ")", kAtom};
                case PowerSpelling::PowerCall:
                    return Printed{"power(" + print(p.base).text + "," + print(p.exponent).text + ")", kAtom};
                case PowerSpelling::Stars: break;
                }
                return Printed{at_least(p.base, kAtom) + "**" + at_least(p.exponent, kUnary), kPow};
            },
            [](const Log& l) {
                if (l.base.is<Euler>()) {
                    return Printed{"ln(" + print(l.arg).text + ")", kAtom};
                }
                return Printed{"log(" + print(l.base).text + "," + print(l.arg).text + ")", kAtom};
            },
            [](const Summation& s) {
                return Printed{"sum(" + s.index + "," + print(s.lower).text + "," + print(s.upper).text + "," +
                                   print(s.body).text + ")",
                               kAtom};
            },
            [](const Product& s) {
                return Printed{"prod(" + s.index + "," + print(s.lower).text + "," + print(s.upper).text + "," +
                                   print(s.body).text + ")",
                               kAtom};
            },
            [](const FallingPower& f) {
                return Printed{"falling(" + print(f.arg).text + "," + std::to_string(f.degree) + ")", kAtom};
            },
            [](const MinOf& m) { return Printed{"min(" + m.array + ")", kAtom}; },
            [](const MaxOf& m) { return Printed{"max(" + m.array + ")", kAtom}; },
        },
        e.node().v);
}

} // namespace

std::string to_string(const Expr& e) { return print(e).text; }

// ---------------------------------------------------------------------------
// ExtReal

ExtReal ExtReal::exact(Rational value) {
    ExtReal r;
    r.value_ = std::move(value);
    return r;
}

ExtReal ExtReal::approx(double value) {
    ExtReal r;
    if (std::isinf(value)) {
        r.kind_ = value > 0 ? Kind::PosInf : Kind::NegInf;
    }
    r.value_ = value;
    return r;
}

ExtReal ExtReal::pos_inf() {
    ExtReal r;
    r.kind_ = Kind::PosInf;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
}

ExtReal ExtReal::neg_inf() {
    ExtReal r;
    r.kind_ = Kind::NegInf;
    r.value_ = -std::numeric_limits<double>::infinity();
    return r;
}

double ExtReal::to_double() const {
    switch (kind_) {
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    case Kind::Finite: break;
    }
    if (const auto* q = std::get_if<Rational>(&value_)) {
        return resbound::to_double(*q);
    }
    return std::get<double>(value_);
}

int ExtReal::sign() const {
    switch (kind_) {
    case Kind::PosInf: return 1;
    case Kind::NegInf: return -1;
    case Kind::Finite: break;
    }
    if (const auto* q = std::get_if<Rational>(&value_)) {
        return q->sign();
    }
    const double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
}

namespace {

ExtReal combine(const ExtReal& a, const ExtReal& b, char op) {
    if (a.is_exact() && b.is_exact()) {
        switch (op) {
        case '+': return ExtReal::exact(a.exact_value() + b.exact_value());
        case '-': return ExtReal::exact(a.exact_value() - b.exact_value());
        default: return ExtReal::exact(a.exact_value() * b.exact_value());
        }
    }
    const double x = a.to_double();
    const double y = b.to_double();
    switch (op) {
    case '+': return ExtReal::approx(x + y);
    case '-': return ExtReal::approx(x - y);
    default: return ExtReal::approx(x * y);
    }
}

} // namespace

ExtReal operator+(const ExtReal& a, const ExtReal& b) { return combine(a, b, '+'); }
ExtReal operator-(const ExtReal& a, const ExtReal& b) { return combine(a, b, '-'); }
ExtReal operator*(const ExtReal& a, const ExtReal& b) { return combine(a, b, '*'); }

ExtReal operator-(const ExtReal& a) {
    if (a.is_exact()) {
        return ExtReal::exact(-a.exact_value());
    }
    return ExtReal::approx(-a.to_double());
}

int compare(const ExtReal& a, const ExtReal& b) {
    if (a.is_exact() && b.is_exact()) {
        return a.exact_value().compare(b.exact_value()) < 0 ? -1 : (a.exact_value() == b.exact_value() ? 0 : 1);
    }
    const double x = a.to_double();
    const double y = b.to_double();
    return (x > y) - (x < y);
}

std::string to_string(const ExtReal& v) {
    switch (v.kind()) {
    case ExtReal::Kind::PosInf: return "inf";
    case ExtReal::Kind::NegInf: return "-inf";
    case ExtReal::Kind::Finite: break;
    }
    if (v.is_exact()) {
        return to_string(v.exact_value());
    }
    return fmt::format("{}", v.to_double());
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

constexpr std::int64_t kMaxExactExponent = 200000;
constexpr std::int64_t kMaxLoopLength = 10000000;

// log of |q| that stays finite for huge rationals.
double log_abs(const Rational& q) {
    auto log_big = [](BigInt v) {
        if (v < 0) {
            v = -v;
        }
        const auto bits = static_cast<long>(boost::multiprecision::msb(v));
        if (bits < 900) {
            return std::log(v.convert_to<double>());
        }
        const long shift = bits - 900;
        v >>= shift;
        return std::log(v.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
    };
    return log_big(boost::multiprecision::numerator(q)) - log_big(boost::multiprecision::denominator(q));
}

ExtReal eval_power(const ExtReal& base, const ExtReal& exponent) {
    if (base.is_exact() && exponent.is_exact() && is_integer(exponent.exact_value())) {
        const BigInt n = boost::multiprecision::numerator(exponent.exact_value());
        if (n >= -kMaxExactExponent && n <= kMaxExactExponent) {
            return ExtReal::exact(resbound::pow(base.exact_value(), n.convert_to<std::int64_t>()));
        }
    }
    const double b = base.to_double();
    const double x = exponent.to_double();
    const bool integral_exponent =
        exponent.is_exact() ? is_integer(exponent.exact_value()) : (std::floor(x) == x);
    if (b < 0 && !integral_exponent) {
        throw DomainError("negative base with non-integer exponent");
    }
    if (b == 0 && x < 0) {
        throw DomainError("zero raised to a negative power");
    }
    return ExtReal::approx(std::pow(b, x));
}

ExtReal eval_log(const ExtReal& base, const ExtReal& arg, bool natural) {
    if (arg.sign() < 0) {
        throw DomainError("logarithm of a negative value");
    }
    if (!natural && (base.sign() <= 0 || (base.is_exact() && base.exact_value() == 1))) {
        throw DomainError("logarithm base must be positive and different from 1");
    }
    if (arg.sign() == 0) {
        // limit from the right
        return natural || compare(base, ExtReal::exact(Rational(1))) > 0 ? ExtReal::neg_inf() : ExtReal::pos_inf();
    }
    if (natural) {
        if (arg.is_exact() && arg.exact_value() == 1) {
            return ExtReal::exact(Rational(0));
        }
        return ExtReal::approx(arg.is_exact() ? log_abs(arg.exact_value()) : std::log(arg.to_double()));
    }
    if (base.sign() <= 0 || (base.is_exact() && base.exact_value() == 1)) {
        throw DomainError("logarithm base must be positive and different from 1");
    }
    if (base.is_exact() && arg.is_exact()) {
        if (const auto k = exact_log(base.exact_value(), arg.exact_value())) {
            return ExtReal::exact(Rational(*k));
        }
        return ExtReal::approx(log_abs(arg.exact_value()) / log_abs(base.exact_value()));
    }
    return ExtReal::approx(std::log(arg.to_double()) / std::log(base.to_double()));
}

Rational require_exact(const ExtReal& v, const char* what) {
    if (!v.is_exact()) {
        throw DomainError(std::string(what) + " must evaluate to an exact value");
    }
    return v.exact_value();
}

template <typename Bound>
ExtReal eval_loop(const Bound& s, const Env& env, bool is_sum) {
    const BigInt lo = ceil(require_exact(evaluate(s.lower, env), "summation bound"));
    const BigInt hi = floor(require_exact(evaluate(s.upper, env), "summation bound"));
    ExtReal acc = ExtReal::exact(Rational(is_sum ? 0 : 1));
    if (hi < lo) {
        return acc;
    }
    if (hi - lo > kMaxLoopLength) {
        throw DomainError("summation range too long to evaluate");
    }
    Env inner = env;
    for (BigInt i = lo; i <= hi; ++i) {
        inner[s.index] = Rational(i);
        const ExtReal term = evaluate(s.body, inner);
        acc = is_sum ? acc + term : acc * term;
    }
    return acc;
}

} // namespace

ExtReal evaluate(const Expr& e, const Env& env) {
    return std::visit(
        overloaded{
            [](const Const& c) { return ExtReal::exact(c.value); },
            [](const Euler&) { return ExtReal::approx(std::exp(1.0)); },
            [&](const Var& v) {
                const auto it = env.find(v.name);
                if (it == env.end()) {
                    throw UnboundVariable(v.name);
                }
                return ExtReal::exact(it->second);
            },
            [&](const Binary& b) {
                const ExtReal x = evaluate(b.lhs, env);
                const ExtReal y = evaluate(b.rhs, env);
                switch (b.op) {
                case BinaryOp::Add: return x + y;
                case BinaryOp::Sub: return x - y;
                case BinaryOp::Mul: return x * y;
                case BinaryOp::Div: break;
                }
                if (y.sign() == 0) {
                    throw DomainError("division by zero");
                }
                if (x.is_exact() && y.is_exact()) {
                    return ExtReal::exact(x.exact_value() / y.exact_value());
                }
                return ExtReal::approx(x.to_double() / y.to_double());
            },
            [&](const Power& p) {
                if (p.base.is<Euler>()) {
                    const ExtReal x = evaluate(p.exponent, env);
                    if (x.is_exact() && x.exact_value() == 0) {
                        return ExtReal::exact(Rational(1));
                    }
                    return ExtReal::approx(std::exp(x.to_double()));
                }
                return eval_power(evaluate(p.base, env), evaluate(p.exponent, env));
            },
            [&](const Log& l) {
                const bool natural = l.base.is<Euler>();
                const ExtReal base = natural ? ExtReal::approx(std::exp(1.0)) : evaluate(l.base, env);
                return eval_log(base, evaluate(l.arg, env), natural);
            },
            [&](const Summation& s) { return eval_loop(s, env, true); },
            [&](const Product& s) { return eval_loop(s, env, false); },
            [&](const FallingPower& f) {
                const ExtReal x = evaluate(f.arg, env);
                ExtReal acc = ExtReal::exact(Rational(1));
                for (unsigned k = 0; k < f.degree; ++k) {
                    acc = acc * (x - ExtReal::exact(Rational(k)));
                }
                return acc;
            },
            [](const MinOf& m) -> ExtReal { throw MinMaxUnsupported("min(" + m.array + ") needs array data"); },
            [](const MaxOf& m) -> ExtReal { throw MinMaxUnsupported("max(" + m.array + ") needs array data"); },
        },
        e.node().v);
}

double evaluate_numeric(const Expr& e, const std::map<std::string, double>& env) {
    return std::visit(
        overloaded{
            [](const Const& c) { return to_double(c.value); },
            [](const Euler&) { return std::exp(1.0); },
            [&](const Var& v) {
                const auto it = env.find(v.name);
                if (it == env.end()) {
                    throw UnboundVariable(v.name);
                }
                return it->second;
            },
            [&](const Binary& b) {
                const double x = evaluate_numeric(b.lhs, env);
                const double y = evaluate_numeric(b.rhs, env);
                switch (b.op) {
                case BinaryOp::Add: return x + y;
                case BinaryOp::Sub: return x - y;
                case BinaryOp::Mul: return x * y;
                case BinaryOp::Div: break;
                }
                if (y == 0) {
                    throw DomainError("division by zero");
                }
                return x / y;
            },
            [&](const Power& p) {
                const double x = evaluate_numeric(p.exponent, env);
                if (p.base.is<Euler>()) {
                    return std::exp(x);
                }
                const double b = evaluate_numeric(p.base, env);
                if (b < 0 && std::floor(x) != x) {
                    throw DomainError("negative base with non-integer exponent");
                }
                if (b == 0 && x < 0) {
                    throw DomainError("zero raised to a negative power");
                }
                return std::pow(b, x);
            },
            [&](const Log& l) {
                const double a = evaluate_numeric(l.arg, env);
                if (a <= 0) {
                    throw DomainError("logarithm of a non-positive value");
                }
                if (l.base.is<Euler>()) {
                    return std::log(a);
                }
                const double b = evaluate_numeric(l.base, env);
                if (b <= 0 || b == 1) {
                    throw DomainError("logarithm base must be positive and different from 1");
                }
                return std::log(a) / std::log(b);
            },
            [&](const Summation& s) {
                const double lo = std::ceil(evaluate_numeric(s.lower, env));
                const double hi = std::floor(evaluate_numeric(s.upper, env));
                if (hi - lo > static_cast<double>(kMaxLoopLength)) {
                    throw DomainError("summation range too long to evaluate");
                }
                auto inner = env;
                double acc = 0;
                for (double i = lo; i <= hi; i += 1) {
                    inner[s.index] = i;
                    acc += evaluate_numeric(s.body, inner);
                }
                return acc;
            },
            [&](const Product& s) {
                const double lo = std::ceil(evaluate_numeric(s.lower, env));
                const double hi = std::floor(evaluate_numeric(s.upper, env));
                if (hi - lo > static_cast<double>(kMaxLoopLength)) {
                    throw DomainError("product range too long to evaluate");
                }
                auto inner = env;
                double acc = 1;
                for (double i = lo; i <= hi; i += 1) {
                    inner[s.index] = i;
                    acc *= evaluate_numeric(s.body, inner);
                }
                return acc;
            },
            [&](const FallingPower& f) {
                const double x = evaluate_numeric(f.arg, env);
                double acc = 1;
                for (unsigned k = 0; k < f.degree; ++k) {
                    acc *= x - k;
                }
                return acc;
            },
            [](const MinOf& m) -> double { throw MinMaxUnsupported("min(" + m.array + ") needs array data"); },
            [](const MaxOf& m) -> double { throw MinMaxUnsupported("max(" + m.array + ") needs array data"); },
        },
        e.node().v);
}

} // namespace resbound
