// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "resbound/assertlang.hpp"
#include "resbound/errors.hpp"
#include "resbound/parser.hpp"

namespace resbound {

namespace {

constexpr std::array<std::pair<Status, std::string_view>, 5> kStatuses = {{
    {Status::Check, "check"},
    {Status::Checked, "checked"},
    {Status::False, "false"},
    {Status::Trust, "trust"},
    {Status::True, "true"},
}};

bool wordlike(const Token& t) { return t.kind == TokenKind::Ident || t.kind == TokenKind::Number; }

Scope parse_scope(TokenStream& ts) {
    Scope s;
    s.pred = ts.expect_ident("scope").text;
    ts.expect("(", "scope");
    if (!ts.accept(")")) {
        do {
            s.args.push_back(ts.expect_ident("arguments").text);
        } while (ts.accept(","));
        ts.expect(")", "scope");
    }
    return s;
}

bool at_stop(const TokenStream& ts) {
    return ts.at_end() || ts.at(",") || ts.at(")") || ts.at("=>") || ts.at("+") || ts.at(".") || ts.at("#");
}

// Balanced token run up to the next top-level separator, re-spelled compactly.
std::string parse_opaque(TokenStream& ts) {
    std::string out;
    int depth = 0;
    const Token* prev = nullptr;
    while (!ts.at_end() && (depth > 0 || !at_stop(ts))) {
        const Token& t = ts.next();
        if (t.text == "(" || t.text == "[" || t.text == "{") {
            ++depth;
        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
            --depth;
        }
        if (prev && wordlike(*prev) && wordlike(t)) {
            out += ' ';
        }
        out += t.text;
        prev = &t;
    }
    if (out.empty()) {
        ts.fail("property");
    }
    return out;
}

std::int64_t parse_nat(TokenStream& ts, std::string_view production) {
    const Token& t = ts.peek();
    if (t.kind != TokenKind::Number || t.text.find('.') != std::string::npos) {
        ts.fail(fmt::format("natural in {}", production));
    }
    ts.next();
    return std::stoll(t.text);
}

std::optional<std::int64_t> parse_upper(TokenStream& ts) {
    ts.accept("+");
    if (ts.accept("inf")) {
        return std::nullopt;
    }
    return parse_nat(ts, "interval upper bound");
}

NatIntervalSet parse_interval_list(TokenStream& ts) {
    std::vector<NatInterval> ivs;
    ts.expect("[", "interval list");
    if (ts.accept("]")) {
        return {};
    }
    if (!ts.at("i")) {
        // bare [L,U]
        const std::int64_t lo = parse_nat(ts, "interval");
        ts.expect(",", "interval");
        ivs.push_back({lo, parse_upper(ts)});
        ts.expect("]", "interval list");
        return NatIntervalSet(std::move(ivs));
    }
    do {
        ts.expect("i", "interval");
        ts.expect("(", "interval");
        const std::int64_t lo = parse_nat(ts, "interval");
        ts.expect(",", "interval");
        ivs.push_back({lo, parse_upper(ts)});
        ts.expect(")", "interval");
    } while (ts.accept(","));
    ts.expect("]", "interval list");
    return NatIntervalSet(std::move(ivs));
}

SizeConstraint parse_constraint(TokenStream& ts) {
    SizeConstraint c;
    const Token& op = ts.expect_ident("size constraint");
    if (op.text == "lt") {
        c.kind = SizeConstraint::Kind::Lt;
    } else if (op.text != "leq") {
        ts.fail("lt or leq");
    }
    ts.expect("(", "size constraint");
    c.lhs = parse_expr(ts);
    ts.expect(",", "size constraint");
    c.rhs = parse_expr(ts);
    ts.expect(")", "size constraint");
    return c;
}

void parse_intervals(TokenStream& ts, Precondition& pre) {
    ts.expect("intervals", "intervals property");
    ts.expect("(", "intervals property");
    if (ts.at("[") && ts.peek(1).text == "[") {
        ts.next();
        ts.next();
        SizeConstraintSet cs;
        if (!ts.at("]")) {
            do {
                cs.conjuncts.push_back(parse_constraint(ts));
            } while (ts.accept(","));
        }
        ts.expect("]", "size constraint list");
        if (ts.at(",")) {
            ts.fail("']' (one conjunction of size constraints)");
        }
        ts.expect("]", "size constraint list");
        pre.constraints = std::move(cs);
    } else {
        IntervalPrecond ip;
        ip.size = parse_expr(ts);
        ts.expect(",", "intervals property");
        ip.set = parse_interval_list(ts);
        pre.intervals = std::move(ip);
    }
    ts.expect(")", "intervals property");
}

void parse_pre_item(TokenStream& ts, Precondition& pre) {
    if (ts.at("intervals") && ts.peek(1).text == "(") {
        parse_intervals(ts, pre);
    } else {
        pre.props.push_back(parse_opaque(ts));
    }
}

void parse_pre(TokenStream& ts, Precondition& pre) {
    if (ts.accept("(")) {
        do {
            parse_pre_item(ts, pre);
        } while (ts.accept(","));
        ts.expect(")", "precondition");
        return;
    }
    do {
        parse_pre_item(ts, pre);
    } while (ts.accept(","));
}

std::vector<std::string> parse_post(TokenStream& ts) {
    std::vector<std::string> out;
    const bool paren = ts.accept("(");
    do {
        out.push_back(parse_opaque(ts));
    } while (ts.accept(","));
    if (paren) {
        ts.expect(")", "postcondition");
    }
    return out;
}

// `inf` as a whole bound means no bound.
std::optional<Expr> parse_bound(TokenStream& ts) {
    if (ts.peek().text == "inf" && (ts.peek(1).text == ")" || ts.peek(1).text == ",")) {
        ts.next();
        return std::nullopt;
    }
    return parse_expr(ts);
}

void parse_comp_item(TokenStream& ts, Assertion& a, bool& seen_cost) {
    if (ts.accept("costb")) {
        ts.expect("(", "costb");
        a.resource = ts.expect_ident("costb resource").text;
        ts.expect(",", "costb");
        a.bounds.lower = parse_expr(ts);
        ts.expect(",", "costb");
        a.bounds.upper = parse_bound(ts);
        ts.expect(")", "costb");
        a.style = BoundStyle::Costb;
        return;
    }
    ts.expect("cost", "computational property (costb or cost)");
    ts.expect("(", "cost");
    const Token& kind = ts.expect_ident("cost kind");
    if (kind.text != "lb" && kind.text != "ub") {
        ts.fail("lb or ub");
    }
    const bool upper = kind.text == "ub";
    ts.expect(",", "cost");
    a.resource = ts.expect_ident("cost resource").text;
    ts.expect(",", "cost");
    (upper ? a.bounds.upper : a.bounds.lower) = parse_bound(ts);
    ts.expect(")", "cost");
    if (!seen_cost) {
        a.style = upper ? BoundStyle::CostUbLb : BoundStyle::CostLbUb;
        seen_cost = true;
    }
}

void parse_comp(TokenStream& ts, Assertion& a) {
    bool seen_cost = false;
    if (ts.accept("(")) {
        do {
            parse_comp_item(ts, a, seen_cost);
        } while (ts.accept(","));
        ts.expect(")", "computational properties");
        return;
    }
    parse_comp_item(ts, a, seen_cost);
}

void finish(TokenStream& ts) {
    ts.accept(".");
    if (!ts.at_end()) {
        ts.fail("end of assertion");
    }
}

bool is_scope_var(const Expr& e, const Scope& s) {
    const auto* v = e.as<Var>();
    return v && std::find(s.args.begin(), s.args.end(), v->name) != s.args.end();
}

Rational ground_value(TokenStream& ts, const Expr& e, const Scope& s) {
    for (const auto& v : free_vars(e)) {
        if (std::find(s.args.begin(), s.args.end(), v) != s.args.end()) {
            ts.fail("ground expression");
        }
    }
    const ExtReal r = evaluate(e, {});
    if (!r.is_exact()) {
        ts.fail("exact ground expression");
    }
    return r.exact_value();
}

struct Chain {
    std::vector<Expr> parts;
};

Chain parse_chain(TokenStream& ts, std::string_view production) {
    Chain c;
    c.parts.push_back(parse_expr(ts));
    ts.expect("<=", production);
    c.parts.push_back(parse_expr(ts));
    if (ts.accept("<=")) {
        c.parts.push_back(parse_expr(ts));
    }
    return c;
}

// lower_cond, upper_cond or both on one scope identifier.
void parse_xc_precond(TokenStream& ts, Assertion& a) {
    std::optional<std::string> var_name;
    NatIntervalSet set = NatIntervalSet::all();
    do {
        const Chain c = parse_chain(ts, "precond");
        std::optional<Expr> lo;
        std::optional<Expr> hi;
        std::string name;
        if (c.parts.size() == 3 && is_scope_var(c.parts[1], a.scope)) {
            lo = c.parts[0];
            hi = c.parts[2];
            name = c.parts[1].as<Var>()->name;
        } else if (c.parts.size() == 2 && is_scope_var(c.parts[1], a.scope)) {
            lo = c.parts[0];
            name = c.parts[1].as<Var>()->name;
        } else if (c.parts.size() == 2 && is_scope_var(c.parts[0], a.scope)) {
            hi = c.parts[1];
            name = c.parts[0].as<Var>()->name;
        } else {
            ts.fail("lower_cond or upper_cond on a scope identifier");
        }
        if (var_name && *var_name != name) {
            ts.fail(fmt::format("condition on {} (one precondition variable)", *var_name));
        }
        var_name = name;
        const std::int64_t l =
            lo ? std::max<std::int64_t>(0, ceil(ground_value(ts, *lo, a.scope)).convert_to<std::int64_t>()) : 0;
        std::optional<std::int64_t> h;
        if (hi) {
            h = floor(ground_value(ts, *hi, a.scope)).convert_to<std::int64_t>();
        }
        set = intersect(set, NatIntervalSet::range(l, h));
    } while (ts.accept("&&"));
    a.precond.intervals = IntervalPrecond{var(*var_name), set};
}

void parse_xc_costs(TokenStream& ts, Assertion& a) {
    bool chained = false;
    std::optional<std::string> resource;
    const auto take_resource = [&](const Expr& e) {
        const std::string& name = e.as<Var>()->name;
        if (resource && *resource != name) {
            ts.fail(fmt::format("resource {}", *resource));
        }
        resource = name;
    };
    const auto is_resource = [&](const Expr& e) { return e.is<Var>() && !is_scope_var(e, a.scope); };
    do {
        const Chain c = parse_chain(ts, "cost_bounds");
        if (c.parts.size() == 3 && is_resource(c.parts[1])) {
            take_resource(c.parts[1]);
            a.bounds.lower = c.parts[0];
            a.bounds.upper = c.parts[2];
            chained = true;
        } else if (c.parts.size() == 2 && is_resource(c.parts[0])) {
            take_resource(c.parts[0]);
            a.bounds.upper = c.parts[1];
        } else if (c.parts.size() == 2 && is_resource(c.parts[1])) {
            take_resource(c.parts[1]);
            a.bounds.lower = c.parts[0];
        } else {
            ts.fail("lower_bound or upper_bound on the resource");
        }
    } while (ts.accept("&&"));
    a.resource = resource.value_or("energy_nJ");
    a.style = chained ? BoundStyle::XcChained : BoundStyle::XcConjunction;
}

// Tries the parenthesized form first; `then` must follow the closing paren.
template <class F>
void parse_maybe_parenthesized(TokenStream& ts, std::string_view then, F&& body) {
    const std::size_t pos = ts.position();
    if (!ts.accept("(")) {
        body();
        return;
    }
    std::optional<ParseError> inner;
    try {
        body();
        ts.expect(")", "parenthesized group");
        if (then.empty() ? (ts.at_end() || ts.at(".")) : ts.at(then)) {
            return;
        }
    } catch (const ParseError& e) {
        inner = e;
    }
    ts.rewind(pos);
    try {
        body();
    } catch (const ParseError&) {
        if (inner) {
            throw *inner;
        }
        throw;
    }
}

std::string head(const Scope& s) {
    std::string out = s.pred + "(";
    for (std::size_t i = 0; i < s.args.size(); ++i) {
        out += (i ? "," : "") + s.args[i];
    }
    return out + ")";
}

std::string interval_list(const NatIntervalSet& set) {
    std::string out = "[";
    bool first = true;
    for (const auto& iv : set.intervals()) {
        out += fmt::format("{}i({},{})", first ? "" : ",", iv.lo, iv.hi ? std::to_string(*iv.hi) : "inf");
        first = false;
    }
    return out + "]";
}

std::string group(const std::vector<std::string>& items) {
    if (items.size() == 1) {
        return items.front();
    }
    std::string out = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? ", " : "") + items[i];
    }
    return out + ")";
}

std::string emit_ciao(const Assertion& a) {
    std::string out = ":- " + to_string(a.status) + " pred " + head(a.scope);
    std::vector<std::string> pre = a.precond.props;
    if (a.precond.intervals) {
        pre.push_back("intervals(" + to_string(a.precond.intervals->size) + "," +
                      interval_list(a.precond.intervals->set) + ")");
    }
    if (a.precond.constraints) {
        pre.push_back("intervals([" + to_string(*a.precond.constraints) + "])");
    }
    if (!pre.empty()) {
        out += " : " + group(pre);
    }
    if (!a.post.empty()) {
        out += " => " + group(a.post);
    }
    const auto& b = a.bounds;
    std::vector<std::string> comp;
    const auto ub = [&] { return "cost(ub," + a.resource + "," + to_string(*b.upper) + ")"; };
    const auto lb = [&] { return "cost(lb," + a.resource + "," + to_string(*b.lower) + ")"; };
    const bool costb = a.style == BoundStyle::Costb || a.style == BoundStyle::XcChained ||
                       a.style == BoundStyle::XcConjunction;
    if (costb && b.lower) {
        comp.push_back("costb(" + a.resource + "," + to_string(*b.lower) + "," +
                       (b.upper ? to_string(*b.upper) : std::string("inf")) + ")");
    } else if (a.style == BoundStyle::CostLbUb) {
        if (b.lower) {
            comp.push_back(lb());
        }
        if (b.upper) {
            comp.push_back(ub());
        }
    } else {
        if (b.upper) {
            comp.push_back(ub());
        }
        if (b.lower) {
            comp.push_back(lb());
        }
    }
    if (!comp.empty()) {
        out += " + " + group(comp);
    }
    return out + ".";
}

std::string xc_costs(const Assertion& a) {
    const auto& b = a.bounds;
    if (b.lower && b.upper) {
        const std::string l = to_string(*b.lower);
        const std::string u = to_string(*b.upper);
        if (a.style == BoundStyle::XcChained) {
            return l + " <= " + a.resource + " <= " + u;
        }
        return l + " <= " + a.resource + " && " + a.resource + " <= " + u;
    }
    if (b.upper) {
        return a.resource + " <= " + to_string(*b.upper);
    }
    if (b.lower) {
        return to_string(*b.lower) + " <= " + a.resource;
    }
    return "";
}

std::string xc_interval(const std::string& v, const NatInterval& iv) {
    if (iv.lo > 0 && iv.hi) {
        return fmt::format("{} <= {} && {} <= {}", iv.lo, v, v, *iv.hi);
    }
    if (iv.lo > 0) {
        return fmt::format("{} <= {}", iv.lo, v);
    }
    if (iv.hi) {
        return fmt::format("{} <= {}", v, *iv.hi);
    }
    return "";
}

std::string emit_xc(const Assertion& a) {
    const std::string prefix = "#pragma " + to_string(a.status) + " " + head(a.scope) + " : ";
    const std::string costs = "(" + xc_costs(a) + ")";
    const auto line = [&](const std::string& pre) { return prefix + (pre.empty() ? "" : "(" + pre + ") ==> ") + costs; };
    if (a.precond.constraints) {
        std::string pre;
        for (const auto& c : a.precond.constraints->conjuncts) {
            pre += (pre.empty() ? "" : " && ") + to_string(c.lhs) +
                   (c.kind == SizeConstraint::Kind::Lt ? " < " : " <= ") + to_string(c.rhs);
        }
        return line(pre);
    }
    if (!a.precond.intervals) {
        return line("");
    }
    const std::string v = to_string(a.precond.intervals->size);
    std::string out;
    for (const auto& iv : a.precond.intervals->set.intervals()) {
        out += (out.empty() ? "" : "\n") + line(xc_interval(v, iv));
    }
    return out;
}

bool same_expr(const std::optional<Expr>& a, const std::optional<Expr>& b) {
    if (a.has_value() != b.has_value()) {
        return false;
    }
    return !a || to_string(*a) == to_string(*b);
}

} // namespace

std::string to_string(Status s) {
    for (const auto& [st, name] : kStatuses) {
        if (st == s) {
            return std::string(name);
        }
    }
    return "check";
}

std::optional<Status> parse_status(std::string_view s) {
    for (const auto& [st, name] : kStatuses) {
        if (name == s) {
            return st;
        }
    }
    return std::nullopt;
}

Assertion parse_ciao(std::string_view text) {
    TokenStream ts(tokenize(text));
    Assertion a;
    a.syntax = Syntax::Ciao;
    ts.expect(":-", "assertion");
    if (ts.peek().kind == TokenKind::Ident && ts.peek(1).text == "pred") {
        const auto st = parse_status(ts.peek().text);
        if (!st) {
            ts.fail("status (check, checked, false, trust, true)");
        }
        a.status = *st;
        ts.next();
    }
    ts.expect("pred", "assertion");
    a.scope = parse_scope(ts);
    if (ts.accept(":")) {
        parse_pre(ts, a.precond);
    }
    if (ts.accept("=>")) {
        a.post = parse_post(ts);
    }
    if (ts.accept("+")) {
        parse_comp(ts, a);
    }
    finish(ts);
    return a;
}

Assertion parse_xc(std::string_view text) {
    const std::vector<Token> tokens = tokenize(text);
    const bool has_precond =
        std::any_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.kind == TokenKind::Punct && t.text == "==>"; });
    TokenStream ts(tokens);
    Assertion a;
    a.syntax = Syntax::XC;
    a.style = BoundStyle::XcConjunction;
    ts.expect("#", "assertion");
    ts.expect("pragma", "assertion");
    const Token& st = ts.expect_ident("status");
    const auto status = parse_status(st.text);
    if (!status) {
        ts.rewind(ts.position() - 1);
        ts.fail("status (check, trust, true, checked, false)");
    }
    a.status = *status;
    a.scope = parse_scope(ts);
    ts.expect(":", "assertion");
    if (has_precond) {
        parse_maybe_parenthesized(ts, "==>", [&] {
            a.precond = {};
            parse_xc_precond(ts, a);
        });
        ts.expect("==>", "body");
    }
    parse_maybe_parenthesized(ts, "", [&] {
        a.bounds = {};
        parse_xc_costs(ts, a);
    });
    finish(ts);
    return a;
}

Assertion parse_assertion(std::string_view text) {
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string_view::npos && text[start] == '#') {
        return parse_xc(text);
    }
    return parse_ciao(text);
}

std::string emit(const Assertion& a, Syntax syntax) { return syntax == Syntax::XC ? emit_xc(a) : emit_ciao(a); }

bool same_assertion(const Assertion& a, const Assertion& b) {
    if (a.status != b.status || a.scope.pred != b.scope.pred || a.scope.args != b.scope.args ||
        a.resource != b.resource || a.post != b.post || a.precond.props != b.precond.props) {
        return false;
    }
    if (!same_expr(a.bounds.lower, b.bounds.lower) || !same_expr(a.bounds.upper, b.bounds.upper) ||
        a.bounds.lower_default != b.bounds.lower_default) {
        return false;
    }
    const auto& ia = a.precond.intervals;
    const auto& ib = b.precond.intervals;
    if (ia.has_value() != ib.has_value() ||
        (ia && (to_string(ia->size) != to_string(ib->size) || !(ia->set == ib->set)))) {
        return false;
    }
    const auto& ca = a.precond.constraints;
    const auto& cb = b.precond.constraints;
    if (ca.has_value() != cb.has_value()) {
        return false;
    }
    return !ca || (ca->satisfiable == cb->satisfiable && to_string(*ca) == to_string(*cb));
}

NatIntervalSet parse_interval_text(std::string_view text) {
    TokenStream ts(tokenize(text));
    NatIntervalSet out = parse_interval_list(ts);
    if (!ts.at_end()) {
        ts.fail("end of interval list");
    }
    return out;
}

std::string interval_text(const NatIntervalSet& set) { return interval_list(set); }

} // namespace resbound
