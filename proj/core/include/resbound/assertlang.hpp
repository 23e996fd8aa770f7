// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resbound/expr.hpp"
#include "resbound/intervals.hpp"
#include "resbound/multivar.hpp"

namespace resbound {

enum class Status { Check, Checked, False, Trust, True };

std::string to_string(Status s);
std::optional<Status> parse_status(std::string_view s);

enum class LowerDefault { Zero, NegInf };

/// Resource band; a missing upper bound is +infinity, a missing lower one
/// falls back to `lower_default`.
struct BoundPair {
    std::optional<Expr> lower;
    std::optional<Expr> upper;
    LowerDefault lower_default = LowerDefault::Zero;
};

struct Scope {
    std::string pred;
    std::vector<std::string> args;
};

/// intervals(size, [i(L,U), ...]); `size` is a metric term such as nat(N),
/// or the bare identifier in XC.
struct IntervalPrecond {
    Expr size;
    NatIntervalSet set;
};

struct Precondition {
    std::vector<std::string> props; // type properties, kept as written
    std::optional<IntervalPrecond> intervals;
    std::optional<SizeConstraintSet> constraints;

    [[nodiscard]] bool empty() const { return props.empty() && !intervals && !constraints; }
};

enum class Syntax { Ciao, XC };

/// How the bounds were written, so emission can reproduce it.
enum class BoundStyle { Costb, CostUbLb, CostLbUb, XcChained, XcConjunction };

struct Assertion {
    Status status = Status::Check;
    Scope scope;
    Precondition precond;
    std::vector<std::string> post; // `=>` properties, opaque
    std::string resource = "energy_nJ";
    BoundPair bounds;
    Syntax syntax = Syntax::Ciao;
    BoundStyle style = BoundStyle::Costb;
};

/// Structural equality on status, scope, preconditions, resource and bounds.
bool same_assertion(const Assertion& a, const Assertion& b);

/// `:- check pred p(A,B) : (props) => (props) + costb(res,L,U).`
Assertion parse_ciao(std::string_view text);

/// `#pragma check p(n) : (1 <= n) ==> (6.0 <= energy_nJ <= 2.3*n+9.0)`
Assertion parse_xc(std::string_view text);

/// Dispatches on a leading `#pragma` or `:-`.
Assertion parse_assertion(std::string_view text);

/// `[i(1,10),i(100,inf)]` or the bare `[L,U]`.
NatIntervalSet parse_interval_text(std::string_view text);
/// `[i(1,10),i(100,inf)]`
std::string interval_text(const NatIntervalSet& set);

/// XC preconditions hold one interval, so a multi-interval one yields one
/// line per interval.
std::string emit(const Assertion& a, Syntax syntax);
inline std::string emit(const Assertion& a) { return emit(a, a.syntax); }

} // namespace resbound
