// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "resbound/expr.hpp"
#include "resbound/normal_form.hpp"

namespace resbound {

/// lhs < rhs or lhs <= rhs over natural size variables.
struct SizeConstraint {
    enum class Kind { Lt, Leq };
    Kind kind = Kind::Leq;
    Expr lhs;
    Expr rhs;
};

/// Conjunction of constraints. An empty satisfiable set is the whole domain.
struct SizeConstraintSet {
    std::vector<SizeConstraint> conjuncts;
    bool satisfiable = true;
};

/// `leq(13,length(A)-length(B))`
std::string to_string(const SizeConstraint& c);
/// `[leq(..),lt(..)]`
std::string to_string(const SizeConstraintSet& cs);

/// Rational satisfiability with v >= 0 for every variable, by Fourier-Motzkin.
/// Throws UnsupportedForm on non-affine conjuncts.
bool constraint_sat(const SizeConstraintSet& cs);

/// Drops redundant conjuncts, tightens over the naturals, and renders each
/// conjunct as `op(-k, varpart)`.
SizeConstraintSet simplify(const SizeConstraintSet& cs);

/// True when every natural assignment in `env` meets all conjuncts.
bool satisfies(const SizeConstraintSet& cs, const Env& env);

struct LinearComparison {
    SizeConstraintSet holds;
    SizeConstraintSet fails;
};

struct NonlinearUnsupported {
    std::string reason;
};

/// Regions of `domain` where f <= g (f < g when strict) holds and fails.
std::variant<LinearComparison, NonlinearUnsupported> compare_linear(const Expr& f, const Expr& g,
                                                                    const SizeConstraintSet& domain, bool strict);

/// domain with one more conjunct, simplified.
SizeConstraintSet conjoin(const SizeConstraintSet& a, const SizeConstraintSet& b);

} // namespace resbound
