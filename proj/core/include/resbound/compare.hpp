// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "resbound/expr.hpp"
#include "resbound/intervals.hpp"
#include "resbound/roots.hpp"

namespace resbound {

struct CompareOptions {
    unsigned taylor_order = 8;
    SafeRootConfig safe;
    std::int64_t enum_threshold = 1'000'000;
    int dominance_depth = 16;
};

struct ComparisonResult {
    NatIntervalSet satisfied;
    NatIntervalSet residual_unknown;
    bool approximation_used = false;
};

/// Naturals n in S with psi1(n) < psi2(n) that could be proved.
ComparisonResult less_f(const Expr& psi1, const Expr& psi2, const NatIntervalSet& s, const CompareOptions& opts = {});

/// Same with psi1(n) <= psi2(n).
ComparisonResult leq_f(const Expr& psi1, const Expr& psi2, const NatIntervalSet& s, const CompareOptions& opts = {});

struct Verified {};
struct TooLarge {};
struct CounterexampleAt {
    std::int64_t n;
};
using EnumerationResult = std::variant<Verified, TooLarge, CounterexampleAt>;

/// Checks f(n) > 0 (or >= 0 when !strict) at every natural of a bounded interval.
EnumerationResult enumerate_check(const Expr& f, const NatInterval& iv, std::int64_t threshold, bool strict = true);

enum class Dominance { True, Unknown };

/// True when f > 0 is proved for every real x >= c + 1.
Dominance eventual_dominance(const Expr& f, std::int64_t c, int depth = 16);
Dominance eventual_dominance(const Expr& f, const std::string& var, std::int64_t c, int depth = 16);

} // namespace resbound
