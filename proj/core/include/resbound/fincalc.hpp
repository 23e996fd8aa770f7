// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>

#include "resbound/expr.hpp"
#include "resbound/rational.hpp"

namespace resbound {

struct Unsupported {
    std::string reason;
    Expr offending;
};

class IntegrationOutcome {
  public:
    IntegrationOutcome(Expr closed) : v_(std::move(closed)) {} // NOLINT(google-explicit-constructor)
    IntegrationOutcome(Unsupported u) : v_(std::move(u)) {}    // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool closed() const { return std::holds_alternative<Expr>(v_); }
    [[nodiscard]] const Expr& result() const { return std::get<Expr>(v_); }
    [[nodiscard]] const Unsupported& unsupported() const { return std::get<Unsupported>(v_); }

  private:
    std::variant<Expr, Unsupported> v_;
};

/// Stirling number of the second kind; memoized and safe to call concurrently.
BigInt stirling2(unsigned m, unsigned k);

/// x^m as a weighted sum of falling powers.
Expr power_to_falling(unsigned m, const std::string& var);

/// Expanded ordinary polynomial of falling(var, k).
Expr falling_to_power(unsigned k, const std::string& var);

/// Indefinite discrete integral (constant dropped), normalized.
IntegrationOutcome discrete_integral(const Expr& e, const std::string& var);

/// Rewrites every summation, innermost first, to F(b+1) - F(a).
IntegrationOutcome eliminate_summations(const Expr& e);

} // namespace resbound
