// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resbound/expr.hpp"
#include "resbound/rational.hpp"

namespace resbound {

enum class RootMethod { Analytic, Numeric, SurrogatePolynomial };

struct Root {
    double value = 0;
    /// Set when the root is a rational verified by exact evaluation.
    std::optional<Rational> exact;
    /// Error radius for approximate roots.
    double radius = 0;
};

struct RootSet {
    std::vector<Root> roots; // ascending, non-negative
    RootMethod method = RootMethod::Analytic;
};

std::string to_string(const RootSet& rs);

struct SafeRootConfig {
    double kappa = 1e-3;
    double delta = 1.0 / 64;
    int max_iterations = 4096;
};

/// Non-negative real roots of sum(coeffs[i] x^i). Degrees 1-4 analytic,
/// higher degrees by Aberth-Ehrlich iteration seeded from RESBOUND_SEED.
/// Throws ZeroPolynomial or NoConvergence.
RootSet poly_roots(const std::vector<Rational>& coeffs);

/// Same for floating coefficients (surrogate polynomials); never exact.
RootSet poly_roots(const std::vector<double>& coeffs);

/// Number of distinct real roots in (lo, hi]; hi empty means +infinity.
std::size_t sturm_count(const std::vector<Rational>& coeffs, const Rational& lo, const std::optional<Rational>& hi);

/// Distinct non-negative real roots isolated by Sturm bisection to width `tol`.
RootSet sturm_roots(const std::vector<Rational>& coeffs, double tol = 1e-12);

enum class RootPosition { ExactIsLeft, ExactIsRight };

/// Where the exact root of univariate `f` lies relative to `x_approx`.
RootPosition classify_position(const Expr& f, const std::string& var, double x_approx, const SafeRootConfig& cfg);

enum class RequiredSide { RootAtOrBelow, RootAtOrAbove };

/// Moves `x_approx` by delta steps until the returned point is on the
/// required side of the true root: RootAtOrBelow returns x <= root,
/// RootAtOrAbove returns x >= root. Throws IterationLimit or MonotonicityUnverified.
double safe_root(const Expr& f, const std::string& var, double x_approx, RequiredSide side, const SafeRootConfig& cfg);

enum class SnapDirection { TowardLower, TowardUpper };

/// Ceiling for a lower endpoint, floor for an upper one.
std::int64_t nat_snap(double x_safe, SnapDirection direction);

} // namespace resbound
