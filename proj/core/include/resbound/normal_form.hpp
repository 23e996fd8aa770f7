// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "resbound/expr.hpp"

namespace resbound {

/// constant + sum(coeffs[v] * v). Zero coefficients are never stored.
struct LinearForm {
    Rational constant;
    std::map<std::string, Rational> coeffs;

    [[nodiscard]] bool is_constant() const { return coeffs.empty(); }
    [[nodiscard]] bool is_zero() const { return coeffs.empty() && constant == 0; }
    [[nodiscard]] Rational coeff(const std::string& v) const;
    [[nodiscard]] Expr to_expr() const;

    LinearForm& operator+=(const LinearForm& o);
    LinearForm& operator-=(const LinearForm& o);
    LinearForm& operator*=(const Rational& k);
    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
    friend LinearForm operator*(LinearForm a, const Rational& k) { return a *= k; }
    friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

std::string to_string(const LinearForm& l);

/// Base of an exponential factor: a rational, or e when `value` is empty.
struct ExpBase {
    std::optional<Rational> value;

    [[nodiscard]] bool is_euler() const { return !value.has_value(); }
    [[nodiscard]] double to_double() const;
    friend bool operator==(const ExpBase&, const ExpBase&) = default;
    friend bool operator<(const ExpBase& a, const ExpBase& b);
};

/// Non-polynomial factor kept opaque (logs, ln constants, sums, inverse sums...).
struct Atom {
    Expr expr;
    int exponent = 1;
};

/// prod(v^k) * prod(base^linear) * prod(atom^k). For rational bases the
/// integer part of the exponent's constant is folded into the coefficient.
struct Monomial {
    std::map<std::string, int> vars;
    std::map<ExpBase, LinearForm> exps;
    std::map<std::string, Atom> atoms;

    [[nodiscard]] bool is_one() const { return vars.empty() && exps.empty() && atoms.empty(); }
    [[nodiscard]] Expr to_expr() const;
    /// scale * factors, built left to right.
    [[nodiscard]] Expr to_expr_scaled(const Rational& scale) const;
    [[nodiscard]] std::string key() const;
};

struct Term {
    Rational coef;
    Monomial mono;
};

/// Canonical sum of terms keyed by their monomial.
class Poly {
  public:
    Poly() = default;
    static Poly constant(const Rational& c);
    static Poly from_term(Term t);

    [[nodiscard]] const std::map<std::string, Term>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::optional<Rational> as_constant() const;
    [[nodiscard]] Expr to_expr() const;

    void add_term(const Term& t);
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly scaled(const Rational& k) const;

  private:
    std::map<std::string, Term> terms_;
};

Term multiply(const Term& a, const Term& b);

Poly to_poly(const Expr& e);
Expr normalize(const Expr& e);

/// Ascending coefficients when `e` is a polynomial in `var` alone. The zero
/// polynomial yields an empty vector.
std::optional<std::vector<Rational>> as_polynomial(const Expr& e, const std::string& var);
Expr from_coefficients(const std::vector<Rational>& coeffs, const std::string& var);

/// Affine view; None when any term is non-linear.
std::optional<LinearForm> as_linear(const Expr& e);

/// Continuous derivative, normalized. Throws UnsupportedForm for sums,
/// products, min/max and negative-base exponentials in `var`.
Expr differentiate(const Expr& e, const std::string& var);

/// Table-rule derivative when the shape matches, otherwise e[var+1] - e[var].
Expr discrete_derivative(const Expr& e, const std::string& var);

/// n! for small n, computed once.
const Rational& factorial(unsigned n);

/// Truncated series of a^g(var) around 0.
Expr taylor_exponential(const Expr& e, const std::string& var, unsigned order);

} // namespace resbound
