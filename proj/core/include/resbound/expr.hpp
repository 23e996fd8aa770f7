// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>

#include "resbound/rational.hpp"

namespace resbound {

struct Node;

/// Immutable handle to a symbolic cost expression. Copies share structure.
class Expr {
  public:
    /// The constant 0.
    Expr();
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    [[nodiscard]] const Node& node() const { return *node_; }

    template <typename T>
    [[nodiscard]] const T* as() const;

    template <typename T>
    [[nodiscard]] bool is() const {
        return as<T>() != nullptr;
    }

  private:
    std::shared_ptr<const Node> node_;
};

enum class BinaryOp { Add, Sub, Mul, Div };

/// How a Power node was written; printing reproduces it.
enum class PowerSpelling { Stars, ExpCall, PowerCall };

struct Const {
    Rational value;
    std::string spelling; // literal as written, empty when synthesized
};

/// Euler's number; only meaningful as the base of a Power or Log.
struct Euler {};

struct Var {
    std::string name;
};

struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};

struct Power {
    Expr base;
    Expr exponent;
    PowerSpelling spelling = PowerSpelling::Stars;
};

struct Log {
    Expr base;
    Expr arg;
};

struct Summation {
    std::string index;
    Expr lower;
    Expr upper;
    Expr body;
};

struct Product {
    std::string index;
    Expr lower;
    Expr upper;
    Expr body;
};

struct FallingPower {
    Expr arg;
    unsigned degree;
};

struct MinOf {
    std::string array;
};

struct MaxOf {
    std::string array;
};

struct Node {
    std::variant<Const, Euler, Var, Binary, Power, Log, Summation, Product, FallingPower, MinOf, MaxOf> v;
};

template <typename T>
const T* Expr::as() const {
    return std::get_if<T>(&node_->v);
}

// Construction. Binary helpers do no simplification; use normalize() for that.
Expr constant(const Rational& value, std::string spelling = {});
Expr constant(std::int64_t value);
Expr euler();
Expr var(std::string name);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
/// Throws DomainError when the denominator is the literal constant 0.
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent, PowerSpelling spelling = PowerSpelling::Stars);
Expr log(const Expr& base, const Expr& arg);
Expr ln(const Expr& arg);
/// Inner binders that reuse `index` are renamed apart.
Expr sum(const std::string& index, const Expr& lower, const Expr& upper, const Expr& body);
Expr prod(const std::string& index, const Expr& lower, const Expr& upper, const Expr& body);
Expr falling(const Expr& arg, unsigned degree);
Expr min_of(std::string array);
Expr max_of(std::string array);

/// Structural equality; literal spellings are ignored.
bool operator==(const Expr& a, const Expr& b);

std::set<std::string> free_vars(const Expr& e);
bool depends_on(const Expr& e, const std::string& var);

/// Capture-avoiding substitution of `name` by `replacement`.
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);
Expr rename_var(const Expr& e, const std::string& from, const std::string& to);

bool contains_summation(const Expr& e);
bool contains_product(const Expr& e);
bool contains_min_max(const Expr& e);

/// Surface syntax accepted by parse_expr().
std::string to_string(const Expr& e);

/// Extended real: finite (exact rational or flagged floating value) or +-infinity.
class ExtReal {
  public:
    enum class Kind { Finite, PosInf, NegInf };

    static ExtReal exact(Rational value);
    static ExtReal approx(double value);
    static ExtReal pos_inf();
    static ExtReal neg_inf();

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
    [[nodiscard]] bool is_exact() const { return is_finite() && std::holds_alternative<Rational>(value_); }
    /// Precondition: is_exact().
    [[nodiscard]] const Rational& exact_value() const { return std::get<Rational>(value_); }
    [[nodiscard]] double to_double() const;
    /// -1, 0 or +1. Inexact values compare against 0.0 in floating point.
    [[nodiscard]] int sign() const;

    friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator-(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator*(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator-(const ExtReal& a);
    /// Three-way comparison; inexact operands fall back to doubles.
    friend int compare(const ExtReal& a, const ExtReal& b);

  private:
    Kind kind_ = Kind::Finite;
    std::variant<Rational, double> value_;
};

std::string to_string(const ExtReal& v);

using Env = std::map<std::string, Rational>;

/// Exact where possible. Throws UnboundVariable, DomainError or MinMaxUnsupported.
ExtReal evaluate(const Expr& e, const Env& env);

/// Floating-point evaluation for probing at non-natural points.
double evaluate_numeric(const Expr& e, const std::map<std::string, double>& env);

} // namespace resbound
