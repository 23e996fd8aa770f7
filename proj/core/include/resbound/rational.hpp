// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace resbound {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses `12`, `2.3`, `-0.62` or `3/2` into an exact rational.
std::optional<Rational> parse_rational(std::string_view text);

/// Exact decimal spelling when the denominator divides a power of ten,
/// otherwise `p/q`.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact conversion of a finite double.
Rational from_double(double d);

BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);

bool is_integer(const Rational& r);

/// r^n for integer n; throws DomainError for 0^n with n < 0.
Rational pow(const Rational& base, std::int64_t exponent);

/// Integer k with base^k == value, if one exists (|k| bounded by the bit size).
std::optional<std::int64_t> exact_log(const Rational& base, const Rational& value);

/// Exact square root of a non-negative rational when it is a perfect square.
std::optional<Rational> exact_sqrt(const Rational& r);

} // namespace resbound
