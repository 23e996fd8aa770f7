// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <cmath>

#include "resbound/errors.hpp"
#include "resbound/rational.hpp"

namespace resbound {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (const char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

std::optional<Rational> parse_unsigned_decimal(std::string_view s) {
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        if (!all_digits(s)) {
            return std::nullopt;
        }
        std::string digits(s);
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        return Rational(BigInt(digits));
    }
    const auto int_part = s.substr(0, dot);
    const auto frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) || !all_digits(frac_part)) {
        return std::nullopt;
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    // A leading zero would make the BigInt constructor read octal.
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    const BigInt num(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) {
        den *= 10;
    }
    return Rational(num, den);
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    std::optional<Rational> value;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = parse_unsigned_decimal(text.substr(0, slash));
        const auto den = parse_unsigned_decimal(text.substr(slash + 1));
        if (!num || !den || *den == 0) {
            return std::nullopt;
        }
        value = *num / *den;
    } else {
        value = parse_unsigned_decimal(text);
    }
    if (value && negative) {
        *value = -*value;
    }
    return value;
}

std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) {
        return num.str();
    }
    // Decimal form exists iff den = 2^a 5^b.
    BigInt rest = den;
    unsigned twos = 0;
    unsigned fives = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) {
        return num.str() + "/" + den.str();
    }
    const unsigned digits = std::max(twos, fives);
    BigInt scale = 1;
    for (unsigned i = 0; i < digits; ++i) {
        scale *= 10;
    }
    const BigInt scaled = num * (scale / den);
    const bool negative = scaled < 0;
    std::string s = (negative ? BigInt(-scaled) : scaled).str();
    if (s.size() <= digits) {
        s.insert(0, digits - s.size() + 1, '0');
    }
    s.insert(s.size() - digits, ".");
    return negative ? "-" + s : s;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational from_double(double d) {
    if (!std::isfinite(d)) {
        throw DomainError("non-finite value cannot be converted to a rational");
    }
    return Rational(d);
}

BigInt floor(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (num % den != 0 && num < 0) {
        q -= 1;
    }
    return q;
}

BigInt ceil(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (num % den != 0 && num > 0) {
        q += 1;
    }
    return q;
}

bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

Rational pow(const Rational& base, std::int64_t exponent) {
    if (exponent < 0) {
        if (base == 0) {
            throw DomainError("zero raised to a negative power");
        }
        return pow(Rational(1) / base, -exponent);
    }
    const auto e = static_cast<unsigned>(exponent);
    const BigInt num = boost::multiprecision::pow(BigInt(boost::multiprecision::numerator(base)), e);
    const BigInt den = boost::multiprecision::pow(BigInt(boost::multiprecision::denominator(base)), e);
    return Rational(num, den);
}

std::optional<std::int64_t> exact_log(const Rational& base, const Rational& value) {
    if (base <= 0 || base == 1 || value <= 0) {
        return std::nullopt;
    }
    if (value == 1) {
        return 0;
    }
    const double estimate = std::log(to_double(value)) / std::log(to_double(base));
    if (!std::isfinite(estimate) || std::abs(estimate) > 1e6) {
        return std::nullopt;
    }
    const auto k = static_cast<std::int64_t>(std::llround(estimate));
    for (std::int64_t cand = k - 1; cand <= k + 1; ++cand) {
        if (pow(base, cand) == value) {
            return cand;
        }
    }
    return std::nullopt;
}

std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r < 0) {
        return std::nullopt;
    }
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    const BigInt sn = boost::multiprecision::sqrt(num);
    const BigInt sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) {
        return std::nullopt;
    }
    return Rational(sn, sd);
}

} // namespace resbound
