// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "resbound/errors.hpp"
#include "resbound/normal_form.hpp"
#include "resbound/roots.hpp"

namespace resbound {

namespace {

using Real = long double;
using Complex = std::complex<Real>;
using QCoeffs = std::vector<Rational>;

constexpr int kAberthMaxIterations = 800;
constexpr long kMaxDenominator = 1000000;

std::uint64_t seed_from_env() {
    if (const char* s = std::getenv("RESBOUND_SEED")) {
        char* end = nullptr;
        const auto v = std::strtoull(s, &end, 10);
        if (end != s) {
            return v;
        }
    }
    return 0x5eedULL;
}

Complex horner(const std::vector<Real>& p, Complex z) {
    Complex acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * z + p[i];
    }
    return acc;
}

std::vector<Real> derivative(const std::vector<Real>& p) {
    std::vector<Real> d(p.size() > 1 ? p.size() - 1 : 0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        d[i - 1] = p[i] * static_cast<Real>(i);
    }
    return d;
}

std::vector<Complex> quadratic_roots(Complex a, Complex b, Complex c) {
    const Complex disc = std::sqrt(b * b - Real(4) * a * c);
    // Pick the sign that avoids cancellation.
    const Complex q = (std::real(std::conj(b) * disc) >= 0) ? Real(-0.5) * (b + disc) : Real(-0.5) * (b - disc);
    if (std::abs(q) == 0) {
        return {Complex(0), Complex(0)};
    }
    return {q / a, c / q};
}

std::vector<Complex> cubic_roots(const std::vector<Real>& p) {
    const Complex a = p[3];
    const Complex b = p[2];
    const Complex c = p[1];
    const Complex d = p[0];
    const Complex d0 = b * b - Real(3) * a * c;
    const Complex d1 = Real(2) * b * b * b - Real(9) * a * b * c + Real(27) * a * a * d;
    if (std::abs(d0) == 0 && std::abs(d1) == 0) {
        const Complex r = -b / (Real(3) * a);
        return {r, r, r};
    }
    const Complex s = std::sqrt(d1 * d1 - Real(4) * d0 * d0 * d0);
    Complex cc = (std::abs(d1 + s) >= std::abs(d1 - s)) ? (d1 + s) / Real(2) : (d1 - s) / Real(2);
    cc = std::pow(cc, Real(1) / Real(3));
    const Complex omega(Real(-0.5), std::sqrt(Real(3)) / Real(2));
    std::vector<Complex> out;
    Complex ck = cc;
    for (int k = 0; k < 3; ++k) {
        out.push_back(-(b + ck + d0 / ck) / (Real(3) * a));
        ck *= omega;
    }
    return out;
}

std::vector<Complex> quartic_roots(const std::vector<Real>& p) {
    // Depressed quartic y^4 + P y^2 + Q y + R with x = y - b/4.
    const Real a = p[4];
    const Real b = p[3] / a;
    const Real c = p[2] / a;
    const Real d = p[1] / a;
    const Real e = p[0] / a;
    const Real P = c - Real(3) * b * b / Real(8);
    const Real Q = d - b * c / Real(2) + b * b * b / Real(8);
    const Real R = e - b * d / Real(4) + b * b * c / Real(16) - Real(3) * b * b * b * b / Real(256);
    const Real shift = -b / Real(4);
    std::vector<Complex> ys;
    if (std::abs(Q) <= Real(1e-30) * (Real(1) + std::abs(P) + std::abs(R))) {
        for (const Complex z : quadratic_roots(1, P, R)) {
            const Complex y = std::sqrt(z);
            ys.push_back(y);
            ys.push_back(-y);
        }
    } else {
        // Resolvent 8m^3 + 8P m^2 + (2P^2 - 8R) m - Q^2 = 0.
        const auto ms = cubic_roots({-Q * Q, Real(2) * P * P - Real(8) * R, Real(8) * P, Real(8)});
        Complex m = ms[0];
        for (const auto& cand : ms) {
            if (std::abs(cand) > std::abs(m)) {
                m = cand;
            }
        }
        const Complex s = std::sqrt(Real(2) * m);
        for (const Real sign : {Real(1), Real(-1)}) {
            const Complex rhs = Real(0.5) * P + m + sign * Q / (Real(2) * s);
            for (const Complex y : quadratic_roots(1, -sign * s, rhs)) {
                ys.push_back(y);
            }
        }
    }
    std::vector<Complex> out;
    for (const auto& y : ys) {
        out.push_back(y + shift);
    }
    return out;
}

std::vector<Complex> aberth_roots(const std::vector<Real>& p) {
    const std::size_t n = p.size() - 1;
    const auto dp = derivative(p);
    Real bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bound = std::max(bound, std::abs(p[i] / p[n]));
    }
    // Start on a circle of the geometric-mean root modulus.
    const Real radius = std::max(Real(1e-3), std::pow(std::abs(p[0] / p[n]), Real(1) / static_cast<Real>(n)));
    std::mt19937_64 rng(seed_from_env());
    std::uniform_real_distribution<double> jitter(0.0, 2 * std::numbers::pi / static_cast<double>(n));
    const Real offset = jitter(rng);
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Real theta = offset + Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(k) / static_cast<Real>(n);
        z[k] = std::polar(std::min(radius, Real(1) + bound), theta);
    }
    for (int iter = 0; iter < kAberthMaxIterations; ++iter) {
        Real worst = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex pz = horner(p, z[k]);
            if (std::abs(pz) == 0) {
                continue;
            }
            const Complex ratio = pz / horner(dp, z[k]);
            Complex repulsion = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) {
                    repulsion += Real(1) / (z[k] - z[j]);
                }
            }
            const Complex w = ratio / (Real(1) - ratio * repulsion);
            z[k] -= w;
            worst = std::max(worst, std::abs(w) / std::max(Real(1), std::abs(z[k])));
        }
        if (worst < Real(1e-17)) {
            return z;
        }
    }
    // Accept when every residual is tiny relative to the coefficient scale.
    for (const auto& zk : z) {
        Real scale = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            scale += std::abs(p[i]) * std::pow(std::abs(zk), static_cast<Real>(i));
        }
        if (std::abs(horner(p, zk)) > Real(1e-9) * scale) {
            throw NoConvergence(fmt::format("Aberth-Ehrlich did not converge in {} iterations", kAberthMaxIterations));
        }
    }
    return z;
}

std::vector<Complex> complex_roots(const std::vector<Real>& p) {
    switch (p.size() - 1) {
    case 1: return {Complex(-p[0] / p[1])};
    case 2: return quadratic_roots(p[2], p[1], p[0]);
    case 3: return cubic_roots(p);
    case 4: return quartic_roots(p);
    default: return aberth_roots(p);
    }
}

// Newton polish on the real line; returns the value and its last correction.
std::pair<Real, Real> polish(const std::vector<Real>& p, Real x) {
    const auto dp = derivative(p);
    Real last = 0;
    for (int i = 0; i < 60; ++i) {
        const Real fx = std::real(horner(p, x));
        const Real dx = std::real(horner(dp, x));
        if (dx == 0 || fx == 0) {
            break;
        }
        const Real step = fx / dx;
        if (!std::isfinite(step) || std::abs(step) > Real(1e-3) * std::max(Real(1), std::abs(x))) {
            break;
        }
        const Real nx = x - step;
        last = std::abs(step);
        if (nx == x) {
            break;
        }
        x = nx;
    }
    return {x, last};
}

Rational eval_exact(const QCoeffs& p, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * x + p[i];
    }
    return acc;
}

int sign_of(const Rational& q) { return q.sign(); }

// Continued-fraction candidates for a rational root near x.
std::optional<Rational> rational_near(const QCoeffs& p, double x) {
    if (!std::isfinite(x) || std::abs(x) > 1e15) {
        return std::nullopt;
    }
    long h0 = 0;
    long h1 = 1;
    long k0 = 1;
    long k1 = 0;
    double rest = x;
    for (int i = 0; i < 20; ++i) {
        const double a = std::floor(rest);
        if (std::abs(a) > 1e15) {
            break;
        }
        const auto ai = static_cast<long>(a);
        const long h2 = ai * h1 + h0;
        const long k2 = ai * k1 + k0;
        if (k2 > kMaxDenominator) {
            break;
        }
        const Rational cand{BigInt(h2), BigInt(k2)};
        // early convergents can be a neighbouring root
        if (std::abs(to_double(cand) - x) <= 1e-7 * std::max(1.0, std::abs(x)) && eval_exact(p, cand) == 0) {
            return cand;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = rest - a;
        if (frac < 1e-15) {
            break;
        }
        rest = 1 / frac;
    }
    return std::nullopt;
}

RootSet real_nonneg_roots(const std::vector<Real>& p, const QCoeffs* exact, RootMethod method) {
    RootSet out;
    out.method = method;
    const auto zs = complex_roots(p);
    std::vector<std::pair<Real, Real>> found;
    for (const auto& z : zs) {
        const Real mag = std::max(Real(1), std::abs(z));
        if (std::abs(z.imag()) > Real(1e-6) * mag) {
            continue;
        }
        auto [x, corr] = polish(p, z.real());
        if (x < -Real(1e-9) * mag) {
            continue;
        }
        found.emplace_back(std::max(x, Real(0)), corr);
    }
    std::sort(found.begin(), found.end());
    for (const auto& [x, corr] : found) {
        const double xd = static_cast<double>(x);
        if (!out.roots.empty() && std::abs(out.roots.back().value - xd) <= 1e-9 * std::max(1.0, xd)) {
            continue;
        }
        Root r;
        r.value = xd;
        r.radius = std::max(static_cast<double>(corr) * 4, 1e-12 * std::max(1.0, xd));
        if (exact) {
            if (auto q = rational_near(*exact, xd); q && *q >= 0) {
                r.exact = *q;
                r.value = to_double(*q);
                r.radius = 0;
            }
        }
        out.roots.push_back(r);
    }
    return out;
}

QCoeffs trim(QCoeffs p) {
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
    return p;
}

// ---- Sturm sequences over the rationals.

QCoeffs poly_rem(QCoeffs a, const QCoeffs& b) {
    a = trim(std::move(a));
    while (a.size() >= b.size() && !a.empty()) {
        const Rational factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[i + shift] -= factor * b[i];
        }
        a.pop_back();
        a = trim(std::move(a));
    }
    return a;
}

std::vector<QCoeffs> sturm_sequence(const QCoeffs& p) {
    std::vector<QCoeffs> seq{trim(p)};
    QCoeffs d;
    for (std::size_t i = 1; i < seq[0].size(); ++i) {
        d.push_back(seq[0][i] * static_cast<long>(i));
    }
    d = trim(d);
    if (d.empty()) {
        return seq;
    }
    seq.push_back(d);
    while (true) {
        QCoeffs r = poly_rem(seq[seq.size() - 2], seq.back());
        if (r.empty()) {
            break;
        }
        for (auto& c : r) {
            c = -c;
        }
        seq.push_back(std::move(r));
    }
    return seq;
}

int variations(const std::vector<int>& signs) {
    int v = 0;
    int last = 0;
    for (const int s : signs) {
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++v;
        }
        last = s;
    }
    return v;
}

int variations_at(const std::vector<QCoeffs>& seq, const std::optional<Rational>& x) {
    std::vector<int> signs;
    for (const auto& q : seq) {
        signs.push_back(x ? sign_of(eval_exact(q, *x)) : sign_of(q.back()));
    }
    return variations(signs);
}

} // namespace

std::string to_string(const RootSet& rs) {
    std::string out = "{";
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        const Root& r = rs.roots[i];
        if (i > 0) {
            out += ", ";
        }
        if (r.exact) {
            out += to_string(*r.exact) + " (exact)";
        } else {
            out += fmt::format("{:.12g} (+-{:.1e})", r.value, r.radius);
        }
    }
    out += "}";
    switch (rs.method) {
    case RootMethod::Analytic: out += " analytic"; break;
    case RootMethod::Numeric: out += " numeric"; break;
    case RootMethod::SurrogatePolynomial: out += " surrogate"; break;
    }
    return out;
}

std::size_t sturm_count(const QCoeffs& coeffs, const Rational& lo, const std::optional<Rational>& hi) {
    const QCoeffs p = trim(coeffs);
    if (p.empty()) {
        throw ZeroPolynomial();
    }
    const auto seq = sturm_sequence(p);
    const int v = variations_at(seq, lo) - variations_at(seq, hi);
    return static_cast<std::size_t>(std::max(v, 0));
}

RootSet sturm_roots(const QCoeffs& coeffs, double tol) {
    QCoeffs p = trim(coeffs);
    if (p.empty()) {
        throw ZeroPolynomial();
    }
    RootSet out;
    out.method = RootMethod::Numeric;
    std::size_t zeros = 0;
    while (zeros < p.size() && p[zeros] == 0) {
        ++zeros;
    }
    if (zeros > 0) {
        out.roots.push_back(Root{0.0, Rational(0), 0});
        p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(zeros));
    }
    if (p.size() <= 1) {
        return out;
    }
    const auto seq = sturm_sequence(p);
    Rational bound = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Rational q = p[i] / p.back();
        bound = std::max(bound, q < 0 ? Rational(-q) : q);
    }
    bound += 1;
    const Rational width_tol = from_double(tol);
    std::vector<std::pair<Rational, Rational>> stack{{Rational(0), bound}};
    std::vector<Root> found;
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        int count = variations_at(seq, a) - variations_at(seq, b);
        if (count <= 0) {
            continue;
        }
        if (eval_exact(p, b) == 0) {
            const bool seen = std::any_of(found.begin(), found.end(),
                                          [&](const Root& r) { return r.exact && *r.exact == b; });
            if (!seen) {
                found.push_back(Root{to_double(b), b, 0});
            }
            if (--count == 0) {
                continue;
            }
        }
        if (count == 1 && b - a <= width_tol) {
            const Rational mid = (a + b) / 2;
            found.push_back(Root{to_double(mid), std::nullopt, to_double(b - a)});
            continue;
        }
        const Rational mid = (a + b) / 2;
        stack.emplace_back(mid, b);
        stack.emplace_back(a, mid);
    }
    std::sort(found.begin(), found.end(), [](const Root& x, const Root& y) { return x.value < y.value; });
    out.roots.insert(out.roots.end(), found.begin(), found.end());
    return out;
}

RootSet poly_roots(const QCoeffs& coeffs) {
    QCoeffs p = trim(coeffs);
    if (p.empty()) {
        throw ZeroPolynomial();
    }
    RootSet out;
    out.method = p.size() - 1 <= 4 ? RootMethod::Analytic : RootMethod::Numeric;
    std::size_t zeros = 0;
    while (zeros < p.size() && p[zeros] == 0) {
        ++zeros;
    }
    QCoeffs reduced(p.begin() + static_cast<std::ptrdiff_t>(zeros), p.end());
    if (zeros > 0) {
        out.roots.push_back(Root{0.0, Rational(0), 0});
    }
    const std::size_t degree = reduced.size() - 1;
    if (degree == 0) {
        return out;
    }
    std::vector<Root> rest;
    if (degree == 1) {
        const Rational r = -reduced[0] / reduced[1];
        if (r >= 0) {
            rest.push_back(Root{to_double(r), r, 0});
        }
    } else if (degree == 2 && exact_sqrt(reduced[1] * reduced[1] - 4 * reduced[2] * reduced[0])) {
        const Rational s = *exact_sqrt(reduced[1] * reduced[1] - 4 * reduced[2] * reduced[0]);
        std::vector<Rational> rs{(-reduced[1] - s) / (2 * reduced[2]), (-reduced[1] + s) / (2 * reduced[2])};
        std::sort(rs.begin(), rs.end());
        for (const auto& r : rs) {
            if (r >= 0 && (rest.empty() || *rest.back().exact != r)) {
                rest.push_back(Root{to_double(r), r, 0});
            }
        }
    } else {
        std::vector<Real> p_real;
        for (const auto& c : reduced) {
            p_real.push_back(static_cast<Real>(to_double(c)));
        }
        RootSet numeric;
        try {
            numeric = real_nonneg_roots(p_real, &reduced, out.method);
        } catch (const NoConvergence&) {
            numeric = sturm_roots(reduced);
        }
        // Cross-check the count of distinct non-negative roots exactly.
        const std::size_t expected = sturm_count(reduced, Rational(0), std::nullopt);
        if (numeric.roots.size() != expected) {
            numeric = sturm_roots(reduced);
            out.method = RootMethod::Numeric;
        }
        rest = numeric.roots;
        for (auto& r : rest) {
            if (!r.exact) {
                if (auto q = rational_near(reduced, r.value); q && *q >= 0) {
                    r = Root{to_double(*q), *q, 0};
                }
            }
        }
    }
    for (const auto& r : rest) {
        if (zeros > 0 && r.value == 0) {
            continue;
        }
        out.roots.push_back(r);
    }
    return out;
}

RootSet poly_roots(const std::vector<double>& coeffs) {
    std::vector<Real> p(coeffs.begin(), coeffs.end());
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
    if (p.empty()) {
        throw ZeroPolynomial();
    }
    if (p.size() == 1) {
        return RootSet{{}, RootMethod::SurrogatePolynomial};
    }
    return real_nonneg_roots(p, nullptr, RootMethod::SurrogatePolynomial);
}

// ---------------------------------------------------------------------------
// Safe roots

namespace {

double eval_at(const Expr& f, const std::string& var, double x) { return evaluate_numeric(f, {{var, x}}); }

int fsign(double v) { return (v > 0) - (v < 0); }

} // namespace

RootPosition classify_position(const Expr& f, const std::string& var, double x, const SafeRootConfig& cfg) {
    const double e = eval_at(f, var, x);
    if (e == 0) {
        return RootPosition::ExactIsLeft;
    }
    const double e2 = eval_at(f, var, x + cfg.kappa);
    const bool increasing = e2 > e;
    if (e < 0) {
        return increasing ? RootPosition::ExactIsRight : RootPosition::ExactIsLeft;
    }
    return increasing ? RootPosition::ExactIsLeft : RootPosition::ExactIsRight;
}

double safe_root(const Expr& f, const std::string& var, double x, RequiredSide side, const SafeRootConfig& cfg) {
    const double e0 = eval_at(f, var, x);
    if (e0 == 0) {
        return x;
    }
    const RootPosition pos = classify_position(f, var, x, cfg);
    const bool already_safe = (side == RequiredSide::RootAtOrBelow && pos == RootPosition::ExactIsRight) ||
                              (side == RequiredSide::RootAtOrAbove && pos == RootPosition::ExactIsLeft);
    if (already_safe) {
        return x;
    }
    const double step = side == RequiredSide::RootAtOrBelow ? -std::abs(cfg.delta) : std::abs(cfg.delta);
    const int s0 = fsign(e0);
    double xs = x;
    bool crossed = false;
    for (int i = 0; i < cfg.max_iterations; ++i) {
        xs += step;
        if (fsign(eval_at(f, var, xs)) != s0) {
            crossed = true;
            break;
        }
    }
    if (!crossed) {
        throw IterationLimit(fmt::format("no sign change within {} steps from {}", cfg.max_iterations, x));
    }
    const Expr df = differentiate(f, var);
    const int d0 = fsign(eval_at(df, var, x));
    const int d1 = fsign(eval_at(df, var, (x + xs) / 2));
    const int d2 = fsign(eval_at(df, var, xs));
    if (d0 == 0 || d0 != d1 || d1 != d2) {
        throw MonotonicityUnverified(fmt::format("derivative changes sign between {} and {}", x, xs));
    }
    return xs;
}

std::int64_t nat_snap(double x, SnapDirection direction) {
    const double v = direction == SnapDirection::TowardLower ? std::ceil(x) : std::floor(x);
    return static_cast<std::int64_t>(std::max(0.0, v));
}

} // namespace resbound
