// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>

#include "resbound/intervals.hpp"

namespace resbound {

namespace {

constexpr std::int64_t kMaxNat = std::numeric_limits<std::int64_t>::max() / 4;

bool ends_before(const NatInterval& a, std::int64_t n) { return a.hi && *a.hi < n; }

} // namespace

NatIntervalSet::NatIntervalSet(std::initializer_list<NatInterval> ivs) : ivs_(ivs) { canonicalize(); }

NatIntervalSet::NatIntervalSet(std::vector<NatInterval> ivs) : ivs_(std::move(ivs)) { canonicalize(); }

NatIntervalSet NatIntervalSet::range(std::int64_t lo, std::optional<std::int64_t> hi) {
    return NatIntervalSet{NatInterval{lo, hi}};
}

void NatIntervalSet::canonicalize() {
    std::erase_if(ivs_, [](const NatInterval& iv) { return iv.hi && *iv.hi < iv.lo; });
    for (auto& iv : ivs_) {
        iv.lo = std::max<std::int64_t>(iv.lo, 0);
    }
    std::erase_if(ivs_, [](const NatInterval& iv) { return iv.hi && *iv.hi < iv.lo; });
    std::sort(ivs_.begin(), ivs_.end(), [](const NatInterval& a, const NatInterval& b) { return a.lo < b.lo; });
    std::vector<NatInterval> merged;
    for (const auto& iv : ivs_) {
        if (!merged.empty() && !ends_before(merged.back(), iv.lo - 1)) {
            NatInterval& last = merged.back();
            if (!last.hi || !iv.hi) {
                last.hi.reset();
            } else {
                last.hi = std::max(*last.hi, *iv.hi);
            }
            continue;
        }
        merged.push_back(iv);
    }
    ivs_ = std::move(merged);
}

bool NatIntervalSet::contains(std::int64_t n) const {
    return std::any_of(ivs_.begin(), ivs_.end(), [n](const NatInterval& iv) { return iv.contains(n); });
}

std::optional<std::int64_t> NatIntervalSet::size() const {
    std::int64_t total = 0;
    for (const auto& iv : ivs_) {
        if (!iv.hi) {
            return std::nullopt;
        }
        total += *iv.hi - iv.lo + 1;
    }
    return total;
}

std::optional<std::int64_t> NatIntervalSet::max_finite_endpoint() const {
    std::optional<std::int64_t> best;
    for (const auto& iv : ivs_) {
        best = std::max(best.value_or(0), iv.hi.value_or(iv.lo));
    }
    return best;
}

NatIntervalSet intersect(const NatIntervalSet& a, const NatIntervalSet& b) {
    std::vector<NatInterval> out;
    for (const auto& x : a.intervals()) {
        for (const auto& y : b.intervals()) {
            NatInterval r{std::max(x.lo, y.lo), std::nullopt};
            if (x.hi && y.hi) {
                r.hi = std::min(*x.hi, *y.hi);
            } else if (x.hi) {
                r.hi = x.hi;
            } else {
                r.hi = y.hi;
            }
            if (!r.hi || *r.hi >= r.lo) {
                out.push_back(r);
            }
        }
    }
    return NatIntervalSet(std::move(out));
}

NatIntervalSet unite(const NatIntervalSet& a, const NatIntervalSet& b) {
    std::vector<NatInterval> all = a.intervals();
    all.insert(all.end(), b.intervals().begin(), b.intervals().end());
    return NatIntervalSet(std::move(all));
}

NatIntervalSet complement_in(const NatIntervalSet& a, const NatIntervalSet& s) {
    // Complement of a in the naturals, then intersect.
    std::vector<NatInterval> gaps;
    std::int64_t next = 0;
    bool open_end = true;
    for (const auto& iv : a.intervals()) {
        if (iv.lo > next) {
            gaps.push_back({next, iv.lo - 1});
        }
        if (!iv.hi) {
            open_end = false;
            break;
        }
        next = *iv.hi + 1;
    }
    if (open_end) {
        gaps.push_back({next, std::nullopt});
    }
    return intersect(NatIntervalSet(std::move(gaps)), s);
}

NatIntervalSet truncate(const NatIntervalSet& a, std::int64_t n) { return intersect(a, NatIntervalSet::range(0, n)); }

std::optional<NatInterval> nat_round(double lo, std::optional<double> hi) {
    const double l = std::max(0.0, std::ceil(lo));
    if (!hi) {
        return NatInterval{static_cast<std::int64_t>(std::min<double>(l, kMaxNat)), std::nullopt};
    }
    const double h = std::floor(*hi);
    if (h < l) {
        return std::nullopt;
    }
    return NatInterval{static_cast<std::int64_t>(std::min<double>(l, kMaxNat)),
                       static_cast<std::int64_t>(std::min<double>(h, kMaxNat))};
}

std::string to_string(const NatInterval& iv) {
    return "[" + std::to_string(iv.lo) + "," + (iv.hi ? std::to_string(*iv.hi) : std::string("inf")) + "]";
}

std::string to_string(const NatIntervalSet& s) {
    if (s.empty()) {
        return "{}";
    }
    std::string out;
    for (const auto& iv : s.intervals()) {
        if (!out.empty()) {
            out += " U ";
        }
        out += to_string(iv);
    }
    return out;
}

} // namespace resbound
