// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace resbound {

/// Closed interval of naturals; `hi` empty means +infinity.
struct NatInterval {
    std::int64_t lo = 0;
    std::optional<std::int64_t> hi;

    [[nodiscard]] bool bounded() const { return hi.has_value(); }
    [[nodiscard]] bool contains(std::int64_t n) const { return n >= lo && (!hi || n <= *hi); }
    friend bool operator==(const NatInterval&, const NatInterval&) = default;
};

/// Sorted, disjoint, non-adjacent intervals.
class NatIntervalSet {
  public:
    NatIntervalSet() = default;
    NatIntervalSet(std::initializer_list<NatInterval> ivs);
    explicit NatIntervalSet(std::vector<NatInterval> ivs);

    static NatIntervalSet all() { return NatIntervalSet{{0, std::nullopt}}; }
    static NatIntervalSet range(std::int64_t lo, std::optional<std::int64_t> hi);

    [[nodiscard]] const std::vector<NatInterval>& intervals() const { return ivs_; }
    [[nodiscard]] bool empty() const { return ivs_.empty(); }
    [[nodiscard]] bool bounded() const { return ivs_.empty() || ivs_.back().hi.has_value(); }
    [[nodiscard]] bool contains(std::int64_t n) const;
    /// Number of naturals; None when unbounded.
    [[nodiscard]] std::optional<std::int64_t> size() const;
    [[nodiscard]] std::optional<std::int64_t> max_finite_endpoint() const;

    friend bool operator==(const NatIntervalSet&, const NatIntervalSet&) = default;

  private:
    void canonicalize();
    std::vector<NatInterval> ivs_;
};

NatIntervalSet intersect(const NatIntervalSet& a, const NatIntervalSet& b);
NatIntervalSet unite(const NatIntervalSet& a, const NatIntervalSet& b);
/// S minus A.
NatIntervalSet complement_in(const NatIntervalSet& a, const NatIntervalSet& s);
/// Truncates to [0, n].
NatIntervalSet truncate(const NatIntervalSet& a, std::int64_t n);

/// [ceil(lo), floor(hi)] or None; hi empty means +infinity.
std::optional<NatInterval> nat_round(double lo, std::optional<double> hi);

/// `[0,10] U [15,inf]`
std::string to_string(const NatInterval& iv);
std::string to_string(const NatIntervalSet& s);

} // namespace resbound
