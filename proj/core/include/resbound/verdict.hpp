// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resbound/assertlang.hpp"
#include "resbound/compare.hpp"
#include "resbound/intervals.hpp"
#include "resbound/multivar.hpp"

namespace resbound {

/// A size variable of the analysis bounds: `name` measures argument `arg` by `metric`.
struct SizeVar {
    std::string name;
    std::string arg;
    std::string metric = "nat";
};

struct AnalysisResult {
    std::string pred;
    std::vector<std::string> args;
    std::vector<SizeVar> size_vars;
    BoundPair bounds;
    std::optional<NatIntervalSet> domain;
    /// Resource can never be negative, so 0 is a safe lower bound.
    bool nonnegative = true;
};

enum class Outcome { True, False, Unknown };

std::string to_string(Outcome o);

struct PartitionEntry {
    std::variant<NatIntervalSet, SizeConstraintSet> region;
    Outcome outcome;
};

struct VerdictPartition {
    bool multivariable = false;
    /// Single-variable size term as the assertion spells it, e.g. nat(N).
    std::optional<Expr> size;
    NatIntervalSet domain;
    NatIntervalSet truth;
    NatIntervalSet falsity;
    NatIntervalSet unknown;
    std::vector<SizeConstraintSet> true_regions;
    std::vector<SizeConstraintSet> false_regions;
    std::vector<SizeConstraintSet> unknown_regions;
    bool approximation_used = false;

    /// Non-empty classes in output order: false, true, unknown.
    [[nodiscard]] std::vector<PartitionEntry> entries() const;
};

/// Analysis bounds rewritten in the assertion's size-term spelling. Throws
/// PredicateMismatch or MetricMismatch.
AnalysisResult map_variables(const Assertion& spec, const AnalysisResult& analysis);

struct CheckOptions {
    CompareOptions compare;
};

/// T = c1 & c4, F = c2 | c3, the rest Unknown.
VerdictPartition check_assertion(const Assertion& spec, const AnalysisResult& analysis, const CheckOptions& opts = {});

/// Pointwise evaluation of the same conditions on a bounded S. Throws DomainUnbounded.
VerdictPartition eval_check(const Assertion& spec, const AnalysisResult& analysis, const NatIntervalSet& s);

/// One assertion per non-empty class, ordered false, checked, check.
std::vector<Assertion> synthesize_output(const Assertion& spec, const VerdictPartition& partition);

/// Input-size domain of the assertion alone; [0,inf) when it has no interval precondition.
NatIntervalSet spec_domain(const Assertion& spec);

} // namespace resbound
