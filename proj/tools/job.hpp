// Copyright (c) resbound contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "resbound/assertlang.hpp"
#include "resbound/verdict.hpp"

namespace resbound::job {

struct JobOptions {
    unsigned taylor_order = 8;
    double delta = 1.0 / 64;
    double kappa = 1e-3;
    std::int64_t enum_threshold = 1'000'000;
    bool oracle_crosscheck = false;
};

struct Job {
    JobOptions options;
    std::vector<std::string> assertions;
    std::vector<AnalysisResult> analysis;
};

/// Throws JobError naming the offending JSON path.
Job load_job(const nlohmann::json& j);
Job load_job_file(const std::filesystem::path& path);

CheckOptions check_options(const JobOptions& o);

struct Crosscheck {
    NatIntervalSet domain;
    bool agrees = true;
    VerdictPartition eval;
};

struct Item {
    std::string source;
    std::optional<Assertion> spec;
    /// Set for `check` assertions that were verified.
    std::optional<VerdictPartition> partition;
    std::vector<Assertion> outputs;
    std::optional<Crosscheck> crosscheck;
    std::vector<std::string> warnings;
    std::optional<std::string> error;
    double millis = 0;
};

struct Report {
    std::vector<Item> items;

    /// 0 all checked, 1 any false, 2 any unknown and no false, 3 input error.
    [[nodiscard]] int exit_code() const;
};

/// Items come back in input order whatever `threads` is; 0 picks the hardware count.
Report run_check(const Job& job, unsigned threads = 0);

std::string render_text(const Report& r, bool timings);
nlohmann::json render_json(const Report& r, bool timings);

/// CSV with header n,analysis_lb,analysis_ub,spec_lb,spec_ub. Throws DomainUnbounded.
std::string plot_csv(const Assertion& spec, const AnalysisResult& analysis, const NatInterval& range,
                     std::int64_t step);

/// The analysis record for `spec`; throws JobError when there is none.
const AnalysisResult& find_analysis(const Job& job, const Assertion& spec);

} // namespace resbound::job
