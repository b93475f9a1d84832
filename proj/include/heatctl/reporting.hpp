#pragma once

#include "heatctl/config.hpp"
#include "heatctl/driver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heatctl {

// 6-digit scientific mantissa with a compact exponent: 0 -> "0.000000e0",
// 0.558 -> "5.580000e-1". Deterministic bytes for deterministic runs.
std::string format_sci(double v);

// Header k,rel_dy,rel_df,norm_y,norm_f,sqrt2E,lambda plus one row per
// record, trailing newline included.
std::string emit_table(const std::vector<IterationRecord>& records);

// One flat JSON object per line, keys k, rel_dy, rel_df, norm_y, norm_f,
// sqrt2E, lambda.
std::string emit_records(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> parse_records(const std::string& jsonl);

struct RunOutput {
    ExperimentConfig cfg;
    std::string variant;
    RunResult result;
    std::optional<double> forward_ratio; // set when the run was verified
};

// Builds the workspace from cfg, runs the requested variant and, for
// converged ls/newton runs, verifies the control with the forward solver.
RunOutput execute(const ExperimentConfig& cfg, const std::string& variant,
                  int threads);

std::string emit_report(const RunOutput& out);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::string text() const;
};

// Fast property suite: weight identities, finite-difference operator
// oracles, analytic dual-norm values, the derivative identity, monotone
// descent and a small-mesh null-control verification.
CheckReport check_suite(const ExperimentConfig& cfg, int threads);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace heatctl
