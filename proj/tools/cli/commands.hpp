#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "l1ssl/spectral.hpp"

namespace l1ssl::cli {

inline constexpr const char* kMetricsSchema = "l1ssl.metrics/1";

struct OutputFile {
    std::string name;  // relative to the --output directory
    std::string contents;
};

/// Metrics document plus any files the command produces. Nothing touches
/// the filesystem until the caller writes `files`.
struct CommandResult {
    Json metrics;
    std::vector<OutputFile> files;
};

CommandResult cmd_moons_demo(const RunConfig& config);
CommandResult cmd_classify(const RunConfig& config);
CommandResult cmd_noise_sweep(const RunConfig& config);
CommandResult cmd_refine_bow(const RunConfig& config);
CommandResult cmd_eigen_dump(const RunConfig& config);

/// Validates the configuration, then dispatches on config.command.
CommandResult execute(const RunConfig& config);

/// One seeded two-moons trial: both methods on the same graph and labels.
struct MoonsTrial {
    std::uint64_t seed = 0;
    LabeledDataset data;
    std::vector<LabelAssignment> given;  // labels after noise injection
    Index flipped = 0;
    Solution l1;
    Solution l2;
    double accuracy_l1 = 0.0;
    double accuracy_l2 = 0.0;
    // Signed two-class solves measured against the full basis.
    SmoothnessReport smooth_l1;
    SmoothnessReport smooth_l2;
};

MoonsTrial run_moons_trial(const RunConfig& config, std::uint64_t run_seed);

struct ConfidenceSummary {
    double mean = 0.0;
    double sd = 0.0;          // sample standard deviation, 0 for a single value
    double half_width = 0.0;  // 1.96 sd / sqrt(count)
};

ConfidenceSummary confidence_95(std::span<const double> values);

double median(std::vector<double> values);

}  // namespace l1ssl::cli
