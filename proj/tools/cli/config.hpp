#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "l1ssl/bow.hpp"
#include "l1ssl/graph.hpp"
#include "l1ssl/solver.hpp"
#include "l1ssl/ssl.hpp"

namespace l1ssl::cli {

using Json = nlohmann::ordered_json;

enum class Command { moons_demo, classify, noise_sweep, refine_bow, eigen_dump };
enum class Preset { none, mnist_style, table2_visual, table2_textual };

std::string_view to_string(Command command);
std::string_view to_string(Preset preset);
std::optional<Preset> parse_preset(std::string_view name);

/// Everything a command needs. Built by make_config and checked by
/// validate() before any data is generated or read.
struct RunConfig {
    Command command = Command::moons_demo;
    Preset preset = Preset::none;

    GraphConfig graph;
    SolverOptions solver;
    Index m = 20;
    NoiseSpec noise;                  // labeled_per_class and noise_fraction
    std::vector<double> noise_grid;   // noise-sweep only
    RefineConfig refine_visual = RefineConfig::table2_visual();
    RefineConfig refine_textual = RefineConfig::table2_textual();

    std::uint64_t seed = 42;
    int runs = 1;
    unsigned workers = 1;

    // Generated two-moons data (moons-demo, and noise-sweep without --input).
    Index points = 200;
    double moons_noise_sd = 0.1;

    std::vector<std::filesystem::path> inputs;
    std::optional<std::filesystem::path> labels;
    std::optional<std::filesystem::path> truth;
    std::optional<std::filesystem::path> output;

    /// Throws ConfigError describing the first invalid field.
    void validate() const;
};

/// Command-line values. Unset fields keep the command or preset default.
struct Overrides {
    std::optional<double> sigma;
    std::optional<Index> k;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::optional<Index> m;
    std::optional<std::vector<double>> noise_fraction;
    std::optional<Index> labels_per_class;
    std::optional<int> runs;
    std::optional<Index> points;
    std::optional<double> moons_noise;
    std::optional<Index> max_iters;
    bool mutual = false;
    bool backtracking = false;
    bool clamp_nonnegative = false;
    std::uint64_t seed = 42;
    unsigned workers = 1;
    Preset preset = Preset::none;
    std::vector<std::filesystem::path> inputs;
    std::optional<std::filesystem::path> labels;
    std::optional<std::filesystem::path> truth;
    std::optional<std::filesystem::path> output;
};

/// Graph and solver defaults for generated two-moons runs.
RunConfig moons_defaults();

/// Handwritten-digit style defaults: k = 4, lambda = 0.01, m = 20, sigma = 1.
RunConfig mnist_style_defaults();

/// Resolves defaults (command, then preset, then explicit overrides).
RunConfig make_config(Command command, const Overrides& overrides);

/// Effective configuration as written into metrics documents. Output paths
/// are left out so that documents do not depend on where they are written.
Json to_json(const RunConfig& config);

}  // namespace l1ssl::cli
