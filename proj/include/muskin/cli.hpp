#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "muskin/experiments.hpp"

namespace muskin {

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind { Rates, Profiles, Scalar, Stability, Constants, Exact };

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind k);

struct ScalarBlock {
    cplx a_plus{1.0};
    std::vector<cplx> ratios{10.0, 1e3, 1e6, cplx(0.0, 1e3)};
    std::vector<SurfaceMode> g{{1, 0, 0.5}, {-1, 0, 0.5}};
};

struct ProfilesBlock {
    double mu_r = 1e4;
    int n_tangential = 32;
    int n_depth = 64;
};

struct ExactBlock {
    double mu_r = 1e4;
    std::vector<Point3> points;
};

/// Parsed, validated experiment configuration (JSON with schema_version).
struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string experiment;  ///< optional; must match the subcommand when present
    Geometry geometry;
    MediaParams media;
    Drive drive;
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    std::vector<double> mu_r{1e2, 1e4, 1e6};
    std::vector<int> orders{0, 1, 2};
    Cutoff cutoff{0.0, 0.0, 5};  ///< d1 = 0 selects the default
    NormOptions norms;
    double slope_tolerance = 0.3;
    int threads = 0;  ///< 0 = not set
    ScalarBlock scalar;
    ProfilesBlock profiles;
    ExactBlock exact;
};

/// Throws ConfigError with line/column for syntax errors and the JSON path for field errors.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunResult {
    bool pass = false;
    std::vector<std::filesystem::path> files;  ///< data files written, in order
    std::string summary;
};

/// Runs one experiment and writes its outputs into `out_dir` (created if needed).
RunResult run_experiment(ExperimentKind kind, const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         int threads, bool verbose);

/// Fixed scientific format with 17 significant digits.
std::string csv_number(double v);

}  // namespace muskin
