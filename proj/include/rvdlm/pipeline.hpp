#pragma once

// Configuration-driven runner: reads OHLC files, filters every series under
// every model, scores the evaluation window, and writes plot-ready CSVs plus
// a JSON run summary.

#include "rvdlm/filter.hpp"
#include "rvdlm/ingestion.hpp"
#include "rvdlm/scoring.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rvdlm {

struct SeriesConfig {
    std::string ticker;
    std::filesystem::path path;
    // Initial volatility scale; defaults to the realized variance of the
    // lag-only first bar.
    std::optional<double> s1;
};

struct ModelConfig {
    ModelSpec spec;
    // Overrides of the default initial prior (marginal scale).
    std::optional<std::vector<double>> a1;
    std::optional<std::vector<double>> r1_diag;
    std::optional<double> n_star1;
};

struct RunConfig {
    std::vector<SeriesConfig> series;
    std::vector<ModelConfig> models;
    Date train_end = Date{std::chrono::year{2009} / 12 / 31};
    Date eval_start = Date{std::chrono::year{2010} / 1 / 4};
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 20100104;
    double rv_floor = kDefaultRvFloor;
    std::size_t mc_samples = 0;  // per-day predictive draws; 0 disables the MC columns
    CsvSchema schema;
    // Stand-alone gamma filter on z_t alone (volatility-only comparison).
    bool rv_only_volatility = true;
    double rv_only_beta = 0.875;
    double rv_only_alpha = 2.75;
};

// SV-DLM (0.999, 0.925); RV-DLM and RVL-DLM (0.999, 0.875, 2.75).
std::vector<ModelConfig> default_models();

// JSON config; relative series paths resolve against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);

InitialPrior initial_prior_for(const ModelConfig& mc, double s1);

struct ModelOutcome {
    std::string model;
    double final_log_score = 0.0;
    std::optional<double> final_joint_log_score;
};

struct SeriesOutcome {
    std::string ticker;
    bool ok = true;
    int exit_code = 0;
    std::string error;
    std::size_t bars = 0;
    std::size_t modeled = 0;
    std::size_t train_days = 0;
    std::size_t eval_days = 0;
    std::optional<Date> first_scored;
    double s1 = 0.0;
    std::vector<ModelOutcome> models;
    std::vector<std::pair<std::string, double>> final_log_bf;  // "A_vs_B" -> log BF
    std::vector<std::string> warnings;
};

struct RunSummary {
    std::vector<SeriesOutcome> series;
    int exit_code() const;
};

// Result for one series under every configured model; no I/O.
struct SeriesAnalysis {
    SeriesFrame frame;
    std::vector<FilterTrajectory> trajectories;
    std::vector<ScoreLedger> ledgers;
};

SeriesAnalysis analyze_series(const SeriesFrame& frame, const RunConfig& config, double s1);

RunSummary run_filter_pipeline(const RunConfig& config);

// Rebuilds log Bayes factor trajectories from the per-model CSVs of a run
// directory and writes them to out_dir. Returns the number of files written.
std::size_t recompute_scores(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir);

// File-name-safe form of a model name ("RVL-DLM" stays, spaces become '_').
std::string file_token(const std::string& name);

}  // namespace rvdlm
