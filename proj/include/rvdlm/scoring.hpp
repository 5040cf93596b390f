#pragma once

// Cumulative one-step log predictive scores and log Bayes factors.
//
// Models are compared on the price margin log p(y_t | D_{t-1}, m). For RV
// variants y_t is scored under its z-conditional Student-t; the z-margin
// score is retained alongside so joint (y, z) tallies remain available.

#include "rvdlm/date.hpp"
#include "rvdlm/dlm_core.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rvdlm {

struct ScoreEntry {
    Date date{};
    double y_score = 0.0;
    std::optional<double> z_score;
    double cumulative = 0.0;  // running sum of y_score through this date
};

class ScoreLedger {
public:
    ScoreLedger(std::string model, Date window_start);

    // Days before the window start are ignored. Dates must strictly increase.
    void record(Date date, double y_score, std::optional<double> z_score = std::nullopt);

    const std::string& model() const { return model_; }
    Date window_start() const { return window_start_; }
    const std::vector<ScoreEntry>& entries() const { return entries_; }

    double cumulative() const { return entries_.empty() ? 0.0 : entries_.back().cumulative; }
    // Cumulative y score over entries dated on or before `date`.
    double cumulative_through(Date date) const;
    // Sum of y + z scores; nullopt unless every entry carries a z score.
    std::optional<double> joint_cumulative() const;

    // Recomputes the running sums from the increments and compares exactly.
    bool consistent() const;

private:
    std::string model_;
    Date window_start_;
    std::vector<ScoreEntry> entries_;
};

double log_score_y(const OneStepStats& stats);

// log B_t(m, m') through `date`. Ledgers must share the window and date coverage.
double log_bayes_factor(const ScoreLedger& m, const ScoreLedger& m2, Date date);

// log B_t(m, m') for every scored date.
std::vector<std::pair<Date, double>> log_bayes_factor_trajectory(const ScoreLedger& m, const ScoreLedger& m2);

// Restarts the cumulative sums at start_date; earlier entries are dropped.
ScoreLedger reinitialize_window(const ScoreLedger& ledger, Date start_date);

}  // namespace rvdlm
