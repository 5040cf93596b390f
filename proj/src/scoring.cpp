#include "rvdlm/scoring.hpp"

#include "rvdlm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rvdlm {

namespace {

void require_aligned(const ScoreLedger& a, const ScoreLedger& b) {
    if (a.window_start() != b.window_start()) {
        throw UsageError("ledgers '" + a.model() + "' and '" + b.model() + "' have different window starts (" +
                         format_iso_date(a.window_start()) + " vs " + format_iso_date(b.window_start()) + ")");
    }
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    if (ea.size() != eb.size()) {
        std::ostringstream os;
        os << "ledgers '" << a.model() << "' and '" << b.model() << "' cover different numbers of days ("
           << ea.size() << " vs " << eb.size() << ")";
        throw UsageError(os.str());
    }
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (ea[i].date != eb[i].date) {
            throw UsageError("ledgers '" + a.model() + "' and '" + b.model() + "' are misaligned at " +
                             format_iso_date(ea[i].date));
        }
    }
}

}  // namespace

ScoreLedger::ScoreLedger(std::string model, Date window_start)
    : model_(std::move(model)), window_start_(window_start) {}

void ScoreLedger::record(Date date, double y_score, std::optional<double> z_score) {
    if (date < window_start_) return;
    if (!entries_.empty() && date <= entries_.back().date) {
        throw UsageError("score dates must strictly increase (" + format_iso_date(date) + " after " +
                         format_iso_date(entries_.back().date) + ")");
    }
    if (!std::isfinite(y_score) || (z_score && !std::isfinite(*z_score))) {
        throw NumericalError("non-finite log score on " + format_iso_date(date) + " for model '" + model_ + "'");
    }
    entries_.push_back({date, y_score, z_score, cumulative() + y_score});
}

double ScoreLedger::cumulative_through(Date date) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), date,
                               [](Date d, const ScoreEntry& e) { return d < e.date; });
    return it == entries_.begin() ? 0.0 : std::prev(it)->cumulative;
}

std::optional<double> ScoreLedger::joint_cumulative() const {
    double total = 0.0;
    for (const auto& e : entries_) {
        if (!e.z_score) return std::nullopt;
        total += e.y_score + *e.z_score;
    }
    return total;
}

bool ScoreLedger::consistent() const {
    double running = 0.0;
    for (const auto& e : entries_) {
        running += e.y_score;
        if (running != e.cumulative) return false;
    }
    return true;
}

double log_score_y(const OneStepStats& stats) {
    if (!std::isfinite(stats.log_score)) throw NumericalError("one-step log score is not finite");
    return stats.log_score;
}

double log_bayes_factor(const ScoreLedger& m, const ScoreLedger& m2, Date date) {
    require_aligned(m, m2);
    return m.cumulative_through(date) - m2.cumulative_through(date);
}

std::vector<std::pair<Date, double>> log_bayes_factor_trajectory(const ScoreLedger& m, const ScoreLedger& m2) {
    require_aligned(m, m2);
    std::vector<std::pair<Date, double>> out;
    out.reserve(m.entries().size());
    for (std::size_t i = 0; i < m.entries().size(); ++i) {
        out.emplace_back(m.entries()[i].date, m.entries()[i].cumulative - m2.entries()[i].cumulative);
    }
    return out;
}

ScoreLedger reinitialize_window(const ScoreLedger& ledger, Date start_date) {
    if (start_date < ledger.window_start()) {
        throw UsageError("cannot re-initialize ledger '" + ledger.model() + "' at " + format_iso_date(start_date) +
                         ", before its window start " + format_iso_date(ledger.window_start()));
    }
    ScoreLedger out(ledger.model(), start_date);
    for (const auto& e : ledger.entries()) out.record(e.date, e.y_score, e.z_score);
    return out;
}

}  // namespace rvdlm
