#pragma once

#include "rvdlm/date.hpp"
#include "rvdlm/rv_measures.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rvdlm {

// One modeled trading day. Lag columns equal the level columns of the
// previous row (or of the consumed first bar for row 0).
struct SeriesRow {
    Date date{};
    OhlcBar bar;
    double y = 0.0;       // log close
    double z = 0.0;       // Rogers-Satchell realized variance, floored
    double x = 0.0;       // realized SD sqrt(z)
    double y_prev = 0.0;
    double x_prev = 0.0;
};

struct SeriesFrame {
    std::string ticker;
    std::vector<SeriesRow> rows;
    std::optional<Date> train_end;
    std::optional<Date> eval_start;
    std::size_t train_count = 0;
    std::size_t eval_count = 0;

    bool in_evaluation(const SeriesRow& row) const { return eval_start && row.date >= *eval_start; }
};

}  // namespace rvdlm
