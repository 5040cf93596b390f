#pragma once

// OHLC CSV reading/writing and construction of the modeled series.
//
// CSV contract: UTF-8, comma-separated, one header row. Required columns are
// date (ISO-8601 YYYY-MM-DD), open, high, low, close, matched by the names in
// CsvSchema; other columns are ignored. Quoted fields are accepted.

#include "rvdlm/rv_measures.hpp"
#include "rvdlm/series.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rvdlm {

struct CsvSchema {
    std::string date = "Date";
    std::string open = "Open";
    std::string high = "High";
    std::string low = "Low";
    std::string close = "Close";
    // When enabled, all four prices are rescaled by adjusted_close / close so
    // the bar stays internally consistent.
    std::string adjusted_close = "Adj Close";
    bool use_adjusted_close = false;
};

// Bars sorted by date. Missing or unparseable fields are reported with line
// numbers; a repeated date is an error naming the date.
std::vector<OhlcBar> parse_csv_text(std::string_view text, const CsvSchema& schema,
                                    std::string_view source = "<memory>");
std::vector<OhlcBar> parse_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

// Writes bars with the schema's column names, full round-trip precision.
void write_csv(std::ostream& out, std::span<const OhlcBar> bars, const CsvSchema& schema = {});
void write_csv(const std::filesystem::path& path, std::span<const OhlcBar> bars, const CsvSchema& schema = {});

// The first bar only supplies lags; each later bar becomes one modeled row.
SeriesFrame build_series(std::span<const OhlcBar> bars, double floor_eps = kDefaultRvFloor,
                         std::string ticker = {});

// Header plus raw string cells; the generic reader for every CSV this
// project emits.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of the named column; throws DataError when absent.
    std::size_t column(std::string_view name) const;
};

CsvTable read_csv_table(const std::filesystem::path& path);

// Marks the training end and evaluation start and counts rows on each side.
SeriesFrame apply_split(SeriesFrame frame, Date train_end, Date eval_start);

}  // namespace rvdlm
