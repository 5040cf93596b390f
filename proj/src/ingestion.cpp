#include "rvdlm/ingestion.hpp"

#include "rvdlm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace rvdlm {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name, std::string_view source) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
    }
    throw DataError(std::string(source) + ": header has no column named '" + name + "'");
}

std::string format_price(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<OhlcBar> parse_csv_text(std::string_view text, const CsvSchema& schema, std::string_view source) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    std::size_t header_idx = 0;
    while (header_idx < lines.size() && trim(lines[header_idx]).empty()) ++header_idx;
    if (header_idx == lines.size()) throw DataError(std::string(source) + ": file is empty");

    const auto header = split_fields(lines[header_idx]);
    const std::size_t c_date = find_column(header, schema.date, source);
    const std::size_t c_open = find_column(header, schema.open, source);
    const std::size_t c_high = find_column(header, schema.high, source);
    const std::size_t c_low = find_column(header, schema.low, source);
    const std::size_t c_close = find_column(header, schema.close, source);
    const std::size_t c_adj =
        schema.use_adjusted_close ? find_column(header, schema.adjusted_close, source) : 0;
    const std::size_t needed = std::max({c_date, c_open, c_high, c_low, c_close, c_adj}) + 1;

    std::vector<OhlcBar> bars;
    std::vector<std::size_t> bad_lines;
    std::string first_problem;
    for (std::size_t li = header_idx + 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const std::size_t line_no = li + 1;
        const auto f = split_fields(lines[li]);
        OhlcBar bar;
        double adj = 0.0;
        std::string problem;
        if (f.size() < needed) {
            problem = "missing fields";
        } else {
            try {
                bar.date = parse_iso_date(trim(f[c_date]));
            } catch (const DataError& e) {
                problem = e.what();
            }
            if (problem.empty() &&
                (!parse_double(f[c_open], bar.open) || !parse_double(f[c_high], bar.high) ||
                 !parse_double(f[c_low], bar.low) || !parse_double(f[c_close], bar.close) ||
                 (schema.use_adjusted_close && !parse_double(f[c_adj], adj)))) {
                problem = "missing or non-numeric price";
            }
        }
        if (!problem.empty()) {
            if (bad_lines.empty()) first_problem = problem;
            bad_lines.push_back(line_no);
            continue;
        }
        if (schema.use_adjusted_close) {
            if (!(bar.close > 0.0) || !(adj > 0.0)) {
                if (bad_lines.empty()) first_problem = "non-positive close or adjusted close";
                bad_lines.push_back(line_no);
                continue;
            }
            const double k = adj / bar.close;
            bar.open *= k;
            bar.high *= k;
            bar.low *= k;
            bar.close = adj;
        }
        bars.push_back(bar);
    }
    if (!bad_lines.empty()) {
        std::ostringstream os;
        os << source << ": " << bad_lines.size() << " malformed row(s) at line(s) ";
        for (std::size_t i = 0; i < bad_lines.size() && i < 10; ++i) os << (i ? ", " : "") << bad_lines[i];
        if (bad_lines.size() > 10) os << ", ...";
        os << " (first: " << first_problem << ")";
        throw DataError(os.str());
    }

    std::stable_sort(bars.begin(), bars.end(), [](const OhlcBar& a, const OhlcBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].date == bars[i - 1].date) {
            throw DataError(std::string(source) + ": duplicate date " + format_iso_date(bars[i].date));
        }
    }
    return bars;
}

std::vector<OhlcBar> parse_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str(), schema, path.string());
}

void write_csv(std::ostream& out, std::span<const OhlcBar> bars, const CsvSchema& schema) {
    out << schema.date << ',' << schema.open << ',' << schema.high << ',' << schema.low << ',' << schema.close
        << '\n';
    for (const OhlcBar& b : bars) {
        out << format_iso_date(b.date) << ',' << format_price(b.open) << ',' << format_price(b.high) << ','
            << format_price(b.low) << ',' << format_price(b.close) << '\n';
    }
}

void write_csv(const std::filesystem::path& path, std::span<const OhlcBar> bars, const CsvSchema& schema) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    write_csv(out, bars, schema);
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw DataError("table has no column named '" + std::string(name) + "'");
}

CsvTable read_csv_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        for (auto& f : fields) f = std::string(trim(f));
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) throw DataError("'" + path.string() + "' is empty");
    return table;
}

SeriesFrame build_series(std::span<const OhlcBar> bars, double floor_eps, std::string ticker) {
    if (bars.size() < 2) throw DataError("series '" + ticker + "' needs at least 2 bars");
    if (!(floor_eps > 0.0)) throw ConfigError("realized-variance floor must be positive");
    SeriesFrame frame;
    frame.ticker = std::move(ticker);
    frame.rows.reserve(bars.size() - 1);

    double y_prev = std::log(validated_bar(bars[0]).close);
    double x_prev = realized_sd(std::max(rogers_satchell(bars[0]), floor_eps));
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].date <= bars[i - 1].date) {
            throw DataError("series '" + frame.ticker + "': dates not strictly increasing at " +
                            format_iso_date(bars[i].date));
        }
        SeriesRow row;
        row.date = bars[i].date;
        row.bar = validated_bar(bars[i]);
        row.y = std::log(row.bar.close);
        row.z = std::max(rogers_satchell(row.bar), floor_eps);
        row.x = realized_sd(row.z);
        row.y_prev = y_prev;
        row.x_prev = x_prev;
        y_prev = row.y;
        x_prev = row.x;
        frame.rows.push_back(row);
    }
    return frame;
}

SeriesFrame apply_split(SeriesFrame frame, Date train_end, Date eval_start) {
    if (frame.rows.empty()) throw UsageError("cannot split an empty series");
    if (!(train_end < eval_start)) {
        throw UsageError("training end " + format_iso_date(train_end) + " must precede evaluation start " +
                         format_iso_date(eval_start));
    }
    const Date first = frame.rows.front().date;
    const Date last = frame.rows.back().date;
    if (train_end > last) {
        throw UsageError("training end " + format_iso_date(train_end) + " is after the last modeled date " +
                         format_iso_date(last));
    }
    if (eval_start < first) {
        throw UsageError("evaluation start " + format_iso_date(eval_start) + " is before the first modeled date " +
                         format_iso_date(first));
    }
    frame.train_end = train_end;
    frame.eval_start = eval_start;
    frame.train_count = 0;
    frame.eval_count = 0;
    for (const SeriesRow& r : frame.rows) {
        if (r.date <= train_end) ++frame.train_count;
        if (r.date >= eval_start) ++frame.eval_count;
    }
    return frame;
}

}  // namespace rvdlm
