#include "rvdlm/rv_measures.hpp"

#include "rvdlm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rvdlm {

namespace {

[[noreturn]] void bad_bar(const OhlcBar& bar, const char* what) {
    std::ostringstream os;
    os.precision(17);
    os << "invalid OHLC bar on " << format_iso_date(bar.date) << ": " << what << " (O=" << bar.open
       << " H=" << bar.high << " L=" << bar.low << " C=" << bar.close << ")";
    throw DataError(os.str());
}

}  // namespace

OhlcBar validated_bar(const OhlcBar& bar) {
    for (double p : {bar.open, bar.high, bar.low, bar.close}) {
        if (!(p > 0.0) || !std::isfinite(p)) bad_bar(bar, "prices must be positive and finite");
    }
    OhlcBar out = bar;
    const double top = std::max(bar.open, bar.close);
    const double bottom = std::min(bar.open, bar.close);
    if (out.high < top) {
        if (top - out.high > kOhlcClampTolerance * top) bad_bar(bar, "high below open/close");
        out.high = top;
    }
    if (out.low > bottom) {
        if (out.low - bottom > kOhlcClampTolerance * bottom) bad_bar(bar, "low above open/close");
        out.low = bottom;
    }
    return out;
}

double rogers_satchell(const OhlcBar& bar) {
    const OhlcBar b = validated_bar(bar);
    const double hc = std::log(b.high / b.close);
    const double ho = std::log(b.high / b.open);
    const double lc = std::log(b.low / b.close);
    const double lo = std::log(b.low / b.open);
    // Each product pairs two logs of the same sign; clamp residual rounding.
    return std::max(0.0, hc * ho) + std::max(0.0, lc * lo);
}

double realized_sd(double z) {
    if (!(z >= 0.0) || !std::isfinite(z)) {
        std::ostringstream os;
        os << "realized variance must be nonnegative (got " << z << ")";
        throw DomainError(os.str());
    }
    return std::sqrt(z);
}

}  // namespace rvdlm
