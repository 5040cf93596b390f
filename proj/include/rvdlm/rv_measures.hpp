#pragma once

#include "rvdlm/date.hpp"

namespace rvdlm {

struct OhlcBar {
    Date date{};
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

// Bars whose high/low miss the open/close by at most this relative amount
// are treated as vendor rounding and clamped.
inline constexpr double kOhlcClampTolerance = 1e-9;

// Default floor applied to realized variance before it enters a gamma update.
inline constexpr double kDefaultRvFloor = 1e-12;

// Checks the OHLC ordering L <= min(O, C), max(O, C) <= H with positive prices.
// Small violations are clamped; anything larger throws DataError naming the date.
OhlcBar validated_bar(const OhlcBar& bar);

// Rogers-Satchell realized variance
//   log(H/C) log(H/O) + log(L/C) log(L/O).
// Nonnegative for every valid bar and invariant to rescaling all four prices.
double rogers_satchell(const OhlcBar& bar);

// Realized standard deviation sqrt(z).
double realized_sd(double z);

}  // namespace rvdlm
