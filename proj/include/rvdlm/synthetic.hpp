#pragma once

// Synthetic OHLC series drawn from the generative model
//   y_t = F_t' theta_t + nu_t,          nu_t ~ N(0, 1/phi_t)
//   theta_t = theta_{t-1} + omega_t,    omega_t ~ N(0, W / phi_t)   (plus an optional deterministic drift)
//   phi_t = phi_{t-1} gamma_t / beta,   gamma_t ~ Beta(beta k / 2, (1 - beta) k / 2)
//   z_t = eta_t / phi_t,                eta_t ~ G(alpha/2, alpha/2)
// with F_t laid out as for the chosen model class (x_t = sqrt(z_t)).
//
// Bar construction: O_t = C_{t-1}, C_t = exp(y_t), and with c = y_t - y_{t-1}
// the high/low log excursions are u = max(c, 0) + p L, d = min(c, 0) - (1 - p) L
// for a random split p. Rogers-Satchell of such a bar is (p^2 + (1-p)^2) L^2 + |c| L,
// solved exactly for L >= 0 so the bar reproduces z_t. A bar whose recomputed
// RS misses z_t by more than 1e-10 relative is rejected and p is redrawn.

#include "rvdlm/date.hpp"
#include "rvdlm/dlm_core.hpp"
#include "rvdlm/rv_measures.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace rvdlm {

struct SyntheticSpec {
    ModelClass model = ModelClass::RVLDLM;
    std::size_t days = 2000;  // modeled days; one extra leading bar supplies lags
    double beta = 0.875;
    double alpha = 2.75;
    double vol_dof = 200.0;   // k in the beta shock law
    double initial_variance = 1e-4;
    double initial_price = 100.0;
    // theta_t = theta_start + amplitude .* sin(2 pi t / period + phase) + random walk
    StateVector theta_start;
    StateVector amplitude;
    StateVector phase;
    double period = 4000.0;
    StateVector walk_sd;  // sqrt(diag W), scaled by sqrt(v_t) at each step
    Date start_date = Date{std::chrono::year{2000} / 1 / 3};
};

struct SyntheticSeries {
    std::vector<OhlcBar> bars;        // days + 1 bars
    std::vector<StateVector> theta;   // per modeled day
    std::vector<double> phi;
    std::vector<double> y;
    std::vector<double> z;
};

// Reasonable RVL-DLM truth: contemporaneous RV coefficient negative, lagged positive.
SyntheticSpec default_synthetic_spec(ModelClass model, std::size_t days);

SyntheticSeries generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Reads a JSON parameter file; absent keys keep default_synthetic_spec values.
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path, ModelClass model, std::size_t days);

}  // namespace rvdlm
