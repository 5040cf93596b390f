#include "rvdlm/synthetic.hpp"

#include "rvdlm/distributions.hpp"
#include "rvdlm/errors.hpp"
#include "rvdlm/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

namespace rvdlm {

namespace {

Date next_business_day(Date d) {
    do {
        d += std::chrono::days{1};
    } while (std::chrono::weekday{d} == std::chrono::Saturday || std::chrono::weekday{d} == std::chrono::Sunday);
    return d;
}

// Bar opening at `open_price`, closing at exp(y), with Rogers-Satchell equal to z.
OhlcBar make_bar(Date date, double open_price, double y, double z, Rng& rng) {
    const double c = y - std::log(open_price);
    const double abs_c = std::abs(c);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double p = 0.2 + 0.6 * rng.uniform();
        const double quad = p * p + (1.0 - p) * (1.0 - p);
        const double len = z > 0.0 ? 2.0 * z / (abs_c + std::sqrt(c * c + 4.0 * quad * z)) : 0.0;
        const double up = std::max(c, 0.0) + p * len;
        const double down = std::min(c, 0.0) - (1.0 - p) * len;
        OhlcBar bar;
        bar.date = date;
        bar.open = open_price;
        bar.close = std::exp(y);
        bar.high = std::max({open_price * std::exp(up), bar.open, bar.close});
        bar.low = std::min({open_price * std::exp(down), bar.open, bar.close});
        if (std::abs(rogers_satchell(bar) - z) <= 1e-10 * std::max(z, kDefaultRvFloor)) return bar;
    }
    throw NumericalError("could not reconstruct an OHLC bar reproducing z = " + std::to_string(z) + " on " +
                         format_iso_date(date));
}

StateVector json_vector(const nlohmann::json& j, const char* key, const StateVector& fallback) {
    if (!j.contains(key)) return fallback;
    const auto values = j.at(key).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(values.size()) != fallback.size()) {
        throw ConfigError(std::string("synthetic parameter '") + key + "' must have " +
                          std::to_string(fallback.size()) + " entries");
    }
    StateVector v(fallback.size());
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
    return v;
}

}  // namespace

SyntheticSpec default_synthetic_spec(ModelClass model, std::size_t days) {
    SyntheticSpec spec;
    spec.model = model;
    spec.days = days;
    // Half a cycle over the sample: drift stays small against the memory of a 0.999 discount.
    spec.period = 2.0 * static_cast<double>(days);
    const int d = regressor_dim(model);
    spec.theta_start = StateVector::Zero(d);
    spec.amplitude = StateVector::Zero(d);
    spec.phase = StateVector::Zero(d);
    spec.walk_sd = StateVector::Zero(d);
    spec.theta_start(1) = 1.0;
    if (model == ModelClass::RVLDLM) {
        spec.theta_start(2) = -0.6;
        spec.theta_start(3) = 0.5;
        spec.amplitude(2) = 0.1;
        spec.amplitude(3) = 0.1;
        spec.phase(3) = 0.5 * std::numbers::pi;
    } else {
        spec.theta_start(2) = 0.3;
        spec.amplitude(2) = 0.1;
    }
    return spec;
}

SyntheticSeries generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    const int d = regressor_dim(spec.model);
    if (spec.days < 1) throw ConfigError("synthetic series needs at least one modeled day");
    if (spec.theta_start.size() != d || spec.amplitude.size() != d || spec.phase.size() != d ||
        spec.walk_sd.size() != d) {
        throw ConfigError("synthetic state vectors must match the regressor dimension");
    }
    if (!(spec.beta > 0.0 && spec.beta <= 1.0) || !(spec.alpha > 0.0) || !(spec.vol_dof > 0.0) ||
        !(spec.initial_variance > 0.0) || !(spec.initial_price > 0.0) || !(spec.period > 0.0)) {
        throw ConfigError("synthetic parameters out of range");
    }

    Rng rng(seed);
    SyntheticSeries out;
    out.bars.reserve(spec.days + 1);

    double phi = 1.0 / spec.initial_variance;
    const double eta_shape = 0.5 * spec.alpha;
    double y_prev = std::log(spec.initial_price);
    double z_prev = dist::sample_gamma({eta_shape, eta_shape * phi}, rng);
    Date date = spec.start_date;
    out.bars.push_back(make_bar(date, spec.initial_price, y_prev, z_prev, rng));

    StateVector walk = StateVector::Zero(d);
    for (std::size_t t = 1; t <= spec.days; ++t) {
        if (spec.beta < 1.0) {
            const double k = spec.vol_dof;
            phi *= dist::sample_beta(0.5 * spec.beta * k, 0.5 * (1.0 - spec.beta) * k, rng) / spec.beta;
        }
        const double v = 1.0 / phi;
        for (int i = 0; i < d; ++i) walk(i) += spec.walk_sd(i) * std::sqrt(v) * rng.normal();
        StateVector theta = spec.theta_start + walk;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / spec.period;
        for (int i = 0; i < d; ++i) theta(i) += spec.amplitude(i) * std::sin(angle + spec.phase(i));

        const double z = dist::sample_gamma({eta_shape, eta_shape * phi}, rng);
        const StateVector F = build_regressor(spec.model, y_prev, std::sqrt(z), std::sqrt(z_prev));
        const double y = F.dot(theta) + std::sqrt(v) * rng.normal();

        date = next_business_day(date);
        out.bars.push_back(make_bar(date, out.bars.back().close, y, z, rng));
        out.theta.push_back(theta);
        out.phi.push_back(phi);
        // Report the values the bar actually encodes.
        out.y.push_back(std::log(out.bars.back().close));
        out.z.push_back(z);
        y_prev = out.y.back();
        z_prev = z;
    }
    return out;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path, ModelClass model, std::size_t days) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open synthetic parameter file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("synthetic parameter file '" + path.string() + "': " + e.what());
    }
    SyntheticSpec spec = default_synthetic_spec(model, days);
    try {
        spec.beta = j.value("beta", spec.beta);
        spec.alpha = j.value("alpha", spec.alpha);
        spec.vol_dof = j.value("vol_dof", spec.vol_dof);
        spec.initial_variance = j.value("initial_variance", spec.initial_variance);
        spec.initial_price = j.value("initial_price", spec.initial_price);
        spec.period = j.value("period", spec.period);
        spec.theta_start = json_vector(j, "theta_start", spec.theta_start);
        spec.amplitude = json_vector(j, "amplitude", spec.amplitude);
        spec.phase = json_vector(j, "phase", spec.phase);
        spec.walk_sd = json_vector(j, "walk_sd", spec.walk_sd);
        if (j.contains("start_date")) spec.start_date = parse_iso_date(j.at("start_date").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("synthetic parameter file '" + path.string() + "': " + e.what());
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

}  // namespace rvdlm
