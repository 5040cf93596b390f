#include "rvdlm/errors.hpp"
#include "rvdlm/ingestion.hpp"
#include "rvdlm/synthetic.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace rvdlm;

TEST_CASE("synthetic series replay bit-exactly from a seed") {
    const auto spec = default_synthetic_spec(ModelClass::RVLDLM, 500);
    const auto a = generate_synthetic(spec, 123);
    const auto b = generate_synthetic(spec, 123);
    const auto c = generate_synthetic(spec, 124);
    REQUIRE(a.bars.size() == 501);
    for (std::size_t i = 0; i < a.bars.size(); ++i) {
        CHECK(a.bars[i].open == b.bars[i].open);
        CHECK(a.bars[i].high == b.bars[i].high);
        CHECK(a.bars[i].low == b.bars[i].low);
        CHECK(a.bars[i].close == b.bars[i].close);
    }
    CHECK(a.y != c.y);
}

TEST_CASE("build_series recovers the simulated (y, z)") {
    for (ModelClass mc : {ModelClass::SVDLM, ModelClass::RVLDLM}) {
        const auto s = generate_synthetic(default_synthetic_spec(mc, 2000), 5);
        const auto f = build_series(s.bars, kDefaultRvFloor, "SYN");
        REQUIRE(f.rows.size() == s.y.size());
        double worst_y = 0.0, worst_z = 0.0;
        for (std::size_t t = 0; t < f.rows.size(); ++t) {
            worst_y = std::max(worst_y, std::abs(f.rows[t].y - s.y[t]) / std::abs(s.y[t]));
            worst_z = std::max(worst_z, std::abs(f.rows[t].z - s.z[t]) / s.z[t]);
        }
        CHECK(worst_y <= 1e-10);
        CHECK(worst_z <= 1e-10);
    }
}

TEST_CASE("z is a conditionally unbiased proxy for the variance") {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = generate_synthetic(default_synthetic_spec(ModelClass::RVDLM, 2000), seed);
        for (std::size_t t = 0; t < s.z.size(); ++t) {
            const double r = s.z[t] * s.phi[t];
            sum += r;
            sum2 += r * r;
            ++n;
        }
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 4.0 * se);
}

TEST_CASE("bars are valid and dates are business days") {
    const auto s = generate_synthetic(default_synthetic_spec(ModelClass::RVLDLM, 300), 8);
    for (std::size_t i = 0; i < s.bars.size(); ++i) {
        CHECK_NOTHROW(validated_bar(s.bars[i]));
        const std::chrono::weekday wd{s.bars[i].date};
        CHECK(wd != std::chrono::Saturday);
        CHECK(wd != std::chrono::Sunday);
        if (i > 0) CHECK(s.bars[i].open == s.bars[i - 1].close);
    }
}

TEST_CASE("parameter files override defaults") {
    const auto dir = std::filesystem::temp_directory_path() / "rvdlm_synth_params";
    std::filesystem::create_directories(dir);
    const auto path = dir / "p.json";
    {
        std::ofstream out(path);
        out << R"({"beta": 0.9, "theta_start": [0.0, 1.0, -0.4, 0.3], "start_date": "2001-02-05"})";
    }
    const auto spec = load_synthetic_spec(path, ModelClass::RVLDLM, 100);
    CHECK(spec.beta == 0.9);
    CHECK(spec.theta_start(2) == -0.4);
    CHECK(spec.alpha == 2.75);
    CHECK(format_iso_date(spec.start_date) == "2001-02-05");
    CHECK_THROWS_AS(load_synthetic_spec(path, ModelClass::SVDLM, 100), ConfigError);  // wrong dimension
    CHECK_THROWS_AS(load_synthetic_spec(dir / "missing.json", ModelClass::SVDLM, 100), ConfigError);
    CHECK_THROWS_AS(generate_synthetic(default_synthetic_spec(ModelClass::SVDLM, 0), 1), ConfigError);
    std::filesystem::remove_all(dir);
}
