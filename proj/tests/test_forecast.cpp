#include "rvdlm/errors.hpp"
#include "rvdlm/forecast.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace rvdlm;

namespace {

PriorMoments prior3(double n_star, double s_prev) {
    PriorMoments p;
    p.a = StateVector::Zero(3);
    p.R = StateMatrix::Zero(3, 3);
    p.R(0, 0) = 1.0;
    p.n_star = n_star;
    p.s_prev = s_prev;
    return p;
}

PriorMoments prior_rvl() {
    PriorMoments p;
    p.a.resize(4);
    p.a << 0.001, 1.0, -0.6, 0.5;
    p.R = StateMatrix::Zero(4, 4);
    p.R.diagonal() << 1e-6 / 1e-4, 1e-8 / 1e-4, 0.02, 0.02;
    p.n_star = 17.5;
    p.s_prev = 1e-4;
    return p;
}

}  // namespace

TEST_CASE("predictive_z echoes its inputs") {
    const auto p = predictive_z(prior3(10.0, 2.0), 2.75);
    CHECK(p.dof_num == 2.75);
    CHECK(p.dof_den == 10.0);
    CHECK(p.scale == 2.0);
    CHECK(p.scale * p.dof_den / (p.dof_den - 2.0) == doctest::Approx(2.5));
}

TEST_CASE("predictive_y_given_z examples") {
    const RegressorInputs in{ModelClass::RVDLM, 0.5, 0.1, kDefaultRvFloor};
    // z at the prior scale: s~ = s_prev.
    PriorMoments p = prior3(8.0, 2.0);
    auto t = predictive_y_given_z(p, 1.7, 2.0, in);
    CHECK(t.dof == doctest::Approx(9.7));
    CHECK(t.scale == doctest::Approx(2.0 * (1.0 + 1.0)).epsilon(1e-15));

    // n* = 8, alpha = 4, z = 3, s_prev = 2: s~ = 7/3 and F'RF = 1.
    t = predictive_y_given_z(p, 4.0, 3.0, in);
    CHECK(t.dof == 12.0);
    CHECK(t.location == 0.0);
    CHECK(t.scale == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("RVL location responds to z through sqrt(z) only") {
    const PriorMoments p = prior_rvl();
    const RegressorInputs in{ModelClass::RVLDLM, std::log(100.0), 0.012, kDefaultRvFloor};
    const double z = 1.1e-4;
    const auto a = predictive_y_given_z(p, 2.75, z, in);
    const auto b = predictive_y_given_z(p, 2.75, 2.0 * z, in);
    CHECK(b.location - a.location == doctest::Approx(p.a(2) * (std::sqrt(2.0 * z) - std::sqrt(z))).epsilon(1e-9));
    // RV-DLM layout: location is free of z.
    const RegressorInputs in3{ModelClass::RVDLM, std::log(100.0), 0.012, kDefaultRvFloor};
    const PriorMoments p3 = prior3(17.5, 1e-4);
    CHECK(predictive_y_given_z(p3, 2.75, z, in3).location == predictive_y_given_z(p3, 2.75, 9 * z, in3).location);
}

TEST_CASE("sample_joint replays bit-exactly and reproduces the z margin") {
    const PriorMoments p = prior_rvl();
    const RegressorInputs in{ModelClass::RVLDLM, std::log(100.0), 0.012, kDefaultRvFloor};
    Rng r1(42), r2(42);
    for (int i = 0; i < 1000; ++i) {
        const JointDraw a = sample_joint(p, 2.75, in, r1);
        const JointDraw b = sample_joint(p, 2.75, in, r2);
        CHECK(a.z == b.z);
        CHECK(a.y == b.y);
    }
    Rng rng(7);
    std::vector<double> zs(100000);
    for (auto& z : zs) z = sample_joint(p, 2.75, in, rng).z;
    const auto zp = predictive_z(p, 2.75);
    CHECK(testsupport::ks_statistic(zs, [&](double z) { return dist::scaled_f_cdf(z, zp); }) <
          testsupport::ks_critical_1pct(zs.size()));
    // Median of the MC sample sits at CDF 0.5 within MC error.
    CHECK(std::abs(dist::scaled_f_cdf(zs[zs.size() / 2], zp) - 0.5) < 4.0 * 0.5 / std::sqrt(zs.size()));
}

TEST_CASE("SV layout with alpha -> 0: y margin is the one-step Student-t") {
    PriorMoments p = prior3(6.0, 3e-4);
    p.a << 0.002, 1.0, 0.1;
    p.R(1, 1) = 1e-4;
    const RegressorInputs in{ModelClass::RVDLM, 0.3, 0.02, kDefaultRvFloor};
    Rng rng(9);
    std::vector<double> ys(100000);
    for (auto& y : ys) y = sample_joint(p, 1e-10, in, rng).y;
    const StateVector F = build_regressor(ModelClass::RVDLM, 0.3, 0.0, 0.02);
    const dist::StudentTParams t{p.n_star, F.dot(p.a), p.s_prev * (1.0 + F.dot(p.R * F))};
    CHECK(testsupport::ks_statistic(ys, [&](double y) { return dist::student_t_cdf(y, t); }) <
          testsupport::ks_critical_1pct(ys.size()));
}

TEST_CASE("RVL predictive mean of y matches quadrature over the z margin") {
    const PriorMoments p = prior_rvl();
    const RegressorInputs in{ModelClass::RVLDLM, std::log(100.0), 0.012, kDefaultRvFloor};
    const auto zp = predictive_z(p, 2.75);
    const double e_sqrt_z = testsupport::integrate_positive(
        [&](double z) { return std::sqrt(z) * std::exp(dist::scaled_f_logpdf(z, zp)); }, 1e-16, 1.0);
    const double want = p.a(0) + p.a(1) * in.y_prev + p.a(2) * e_sqrt_z + p.a(3) * in.x_prev;

    Rng rng(31);
    const int N = 1000000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double y = sample_joint(p, 2.75, in, rng).y;
        s += y - want;
        s2 += (y - want) * (y - want);
    }
    const double mean = s / N;
    const double se = std::sqrt((s2 / N - mean * mean) / N);
    CHECK(std::abs(mean) < 4.0 * se);
}

TEST_CASE("joint log density is the sum of its factors") {
    const PriorMoments p = prior_rvl();
    const RegressorInputs in{ModelClass::RVLDLM, std::log(100.0), 0.012, kDefaultRvFloor};
    const JointPredictive jp(p, 2.75, in);
    const double y = std::log(100.4), z = 1.3e-4;
    CHECK(jp.log_density(y, z) ==
          doctest::Approx(dist::scaled_f_logpdf(z, jp.z_margin()) + dist::student_t_logpdf(y, jp.y_given(z)))
              .epsilon(1e-15));
}

TEST_CASE("price-scale transforms") {
    CHECK(price_scale_effect(0.0, 0.05) == 1.0);
    CHECK(price_scale_effect(-0.7, 0.0) == 1.0);
    CHECK(price_scale_effect(-1.0, 0.02) == doctest::Approx(0.980199).epsilon(1e-6));
    CHECK(price_scale_effect(-0.3, 0.01) < 1.0);
    CHECK(net_rv_contribution(0, 0, 0, 0) == 0.0);
    CHECK(net_rv_contribution(-1.0, 0.02, 1.0, 0.02) == 0.0);
    CHECK(net_rv_contribution(-0.5, 0.03, 0.8, 0.01) == doctest::Approx(-0.007).epsilon(1e-12));
}
