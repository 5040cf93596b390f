// Closed-form updates certified against brute-force grid integration.

#include "oracles/quadrature.hpp"
#include "rvdlm/distributions.hpp"
#include "rvdlm/dlm_core.hpp"
#include "rvdlm/forecast.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace rvdlm;
using testsupport::rel_err;

namespace {

PriorMoments scalar_prior(double a, double R, double n, double s) {
    PriorMoments p;
    p.a = StateVector::Constant(1, a);
    p.R = StateMatrix::Constant(1, 1, R);
    p.n_star = n;
    p.s_prev = s;
    return p;
}

}  // namespace

TEST_CASE("rv_update agrees with the grid posterior over phi") {
    const auto g = oracle::grid_update({0.0, 1.0, 8.0, 2.0}, 1.0, std::nullopt, 3.0, 4.0);
    const auto ng = oracle::moments_to_normal_gamma(g);
    const RvUpdatedPrior u = rv_update(scalar_prior(0, 1, 8, 2), 3.0, 4.0);
    CHECK(rel_err(ng.s, u.s_tilde) < 1e-8);
    CHECK(rel_err(ng.n, u.n_tilde) < 1e-8);
    CHECK(rel_err(ng.s, 7.0 / 3.0) < 1e-8);
    // z carries no information about theta.
    CHECK(std::abs(g.mean_theta) < 1e-10);
    CHECK(rel_err(g.scaled_c, 1.0) < 1e-8);
}

TEST_CASE("price_update scalar toy agrees with the grid posterior") {
    const auto g = oracle::grid_update({0.0, 1.0, 4.0, 1.0}, 1.0, 2.0, std::nullopt, 0.0);
    const auto ng = oracle::moments_to_normal_gamma(g);
    CHECK(rel_err(ng.a, 1.0) < 1e-8);
    CHECK(rel_err(ng.R, 0.5) < 1e-8);
    CHECK(rel_err(ng.n, 5.0) < 1e-8);
    CHECK(rel_err(ng.s, 1.2) < 1e-8);
    // Evidence equals the one-step Student-t score.
    const UpdateResult r = sv_update(scalar_prior(0, 1, 4, 1), 2.0, StateVector::Constant(1, 1.0));
    CHECK(std::abs(g.log_evidence - r.stats.log_score) < 1e-8);
}

TEST_CASE("z-conditional predictive of y agrees with the grid") {
    // n* = 8, s_prev = 2, alpha = 4, z = 3, a = 0, R = 1, F = 1.
    const oracle::ScalarPrior prior{0.0, 1.0, 8.0, 2.0};
    const double y = 1.7;
    const auto joint = oracle::grid_update(prior, 1.0, y, 3.0, 4.0);
    const auto z_only = oracle::grid_update(prior, 1.0, std::nullopt, 3.0, 4.0);
    const double grid_log_p = joint.log_evidence - z_only.log_evidence;

    PriorMoments p;
    p.a = StateVector::Zero(3);
    p.R = StateMatrix::Zero(3, 3);
    p.R(0, 0) = 1.0;
    p.n_star = 8.0;
    p.s_prev = 2.0;
    const auto t = predictive_y_given_z(p, 4.0, 3.0, {ModelClass::RVDLM, 0.0, 0.0, kDefaultRvFloor});
    CHECK(t.scale == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(dist::student_t_logpdf(y, t) - grid_log_p) < 1e-8);
    CHECK(std::abs(dist::scaled_f_logpdf(3.0, predictive_z(p, 4.0)) - z_only.log_evidence) < 1e-8);
}

TEST_CASE("short quadrature chain matches the closed-form filter") {
    const std::vector<oracle::ToyStep> steps = {{1.0, 0.3, 0.8}, {0.5, -0.1, 1.6}, {2.0, 1.1, 0.5}};
    const double delta = 0.95, beta = 0.9, alpha = 2.75;
    const auto grid = oracle::grid_chain({0.0, 1.0, 6.0, 1.0}, steps, delta, beta, alpha);

    PriorMoments prior = scalar_prior(0, 1, 6, 1);
    for (std::size_t t = 0; t < steps.size(); ++t) {
        if (t > 0) prior = evolve(price_update(rv_update(prior, *steps[t - 1].z, alpha), *steps[t - 1].y,
                                               StateVector::Constant(1, steps[t - 1].F)).post,
                                  {delta, beta, alpha});
        const UpdateResult r = price_update(rv_update(prior, *steps[t].z, alpha), *steps[t].y,
                                            StateVector::Constant(1, steps[t].F));
        const double n = r.post.n, s = r.post.s;
        CHECK(rel_err(grid[t].mean_theta, r.post.m(0)) < 1e-6);
        CHECK(rel_err(grid[t].var_theta, s * r.post.C(0, 0) * n / (n - 2.0)) < 1e-6);
        CHECK(rel_err(grid[t].mean_phi, 1.0 / s) < 1e-6);
    }
}
