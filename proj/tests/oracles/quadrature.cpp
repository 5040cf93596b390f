#include "oracles/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_gamma_density(double x, double shape, double rate) {
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

}  // namespace

GridPosterior grid_update(const ScalarPrior& prior, double F, std::optional<double> y, std::optional<double> z, double alpha,
                          const GridOptions& opt) {
    const double centre = std::log(1.0 / prior.s);
    const double u_lo = centre - opt.u_below;
    const double hu = (opt.u_below + opt.u_above) / (opt.u_points - 1);
    const double hx = 2.0 * opt.xi_half_width / (opt.xi_points - 1);
    const double shape = 0.5 * prior.n;
    const double rate = 0.5 * prior.n * prior.s;

    // Log weights first, so the maximum can be factored out.
    std::vector<double> logw(static_cast<std::size_t>(opt.u_points) * opt.xi_points);
    double max_logw = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.u_points; ++i) {
        const double u = u_lo + i * hu;
        const double phi = std::exp(u);
        // dphi = phi du
        double base = log_gamma_density(phi, shape, rate) + u;
        if (z) base += log_gamma_density(*z, 0.5 * alpha, 0.5 * alpha * phi);
        const double sd = std::sqrt(prior.R / phi);
        for (int k = 0; k < opt.xi_points; ++k) {
            const double xi = -opt.xi_half_width + k * hx;
            const double theta = prior.a + sd * xi;
            // N(xi; 0, 1) prior on the standardized coordinate, N(y; F theta, 1/phi) likelihood.
            double lw = base - kLogSqrt2Pi - 0.5 * xi * xi;
            if (y) {
                const double r = *y - F * theta;
                lw += -kLogSqrt2Pi + 0.5 * u - 0.5 * phi * r * r;
            }
            logw[static_cast<std::size_t>(i) * opt.xi_points + k] = lw;
            max_logw = std::max(max_logw, lw);
        }
    }

    // Trapezoid weights: halve the edges.
    auto edge = [](int idx, int count) { return (idx == 0 || idx == count - 1) ? 0.5 : 1.0; };
    long double Z = 0, S_th = 0, S_th2 = 0, S_ph = 0, S_ph2 = 0, S_phth = 0, S_phth2 = 0;
    for (int i = 0; i < opt.u_points; ++i) {
        const double u = u_lo + i * hu;
        const double phi = std::exp(u);
        const double sd = std::sqrt(prior.R / phi);
        for (int k = 0; k < opt.xi_points; ++k) {
            const double xi = -opt.xi_half_width + k * hx;
            const double theta = prior.a + sd * xi;
            const long double w =
                std::exp(logw[static_cast<std::size_t>(i) * opt.xi_points + k] - max_logw) * edge(i, opt.u_points) *
                edge(k, opt.xi_points);
            Z += w;
            S_th += w * theta;
            S_th2 += w * theta * theta;
            S_ph += w * phi;
            S_ph2 += w * phi * phi;
            S_phth += w * phi * theta;
            S_phth2 += w * phi * theta * theta;
        }
    }
    GridPosterior g;
    g.mean_theta = static_cast<double>(S_th / Z);
    g.var_theta = static_cast<double>(S_th2 / Z) - g.mean_theta * g.mean_theta;
    g.mean_phi = static_cast<double>(S_ph / Z);
    g.var_phi = static_cast<double>(S_ph2 / Z) - g.mean_phi * g.mean_phi;
    const double m = g.mean_theta;
    g.scaled_c = static_cast<double>(S_phth2 / Z - 2.0 * m * S_phth / Z + m * m * S_ph / Z);
    g.log_evidence = max_logw + std::log(static_cast<double>(Z)) + std::log(hu) + std::log(hx);
    return g;
}

ScalarPrior moments_to_normal_gamma(const GridPosterior& g) {
    // E[phi] = 1/s, Var[phi] = 2 / (n s^2), E[phi (theta - m)^2] = C.
    ScalarPrior p;
    p.a = g.mean_theta;
    p.s = 1.0 / g.mean_phi;
    p.n = 2.0 / (g.var_phi * p.s * p.s);
    p.R = g.scaled_c;
    return p;
}

std::vector<GridPosterior> grid_chain(const ScalarPrior& first_prior, const std::vector<ToyStep>& steps,
                                      double delta, double beta, double alpha, const GridOptions& opt) {
    std::vector<GridPosterior> out;
    ScalarPrior prior = first_prior;
    for (std::size_t t = 0; t < steps.size(); ++t) {
        if (t > 0) {
            ScalarPrior post = moments_to_normal_gamma(out.back());
            prior.a = post.a;
            prior.R = post.R / delta;
            prior.n = beta * post.n;
            prior.s = post.s;
        }
        out.push_back(grid_update(prior, steps[t].F, steps[t].y, steps[t].z, alpha, opt));
    }
    return out;
}

}  // namespace oracle
