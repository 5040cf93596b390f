#include "rvdlm/forecast.hpp"

#include "rvdlm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rvdlm {

dist::ScaledFParams predictive_z(const PriorMoments& prior, double alpha) {
    dist::ScaledFParams p{alpha, prior.n_star, prior.s_prev};
    dist::validate(p);
    return p;
}

dist::StudentTParams predictive_y_given_z(const PriorMoments& prior, double alpha, double z,
                                          const RegressorInputs& inputs) {
    const double zf = std::max(z, inputs.rv_floor);
    const RvUpdatedPrior rv = rv_update(prior, zf, alpha);
    const StateVector F = build_regressor(inputs.model, inputs.y_prev, realized_sd(zf), inputs.x_prev);
    if (F.size() != prior.a.size()) throw DomainError("regressor layout does not match prior dimension");
    const double q_unit = 1.0 + F.dot(prior.R * F);
    if (!(q_unit > 0.0)) throw NumericalError("predictive scale factor 1 + F'RF is not positive");
    return {rv.n_tilde, F.dot(prior.a), rv.s_tilde * q_unit};
}

JointPredictive::JointPredictive(PriorMoments prior, double alpha, RegressorInputs inputs)
    : prior_(std::move(prior)), alpha_(alpha), inputs_(inputs), z_margin_(predictive_z(prior_, alpha)) {}

dist::StudentTParams JointPredictive::y_given(double z) const {
    return predictive_y_given_z(prior_, alpha_, z, inputs_);
}

double JointPredictive::log_density(double y, double z) const {
    return dist::scaled_f_logpdf(z, z_margin_) + dist::student_t_logpdf(y, y_given(z));
}

JointDraw sample_joint(const PriorMoments& prior, double alpha, const RegressorInputs& inputs, Rng& rng) {
    JointDraw d;
    d.z = std::max(dist::sample_scaled_f(predictive_z(prior, alpha), rng), inputs.rv_floor);
    d.y = dist::sample_student_t(predictive_y_given_z(prior, alpha, d.z, inputs), rng);
    return d;
}

double price_scale_effect(double theta_coeff, double x) { return std::exp(theta_coeff * x); }

double net_rv_contribution(double theta_0x, double x_t, double theta_1x, double x_prev) {
    return theta_0x * x_t + theta_1x * x_prev;
}

}  // namespace rvdlm
