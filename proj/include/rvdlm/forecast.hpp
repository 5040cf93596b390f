#pragma once

// One-step joint predictive of (y_t, z_t) in compositional form
//     p(y_t, z_t | D_{t-1}) = p(y_t | z_t, D_{t-1}) p(z_t | D_{t-1}),
// with a scaled-F margin for z_t and a z-conditional Student-t for y_t.

#include "rvdlm/distributions.hpp"
#include "rvdlm/dlm_core.hpp"
#include "rvdlm/rng.hpp"
#include "rvdlm/rv_measures.hpp"

namespace rvdlm {

// Everything besides z_t needed to assemble F_t.
struct RegressorInputs {
    ModelClass model = ModelClass::SVDLM;
    double y_prev = 0.0;
    double x_prev = 0.0;
    double rv_floor = kDefaultRvFloor;
};

dist::ScaledFParams predictive_z(const PriorMoments& prior, double alpha);

dist::StudentTParams predictive_y_given_z(const PriorMoments& prior, double alpha, double z,
                                          const RegressorInputs& inputs);

class JointPredictive {
public:
    JointPredictive(PriorMoments prior, double alpha, RegressorInputs inputs);

    const dist::ScaledFParams& z_margin() const { return z_margin_; }
    dist::StudentTParams y_given(double z) const;
    double log_density(double y, double z) const;

private:
    PriorMoments prior_;
    double alpha_;
    RegressorInputs inputs_;
    dist::ScaledFParams z_margin_;
};

struct JointDraw {
    double z = 0.0;
    double y = 0.0;
};

// z from the scaled-F margin (composed as phi then z | phi), then y from the
// conditional Student-t at that z.
JointDraw sample_joint(const PriorMoments& prior, double alpha, const RegressorInputs& inputs, Rng& rng);

// exp(theta x): multiplicative effect of a realized-SD coefficient on the price scale.
double price_scale_effect(double theta_coeff, double x);

// theta_0x x_t + theta_1x x_{t-1}.
double net_rv_contribution(double theta_0x, double x_t, double theta_1x, double x_prev);

}  // namespace rvdlm
