#pragma once

// Conjugate normal-gamma recursions shared by the SV-DLM, RV-DLM and RVL-DLM.
//
// State convention (scale-free): given the precision phi_t,
//     theta_t | phi_t, D_t ~ N(m_t, C_t / phi_t),   phi_t | D_t ~ G(n_t/2, n_t s_t/2),
// so the marginal is theta_t | D_t ~ T_{n_t}(m_t, s_t C_t). Priors (a_t, R_t) use
// the same convention. The evolution is the identity random walk with a
// single discount factor, R_t = C_{t-1} / delta, and beta-gamma volatility
// discounting, n*_t = beta n_{t-1}.
//
// One time step always runs in the order evolve -> condition on z_t (RV
// variants only) -> condition on y_t.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>

namespace rvdlm {

inline constexpr int kMaxStateDim = 4;

using StateVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxStateDim, kMaxStateDim>;

enum class ModelClass { SVDLM, RVDLM, RVLDLM };

std::string_view to_string(ModelClass mc);
// Accepts "SVDLM"/"SV-DLM" etc., case-insensitive; throws ConfigError otherwise.
ModelClass parse_model_class(std::string_view text);

// SVDLM/RVDLM: F = (1, y_{t-1}, x_{t-1}); RVLDLM: F = (1, y_{t-1}, x_t, x_{t-1}).
int regressor_dim(ModelClass mc);
bool learns_from_rv(ModelClass mc);

struct HyperParams {
    double delta = 1.0;  // state discount
    double beta = 1.0;   // volatility discount
    double alpha = 0.0;  // RV shape index; must be > 0 for RV variants

    void validate(ModelClass mc) const;
};

struct NormalGammaPosterior {
    StateVector m;
    StateMatrix C;
    double n = 1.0;
    double s = 1.0;
};

struct PriorMoments {
    StateVector a;
    StateMatrix R;
    double n_star = 1.0;
    double s_prev = 1.0;
};

// Prior after conditioning the precision on z_t; (a, R) are carried through unchanged.
struct RvUpdatedPrior {
    StateVector a;
    StateMatrix R;
    double n_tilde = 1.0;
    double s_tilde = 1.0;
    double r_tilde = 1.0;
};

// One-step forecast summary for y_t: y_t ~ T_dof(f, q) before observing y_t.
struct OneStepStats {
    double f = 0.0;
    double q = 1.0;
    double e = 0.0;
    double dof = 1.0;
    double log_score = 0.0;
};

struct UpdateResult {
    NormalGammaPosterior post;
    OneStepStats stats;
};

void validate(const NormalGammaPosterior& post);
void validate(const PriorMoments& prior);

// Builds the scale-free prior from a prior stated on the marginal scale,
// theta | D ~ T_{n_star}(a, R_marginal) with precision scale estimate s.
PriorMoments prior_from_marginal(const StateVector& a, const StateMatrix& R_marginal, double n_star,
                                 double s);

PriorMoments evolve(const NormalGammaPosterior& post, const HyperParams& hp);

// n~ = n* + alpha, r~ = (n* + alpha z / s_prev) / n~, s~ = r~ s_prev.
RvUpdatedPrior rv_update(const PriorMoments& prior, double z, double alpha);

StateVector build_regressor(ModelClass mc, double y_prev, double x_t, double x_prev);

// Conditions on y_t after the RV update. With q* = 1 + F'RF:
//   f = F'a, q~ = s~ q*, A = R F / q*, m = a + A e, C = R - q* A A',
//   n = n~ + 1, s = s~ (n~ + e^2 / q~) / n.
UpdateResult price_update(const RvUpdatedPrior& prior, double y, const StateVector& F);

// SV-DLM path: the same update with (n~, s~) replaced by (n*, s_{t-1}).
UpdateResult sv_update(const PriorMoments& prior, double y, const StateVector& F);

// Fixed point of n -> beta n + alpha + 1.
inline double limiting_dof(double beta, double alpha) { return (1.0 + alpha) / (1.0 - beta); }

}  // namespace rvdlm
