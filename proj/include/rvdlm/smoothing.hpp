#pragma once

// Fixed-interval retrospective analysis over a completed filter run, using
// the discount-DLM backward recursions specialised to G = I.

#include "rvdlm/dlm_core.hpp"
#include "rvdlm/filter.hpp"
#include "rvdlm/rng.hpp"

#include <vector>

namespace rvdlm {

// theta_t | phi_t, D_T ~ N(m, C / phi_t) and E[phi_t | D_T] = 1 / s.
struct SmoothedStep {
    StateVector m;
    StateMatrix C;
    double s = 1.0;
    double n = 1.0;

    double phi_mean() const { return 1.0 / s; }
};

using SmoothedEstimates = std::vector<SmoothedStep>;

// Backward pass:
//   B_t = C_t R_{t+1}^{-1},  m*_t = m_t + B_t (m*_{t+1} - a_{t+1}),
//   C*_t = C_t - B_t (R_{t+1} - C*_{t+1}) B_t',
//   1/s*_t = (1 - beta)/s_t + beta/s*_{t+1},  n*_t = (1 - beta) n_t + beta n*_{t+1}.
SmoothedEstimates smooth(const FilterTrajectory& traj, const HyperParams& hp);

struct SampledPath {
    std::vector<StateVector> theta;
    std::vector<double> phi;
};

// Draws joint retrospective paths of (theta_t, phi_t). Factorisations of the
// backward conditionals are computed once at construction.
class BackwardSampler {
public:
    BackwardSampler(const FilterTrajectory& traj, const HyperParams& hp);

    SampledPath draw(Rng& rng) const;
    std::size_t length() const { return steps_.size(); }

private:
    struct Backward {
        StateVector m;   // filtered mean m_t
        StateVector a_next;
        StateMatrix B;
        StateMatrix root;  // square root of C_t - B_t R_{t+1} B_t' (of C_T at the end)
        double n = 1.0;
        double s = 1.0;
    };
    std::vector<Backward> steps_;
    double beta_;
};

SampledPath backward_sample(const FilterTrajectory& traj, const HyperParams& hp, Rng& rng);

}  // namespace rvdlm
