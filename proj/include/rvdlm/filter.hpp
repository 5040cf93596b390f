#pragma once

// Forward filtering of one series under one model specification.

#include "rvdlm/dlm_core.hpp"
#include "rvdlm/series.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rvdlm {

struct ModelSpec {
    std::string name;
    ModelClass model = ModelClass::SVDLM;
    HyperParams hp;
};

// Initial prior for the first modeled day, stated on the marginal scale:
// theta_1 | D_0 ~ T_{n_star}(a, R).
struct InitialPrior {
    StateVector a;
    StateMatrix R;
    double n_star = 1.0;
    double s = 1.0;
};

// a_1 = (0, 1, 0[, 0])', R_1 = diag(0.10, 0.01, 0.05[, 0.05]) / 0.999, n*_1 = beta.
InitialPrior default_initial_prior(ModelClass mc, double beta, double s1);

struct FilterStep {
    Date date{};
    StateVector F;
    PriorMoments prior;
    std::optional<RvUpdatedPrior> rv;
    NormalGammaPosterior post;
    OneStepStats stats;
    // log p(z_t | D_{t-1}) under the scaled-F predictive; RV variants only.
    std::optional<double> z_log_score;
};

struct FilterTrajectory {
    ModelSpec spec;
    std::vector<FilterStep> steps;
};

class SequentialFilter {
public:
    SequentialFilter(ModelSpec spec, const InitialPrior& init);

    // Evolves (except on the first call), conditions on z_t for RV variants,
    // then on y_t. Returns the completed step record.
    FilterStep step(const SeriesRow& row);

    const ModelSpec& spec() const { return spec_; }
    // Prior the next call to step() will use.
    PriorMoments next_prior() const;

private:
    ModelSpec spec_;
    PriorMoments first_prior_;
    std::optional<NormalGammaPosterior> last_;
};

FilterTrajectory run_filter(std::span<const SeriesRow> rows, const ModelSpec& spec, const InitialPrior& init);

}  // namespace rvdlm
