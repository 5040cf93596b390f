#include "rvdlm/filter.hpp"

#include "rvdlm/distributions.hpp"
#include "rvdlm/errors.hpp"

#include <utility>

namespace rvdlm {

InitialPrior default_initial_prior(ModelClass mc, double beta, double s1) {
    const int d = regressor_dim(mc);
    InitialPrior p;
    p.a = StateVector::Zero(d);
    p.a(1) = 1.0;
    StateVector diag(d);
    if (d == 4) {
        diag << 0.10, 0.01, 0.05, 0.05;
    } else {
        diag << 0.10, 0.01, 0.05;
    }
    p.R = (diag / 0.999).asDiagonal();
    p.n_star = beta;
    p.s = s1;
    return p;
}

SequentialFilter::SequentialFilter(ModelSpec spec, const InitialPrior& init) : spec_(std::move(spec)) {
    spec_.hp.validate(spec_.model);
    if (init.a.size() != regressor_dim(spec_.model)) {
        throw ConfigError("initial prior dimension does not match the regressor layout of " +
                          std::string(to_string(spec_.model)));
    }
    first_prior_ = prior_from_marginal(init.a, init.R, init.n_star, init.s);
}

PriorMoments SequentialFilter::next_prior() const {
    return last_ ? evolve(*last_, spec_.hp) : first_prior_;
}

FilterStep SequentialFilter::step(const SeriesRow& row) {
    FilterStep st;
    st.date = row.date;
    st.prior = next_prior();
    st.F = build_regressor(spec_.model, row.y_prev, row.x, row.x_prev);
    UpdateResult res;
    if (learns_from_rv(spec_.model)) {
        const double alpha = spec_.hp.alpha;
        st.z_log_score = dist::scaled_f_logpdf(row.z, {alpha, st.prior.n_star, st.prior.s_prev});
        st.rv = rv_update(st.prior, row.z, alpha);
        res = price_update(*st.rv, row.y, st.F);
    } else {
        res = sv_update(st.prior, row.y, st.F);
    }
    st.post = std::move(res.post);
    st.stats = res.stats;
    last_ = st.post;
    return st;
}

FilterTrajectory run_filter(std::span<const SeriesRow> rows, const ModelSpec& spec, const InitialPrior& init) {
    SequentialFilter filter(spec, init);
    FilterTrajectory traj;
    traj.spec = spec;
    traj.steps.reserve(rows.size());
    for (const SeriesRow& row : rows) traj.steps.push_back(filter.step(row));
    return traj;
}

}  // namespace rvdlm
