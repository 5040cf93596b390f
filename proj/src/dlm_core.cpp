#include "rvdlm/dlm_core.hpp"

#include "rvdlm/distributions.hpp"
#include "rvdlm/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace rvdlm {

namespace {

std::string normalize(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void check_symmetric_shape(const StateMatrix& M, Eigen::Index dim, const char* what) {
    if (M.rows() != dim || M.cols() != dim) {
        std::ostringstream os;
        os << what << " has shape " << M.rows() << "x" << M.cols() << ", expected " << dim << "x" << dim;
        throw DomainError(os.str());
    }
    if (!M.allFinite()) throw NumericalError(std::string(what) + " has non-finite entries");
}

UpdateResult condition_on_price(const StateVector& a, const StateMatrix& R, double n_prior, double s_prior,
                                double y, const StateVector& F) {
    if (F.size() != a.size()) {
        std::ostringstream os;
        os << "regressor dimension " << F.size() << " does not match state dimension " << a.size();
        throw DomainError(os.str());
    }
    if (!std::isfinite(y) || !F.allFinite()) throw DomainError("price update received non-finite data");

    const StateVector RF = R * F;
    const double q_unit = 1.0 + F.dot(RF);
    if (!(q_unit > 0.0) || !std::isfinite(q_unit)) {
        std::ostringstream os;
        os.precision(17);
        os << "one-step variance factor 1 + F'RF = " << q_unit << " is not positive (F'RF = " << F.dot(RF)
           << "); prior scale matrix is not positive semidefinite";
        throw NumericalError(os.str());
    }

    UpdateResult out;
    OneStepStats& st = out.stats;
    st.f = F.dot(a);
    st.q = s_prior * q_unit;
    st.e = y - st.f;
    st.dof = n_prior;
    st.log_score = dist::student_t_logpdf(y, {st.dof, st.f, st.q});

    const StateVector A = RF / q_unit;
    NormalGammaPosterior& post = out.post;
    post.m = a + A * st.e;
    post.C = R - q_unit * A * A.transpose();
    post.C = 0.5 * (post.C + post.C.transpose()).eval();
    post.n = n_prior + 1.0;
    const double r = (n_prior + st.e * st.e / st.q) / post.n;
    post.s = r * s_prior;
    if (!positive_finite(post.s) || !post.m.allFinite() || !post.C.allFinite()) {
        throw NumericalError("price update produced a non-finite or non-positive posterior");
    }
    return out;
}

}  // namespace

std::string_view to_string(ModelClass mc) {
    switch (mc) {
        case ModelClass::SVDLM: return "SV-DLM";
        case ModelClass::RVDLM: return "RV-DLM";
        case ModelClass::RVLDLM: return "RVL-DLM";
    }
    return "?";
}

ModelClass parse_model_class(std::string_view text) {
    const std::string key = normalize(text);
    if (key == "SVDLM") return ModelClass::SVDLM;
    if (key == "RVDLM") return ModelClass::RVDLM;
    if (key == "RVLDLM") return ModelClass::RVLDLM;
    throw ConfigError("unknown model class '" + std::string(text) + "'");
}

int regressor_dim(ModelClass mc) { return mc == ModelClass::RVLDLM ? 4 : 3; }

bool learns_from_rv(ModelClass mc) { return mc != ModelClass::SVDLM; }

void HyperParams::validate(ModelClass mc) const {
    std::ostringstream os;
    if (!(delta > 0.0 && delta <= 1.0)) os << "delta must lie in (0, 1], got " << delta << "; ";
    if (!(beta > 0.0 && beta <= 1.0)) os << "beta must lie in (0, 1], got " << beta << "; ";
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) os << "alpha must be >= 0, got " << alpha << "; ";
    if (learns_from_rv(mc) && !(alpha > 0.0)) os << to_string(mc) << " requires alpha > 0; ";
    if (!os.str().empty()) throw ConfigError("invalid hyperparameters: " + os.str());
}

void validate(const NormalGammaPosterior& post) {
    check_symmetric_shape(post.C, post.m.size(), "posterior scale C");
    if (!post.m.allFinite()) throw NumericalError("posterior mean has non-finite entries");
    if (!positive_finite(post.n) || !positive_finite(post.s)) {
        throw NumericalError("posterior gamma parameters must be positive");
    }
}

void validate(const PriorMoments& prior) {
    check_symmetric_shape(prior.R, prior.a.size(), "prior scale R");
    if (!prior.a.allFinite()) throw NumericalError("prior mean has non-finite entries");
    if (!positive_finite(prior.n_star) || !positive_finite(prior.s_prev)) {
        throw NumericalError("prior gamma parameters must be positive");
    }
}

PriorMoments prior_from_marginal(const StateVector& a, const StateMatrix& R_marginal, double n_star,
                                 double s) {
    PriorMoments p;
    p.a = a;
    p.R = R_marginal / s;
    p.n_star = n_star;
    p.s_prev = s;
    validate(p);
    return p;
}

PriorMoments evolve(const NormalGammaPosterior& post, const HyperParams& hp) {
    PriorMoments prior;
    prior.a = post.m;
    prior.R = post.C / hp.delta;
    prior.n_star = hp.beta * post.n;
    prior.s_prev = post.s;
    return prior;
}

RvUpdatedPrior rv_update(const PriorMoments& prior, double z, double alpha) {
    if (!positive_finite(z)) {
        std::ostringstream os;
        os << "realized variance must be positive in the gamma update (got " << z << "); floor it first";
        throw DomainError(os.str());
    }
    if (!positive_finite(alpha)) throw DomainError("RV shape index alpha must be positive");
    RvUpdatedPrior out;
    out.a = prior.a;
    out.R = prior.R;
    out.n_tilde = prior.n_star + alpha;
    out.r_tilde = (prior.n_star + alpha * z / prior.s_prev) / out.n_tilde;
    out.s_tilde = out.r_tilde * prior.s_prev;
    return out;
}

StateVector build_regressor(ModelClass mc, double y_prev, double x_t, double x_prev) {
    StateVector F(regressor_dim(mc));
    if (mc == ModelClass::RVLDLM) {
        F << 1.0, y_prev, x_t, x_prev;
    } else {
        F << 1.0, y_prev, x_prev;
    }
    return F;
}

UpdateResult price_update(const RvUpdatedPrior& prior, double y, const StateVector& F) {
    return condition_on_price(prior.a, prior.R, prior.n_tilde, prior.s_tilde, y, F);
}

UpdateResult sv_update(const PriorMoments& prior, double y, const StateVector& F) {
    return condition_on_price(prior.a, prior.R, prior.n_star, prior.s_prev, y, F);
}

}  // namespace rvdlm
