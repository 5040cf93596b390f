#include "rvdlm/smoothing.hpp"

#include "rvdlm/distributions.hpp"
#include "rvdlm/errors.hpp"

#include <cmath>
#include <sstream>

namespace rvdlm {

namespace {

constexpr double kJitter = 1e-12;

// B = C R^{-1} via a Cholesky solve of R B' = C (both symmetric).
StateMatrix gain(const StateMatrix& C, const StateMatrix& R, std::size_t t) {
    Eigen::LLT<StateMatrix> llt(R);
    if (llt.info() != Eigen::Success) {
        StateMatrix jittered = R;
        jittered.diagonal().array() += kJitter;
        llt.compute(jittered);
        if (llt.info() != Eigen::Success) {
            std::ostringstream os;
            os << "prior scale R at step " << t + 1 << " is not positive definite even after jitter "
               << kJitter;
            throw NumericalError(os.str());
        }
    }
    return llt.solve(C).transpose();
}

// Symmetric square root with negative eigenvalues (rounding) clamped to zero.
StateMatrix psd_root(const StateMatrix& M) {
    const StateMatrix sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<StateMatrix> es(sym);
    const StateVector root_vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root_vals.asDiagonal();
}

void require_nonempty(const FilterTrajectory& traj) {
    if (traj.steps.empty()) throw UsageError("smoothing requires a non-empty filter trajectory");
}

}  // namespace

SmoothedEstimates smooth(const FilterTrajectory& traj, const HyperParams& hp) {
    require_nonempty(traj);
    const std::size_t T = traj.steps.size();
    SmoothedEstimates out(T);
    const NormalGammaPosterior& last = traj.steps.back().post;
    out[T - 1] = {last.m, last.C, last.s, last.n};
    const double beta = hp.beta;
    for (std::size_t k = T - 1; k-- > 0;) {
        const NormalGammaPosterior& post = traj.steps[k].post;
        const PriorMoments& next = traj.steps[k + 1].prior;
        const SmoothedStep& ahead = out[k + 1];
        const StateMatrix B = gain(post.C, next.R, k);
        SmoothedStep& cur = out[k];
        cur.m = post.m + B * (ahead.m - next.a);
        cur.C = post.C - B * (next.R - ahead.C) * B.transpose();
        cur.C = 0.5 * (cur.C + cur.C.transpose()).eval();
        cur.s = 1.0 / ((1.0 - beta) / post.s + beta / ahead.s);
        cur.n = (1.0 - beta) * post.n + beta * ahead.n;
    }
    return out;
}

BackwardSampler::BackwardSampler(const FilterTrajectory& traj, const HyperParams& hp) : beta_(hp.beta) {
    require_nonempty(traj);
    const std::size_t T = traj.steps.size();
    steps_.resize(T);
    for (std::size_t k = 0; k < T; ++k) {
        const NormalGammaPosterior& post = traj.steps[k].post;
        Backward& b = steps_[k];
        b.m = post.m;
        b.n = post.n;
        b.s = post.s;
        if (k + 1 < T) {
            const PriorMoments& next = traj.steps[k + 1].prior;
            b.a_next = next.a;
            b.B = gain(post.C, next.R, k);
            b.root = psd_root(post.C - b.B * next.R * b.B.transpose());
        } else {
            b.root = psd_root(post.C);
        }
    }
}

SampledPath BackwardSampler::draw(Rng& rng) const {
    const std::size_t T = steps_.size();
    SampledPath path;
    path.theta.resize(T);
    path.phi.resize(T);
    const Eigen::Index d = steps_.front().m.size();
    StateVector noise(d);

    const Backward& end = steps_.back();
    path.phi[T - 1] = dist::sample_gamma({0.5 * end.n, 0.5 * end.n * end.s}, rng);
    for (Eigen::Index i = 0; i < d; ++i) noise(i) = rng.normal();
    path.theta[T - 1] = end.m + end.root * noise / std::sqrt(path.phi[T - 1]);

    for (std::size_t k = T - 1; k-- > 0;) {
        const Backward& b = steps_[k];
        double phi = beta_ * path.phi[k + 1];
        if (beta_ < 1.0) phi += dist::sample_gamma({0.5 * (1.0 - beta_) * b.n, 0.5 * b.n * b.s}, rng);
        path.phi[k] = phi;
        for (Eigen::Index i = 0; i < d; ++i) noise(i) = rng.normal();
        path.theta[k] = b.m + b.B * (path.theta[k + 1] - b.a_next) + b.root * noise / std::sqrt(phi);
    }
    return path;
}

SampledPath backward_sample(const FilterTrajectory& traj, const HyperParams& hp, Rng& rng) {
    return BackwardSampler(traj, hp).draw(rng);
}

}  // namespace rvdlm
