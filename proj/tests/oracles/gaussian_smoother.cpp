#include "oracles/gaussian_smoother.hpp"

namespace oracle {

BatchSmoothed batch_smooth(const Eigen::VectorXd& a1, const Eigen::MatrixXd& R1,
                           const std::vector<Eigen::MatrixXd>& W, const std::vector<Eigen::VectorXd>& F,
                           const std::vector<double>& y) {
    const int T = static_cast<int>(y.size());
    const int d = static_cast<int>(a1.size());

    // Cov(theta_s, theta_t) = R1 + sum_{k <= min(s, t)} W_k.
    std::vector<Eigen::MatrixXd> cumulative(T);
    cumulative[0] = R1;
    for (int t = 1; t < T; ++t) cumulative[t] = cumulative[t - 1] + W[t];

    Eigen::MatrixXd Sigma(T * d, T * d);
    for (int s = 0; s < T; ++s) {
        for (int t = 0; t < T; ++t) Sigma.block(s * d, t * d, d, d) = cumulative[std::min(s, t)];
    }
    Eigen::VectorXd mu(T * d);
    for (int t = 0; t < T; ++t) mu.segment(t * d, d) = a1;

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(T, T * d);
    Eigen::VectorXd Y(T);
    for (int t = 0; t < T; ++t) {
        H.block(t, t * d, 1, d) = F[t].transpose();
        Y(t) = y[t];
    }

    const Eigen::MatrixXd S = H * Sigma * H.transpose() + Eigen::MatrixXd::Identity(T, T);
    const Eigen::MatrixXd K = Sigma * H.transpose() * S.ldlt().solve(Eigen::MatrixXd::Identity(T, T));
    const Eigen::VectorXd post_mean = mu + K * (Y - H * mu);
    const Eigen::MatrixXd post_cov = Sigma - K * H * Sigma;

    BatchSmoothed out;
    for (int t = 0; t < T; ++t) {
        out.mean.push_back(post_mean.segment(t * d, d));
        out.cov.push_back(post_cov.block(t * d, t * d, d, d));
    }
    return out;
}

}  // namespace oracle
