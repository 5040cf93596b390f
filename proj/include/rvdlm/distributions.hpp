#pragma once

// Special functions and the four probability laws the filter needs: gamma,
// beta (sampling only), location-scale Student-t, and scaled-F. Densities
// are exposed in log space only.

#include "rvdlm/rng.hpp"

namespace rvdlm::dist {

struct StudentTParams {
    double dof = 1.0;
    double location = 0.0;
    double scale = 1.0;  // squared scale: (y - location) / sqrt(scale) is standard t
};

// z / scale ~ F(dof_num, dof_den)
struct ScaledFParams {
    double dof_num = 1.0;
    double dof_den = 1.0;
    double scale = 1.0;
};

struct GammaParams {
    double shape = 1.0;
    double rate = 1.0;
};

void validate(const StudentTParams& p);
void validate(const ScaledFParams& p);
void validate(const GammaParams& p);

// ln Gamma(x) for x > 0. Lanczos (Godfrey's g = 671/128, 14-term set) below
// x = 10, Stirling series with terms through x^-9 above.
double log_gamma_fn(double x);

double log_beta_fn(double a, double b);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

double student_t_logpdf(double y, const StudentTParams& p);
double student_t_cdf(double y, const StudentTParams& p);
double student_t_quantile(double u, const StudentTParams& p);

double scaled_f_logpdf(double z, const ScaledFParams& p);
double scaled_f_cdf(double z, const ScaledFParams& p);
double scaled_f_quantile(double u, const ScaledFParams& p);

double gamma_logpdf(double x, const GammaParams& p);
double gamma_cdf(double x, const GammaParams& p);
double gamma_quantile(double u, const GammaParams& p);

double sample_gamma(const GammaParams& p, Rng& rng);
double sample_beta(double a, double b, Rng& rng);
double sample_student_t(const StudentTParams& p, Rng& rng);

// Draw from the scaled-F law by composition: phi ~ Gamma(n/2, n s / 2),
// z | phi ~ Gamma(alpha/2, alpha phi / 2).
double sample_scaled_f(const ScaledFParams& p, Rng& rng);

}  // namespace rvdlm::dist
