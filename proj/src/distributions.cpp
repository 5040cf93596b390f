#include "rvdlm/distributions.hpp"

#include "rvdlm/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace rvdlm::dist {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

[[noreturn]] void domain_fail(const std::string& what, double value) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (got " << value << ")";
    throw DomainError(os.str());
}

void require_positive(const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) domain_fail(std::string(name) + " must be positive and finite", v);
}

void require_unit_open(double u) {
    if (!(u > 0.0 && u < 1.0)) domain_fail("probability must lie in (0, 1)", u);
}

// Series representation of P(a, x); valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma_fn(a));
}

// Continued fraction for Q(a, x) (modified Lentz); valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    return std::exp(-x + a * std::log(x) - log_gamma_fn(a)) * h;
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 100000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    return h;
}

// Solves cdf(x) = u on (lo, +inf) for a continuous increasing cdf with
// density pdf. Newton steps are accepted only while they stay inside the
// current bracket; otherwise the step falls back to bisection.
template <class Cdf, class Pdf>
double invert_cdf(double u, double guess, double lo, Cdf cdf, Pdf pdf) {
    double hi = std::max(guess, lo + 1.0);
    while (cdf(hi) < u) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NumericalError("quantile bracket diverged");
    }
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    for (int it = 0; it < 500; ++it) {
        const double g = cdf(x) - u;
        if (g == 0.0) return x;
        if (g < 0.0) lo = x; else hi = x;
        const double dens = pdf(x);
        double next = (dens > 0.0 && std::isfinite(dens)) ? x - g / dens : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * kEps * std::abs(x) || hi - lo <= 4.0 * kEps * std::abs(hi)) {
            return next;
        }
        x = next;
    }
    return x;
}

}  // namespace

void validate(const StudentTParams& p) {
    require_positive("Student-t dof", p.dof);
    require_positive("Student-t scale", p.scale);
    if (!std::isfinite(p.location)) domain_fail("Student-t location must be finite", p.location);
}

void validate(const ScaledFParams& p) {
    require_positive("scaled-F numerator dof", p.dof_num);
    require_positive("scaled-F denominator dof", p.dof_den);
    require_positive("scaled-F scale", p.scale);
}

void validate(const GammaParams& p) {
    require_positive("gamma shape", p.shape);
    require_positive("gamma rate", p.rate);
}

double log_gamma_fn(double x) {
    require_positive("log_gamma argument", x);
    if (x >= 10.0) {
        const double inv = 1.0 / x;
        const double inv2 = inv * inv;
        const double series =
            inv * (1.0 / 12.0 -
                   inv2 * (1.0 / 360.0 -
                           inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
        return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
    }
    static constexpr std::array<double, 14> cof = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double log_beta_fn(double a, double b) {
    return log_gamma_fn(a) + log_gamma_fn(b) - log_gamma_fn(a + b);
}

double regularized_gamma_p(double a, double x) {
    require_positive("incomplete gamma shape", a);
    if (x < 0.0 || std::isnan(x)) domain_fail("incomplete gamma argument must be >= 0", x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_fraction(a, x);
}

double regularized_beta(double a, double b, double x) {
    require_positive("incomplete beta a", a);
    require_positive("incomplete beta b", b);
    if (!(x >= 0.0 && x <= 1.0)) domain_fail("incomplete beta argument must lie in [0, 1]", x);
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta_fn(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
    return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_logpdf(double y, const StudentTParams& p) {
    validate(p);
    if (!std::isfinite(y)) domain_fail("Student-t argument must be finite", y);
    const double nu = p.dof;
    const double d = y - p.location;
    return log_gamma_fn(0.5 * (nu + 1.0)) - log_gamma_fn(0.5 * nu) -
           0.5 * std::log(nu * std::numbers::pi * p.scale) -
           0.5 * (nu + 1.0) * std::log1p(d * d / (nu * p.scale));
}

double student_t_cdf(double y, const StudentTParams& p) {
    validate(p);
    const double t = (y - p.location) / std::sqrt(p.scale);
    const double nu = p.dof;
    const double tail = 0.5 * regularized_beta(0.5 * nu, 0.5, nu / (nu + t * t));
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double u, const StudentTParams& p) {
    validate(p);
    require_unit_open(u);
    if (u == 0.5) return p.location;
    // Solve on the standardized upper half and reflect.
    const StudentTParams standard{p.dof, 0.0, 1.0};
    const double upper = u > 0.5 ? u : 1.0 - u;
    const double t = invert_cdf(
        upper, 1.0, 0.0, [&](double x) { return student_t_cdf(x, standard); },
        [&](double x) { return std::exp(student_t_logpdf(x, standard)); });
    const double signed_t = u > 0.5 ? t : -t;
    return p.location + signed_t * std::sqrt(p.scale);
}

double scaled_f_logpdf(double z, const ScaledFParams& p) {
    validate(p);
    if (!(z > 0.0) || !std::isfinite(z)) domain_fail("scaled-F argument must be positive", z);
    const double d1 = p.dof_num;
    const double d2 = p.dof_den;
    const double x = z / p.scale;
    return 0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1.0) * std::log(x) -
           0.5 * (d1 + d2) * std::log1p(d1 * x / d2) - log_beta_fn(0.5 * d1, 0.5 * d2) -
           std::log(p.scale);
}

double scaled_f_cdf(double z, const ScaledFParams& p) {
    validate(p);
    if (z <= 0.0) return 0.0;
    const double x = z / p.scale;
    const double w = p.dof_num * x / (p.dof_num * x + p.dof_den);
    return regularized_beta(0.5 * p.dof_num, 0.5 * p.dof_den, w);
}

double scaled_f_quantile(double u, const ScaledFParams& p) {
    validate(p);
    require_unit_open(u);
    return invert_cdf(
        u, p.scale, 0.0, [&](double z) { return scaled_f_cdf(z, p); },
        [&](double z) { return std::exp(scaled_f_logpdf(z, p)); });
}

double gamma_logpdf(double x, const GammaParams& p) {
    validate(p);
    if (!(x > 0.0) || !std::isfinite(x)) domain_fail("gamma argument must be positive", x);
    return p.shape * std::log(p.rate) - log_gamma_fn(p.shape) + (p.shape - 1.0) * std::log(x) -
           p.rate * x;
}

double gamma_cdf(double x, const GammaParams& p) {
    validate(p);
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(p.shape, p.rate * x);
}

double gamma_quantile(double u, const GammaParams& p) {
    validate(p);
    require_unit_open(u);
    const double a = p.shape;
    // Start from the mean; for small shapes use the leading term of the
    // series P(a, x) ~ x^a / Gamma(a + 1).
    double guess = a >= 1.0 ? a : std::pow(u * std::exp(log_gamma_fn(a + 1.0)), 1.0 / a);
    if (!(guess > 0.0) || !std::isfinite(guess)) guess = a;
    const GammaParams unit{a, 1.0};
    const double y = invert_cdf(
        u, guess, 0.0, [&](double x) { return regularized_gamma_p(a, x); },
        [&](double x) { return x > 0.0 ? std::exp(gamma_logpdf(x, unit)) : 0.0; });
    return y / p.rate;
}

double sample_gamma(const GammaParams& p, Rng& rng) {
    validate(p);
    double shape = p.shape;
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(rng.uniform(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return boost * d * v / p.rate;
        }
    }
}

double sample_beta(double a, double b, Rng& rng) {
    const double x = sample_gamma({a, 1.0}, rng);
    const double y = sample_gamma({b, 1.0}, rng);
    return x / (x + y);
}

double sample_student_t(const StudentTParams& p, Rng& rng) {
    validate(p);
    const double chi2 = sample_gamma({0.5 * p.dof, 0.5}, rng);
    return p.location + rng.normal() * std::sqrt(p.scale * p.dof / chi2);
}

double sample_scaled_f(const ScaledFParams& p, Rng& rng) {
    validate(p);
    const double n = p.dof_den;
    const double phi = sample_gamma({0.5 * n, 0.5 * n * p.scale}, rng);
    return sample_gamma({0.5 * p.dof_num, 0.5 * p.dof_num * phi}, rng);
}

}  // namespace rvdlm::dist
