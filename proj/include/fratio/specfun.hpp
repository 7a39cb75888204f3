#pragma once

// Scalar special functions shared by every other header: log-gamma on the
// complex plane, signed real log-gamma, polygamma, beta functions, the
// regularized incomplete beta, Gauss 2F1, normal CDF/quantile helpers and
// gamma-variate sampling. Everything is pure and re-entrant.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>

#include "error.hpp"
#include "rng.hpp"

namespace fratio::specfun {

inline constexpr double log_sqrt_2pi = 0.91893853320467274178;
inline constexpr double pi = 3.14159265358979323846;

namespace detail {

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficient set).
// Relative error on the real axis is a few 1e-15 for z up to 1e3.
inline constexpr double lanczos_g = 4.7421875;
inline constexpr double lanczos_c[15] = {
    0.99999999999999709182,
    57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,     -0.49191381609762019978,
    0.33994649984811888699e-4,  0.46523628927048575665e-4,
    -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3,
    -0.16431810653676389022e-3, 0.84418223983852743293e-4,
    -0.26190838401581408670e-4, 0.36899182659531622704e-5};

inline bool is_nonpositive_integer(double x, double tol = 0.0) {
    return x <= 0.5 && std::abs(x - std::round(x)) <= tol && std::round(x) <= 0.0;
}

inline std::complex<double> lanczos_log_gamma_right(std::complex<double> z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    std::complex<double> sum = lanczos_c[0];
    for (int k = 1; k < 15; ++k) sum += lanczos_c[k] / (z + static_cast<double>(k));
    const std::complex<double> t = z + (lanczos_g + 0.5);
    return log_sqrt_2pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// log(sin(pi z)) on the branch that keeps log_gamma continuous off the
// negative real axis; requires Im z >= 0.
inline std::complex<double> log_sin_pi_upper(std::complex<double> z) {
    const std::complex<double> iz(-z.imag(), z.real()); // i*z
    const std::complex<double> e = std::exp(2.0 * pi * iz);
    // sin(pi z) = exp(-i pi z) (1 - exp(2 i pi z)) * (i / 2)
    return -pi * iz + std::log(1.0 - e) +
           std::complex<double>(-std::log(2.0), pi / 2.0);
}

} // namespace detail

// Principal-branch complex log-gamma (real on the positive real axis,
// continuous off the negative real axis).
inline std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && detail::is_nonpositive_integer(z.real()))
        throw pole_error("log_gamma: pole at non-positive integer");
    if (z.real() >= 0.5) {
        auto r = detail::lanczos_log_gamma_right(z);
        if (!std::isfinite(r.real()))
            throw overflow_error("log_gamma: |Re log Gamma| not representable");
        return r;
    }
    if (z.imag() >= 0.0) {
        auto r = std::log(pi) - detail::log_sin_pi_upper(z) -
                 detail::lanczos_log_gamma_right(1.0 - z);
        if (!std::isfinite(r.real()))
            throw overflow_error("log_gamma: |Re log Gamma| not representable");
        return r;
    }
    return std::conj(log_gamma(std::conj(z)));
}

// log|Gamma(x)| for positive real x.
inline double lgamma_pos(double x) {
    if (x <= 0.0) throw domain_error("lgamma_pos: argument must be positive");
#if defined(__GLIBC__) || defined(__APPLE__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// (log|Gamma(x)|, sign) for real x off the pole set. Used by residue sums,
// where arguments land on the negative axis between poles.
inline std::pair<double, int> log_gamma_signed(double x) {
    if (x > 0.0) return {lgamma_pos(x), 1};
    if (detail::is_nonpositive_integer(x, 0.0))
        throw pole_error("log_gamma_signed: pole at non-positive integer");
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double n = std::floor(x);
    const double r = x - n; // (0, 1)
    const double log_abs = std::log(pi) - std::log(std::sin(pi * r)) - lgamma_pos(1.0 - x);
    const int sign = (static_cast<long long>(n) % 2 == 0) ? 1 : -1;
    return {log_abs, sign};
}

// Digamma for positive arguments: recurrence up to x >= 12 then the
// asymptotic series with Bernoulli numbers.
inline double digamma(double x) {
    if (x <= 0.0) throw domain_error("digamma: argument must be positive");
    double acc = 0.0;
    while (x < 12.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    // B2/2, B4/4, ... B14/14 over x^{2n}
    double series = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 *
                    (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

// Polygamma psi^(n) for n >= 1, positive arguments.
inline double polygamma(int order, double x) {
    if (order == 0) return digamma(x);
    if (order < 0 || order > 8) throw domain_error("polygamma: order out of range [0,8]");
    if (x <= 0.0) throw domain_error("polygamma: argument must be positive");
    const int n = order;
    double fact_n = 1.0;
    for (int i = 2; i <= n; ++i) fact_n *= i;
    // shift x upward: psi^(n)(x) = psi^(n)(x+1) + (-1)^{n+1} n! x^{-n-1}
    double acc = 0.0;
    const double shift_sign = (n % 2 == 0) ? -1.0 : 1.0;
    while (x < 14.0) {
        acc += shift_sign * fact_n * std::pow(x, -(n + 1));
        x += 1.0;
    }
    // asymptotic: (-1)^{n-1}[ (n-1)!/x^n + n!/(2 x^{n+1})
    //                         + sum_j B_{2j} (2j+n-1)!/( (2j)! x^{2j+n}) ]
    static constexpr double b2k[7] = {1.0 / 6,  -1.0 / 30,   1.0 / 42, -1.0 / 30,
                                      5.0 / 66, -691.0 / 2730, 7.0 / 6};
    const double fact_nm1 = fact_n / n;
    double sum = fact_nm1 * std::pow(x, -n) + 0.5 * fact_n * std::pow(x, -(n + 1));
    // (2j + n - 1)! / (2j)!  =  product_{i=2j+1}^{2j+n-1} i
    for (int j = 1; j <= 7; ++j) {
        double num = 1.0;
        for (int i = 2 * j + 1; i <= 2 * j + n - 1; ++i) num *= i;
        sum += b2k[j - 1] * num * std::pow(x, -(2 * j + n));
    }
    const double lead_sign = (n % 2 == 1) ? 1.0 : -1.0;
    return lead_sign * sum + acc;
}

inline double log_beta(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw domain_error("log_beta: arguments must be positive");
    return lgamma_pos(a) + lgamma_pos(b) - lgamma_pos(a + b);
}

namespace detail {

// Continued fraction for the incomplete beta (Lentz's method).
inline double inc_beta_cf(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr int max_iter = 500;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) return h;
    }
    throw convergence_error("reg_inc_beta: continued fraction did not converge");
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double x, double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw domain_error("reg_inc_beta: a, b must be positive");
    if (x < 0.0 || x > 1.0) throw domain_error("reg_inc_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(log_front) * detail::inc_beta_cf(x, a, b) / a;
    return 1.0 - std::exp(log_front) * detail::inc_beta_cf(1.0 - x, b, a) / b;
}

namespace detail {

inline double hyp2f1_series(double a, double b, double c, double x) {
    // direct power series; callers guarantee |x| < 1
    double term = 1.0, sum = 1.0;
    constexpr int max_iter = 200000;
    int small_count = 0;
    for (int k = 0; k < max_iter; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if (std::abs(term) <= 1e-14 * (std::abs(sum) + 1e-300)) {
            if (++small_count >= 2) return sum;
        } else {
            small_count = 0;
        }
        if (!std::isfinite(sum)) break;
    }
    throw convergence_error("gauss_2f1: series did not converge");
}

} // namespace detail

// Gauss hypergeometric 2F1(a, b; c; x) for real parameters and x < 1.
// Direct series for |x| <= 0.5, Pfaff transform for x < 0 and the Euler
// transform for 0.5 < x < 1.
inline double gauss_2f1(double a, double b, double c, double x) {
    if (detail::is_nonpositive_integer(c))
        throw domain_error("gauss_2f1: c must not be a non-positive integer");
    if (x >= 1.0) throw domain_error("gauss_2f1: argument must satisfy x < 1");
    if (x == 0.0) return 1.0;
    if (x < 0.0) {
        // Pfaff: (1-x)^{-a} 2F1(a, c-b; c; x/(x-1)); pick the variant whose
        // transformed parameter is smaller in magnitude.
        const double y = x / (x - 1.0); // in (0, 1)
        if (std::abs(c - b) <= std::abs(c - a))
            return std::pow(1.0 - x, -a) * detail::hyp2f1_series(a, c - b, c, y);
        return std::pow(1.0 - x, -b) * detail::hyp2f1_series(b, c - a, c, y);
    }
    if (x <= 0.5) return detail::hyp2f1_series(a, b, c, x);
    // Euler: (1-x)^{c-a-b} 2F1(c-a, c-b; c; x)
    return std::pow(1.0 - x, c - a - b) * detail::hyp2f1_series(c - a, c - b, c, x);
}

// Standard normal CDF.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Standard normal quantile (Acklam's rational approximation polished by one
// Halley step; good to ~1e-15 over (0, 1)).
inline double norm_ppf(double p) {
    if (p <= 0.0 || p >= 1.0) throw domain_error("norm_ppf: p must lie in (0, 1)");
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    double x;
    if (p < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > 1.0 - 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    // one Halley step against erfc
    const double e = norm_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

// One gamma draw, shape/scale parameterization (mean = shape * scale), by
// Marsaglia-Tsang squeeze rejection with the sub-unit shape boost.
inline double sample_gamma(double shape, double scale, RandomStream& rng) {
    if (shape <= 0.0 || scale <= 0.0)
        throw domain_error("sample_gamma: shape and scale must be positive");
    if (shape < 1.0) {
        const double u = rng.uniform_pos();
        return sample_gamma(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = rng.gauss();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_pos();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2) return d * v * scale;
        if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

} // namespace fratio::specfun
