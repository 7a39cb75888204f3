#pragma once

// The single squared Fisher-Snedecor F variate in the SNR domain: density,
// distribution, moments and sampling via the gamma-ratio construction
// X1/X2 with X1 ~ Gamma(m, gamma_bar/m), X2 ~ Gamma(m_s, 1/(m_s-1)).
// All internal math is linear-scale; dB conversion happens only in from_db.

#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "rng.hpp"
#include "specfun.hpp"

namespace fratio {

struct FisherFParams {
    double gamma_bar = 1.0; // mean SNR, linear scale
    double m = 1.0;         // fading severity, > 1/2
    double m_s = 2.0;       // shadowing severity, > 1
};

namespace fisher_f {

inline void validate(const FisherFParams& p) {
    if (!(p.m > 0.5)) throw domain_error("FisherFParams: m must exceed 1/2");
    if (!(p.m_s > 1.0)) throw domain_error("FisherFParams: m_s must exceed 1");
    if (!(p.gamma_bar > 0.0)) throw domain_error("FisherFParams: gamma_bar must be positive");
}

inline FisherFParams from_db(double gamma_bar_db, double m, double m_s) {
    FisherFParams p{std::pow(10.0, gamma_bar_db / 10.0), m, m_s};
    validate(p);
    return p;
}

inline double pdf(const FisherFParams& p, double gamma) {
    validate(p);
    if (gamma < 0.0) throw domain_error("fisher_f::pdf: gamma must be nonnegative");
    if (gamma == 0.0) {
        if (p.m > 1.0) return 0.0;
        if (p.m == 1.0) {
            const double c = (p.m_s - 1.0) * p.gamma_bar;
            return p.m_s / c; // m_s (m_s-1)^{m_s} gbar^{m_s} / (B(1,m_s) c^{1+m_s})
        }
        return std::numeric_limits<double>::infinity();
    }
    const double log_val = p.m * std::log(p.m) + p.m_s * std::log(p.m_s - 1.0) +
                           p.m_s * std::log(p.gamma_bar) + (p.m - 1.0) * std::log(gamma) -
                           specfun::log_beta(p.m, p.m_s) -
                           (p.m + p.m_s) * std::log(p.m * gamma + (p.m_s - 1.0) * p.gamma_bar);
    return std::exp(log_val);
}

// Closed form by integrating the density: the regularized incomplete beta at
// x = m gamma / (m gamma + (m_s - 1) gamma_bar). Serves as the independent
// oracle for the Mellin engine's one-factor CDF kernel.
inline double cdf(const FisherFParams& p, double gamma) {
    validate(p);
    if (gamma < 0.0) throw domain_error("fisher_f::cdf: gamma must be nonnegative");
    if (gamma == 0.0) return 0.0;
    const double x = p.m * gamma / (p.m * gamma + (p.m_s - 1.0) * p.gamma_bar);
    return specfun::reg_inc_beta(x, p.m, p.m_s);
}

// n-th moment; diverges once n reaches m_s.
inline double moment(const FisherFParams& p, int n) {
    validate(p);
    if (n < 0) throw domain_error("fisher_f::moment: order must be nonnegative");
    if (n == 0) return 1.0;
    if (!(static_cast<double>(n) < p.m_s))
        throw domain_error("fisher_f::moment: divergent moment, n must be below m_s");
    const double log_val = n * std::log((p.m_s - 1.0) * p.gamma_bar / p.m) +
                           specfun::log_beta(p.m + n, p.m_s - n) -
                           specfun::log_beta(p.m, p.m_s);
    return std::exp(log_val);
}

inline double sample(const FisherFParams& p, RandomStream& rng) {
    const double x1 = specfun::sample_gamma(p.m, p.gamma_bar / p.m, rng);
    const double x2 = specfun::sample_gamma(p.m_s, 1.0 / (p.m_s - 1.0), rng);
    return x1 / x2;
}

} // namespace fisher_f
} // namespace fratio
