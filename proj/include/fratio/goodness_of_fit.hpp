#pragma once

// Kolmogorov-Smirnov machinery: empirical CDFs, the two-sided statistic T,
// the closed-form critical value T_max = sqrt(-ln(alpha/2) / (2 v)) and the
// accept/reject decision. The sup of a step-vs-continuous difference is
// attained at jump edges, so both k/v and (k-1)/v enter the statistic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"

namespace fratio::gof {

struct KSReport {
    double statistic;
    double critical;
    std::size_t sample_size;
    double alpha;
    bool accepted; // statistic < critical
};

// Right-continuous step function with value k/v at the k-th order statistic.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
        if (sorted_.empty()) throw domain_error("empirical_cdf: empty sample");
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double x) const {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

inline EmpiricalCdf empirical_cdf(std::vector<double> samples) {
    return EmpiricalCdf(std::move(samples));
}

template <class Cdf>
double ks_statistic(const std::vector<double>& samples, Cdf&& analytic_cdf) {
    if (samples.empty()) throw domain_error("ks_statistic: empty sample");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double v = static_cast<double>(sorted.size());
    double t = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = analytic_cdf(sorted[i]);
        const double k = static_cast<double>(i + 1);
        t = std::max({t, std::abs(f - k / v), std::abs(f - (k - 1.0) / v)});
    }
    return t;
}

inline double critical_value(double alpha, std::size_t v) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("critical_value: alpha must lie in (0,1)");
    if (v < 1) throw domain_error("critical_value: sample size must be at least 1");
    return std::sqrt(-std::log(alpha / 2.0) / (2.0 * static_cast<double>(v)));
}

template <class Cdf>
KSReport ks_test(const std::vector<double>& samples, Cdf&& analytic_cdf, double alpha) {
    const double t = ks_statistic(samples, analytic_cdf);
    const double c = critical_value(alpha, samples.size());
    return {t, c, samples.size(), alpha, t < c};
}

} // namespace fratio::gof
