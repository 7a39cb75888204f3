#pragma once

// Moment-matched log-normal approximations for single variates, products,
// ratios and ratios of products of squared-F factors, with the adjustment
// factor epsilon. Each factor contributes a matched pair (H, Y): H is its
// first-moment contribution, Y its second-to-first-squared moment ratio, and
//
//   sigma^2 = sum ln(Y_i - eps_i),   mu = sum ln H_i - sigma^2 / 2,
//
// so the first moment is preserved for every admissible epsilon. Numerator
// factors need m_s > 2 (finite second moment); denominator factors need
// m > 2 (finite inverse second moment). Epsilon admissibility is tightened
// to keep sigma^2 > 0: we reject rather than clamp.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fisher_f.hpp"
#include "ratio_stats.hpp"
#include "specfun.hpp"

namespace fratio {

struct LogNormalParams {
    double mu;
    double sigma; // > 0
};

struct FitReport {
    LogNormalParams params;
    double matched_h; // product of per-factor H quantities
    double matched_y; // product of per-factor Y quantities (eps = 0)
    std::vector<double> epsilons;
    double kolmogorov_distance = std::numeric_limits<double>::quiet_NaN();
};

namespace lognormal {

inline void validate(const LogNormalParams& p) {
    if (!(p.sigma > 0.0)) throw domain_error("LogNormalParams: sigma must be positive");
}

inline double pdf(const LogNormalParams& p, double y) {
    validate(p);
    if (!(y > 0.0)) throw domain_error("lognormal::pdf: y must be positive");
    const double t = (std::log(y) - p.mu) / p.sigma;
    return std::exp(-0.5 * t * t) / (y * p.sigma * std::sqrt(2.0 * specfun::pi));
}

inline double cdf(const LogNormalParams& p, double y) {
    validate(p);
    if (!(y > 0.0)) throw domain_error("lognormal::cdf: y must be positive");
    return specfun::norm_cdf((std::log(y) - p.mu) / p.sigma);
}

inline double moment(const LogNormalParams& p, int n) {
    validate(p);
    return std::exp(n * p.mu + 0.5 * n * n * p.sigma * p.sigma);
}

inline double quantile(const LogNormalParams& p, double q) {
    validate(p);
    return std::exp(p.mu + p.sigma * specfun::norm_ppf(q));
}

// Per-factor matched quantities.
struct FactorQuantities {
    double h;
    double y;
};

inline FactorQuantities numerator_quantities(const FisherFParams& f) {
    fisher_f::validate(f);
    if (!(f.m_s > 2.0))
        throw domain_error("lognormal fit: shadowing too heavy, m_s must exceed 2");
    return {f.gamma_bar, (1.0 + f.m) * (f.m_s - 1.0) / (f.m * (f.m_s - 2.0))};
}

inline FactorQuantities denominator_quantities(const FisherFParams& f) {
    fisher_f::validate(f);
    if (!(f.m > 2.0))
        throw domain_error("lognormal fit: denominator fading too heavy, m must exceed 2");
    return {f.m_s * f.m / ((f.m - 1.0) * (f.m_s - 1.0) * f.gamma_bar),
            (f.m - 1.0) * (1.0 + f.m_s) / (f.m_s * (f.m - 2.0))};
}

inline std::vector<FactorQuantities> quantities(const RatioSpec& spec) {
    ratio_stats::validate(spec);
    std::vector<FactorQuantities> qs;
    qs.reserve(spec.numerator.size() + spec.denominator.size());
    for (const auto& f : spec.numerator) qs.push_back(numerator_quantities(f));
    for (const auto& f : spec.denominator) qs.push_back(denominator_quantities(f));
    return qs;
}

namespace detail {

inline FitReport fit_quantities(const std::vector<FactorQuantities>& qs,
                                const std::vector<double>& eps) {
    if (eps.size() != qs.size())
        throw domain_error("lognormal fit: epsilon count must match factor count");
    double sigma2 = 0.0, log_h = 0.0, matched_y = 1.0, matched_h = 1.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double adj = qs[i].y - eps[i];
        if (!(adj > 0.0))
            throw domain_error("lognormal fit: epsilon too large, Y - eps must stay positive");
        sigma2 += std::log(adj);
        log_h += std::log(qs[i].h);
        matched_y *= qs[i].y;
        matched_h *= qs[i].h;
    }
    if (!(sigma2 > 0.0))
        throw domain_error("lognormal fit: degenerate sigma, adjusted Y product must exceed 1");
    FitReport r;
    r.params = {log_h - 0.5 * sigma2, std::sqrt(sigma2)};
    r.matched_h = matched_h;
    r.matched_y = matched_y;
    r.epsilons = eps;
    return r;
}

inline std::vector<double> broadcast(double eps, std::size_t n) {
    return std::vector<double>(n, eps);
}

} // namespace detail

inline FitReport fit_single(const FisherFParams& p, double epsilon = 0.0) {
    return detail::fit_quantities({numerator_quantities(p)}, {epsilon});
}

inline FitReport fit_product(const std::vector<FisherFParams>& factors,
                             const std::vector<double>& epsilons) {
    if (factors.empty()) throw domain_error("fit_product: need at least one factor");
    std::vector<FactorQuantities> qs;
    qs.reserve(factors.size());
    for (const auto& f : factors) qs.push_back(numerator_quantities(f));
    return detail::fit_quantities(qs, epsilons);
}

inline FitReport fit_product(const std::vector<FisherFParams>& factors, double epsilon = 0.0) {
    return fit_product(factors, detail::broadcast(epsilon, factors.size()));
}

inline FitReport fit_ratio(const FisherFParams& px, const FisherFParams& py,
                           double epsilon = 0.0) {
    return detail::fit_quantities({numerator_quantities(px), denominator_quantities(py)},
                                  detail::broadcast(epsilon, 2));
}

inline FitReport fit_ratio_of_products(const RatioSpec& spec,
                                       const std::vector<double>& epsilons) {
    return detail::fit_quantities(quantities(spec), epsilons);
}

inline FitReport fit_ratio_of_products(const RatioSpec& spec, double epsilon = 0.0) {
    const auto qs = quantities(spec);
    return detail::fit_quantities(qs, detail::broadcast(epsilon, qs.size()));
}

// Shared-scalar epsilon feasibility: every Y_i - eps positive and the
// adjusted product above 1 (sigma^2 > 0). The upper edge solves
// prod(Y_i - eps) = 1 by bisection since the product is decreasing.
struct EpsilonInterval {
    double lo, hi;
};

inline EpsilonInterval feasible_epsilon(const std::vector<FactorQuantities>& qs,
                                        double margin = 1e-6) {
    double y_min = std::numeric_limits<double>::infinity();
    for (const auto& q : qs) y_min = std::min(y_min, q.y);
    const auto sigma2_at = [&](double e) {
        double s = 0.0;
        for (const auto& q : qs) s += std::log(q.y - e);
        return s;
    };
    const double lo = -y_min + margin;
    double hi = y_min - margin;
    if (sigma2_at(hi) <= 0.0) {
        double a = lo, b = hi;
        if (sigma2_at(a) <= 0.0)
            throw domain_error("tune_epsilon: no epsilon gives sigma^2 > 0");
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (a + b);
            (sigma2_at(mid) > 0.0 ? a : b) = mid;
        }
        hi = a;
    }
    if (!(lo < hi)) throw domain_error("tune_epsilon: admissible epsilon interval is empty");
    return {lo, hi};
}

namespace detail {

// Coarse scan plus golden-section refinement of a scalar objective.
template <class F>
std::pair<double, double> minimize_scalar(F&& f, double lo, double hi, int coarse = 32) {
    double best_x = lo, best = f(lo);
    for (int i = 1; i <= coarse; ++i) {
        const double x = lo + (hi - lo) * i / coarse;
        const double v = f(x);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    const double w = (hi - lo) / coarse;
    double a = std::max(lo, best_x - w), b = std::min(hi, best_x + w);
    constexpr double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 80 && (b - a) > 1e-10 * (1.0 + std::abs(a)); ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    const double x = f1 < f2 ? x1 : x2;
    const double v = std::min(f1, f2);
    return v < best ? std::make_pair(x, v) : std::make_pair(best_x, best);
}

// 200 log-spaced points spanning the [1e-4, 1-1e-4] quantiles of the
// eps = 0 moment-matched fit; the exact CDF is evaluated here once.
inline std::vector<double> tuning_grid(const std::vector<FactorQuantities>& qs,
                                       std::size_t points = 200) {
    const auto base = fit_quantities(qs, std::vector<double>(qs.size(), 0.0));
    const double zlo = quantile(base.params, 1e-4);
    const double zhi = quantile(base.params, 1.0 - 1e-4);
    std::vector<double> grid(points);
    const double step = (std::log(zhi) - std::log(zlo)) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = std::exp(std::log(zlo) + step * static_cast<double>(i));
    return grid;
}

} // namespace detail

struct TuneResult {
    double epsilon;
    double kolmogorov_distance;
};

// Scalar shared epsilon minimizing sup_z |F_exact(z) - F_lognormal(z)| over
// the tuning grid. The exact CDF is sampled once; each candidate epsilon only
// re-evaluates the log-normal side.
inline TuneResult tune_epsilon(const RatioSpec& spec,
                               const std::function<double(double)>& exact_cdf,
                               EpsilonInterval bounds = {std::numeric_limits<double>::quiet_NaN(),
                                                         std::numeric_limits<double>::quiet_NaN()}) {
    const auto qs = quantities(spec);
    auto interval = feasible_epsilon(qs);
    if (!std::isnan(bounds.lo)) interval.lo = std::max(interval.lo, bounds.lo);
    if (!std::isnan(bounds.hi)) interval.hi = std::min(interval.hi, bounds.hi);
    if (!(interval.lo < interval.hi))
        throw domain_error("tune_epsilon: requested bounds leave no admissible epsilon");
    const auto grid = detail::tuning_grid(qs);
    std::vector<double> f_exact(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f_exact[i] = exact_cdf(grid[i]);
    const auto distance = [&](double eps) {
        const auto fit = detail::fit_quantities(qs, std::vector<double>(qs.size(), eps));
        double d = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            d = std::max(d, std::abs(f_exact[i] - cdf(fit.params, grid[i])));
        return d;
    };
    const auto [eps, dist] = detail::minimize_scalar(distance, interval.lo, interval.hi);
    return {eps, dist};
}

// MC-mode tuning for parity with the simulation-driven experiments: epsilon
// minimizes the two-sided KS statistic against the empirical CDF of the
// given sample (sorted internally).
inline TuneResult tune_epsilon_empirical(const RatioSpec& spec, std::vector<double> samples) {
    if (samples.empty()) throw domain_error("tune_epsilon_empirical: empty sample");
    std::sort(samples.begin(), samples.end());
    const auto qs = quantities(spec);
    const auto interval = feasible_epsilon(qs);
    const double v = static_cast<double>(samples.size());
    const auto statistic = [&](double eps) {
        const auto fit = detail::fit_quantities(qs, std::vector<double>(qs.size(), eps));
        double t = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double f = cdf(fit.params, samples[i]);
            const double k = static_cast<double>(i + 1);
            t = std::max({t, std::abs(f - k / v), std::abs(f - (k - 1.0) / v)});
        }
        return t;
    };
    const auto [eps, dist] = detail::minimize_scalar(statistic, interval.lo, interval.hi, 64);
    return {eps, dist};
}

} // namespace lognormal
} // namespace fratio
