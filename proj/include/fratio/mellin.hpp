#pragma once

// Mellin-Barnes evaluation of gamma-ratio kernels: contour quadrature on a
// vertical line, the left-pole residue series, and the dominant-pole leading
// term used for high-SNR asymptotics. A kernel
//
//   v(s) = prod Gamma(a_i + s) * prod Gamma(b_j - s)
//          / [prod Gamma(c_k + s) * prod Gamma(d_l - s)]
//          * [-1/s if cdf_factor] * x^{sign * s}
//
// is integrated as (1/2 pi j) int_L v(s) ds along a contour inside the
// pole-free strip. All gamma products are accumulated as sums of log-gamma
// values with one exponentiation at the end, carrying a sign bit on the
// residue path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "error.hpp"
#include "specfun.hpp"

namespace fratio::mellin {

struct GammaRatioKernel {
    std::vector<double> num_plus;   // Gamma(a + s) factors
    std::vector<double> num_minus;  // Gamma(b - s) factors
    std::vector<double> den_plus;   // 1 / Gamma(c + s)
    std::vector<double> den_minus;  // 1 / Gamma(d - s)
    bool cdf_factor = false;        // include Gamma(-s)/Gamma(1-s) = -1/s
    double log_prefactor = 0.0;
    int argument_exponent_sign = +1; // x^{+s} or x^{-s}
};

struct ContourPolicy {
    double abscissa = std::numeric_limits<double>::quiet_NaN(); // NaN: auto
    double truncation = 0.0;                                    // 0: auto
    double step = 0.0;                                          // 0: auto
    double tolerance = 1e-11;                                   // absolute
};

struct Strip {
    double lo, hi;
};

struct PoleCollision {
    bool collided = false;
    std::vector<std::pair<double, double>> offenders; // integer-spaced pairs
};

struct LeadingTerm {
    double value;    // full dominant residue including prefactor
    double exponent; // min(num_plus): the x-power / diversity exponent
};

inline constexpr double collision_tol = 1e-9;

// Open interval of admissible contour abscissas: left poles at s = -a_i - k,
// right poles at s = b_j + k, plus s = 0 on the right when cdf_factor is set.
inline Strip valid_strip(const GammaRatioKernel& k) {
    if (k.num_plus.empty() && !k.cdf_factor)
        throw domain_error("valid_strip: kernel has no left pole family");
    double lo = -std::numeric_limits<double>::infinity();
    for (double a : k.num_plus) lo = std::max(lo, -a);
    double hi = std::numeric_limits<double>::infinity();
    for (double b : k.num_minus) hi = std::min(hi, b);
    if (k.cdf_factor) hi = std::min(hi, 0.0);
    if (!(lo < hi))
        throw domain_error("valid_strip: empty strip, no contour separates the pole families");
    return {lo, hi};
}

inline PoleCollision pole_collision(const GammaRatioKernel& k) {
    PoleCollision out;
    const auto& a = k.num_plus;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double d = a[i] - a[j];
            if (std::abs(d - std::round(d)) <= collision_tol) {
                out.collided = true;
                out.offenders.emplace_back(a[i], a[j]);
            }
        }
    return out;
}

namespace detail {

// Distance from abscissa c to the nearest pole of the ladder {start - k}
// (descending) or {start + k} (ascending), k = 0, 1, ...
inline double ladder_distance(double c, double start, bool descending) {
    const double u = descending ? (start - c) : (c - start);
    if (u <= 0.0) return -u; // c on the pole-free side: nearest is the ladder head
    return std::min(u - std::floor(u), std::ceil(u) - u);
}

inline double nearest_pole_distance(const GammaRatioKernel& k, double c) {
    double d = std::numeric_limits<double>::infinity();
    for (double a : k.num_plus) d = std::min(d, ladder_distance(c, -a, true));
    for (double b : k.num_minus) d = std::min(d, ladder_distance(c, b, false));
    if (k.cdf_factor) d = std::min(d, std::abs(c)); // single pole of -1/s
    return d;
}

// Exponential decay rate of |v(c + it)| in |t|; each numerator gamma
// contributes pi/2, each denominator gamma -pi/2.
inline double decay_rate(const GammaRatioKernel& k) {
    const double n = static_cast<double>(k.num_plus.size() + k.num_minus.size());
    const double d = static_cast<double>(k.den_plus.size() + k.den_minus.size());
    return 0.5 * specfun::pi * (n - d);
}

// log of the plain gamma-product part at complex s (no cdf factor, no x^s).
inline std::complex<double> log_gamma_part(const GammaRatioKernel& k, std::complex<double> s) {
    std::complex<double> w = k.log_prefactor;
    for (double a : k.num_plus) w += specfun::log_gamma(a + s);
    for (double b : k.num_minus) w += specfun::log_gamma(b - s);
    for (double c : k.den_plus) w -= specfun::log_gamma(c + s);
    for (double d : k.den_minus) w -= specfun::log_gamma(d - s);
    return w;
}

struct ContourPlan {
    double abscissa;
    double complement = 0.0; // residue picked up when the contour crossed s = 0
};

// Choose the contour so that x^{sign s} does not grow along it: the quadrature
// then shares the scale of the result and deep tails stay well conditioned.
// When the preferred side is fenced off by the pole at s = 0 (the -1/s factor
// or a Gamma(s) ladder head), shift across it and add its residue back.
inline ContourPlan plan_contour(const GammaRatioKernel& k, double lx, const ContourPolicy& pol) {
    const Strip strip = valid_strip(k);
    if (!std::isnan(pol.abscissa)) {
        if (pol.abscissa <= strip.lo || pol.abscissa >= strip.hi)
            throw domain_error("eval_contour: abscissa outside the valid strip");
        return {pol.abscissa, 0.0};
    }
    const bool want_negative = lx > 0.0;
    if (strip.lo < 0.0 && strip.hi > 0.0)
        return {want_negative ? strip.lo / 2.0 : strip.hi / 2.0, 0.0};
    const bool strip_negative = strip.hi <= 0.0;
    if (strip_negative == want_negative || lx == 0.0)
        return {(strip.lo + strip.hi) / 2.0, 0.0};

    if (strip_negative && k.cdf_factor) {
        // cross s = 0 rightward; Res[-1/s * G(s) x^{sign s}, 0] = -G(0)
        double hi = std::numeric_limits<double>::infinity();
        for (double b : k.num_minus) hi = std::min(hi, b);
        if (!std::isfinite(hi)) hi = std::abs(strip.lo) + 2.0; // no right family
        double log_g0 = k.log_prefactor;
        for (double a : k.num_plus) log_g0 += specfun::lgamma_pos(a);
        for (double b : k.num_minus) log_g0 += specfun::lgamma_pos(b);
        for (double c : k.den_plus) log_g0 -= specfun::lgamma_pos(c);
        for (double d : k.den_minus) log_g0 -= specfun::lgamma_pos(d);
        return {hi / 2.0, std::exp(log_g0)};
    }
    const bool has_zero_head =
        !strip_negative &&
        std::any_of(k.num_plus.begin(), k.num_plus.end(),
                    [](double a) { return std::abs(a) <= collision_tol; });
    if (has_zero_head && !k.cdf_factor) {
        // cross s = 0 leftward; Res[Gamma(s) * rest, 0] = rest(0)
        double next = 1.0; // Gamma(s) continues at -1
        for (double a : k.num_plus)
            if (a > collision_tol) next = std::min(next, a);
        double log_g0 = k.log_prefactor;
        for (double a : k.num_plus)
            if (a > collision_tol) log_g0 += specfun::lgamma_pos(a);
        for (double b : k.num_minus) log_g0 += specfun::lgamma_pos(b);
        for (double c : k.den_plus) log_g0 -= specfun::lgamma_pos(c);
        for (double d : k.den_minus) log_g0 -= specfun::lgamma_pos(d);
        return {-next / 2.0, std::exp(log_g0)};
    }
    // no legal shift: fall back to the midpoint and accept the conditioning
    return {(strip.lo + strip.hi) / 2.0, 0.0};
}

} // namespace detail

// Numerical value of (1/2 pi j) * int_{c-j inf}^{c+j inf} v(s) ds, times
// exp(log_prefactor). Trapezoidal rule on the vertical line: spectrally
// accurate because the integrand is analytic in a strip around the contour
// and decays like exp(-decay_rate * |Im s|). The truncation doubles until
// the analytic tail bound clears the tolerance, then the step is halved to
// convergence.
inline double eval_contour(const GammaRatioKernel& k, double x, ContourPolicy policy = {}) {
    if (!(x > 0.0)) throw domain_error("eval_contour: argument x must be positive");
    const double lx = static_cast<double>(k.argument_exponent_sign) * std::log(x);
    const double decay = detail::decay_rate(k);
    if (decay <= 0.0)
        throw convergence_error("eval_contour: integrand does not decay along the contour");

    const detail::ContourPlan plan = detail::plan_contour(k, lx, policy);
    const double c = plan.abscissa;
    const double alpha = detail::nearest_pole_distance(k, c);

    const auto integrand = [&](double t) -> double {
        const std::complex<double> s(c, t);
        std::complex<double> w = detail::log_gamma_part(k, s) + s * lx;
        if (w.real() > 700.0)
            throw overflow_error("eval_contour: integrand magnitude overflows");
        std::complex<double> v = std::exp(w);
        if (k.cdf_factor) v *= -1.0 / s;
        return v.real(); // conjugate symmetry: imaginary parts cancel in t
    };

    const double tol = policy.tolerance;
    // truncation: double T until the Stirling-envelope tail bound is met
    double T = policy.truncation > 0.0 ? policy.truncation
                                       : std::max(4.0, (std::log(1.0 / tol) + 6.0) / decay);
    constexpr double t_cap = 4000.0;
    for (;;) {
        const double tail = std::abs(integrand(T)) / decay / specfun::pi;
        if (tail < 0.25 * tol || policy.truncation > 0.0) break;
        T *= 2.0;
        if (T > t_cap)
            throw convergence_error("eval_contour: tail bound not met before truncation cap");
    }

    double h = policy.step > 0.0
                   ? policy.step
                   : std::min({0.45 * alpha, 0.5 / std::max(1.0, std::abs(lx)), 0.25});
    // initial trapezoid on [0, T] (factor 2 for the full line and 1/2pi folded in)
    std::size_t n = static_cast<std::size_t>(std::ceil(T / h));
    h = T / static_cast<double>(n);
    double sum = 0.5 * integrand(0.0);
    for (std::size_t i = 1; i <= n; ++i) sum += integrand(h * static_cast<double>(i));
    double estimate = sum * h / specfun::pi;
    if (policy.step > 0.0) return estimate + plan.complement;

    for (int refine = 0; refine < 14; ++refine) {
        double odd = 0.0;
        const std::size_t m = n * 2;
        for (std::size_t i = 1; i < m; i += 2)
            odd += integrand(0.5 * h * static_cast<double>(i));
        const double next = 0.5 * estimate + odd * (0.5 * h) / specfun::pi;
        const bool done = std::abs(next - estimate) <= 0.5 * tol && refine >= 1;
        estimate = next;
        h *= 0.5;
        n = m;
        if (done) return estimate + plan.complement;
    }
    throw convergence_error("eval_contour: step refinement did not converge");
}

namespace detail {

struct PoleTerm {
    double location; // a_i + k, the pole sits at s = -location (times sign)
    std::size_t family;
    int order; // k
    bool operator>(const PoleTerm& o) const { return location > o.location; }
};

} // namespace detail

// Sum of residues over the left poles s = -(a_i + k), valid where that series
// converges: always when numerator +s gammas outnumber the -s ones, and for
// x^{sign} > 1 when they balance. Refuses kernels with integer-coincident
// left-pole families (double poles); eval_contour covers those.
inline double eval_residues(const GammaRatioKernel& k, double x, int max_terms = 4000,
                            double tol = 1e-13) {
    if (!(x > 0.0)) throw domain_error("eval_residues: argument x must be positive");
    if (k.num_plus.empty()) throw domain_error("eval_residues: no left pole family");
    const auto pc = pole_collision(k);
    if (pc.collided)
        throw collision_error("eval_residues: integer-coincident pole families; use eval_contour");

    const double lx = static_cast<double>(k.argument_exponent_sign) * std::log(x);
    const long balance = static_cast<long>(k.num_plus.size() + k.den_minus.size()) -
                         static_cast<long>(k.num_minus.size() + k.den_plus.size());
    if (balance < 0 || (balance == 0 && lx <= 1e-12))
        throw convergence_error("eval_residues: series diverges in this argument regime");

    std::priority_queue<detail::PoleTerm, std::vector<detail::PoleTerm>, std::greater<>> heap;
    for (std::size_t i = 0; i < k.num_plus.size(); ++i)
        heap.push({k.num_plus[i], i, 0});

    double total = 0.0, sum_abs = 0.0;
    int below_tol_run = 0, terms = 0;
    while (!heap.empty() && terms < max_terms) {
        const auto pole = heap.top();
        heap.pop();
        heap.push({pole.location + 1.0, pole.family, pole.order + 1});
        ++terms;

        const double a = pole.location; // residue at s = -a
        double log_mag = k.log_prefactor - a * lx - specfun::lgamma_pos(pole.order + 1.0);
        int sign = (pole.order % 2 == 0) ? 1 : -1;
        bool vanished = false;
        for (std::size_t j = 0; j < k.num_plus.size(); ++j) {
            if (j == pole.family) continue;
            auto [lg, sg] = specfun::log_gamma_signed(k.num_plus[j] - a);
            log_mag += lg;
            sign *= sg;
        }
        for (double b : k.num_minus) {
            auto [lg, sg] = specfun::log_gamma_signed(b + a);
            log_mag += lg;
            sign *= sg;
        }
        for (double cpar : k.den_plus) {
            const double arg = cpar - a;
            if (specfun::detail::is_nonpositive_integer(arg, collision_tol)) {
                vanished = true; // 1/Gamma has a zero here
                break;
            }
            auto [lg, sg] = specfun::log_gamma_signed(arg);
            log_mag -= lg;
            sign *= sg;
        }
        if (!vanished)
            for (double dpar : k.den_minus) {
                const double arg = dpar + a;
                auto [lg, sg] = specfun::log_gamma_signed(arg);
                log_mag -= lg;
                sign *= sg;
            }
        if (k.cdf_factor) log_mag -= std::log(a); // -1/s at s = -a
        if (log_mag > 700.0)
            throw convergence_error("eval_residues: series transient overflows");
        const double term = vanished ? 0.0 : sign * std::exp(log_mag);
        total += term;
        sum_abs += std::abs(term);

        if (std::abs(term) < tol) {
            if (++below_tol_run >= 3) {
                // roundoff accumulated over the transient must not drown the sum
                if (4e-16 * sum_abs > 1e-10 * std::max(1.0, std::abs(total)))
                    throw convergence_error(
                        "eval_residues: cancellation destroyed the series accuracy");
                return total;
            }
        } else {
            below_tol_run = 0;
        }
    }
    throw convergence_error("eval_residues: term budget exhausted before convergence");
}

// Residue at the minimal left pole s = -min(num_plus). Coincident entries at
// the minimum (multiplicity r) are handled exactly via the order-r residue,
// which brings in powers of log x and polygamma values; entries that tie the
// minimum within (collision_tol, 1e-6] are rejected as numerically
// inseparable. The returned exponent is min(num_plus) itself.
inline LeadingTerm leading_term(const GammaRatioKernel& k, double x) {
    if (!(x > 0.0)) throw domain_error("leading_term: argument x must be positive");
    if (k.num_plus.empty()) throw domain_error("leading_term: no left pole family");
    const double a_min = *std::min_element(k.num_plus.begin(), k.num_plus.end());
    int multiplicity = 0;
    std::vector<double> others;
    for (double a : k.num_plus) {
        const double gap = a - a_min;
        if (gap <= collision_tol) {
            ++multiplicity;
        } else if (gap <= 1e-6) {
            throw tie_error("leading_term: two pole families share the minimum within 1e-6");
        } else {
            others.push_back(a);
        }
    }
    const double lx = static_cast<double>(k.argument_exponent_sign) * std::log(x);
    const int r = multiplicity;

    // log h(0): all remaining factors evaluated at s = -a_min
    double log_h0 = k.log_prefactor;
    for (double a : others) log_h0 += specfun::lgamma_pos(a - a_min);
    for (double b : k.num_minus) log_h0 += specfun::lgamma_pos(b + a_min);
    for (double c : k.den_plus) log_h0 -= specfun::lgamma_pos(c - a_min);
    for (double d : k.den_minus) log_h0 -= specfun::lgamma_pos(d + a_min);
    if (k.cdf_factor) log_h0 -= std::log(a_min);

    if (r == 1) {
        const double value = std::exp(log_h0 - a_min * lx);
        return {value, a_min};
    }

    // order-r pole: residue = coeff of w^{r-1} in h(w) e^{w lx} x^{-a_min},
    // h(w) = Gamma(1+w)^r * prod Gamma(a_j - a_min + w) * prod Gamma(b + a_min - w)
    //        / dens * [1/(a_min - w) if cdf_factor]
    std::vector<double> cn(static_cast<std::size_t>(r), 0.0); // cn[n] for n>=1
    double factorial = 1.0;
    for (int n = 1; n < r; ++n) {
        factorial *= n;
        double dn = r * specfun::polygamma(n - 1, 1.0);
        for (double a : others) dn += specfun::polygamma(n - 1, a - a_min);
        const double flip = (n % 2 == 0) ? 1.0 : -1.0;
        for (double b : k.num_minus) dn += flip * specfun::polygamma(n - 1, b + a_min);
        for (double c : k.den_plus) dn -= specfun::polygamma(n - 1, c - a_min);
        for (double d : k.den_minus) dn -= flip * specfun::polygamma(n - 1, d + a_min);
        cn[static_cast<std::size_t>(n)] = dn / factorial;
        if (k.cdf_factor)
            cn[static_cast<std::size_t>(n)] += 1.0 / (n * std::pow(a_min, n));
    }
    // exp of the truncated series: e_0 = 1, e_j = (1/j) sum i c_i e_{j-i}
    std::vector<double> e(static_cast<std::size_t>(r), 0.0);
    e[0] = 1.0;
    for (int j = 1; j < r; ++j) {
        double s = 0.0;
        for (int i = 1; i <= j; ++i)
            s += i * cn[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(j - i)];
        e[static_cast<std::size_t>(j)] = s / j;
    }
    double coeff = 0.0;
    double lx_pow = 1.0, fact = 1.0; // lx^p / p! accumulated upward
    for (int p = 0; p <= r - 1; ++p) {
        if (p > 0) {
            lx_pow *= lx;
            fact *= p;
        }
        coeff += e[static_cast<std::size_t>(r - 1 - p)] * lx_pow / fact;
    }
    const double value = coeff * std::exp(log_h0 - a_min * lx);
    return {value, a_min};
}

} // namespace fratio::mellin
