#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <fratio/fisher_f.hpp>
#include <fratio/mellin.hpp>
#include <fratio/rng.hpp>
#include <fratio/specfun.hpp>

using namespace fratio;
using Catch::Approx;

namespace {

// one-factor CDF kernel for gamma ~ F(gbar, m, m_s):
// F(g) = pref * MB[(-1/s) G(m+s) G(m_s-s); x], x = (m_s-1) gbar / (m g)
mellin::GammaRatioKernel single_f_cdf_kernel(const FisherFParams& p) {
    mellin::GammaRatioKernel k;
    k.num_plus = {p.m};
    k.num_minus = {p.m_s};
    k.cdf_factor = true;
    k.log_prefactor = -(specfun::lgamma_pos(p.m) + specfun::lgamma_pos(p.m_s));
    return k;
}

double single_f_argument(const FisherFParams& p, double gamma) {
    return (p.m_s - 1.0) * p.gamma_bar / (p.m * gamma);
}

} // namespace

TEST_CASE("valid_strip pole bookkeeping") {
    mellin::GammaRatioKernel k;
    k.num_plus = {2.0, 3.0};
    k.num_minus = {4.0, 5.0};
    auto s = mellin::valid_strip(k);
    CHECK(s.lo == Approx(-2.0));
    CHECK(s.hi == Approx(4.0));
    k.cdf_factor = true;
    s = mellin::valid_strip(k);
    CHECK(s.lo == Approx(-2.0));
    CHECK(s.hi == Approx(0.0));
    mellin::GammaRatioKernel k2;
    k2.num_plus = {0.6};
    k2.cdf_factor = true;
    s = mellin::valid_strip(k2);
    CHECK(s.lo == Approx(-0.6));
    CHECK(s.hi == Approx(0.0));
}

TEST_CASE("valid_strip empty-strip error") {
    mellin::GammaRatioKernel k;
    k.num_plus = {2.0};
    k.num_minus = {-3.0};
    CHECK_THROWS_AS(mellin::valid_strip(k), domain_error);
    mellin::GammaRatioKernel k2;
    k2.num_plus = {-0.5}; // head right of zero with cdf factor: no separating line
    k2.cdf_factor = true;
    CHECK_THROWS_AS(mellin::valid_strip(k2), domain_error);
}

TEST_CASE("pole_collision classification") {
    mellin::GammaRatioKernel k;
    k.num_plus = {1.3, 2.7};
    CHECK_FALSE(mellin::pole_collision(k).collided);
    k.num_plus = {1.5, 3.5};
    CHECK(mellin::pole_collision(k).collided);
    k.num_plus = {1.5, 1.5 + 1e-12};
    CHECK(mellin::pole_collision(k).collided);
}

TEST_CASE("eval_contour reproduces the incomplete-beta CDF oracle") {
    const FisherFParams p{1.3, 2.4, 3.6};
    const auto k = single_f_cdf_kernel(p);
    for (double g : {0.25, 0.9, 2.0, 10.0}) {
        const double engine = mellin::eval_contour(k, single_f_argument(p, g));
        CHECK(engine == Approx(fisher_f::cdf(p, g)).margin(1e-10));
    }
    // frozen cross-check of one point (mpmath betainc)
    CHECK(mellin::eval_contour(k, single_f_argument(p, 0.9)) ==
          Approx(0.503210997425873419).margin(1e-11));
}

TEST_CASE("eval_contour symmetric ratio kernel gives 1/2 at the median") {
    // identical one-factor numerator/denominator: Z ~ 1/Z, F(1) = 1/2
    const double m = 2.2, ms = 3.7;
    mellin::GammaRatioKernel k;
    k.num_plus = {m, ms};
    k.num_minus = {m, ms};
    k.cdf_factor = true;
    k.log_prefactor = -2.0 * (specfun::lgamma_pos(m) + specfun::lgamma_pos(ms));
    CHECK(mellin::eval_contour(k, 1.0) == Approx(0.5).margin(1e-10));
}

TEST_CASE("eval_contour CDF limit at large z") {
    const FisherFParams p{0.8, 1.7, 2.9};
    const auto k = single_f_cdf_kernel(p);
    CHECK(mellin::eval_contour(k, single_f_argument(p, 5e4)) == Approx(1.0).margin(1e-8));
}

TEST_CASE("eval_contour is invariant under admissible abscissa changes") {
    const FisherFParams p{1.0, 1.9, 4.3};
    const auto k = single_f_cdf_kernel(p);
    const double x = single_f_argument(p, 1.4); // > 1: admissible strip is (-1.9, 0)
    const double ref = mellin::eval_contour(k, x);
    for (double c : {-1.5, -0.9, -0.3}) {
        mellin::ContourPolicy pol;
        pol.abscissa = c;
        CHECK(mellin::eval_contour(k, x, pol) == Approx(ref).epsilon(1e-9));
    }
    mellin::ContourPolicy bad;
    bad.abscissa = 0.5;
    CHECK_THROWS_AS(mellin::eval_contour(k, x, bad), domain_error);
}

TEST_CASE("eval_residues equals eval_contour on randomized generic kernels") {
    // kernels drawn the way ratio_stats builds them: normalized prefactor,
    // parameter draws kept away from integer spacing
    RandomStream rng(314159, 0);
    int tested = 0;
    while (tested < 50) {
        mellin::GammaRatioKernel k;
        const int pairs = 1 + static_cast<int>(rng.uniform() * 3.0);
        double log_norm = 0.0;
        for (int i = 0; i < pairs; ++i) {
            const double a = 0.8 + 3.5 * rng.uniform();
            const double b = 1.2 + 3.5 * rng.uniform();
            k.num_plus.push_back(a);
            k.num_minus.push_back(b);
            log_norm += specfun::lgamma_pos(a) + specfun::lgamma_pos(b);
        }
        k.cdf_factor = rng.uniform() < 0.5;
        k.log_prefactor = -log_norm;
        bool too_close = false;
        for (std::size_t i = 0; i < k.num_plus.size() && !too_close; ++i)
            for (std::size_t j = i + 1; j < k.num_plus.size(); ++j) {
                const double d = k.num_plus[i] - k.num_plus[j];
                if (std::abs(d - std::round(d)) < 0.05) too_close = true;
            }
        if (too_close || mellin::pole_collision(k).collided) continue;
        const double x = 3.0 + 40.0 * rng.uniform();
        const double via_contour = mellin::eval_contour(k, x);
        double via_residues;
        try {
            via_residues = mellin::eval_residues(k, x);
        } catch (const convergence_error&) {
            continue; // series declined (transient cancellation); routing falls back
        }
        CHECK(via_residues == Approx(via_contour).margin(1e-8));
        ++tested;
    }
}

TEST_CASE("eval_residues refuses collided kernels") {
    mellin::GammaRatioKernel k;
    k.num_plus = {1.0, 2.0};
    k.num_minus = {3.3, 4.4};
    CHECK_THROWS_AS(mellin::eval_residues(k, 3.0), collision_error);
}

TEST_CASE("eval_residues divergence detection for balanced kernels below x = 1") {
    mellin::GammaRatioKernel k;
    k.num_plus = {1.3, 2.6};
    k.num_minus = {2.2, 3.9};
    CHECK_THROWS_AS(mellin::eval_residues(k, 0.5), convergence_error);
}

TEST_CASE("one-term residue truncation equals leading_term") {
    mellin::GammaRatioKernel k;
    k.num_plus = {1.4, 2.75};
    k.num_minus = {3.1, 2.3};
    k.cdf_factor = true;
    k.log_prefactor = -2.0;
    const double x = 40.0;
    const auto lead = mellin::leading_term(k, x);
    CHECK(lead.exponent == Approx(1.4));
    // by construction: the dominant residue written out by hand
    const double manual =
        std::exp(k.log_prefactor + specfun::lgamma_pos(2.75 - 1.4) +
                 specfun::lgamma_pos(3.1 + 1.4) + specfun::lgamma_pos(2.3 + 1.4) -
                 std::log(1.4) - 1.4 * std::log(x));
    CHECK(lead.value == Approx(manual).epsilon(1e-13));
    // the remaining series terms vanish like 1/x relative to the first
    const double deep = 2e5;
    CHECK(mellin::leading_term(k, deep).value ==
          Approx(mellin::eval_residues(k, deep)).epsilon(1e-3));
}

TEST_CASE("leading_term ratio approaches 1 with growing SNR") {
    // generic two-pair CDF kernel; x plays the role of the SNR scale
    mellin::GammaRatioKernel k;
    k.num_plus = {1.35, 3.6};
    k.num_minus = {2.8, 4.15};
    k.cdf_factor = true;
    k.log_prefactor = -3.0;
    double prev_gap = 1e9;
    for (double db : {30.0, 40.0, 50.0}) {
        const double x = std::pow(10.0, db / 10.0);
        const double exact = mellin::eval_contour(k, x);
        const double lead = mellin::leading_term(k, x).value;
        const double gap = std::abs(exact / lead - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.05);
}

TEST_CASE("leading_term exponent is the minimal numerator parameter") {
    mellin::GammaRatioKernel k;
    k.num_plus = {6.0, 6.0, 6.0, 3.0, 3.0, 3.0};
    k.num_minus = {6.0, 6.0, 6.0, 3.0, 3.0, 3.0};
    k.cdf_factor = true;
    CHECK(mellin::leading_term(k, 50.0).exponent == Approx(3.0));
}

TEST_CASE("leading_term handles a triple minimal pole exactly") {
    // i.i.d. secrecy kernel at 30 dB (frozen against a 30-digit contour value)
    mellin::GammaRatioKernel k;
    k.num_plus = {6.0, 6.0, 6.0, 3.0, 3.0, 3.0};
    k.num_minus = {6.0, 6.0, 6.0, 3.0, 3.0, 3.0};
    k.cdf_factor = true;
    k.log_prefactor = -6.0 * (specfun::lgamma_pos(6.0) + specfun::lgamma_pos(3.0));
    const double x = 5.0e8;
    CHECK(mellin::leading_term(k, x).value == Approx(6.59684073011e-19).epsilon(1e-9));
    const double exact = mellin::eval_contour(k, x);
    CHECK(exact / mellin::leading_term(k, x).value == Approx(1.0).margin(1e-3));
}

TEST_CASE("leading_term near-tie rejection") {
    mellin::GammaRatioKernel k;
    k.num_plus = {1.5, 1.5 + 1e-8};
    k.num_minus = {2.0, 3.0};
    CHECK_THROWS_AS(mellin::leading_term(k, 10.0), tie_error);
}

TEST_CASE("CDF-mode kernels stay within [0,1] and are monotone") {
    const FisherFParams p{2.0, 1.6, 2.8};
    const auto k = single_f_cdf_kernel(p);
    double prev = -1e-9;
    for (double g = 0.05; g < 40.0; g *= 1.7) {
        const double v = mellin::eval_contour(k, single_f_argument(p, g));
        CHECK(v >= -1e-9);
        CHECK(v <= 1.0 + 1e-9);
        CHECK(v >= prev - 1e-9);
        prev = v;
    }
}
