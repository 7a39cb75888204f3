#pragma once

// Physical-layer-security and full-duplex-relay metrics over cascaded
// squared-F channels. Closed forms are bound/asymptotic expressions built on
// the ratio CDF; the exact metrics are Monte Carlo, mirroring the fact that
// the exact SOP has no tractable closed form. The analytic relay expression
// drops the +1 in gamma_RR + 1, so it sits on the low side of the exact
// outage; callers compare against MC with that direction in mind.

#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"
#include "fisher_f.hpp"
#include "mellin.hpp"
#include "montecarlo.hpp"
#include "ratio_stats.hpp"
#include "rng.hpp"

namespace fratio {

struct SecrecyConfig {
    std::vector<FisherFParams> legit; // gamma_D cascade, length L_D
    std::vector<FisherFParams> eaves; // gamma_E cascade, length L_E
    double rate_threshold = 0.0;      // R_th in bits/s/Hz
};

struct RelayConfig {
    std::vector<FisherFParams> first_hop;  // gamma_AR cascade
    std::vector<FisherFParams> second_hop; // gamma_RB cascade
    FisherFParams self_interference;       // gamma_RR
    double rate = 0.0;                     // R in bits/s/Hz
};

namespace wireless {

inline void validate(const SecrecyConfig& cfg) {
    if (cfg.legit.empty() || cfg.eaves.empty())
        throw domain_error("SecrecyConfig: both cascades need at least one factor");
    for (const auto& f : cfg.legit) fisher_f::validate(f);
    for (const auto& f : cfg.eaves) fisher_f::validate(f);
    if (cfg.rate_threshold < 0.0)
        throw domain_error("SecrecyConfig: rate threshold must be nonnegative");
}

inline void validate(const RelayConfig& cfg) {
    if (cfg.first_hop.empty() || cfg.second_hop.empty())
        throw domain_error("RelayConfig: both hops need at least one factor");
    for (const auto& f : cfg.first_hop) fisher_f::validate(f);
    for (const auto& f : cfg.second_hop) fisher_f::validate(f);
    fisher_f::validate(cfg.self_interference);
    if (cfg.rate < 0.0) throw domain_error("RelayConfig: rate must be nonnegative");
}

inline RatioSpec secrecy_ratio(const SecrecyConfig& cfg) {
    return RatioSpec{cfg.legit, cfg.eaves};
}

// SOP >= F_Y(tau), tau = 2^{R_th}: tight across the SNR range and exact at
// tau = 1.
inline double sop_lower_bound(const SecrecyConfig& cfg) {
    validate(cfg);
    const double tau = std::exp2(cfg.rate_threshold);
    return ratio_stats::cdf_z(secrecy_ratio(cfg), tau);
}

inline double draw_cascade(const std::vector<FisherFParams>& factors, RandomStream& rng) {
    double v = 1.0;
    for (const auto& f : factors) v *= fisher_f::sample(f, rng);
    return v;
}

inline mc::McEstimate sop_exact_mc(const SecrecyConfig& cfg, std::size_t n, RandomStream rng) {
    validate(cfg);
    const double tau = std::exp2(cfg.rate_threshold);
    struct Draw {
        double d, e;
    };
    auto sampler = [&](RandomStream& r) {
        return Draw{draw_cascade(cfg.legit, r), draw_cascade(cfg.eaves, r)};
    };
    auto event = [tau](const Draw& d) { return (1.0 + d.d) / (1.0 + d.e) < tau; };
    return mc::estimate_probability(event, sampler, n, rng);
}

// PNSC = 1 - F_Y(1); the tau = 1 case makes the bound exact.
inline double pnsc(const SecrecyConfig& cfg) {
    validate(cfg);
    return 1.0 - ratio_stats::cdf_z(secrecy_ratio(cfg), 1.0);
}

// Eq.-(24)-style analytic outage: F_Y(sigma) + F_g(sigma) - F_Y F_g with
// F_Y the CDF of gamma_AR / gamma_RR and F_g the product CDF of the second
// hop, sigma = 2^R - 1.
inline double fd_outage_bound(const RelayConfig& cfg) {
    validate(cfg);
    const double sigma = std::exp2(cfg.rate) - 1.0;
    if (sigma == 0.0) return 0.0;
    RatioSpec first{cfg.first_hop, {cfg.self_interference}};
    const double fy = ratio_stats::cdf_z(first, sigma);
    const double fg = ratio_stats::cdf_product(cfg.second_hop, sigma);
    return fy + fg - fy * fg;
}

inline mc::McEstimate fd_outage_exact_mc(const RelayConfig& cfg, std::size_t n,
                                         RandomStream rng) {
    validate(cfg);
    const double sigma = std::exp2(cfg.rate) - 1.0;
    struct Draw {
        double ar, rr, rb;
    };
    auto sampler = [&](RandomStream& r) {
        return Draw{draw_cascade(cfg.first_hop, r), fisher_f::sample(cfg.self_interference, r),
                    draw_cascade(cfg.second_hop, r)};
    };
    auto event = [sigma](const Draw& d) {
        return std::min(d.ar / (d.rr + 1.0), d.rb) < sigma;
    };
    return mc::estimate_probability(event, sampler, n, rng);
}

struct AsymptoticCdf {
    double value;
    double diversity_exponent; // min over numerator m's and denominator m_s's
};

// High-SNR CDF from the dominant residue of the Mellin-Barnes integrand.
// I.i.d. cascades put several coincident parameters at the minimum; the
// engine evaluates that multiple pole exactly (log-power terms included).
inline AsymptoticCdf asymptotic_cdf(const RatioSpec& spec, double z) {
    ratio_stats::validate(spec);
    if (!(z > 0.0)) throw domain_error("asymptotic_cdf: z must be positive");
    const auto kernel = ratio_stats::cdf_kernel(spec);
    const double x = ratio_stats::cdf_argument(spec, z);
    const auto lead = mellin::leading_term(kernel, x);
    return {lead.value, lead.exponent};
}

} // namespace wireless
} // namespace fratio
