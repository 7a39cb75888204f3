#pragma once

// Seeded, reproducible Monte Carlo estimators. Samplers are callables taking
// a RandomStream&; estimators own a stream copy so identical (seed, stream)
// inputs give bit-identical results regardless of caller state.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace fratio::mc {

struct McEstimate {
    double value;
    double std_error; // binomial stderr for probability estimates
    std::size_t n;
};

template <class Event, class Sampler>
McEstimate estimate_probability(Event&& event, Sampler&& sampler, std::size_t n,
                                RandomStream rng) {
    if (n == 0) throw domain_error("estimate_probability: need at least one draw");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (event(sampler(rng))) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

// One pass over n draws accumulating every grid threshold: estimates
// P(X <= g) for each g in the (ascending) grid.
template <class Sampler>
std::vector<McEstimate> estimate_cdf_curve(Sampler&& sampler, const std::vector<double>& grid,
                                           std::size_t n, RandomStream rng) {
    if (n == 0) throw domain_error("estimate_cdf_curve: need at least one draw");
    if (grid.empty()) return {};
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw domain_error("estimate_cdf_curve: grid must be ascending");
    std::vector<std::size_t> hist(grid.size() + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sampler(rng);
        const auto it = std::lower_bound(grid.begin(), grid.end(), v);
        ++hist[static_cast<std::size_t>(it - grid.begin())];
    }
    std::vector<McEstimate> out(grid.size());
    std::size_t cum = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        cum += hist[j];
        const double p = static_cast<double>(cum) / static_cast<double>(n);
        out[j] = {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
    }
    return out;
}

} // namespace fratio::mc
