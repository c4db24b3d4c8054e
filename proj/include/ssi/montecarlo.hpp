#pragma once

#include "ssi/analytic.hpp"
#include "ssi/graph.hpp"
#include "ssi/scheme.hpp"

#include <cstdint>
#include <vector>

namespace ssi {

struct Histogram {
    std::vector<double> edges;       // size bins + 1
    std::vector<std::size_t> counts; // size bins
};

// Monte Carlo (or exhaustive) draws of the unscaled statistic.
struct EmpiricalDist {
    std::vector<double> samples;
    double mean = 0.0;
    double stddev = 0.0; // n-1 denominator

    std::size_t n() const { return samples.size(); }
};

EmpiricalDist make_empirical(std::vector<double> samples);

// Exact pmf over all distinguishable arrangements.
struct ExactDist {
    std::vector<std::pair<double, double>> support; // (value, probability)

    double mean() const;
};

// n_samples i.i.d. uniform arrangements; replicate r draws from
// substream(seed, r), so the result is independent of worker count.
EmpiricalDist sample_distribution(const ValueScheme& scheme, const WeightGraph& g,
                                  std::size_t n_samples, std::uint64_t seed,
                                  unsigned workers = 1);

// Enumerates every distinct arrangement of the scheme's multiset; refuses
// when the multinomial count exceeds max_states.
ExactDist enumerate_exact(const ValueScheme& scheme, const WeightGraph& g,
                          std::uint64_t max_states);

// Histogram convention shared by the KL metric and exports: `bins` equal-width
// bins spanning mean +- 5 stddev of the analytic law, outliers clamped into
// the edge bins.
Histogram histogram_against(const EmpiricalDist& e, const AnalyticDist& d,
                            std::size_t bins = 50);

// D(empirical || analytic) over the shared histogram; empty empirical bins
// contribute zero, analytic masses floored at 1e-300.
double kl_divergence(const EmpiricalDist& e, const AnalyticDist& d,
                     std::size_t bins = 50);

struct KsResult {
    double statistic;
    double p_value;
};

// One-sample KS against the analytic normal CDF, asymptotic p-value.
KsResult ks_test(const EmpiricalDist& e, const AnalyticDist& d);

struct StandardizedDiffs {
    double mean_diff; // |mu_t - mu_e| / sigma_t
    double std_diff;  // |sigma_t - sigma_e| / sigma_e
};

StandardizedDiffs standardized_diffs(const AnalyticDist& d, const EmpiricalDist& e);

} // namespace ssi
