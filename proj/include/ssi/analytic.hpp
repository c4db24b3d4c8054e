#pragma once

#include "ssi/scheme.hpp"

#include <vector>

namespace ssi {

// First and second moments of the pair-set cardinalities under random
// arrangement. mu_cross/sigma2_cross are m x m with unused diagonals; the
// same-value moments live in mu_same/sigma2_same.
struct PairMoments {
    std::size_t m = 0;
    std::vector<double> mu_cross;     // row-major m x m, diagonal unused
    std::vector<double> sigma2_cross; // row-major m x m, diagonal unused
    std::vector<double> mu_same;      // length m
    std::vector<double> sigma2_same;  // length m

    double mu(std::size_t p, std::size_t q) const {
        return p == q ? mu_same[p] : mu_cross[p * m + q];
    }
    double sigma2(std::size_t p, std::size_t q) const {
        return p == q ? sigma2_same[p] : sigma2_cross[p * m + q];
    }
};

struct CorrectionFlags {
    bool delta_n_scaling = false;
    bool common_neighbor = false;
};

// Normal law N(mu, sigma2) approximating the permutation distribution of
// the unscaled statistic, conditioned on the value scheme.
struct AnalyticDist {
    double mean = 0.0;
    double variance = 0.0;
    CorrectionFlags corrections;
    double k_used = 0.0;

    double stddev() const;
    double log_density(double x) const;
};

struct AnalyticOptions {
    CorrectionFlags corrections;
    long long delta_n = 0;
};

// Cross-value means are exact first moments and stay unclamped even when the
// binomial success factor exceeds 1; variance probability factors are clamped
// into [0,1]. Same-value means are floored at 0 (a singleton value makes no
// same-value pairs).
PairMoments pair_moments(const ValueScheme& scheme, double k, std::size_t n);

double approx_mean(const ValueScheme& scheme, const PairMoments& pm);
double approx_mean(const ValueScheme& scheme, double k);

// Background = entry with the largest count (ties to the smaller value).
double approx_variance(const ValueScheme& scheme, const PairMoments& pm);
double approx_variance(const ValueScheme& scheme, double k);

// Rebuild the moments at effective degree f*k, f = total_edges/kN
// = 1 + delta_n/(kN): means scale by f, variances keep their binomial shape.
PairMoments apply_delta_correction(const ValueScheme& scheme, long long delta_n,
                                   double k);

// Undo the -1 continuity shift on same-value means (fixes the systematic
// underestimate from the shared-neighbor assumption); variances untouched.
PairMoments apply_common_neighbor_correction(PairMoments pm);

AnalyticDist analytic_distribution(const ValueScheme& scheme, double k,
                                   const AnalyticOptions& options = {});

// J = -ln(normal density at the observed unscaled statistic).
double self_information(double i_bar_observed, const AnalyticDist& d);

enum class TailSide { upper, lower, two };

double tail_probability(double i_bar_observed, const AnalyticDist& d, TailSide side);

} // namespace ssi
