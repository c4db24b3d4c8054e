#include "ssi/analytic.hpp"
#include "ssi/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ssi {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double clamp01(double x) {
    return std::clamp(x, 0.0, 1.0);
}

} // namespace

double AnalyticDist::stddev() const {
    return std::sqrt(variance);
}

double AnalyticDist::log_density(double x) const {
    const double z = (x - mean) / stddev();
    return -0.5 * z * z - std::log(stddev()) - 0.5 * std::log(kTwoPi);
}

PairMoments pair_moments(const ValueScheme& scheme, double k, std::size_t n) {
    if (scheme.n_total != n)
        throw SchemeSizeMismatch("scheme total does not match N");
    if (!(k > 0.0) || n < 2)
        throw InvalidValue("pair moments require k > 0 and N >= 2");
    const double dn = static_cast<double>(n);
    PairMoments pm;
    pm.m = scheme.m();
    pm.mu_cross.assign(pm.m * pm.m, 0.0);
    pm.sigma2_cross.assign(pm.m * pm.m, 0.0);
    pm.mu_same.resize(pm.m);
    pm.sigma2_same.resize(pm.m);
    for (std::size_t p = 0; p < pm.m; ++p) {
        const double np = static_cast<double>(scheme.entries[p].count);
        pm.mu_same[p] = std::max(0.0, (np - 1.0) * k * np / dn - 1.0);
        pm.sigma2_same[p] =
            2.0 * (np - 1.0) * clamp01(k * np / dn) * clamp01(1.0 - k * (2.0 * np - 1.0) / (3.0 * dn));
        for (std::size_t q = 0; q < pm.m; ++q) {
            if (q == p)
                continue;
            const double nq = static_cast<double>(scheme.entries[q].count);
            const double lo = std::min(np, nq);
            const double hi = std::max(np, nq);
            const double prob = k * hi / dn;
            pm.mu_cross[p * pm.m + q] = lo * prob;
            pm.sigma2_cross[p * pm.m + q] = lo * clamp01(prob) * clamp01(1.0 - prob);
        }
    }
    return pm;
}

double approx_mean(const ValueScheme& scheme, const PairMoments& pm) {
    if (pm.m != scheme.m())
        throw SchemeSizeMismatch("pair moments dimension does not match scheme");
    double sum = 0.0;
    for (std::size_t p = 0; p < pm.m; ++p) {
        const double dp = scheme.entries[p].value - scheme.mean;
        sum += dp * dp * pm.mu_same[p];
        for (std::size_t q = 0; q < pm.m; ++q) {
            if (q == p)
                continue;
            const double dq = scheme.entries[q].value - scheme.mean;
            sum += dp * dq * pm.mu_cross[p * pm.m + q];
        }
    }
    return sum;
}

double approx_mean(const ValueScheme& scheme, double k) {
    return approx_mean(scheme, pair_moments(scheme, k, scheme.n_total));
}

double approx_variance(const ValueScheme& scheme, const PairMoments& pm) {
    if (pm.m != scheme.m())
        throw SchemeSizeMismatch("pair moments dimension does not match scheme");
    if (scheme.m() < 2)
        throw DegenerateScheme("variance requires at least two distinct values");
    const std::size_t r = scheme.background_index;
    const double dr = scheme.entries[r].value - scheme.mean;
    const double cr = scheme.entries[r].value;
    double sum = 0.0;
    for (std::size_t p = 0; p < pm.m; ++p) {
        if (p == r)
            continue;
        const double dp = scheme.entries[p].value - scheme.mean;
        const double dc = scheme.entries[p].value - cr;
        sum += dc * dc * dc * dc * pm.sigma2_same[p];
        for (std::size_t q = 0; q < pm.m; ++q) {
            if (q == p || q == r)
                continue;
            const double dq = scheme.entries[q].value - scheme.mean;
            const double coef = dp * dq - 2.0 * dp * dr + dr * dr;
            sum += coef * coef * pm.sigma2_cross[p * pm.m + q];
        }
    }
    return sum;
}

double approx_variance(const ValueScheme& scheme, double k) {
    return approx_variance(scheme, pair_moments(scheme, k, scheme.n_total));
}

PairMoments apply_delta_correction(const ValueScheme& scheme, long long delta_n,
                                   double k) {
    // f = total_edges / kN. A graph with delta_n extra (or missing) directed
    // edges behaves like one with effective degree f*k, so the moments are
    // rebuilt at that degree: cross means scale exactly by f, while the
    // binomial-shaped variances scale their success probabilities by f
    // (scaling a count's variance by f^2 overstates the spread — the pair
    // counts are sums of indicators, not rescaled random variables).
    const double f = 1.0 + static_cast<double>(delta_n) /
                               (k * static_cast<double>(scheme.n_total));
    if (!(f > 0.0))
        throw CorrectionInfeasible("delta_n scaling factor must be positive");
    return pair_moments(scheme, f * k, scheme.n_total);
}

PairMoments apply_common_neighbor_correction(PairMoments pm) {
    // The same-value mean formula carries a -1 continuity shift that
    // systematically underestimates the true count; undo it for values that
    // actually form pairs. Variances stay untouched.
    for (auto& mu : pm.mu_same)
        if (mu > 0.0)
            mu += 1.0;
    return pm;
}

AnalyticDist analytic_distribution(const ValueScheme& scheme, double k,
                                   const AnalyticOptions& options) {
    if (scheme.m() < 2 || scheme.sum_sq_dev <= 0.0)
        throw DegenerateScheme("analytic law requires M >= 2 and SS > 0");
    PairMoments pm = pair_moments(scheme, k, scheme.n_total);
    if (options.corrections.delta_n_scaling)
        pm = apply_delta_correction(scheme, options.delta_n, k);
    if (options.corrections.common_neighbor)
        pm = apply_common_neighbor_correction(std::move(pm));
    AnalyticDist d;
    d.mean = approx_mean(scheme, pm);
    d.variance = approx_variance(scheme, pm);
    d.corrections = options.corrections;
    d.k_used = k;
    if (!(d.variance > 0.0))
        throw DegenerateScheme("analytic variance is not positive");
    return d;
}

double self_information(double i_bar_observed, const AnalyticDist& d) {
    return -d.log_density(i_bar_observed);
}

double tail_probability(double i_bar_observed, const AnalyticDist& d, TailSide side) {
    const double z = (i_bar_observed - d.mean) / (d.stddev() * std::sqrt(2.0));
    switch (side) {
    case TailSide::upper:
        return 0.5 * std::erfc(z);
    case TailSide::lower:
        return 0.5 * std::erfc(-z);
    case TailSide::two:
    default:
        return std::min(1.0, std::erfc(std::abs(z)));
    }
}

} // namespace ssi
