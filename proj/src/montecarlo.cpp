#include "ssi/montecarlo.hpp"
#include "ssi/errors.hpp"
#include "ssi/kernels.hpp"
#include "ssi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ssi {

namespace {

double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

// Multinomial arrangement count with early overflow cutoff.
double arrangement_count(const ValueScheme& scheme, double cutoff) {
    double log_count = std::lgamma(static_cast<double>(scheme.n_total) + 1.0);
    for (const auto& e : scheme.entries)
        log_count -= std::lgamma(static_cast<double>(e.count) + 1.0);
    if (log_count > std::log(cutoff) + 1.0)
        return cutoff * 2.0;
    return std::exp(log_count);
}

} // namespace

EmpiricalDist make_empirical(std::vector<double> samples) {
    EmpiricalDist e;
    e.samples = std::move(samples);
    if (e.samples.empty())
        return e;
    double sum = 0.0;
    for (double v : e.samples)
        sum += v;
    e.mean = sum / static_cast<double>(e.samples.size());
    if (e.samples.size() > 1) {
        double ss = 0.0;
        for (double v : e.samples)
            ss += (v - e.mean) * (v - e.mean);
        e.stddev = std::sqrt(ss / static_cast<double>(e.samples.size() - 1));
    }
    return e;
}

double ExactDist::mean() const {
    double m = 0.0;
    for (auto [v, p] : support)
        m += v * p;
    return m;
}

EmpiricalDist sample_distribution(const ValueScheme& scheme, const WeightGraph& g,
                                  std::size_t n_samples, std::uint64_t seed,
                                  unsigned workers) {
    if (scheme.n_total != g.n_vertices())
        throw SchemeSizeMismatch("scheme size does not match graph size");
    std::vector<double> base;
    base.reserve(scheme.n_total);
    for (const auto& e : scheme.entries)
        base.insert(base.end(), e.count, e.value - scheme.mean);

    std::vector<double> results(n_samples);
    auto run_range = [&](std::size_t begin, std::size_t end) {
        std::vector<double> dev = base;
        for (std::size_t r = begin; r < end; ++r) {
            SplitMix64 rng(substream(seed, r));
            // shuffling the deviations is the same permutation as shuffling
            // the values; saves re-centering per draw
            std::copy(base.begin(), base.end(), dev.begin());
            shuffle(dev, rng);
            results[r] = kernels::edge_sum(g.offsets(), g.neighbors(), dev);
        }
    };

    workers = std::max(1u, workers);
    if (workers == 1 || n_samples < 2 * workers) {
        run_range(0, n_samples);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_samples + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n_samples, begin + chunk);
            if (begin < end)
                pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool)
            t.join();
    }
    return make_empirical(std::move(results));
}

ExactDist enumerate_exact(const ValueScheme& scheme, const WeightGraph& g,
                          std::uint64_t max_states) {
    if (scheme.n_total != g.n_vertices())
        throw SchemeSizeMismatch("scheme size does not match graph size");
    const double states = arrangement_count(scheme, static_cast<double>(max_states));
    if (states > static_cast<double>(max_states))
        throw TooManyArrangements("arrangement count exceeds max_states");

    std::vector<double> dev;
    dev.reserve(scheme.n_total);
    for (const auto& e : scheme.entries)
        dev.insert(dev.end(), e.count, e.value - scheme.mean);
    std::sort(dev.begin(), dev.end());

    std::vector<double> values;
    do {
        values.push_back(kernels::edge_sum(g.offsets(), g.neighbors(), dev));
    } while (std::next_permutation(dev.begin(), dev.end()));

    const double prob = 1.0 / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    ExactDist out;
    // merge values equal up to accumulation noise into one support point
    const double tol = 1e-9 * std::max(1.0, std::abs(values.back()));
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] - values[i] <= tol)
            ++j;
        out.support.emplace_back(values[i], prob * static_cast<double>(j - i));
        i = j;
    }
    return out;
}

Histogram histogram_against(const EmpiricalDist& e, const AnalyticDist& d,
                            std::size_t bins) {
    Histogram h;
    const double lo = d.mean - 5.0 * d.stddev();
    const double hi = d.mean + 5.0 * d.stddev();
    const double width = (hi - lo) / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges[b] = lo + width * static_cast<double>(b);
    h.counts.assign(bins, 0);
    for (double v : e.samples) {
        auto b = static_cast<long long>(std::floor((v - lo) / width));
        b = std::clamp<long long>(b, 0, static_cast<long long>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

double kl_divergence(const EmpiricalDist& e, const AnalyticDist& d,
                     std::size_t bins) {
    if (e.n() < 2 || e.stddev == 0.0)
        throw DegenerateDistribution("KL requires a non-degenerate empirical distribution");
    const Histogram h = histogram_against(e, d, bins);
    const double n = static_cast<double>(e.n());
    double kl = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        if (h.counts[b] == 0)
            continue;
        const double p = static_cast<double>(h.counts[b]) / n;
        double q = normal_cdf(h.edges[b + 1], d.mean, d.stddev()) -
                   normal_cdf(h.edges[b], d.mean, d.stddev());
        q = std::max(q, 1e-300);
        kl += p * std::log(p / q);
    }
    return kl;
}

KsResult ks_test(const EmpiricalDist& e, const AnalyticDist& d) {
    if (e.samples.empty())
        throw RawSamplesRequired("KS test requires raw samples");
    std::vector<double> sorted = e.samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i], d.mean, d.stddev());
        stat = std::max(stat, f - static_cast<double>(i) / n);
        stat = std::max(stat, static_cast<double>(i + 1) / n - f);
    }
    // asymptotic Kolmogorov tail, terms dropped below 1e-12
    const double lambda = std::sqrt(n) * stat;
    double p = 0.0;
    for (int j = 1; j <= 1000; ++j) {
        const double term = 2.0 * std::exp(-2.0 * lambda * lambda *
                                           static_cast<double>(j) * static_cast<double>(j));
        if (term < 1e-12)
            break;
        p += (j % 2 == 1) ? term : -term;
    }
    return {stat, std::clamp(p, 0.0, 1.0)};
}

StandardizedDiffs standardized_diffs(const AnalyticDist& d, const EmpiricalDist& e) {
    if (!(d.stddev() > 0.0) || !(e.stddev > 0.0))
        throw DegenerateDistribution("standardized differences need positive spreads");
    return {std::abs(d.mean - e.mean) / d.stddev(),
            std::abs(d.stddev() - e.stddev) / e.stddev};
}

} // namespace ssi
