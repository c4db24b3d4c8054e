#include "ssi/moran.hpp"
#include "ssi/errors.hpp"
#include "ssi/kernels.hpp"

#include <algorithm>
#include <numeric>

namespace ssi {

std::size_t PairCounts::row_sum(std::size_t p) const {
    std::size_t s = 0;
    for (std::size_t q = 0; q < m; ++q)
        s += at(p, q);
    return s;
}

std::size_t PairCounts::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

namespace {

// Map each vertex value to its index in the sorted scheme.
std::vector<std::uint32_t> value_indices(const Sample& s, const ValueScheme& scheme) {
    std::vector<double> values;
    values.reserve(scheme.m());
    for (const auto& e : scheme.entries)
        values.push_back(e.value);
    std::vector<std::uint32_t> idx(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        auto it = std::lower_bound(values.begin(), values.end(), s.values[i]);
        idx[i] = static_cast<std::uint32_t>(it - values.begin());
    }
    return idx;
}

} // namespace

PairCounts pair_counts(const Sample& s, const WeightGraph& g) {
    if (s.values.size() != g.n_vertices())
        throw SchemeSizeMismatch("sample length does not match graph size");
    const auto scheme = extract_scheme(s);
    const auto idx = value_indices(s, scheme);
    PairCounts pc;
    pc.m = scheme.m();
    pc.counts.assign(pc.m * pc.m, 0);
    for (std::uint32_t i = 0; i < g.n_vertices(); ++i)
        for (std::uint32_t j : g.out_neighbors(i))
            ++pc.at(idx[i], idx[j]);
    return pc;
}

double unscaled_moran(const Sample& s, const WeightGraph& g) {
    if (s.values.size() != g.n_vertices())
        throw SchemeSizeMismatch("sample length does not match graph size");
    const double n = static_cast<double>(s.values.size());
    double mean = 0.0;
    for (double v : s.values)
        mean += v;
    mean /= n;
    std::vector<double> dev(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i)
        dev[i] = s.values[i] - mean;
    return kernels::edge_sum(g.offsets(), g.neighbors(), dev);
}

double unscaled_from_counts(const ValueScheme& scheme, const PairCounts& pc) {
    if (pc.m != scheme.m())
        throw SchemeSizeMismatch("pair counts dimension does not match scheme");
    double sum = 0.0;
    for (std::size_t p = 0; p < pc.m; ++p) {
        const double dp = scheme.entries[p].value - scheme.mean;
        for (std::size_t q = 0; q < pc.m; ++q) {
            const double dq = scheme.entries[q].value - scheme.mean;
            sum += dp * dq * static_cast<double>(pc.at(p, q));
        }
    }
    return sum;
}

double moran_i(const Sample& s, const WeightGraph& g) {
    const auto scheme = extract_scheme(s);
    if (scheme.sum_sq_dev <= 0.0)
        throw ZeroVariance("constant sample has zero variance");
    const double i_bar = unscaled_moran(s, g);
    return (static_cast<double>(g.n_vertices()) /
            static_cast<double>(g.total_edges())) *
           i_bar / scheme.sum_sq_dev;
}

double foreground_identity_check(const ValueScheme& scheme, const PairCounts& pc,
                                 std::size_t r, double k) {
    if (r >= scheme.m())
        throw InvalidIndex("background index out of range");
    if (pc.m != scheme.m())
        throw SchemeSizeMismatch("pair counts dimension does not match scheme");
    const double dr = scheme.entries[r].value - scheme.mean;
    const double n = static_cast<double>(scheme.n_total);
    double q_const = dr * dr * k * n;
    for (std::size_t p = 0; p < scheme.m(); ++p) {
        if (p == r)
            continue;
        const double dp = scheme.entries[p].value - scheme.mean;
        q_const += 2.0 * (dp * dr - dr * dr) * k *
                   static_cast<double>(scheme.entries[p].count);
    }
    double sum = q_const;
    for (std::size_t p = 0; p < scheme.m(); ++p) {
        if (p == r)
            continue;
        const double dp = scheme.entries[p].value - scheme.mean;
        for (std::size_t q = 0; q < scheme.m(); ++q) {
            if (q == r)
                continue;
            const double dq = scheme.entries[q].value - scheme.mean;
            sum += (dp * dq - 2.0 * dp * dr + dr * dr) *
                   static_cast<double>(pc.at(p, q));
        }
    }
    return sum;
}

} // namespace ssi
