#include "ssi/scheme.hpp"
#include "ssi/errors.hpp"
#include "ssi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace ssi {

ValueScheme make_scheme(std::vector<ValueScheme::Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.value < b.value; });
    ValueScheme s;
    s.entries = std::move(entries);
    for (std::size_t p = 0; p < s.entries.size(); ++p) {
        const auto& e = s.entries[p];
        if (e.count == 0)
            throw SchemeSizeMismatch("scheme entry with zero count");
        if (p > 0 && !(s.entries[p - 1].value < e.value))
            throw InvalidValue("scheme values must be strictly increasing");
        s.n_total += e.count;
        if (e.count > s.entries[s.background_index].count)
            s.background_index = p; // ties stay at the smaller value
    }
    if (s.n_total == 0)
        throw EmptySample("empty value scheme");
    double sum = 0.0;
    for (const auto& e : s.entries)
        sum += e.value * static_cast<double>(e.count);
    s.mean = sum / static_cast<double>(s.n_total);
    for (const auto& e : s.entries) {
        const double d = e.value - s.mean;
        s.sum_sq_dev += d * d * static_cast<double>(e.count);
    }
    s.background_proportion =
        static_cast<double>(s.entries[s.background_index].count) /
        static_cast<double>(s.n_total);
    return s;
}

ValueScheme extract_scheme(const Sample& sample) {
    if (sample.values.empty())
        throw EmptySample("cannot extract scheme from empty sample");
    for (double v : sample.values)
        if (!std::isfinite(v))
            throw InvalidValue("non-finite sample value");
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<ValueScheme::Entry> entries;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i])
            ++j;
        entries.push_back({sorted[i], j - i});
        i = j;
    }
    auto scheme = make_scheme(std::move(entries));
    if (scheme.m() * 10 > scheme.n_total)
        std::cerr << "warning: " << scheme.m() << " distinct values over "
                  << scheme.n_total
                  << " observations; discrete-value approximation may degrade\n";
    return scheme;
}

Sample bucketize(const std::vector<double>& values, double bin_width, double origin) {
    if (!(bin_width > 0.0))
        throw InvalidValue("bin_width must be positive");
    double vmax = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (!std::isfinite(v))
            throw InvalidValue("non-finite value in bucketize input");
        vmax = std::max(vmax, v);
    }
    Sample out;
    out.values.reserve(values.size());
    if (values.empty())
        return out;
    // Number of buckets covering (origin, vmax]: a max exactly on a bin edge
    // does not open a bucket of its own.
    const double span = vmax - origin;
    long long last = std::max<long long>(1, static_cast<long long>(std::ceil(span / bin_width)));
    for (double v : values) {
        long long label = 1 + static_cast<long long>(std::floor((v - origin) / bin_width));
        out.values.push_back(static_cast<double>(std::min(label, last)));
    }
    return out;
}

Sample random_arrangement(const ValueScheme& scheme, std::size_t n_vertices,
                          std::uint64_t seed) {
    if (scheme.n_total != n_vertices)
        throw SchemeSizeMismatch("scheme size does not match vertex count");
    Sample s;
    s.values.reserve(n_vertices);
    for (const auto& e : scheme.entries)
        s.values.insert(s.values.end(), e.count, e.value);
    SplitMix64 rng(seed);
    shuffle(s.values, rng);
    return s;
}

} // namespace ssi
