#pragma once

#include <cstdint>
#include <vector>

namespace ssi {

// Observed values, index-aligned with the companion graph's vertices.
struct Sample {
    std::vector<double> values;
};

// Distinct values of a sample with their multiplicities, sorted by value,
// plus the derived quantities everything downstream conditions on.
struct ValueScheme {
    struct Entry {
        double value;
        std::size_t count;
    };
    std::vector<Entry> entries;
    std::size_t n_total = 0;      // sum of counts
    double mean = 0.0;            // x-bar
    double sum_sq_dev = 0.0;      // SS
    std::size_t background_index = 0; // argmax count, ties to smaller value
    double background_proportion = 0.0;

    std::size_t m() const { return entries.size(); }
};

// Recomputes mean/SS/background bookkeeping from entries.
ValueScheme make_scheme(std::vector<ValueScheme::Entry> entries);

ValueScheme extract_scheme(const Sample& s);

// label = 1 + floor((v - origin)/bin_width), with the top label clamped so the
// domain maximum lands in the last full-or-partial bucket (a max sitting
// exactly on a bin edge is absorbed downward rather than opening a new bin).
Sample bucketize(const std::vector<double>& values, double bin_width, double origin);

// Uniform random arrangement of the scheme's multiset (Fisher-Yates).
Sample random_arrangement(const ValueScheme& scheme, std::size_t n_vertices,
                          std::uint64_t seed);

} // namespace ssi
