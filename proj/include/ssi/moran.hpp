#pragma once

#include "ssi/graph.hpp"
#include "ssi/scheme.hpp"

#include <vector>

namespace ssi {

// |S_pq| cardinalities: counts[p][q] = number of directed edges (i,j) with
// x_i = c_p and x_j = c_q, indexed in sorted-scheme order.
struct PairCounts {
    std::size_t m = 0;
    std::vector<std::size_t> counts; // row-major m x m

    std::size_t at(std::size_t p, std::size_t q) const { return counts[p * m + q]; }
    std::size_t& at(std::size_t p, std::size_t q) { return counts[p * m + q]; }
    std::size_t row_sum(std::size_t p) const;
    std::size_t total() const;
};

PairCounts pair_counts(const Sample& s, const WeightGraph& g);

// I-bar = sum_ij w_ij (x_i - xbar)(x_j - xbar), by direct edge scan.
double unscaled_moran(const Sample& s, const WeightGraph& g);

// Same quantity assembled from pair-set cardinalities:
// sum_pq (c_p - xbar)(c_q - xbar) |S_pq|.
double unscaled_from_counts(const ValueScheme& scheme, const PairCounts& pc);

// I = (N / total_edges) * I-bar / SS.
double moran_i(const Sample& s, const WeightGraph& g);

// Background-rearranged form of I-bar (constant Q plus foreground-restricted
// sum); equal to unscaled_from_counts on any k-regular graph, for any r.
double foreground_identity_check(const ValueScheme& scheme, const PairCounts& pc,
                                 std::size_t r, double k);

} // namespace ssi
