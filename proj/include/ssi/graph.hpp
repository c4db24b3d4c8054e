#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ssi {

enum class Contiguity { rook, queen };

// Directed binary spatial-weight graph in compressed row form.
// Immutable after construction; neighbor lists are sorted and duplicate-free,
// no self-loops. delta_n tracks the deviation from nominal regularity.
class WeightGraph {
public:
    WeightGraph(std::size_t n_vertices, int k_nominal,
                std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

    std::size_t n_vertices() const { return n_vertices_; }
    int k_nominal() const { return k_nominal_; }
    std::size_t total_edges() const { return neighbors_.size(); }
    long long delta_n() const {
        return static_cast<long long>(total_edges()) -
               static_cast<long long>(k_nominal_) * static_cast<long long>(n_vertices_);
    }

    std::span<const std::uint32_t> offsets() const { return offsets_; }
    std::span<const std::uint32_t> neighbors() const { return neighbors_; }
    std::span<const std::uint32_t> out_neighbors(std::size_t i) const {
        return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
    }
    std::size_t out_degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
    bool has_edge(std::uint32_t i, std::uint32_t j) const;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list() const;

private:
    std::size_t n_vertices_;
    int k_nominal_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
};

// Wrap-around grid; exactly k-regular (k = 4 rook, 8 queen), symmetric.
WeightGraph build_torus_grid(std::size_t rows, std::size_t cols, Contiguity c);

// Non-wrapping grid; borders fall short of k_nominal, delta_n < 0.
WeightGraph build_bounded_grid(std::size_t rows, std::size_t cols, Contiguity c);

// Flip floor(rho*k*N) present and equally many absent weight-matrix entries.
// Preserves total_edges; may break symmetry.
WeightGraph perturb_balanced(const WeightGraph& g, double rho, std::uint64_t seed);

// Add (delta > 0) or remove (delta < 0) exactly |delta| directed edges.
WeightGraph perturb_systematic(const WeightGraph& g, long long delta, std::uint64_t seed);

// Edge-list text format: header "N k_nominal", then one "i j" per line.
void save_graph(const WeightGraph& g, std::ostream& out);
WeightGraph load_graph(std::istream& in);

} // namespace ssi
