#include "ssi/graph.hpp"
#include "ssi/errors.hpp"
#include "ssi/rng.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace ssi {

namespace {

std::uint64_t pair_key(std::uint32_t i, std::uint32_t j) {
    return (static_cast<std::uint64_t>(i) << 32) | j;
}

} // namespace

WeightGraph::WeightGraph(std::size_t n_vertices, int k_nominal,
                         std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : n_vertices_(n_vertices), k_nominal_(k_nominal) {
    offsets_.assign(n_vertices + 1, 0);
    for (auto [i, j] : edges) {
        if (i >= n_vertices || j >= n_vertices)
            throw InvalidIndex("edge endpoint out of range");
        if (i == j)
            throw InvalidValue("self-loop rejected");
        ++offsets_[i + 1];
    }
    for (std::size_t i = 0; i < n_vertices; ++i)
        offsets_[i + 1] += offsets_[i];
    neighbors_.resize(edges.size());
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [i, j] : edges)
        neighbors_[cursor[i]++] = j;
    for (std::size_t i = 0; i < n_vertices; ++i) {
        auto* begin = neighbors_.data() + offsets_[i];
        auto* end = neighbors_.data() + offsets_[i + 1];
        std::sort(begin, end);
        if (std::adjacent_find(begin, end) != end)
            throw InvalidValue("duplicate directed edge rejected");
    }
}

bool WeightGraph::has_edge(std::uint32_t i, std::uint32_t j) const {
    auto nb = out_neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> WeightGraph::edge_list() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(total_edges());
    for (std::uint32_t i = 0; i < n_vertices_; ++i)
        for (std::uint32_t j : out_neighbors(i))
            edges.emplace_back(i, j);
    return edges;
}

namespace {

WeightGraph build_grid(std::size_t rows, std::size_t cols, Contiguity c, bool torus) {
    const int k = (c == Contiguity::rook) ? 4 : 8;
    const auto n = rows * cols;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(n * static_cast<std::size_t>(k));
    static constexpr int dr_rook[] = {-1, 1, 0, 0};
    static constexpr int dc_rook[] = {0, 0, -1, 1};
    static constexpr int dr_queen[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    static constexpr int dc_queen[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    const int* dr = (c == Contiguity::rook) ? dr_rook : dr_queen;
    const int* dc = (c == Contiguity::rook) ? dc_rook : dc_queen;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t cc = 0; cc < cols; ++cc) {
            for (int d = 0; d < k; ++d) {
                long long nr = static_cast<long long>(r) + dr[d];
                long long nc = static_cast<long long>(cc) + dc[d];
                if (torus) {
                    nr = (nr + static_cast<long long>(rows)) % static_cast<long long>(rows);
                    nc = (nc + static_cast<long long>(cols)) % static_cast<long long>(cols);
                } else if (nr < 0 || nr >= static_cast<long long>(rows) ||
                           nc < 0 || nc >= static_cast<long long>(cols)) {
                    continue;
                }
                edges.emplace_back(static_cast<std::uint32_t>(r * cols + cc),
                                   static_cast<std::uint32_t>(nr * cols + nc));
            }
        }
    }
    return WeightGraph(n, k, std::move(edges));
}

} // namespace

WeightGraph build_torus_grid(std::size_t rows, std::size_t cols, Contiguity c) {
    if (rows < 3 || cols < 3)
        throw InvalidDimension("torus grid requires rows >= 3 and cols >= 3");
    return build_grid(rows, cols, c, true);
}

WeightGraph build_bounded_grid(std::size_t rows, std::size_t cols, Contiguity c) {
    if (rows < 2 || cols < 2)
        throw InvalidDimension("bounded grid requires rows >= 2 and cols >= 2");
    return build_grid(rows, cols, c, false);
}

namespace {

// Draw `count` distinct absent non-diagonal entries, disjoint from `present`.
std::vector<std::pair<std::uint32_t, std::uint32_t>>
draw_absent(const WeightGraph& g, std::size_t count, SplitMix64& rng) {
    const auto n = static_cast<std::uint64_t>(g.n_vertices());
    std::unordered_set<std::uint64_t> chosen;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(count);
    while (out.size() < count) {
        auto i = static_cast<std::uint32_t>(rng.next_below(n));
        auto j = static_cast<std::uint32_t>(rng.next_below(n));
        if (i == j || g.has_edge(i, j))
            continue;
        if (!chosen.insert(pair_key(i, j)).second)
            continue;
        out.emplace_back(i, j);
    }
    return out;
}

// Partial Fisher-Yates: the first `count` positions of a random permutation.
std::vector<std::size_t> draw_positions(std::size_t total, std::size_t count,
                                        SplitMix64& rng) {
    std::vector<std::size_t> idx(total);
    for (std::size_t i = 0; i < total; ++i)
        idx[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(total - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    return idx;
}

} // namespace

WeightGraph perturb_balanced(const WeightGraph& g, double rho, std::uint64_t seed) {
    if (rho < 0.0 || rho >= 1.0)
        throw PerturbationInfeasible("rho must be in [0,1)");
    const auto flips = static_cast<std::size_t>(
        rho * static_cast<double>(g.k_nominal()) * static_cast<double>(g.n_vertices()));
    if (flips == 0)
        return WeightGraph(g.n_vertices(), g.k_nominal(), g.edge_list());
    const std::size_t absent =
        g.n_vertices() * (g.n_vertices() - 1) - g.total_edges();
    if (flips > g.total_edges() || flips > absent)
        throw PerturbationInfeasible("flip count exceeds present or absent entries");

    SplitMix64 rng(substream(seed, 0x62616Cu)); // "bal"
    const auto edges = g.edge_list();

    // Rewire reciprocal pairs together: flipping single directed entries
    // would de-symmetrize the adjacency, which by itself shrinks the
    // permutation variance and confounds what the perturbation measures.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs, singles;
    for (auto [i, j] : edges) {
        if (!g.has_edge(j, i))
            singles.emplace_back(i, j);
        else if (i < j)
            pairs.emplace_back(i, j);
    }

    const std::size_t whole = std::min(flips / 2, pairs.size());
    std::size_t rest = flips - 2 * whole;
    const bool half_pair = rest > 0 && whole < pairs.size();
    std::unordered_set<std::uint64_t> dropped;
    auto sel = draw_positions(pairs.size(), whole + (half_pair ? 1 : 0), rng);
    for (std::size_t t = 0; t < whole; ++t) {
        const auto [i, j] = pairs[sel[t]];
        dropped.insert(pair_key(i, j));
        dropped.insert(pair_key(j, i));
    }
    if (half_pair) {
        const auto [i, j] = pairs[sel[whole]];
        dropped.insert(pair_key(i, j));
        --rest;
    }
    if (rest > 0) {
        if (rest > singles.size())
            throw PerturbationInfeasible("flip count not representable on this graph");
        for (std::size_t pos : draw_positions(singles.size(), rest, rng))
            dropped.insert(pair_key(singles[pos].first, singles[pos].second));
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> next;
    next.reserve(edges.size());
    for (auto [i, j] : edges)
        if (!dropped.contains(pair_key(i, j)))
            next.emplace_back(i, j);

    // additions mirror the removals: symmetric pairs, one direction if odd
    std::unordered_set<std::uint64_t> chosen;
    std::size_t to_add = flips;
    const auto n = static_cast<std::uint64_t>(g.n_vertices());
    while (to_add > 0) {
        const auto i = static_cast<std::uint32_t>(rng.next_below(n));
        const auto j = static_cast<std::uint32_t>(rng.next_below(n));
        if (i == j || g.has_edge(i, j) || g.has_edge(j, i))
            continue;
        if (!chosen.insert(pair_key(i, j)).second || !chosen.insert(pair_key(j, i)).second)
            continue;
        next.emplace_back(i, j);
        --to_add;
        if (to_add > 0) {
            next.emplace_back(j, i);
            --to_add;
        }
    }
    return WeightGraph(g.n_vertices(), g.k_nominal(), std::move(next));
}

WeightGraph perturb_systematic(const WeightGraph& g, long long delta, std::uint64_t seed) {
    const auto total = static_cast<long long>(g.total_edges());
    const auto capacity = static_cast<long long>(g.n_vertices()) *
                          static_cast<long long>(g.n_vertices() - 1);
    if (delta < -total || delta > capacity - total)
        throw PerturbationInfeasible("delta outside feasible edge-count range");
    if (delta == 0)
        return WeightGraph(g.n_vertices(), g.k_nominal(), g.edge_list());

    SplitMix64 rng(substream(seed, 0x737973u)); // "sys"
    auto edges = g.edge_list();
    if (delta > 0) {
        for (auto e : draw_absent(g, static_cast<std::size_t>(delta), rng))
            edges.push_back(e);
    } else {
        auto removed = draw_positions(edges.size(), static_cast<std::size_t>(-delta), rng);
        std::sort(removed.begin(), removed.end(), std::greater<>());
        for (std::size_t pos : removed) {
            edges[pos] = edges.back();
            edges.pop_back();
        }
    }
    return WeightGraph(g.n_vertices(), g.k_nominal(), std::move(edges));
}

void save_graph(const WeightGraph& g, std::ostream& out) {
    out << g.n_vertices() << ' ' << g.k_nominal() << '\n';
    for (std::uint32_t i = 0; i < g.n_vertices(); ++i)
        for (std::uint32_t j : g.out_neighbors(i))
            out << i << ' ' << j << '\n';
}

WeightGraph load_graph(std::istream& in) {
    std::size_t n;
    int k;
    if (!(in >> n >> k))
        throw FormatError("graph header must be 'N k_nominal'");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::uint32_t i, j;
    while (in >> i >> j)
        edges.emplace_back(i, j);
    return WeightGraph(n, k, std::move(edges));
}

} // namespace ssi
