#pragma once

#include "ssi/graph.hpp"
#include "ssi/scheme.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ssi {

enum class RasterFormat { csv, flat_binary };

struct RasterGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // row-major

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct PatchId {
    std::size_t tile_row, tile_col, patch_row, patch_col;

    bool operator==(const PatchId&) const = default;
    auto operator<=>(const PatchId&) const = default;
};

struct PatchReport {
    PatchId id;
    std::size_t m = 0;                // distinct bucket values
    double background_proportion = 0.0;
    bool zero_variance = false;       // constant after bucketization
    bool degenerate_law = false;      // clamping collapsed the analytic variance
    double moran_i = 0.0;
    double i_bar = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double self_information = 0.0;
    double tail_p = 0.0;
};

RasterGrid load_raster(const std::string& path, RasterFormat format);
void save_raster(const RasterGrid& r, const std::string& path, RasterFormat format);

// Non-overlapping `patch` x `patch` windows inside `tile` x `tile` tiles,
// row-major; partial edge tiles are dropped. patch must divide tile.
std::vector<std::pair<PatchId, RasterGrid>> tile(const RasterGrid& r,
                                                 std::size_t tile_size,
                                                 std::size_t patch_size);

// Bucketize, build a bounded grid, compute the statistic and the
// delta_n-corrected analytic law, and evaluate the surprisal.
PatchReport analyze_patch(const RasterGrid& patch, const PatchId& id,
                          double bin_width, Contiguity contiguity = Contiguity::rook,
                          double bucket_origin = 0.0);

enum class RankKey { moran_i, self_information };

// Stable ascending sort on the chosen key after the optional background
// filter; zero-variance patches are excluded; ties broken by patch id.
std::vector<PatchReport> rank_patches(std::vector<PatchReport> reports, RankKey by,
                                      std::optional<std::pair<double, double>> b_filter = {});

} // namespace ssi
