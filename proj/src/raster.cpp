#include "ssi/raster.hpp"
#include "ssi/analytic.hpp"
#include "ssi/errors.hpp"
#include "ssi/moran.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ssi {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'A', 'S'};

std::uint32_t read_u32_le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b, 4);
}

RasterGrid load_csv(std::istream& in) {
    RasterGrid r;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                r.data.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FormatError("non-numeric CSV cell: " + cell);
            }
            ++cols;
        }
        if (r.rows == 0)
            r.cols = cols;
        else if (cols != r.cols)
            throw FormatError("ragged CSV rows");
        ++r.rows;
    }
    if (r.rows == 0)
        throw FormatError("empty CSV raster");
    for (double v : r.data)
        if (!std::isfinite(v))
            throw FormatError("non-finite raster value");
    return r;
}

RasterGrid load_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("bad magic; expected SRAS");
    RasterGrid r;
    r.rows = read_u32_le(in);
    r.cols = read_u32_le(in);
    if (!in)
        throw FormatError("truncated SRAS header");
    const std::size_t n = r.rows * r.cols;
    std::vector<unsigned char> payload(n);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw FormatError("SRAS payload shorter than rows*cols");
    if (in.peek() != std::istream::traits_type::eof())
        throw FormatError("SRAS payload longer than rows*cols");
    r.data.assign(payload.begin(), payload.end());
    return r;
}

} // namespace

RasterGrid load_raster(const std::string& path, RasterFormat format) {
    std::ifstream in(path, format == RasterFormat::flat_binary
                               ? std::ios::binary
                               : std::ios::in);
    if (!in)
        throw FormatError("cannot open raster file: " + path);
    return format == RasterFormat::csv ? load_csv(in) : load_binary(in);
}

void save_raster(const RasterGrid& r, const std::string& path, RasterFormat format) {
    if (r.data.size() != r.rows * r.cols)
        throw FormatError("raster shape does not match payload");
    if (format == RasterFormat::csv) {
        std::ofstream out(path);
        if (!out)
            throw FormatError("cannot write raster file: " + path);
        out.precision(17);
        for (std::size_t i = 0; i < r.rows; ++i) {
            for (std::size_t j = 0; j < r.cols; ++j)
                out << (j ? "," : "") << r.at(i, j);
            out << '\n';
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot write raster file: " + path);
    out.write(kMagic, 4);
    write_u32_le(out, static_cast<std::uint32_t>(r.rows));
    write_u32_le(out, static_cast<std::uint32_t>(r.cols));
    for (double v : r.data) {
        if (v < 0.0 || v > 255.0 || v != std::floor(v))
            throw FormatError("flat_binary payload requires integer values in [0,255]");
        const auto b = static_cast<unsigned char>(v);
        out.write(reinterpret_cast<const char*>(&b), 1);
    }
}

std::vector<std::pair<PatchId, RasterGrid>> tile(const RasterGrid& r,
                                                 std::size_t tile_size,
                                                 std::size_t patch_size) {
    if (tile_size == 0 || patch_size == 0 || tile_size % patch_size != 0)
        throw InvalidTiling("patch size must divide tile size");
    if (tile_size > r.rows || tile_size > r.cols)
        throw InvalidTiling("tile larger than raster");
    const std::size_t tiles_r = r.rows / tile_size;
    const std::size_t tiles_c = r.cols / tile_size;
    const std::size_t per_tile = tile_size / patch_size;
    std::vector<std::pair<PatchId, RasterGrid>> out;
    for (std::size_t tr = 0; tr < tiles_r; ++tr)
        for (std::size_t tc = 0; tc < tiles_c; ++tc)
            for (std::size_t pr = 0; pr < per_tile; ++pr)
                for (std::size_t pc = 0; pc < per_tile; ++pc) {
                    RasterGrid patch;
                    patch.rows = patch.cols = patch_size;
                    patch.data.reserve(patch_size * patch_size);
                    const std::size_t r0 = tr * tile_size + pr * patch_size;
                    const std::size_t c0 = tc * tile_size + pc * patch_size;
                    for (std::size_t i = 0; i < patch_size; ++i)
                        for (std::size_t j = 0; j < patch_size; ++j)
                            patch.data.push_back(r.at(r0 + i, c0 + j));
                    out.emplace_back(PatchId{tr, tc, pr, pc}, std::move(patch));
                }
    return out;
}

PatchReport analyze_patch(const RasterGrid& patch, const PatchId& id,
                          double bin_width, Contiguity contiguity,
                          double bucket_origin) {
    PatchReport rep;
    rep.id = id;
    const Sample s = bucketize(patch.data, bin_width, bucket_origin);
    const auto scheme = extract_scheme(s);
    rep.m = scheme.m();
    rep.background_proportion = scheme.background_proportion;
    if (scheme.m() < 2 || scheme.sum_sq_dev <= 0.0) {
        rep.zero_variance = true;
        return rep;
    }
    const auto g = build_bounded_grid(patch.rows, patch.cols, contiguity);
    rep.i_bar = unscaled_moran(s, g);
    rep.moran_i = (static_cast<double>(g.n_vertices()) /
                   static_cast<double>(g.total_edges())) *
                  rep.i_bar / scheme.sum_sq_dev;
    AnalyticOptions opt;
    opt.corrections.delta_n_scaling = true;
    opt.delta_n = g.delta_n();
    try {
        const auto d = analytic_distribution(scheme, g.k_nominal(), opt);
        rep.mu = d.mean;
        rep.sigma = d.stddev();
        rep.self_information = self_information(rep.i_bar, d);
        rep.tail_p = tail_probability(rep.i_bar, d, TailSide::two);
    } catch (const DegenerateScheme&) {
        // near-balanced schemes can clamp the variance terms to zero; keep
        // the observed statistic but mark the patch as having no usable law
        rep.degenerate_law = true;
    }
    return rep;
}

std::vector<PatchReport> rank_patches(std::vector<PatchReport> reports, RankKey by,
                                      std::optional<std::pair<double, double>> b_filter) {
    std::erase_if(reports, [&](const PatchReport& r) {
        if (r.zero_variance || r.degenerate_law)
            return true;
        if (b_filter && (r.background_proportion < b_filter->first ||
                         r.background_proportion > b_filter->second))
            return true;
        return false;
    });
    std::stable_sort(reports.begin(), reports.end(),
                     [by](const PatchReport& a, const PatchReport& b) {
                         const double ka = by == RankKey::moran_i ? a.moran_i : a.self_information;
                         const double kb = by == RankKey::moran_i ? b.moran_i : b.self_information;
                         if (ka != kb)
                             return ka < kb;
                         return a.id < b.id;
                     });
    return reports;
}

} // namespace ssi
