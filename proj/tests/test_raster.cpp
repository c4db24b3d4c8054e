#include <doctest.h>

#include "ssi/errors.hpp"
#include "ssi/raster.hpp"
#include "ssi/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace ssi;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/ssi_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("CSV raster round-trip") {
    TempFile f("grid.csv");
    {
        std::ofstream out(f.path);
        out << "1,2\n3,4\n";
    }
    auto r = load_raster(f.path, RasterFormat::csv);
    CHECK(r.rows == 2);
    CHECK(r.cols == 2);
    CHECK(r.data == std::vector<double>{1, 2, 3, 4});

    TempFile g("grid2.csv");
    save_raster(r, g.path, RasterFormat::csv);
    auto back = load_raster(g.path, RasterFormat::csv);
    CHECK(back.data == r.data);
}

TEST_CASE("flat binary round-trip and error paths") {
    RasterGrid r;
    r.rows = 3;
    r.cols = 5;
    SplitMix64 rng(8);
    for (std::size_t i = 0; i < 15; ++i)
        r.data.push_back(static_cast<double>(rng.next_below(256)));
    TempFile f("grid.sras");
    save_raster(r, f.path, RasterFormat::flat_binary);
    auto back = load_raster(f.path, RasterFormat::flat_binary);
    CHECK(back.rows == 3);
    CHECK(back.cols == 5);
    CHECK(back.data == r.data);

    // payload shorter than rows*cols
    TempFile bad("bad.sras");
    {
        std::ofstream out(bad.path, std::ios::binary);
        out << "SRAS";
        const unsigned char hdr[8] = {2, 0, 0, 0, 2, 0, 0, 0};
        out.write(reinterpret_cast<const char*>(hdr), 8);
        out << "abc"; // 3 bytes instead of 4
    }
    CHECK_THROWS_AS(load_raster(bad.path, RasterFormat::flat_binary), FormatError);

    TempFile wrong("wrong.sras");
    {
        std::ofstream out(wrong.path, std::ios::binary);
        out << "NOPE";
    }
    CHECK_THROWS_AS(load_raster(wrong.path, RasterFormat::flat_binary), FormatError);
}

TEST_CASE("tiling counts and edge dropping") {
    RasterGrid r;
    r.rows = r.cols = 100;
    r.data.assign(100 * 100, 0.0);
    CHECK(tile(r, 100, 50).size() == 4);

    RasterGrid odd;
    odd.rows = 99;
    odd.cols = 100;
    odd.data.assign(99 * 100, 0.0);
    CHECK_THROWS_AS(tile(odd, 100, 50), InvalidTiling);

    RasterGrid wide;
    wide.rows = 100;
    wide.cols = 250;
    wide.data.assign(100 * 250, 0.0);
    // only two full 100x100 tiles fit horizontally
    CHECK(tile(wide, 100, 50).size() == 8);

    CHECK_THROWS_AS(tile(r, 100, 30), InvalidTiling);
}

TEST_CASE("patch partitioning preserves the data") {
    RasterGrid r;
    r.rows = r.cols = 4;
    for (int i = 0; i < 16; ++i)
        r.data.push_back(i);
    auto patches = tile(r, 4, 2);
    REQUIRE(patches.size() == 4);
    CHECK(patches[0].second.data == std::vector<double>{0, 1, 4, 5});
    CHECK(patches[1].second.data == std::vector<double>{2, 3, 6, 7});
    CHECK(patches[3].second.data == std::vector<double>{10, 11, 14, 15});
}

TEST_CASE("constant patches are flagged, not fatal") {
    RasterGrid p;
    p.rows = p.cols = 50;
    p.data.assign(2500, 0.0);
    auto rep = analyze_patch(p, {0, 0, 0, 0}, 20.0);
    CHECK(rep.zero_variance);
}

TEST_CASE("checkerboard patch sits near I = -1 on the bounded grid") {
    RasterGrid p;
    p.rows = p.cols = 50;
    for (std::size_t r = 0; r < 50; ++r)
        for (std::size_t c = 0; c < 50; ++c)
            p.data.push_back(static_cast<double>(((r + c) % 2) * 100));
    auto rep = analyze_patch(p, {0, 0, 0, 0}, 20.0);
    CHECK(!rep.zero_variance);
    CHECK(rep.moran_i <= -0.9);
    CHECK(rep.moran_i >= -1.0);
}

TEST_CASE("patch reports satisfy the density bound on J") {
    SplitMix64 rng(55);
    RasterGrid p;
    p.rows = p.cols = 50;
    for (std::size_t i = 0; i < 2500; ++i)
        p.data.push_back(static_cast<double>(rng.next_below(250)));
    auto rep = analyze_patch(p, {0, 0, 0, 0}, 20.0);
    CHECK(rep.self_information >=
          std::log(rep.sigma * std::sqrt(2 * M_PI)) - 1e-12);
    CHECK(rep.background_proportion > 0.0);
    CHECK(rep.background_proportion <= 1.0);
}

TEST_CASE("ranking filters and orders stably") {
    std::vector<PatchReport> reports(4);
    reports[0].id = {0, 0, 0, 0};
    reports[0].moran_i = 0.5;
    reports[0].self_information = 15.22;
    reports[0].background_proportion = 0.6;
    reports[1].id = {0, 0, 0, 1};
    reports[1].moran_i = 0.2;
    reports[1].self_information = 14.91;
    reports[1].background_proportion = 0.6;
    reports[2].id = {0, 0, 1, 0};
    reports[2].moran_i = 0.9;
    reports[2].self_information = 10.0;
    reports[2].background_proportion = 0.9; // filtered out
    reports[3].id = {0, 0, 1, 1};
    reports[3].zero_variance = true;

    auto by_j = rank_patches(reports, RankKey::self_information,
                             std::make_pair(0.55, 0.65));
    REQUIRE(by_j.size() == 2);
    CHECK(by_j[0].self_information == 14.91);
    CHECK(by_j[1].self_information == 15.22);
    // ease ratio between the two orderings' top observations
    CHECK(std::exp(by_j[1].self_information - by_j[0].self_information) ==
          doctest::Approx(1.363).epsilon(1e-2));

    auto by_i = rank_patches(reports, RankKey::moran_i, std::nullopt);
    REQUIRE(by_i.size() == 3);
    CHECK(by_i[0].moran_i == 0.2);
    CHECK(by_i[2].moran_i == 0.9);
}
