#include <doctest.h>

#include "ssi/errors.hpp"
#include "ssi/rng.hpp"
#include "ssi/scheme.hpp"

#include <cmath>
#include <map>

using namespace ssi;

TEST_CASE("extract_scheme counts distinct values") {
    auto s = extract_scheme(Sample{{0, 0, 1}});
    REQUIRE(s.m() == 2);
    CHECK(s.entries[0].value == 0);
    CHECK(s.entries[0].count == 2);
    CHECK(s.entries[1].count == 1);
    CHECK(s.mean == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(s.sum_sq_dev == doctest::Approx(2.0 / 3).epsilon(1e-12));

    auto c = extract_scheme(Sample{{5, 5, 5, 5}});
    CHECK(c.m() == 1);
    CHECK(c.sum_sq_dev == 0.0);

    auto t = extract_scheme(Sample{{2, 0, 1, 0}});
    REQUIRE(t.m() == 3);
    CHECK(t.entries[0].count == 2);
    CHECK(t.mean == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(t.sum_sq_dev == doctest::Approx(2.75).epsilon(1e-12));
    CHECK(t.background_index == 0);

    CHECK_THROWS_AS(extract_scheme(Sample{}), EmptySample);
    CHECK_THROWS_AS(extract_scheme(Sample{{1.0, std::nan("")}}), InvalidValue);
}

TEST_CASE("background argmax ties break toward the smaller value") {
    auto s = make_scheme({{3.0, 5}, {1.0, 5}, {2.0, 4}});
    CHECK(s.entries[s.background_index].value == 1.0);
}

TEST_CASE("bucketize reproduces the fixed-width labels") {
    // slope-style domain 0..250, width 20: labels 1..13, max absorbed
    std::vector<double> v{0, 19, 20, 239.9, 240, 250};
    auto s = bucketize(v, 20.0, 0.0);
    CHECK(s.values == std::vector<double>{1, 1, 2, 12, 13, 13});

    // max sitting exactly on a bin edge is absorbed into the last bucket
    auto t = bucketize({0, 100, 240}, 20.0, 0.0);
    CHECK(t.values[2] == 12);

    CHECK_THROWS_AS(bucketize({1.0, std::nan("")}, 20.0, 0.0), InvalidValue);
    CHECK_THROWS_AS(bucketize({1.0}, 0.0, 0.0), InvalidValue);
}

TEST_CASE("bucketize is monotone in v") {
    std::vector<double> v;
    for (int i = 0; i <= 500; ++i)
        v.push_back(i * 0.5);
    auto s = bucketize(v, 20.0, 0.0);
    for (std::size_t i = 1; i < s.values.size(); ++i)
        CHECK(s.values[i] >= s.values[i - 1]);
}

TEST_CASE("random_arrangement permutes the multiset") {
    auto single = make_scheme({{7.0, 4}});
    CHECK(random_arrangement(single, 4, 123).values == std::vector<double>{7, 7, 7, 7});

    auto scheme = make_scheme({{0.0, 3}, {1.0, 2}, {2.0, 5}});
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        auto arr = random_arrangement(scheme, 10, seed);
        auto back = extract_scheme(arr);
        REQUIRE(back.m() == scheme.m());
        for (std::size_t p = 0; p < scheme.m(); ++p) {
            CHECK(back.entries[p].value == scheme.entries[p].value);
            CHECK(back.entries[p].count == scheme.entries[p].count);
        }
    }

    CHECK_THROWS_AS(random_arrangement(scheme, 11, 1), SchemeSizeMismatch);
}

TEST_CASE("arrangements are uniform over the 6 permutations of {0,0,1,1}") {
    auto scheme = make_scheme({{0.0, 2}, {1.0, 2}});
    std::map<std::vector<double>, int> freq;
    const int draws = 60000;
    for (int i = 0; i < draws; ++i)
        ++freq[random_arrangement(scheme, 4, substream(77, i)).values];
    REQUIRE(freq.size() == 6);
    // 3 sigma multinomial band around draws/6
    const double expect = draws / 6.0;
    const double sigma = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
    for (const auto& [arr, n] : freq)
        CHECK(std::abs(n - expect) < 3 * sigma);
}
