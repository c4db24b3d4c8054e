#include <doctest.h>

#include "ssi/analytic.hpp"
#include "ssi/errors.hpp"

#include <cmath>

using namespace ssi;

namespace {

const ValueScheme kTwoValue = make_scheme({{0.0, 90}, {1.0, 10}});

} // namespace

TEST_CASE("pair moments of the worked two-value scheme") {
    auto pm = pair_moments(kTwoValue, 4.0, 100);
    CHECK(pm.mu(0, 1) == doctest::Approx(36.0).epsilon(1e-12));
    CHECK(pm.mu(1, 0) == doctest::Approx(36.0).epsilon(1e-12));
    CHECK(pm.mu(1, 1) == doctest::Approx(2.6).epsilon(1e-12));
    CHECK(pm.mu(0, 0) == doctest::Approx(319.4).epsilon(1e-12));
    CHECK(pm.sigma2(1, 1) == doctest::Approx(5.376).epsilon(1e-12));
}

TEST_CASE("degenerate same-value mean clamps at zero") {
    auto scheme = make_scheme({{0.0, 99}, {1.0, 1}});
    auto pm = pair_moments(scheme, 4.0, 100);
    CHECK(pm.mu(1, 1) == 0.0); // single vertex creates no same-value pairs
}

TEST_CASE("equal counts collapse min/max") {
    auto scheme = make_scheme({{0.0, 50}, {1.0, 50}});
    auto pm = pair_moments(scheme, 4.0, 100);
    CHECK(pm.mu(0, 1) == doctest::Approx(50.0 * 4.0 * 50.0 / 100.0).epsilon(1e-12));
}

TEST_CASE("approximate mean of the worked example") {
    CHECK(approx_mean(kTwoValue, 4.0) == doctest::Approx(-1.18).epsilon(1e-12));

    auto single = make_scheme({{5.0, 100}});
    CHECK(approx_mean(single, 4.0) == doctest::Approx(0.0));
}

TEST_CASE("approximate variance of the worked example") {
    CHECK(approx_variance(kTwoValue, 4.0) == doctest::Approx(5.376).epsilon(1e-12));
    CHECK_THROWS_AS(approx_variance(make_scheme({{5.0, 100}}), 4.0), DegenerateScheme);
}

TEST_CASE("three-value variance matches an independent re-evaluation") {
    auto scheme = make_scheme({{0.0, 980}, {1.0, 10}, {2.0, 10}});
    const double k = 4.0, n = 1000.0;
    const double xbar = scheme.mean;
    // direct transcription of the variance formula, assembled separately
    const double d1 = 1.0 - xbar, d2 = 2.0 - xbar, dr = 0.0 - xbar;
    const double s12 = 10.0 * (k * 10.0 / n) * (1.0 - k * 10.0 / n);
    const double s11 = 2.0 * 9.0 * (k * 10.0 / n) * (1.0 - k * 19.0 / (3.0 * n));
    const double coef12 = d1 * d2 - 2.0 * d1 * dr + dr * dr;
    const double coef21 = d2 * d1 - 2.0 * d2 * dr + dr * dr;
    const double expected = coef12 * coef12 * s12 + coef21 * coef21 * s12 +
                            std::pow(1.0 - 0.0, 4) * s11 + std::pow(2.0 - 0.0, 4) * s11;
    CHECK(approx_variance(scheme, k) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("delta_n scaling follows the actual edge count") {
    auto pm = pair_moments(kTwoValue, 4.0, 100);
    auto same = apply_delta_correction(kTwoValue, 0, 4.0);
    CHECK(same.mu(0, 1) == doctest::Approx(pm.mu(0, 1)));
    CHECK(same.sigma2(1, 1) == doctest::Approx(pm.sigma2(1, 1)));

    // 10 of the nominal 400 edges missing -> f = 0.975, effective degree 3.9
    auto scaled = apply_delta_correction(kTwoValue, -10, 4.0);
    CHECK(scaled.mu(0, 1) == doctest::Approx(36.0 * 0.975).epsilon(1e-12));
    CHECK(scaled.sigma2(1, 1) ==
          doctest::Approx(2.0 * 9.0 * 0.39 * (1.0 - 3.9 * 19.0 / 300.0)).epsilon(1e-12));

    CHECK_THROWS_AS(apply_delta_correction(kTwoValue, -400, 4.0), CorrectionInfeasible);
}

TEST_CASE("common-neighbor correction undoes the continuity shift") {
    auto pm = pair_moments(kTwoValue, 4.0, 100);
    auto corrected = apply_common_neighbor_correction(pm);
    CHECK(corrected.mu(0, 0) == doctest::Approx(320.4).epsilon(1e-12));
    CHECK(corrected.mu(1, 1) == doctest::Approx(3.6).epsilon(1e-12));
    CHECK(corrected.sigma2(1, 1) == doctest::Approx(pm.sigma2(1, 1)));

    // clamped-to-zero entries stay put
    auto singleton = pair_moments(make_scheme({{0.0, 99}, {1.0, 1}}), 4.0, 100);
    auto c2 = apply_common_neighbor_correction(singleton);
    CHECK(c2.mu(1, 1) == 0.0);
}

TEST_CASE("analytic distribution composes the worked examples") {
    auto d = analytic_distribution(kTwoValue, 4.0);
    CHECK(d.mean == doctest::Approx(-1.18).epsilon(1e-12));
    CHECK(d.variance == doctest::Approx(5.376).epsilon(1e-12));

    AnalyticOptions cn;
    cn.corrections.common_neighbor = true;
    auto dc = analytic_distribution(kTwoValue, 4.0, cn);
    // mean shifts linearly by sum of (c_p - xbar)^2 over corrected entries
    CHECK(dc.mean == doctest::Approx(-1.18 + 0.01 + 0.81).epsilon(1e-9));
    CHECK(dc.variance == doctest::Approx(d.variance));

    CHECK_THROWS_AS(analytic_distribution(make_scheme({{5.0, 100}}), 4.0),
                    DegenerateScheme);
}

TEST_CASE("self-information closed forms") {
    auto d = analytic_distribution(kTwoValue, 4.0);
    const double sigma = d.stddev();
    CHECK(self_information(d.mean, d) ==
          doctest::Approx(std::log(sigma * std::sqrt(2 * M_PI))).epsilon(1e-12));
    CHECK(self_information(d.mean + sigma, d) - self_information(d.mean, d) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // density-ratio reading of a surprisal gap
    CHECK(std::exp(15.22 - 14.91) == doctest::Approx(1.363).epsilon(1e-3));
}

TEST_CASE("J is minimized at the mean and grows with distance") {
    auto d = analytic_distribution(kTwoValue, 4.0);
    const double j0 = self_information(d.mean, d);
    double prev = j0;
    for (double step = 0.5; step < 5.0; step += 0.5) {
        const double j = self_information(d.mean + step * d.stddev(), d);
        CHECK(j > prev);
        CHECK(self_information(d.mean - step * d.stddev(), d) == doctest::Approx(j));
        prev = j;
    }
}

TEST_CASE("tail probabilities") {
    auto d = analytic_distribution(kTwoValue, 4.0);
    CHECK(tail_probability(d.mean, d, TailSide::two) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tail_probability(d.mean, d, TailSide::upper) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tail_probability(d.mean + 1.959964 * d.stddev(), d, TailSide::two) ==
          doctest::Approx(0.05).epsilon(1e-4));
}

TEST_CASE("affine value rescaling scales mu by a^2 and sigma2 by a^4") {
    auto base = make_scheme({{0.0, 80}, {1.0, 12}, {3.0, 8}});
    const double a = 2.5, b = -7.0;
    std::vector<ValueScheme::Entry> entries;
    for (const auto& e : base.entries)
        entries.push_back({a * e.value + b, e.count});
    auto scaled = make_scheme(std::move(entries));
    CHECK(approx_mean(scaled, 4.0) ==
          doctest::Approx(a * a * approx_mean(base, 4.0)).epsilon(1e-12));
    CHECK(approx_variance(scaled, 4.0) ==
          doctest::Approx(a * a * a * a * approx_variance(base, 4.0)).epsilon(1e-12));
}

TEST_CASE("cross-variance uses the symmetric min/max form") {
    // the alternative reading n_q*(k n_p/N)*(1 - k n_p/N) is order-dependent;
    // the implemented form is symmetric in (p,q)
    auto scheme = make_scheme({{0.0, 70}, {1.0, 20}, {2.0, 10}});
    auto pm = pair_moments(scheme, 4.0, 100);
    CHECK(pm.sigma2(1, 2) == doctest::Approx(pm.sigma2(2, 1)));
    const double stmt_12 = 10.0 * (4.0 * 20.0 / 100.0) * (1.0 - 4.0 * 20.0 / 100.0);
    const double stmt_21 = 20.0 * (4.0 * 10.0 / 100.0) * (1.0 - 4.0 * 10.0 / 100.0);
    CHECK(stmt_12 != stmt_21);
    CHECK(pm.sigma2(1, 2) == doctest::Approx(stmt_12).epsilon(1e-12));
}
