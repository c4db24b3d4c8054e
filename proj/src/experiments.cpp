#include "ssi/experiments.hpp"
#include "ssi/errors.hpp"
#include "ssi/moran.hpp"
#include "ssi/rng.hpp"

#include <cmath>
#include <ostream>

namespace ssi {

namespace {

double mean_of(const std::vector<RepeatMetrics>& reps, double RepeatMetrics::*field) {
    double s = 0.0;
    for (const auto& r : reps)
        s += r.*field;
    return s / static_cast<double>(reps.size());
}

RepeatMetrics metrics_for(const EmpiricalDist& e, const AnalyticDist& d) {
    const auto sd = standardized_diffs(d, e);
    return {sd.mean_diff, sd.std_diff, kl_divergence(e, d),
            ks_test(e, d).p_value, e.mean, e.stddev};
}

} // namespace

double SweepRow::aggregate_mean_diff() const { return mean_of(repeats, &RepeatMetrics::mean_diff); }
double SweepRow::aggregate_std_diff() const { return mean_of(repeats, &RepeatMetrics::std_diff); }
double SweepRow::aggregate_kl() const { return mean_of(repeats, &RepeatMetrics::kl); }

ValueScheme background_scheme(std::size_t n, double b, std::size_t n_foreground) {
    if (!(b > 0.0 && b < 1.0))
        throw SchemeSizeMismatch("background proportion must be in (0,1)");
    const auto nr = static_cast<std::size_t>(std::llround(b * static_cast<double>(n)));
    if (nr == 0 || nr >= n || n - nr < n_foreground)
        throw SchemeSizeMismatch("infeasible background/foreground split");
    const std::size_t rem = n - nr;
    std::vector<ValueScheme::Entry> entries;
    entries.push_back({0.0, nr});
    const std::size_t base = rem / n_foreground;
    const std::size_t extra = rem % n_foreground;
    for (std::size_t j = 0; j < n_foreground; ++j)
        entries.push_back({static_cast<double>(j + 1), base + (j < extra ? 1 : 0)});
    return make_scheme(std::move(entries));
}

std::vector<SweepRow> independence_sweep(const SweepConfig& cfg,
                                         const std::vector<double>& b_values,
                                         bool corrected) {
    const auto g = build_bounded_grid(cfg.rows, cfg.cols, cfg.contiguity);
    AnalyticOptions opt;
    opt.corrections.delta_n_scaling = corrected;
    opt.corrections.common_neighbor = corrected;
    opt.delta_n = g.delta_n();
    std::vector<SweepRow> rows;
    for (std::size_t pi = 0; pi < b_values.size(); ++pi) {
        const auto scheme = background_scheme(g.n_vertices(), b_values[pi],
                                              cfg.n_foreground_values);
        const auto d = analytic_distribution(scheme, cfg.contiguity == Contiguity::rook ? 4.0 : 8.0, opt);
        SweepRow row{b_values[pi], d.mean, d.stddev(), {}};
        for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
            const auto e = sample_distribution(scheme, g, cfg.n_samples,
                                               substream(cfg.seed, pi, rep), cfg.workers);
            row.repeats.push_back(metrics_for(e, d));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> perturbation_sweep(const SweepConfig& cfg,
                                         const std::vector<double>& rho_values,
                                         double b) {
    const auto base = build_bounded_grid(cfg.rows, cfg.cols, cfg.contiguity);
    const double k = cfg.contiguity == Contiguity::rook ? 4.0 : 8.0;
    const auto scheme = background_scheme(base.n_vertices(), b, cfg.n_foreground_values);
    AnalyticOptions opt;
    opt.corrections.delta_n_scaling = true;
    opt.corrections.common_neighbor = true;
    opt.delta_n = base.delta_n(); // balanced flips conserve total_edges
    const auto d = analytic_distribution(scheme, k, opt);
    std::vector<SweepRow> rows;
    for (std::size_t pi = 0; pi < rho_values.size(); ++pi) {
        SweepRow row{rho_values[pi], d.mean, d.stddev(), {}};
        for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
            const auto g = perturb_balanced(base, rho_values[pi],
                                            substream(cfg.seed, 0xBADu + pi, rep));
            const auto e = sample_distribution(scheme, g, cfg.n_samples,
                                               substream(cfg.seed, pi, rep), cfg.workers);
            row.repeats.push_back(metrics_for(e, d));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> systematic_sweep(const SweepConfig& cfg,
                                       const std::vector<double>& change_rates,
                                       bool corrected, double b) {
    const auto base = build_bounded_grid(cfg.rows, cfg.cols, cfg.contiguity);
    const double k = cfg.contiguity == Contiguity::rook ? 4.0 : 8.0;
    const double kn = k * static_cast<double>(base.n_vertices());
    const auto scheme = background_scheme(base.n_vertices(), b, cfg.n_foreground_values);
    std::vector<SweepRow> rows;
    for (std::size_t pi = 0; pi < change_rates.size(); ++pi) {
        // rate is the target delta_n/kN of the final graph
        const auto target = static_cast<long long>(std::llround(change_rates[pi] * kn));
        const long long flip = target - base.delta_n();
        AnalyticOptions opt;
        opt.corrections.delta_n_scaling = corrected;
        // keep the pair-count correction on in both arms so the comparison
        // isolates the edge-total scaling
        opt.corrections.common_neighbor = true;
        opt.delta_n = target;
        const auto d = analytic_distribution(scheme, k, opt);
        SweepRow row{change_rates[pi], d.mean, d.stddev(), {}};
        for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
            const auto g = perturb_systematic(base, flip,
                                              substream(cfg.seed, 0x5E5u + pi, rep));
            const auto e = sample_distribution(scheme, g, cfg.n_samples,
                                               substream(cfg.seed, pi, rep), cfg.workers);
            row.repeats.push_back(metrics_for(e, d));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CommonNeighborRow> common_neighbor_sweep(const SweepConfig& cfg,
                                                     const std::vector<std::size_t>& n_values) {
    const auto g = build_bounded_grid(cfg.rows, cfg.cols, cfg.contiguity);
    const double k = cfg.contiguity == Contiguity::rook ? 4.0 : 8.0;
    const std::size_t n_fg = cfg.n_foreground_values;
    std::vector<CommonNeighborRow> rows;
    for (std::size_t pi = 0; pi < n_values.size(); ++pi) {
        const std::size_t n = n_values[pi];
        if (n_fg * n >= g.n_vertices())
            throw SchemeSizeMismatch("foreground sizes exceed grid");
        std::vector<ValueScheme::Entry> entries;
        entries.push_back({0.0, g.n_vertices() - n_fg * n});
        for (std::size_t j = 0; j < n_fg; ++j)
            entries.push_back({static_cast<double>(j + 1), n});
        const auto scheme = make_scheme(std::move(entries));

        auto pm = apply_delta_correction(scheme, g.delta_n(), k);
        auto pm_corr = apply_common_neighbor_correction(pm);

        AnalyticOptions opt;
        opt.corrections.delta_n_scaling = true;
        opt.corrections.common_neighbor = true;
        opt.delta_n = g.delta_n();
        const auto d = analytic_distribution(scheme, k, opt);

        CommonNeighborRow row;
        row.n_foreground_size = n;
        row.metrics = SweepRow{static_cast<double>(n), d.mean, d.stddev(), {}};
        std::vector<double> spp_sums(n_fg, 0.0);
        std::size_t spp_draws = 0;
        for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
            std::vector<double> stats(cfg.n_samples);
            for (std::size_t r = 0; r < cfg.n_samples; ++r) {
                const auto s = random_arrangement(scheme, g.n_vertices(),
                                                  substream(cfg.seed, pi * 1000 + rep, r));
                const auto pc = pair_counts(s, g);
                stats[r] = unscaled_from_counts(scheme, pc);
                for (std::size_t j = 0; j < n_fg; ++j)
                    spp_sums[j] += static_cast<double>(pc.at(j + 1, j + 1));
                ++spp_draws;
            }
            row.metrics.repeats.push_back(metrics_for(make_empirical(std::move(stats)), d));
        }
        for (std::size_t j = 0; j < n_fg; ++j) {
            row.empirical_spp.push_back(spp_sums[j] / static_cast<double>(spp_draws));
            row.uncorrected_spp.push_back(pm.mu_same[j + 1]);
            row.corrected_spp.push_back(pm_corr.mu_same[j + 1]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "sweep_var,repeat,mean_diff,std_diff,kl,ks_p,mu_t,sigma_t,mu_e,sigma_e\n";
    out.precision(17);
    for (const auto& row : rows)
        for (std::size_t rep = 0; rep < row.repeats.size(); ++rep) {
            const auto& m = row.repeats[rep];
            out << row.sweep_value << ',' << rep << ',' << m.mean_diff << ','
                << m.std_diff << ',' << m.kl << ',' << m.ks_p << ',' << row.mu_t
                << ',' << row.sigma_t << ',' << m.mu_e << ',' << m.sigma_e << '\n';
        }
}

} // namespace ssi
