#include "ssi/analytic.hpp"
#include "ssi/errors.hpp"
#include "ssi/experiments.hpp"
#include "ssi/graph.hpp"
#include "ssi/kernels.hpp"
#include "ssi/montecarlo.hpp"
#include "ssi/moran.hpp"
#include "ssi/raster.hpp"
#include "ssi/scheme.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kDefaultSeed = 0x5EED5EEDULL; // documented fixed default

// FNV-1a over file bytes, for manifest input digests.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return "missing";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c))
        h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const std::string& path, const std::string& subcommand,
                    const json& config, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    json m;
    m["subcommand"] = subcommand;
    m["config"] = config;
    m["seed"] = seed;
    m["version"] = kVersion;
    m["kernel"] = ssi::kernels::active_kernel_name();
    m["inputs"] = json::object();
    for (const auto& p : inputs)
        m["inputs"][p] = file_digest(p);
    m["outputs"] = outputs;
    std::ofstream out(path);
    out << m.dump(2) << '\n';
}

ssi::RasterFormat parse_format(const std::string& s) {
    if (s == "csv")
        return ssi::RasterFormat::csv;
    if (s == "flat_binary")
        return ssi::RasterFormat::flat_binary;
    throw ssi::FormatError("unknown format: " + s);
}

ssi::Contiguity parse_contiguity(const std::string& s) {
    if (s == "rook")
        return ssi::Contiguity::rook;
    if (s == "queen")
        return ssi::Contiguity::queen;
    throw ssi::FormatError("unknown contiguity: " + s);
}

ssi::Sample grid_sample(const ssi::RasterGrid& r) {
    return ssi::Sample{r.data};
}

ssi::ValueScheme load_scheme_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ssi::FormatError("cannot open scheme file: " + path);
    json j;
    in >> j;
    std::vector<ssi::ValueScheme::Entry> entries;
    for (const auto& pair : j)
        entries.push_back({pair.at(0).get<double>(), pair.at(1).get<std::size_t>()});
    return ssi::make_scheme(std::move(entries));
}

json scheme_json(const ssi::ValueScheme& s) {
    json entries = json::array();
    for (const auto& e : s.entries)
        entries.push_back({e.value, e.count});
    return {{"entries", entries},
            {"n", s.n_total},
            {"mean", s.mean},
            {"sum_sq_dev", s.sum_sq_dev},
            {"background_proportion", s.background_proportion}};
}

int run_moran(const std::string& input, const std::string& format,
              const std::string& contiguity, bool torus) {
    const auto r = ssi::load_raster(input, parse_format(format));
    const auto c = parse_contiguity(contiguity);
    const auto g = torus ? ssi::build_torus_grid(r.rows, r.cols, c)
                         : ssi::build_bounded_grid(r.rows, r.cols, c);
    const auto s = grid_sample(r);
    const auto scheme = ssi::extract_scheme(s);
    const double i = ssi::moran_i(s, g); // throws ZeroVariance on constant input
    const auto pc = ssi::pair_counts(s, g);
    json counts = json::array();
    for (std::size_t p = 0; p < pc.m; ++p) {
        json row = json::array();
        for (std::size_t q = 0; q < pc.m; ++q)
            row.push_back(pc.at(p, q));
        counts.push_back(row);
    }
    json out = {{"I", i},
                {"i_bar", ssi::unscaled_moran(s, g)},
                {"pair_counts", counts},
                {"scheme", scheme_json(scheme)}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_analytic(const std::string& scheme_path, const std::string& from_grid,
                 const std::string& format, double k, long long delta_n,
                 const std::string& corrections, double observed, bool has_observed) {
    ssi::ValueScheme scheme;
    if (!scheme_path.empty()) {
        scheme = load_scheme_file(scheme_path);
    } else {
        scheme = ssi::extract_scheme(grid_sample(ssi::load_raster(from_grid, parse_format(format))));
    }
    ssi::AnalyticOptions opt;
    opt.delta_n = delta_n;
    opt.corrections.delta_n_scaling = corrections.find("delta") != std::string::npos;
    opt.corrections.common_neighbor = corrections.find("cn") != std::string::npos;
    const auto d = ssi::analytic_distribution(scheme, k, opt);
    json out = {{"mu", d.mean},
                {"sigma2", d.variance},
                {"corrections",
                 {{"delta_n_scaling", d.corrections.delta_n_scaling},
                  {"common_neighbor", d.corrections.common_neighbor}}}};
    if (has_observed) {
        out["J"] = ssi::self_information(observed, d);
        out["tail_p"] = ssi::tail_probability(observed, d, ssi::TailSide::two);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_sample(const std::string& scheme_path, const std::string& grid_shape,
               bool torus, const std::string& contiguity, std::size_t n,
               std::uint64_t seed, unsigned workers, const std::string& out_prefix) {
    const auto scheme = load_scheme_file(scheme_path);
    const auto sep = grid_shape.find('x');
    if (sep == std::string::npos)
        throw ssi::FormatError("grid shape must be RxC");
    const auto rows = std::stoul(grid_shape.substr(0, sep));
    const auto cols = std::stoul(grid_shape.substr(sep + 1));
    const auto c = parse_contiguity(contiguity);
    const auto g = torus ? ssi::build_torus_grid(rows, cols, c)
                         : ssi::build_bounded_grid(rows, cols, c);
    const auto e = ssi::sample_distribution(scheme, g, n, seed, workers);

    const std::string csv_path = out_prefix + "_samples.csv";
    {
        std::ofstream csv(csv_path);
        csv.precision(17);
        csv << "i_bar\n";
        for (double v : e.samples)
            csv << v << '\n';
    }
    json summary = {{"n", e.n()}, {"mean", e.mean}, {"std", e.stddev}};
    if (scheme.m() >= 2 && e.n() >= 2 && e.stddev > 0.0) {
        ssi::AnalyticOptions opt;
        opt.corrections.delta_n_scaling = !torus;
        opt.delta_n = g.delta_n();
        const auto d = ssi::analytic_distribution(scheme, g.k_nominal(), opt);
        const auto h = ssi::histogram_against(e, d);
        summary["analytic"] = {{"mu", d.mean}, {"sigma2", d.variance}};
        summary["kl"] = ssi::kl_divergence(e, d);
        const auto ks = ssi::ks_test(e, d);
        summary["ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}};
        summary["histogram"] = {{"edges", h.edges}, {"counts", h.counts}};
    }
    const std::string summary_path = out_prefix + "_summary.json";
    {
        std::ofstream js(summary_path);
        js << summary.dump(2) << '\n';
    }
    json cfg = {{"scheme", scheme_path}, {"grid_shape", grid_shape},
                {"torus", torus}, {"contiguity", contiguity},
                {"n", n}, {"workers", workers}};
    write_manifest(out_prefix + "_manifest.json", "sample", cfg, seed,
                   {scheme_path}, {csv_path, summary_path});
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int run_sweep(const std::string& kind, const std::string& config_path,
              const std::string& out_prefix) {
    json cfg = json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in)
            throw ssi::FormatError("cannot open config: " + config_path);
        in >> cfg;
    }
    ssi::SweepConfig sc;
    sc.rows = cfg.value("rows", 40);
    sc.cols = cfg.value("cols", 40);
    sc.contiguity = parse_contiguity(cfg.value("contiguity", "rook"));
    sc.n_samples = cfg.value("n_samples", 10000);
    sc.repeats = cfg.value("repeats", 10);
    sc.seed = cfg.value("seed", kDefaultSeed);
    sc.workers = cfg.value("workers", 1);

    std::vector<ssi::SweepRow> rows;
    if (kind == "independence") {
        const auto b = cfg.value("b_values", std::vector<double>{0.65, 0.55, 0.45, 0.35, 0.25});
        rows = ssi::independence_sweep(sc, b, cfg.value("corrected", true));
    } else if (kind == "perturb") {
        const auto rho = cfg.value("rho_values", std::vector<double>{0.0, 0.05, 0.1, 0.15, 0.2, 0.3});
        rows = ssi::perturbation_sweep(sc, rho, cfg.value("b", 0.65));
    } else if (kind == "systematic") {
        const auto rates = cfg.value("change_rates",
                                     std::vector<double>{-0.15, -0.1, -0.05, 0.0, 0.05, 0.1, 0.15});
        rows = ssi::systematic_sweep(sc, rates, cfg.value("corrected", true), cfg.value("b", 0.65));
    } else if (kind == "common-neighbor") {
        const auto n_values = cfg.value("n_values",
                                        std::vector<std::size_t>{200, 220, 240, 260, 280, 300});
        const auto cn = ssi::common_neighbor_sweep(sc, n_values);
        const std::string spp_path = out_prefix + "_spp.csv";
        std::ofstream spp(spp_path);
        spp.precision(17);
        spp << "n,value,empirical,uncorrected,corrected\n";
        for (const auto& row : cn) {
            rows.push_back(row.metrics);
            for (std::size_t j = 0; j < row.empirical_spp.size(); ++j)
                spp << row.n_foreground_size << ',' << (j + 1) << ','
                    << row.empirical_spp[j] << ',' << row.uncorrected_spp[j] << ','
                    << row.corrected_spp[j] << '\n';
        }
    } else {
        std::cerr << "unknown sweep kind: " << kind << '\n';
        return 3;
    }

    const std::string csv_path = out_prefix + ".csv";
    {
        std::ofstream out(csv_path);
        ssi::write_sweep_csv(rows, out);
    }
    write_manifest(out_prefix + "_manifest.json", "sweep " + kind, cfg, sc.seed,
                   config_path.empty() ? std::vector<std::string>{}
                                       : std::vector<std::string>{config_path},
                   {csv_path});
    std::cerr << "wrote " << csv_path << '\n';
    return 0;
}

int run_raster(const std::string& input, const std::string& format,
               std::size_t tile_size, std::size_t patch_size, double bin_width,
               const std::string& contiguity, const std::string& rank_by,
               const std::string& b_range, const std::string& out_prefix) {
    const auto r = ssi::load_raster(input, parse_format(format));
    const auto c = parse_contiguity(contiguity);
    std::vector<ssi::PatchReport> reports;
    for (const auto& [id, patch] : ssi::tile(r, tile_size, patch_size))
        reports.push_back(ssi::analyze_patch(patch, id, bin_width, c));

    std::optional<std::pair<double, double>> filter;
    if (!b_range.empty()) {
        const auto sep = b_range.find(':');
        if (sep == std::string::npos)
            throw ssi::FormatError("b-range must be LO:HI");
        filter = {{std::stod(b_range.substr(0, sep)), std::stod(b_range.substr(sep + 1))}};
    }
    const auto key = rank_by == "self_information" ? ssi::RankKey::self_information
                                                   : ssi::RankKey::moran_i;
    const auto ranked = ssi::rank_patches(std::move(reports), key, filter);

    json arr = json::array();
    const std::string csv_path = out_prefix + "_patches.csv";
    std::ofstream csv(csv_path);
    csv.precision(17);
    csv << "tile_row,tile_col,patch_row,patch_col,m,b,zero_variance,moran_i,i_bar,mu,sigma,J,tail_p\n";
    for (const auto& p : ranked) {
        csv << p.id.tile_row << ',' << p.id.tile_col << ',' << p.id.patch_row << ','
            << p.id.patch_col << ',' << p.m << ',' << p.background_proportion << ','
            << (p.zero_variance ? 1 : 0) << ',' << p.moran_i << ',' << p.i_bar << ','
            << p.mu << ',' << p.sigma << ',' << p.self_information << ',' << p.tail_p << '\n';
        arr.push_back({{"id", {p.id.tile_row, p.id.tile_col, p.id.patch_row, p.id.patch_col}},
                       {"m", p.m},
                       {"b", p.background_proportion},
                       {"zero_variance", p.zero_variance},
                       {"moran_i", p.moran_i},
                       {"i_bar", p.i_bar},
                       {"mu", p.mu},
                       {"sigma", p.sigma},
                       {"J", p.self_information},
                       {"tail_p", p.tail_p}});
    }
    const std::string json_path = out_prefix + "_patches.json";
    {
        std::ofstream js(json_path);
        js << arr.dump(2) << '\n';
    }
    json cfg = {{"input", input}, {"format", format}, {"tile", tile_size},
                {"patch", patch_size}, {"bin_width", bin_width},
                {"contiguity", contiguity}, {"rank_by", rank_by}, {"b_range", b_range}};
    write_manifest(out_prefix + "_manifest.json", "raster", cfg, 0,
                   {input}, {csv_path, json_path});
    std::cout << arr.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moran's I, its analytical permutation law, and spatial self-information"};
    app.require_subcommand(1);

    std::string input, format = "csv", contiguity = "rook";
    bool torus = false;

    auto* moran = app.add_subcommand("moran", "Moran's I and pair counts of a grid");
    moran->add_option("--input", input)->required();
    moran->add_option("--format", format);
    moran->add_option("--contiguity", contiguity);
    moran->add_flag("--torus", torus);

    std::string scheme_path, from_grid, corrections;
    double k = 4.0, observed = 0.0;
    long long delta_n = 0;
    auto* analytic = app.add_subcommand("analytic", "analytical law for a value scheme");
    analytic->add_option("--scheme", scheme_path);
    analytic->add_option("--from-grid", from_grid);
    analytic->add_option("--format", format);
    analytic->add_option("--k", k);
    analytic->add_option("--delta-n", delta_n);
    analytic->add_option("--corrections", corrections, "comma list: delta,cn");
    auto* observed_opt = analytic->add_option("--observed", observed, "evaluate J at this i_bar");

    std::string grid_shape = "40x40", out_prefix = "ssi_out";
    std::size_t n_samples = 10000;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
    auto* sample = app.add_subcommand("sample", "permutation sampling of i_bar");
    sample->add_option("--scheme", scheme_path)->required();
    sample->add_option("--grid-shape", grid_shape);
    sample->add_flag("--torus", torus);
    sample->add_option("--contiguity", contiguity);
    sample->add_option("--n", n_samples);
    sample->add_option("--seed", seed);
    sample->add_option("--workers", workers);
    sample->add_option("--out", out_prefix);

    std::string sweep_kind, config_path;
    auto* sweep = app.add_subcommand("sweep", "accuracy sweeps (CSV + manifest)");
    sweep->add_option("kind", sweep_kind, "independence|perturb|systematic|common-neighbor")
        ->required();
    sweep->add_option("--config", config_path);
    sweep->add_option("--out", out_prefix);

    std::size_t tile_size = 1000, patch_size = 50;
    double bin_width = 20.0;
    std::string rank_by = "moran_i", b_range;
    auto* raster = app.add_subcommand("raster", "tile, bucketize, analyze, rank patches");
    raster->add_option("--input", input)->required();
    raster->add_option("--format", format);
    raster->add_option("--tile", tile_size);
    raster->add_option("--patch", patch_size);
    raster->add_option("--bin-width", bin_width);
    raster->add_option("--contiguity", contiguity);
    raster->add_option("--rank-by", rank_by);
    raster->add_option("--b-range", b_range);
    raster->add_option("--out", out_prefix);

    CLI11_PARSE(app, argc, argv);

    try {
        if (moran->parsed())
            return run_moran(input, format, contiguity, torus);
        if (analytic->parsed())
            return run_analytic(scheme_path, from_grid, format, k, delta_n,
                                corrections, observed, observed_opt->count() > 0);
        if (sample->parsed())
            return run_sample(scheme_path, grid_shape, torus, contiguity,
                              n_samples, seed, workers, out_prefix);
        if (sweep->parsed())
            return run_sweep(sweep_kind, config_path, out_prefix);
        if (raster->parsed())
            return run_raster(input, format, tile_size, patch_size, bin_width,
                              contiguity, rank_by, b_range, out_prefix);
    } catch (const ssi::PerturbationInfeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const ssi::CorrectionInfeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const ssi::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
