#pragma once

#include "ssi/analytic.hpp"
#include "ssi/graph.hpp"
#include "ssi/montecarlo.hpp"
#include "ssi/scheme.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssi {

struct SweepConfig {
    std::size_t rows = 40;
    std::size_t cols = 40;
    Contiguity contiguity = Contiguity::rook;
    std::size_t n_samples = 10000;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::size_t n_foreground_values = 3; // foreground values are 1..n, background 0
};

struct RepeatMetrics {
    double mean_diff;
    double std_diff;
    double kl;
    double ks_p;
    double mu_e;
    double sigma_e;
};

struct SweepRow {
    double sweep_value;
    double mu_t;
    double sigma_t;
    std::vector<RepeatMetrics> repeats;

    double aggregate_mean_diff() const;
    double aggregate_std_diff() const;
    double aggregate_kl() const;
};

// One background value 0 holding round(b*N) cells; foreground values 1..F
// split the remainder as evenly as possible, larger shares on smaller values.
ValueScheme background_scheme(std::size_t n, double b, std::size_t n_foreground = 3);

// Accuracy vs background proportion (independence level). `corrected`
// selects the delta_n-scaled law (the default) or the raw one.
std::vector<SweepRow> independence_sweep(const SweepConfig& cfg,
                                         const std::vector<double>& b_values,
                                         bool corrected = true);

// Accuracy vs balanced weight-matrix perturbation rate; the analytic law keeps
// the nominal k while samples are drawn on the perturbed graph.
std::vector<SweepRow> perturbation_sweep(const SweepConfig& cfg,
                                         const std::vector<double>& rho_values,
                                         double b = 0.65);

// Accuracy vs systematic edge-count change rate delta_n/kN, with and without
// the scaling correction.
std::vector<SweepRow> systematic_sweep(const SweepConfig& cfg,
                                       const std::vector<double>& change_rates,
                                       bool corrected, double b = 0.65);

struct CommonNeighborRow {
    std::size_t n_foreground_size;
    std::vector<double> empirical_spp;   // per foreground value
    std::vector<double> uncorrected_spp; // analytic mu_pp
    std::vector<double> corrected_spp;
    SweepRow metrics;
};

// Same-value pair-count accuracy as foreground sizes grow (three foreground
// values of size n each).
std::vector<CommonNeighborRow> common_neighbor_sweep(const SweepConfig& cfg,
                                                     const std::vector<std::size_t>& n_values);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

} // namespace ssi
