#pragma once

#include "cantor_ei/orbit.hpp"
#include "cantor_ei/piecewise_map.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cantor_ei {

struct EstimateRecord {
    int u = 0;
    int q = 0;
    long long numerator = 0;   ///< exceedances followed by q non-exceedances
    long long denominator = 0; ///< exceedances
    double theta_hat = 0.0;    ///< meaningful only when defined()

    bool defined() const noexcept { return denominator > 0; }
};

/// Hsing's estimator with strict exceedance (level > u); both counts run
/// over i = 0 .. n-1-q. domain_error unless q >= 0, u >= 1 and n > q.
EstimateRecord hsing_theta(std::span<const int> levels, int u, int q);

struct SweepRow {
    int u = 0;
    int q = 0;
    double mean_theta = 0.0; ///< over orbits with a defined estimate; NaN if none
    double sd_theta = 0.0;   ///< sample standard deviation; NaN below two values
    std::size_t defined_count = 0;
    std::size_t undefined_count = 0;
};

struct SweepMeta {
    std::string map_id;
    std::string observable = "ladder";
    std::size_t n = 0;
    std::size_t ell = 0;
    std::uint64_t seed = 0;
    long burnin = 0;
    int cap = 100;
};

struct SweepTable {
    SweepMeta meta;
    std::vector<SweepRow> rows; ///< u ascending, then q in the given order
};

struct SweepGrid {
    int u_min = 1;
    int u_max = 20;
    std::vector<int> q_list{1, 5, 10};
};

/// Per-orbit estimates for every (u, q) of the grid, row-major in u then q.
std::vector<EstimateRecord> estimate_grid(std::span<const int> levels, const SweepGrid& grid);

/// Aggregates estimate_grid over the ensemble. The row contents do not
/// depend on the order of the ensemble.
SweepTable sweep(std::span<const ObservableSeries> ensemble, const SweepGrid& grid, SweepMeta meta = {});

struct SimulationConfig {
    Observable observable = Observable::ladder;
    std::size_t n = 50'000;
    std::size_t ell = 500;
    std::uint64_t seed = 1;
    long burnin = 0;
    int cap = 100;
    unsigned threads = 1;
};

/// Generates ell orbits from sample_initial_points(ell, seed) and sweeps
/// them without keeping the series. Bit-identical for any thread count.
SweepTable simulate_sweep(const PiecewiseMap& map, const SimulationConfig& config, const SweepGrid& grid);

struct Plateau {
    int u_lo = 0;
    int u_hi = 0;
    double value = 0.0;
};

/// Maximal u-ranges covered by windows of `window` consecutive u values on
/// which every mean (all q) stays within eps of the others.
std::vector<Plateau> stability_region(const SweepTable& table, int window, double eps);

/// Header row and one line per (u, q); 12 significant digits.
void write_sweep_csv(std::ostream& out, const SweepTable& table, bool with_header = true);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace cantor_ei
