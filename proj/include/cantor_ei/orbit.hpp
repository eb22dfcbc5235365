#pragma once

#include "cantor_ei/observables.hpp"
#include "cantor_ei/piecewise_map.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cantor_ei {

enum class Observable { ladder, escape };

Observable parse_observable(const std::string& name);
std::string to_string(Observable o);

/// Level of the given observable at x.
int observe(Observable o, double x, int cap);

struct ObservableSeries {
    std::vector<int> levels;
    std::string map_id;
    std::uint64_t seed = 0;
    double x0 = 0.0;
};

/// splitmix64 finaliser of (seed, stream): the seed for orbit `stream`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// mt19937_64 seeded with stream_seed(seed, stream).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Top 53 bits of one draw, scaled to [0,1).
double uniform01(std::mt19937_64& rng);

/// Initial point of orbit i is the first variate of stream i.
std::vector<double> sample_initial_points(std::size_t ell, std::uint64_t seed);

/// levels[i] = observable(T^{burnin + i}(x0)), i = 0..n-1.
ObservableSeries generate_series(const PiecewiseMap& map, Observable observable, std::size_t n, double x0, int cap,
                                 long burnin = 0);

} // namespace cantor_ei
