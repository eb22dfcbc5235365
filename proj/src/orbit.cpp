#include "cantor_ei/orbit.hpp"

#include "cantor_ei/errors.hpp"

namespace cantor_ei {

Observable parse_observable(const std::string& name)
{
    if (name == "ladder") return Observable::ladder;
    if (name == "escape") return Observable::escape;
    throw config_error("unknown observable '" + name + "' (expected ladder or escape)");
}

std::string to_string(Observable o) { return o == Observable::ladder ? "ladder" : "escape"; }

int observe(Observable o, double x, int cap)
{
    return o == Observable::ladder ? ternary_ladder(x, cap) : escape_time(x, QuadraticMap{}, cap);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream)
{
    return std::mt19937_64(stream_seed(seed, stream));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> sample_initial_points(std::size_t ell, std::uint64_t seed)
{
    if (ell < 1) throw domain_error("sample_initial_points: ell must be >= 1");
    std::vector<double> out;
    out.reserve(ell);
    for (std::size_t i = 0; i < ell; ++i) {
        auto rng = make_stream(seed, i);
        out.push_back(uniform01(rng));
    }
    return out;
}

ObservableSeries generate_series(const PiecewiseMap& map, Observable observable, std::size_t n, double x0, int cap,
                                 long burnin)
{
    if (n < 1) throw domain_error("generate_series: n must be >= 1");
    if (burnin < 0) throw domain_error("generate_series: burn-in must be >= 0");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw domain_error("generate_series: x0 outside [0,1]");
    ObservableSeries s;
    s.map_id = map.id();
    s.x0 = x0;
    s.levels.reserve(n);
    double x = x0;
    for (long i = 0; i < burnin; ++i) x = map(x);
    for (std::size_t i = 0; i < n; ++i) {
        s.levels.push_back(observe(observable, x, cap));
        if (i + 1 < n) x = map(x);
    }
    return s;
}

} // namespace cantor_ei
