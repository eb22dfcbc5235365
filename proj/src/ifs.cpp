#include "cantor_ei/ifs.hpp"

#include "cantor_ei/errors.hpp"
#include "cantor_ei/observables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cantor_ei {

AffineIFS::AffineIFS(std::vector<Contraction> maps) : maps_(std::move(maps))
{
    if (maps_.empty()) throw domain_error("IFS needs at least one contraction");
    std::sort(maps_.begin(), maps_.end(), [](const Contraction& a, const Contraction& b) { return a.offset < b.offset; });
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        const auto& f = maps_[i];
        if (!(f.ratio > 0 && f.ratio < 1)) throw domain_error("IFS contraction ratio must lie in (0,1)");
        auto j = image(i);
        if (j.lo < 0 || j.hi > 1) throw domain_error("IFS image f_i([0,1]) must lie in [0,1]");
        if (i > 0 && !(image(i - 1).hi < j.lo)) throw domain_error("IFS images must be pairwise disjoint");
    }
}

AffineIFS AffineIFS::ternary()
{
    return AffineIFS({{make_rational(1, 3), Rational(0)}, {make_rational(1, 3), make_rational(2, 3)}});
}

Rational AffineIFS::ratio_sum() const
{
    Rational s = 0;
    for (const auto& f : maps_) s += f.ratio;
    return s;
}

RationalInterval AffineIFS::image(std::size_t i) const
{
    const auto& f = maps_.at(i);
    return {f.offset, f.ratio + f.offset};
}

AffineIFS parse_ifs(std::istream& in)
{
    std::vector<Contraction> maps;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a)) continue;
        if (!(fields >> b) || (fields >> extra))
            throw config_error("IFS spec line " + std::to_string(lineno) + ": expected 'ratio offset'");
        try {
            maps.push_back({parse_rational(a), parse_rational(b)});
        } catch (const std::exception& e) {
            throw config_error("IFS spec line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    try {
        return AffineIFS(std::move(maps));
    } catch (const domain_error& e) {
        throw config_error(std::string("IFS spec: ") + e.what());
    }
}

AffineIFS load_ifs(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot open IFS spec '" + path + "'");
    return parse_ifs(in);
}

IntervalSet survivor_approx(const AffineIFS& ifs, int n, const ExactContext& ctx)
{
    if (n < 0) throw domain_error("survivor_approx: n must be >= 0");
    if (n > ctx.limits.max_depth)
        throw resource_limit_error("survivor_approx: level " + std::to_string(n) + " exceeds depth cap " +
                                   std::to_string(ctx.limits.max_depth));
    std::vector<RationalInterval> level{{Rational(0), Rational(1)}};
    for (int step = 0; step < n; ++step) {
        std::vector<RationalInterval> next;
        next.reserve(level.size() * ifs.size());
        for (const auto& f : ifs.maps())
            for (const auto& iv : level) next.push_back({f.apply(iv.lo), f.apply(iv.hi)});
        ctx.charge(next.size());
        level = std::move(next);
    }
    return IntervalSet::from_intervals(std::move(level), ctx);
}

AffineMap compatible_map(const AffineIFS& ifs)
{
    std::vector<AffineBranch> branches;
    auto onto = [&](const Rational& lo, const Rational& hi) {
        Rational slope = 1 / (hi - lo);
        branches.push_back({lo, hi, slope, -lo * slope});
    };
    Rational cursor = 0;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        auto j = ifs.image(i);
        if (cursor < j.lo) onto(cursor, j.lo);
        onto(j.lo, j.hi); // f_i^{-1}
        cursor = j.hi;
    }
    if (cursor < 1) onto(cursor, Rational(1));
    return AffineMap("ifs_compatible", std::move(branches));
}

Rational general_theta(const AffineIFS& ifs, int k, int n, const ExactContext& ctx)
{
    if (k < 1 || n < 1) throw domain_error("general_theta: k and n must be >= 1");
    IntervalSet outer = survivor_approx(ifs, n + k - 1, ctx);
    IntervalSet inner = survivor_approx(ifs, n + 2 * k - 1, ctx);
    return measure(subtract(outer, inner, ctx)) / measure(outer);
}

Rational general_theta_limit(const AffineIFS& ifs, int k)
{
    if (k < 1) throw domain_error("general_theta_limit: k must be >= 1");
    Rational s = ifs.ratio_sum();
    Rational p = 1;
    for (int i = 0; i < k; ++i) p *= s;
    return 1 - p;
}

double similarity_dimension(const AffineIFS& ifs, double tol)
{
    std::vector<double> ratios;
    for (const auto& f : ifs.maps()) ratios.push_back(to_double(f.ratio));
    auto pressure = [&](double d) {
        double s = 0;
        for (double r : ratios) s += std::pow(r, d);
        return s - 1.0;
    };
    // pressure decreases in d; at 0 it is size-1 >= 0
    double lo = 0.0, hi = 1.0;
    while (pressure(hi) > 0) hi *= 2;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (pressure(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double quadratic_compatible_map(double x)
{
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("quadratic_compatible_map: x outside [0,1]");
    const double s3 = std::sqrt(3.0);
    const double a = (3.0 - s3) / 6.0;
    const double b = (3.0 + s3) / 6.0;
    double y = (x < a || x >= b) ? 6.0 * x * (1.0 - x) : (x - a) / (b - a);
    return std::clamp(y, 0.0, 1.0);
}

int quadratic_survivor_observable(double x, int cap) { return escape_time(x, QuadraticMap{}, cap); }

} // namespace cantor_ei
