#include "cantor_ei/piecewise_map.hpp"

#include "cantor_ei/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace cantor_ei {

namespace {

struct Evaluate {
    double x;
    double operator()(const branch::Mod1& b) const
    {
        double y = b.m * x;
        return y - std::floor(y);
    }
    double operator()(const branch::Affine& b) const { return b.slope * x + b.intercept; }
    double operator()(const branch::Quadratic& b) const { return (b.a * x + b.b) * x + b.c; }
    double operator()(const branch::Gauss&) const
    {
        if (x == 0.0) return 0.0;
        double y = 1.0 / x;
        return y - std::floor(y);
    }
    double operator()(const branch::Rotation& b) const
    {
        double y = x + b.angle;
        return y - std::floor(y);
    }
};

std::vector<FloatBranch> float_branches(const AffineMap& exact)
{
    std::vector<FloatBranch> out;
    for (const auto& b : exact.branches())
        out.push_back({to_double(b.lo), to_double(b.hi), branch::Affine{to_double(b.slope), to_double(b.intercept)}});
    return out;
}

int parse_mod1(const std::string& id)
{
    const std::string prefix = "mx_mod1:";
    if (id.rfind(prefix, 0) != 0) return 0;
    int m = 0;
    const char* first = id.data() + prefix.size();
    const char* last = id.data() + id.size();
    auto [ptr, ec] = std::from_chars(first, last, m);
    if (ec != std::errc{} || ptr != last || first == last || m < 2)
        throw config_error("bad map id '" + id + "': expected mx_mod1:M with integer M >= 2");
    return m;
}

} // namespace

PiecewiseMap::PiecewiseMap(std::string id, std::vector<FloatBranch> branches, std::optional<AffineMap> exact)
    : id_(std::move(id)), branches_(std::move(branches)), exact_(std::move(exact))
{
    if (branches_.empty()) throw domain_error("map '" + id_ + "' has no branches");
    if (branches_.front().lo != 0.0 || branches_.back().hi != 1.0)
        throw domain_error("map '" + id_ + "': branch domains must cover [0,1]");
    for (std::size_t i = 0; i + 1 < branches_.size(); ++i)
        if (branches_[i].hi != branches_[i + 1].lo || !(branches_[i].lo < branches_[i].hi))
            throw domain_error("map '" + id_ + "': branch domains must be consecutive");
}

PiecewiseMap::PiecewiseMap(const AffineMap& exact) : PiecewiseMap(exact.id(), float_branches(exact), exact) {}

double PiecewiseMap::operator()(double x) const
{
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("map '" + id_ + "' evaluated outside [0,1]");
    // [lo, hi) lookup; x = 1 falls in the last branch
    auto it = std::upper_bound(branches_.begin(), branches_.end(), x,
                               [](double v, const FloatBranch& b) { return v < b.lo; });
    const FloatBranch& b = *(it - 1);
    double y = std::visit(Evaluate{x}, b.kind);
    return std::clamp(y, 0.0, 1.0);
}

double eval_map(const PiecewiseMap& map, double x) { return map(x); }

AffineMap make_affine_map(const std::string& id)
{
    if (int m = parse_mod1(id)) return AffineMap::mod1(m);
    if (id == "mixed_linear") return AffineMap::mixed_linear();
    throw unsupported_map_error("map '" + id + "' has no exact piecewise-affine form");
}

PiecewiseMap make_map(const std::string& id)
{
    if (int m = parse_mod1(id)) return PiecewiseMap(id, {{0.0, 1.0, branch::Mod1{m}}}, AffineMap::mod1(m));
    if (id == "mixed_linear") return PiecewiseMap(AffineMap::mixed_linear());
    if (id == "nonlinear") {
        // (4/3) x (x+1) and (4/3)(x-1/2)(x+1/2): convex full branches
        return PiecewiseMap(id, {{0.0, 0.5, branch::Quadratic{4.0 / 3.0, 4.0 / 3.0, 0.0}},
                                 {0.5, 1.0, branch::Quadratic{4.0 / 3.0, 0.0, -1.0 / 3.0}}});
    }
    if (id == "gauss") return PiecewiseMap(id, {{0.0, 1.0, branch::Gauss{}}});
    if (id == "rotation") return PiecewiseMap(id, {{0.0, 1.0, branch::Rotation{std::numbers::pi / 3.0}}});
    if (id == "quadratic_compatible") {
        const double s3 = std::sqrt(3.0);
        const double a = (3.0 - s3) / 6.0;
        const double b = (3.0 + s3) / 6.0;
        const branch::Quadratic g{-6.0, 6.0, 0.0};
        return PiecewiseMap(id, {{0.0, a, g}, {a, b, branch::Affine{1.0 / (b - a), -a / (b - a)}}, {b, 1.0, g}});
    }
    throw config_error("unknown map id '" + id + "'");
}

long default_burnin(const std::string& id)
{
    if (id == "nonlinear" || id == "gauss" || id == "quadratic_compatible") return 1000;
    return 0;
}

} // namespace cantor_ei
