#include "cantor_ei/affine_map.hpp"

#include "cantor_ei/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cantor_ei {

RationalInterval AffineBranch::image() const
{
    Rational a = apply(lo), b = apply(hi);
    if (b < a) std::swap(a, b);
    return {a, b};
}

AffineMap::AffineMap(std::string id, std::vector<AffineBranch> branches)
    : id_(std::move(id)), branches_(std::move(branches))
{
    if (branches_.empty()) throw domain_error("affine map '" + id_ + "' has no branches");
    if (branches_.front().lo != 0 || branches_.back().hi != 1)
        throw domain_error("affine map '" + id_ + "': branch domains must cover [0,1]");
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto& b = branches_[i];
        if (!(b.lo < b.hi)) throw domain_error("affine map '" + id_ + "': empty branch domain");
        if (b.slope == 0) throw domain_error("affine map '" + id_ + "': zero slope");
        if (i + 1 < branches_.size() && b.hi != branches_[i + 1].lo)
            throw domain_error("affine map '" + id_ + "': branch domains must be consecutive");
        auto img = b.image();
        if (img.lo < 0 || img.hi > 1) throw domain_error("affine map '" + id_ + "': branch image leaves [0,1]");
    }
}

AffineMap AffineMap::mod1(int m)
{
    if (m < 2) throw domain_error("mx mod 1 needs m >= 2");
    std::vector<AffineBranch> branches;
    branches.reserve(m);
    for (int k = 0; k < m; ++k)
        branches.push_back({Rational(k, m), Rational(k + 1, m), Rational(m), Rational(-k)});
    for (auto& b : branches) {
        b.lo.canonicalize();
        b.hi.canonicalize();
    }
    return AffineMap("mx_mod1:" + std::to_string(m), std::move(branches));
}

AffineMap AffineMap::mixed_linear()
{
    std::vector<AffineBranch> branches;
    branches.push_back({Rational(0), Rational(1, 3), Rational(3), Rational(0)});
    branches.push_back({Rational(1, 3), Rational(2, 3), Rational(3), Rational(-1)});
    for (int j = 0; j < 5; ++j) {
        Rational lo = Rational(2, 3) + Rational(j, 15);
        lo.canonicalize();
        Rational hi = lo + Rational(1, 15);
        branches.push_back({lo, hi, Rational(15), Rational(-15) * lo});
    }
    return AffineMap("mixed_linear", std::move(branches));
}

std::size_t AffineMap::locate(const Rational& x) const
{
    auto it = std::upper_bound(branches_.begin(), branches_.end(), x,
                               [](const Rational& v, const AffineBranch& b) { return v < b.lo; });
    std::size_t idx = static_cast<std::size_t>(std::distance(branches_.begin(), it));
    return idx == 0 ? 0 : idx - 1;
}

Rational AffineMap::eval(const Rational& x) const
{
    if (x < 0 || x > 1) throw domain_error("affine map evaluated outside [0,1]");
    return branches_[locate(x)].apply(x);
}

double AffineMap::eval(double x) const
{
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("affine map evaluated outside [0,1]");
    std::size_t lo = 0, hi = branches_.size();
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (to_double(branches_[mid].lo) <= x) lo = mid;
        else hi = mid;
    }
    const auto& b = branches_[lo];
    double y = to_double(b.slope) * x + to_double(b.intercept);
    return std::clamp(y, 0.0, 1.0);
}

AffineMap AffineMap::iterate(int k, const ExactContext& ctx) const
{
    if (k < 1) throw domain_error("iterate: k must be >= 1");
    std::vector<AffineBranch> current = branches_;
    for (int step = 1; step < k; ++step) {
        std::vector<AffineBranch> next;
        for (const auto& inner : current) {
            auto img = inner.image();
            for (const auto& outer : branches_) {
                Rational lo = std::max(img.lo, outer.lo);
                Rational hi = std::min(img.hi, outer.hi);
                if (!(lo < hi)) continue;
                Rational d0 = inner.invert(lo), d1 = inner.invert(hi);
                if (d1 < d0) std::swap(d0, d1);
                next.push_back({d0, d1, outer.slope * inner.slope, outer.slope * inner.intercept + outer.intercept});
            }
        }
        ctx.charge(next.size());
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
        for (const auto& b : next) {
            detail::check_endpoint(b.lo, ctx);
            detail::check_endpoint(b.hi, ctx);
        }
        current = std::move(next);
    }
    return AffineMap(id_ + "^" + std::to_string(k), std::move(current));
}

bool AffineMap::preserves_lebesgue() const
{
    Rational total(0);
    for (const auto& b : branches_) {
        auto img = b.image();
        if (img.lo != 0 || img.hi != 1) return false;
        total += 1 / abs(b.slope);
    }
    return total == 1;
}

IntervalSet preimage_piecewise_affine(const IntervalSet& a, const AffineMap& map, const ExactContext& ctx)
{
    std::vector<RationalInterval> out;
    for (const auto& b : map.branches()) {
        auto img = b.image();
        for (const auto& iv : a) {
            Rational lo = std::max(iv.lo, img.lo);
            Rational hi = std::min(iv.hi, img.hi);
            if (!(lo < hi)) continue;
            Rational x0 = b.invert(lo), x1 = b.invert(hi);
            if (x1 < x0) std::swap(x0, x1);
            out.push_back({std::move(x0), std::move(x1)});
        }
    }
    return IntervalSet::from_intervals(std::move(out), ctx);
}

namespace {

// x = scale * y + shift
struct Affine1d {
    Rational scale{1};
    Rational shift{0};

    Rational apply(const Rational& y) const { return scale * y + shift; }
    Rational invert(const Rational& x) const { return (x - shift) / scale; }
};

RationalInterval ordered(Rational a, Rational b)
{
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

// Intervals of `set` overlapping (lo, hi) with positive length, clipped to it.
std::vector<RationalInterval> clip(const IntervalSet& set, const Rational& lo, const Rational& hi)
{
    std::vector<RationalInterval> out;
    const auto& ivs = set.intervals();
    auto it = std::upper_bound(ivs.begin(), ivs.end(), lo,
                               [](const Rational& v, const RationalInterval& iv) { return v < iv.hi; });
    for (; it != ivs.end() && it->lo < hi; ++it) {
        Rational a = std::max(it->lo, lo), b = std::min(it->hi, hi);
        if (a < b) out.push_back({std::move(a), std::move(b)});
    }
    return out;
}

struct CylinderSearch {
    const IntervalSet& target;
    const AffineMap& map;
    int depth;
    const IntervalSet& window;
    const ExactContext& ctx;
    std::vector<RationalInterval> pieces;

    // phi maps time-t coordinates back to x; valid is the set of admissible time-t points.
    void visit(int t, const Affine1d& phi, const RationalInterval& valid)
    {
        auto cylinder = ordered(phi.apply(valid.lo), phi.apply(valid.hi));
        auto seen = clip(window, cylinder.lo, cylinder.hi);
        if (seen.empty()) return;
        ctx.charge(1);
        if (t == depth) {
            // pull the visible window back to time j, meet it with the target, push forward
            std::vector<RationalInterval> pulled;
            pulled.reserve(seen.size());
            for (const auto& w : seen) pulled.push_back(ordered(phi.invert(w.lo), phi.invert(w.hi)));
            std::sort(pulled.begin(), pulled.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
            for (const auto& w : pulled)
                for (auto& hit : clip(target, w.lo, w.hi))
                    pieces.push_back(ordered(phi.apply(hit.lo), phi.apply(hit.hi)));
            return;
        }
        for (const auto& b : map.branches()) {
            Rational lo = std::max(valid.lo, b.lo), hi = std::min(valid.hi, b.hi);
            if (!(lo < hi)) continue;
            Affine1d next{phi.scale / b.slope, phi.shift - phi.scale * b.intercept / b.slope};
            visit(t + 1, next, ordered(b.apply(lo), b.apply(hi)));
        }
    }
};

} // namespace

IntervalSet preimage_within(const IntervalSet& a, const AffineMap& map, int j, const IntervalSet& window,
                            const ExactContext& ctx)
{
    if (j < 0) throw domain_error("preimage_within: negative iterate");
    if (j == 0) return intersect(a, window, ctx);
    CylinderSearch search{a, map, j, window, ctx, {}};
    search.visit(0, Affine1d{}, {Rational(0), Rational(1)});
    return IntervalSet::from_intervals(std::move(search.pieces), ctx);
}

} // namespace cantor_ei
