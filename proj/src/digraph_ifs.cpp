#include "cantor_ei/digraph_ifs.hpp"

#include "cantor_ei/errors.hpp"
#include "cantor_ei/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_map>

namespace cantor_ei {

long long checked_mq(int m, int q, std::size_t max_dim)
{
    if (m < 2) throw domain_error("digraph: m must be >= 2");
    if (q < 1) throw domain_error("digraph: q must be >= 1");
    long long mq = 1;
    for (int i = 0; i < q; ++i) {
        mq *= m;
        if (static_cast<unsigned long long>(mq) + 2 > max_dim)
            throw resource_limit_error("digraph: m^q + 2 exceeds the matrix-size cap of " + std::to_string(max_dim));
    }
    return mq;
}

namespace {

// (target offset, generator index i) for the four choices of (i, j).
std::array<std::pair<long long, int>, 4> successors(long long s, long long mq)
{
    return {{{3 * s, 1}, {3 * s + 2, 1}, {3 * s - 2 * mq, 2}, {3 * s - 2 * mq + 2, 2}}};
}

AffineVertex vertex(long long offset, long long mq)
{
    Rational ratio = make_rational(1, mq);
    return {ratio, offset};
}

} // namespace

SubstitutionMatrix build_nq(int m, int q, std::size_t max_dim)
{
    const long long mq = checked_mq(m, q, max_dim);
    const long long dim = mq + 2;
    std::vector<SubstitutionMatrix::Entry> entries;
    entries.reserve(static_cast<std::size_t>(dim) * 2);
    std::vector<AffineVertex> labels;
    labels.reserve(static_cast<std::size_t>(dim));
    // 1-based rules: N_{i,3i-2}, N_{i,3i-4}, N_{i,3i-2m^q-4}, N_{i,3i-2m^q-2}
    for (long long i = 1; i <= dim; ++i) {
        labels.push_back(vertex(i - 2, mq));
        for (long long col : {3 * i - 2, 3 * i - 4, 3 * i - 2 * mq - 4, 3 * i - 2 * mq - 2})
            if (col >= 1 && col <= dim)
                entries.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(col - 1), 1});
    }
    return SubstitutionMatrix::from_entries(static_cast<std::size_t>(dim), std::move(entries), std::move(labels));
}

DigraphIFS mcclure_digraph(int m, int q, long long k, int depth, const ExactContext& ctx)
{
    const long long mq = checked_mq(m, q);
    if (k < 0 || k >= mq) throw domain_error("mcclure: seed offset must lie in [0, m^q)");
    if (depth < 1) throw domain_error("mcclure: filter depth must be >= 1");

    const IntervalSet cantor = cantor_approx(depth, ctx);
    const Rational inv = make_rational(1, mq);
    auto keeps = [&](long long s) {
        // h(C_d) lies in [s/m^q, (s+1)/m^q]
        if (s < -1 || s > mq) return false;
        std::vector<RationalInterval> image;
        image.reserve(cantor.size());
        Rational shift = inv * static_cast<long>(s);
        for (const auto& iv : cantor) image.push_back({iv.lo * inv + shift, iv.hi * inv + shift});
        ctx.charge(image.size());
        return touches(cantor.intervals(), image);
    };

    std::set<long long> accepted;
    std::set<long long> rejected;
    std::deque<long long> frontier;
    if (keeps(k)) {
        accepted.insert(k);
        frontier.push_back(k);
    }
    while (!frontier.empty()) {
        long long s = frontier.front();
        frontier.pop_front();
        for (auto [t, generator] : successors(s, mq)) {
            (void)generator;
            if (accepted.count(t) || rejected.count(t)) continue;
            if (keeps(t)) {
                accepted.insert(t);
                frontier.push_back(t);
            } else {
                rejected.insert(t);
            }
        }
    }

    DigraphIFS g;
    std::unordered_map<long long, std::size_t> position;
    for (long long s : accepted) {
        position[s] = g.vertices.size();
        g.vertices.push_back(vertex(s, mq));
    }
    for (long long s : accepted)
        for (auto [t, generator] : successors(s, mq))
            if (auto it = position.find(t); it != position.end())
                g.edges.push_back({position[s], it->second, generator});
    return g;
}

std::vector<AffineVertex> mcclure_vertices(int m, int q, long long k, int depth, const ExactContext& ctx)
{
    return mcclure_digraph(m, q, k, depth, ctx).vertices;
}

SubstitutionMatrix build_mqk(std::span<const AffineVertex> vertices, int m, int q)
{
    if (vertices.empty()) return SubstitutionMatrix::from_entries(0, {});
    const long long mq = checked_mq(m, q);
    std::unordered_map<long long, std::size_t> position;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].ratio != make_rational(1, mq))
            throw domain_error("build_mqk: vertex ratio does not match 1/m^q");
        if (!position.emplace(vertices[i].offset, i).second) throw domain_error("build_mqk: duplicate vertex");
    }
    std::vector<SubstitutionMatrix::Entry> entries;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        // one edge per generator i; j is determined by the target
        for (auto [t, generator] : successors(vertices[i].offset, mq)) {
            (void)generator;
            if (auto it = position.find(t); it != position.end()) entries.push_back({i, it->second, 1});
        }
    }
    return SubstitutionMatrix::from_entries(vertices.size(), std::move(entries),
                                            std::vector<AffineVertex>(vertices.begin(), vertices.end()));
}

double dim_bound(int m, int q, double tol)
{
    if (m < 2) throw domain_error("dim_bound: m must be >= 2");
    if (q < 1) throw domain_error("dim_bound: q must be >= 1");
    int c = m;
    while (c % 3 == 0) c /= 3;
    if (c == 1) return std::log(2.0) / std::log(3.0);
    return std::log(spectral_radius(build_nq(c, q), tol)) / std::log(3.0);
}

} // namespace cantor_ei
