#include "cantor_ei/theory.hpp"

#include "cantor_ei/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cantor_ei {

IntervalSet cluster_terminating_set(const AffineMap& map, const IntervalSet& exceedance, int q,
                                    const ExactContext& ctx)
{
    if (q < 0) throw domain_error("cluster_terminating_set: q must be >= 0");
    // U ∩ ⋂ T^{-i}(U^c) = U \ ⋃ (T^{-i}(U) ∩ U)
    IntervalSet returns;
    for (int i = 1; i <= q; ++i)
        returns = unite(returns, preimage_within(exceedance, map, i, exceedance, ctx), ctx);
    return subtract(exceedance, returns, ctx);
}

TheoryResult obrien_theta(const AffineMap& map, const IntervalSet& exceedance, int level, int q,
                          const ExactContext& ctx)
{
    TheoryResult r;
    r.map_id = map.id();
    r.level = level;
    r.q = q;
    r.mu_u = measure(exceedance);
    if (r.mu_u == 0) throw domain_error("obrien_theta: exceedance set has measure zero");
    r.mu_a = measure(cluster_terminating_set(map, exceedance, q, ctx));
    r.theta = r.mu_a / r.mu_u;
    return r;
}

TheoryResult obrien_theta(const AffineMap& map, int level, int q, const ExactContext& ctx)
{
    return obrien_theta(map, cantor_approx(level, ctx), level, q, ctx);
}

int three_adic_valuation(long m)
{
    if (m <= 0) throw domain_error("three_adic_valuation: m must be positive");
    int k = 0;
    while (m % 3 == 0) {
        m /= 3;
        ++k;
    }
    return k;
}

bool is_power_of_three(long m)
{
    if (m < 3) return false;
    while (m % 3 == 0) m /= 3;
    return m == 1;
}

int q_schedule(int m, int n)
{
    if (m < 2) throw domain_error("q_schedule: m must be >= 2");
    if (n < 1) throw domain_error("q_schedule: n must be >= 1");
    if (is_power_of_three(m))
        throw domain_error("q_schedule: m = " + std::to_string(m) +
                           " is a power of 3; use compatible_q_schedule(k, n) = floor((n+k-1)/k)");
    const Integer target = ipow(Integer(3), static_cast<unsigned long>(n));
    Integer power(1);
    int q = 0;
    while (power < target) {
        power *= m;
        ++q;
    }
    return q;
}

int compatible_q_schedule(int k, int n)
{
    if (k < 1 || n < 1) throw domain_error("compatible_q_schedule: k and n must be >= 1");
    return (n + k - 1) / k;
}

Integer w_schedule(const Rational& tau, int level)
{
    if (tau <= 0) throw domain_error("w_schedule: tau must be positive");
    if (level < 0) throw domain_error("w_schedule: negative level");
    Rational scaled = tau * Rational(ipow(Integer(3), level), ipow(Integer(2), level));
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    return out;
}

Schedule make_schedule(int m, int n, const Rational& tau)
{
    Schedule s;
    s.n = n;
    s.tau = tau;
    if (is_power_of_three(m)) {
        int k = three_adic_valuation(m);
        s.level = n + k - 1;
        s.q = compatible_q_schedule(k, n);
    } else {
        s.level = n;
        s.q = q_schedule(m, n);
    }
    s.w = w_schedule(tau, s.level);
    return s;
}

Rational theoretical_ei(const std::string& map_id)
{
    if (map_id == "mixed_linear") return Rational(2, 3);
    const std::string prefix = "mx_mod1:";
    if (map_id.rfind(prefix, 0) == 0) {
        long m = 0;
        try {
            m = std::stol(map_id.substr(prefix.size()));
        } catch (const std::exception&) {
            throw domain_error("theoretical_ei: malformed map id '" + map_id + "'");
        }
        if (m < 2) throw domain_error("theoretical_ei: m must be >= 2");
        if (!is_power_of_three(m)) return Rational(1);
        int k = three_adic_valuation(m);
        Rational r(ipow(Integer(2), k), ipow(Integer(3), k));
        return 1 - r;
    }
    throw no_closed_form_error("no closed-form extremal index for map '" + map_id + "'");
}

namespace {

// Copies of `base` under the inverse branches of x -> m^q x mod 1 that meet
// the closed interval [lo, hi], as closed intervals in increasing order.
std::vector<RationalInterval> copies_near(const IntervalSet& base, const Integer& scale, const Rational& lo,
                                          const Rational& hi, const ExactContext& ctx)
{
    std::vector<RationalInterval> out;
    Rational inv = Rational(1) / Rational(scale);
    Rational lo_s = lo * Rational(scale), hi_s = hi * Rational(scale);
    Integer k_lo, k_hi;
    mpz_fdiv_q(k_lo.get_mpz_t(), lo_s.get_num_mpz_t(), lo_s.get_den_mpz_t());
    mpz_fdiv_q(k_hi.get_mpz_t(), hi_s.get_num_mpz_t(), hi_s.get_den_mpz_t());
    k_lo -= 1;
    if (k_lo < 0) k_lo = 0;
    if (k_hi > scale - 1) k_hi = scale - 1;
    const auto& ivs = base.intervals();
    for (Integer k = k_lo; k <= k_hi; ++k) {
        // base interval J lands at (J + k)/scale; keep those meeting [lo, hi]
        Rational y_lo = lo_s - Rational(k), y_hi = hi_s - Rational(k);
        auto it = std::lower_bound(ivs.begin(), ivs.end(), y_lo,
                                   [](const RationalInterval& iv, const Rational& v) { return iv.hi < v; });
        for (; it != ivs.end() && it->lo <= y_hi; ++it) {
            ctx.charge(1);
            out.push_back({(it->lo + Rational(k)) * inv, (it->hi + Rational(k)) * inv});
        }
    }
    return out;
}

// Does the closed set P ∩ Q meet the open interval (lo, hi)?
bool meets_interior(const std::vector<RationalInterval>& p, const std::vector<RationalInterval>& q,
                    const Rational& lo, const Rational& hi)
{
    std::size_t i = 0, j = 0;
    while (i < p.size() && j < q.size()) {
        const Rational& a = std::max(p[i].lo, q[j].lo);
        const Rational& b = std::min(p[i].hi, q[j].hi);
        if (a <= b && a < hi && b > lo) return true;
        if (p[i].hi < q[j].hi) ++i;
        else ++j;
    }
    return false;
}

long long count_at_depth(const IntervalSet& coarse, const IntervalSet& fine, const Integer& scale,
                         const ExactContext& ctx)
{
    long long count = 0;
    for (const auto& comp : coarse) {
        std::vector<RationalInterval> local;
        const auto& ivs = fine.intervals();
        auto it = std::lower_bound(ivs.begin(), ivs.end(), comp.lo,
                                   [](const RationalInterval& iv, const Rational& v) { return iv.hi < v; });
        for (; it != ivs.end() && it->lo <= comp.hi; ++it)
            local.push_back({std::max(it->lo, comp.lo), std::min(it->hi, comp.hi)});
        auto copies = copies_near(fine, scale, comp.lo, comp.hi, ctx);
        if (meets_interior(local, copies, comp.lo, comp.hi)) ++count;
    }
    return count;
}

} // namespace

CoveringCounts covering_counts(int m, int q, int n, int depth, const ExactContext& ctx)
{
    if (m < 2 || q < 1 || n < 0) throw domain_error("covering_counts: need m >= 2, q >= 1, n >= 0");
    if (depth < n) throw domain_error("covering_counts: refine depth must be >= n");
    Integer scale = ipow(Integer(m), static_cast<unsigned long>(q));
    if (mpz_sizeinbase(scale.get_mpz_t(), 2) > ctx.limits.max_denominator_bits)
        throw resource_limit_error("covering_counts: m^q exceeds denominator cap");
    IntervalSet coarse = cantor_approx(n, ctx);
    CoveringCounts out;
    out.depth = depth;
    out.n_star = count_at_depth(coarse, coarse, scale, ctx);
    out.n_refined = depth == n ? out.n_star : count_at_depth(coarse, cantor_approx(depth, ctx), scale, ctx);
    return out;
}

double dim_estimate_from_counts(std::span<const std::pair<int, long long>> counts)
{
    if (counts.size() < 2) throw domain_error("dim_estimate_from_counts: need at least two points");
    const double log3 = std::log(3.0);
    double mx = 0, my = 0;
    for (const auto& [n, count] : counts) {
        if (count < 1) throw domain_error("dim_estimate_from_counts: counts must be positive");
        mx += n * log3;
        my += std::log(static_cast<double>(count));
    }
    mx /= static_cast<double>(counts.size());
    my /= static_cast<double>(counts.size());
    double sxy = 0, sxx = 0;
    for (const auto& [n, count] : counts) {
        double dx = n * log3 - mx;
        sxy += dx * (std::log(static_cast<double>(count)) - my);
        sxx += dx * dx;
    }
    if (sxx == 0) throw domain_error("dim_estimate_from_counts: all points share the same n");
    return sxy / sxx;
}

void write_theory_csv(std::ostream& out, std::span<const TheoryResult> rows)
{
    out << "level,q,mu_U,mu_A,theta\n";
    for (const auto& r : rows)
        out << r.level << ',' << r.q << ',' << to_string(r.mu_u) << ',' << to_string(r.mu_a) << ','
            << to_string(r.theta) << '\n';
}

} // namespace cantor_ei
