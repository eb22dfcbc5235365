#include "cantor_ei/interval_set.hpp"

#include "cantor_ei/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace cantor_ei {

void OperationBudget::charge(std::uint64_t operations) const
{
    auto total = used_.fetch_add(operations, std::memory_order_relaxed) + operations;
    if (total > max_)
        throw resource_limit_error("operation budget of " + std::to_string(max_) + " exhausted");
}

namespace detail {

void check_endpoint(const Rational& x, const ExactContext& ctx)
{
    if (denominator_bits(x) > ctx.limits.max_denominator_bits)
        throw resource_limit_error("endpoint denominator exceeds " +
                                   std::to_string(ctx.limits.max_denominator_bits) + " bits");
}

} // namespace detail

namespace {

// Input must be sorted by lo.
std::vector<RationalInterval> merge_sorted(std::vector<RationalInterval> sorted)
{
    std::vector<RationalInterval> out;
    out.reserve(sorted.size());
    for (auto& iv : sorted) {
        if (!(iv.lo < iv.hi)) continue;
        if (!out.empty() && iv.lo <= out.back().hi) {
            if (out.back().hi < iv.hi) out.back().hi = std::move(iv.hi);
        } else {
            out.push_back(std::move(iv));
        }
    }
    return out;
}

} // namespace

IntervalSet IntervalSet::from_intervals(std::vector<RationalInterval> intervals, const ExactContext& ctx)
{
    static const Rational zero(0), one(1);
    ctx.charge(intervals.size());
    for (const auto& iv : intervals) {
        if (iv.lo < zero || iv.hi > one)
            throw domain_error("interval [" + to_string(iv.lo) + ", " + to_string(iv.hi) + "] leaves [0,1]");
        detail::check_endpoint(iv.lo, ctx);
        detail::check_endpoint(iv.hi, ctx);
    }
    if (!std::is_sorted(intervals.begin(), intervals.end(),
                        [](const auto& x, const auto& y) { return x.lo < y.lo; }))
        std::sort(intervals.begin(), intervals.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    IntervalSet s;
    s.intervals_ = merge_sorted(std::move(intervals));
    return s;
}

IntervalSet IntervalSet::unit()
{
    return from_intervals({{Rational(0), Rational(1)}});
}

bool IntervalSet::contains(const Rational& x) const
{
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](const Rational& v, const RationalInterval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    return std::prev(it)->contains(x);
}

IntervalSet cantor_approx(int n, const ExactContext& ctx)
{
    if (n < 0) throw domain_error("cantor_approx: negative depth");
    if (n > ctx.limits.max_depth)
        throw resource_limit_error("cantor_approx: depth " + std::to_string(n) + " above cap " +
                                   std::to_string(ctx.limits.max_depth));
    std::vector<RationalInterval> level{{Rational(0), Rational(1)}};
    const Rational third(1, 3);
    for (int step = 0; step < n; ++step) {
        std::vector<RationalInterval> next;
        next.reserve(level.size() * 2);
        for (const auto& iv : level) {
            Rational len = iv.length() * third;
            next.push_back({iv.lo, iv.lo + len});
            next.push_back({iv.hi - len, iv.hi});
        }
        level = std::move(next);
    }
    return IntervalSet::from_intervals(std::move(level), ctx);
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b, const ExactContext& ctx)
{
    std::vector<RationalInterval> all;
    all.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all),
               [](const auto& x, const auto& y) { return x.lo < y.lo; });
    return IntervalSet::from_intervals(std::move(all), ctx);
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b, const ExactContext& ctx)
{
    const auto& x = a.intervals();
    const auto& y = b.intervals();
    std::vector<RationalInterval> out;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        const Rational& lo = x[i].lo < y[j].lo ? y[j].lo : x[i].lo;
        const Rational& hi = x[i].hi < y[j].hi ? x[i].hi : y[j].hi;
        if (lo < hi) out.push_back({lo, hi});
        if (x[i].hi < y[j].hi) ++i;
        else ++j;
    }
    return IntervalSet::from_intervals(std::move(out), ctx);
}

IntervalSet complement_in_unit(const IntervalSet& a, const ExactContext& ctx)
{
    std::vector<RationalInterval> out;
    Rational cursor(0);
    for (const auto& iv : a) {
        if (cursor < iv.lo) out.push_back({cursor, iv.lo});
        cursor = iv.hi;
    }
    if (cursor < 1) out.push_back({cursor, Rational(1)});
    return IntervalSet::from_intervals(std::move(out), ctx);
}

IntervalSet subtract(const IntervalSet& a, const IntervalSet& b, const ExactContext& ctx)
{
    return intersect(a, complement_in_unit(b, ctx), ctx);
}

bool is_subset(const IntervalSet& a, const IntervalSet& b)
{
    return intersect(a, b) == a;
}

bool touches(const std::vector<RationalInterval>& a, const std::vector<RationalInterval>& b)
{
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const Rational& lo = a[i].lo < b[j].lo ? b[j].lo : a[i].lo;
        const Rational& hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
        if (lo <= hi) return true;
        if (a[i].hi < b[j].hi) ++i;
        else ++j;
    }
    return false;
}

Rational measure(const IntervalSet& a)
{
    Rational total(0);
    for (const auto& iv : a) total += iv.length();
    return total;
}

std::size_t component_count(const IntervalSet& a)
{
    return a.size();
}

namespace {

Integer checked_power(int m, int j, const ExactContext& ctx)
{
    if (m < 2) throw domain_error("preimage_mod1_affine: m must be >= 2");
    if (j < 1) throw domain_error("preimage_mod1_affine: j must be >= 1");
    Integer scale = ipow(Integer(m), static_cast<unsigned long>(j));
    if (mpz_sizeinbase(scale.get_mpz_t(), 2) > ctx.limits.max_denominator_bits)
        throw resource_limit_error("preimage_mod1_affine: m^j exceeds denominator cap");
    return scale;
}

// Copies (a + k)/scale for k in [k_lo, k_hi], pushed in increasing order.
void push_copies(const IntervalSet& a, const Integer& scale, const Integer& k_lo, const Integer& k_hi,
                 std::vector<RationalInterval>& out, const ExactContext& ctx)
{
    Rational inv(1);
    inv /= scale;
    for (Integer k = k_lo; k <= k_hi; ++k) {
        Rational shift(k);
        shift *= inv;
        ctx.charge(a.size());
        for (const auto& iv : a) out.push_back({iv.lo * inv + shift, iv.hi * inv + shift});
    }
}

} // namespace

IntervalSet preimage_mod1_affine(const IntervalSet& a, int m, int j, const ExactContext& ctx)
{
    Integer scale = checked_power(m, j, ctx);
    std::vector<RationalInterval> out;
    push_copies(a, scale, Integer(0), scale - 1, out, ctx);
    return IntervalSet::from_intervals(std::move(out), ctx);
}

IntervalSet preimage_mod1_affine(const IntervalSet& a, int m, int j, const IntervalSet& window,
                                 const ExactContext& ctx)
{
    Integer scale = checked_power(m, j, ctx);
    std::vector<RationalInterval> pieces;
    Integer last_done = -1;
    for (const auto& w : window) {
        // copy k covers [k/scale, (k+1)/scale]; collect the k that reach w.
        Rational lo_scaled = w.lo * Rational(scale);
        Rational hi_scaled = w.hi * Rational(scale);
        Integer k_lo;
        mpz_fdiv_q(k_lo.get_mpz_t(), lo_scaled.get_num_mpz_t(), lo_scaled.get_den_mpz_t());
        Integer k_hi;
        mpz_fdiv_q(k_hi.get_mpz_t(), hi_scaled.get_num_mpz_t(), hi_scaled.get_den_mpz_t());
        if (k_hi >= scale) k_hi = scale - 1;
        if (k_lo <= last_done) k_lo = last_done + 1;
        if (k_lo > k_hi) continue;
        push_copies(a, scale, k_lo, k_hi, pieces, ctx);
        last_done = k_hi;
    }
    return intersect(IntervalSet::from_intervals(std::move(pieces), ctx), window, ctx);
}

void write_text(std::ostream& out, const IntervalSet& a)
{
    for (const auto& iv : a) out << to_string(iv.lo) << ' ' << to_string(iv.hi) << '\n';
}

std::string to_text(const IntervalSet& a)
{
    std::ostringstream os;
    write_text(os, a);
    return os.str();
}

IntervalSet read_text(std::istream& in, const ExactContext& ctx)
{
    std::vector<RationalInterval> intervals;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string lo, hi, extra;
        if (!(fields >> lo)) continue;
        if (!(fields >> hi) || (fields >> extra))
            throw domain_error("interval set line " + std::to_string(line_no) + ": expected two rationals");
        RationalInterval iv{parse_rational(lo), parse_rational(hi)};
        if (iv.hi < iv.lo)
            throw domain_error("interval set line " + std::to_string(line_no) + ": lo > hi");
        intervals.push_back(std::move(iv));
    }
    return IntervalSet::from_intervals(std::move(intervals), ctx);
}

} // namespace cantor_ei
