#pragma once

// Exact finite unions of closed subintervals of [0,1].
//
// Sets are handled modulo Lebesgue-null sets: every IntervalSet is the
// closure of its interior. Zero-length pieces are dropped, intervals that
// touch are merged, and the complement of a set is the closure of its
// set-theoretic complement. With these conventions the operations below
// form a Boolean algebra and all measures are exact.

#include "cantor_ei/rational.hpp"

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace cantor_ei {

struct ExactLimits {
    int max_depth = 20;
    std::size_t max_denominator_bits = 4096;
};

/// Shared operation counter for long exact computations. Charged at
/// interval-merge boundaries; exceeding it raises resource_limit_error.
class OperationBudget {
public:
    explicit OperationBudget(std::uint64_t max_operations = std::numeric_limits<std::uint64_t>::max())
        : max_(max_operations) {}

    void charge(std::uint64_t operations) const;
    std::uint64_t used() const noexcept { return used_.load(std::memory_order_relaxed); }
    std::uint64_t limit() const noexcept { return max_; }

private:
    std::uint64_t max_;
    mutable std::atomic<std::uint64_t> used_{0};
};

struct ExactContext {
    ExactLimits limits{};
    const OperationBudget* budget = nullptr;

    void charge(std::uint64_t operations) const
    {
        if (budget) budget->charge(operations);
    }
};

struct RationalInterval {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }

    friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

class IntervalSet {
public:
    IntervalSet() = default;

    /// Normalises arbitrary closed intervals: drops empty and zero-length
    /// pieces, sorts, merges overlapping or touching pieces. Every endpoint
    /// must lie in [0,1] (domain_error otherwise).
    static IntervalSet from_intervals(std::vector<RationalInterval> intervals, const ExactContext& ctx = {});
    static IntervalSet unit();

    const std::vector<RationalInterval>& intervals() const noexcept { return intervals_; }
    std::size_t size() const noexcept { return intervals_.size(); }
    bool empty() const noexcept { return intervals_.empty(); }
    auto begin() const noexcept { return intervals_.begin(); }
    auto end() const noexcept { return intervals_.end(); }

    bool contains(const Rational& x) const;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<RationalInterval> intervals_;
};

/// C_n: 2^n intervals of length 3^-n. resource_limit_error above ctx.limits.max_depth.
IntervalSet cantor_approx(int n, const ExactContext& ctx = {});

IntervalSet unite(const IntervalSet& a, const IntervalSet& b, const ExactContext& ctx = {});
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b, const ExactContext& ctx = {});
IntervalSet complement_in_unit(const IntervalSet& a, const ExactContext& ctx = {});
/// a \ b, taken as a ∩ complement(b).
IntervalSet subtract(const IntervalSet& a, const IntervalSet& b, const ExactContext& ctx = {});

bool is_subset(const IntervalSet& a, const IntervalSet& b);

/// True when the closed sets share at least one point (touching counts).
bool touches(const std::vector<RationalInterval>& a, const std::vector<RationalInterval>& b);

Rational measure(const IntervalSet& a);
std::size_t component_count(const IntervalSet& a);

/// T^{-j}(a) for T(x) = m x mod 1: the m^j translated copies (a + k)/m^j.
IntervalSet preimage_mod1_affine(const IntervalSet& a, int m, int j, const ExactContext& ctx = {});

/// Same, restricted to a window: T^{-j}(a) ∩ window, enumerating only the
/// copies that reach the window.
IntervalSet preimage_mod1_affine(const IntervalSet& a, int m, int j, const IntervalSet& window,
                                 const ExactContext& ctx = {});

/// Text form: one interval per line, "p/q r/s".
void write_text(std::ostream& out, const IntervalSet& a);
std::string to_text(const IntervalSet& a);
IntervalSet read_text(std::istream& in, const ExactContext& ctx = {});

namespace detail {
/// Throws resource_limit_error when x's denominator exceeds the cap.
void check_endpoint(const Rational& x, const ExactContext& ctx);
} // namespace detail

} // namespace cantor_ei
