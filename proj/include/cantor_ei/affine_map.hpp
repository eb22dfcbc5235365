#pragma once

#include "cantor_ei/interval_set.hpp"
#include "cantor_ei/rational.hpp"

#include <string>
#include <vector>

namespace cantor_ei {

/// y = slope * x + intercept on the closed domain [lo, hi].
struct AffineBranch {
    Rational lo;
    Rational hi;
    Rational slope;
    Rational intercept;

    Rational apply(const Rational& x) const { return slope * x + intercept; }
    Rational invert(const Rational& y) const { return (y - intercept) / slope; }
    /// Image of the domain, as an ordered interval.
    RationalInterval image() const;

    friend bool operator==(const AffineBranch&, const AffineBranch&) = default;
};

/// Piecewise-affine interval map with exact rational coefficients. Branch
/// domains partition [0,1] (consecutive, sharing endpoints) and every image
/// lies in [0,1].
class AffineMap {
public:
    AffineMap(std::string id, std::vector<AffineBranch> branches);

    /// x -> m x mod 1 as m increasing full branches.
    static AffineMap mod1(int m);
    /// First branch of 3x mod 1 on [0,1/3], the full branch 3x-1 on
    /// [1/3,2/3], and five slope-15 full branches on [2/3,1].
    static AffineMap mixed_linear();

    const std::string& id() const noexcept { return id_; }
    const std::vector<AffineBranch>& branches() const noexcept { return branches_; }

    /// Branch lookup is right-closed at the left endpoint; x = 1 uses the last branch.
    Rational eval(const Rational& x) const;
    double eval(double x) const;

    /// The k-fold composition T^k as a piecewise-affine map.
    AffineMap iterate(int k, const ExactContext& ctx = {}) const;

    /// True when Σ 1/|slope| over each point's preimages is 1, i.e. every
    /// branch is full and the reciprocal slopes sum to one.
    bool preserves_lebesgue() const;

private:
    std::size_t locate(const Rational& x) const;

    std::string id_;
    std::vector<AffineBranch> branches_;
};

/// T^{-1}(a): union of the per-branch affine preimages of a ∩ image(branch).
IntervalSet preimage_piecewise_affine(const IntervalSet& a, const AffineMap& map, const ExactContext& ctx = {});

/// T^{-j}(a) ∩ window, enumerating only the inverse-branch cylinders of
/// depth j that overlap the window.
IntervalSet preimage_within(const IntervalSet& a, const AffineMap& map, int j, const IntervalSet& window,
                            const ExactContext& ctx = {});

} // namespace cantor_ei
