#pragma once

// Affine IFS attractors, their survivor approximations and the compatible
// full-branch map.

#include "cantor_ei/affine_map.hpp"
#include "cantor_ei/interval_set.hpp"
#include "cantor_ei/rational.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cantor_ei {

/// f(x) = ratio * x + offset
struct Contraction {
    Rational ratio;
    Rational offset;

    Rational apply(const Rational& x) const { return ratio * x + offset; }
    friend bool operator==(const Contraction&, const Contraction&) = default;
};

class AffineIFS {
public:
    /// Sorts by offset; domain_error unless 0 < ratio < 1, images J_i lie in
    /// [0,1] and are pairwise disjoint.
    explicit AffineIFS(std::vector<Contraction> maps);

    /// f_1 = x/3, f_2 = x/3 + 2/3
    static AffineIFS ternary();

    const std::vector<Contraction>& maps() const noexcept { return maps_; }
    std::size_t size() const noexcept { return maps_.size(); }
    Rational ratio_sum() const;
    /// J_i = f_i([0,1])
    RationalInterval image(std::size_t i) const;

private:
    std::vector<Contraction> maps_;
};

/// One contraction per line, "ratio offset" as rationals; '#' starts a comment.
AffineIFS parse_ifs(std::istream& in);
AffineIFS load_ifs(const std::string& path);

/// Lambda_n: union over words w of length n of f_w([0,1]).
IntervalSet survivor_approx(const AffineIFS& ifs, int n, const ExactContext& ctx = {});

/// F = f_i^{-1} on J_i and the increasing affine map onto [0,1] on each gap.
AffineMap compatible_map(const AffineIFS& ifs);

/// mu(Lambda_{n+k-1} \ Lambda_{n+2k-1}) / mu(Lambda_{n+k-1}).
Rational general_theta(const AffineIFS& ifs, int k, int n, const ExactContext& ctx = {});
/// 1 - (Σ λ_i)^k, the value of general_theta for every n.
Rational general_theta_limit(const AffineIFS& ifs, int k);

/// d with Σ λ_i^d = 1, by bisection.
double similarity_dimension(const AffineIFS& ifs, double tol = 1e-12);

/// g(x) = 6x(1-x) on the outer pieces, linear onto [0,1] on
/// [(3-√3)/6, (3+√3)/6).
double quadratic_compatible_map(double x);
/// escape_time under 6x(1-x)
int quadratic_survivor_observable(double x, int cap);

} // namespace cantor_ei
