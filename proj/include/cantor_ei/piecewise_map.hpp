#pragma once

// Float-evaluable interval maps: the simulation zoo.

#include "cantor_ei/affine_map.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cantor_ei {

namespace branch {
/// m x - floor(m x)
struct Mod1 {
    int m;
};
struct Affine {
    double slope;
    double intercept;
};
/// a x^2 + b x + c
struct Quadratic {
    double a;
    double b;
    double c;
};
/// 1/x - floor(1/x), with 0 -> 0
struct Gauss {};
/// x + angle mod 1
struct Rotation {
    double angle;
};
} // namespace branch

using BranchKind = std::variant<branch::Mod1, branch::Affine, branch::Quadratic, branch::Gauss, branch::Rotation>;

struct FloatBranch {
    double lo;
    double hi;
    BranchKind kind;
};

class PiecewiseMap {
public:
    PiecewiseMap(std::string id, std::vector<FloatBranch> branches, std::optional<AffineMap> exact = std::nullopt);
    /// Float view of an exact piecewise-affine map.
    explicit PiecewiseMap(const AffineMap& exact);

    const std::string& id() const noexcept { return id_; }
    const std::vector<FloatBranch>& branches() const noexcept { return branches_; }
    /// The exact representation, when every branch is affine with rational coefficients.
    const std::optional<AffineMap>& exact() const noexcept { return exact_; }

    /// domain_error outside [0,1]; result clamped to [0,1].
    double operator()(double x) const;

private:
    std::string id_;
    std::vector<FloatBranch> branches_;
    std::optional<AffineMap> exact_;
};

double eval_map(const PiecewiseMap& map, double x);

/// Known ids: mx_mod1:M, mixed_linear, nonlinear, gauss, rotation,
/// quadratic_compatible. config_error for anything else.
PiecewiseMap make_map(const std::string& id);
/// Exact affine maps of the zoo (mx_mod1:M, mixed_linear); unsupported_map_error otherwise.
AffineMap make_affine_map(const std::string& id);

/// Default burn-in for a zoo map: nonzero for maps without Lebesgue invariance.
long default_burnin(const std::string& id);

} // namespace cantor_ei
