#pragma once

#include "cantor_ei/affine_map.hpp"
#include "cantor_ei/interval_set.hpp"
#include "cantor_ei/rational.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cantor_ei {

/// Finite-level O'Brien ratio mu(A_{q,L}) / mu(U) for U = C_L (or Lambda_L).
struct TheoryResult {
    std::string map_id;
    int level = 0;
    int q = 0;
    Rational theta;
    Rational mu_u;
    Rational mu_a;
};

/// A_q = U ∩ T^{-1}(U^c) ∩ ... ∩ T^{-q}(U^c), the exceedances that end a cluster.
IntervalSet cluster_terminating_set(const AffineMap& map, const IntervalSet& exceedance, int q,
                                    const ExactContext& ctx = {});

TheoryResult obrien_theta(const AffineMap& map, int level, int q, const ExactContext& ctx = {});
TheoryResult obrien_theta(const AffineMap& map, const IntervalSet& exceedance, int level, int q,
                          const ExactContext& ctx = {});

/// Largest k with 3^k | m.
int three_adic_valuation(long m);
bool is_power_of_three(long m);

/// Least q with m^q >= 3^n. domain_error when m is a power of 3 (use compatible_q_schedule).
int q_schedule(int m, int n);
/// floor((n + k - 1) / k), the gap count for T = 3^k x mod 1.
int compatible_q_schedule(int k, int n);
/// floor(tau * 3^L / 2^L).
Integer w_schedule(const Rational& tau, int level);

struct Schedule {
    int n = 0;
    int level = 0; ///< threshold index L: n for m != 3^k, n + k - 1 for m = 3^k
    int q = 0;
    Integer w;
    Rational tau;
};
Schedule make_schedule(int m, int n, const Rational& tau = Rational(1));

/// Closed-form EI: "mx_mod1:M" (1 unless M = 3^k, then 1 - 2^k/3^k) and
/// "mixed_linear" (2/3). no_closed_form_error for anything else.
Rational theoretical_ei(const std::string& map_id);

struct CoveringCounts {
    long long n_star = 0;
    long long n_refined = 0;
    int depth = 0;
};

/// Counts components I of C_n whose interior meets C_n ∩ T^{-q}(C_n)
/// (n_star) and C_d ∩ T^{-q}(C_d) (n_refined), for T = m x mod 1.
CoveringCounts covering_counts(int m, int q, int n, int depth, const ExactContext& ctx = {});

/// Least-squares slope of log N against n log 3.
double dim_estimate_from_counts(std::span<const std::pair<int, long long>> counts);

void write_theory_csv(std::ostream& out, std::span<const TheoryResult> rows);

} // namespace cantor_ei
