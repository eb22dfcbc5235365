#pragma once

// Digraph IFS description of C ∩ T^{-q}(C) for T = m x mod 1 and the
// ternary Cantor set C generated by f_1 = x/3, f_2 = x/3 + 2/3.
//
// Vertices are the similarities g(x) = x/m^q + s/m^q. An edge g -> h with
// generator f_i exists when h = f_i^{-1} g f_j for some j, which gives
//   s_h = 3 s_g + 2 [j = 2] - 2 m^q [i = 2].

#include "cantor_ei/interval_set.hpp"
#include "cantor_ei/substitution_matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cantor_ei {

struct DigraphEdge {
    std::size_t from;
    std::size_t to;
    int generator; ///< 1 for f_1 = x/3, 2 for f_2 = x/3 + 2/3
};

struct DigraphIFS {
    std::vector<AffineVertex> vertices; ///< sorted by offset
    std::vector<DigraphEdge> edges;
};

/// The (m^q + 2)-dimensional matrix N^q over all offsets s in {-1, ..., m^q};
/// row/column i (0-based) carries offset s = i - 1.
SubstitutionMatrix build_nq(int m, int q, std::size_t max_dim = 2'000'000);

/// m^q as a checked 64-bit value.
long long checked_mq(int m, int q, std::size_t max_dim = 2'000'000);

/// Fixed point of S_{k+1} = S_k ∪ {f_i^{-1} h f_j}, seeded with x/m^q + k/m^q,
/// keeping h only when C_d ∩ h(C_d) is nonempty (touching counts). Finite
/// depth gives a superset of the exact vertex set, shrinking as d grows.
DigraphIFS mcclure_digraph(int m, int q, long long k, int depth, const ExactContext& ctx = {});
std::vector<AffineVertex> mcclure_vertices(int m, int q, long long k, int depth, const ExactContext& ctx = {});

/// Adjacency of the relation restricted to `vertices`, rows/columns in the
/// given order. Label-aligned with build_nq via index = offset + 1.
SubstitutionMatrix build_mqk(std::span<const AffineVertex> vertices, int m, int q);

/// Upper bound on dim_B(T^{-q}(C) ∩ C): log rho(N^q(c, q)) / log 3 with c
/// the part of m prime to 3; log 2 / log 3 when m is a power of 3.
double dim_bound(int m, int q, double tol = 1e-10);

} // namespace cantor_ei
