#include "cantor_ei/digraph_ifs.hpp"
#include "cantor_ei/errors.hpp"
#include "cantor_ei/substitution_matrix.hpp"

#include "oracles.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace cantor_ei;

namespace {

std::set<std::pair<long, long>> one_based(const SubstitutionMatrix& m)
{
    std::set<std::pair<long, long>> out;
    for (const auto& e : m.entries()) out.emplace(static_cast<long>(e.row) + 1, static_cast<long>(e.col) + 1);
    return out;
}

double dense_radius(const SubstitutionMatrix& m)
{
    const auto n = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : m.entries()) d(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(d, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace

TEST_SUITE("digraph-ifs")
{
    TEST_CASE("N^q for m = 2 follows the index rules")
    {
        auto n = build_nq(2, 1);
        CHECK(n.dim() == 4);
        std::set<std::pair<long, long>> expected{{1, 1}, {2, 2}, {2, 4}, {3, 1}, {3, 3}, {4, 4}};
        CHECK(one_based(n) == expected);
        for (int m = 2; m <= 7; ++m)
            for (int q = 1; q <= 3; ++q) {
                auto oracle_entries = oracle::nq_entries(m, q);
                std::set<std::pair<long, long>> ref(oracle_entries.begin(), oracle_entries.end());
                CHECK(one_based(build_nq(m, q)) == ref);
            }
    }

    TEST_CASE("N^1 for m = 3 against the reference 5x5")
    {
        auto n = build_nq(3, 1);
        CHECK(n.dim() == 5);
        std::set<std::pair<long, long>> reference{{1, 1}, {2, 2}, {2, 4}, {3, 5}, {4, 2}, {4, 4}, {5, 5}};
        auto built = one_based(n);
        CHECK(std::includes(built.begin(), built.end(), reference.begin(), reference.end()));
        // the fourth rule also fires at i = 3: 3i - 2m^q - 2 = 1
        std::set<std::pair<long, long>> extra;
        std::set_difference(built.begin(), built.end(), reference.begin(), reference.end(),
                            std::inserter(extra, extra.end()));
        CHECK(extra == std::set<std::pair<long, long>>{{3, 1}});
    }

    TEST_CASE("entries and row sums for m <= 10, q <= 5")
    {
        for (int m = 2; m <= 10; ++m)
            for (int q = 1; q <= 5; ++q) {
                CAPTURE(m);
                CAPTURE(q);
                auto n = build_nq(m, q);
                CHECK(n.is_zero_one());
                CHECK(n.row_sum_histogram().rbegin()->first <= 2);
            }
    }

    TEST_CASE("labels align with offsets")
    {
        auto n = build_nq(5, 1);
        REQUIRE(n.labels().size() == 7);
        CHECK(n.labels().front().offset == -1);
        CHECK(n.labels().back().offset == 5);
        CHECK(n.labels()[3].ratio == make_rational(1, 5));
        CHECK(n.labels()[3].shift() == make_rational(2, 5));
    }

    TEST_CASE("size cap")
    {
        CHECK_THROWS_AS(build_nq(10, 7, 1000), resource_limit_error);
        CHECK_THROWS_AS(build_nq(1, 1), domain_error);
        CHECK_THROWS_AS(build_nq(2, 0), domain_error);
    }

    TEST_CASE("spectral radius against a dense eigen solver")
    {
        for (int m = 2; m <= 10; ++m)
            for (int q = 1; q <= 3; ++q) {
                auto n = build_nq(m, q);
                if (n.dim() > 200) continue;
                CAPTURE(m);
                CAPTURE(q);
                CHECK(spectral_radius(n) == doctest::Approx(dense_radius(n)).epsilon(1e-8));
            }
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t dim = 2 + rng() % 30;
            std::vector<SubstitutionMatrix::Entry> e;
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    if (rng() % 5 == 0) e.push_back({i, j, static_cast<int>(1 + rng() % 3)});
            auto m = SubstitutionMatrix::from_entries(dim, e);
            CAPTURE(trial);
            CHECK(spectral_radius(m) == doctest::Approx(dense_radius(m)).epsilon(1e-8));
        }
    }

    TEST_CASE("spectral radius examples")
    {
        std::vector<SubstitutionMatrix::Entry> id;
        for (std::size_t i = 0; i < 6; ++i) id.push_back({i, i, 1});
        CHECK(spectral_radius(SubstitutionMatrix::from_entries(6, id)) == doctest::Approx(1.0));
        CHECK(spectral_radius(SubstitutionMatrix::from_entries(3, {})) == 0.0);
        // nilpotent chain
        auto chain = SubstitutionMatrix::from_entries(3, {{0, 1, 1}, {1, 2, 1}});
        CHECK(spectral_radius(chain) == 0.0);
        // permutation cycle of length 4: period 4, still radius 1
        auto cycle = SubstitutionMatrix::from_entries(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
        CHECK(spectral_radius(cycle) == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("radius bounds")
    {
        for (int m = 2; m <= 10; ++m) {
            if (m % 3 == 0) continue;
            for (int q = 1; q <= 5; ++q) CHECK(spectral_radius(build_nq(m, q)) <= std::sqrt(3.0) + 1e-9);
        }
        for (int m : {3, 9})
            for (int q = 1; q <= 3; ++q) CHECK(std::abs(spectral_radius(build_nq(m, q)) - 2.0) <= 1e-9);
    }

    TEST_CASE("non-convergence is reported")
    {
        // two-cycle on a larger irreducible block needs more than one step
        auto n = build_nq(5, 2);
        CHECK_THROWS_AS(spectral_radius(n, 1e-15, 1), convergence_error);
    }

    TEST_CASE("McClure vertex sets")
    {
        auto v3 = mcclure_vertices(3, 1, 0, 6);
        for (const auto& v : v3) {
            CHECK(v.offset >= -1);
            CHECK(v.offset <= 3);
        }
        auto g3 = mcclure_digraph(3, 1, 0, 6);
        REQUIRE(g3.vertices.size() == 2);
        CHECK(g3.vertices[0].offset == 0);
        CHECK(g3.vertices[1].offset == 2);
        CHECK(g3.edges.size() == 4);

        auto a = mcclure_vertices(2, 1, 0, 4);
        auto b = mcclure_vertices(2, 1, 0, 8);
        CHECK(a == b);

        // seeds whose image is disjoint from C_d yield no vertices
        CHECK(mcclure_vertices(5, 1, 2, 3).empty());

        // weakly shrinking in the depth
        for (int k = 0; k < 25; ++k) {
            auto coarse = mcclure_vertices(5, 2, k, 3);
            auto fine = mcclure_vertices(5, 2, k, 7);
            std::set<long long> c, f;
            for (auto& v : coarse) c.insert(v.offset);
            for (auto& v : fine) f.insert(v.offset);
            CHECK(std::includes(c.begin(), c.end(), f.begin(), f.end()));
        }
        CHECK_THROWS_AS(mcclure_vertices(3, 1, 3, 4), domain_error);
        CHECK_THROWS_AS(mcclure_vertices(3, 1, 0, 0), domain_error);
    }

    TEST_CASE("M^k_q is a principal submatrix of N^q")
    {
        for (int m : {2, 3, 4, 5, 7})
            for (int q = 1; q <= 2; ++q) {
                long long mq = checked_mq(m, q);
                auto n = build_nq(m, q);
                for (long long k = 0; k < mq; ++k) {
                    auto v = mcclure_vertices(m, q, k, 6);
                    auto mk = build_mqk(v, m, q);
                    std::vector<std::size_t> idx;
                    for (auto& x : v) idx.push_back(static_cast<std::size_t>(x.offset + 1));
                    CAPTURE(m);
                    CAPTURE(q);
                    CAPTURE(k);
                    CHECK(mk == n.principal_submatrix(idx));
                    if (mk.dim() > 0) CHECK(spectral_radius(mk) <= spectral_radius(n) + 1e-9);
                }
            }
        CHECK(build_mqk({}, 2, 1).dim() == 0);
        auto v3 = mcclure_vertices(3, 1, 0, 6);
        CHECK(spectral_radius(build_mqk(v3, 3, 1)) == doctest::Approx(2.0).epsilon(1e-12));
    }

    TEST_CASE("digraph edges satisfy the relation")
    {
        auto g = mcclure_digraph(4, 2, 5, 6);
        const long long mq = 16;
        for (const auto& e : g.edges) {
            long long s = g.vertices[e.from].offset, t = g.vertices[e.to].offset;
            long long base = 3 * s - (e.generator == 2 ? 2 * mq : 0);
            CHECK((t == base || t == base + 2));
        }
    }

    TEST_CASE("dimension bound")
    {
        for (int m : {2, 4, 5, 7, 8})
            for (int q = 1; q <= 5; ++q) CHECK(dim_bound(m, q) <= 0.5 + 1e-9);
        const double ln23 = std::log(2.0) / std::log(3.0);
        for (int m : {3, 9, 27}) CHECK(dim_bound(m, 2) == doctest::Approx(ln23).epsilon(1e-12));
        CHECK(dim_bound(6, 1) == doctest::Approx(dim_bound(2, 1)).epsilon(1e-12));
        CHECK(dim_bound(2, 3) <= 0.5);
    }
}
