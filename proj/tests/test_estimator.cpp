#include "cantor_ei/errors.hpp"
#include "cantor_ei/estimator.hpp"
#include "cantor_ei/piecewise_map.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <cmath>
#include <random>
#include <sstream>

using namespace cantor_ei;

namespace {

ObservableSeries series(std::vector<int> levels, std::string id = "test")
{
    ObservableSeries s;
    s.levels = std::move(levels);
    s.map_id = std::move(id);
    return s;
}

SweepTable table_from(std::vector<std::pair<int, double>> u_mean)
{
    SweepTable t;
    for (auto [u, m] : u_mean) t.rows.push_back({u, 1, m, 0.0, 1, 0});
    return t;
}

} // namespace

TEST_SUITE("estimator")
{
    TEST_CASE("hsing examples")
    {
        std::vector<int> iso{6, 0, 6, 0, 6, 0, 6, 0, 6, 0};
        auto a = hsing_theta(iso, 5, 1);
        CHECK(a.numerator == 5);
        CHECK(a.denominator == 5);
        CHECK(a.theta_hat == 1.0);
        std::vector<int> pairs{6, 6, 0, 6, 6, 0, 6, 6, 0};
        auto b = hsing_theta(pairs, 5, 1);
        CHECK(b.numerator == 3);
        CHECK(b.denominator == 6);
        CHECK(b.theta_hat == 0.5);
        auto c = hsing_theta(pairs, 5, 0);
        CHECK(c.theta_hat == 1.0);
        std::vector<int> quiet{1, 2, 3};
        CHECK_FALSE(hsing_theta(quiet, 5, 1).defined());
        CHECK_THROWS_AS(hsing_theta(quiet, 0, 1), domain_error);
        CHECK_THROWS_AS(hsing_theta(quiet, 2, 3), domain_error);
        CHECK_THROWS_AS(hsing_theta(quiet, 2, -1), domain_error);
    }

    TEST_CASE("exhaustive equivalence on short series over three letters")
    {
        // letters map to levels {1, 5, 9}; thresholds 1..9 hit every split
        const int letters[3] = {1, 5, 9};
        long checked = 0;
        for (int len = 1; len <= 12; ++len) {
            long total = 1;
            for (int i = 0; i < len; ++i) total *= 3;
            std::vector<int> x(static_cast<std::size_t>(len));
            for (long code = 0; code < total; ++code) {
                long c = code;
                for (int i = 0; i < len; ++i, c /= 3) x[static_cast<std::size_t>(i)] = letters[c % 3];
                for (int u : {1, 4, 5, 8}) {
                    for (int q = 0; q < std::min(len, 4); ++q) {
                        auto rec = hsing_theta(x, u, q);
                        auto [num, den] = oracle::hsing_counts(x, u, q);
                        if (rec.numerator != num || rec.denominator != den) {
                            FAIL("mismatch at length " << len << " code " << code << " u " << u << " q " << q);
                        }
                        ++checked;
                    }
                    SweepGrid grid{u, u, {0, 1, 2, 3}};
                    grid.q_list.erase(std::remove_if(grid.q_list.begin(), grid.q_list.end(),
                                                     [&](int q) { return q >= len; }),
                                      grid.q_list.end());
                    auto recs = estimate_grid(x, grid);
                    for (const auto& r : recs) {
                        auto [num, den] = oracle::hsing_counts(x, u, r.q);
                        if (r.numerator != num || r.denominator != den) FAIL("grid mismatch at length " << len);
                    }
                }
            }
        }
        CHECK(checked > 1000000);
    }

    TEST_CASE("bounds and monotonicity in q on random series")
    {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 10000; ++trial) {
            std::size_t len = 20 + rng() % 80;
            std::vector<int> x(len);
            for (auto& v : x) v = 1 + static_cast<int>(rng() % 12);
            int u = 1 + static_cast<int>(rng() % 10);
            // on a common index range the numerator sets are nested
            auto head = std::span<const int>(x).first(len - 10);
            long long prev_num = -1;
            for (int q = 0; q <= 10; ++q) {
                auto r = hsing_theta(x, u, q);
                if (r.defined()) CHECK((r.theta_hat >= 0.0 && r.theta_hat <= 1.0));
                long long num = 0;
                for (std::size_t i = 0; i < head.size(); ++i) {
                    if (head[i] <= u) continue;
                    bool ends = true;
                    for (int j = 1; j <= q; ++j) ends = ends && x[i + static_cast<std::size_t>(j)] <= u;
                    num += ends;
                }
                if (prev_num >= 0) CHECK(num <= prev_num);
                prev_num = num;
            }
        }
    }

    TEST_CASE("truncation can raise the estimate with q")
    {
        std::vector<int> x{6, 6, 0, 0, 6, 6};
        CHECK(hsing_theta(x, 5, 1).theta_hat == doctest::Approx(1.0 / 3.0));
        CHECK(hsing_theta(x, 5, 2).theta_hat == doctest::Approx(0.5));
    }

    TEST_CASE("sweep aggregates and flags undefined estimates")
    {
        std::vector<ObservableSeries> ens{series(std::vector<int>(50, 100))};
        SweepGrid grid{1, 5, {1, 5}};
        auto t = sweep(ens, grid);
        REQUIRE(t.rows.size() == 10);
        for (const auto& r : t.rows) {
            CHECK(r.defined_count == 1);
            CHECK(r.mean_theta == 0.0);
        }
        std::vector<ObservableSeries> flat{series(std::vector<int>(50, 1))};
        auto tf = sweep(flat, grid);
        for (const auto& r : tf.rows) {
            CHECK(r.defined_count == 0);
            CHECK(r.undefined_count == 1);
            CHECK(std::isnan(r.mean_theta));
        }
        CHECK(t.rows[0].u == 1);
        CHECK(t.rows[0].q == 1);
        CHECK(t.rows[1].q == 5);
        CHECK(t.rows[2].u == 2);
        CHECK_THROWS_AS(sweep(std::vector<ObservableSeries>{}, grid), domain_error);
    }

    TEST_CASE("mean and sample sd")
    {
        std::vector<ObservableSeries> ens{series({6, 0, 6, 0, 6, 0}), series({6, 6, 0, 6, 6, 0}), series({0, 0, 0, 0})};
        auto t = sweep(ens, SweepGrid{5, 5, {1}});
        REQUIRE(t.rows.size() == 1);
        // per-orbit: 3/3 and 2/4
        CHECK(t.rows[0].mean_theta == doctest::Approx(0.75));
        CHECK(t.rows[0].sd_theta == doctest::Approx(std::sqrt(0.125)));
        CHECK(t.rows[0].defined_count == 2);
        CHECK(t.rows[0].undefined_count == 1);
    }

    TEST_CASE("permutation invariance")
    {
        std::mt19937_64 rng(29);
        std::vector<ObservableSeries> ens;
        for (int i = 0; i < 40; ++i) {
            std::vector<int> x(200);
            for (auto& v : x) v = 1 + static_cast<int>(rng() % 15);
            ens.push_back(series(x));
        }
        SweepGrid grid{1, 12, {1, 5, 10}};
        auto base = sweep(ens, grid);
        for (int k = 0; k < 5; ++k) {
            std::shuffle(ens.begin(), ens.end(), rng);
            auto t = sweep(ens, grid);
            REQUIRE(t.rows.size() == base.rows.size());
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                CHECK(std::memcmp(&t.rows[i].mean_theta, &base.rows[i].mean_theta, sizeof(double)) == 0);
                CHECK(std::memcmp(&t.rows[i].sd_theta, &base.rows[i].sd_theta, sizeof(double)) == 0);
            }
        }
    }

    TEST_CASE("simulation is identical for any thread count")
    {
        auto map = make_map("mx_mod1:3");
        SimulationConfig cfg;
        cfg.n = 2000;
        cfg.ell = 16;
        cfg.seed = 99;
        SweepGrid grid{1, 10, {1, 5}};
        std::ostringstream one, many;
        cfg.threads = 1;
        write_sweep_csv(one, simulate_sweep(map, cfg, grid));
        cfg.threads = 4;
        write_sweep_csv(many, simulate_sweep(map, cfg, grid));
        CHECK(one.str() == many.str());
        CHECK(one.str().rfind("map,observable,n,ell,seed,u,q,mean_theta,sd_theta,defined_count", 0) == 0);
    }

    TEST_CASE("stability regions")
    {
        auto flat = table_from({{1, 0.5}, {2, 0.5}, {3, 0.5}, {4, 0.5}, {5, 0.5}});
        auto p = stability_region(flat, 3, 0.01);
        REQUIRE(p.size() == 1);
        CHECK(p[0].u_lo == 1);
        CHECK(p[0].u_hi == 5);
        CHECK(p[0].value == doctest::Approx(0.5));

        auto rising = table_from({{1, 0.1}, {2, 0.2}, {3, 0.3}, {4, 0.4}, {5, 0.5}});
        CHECK(stability_region(rising, 2, 0.05).empty());

        auto two = table_from({{1, 0.3}, {2, 0.3}, {3, 0.3}, {4, 0.9}, {5, 0.6}, {6, 0.6}, {7, 0.6}});
        auto q = stability_region(two, 3, 0.01);
        REQUIRE(q.size() == 2);
        CHECK(q[0].u_hi == 3);
        CHECK(q[1].u_lo == 5);
        CHECK(q[1].value == doctest::Approx(0.6));
        CHECK_THROWS_AS(stability_region(flat, 1, 0.01), domain_error);
    }

    TEST_CASE("parallel_for covers every index once")
    {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
        CHECK_THROWS_AS(parallel_for(10, 4, [](std::size_t i) {
                            if (i == 7) throw domain_error("boom");
                        }),
                        domain_error);
    }
}
