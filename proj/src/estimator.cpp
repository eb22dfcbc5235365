#include "cantor_ei/estimator.hpp"

#include "cantor_ei/errors.hpp"
#include "cantor_ei/rational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace cantor_ei {

namespace {

void check_grid(const SweepGrid& grid)
{
    if (grid.u_min < 1 || grid.u_max < grid.u_min) throw domain_error("sweep: need 1 <= u_min <= u_max");
    if (grid.q_list.empty()) throw domain_error("sweep: empty q list");
    for (int q : grid.q_list)
        if (q < 0) throw domain_error("sweep: q must be >= 0");
}

// Sum in fixed pairwise order.
double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

SweepRow summarise(int u, int q, std::vector<double> values, std::size_t undefined)
{
    SweepRow row{u, q, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                 values.size(), undefined};
    if (values.empty()) return row;
    std::sort(values.begin(), values.end());
    const double mean = pairwise_sum(values) / static_cast<double>(values.size());
    row.mean_theta = mean;
    if (values.size() >= 2) {
        std::vector<double> dev;
        dev.reserve(values.size());
        for (double x : values) dev.push_back((x - mean) * (x - mean));
        std::sort(dev.begin(), dev.end());
        row.sd_theta = std::sqrt(pairwise_sum(dev) / static_cast<double>(values.size() - 1));
    }
    return row;
}

SweepTable aggregate(const std::vector<std::vector<EstimateRecord>>& per_orbit, const SweepGrid& grid, SweepMeta meta)
{
    SweepTable table;
    table.meta = std::move(meta);
    const std::size_t cells = static_cast<std::size_t>(grid.u_max - grid.u_min + 1) * grid.q_list.size();
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<double> values;
        std::size_t undefined = 0;
        for (const auto& orbit : per_orbit) {
            const auto& r = orbit[c];
            if (r.defined())
                values.push_back(r.theta_hat);
            else
                ++undefined;
        }
        const int u = grid.u_min + static_cast<int>(c / grid.q_list.size());
        const int q = grid.q_list[c % grid.q_list.size()];
        table.rows.push_back(summarise(u, q, std::move(values), undefined));
    }
    return table;
}

} // namespace

EstimateRecord hsing_theta(std::span<const int> levels, int u, int q)
{
    if (q < 0) throw domain_error("hsing_theta: q must be >= 0");
    if (u < 1) throw domain_error("hsing_theta: u must be >= 1");
    const auto n = static_cast<long long>(levels.size());
    if (n <= q) throw domain_error("hsing_theta: series length must exceed q");
    EstimateRecord r{u, q, 0, 0, 0.0};
    for (long long i = 0; i <= n - 1 - q; ++i) {
        if (levels[i] <= u) continue;
        ++r.denominator;
        bool ends = true;
        for (long long j = i + 1; j <= i + q; ++j)
            if (levels[j] > u) {
                ends = false;
                break;
            }
        if (ends) ++r.numerator;
    }
    if (r.defined()) r.theta_hat = static_cast<double>(r.numerator) / static_cast<double>(r.denominator);
    return r;
}

std::vector<EstimateRecord> estimate_grid(std::span<const int> levels, const SweepGrid& grid)
{
    check_grid(grid);
    const auto n = static_cast<long long>(levels.size());
    for (int q : grid.q_list)
        if (n <= q) throw domain_error("sweep: series length must exceed every q");
    std::vector<EstimateRecord> out;
    const std::size_t nq = grid.q_list.size();
    out.reserve(static_cast<std::size_t>(grid.u_max - grid.u_min + 1) * nq);
    for (int u = grid.u_min; u <= grid.u_max; ++u) {
        std::size_t base = out.size();
        for (int q : grid.q_list) out.push_back({u, q, 0, 0, 0.0});
        long long next = std::numeric_limits<long long>::max(); // next exceedance after i
        for (long long i = n - 1; i >= 0; --i) {
            if (levels[i] <= u) continue;
            for (std::size_t k = 0; k < nq; ++k) {
                const long long q = grid.q_list[k];
                if (i > n - 1 - q) continue;
                auto& r = out[base + k];
                ++r.denominator;
                if (next > i + q) ++r.numerator;
            }
            next = i;
        }
        for (std::size_t k = 0; k < nq; ++k) {
            auto& r = out[base + k];
            if (r.defined()) r.theta_hat = static_cast<double>(r.numerator) / static_cast<double>(r.denominator);
        }
    }
    return out;
}

SweepTable sweep(std::span<const ObservableSeries> ensemble, const SweepGrid& grid, SweepMeta meta)
{
    if (ensemble.empty()) throw domain_error("sweep: empty ensemble");
    std::vector<std::vector<EstimateRecord>> per_orbit;
    per_orbit.reserve(ensemble.size());
    for (const auto& s : ensemble) per_orbit.push_back(estimate_grid(s.levels, grid));
    if (meta.ell == 0) meta.ell = ensemble.size();
    if (meta.n == 0) meta.n = ensemble.front().levels.size();
    if (meta.map_id.empty()) meta.map_id = ensemble.front().map_id;
    return aggregate(per_orbit, grid, std::move(meta));
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(count, 1024))));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; !failed && (i = next.fetch_add(1)) < count;) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SweepTable simulate_sweep(const PiecewiseMap& map, const SimulationConfig& config, const SweepGrid& grid)
{
    check_grid(grid);
    if (config.n < 1 || config.ell < 1) throw domain_error("simulate: n and ell must be >= 1");
    const auto x0 = sample_initial_points(config.ell, config.seed);
    std::vector<std::vector<EstimateRecord>> per_orbit(config.ell);
    parallel_for(config.ell, config.threads, [&](std::size_t i) {
        auto series = generate_series(map, config.observable, config.n, x0[i], config.cap, config.burnin);
        per_orbit[i] = estimate_grid(series.levels, grid);
    });
    SweepMeta meta{map.id(), to_string(config.observable), config.n, config.ell, config.seed, config.burnin, config.cap};
    return aggregate(per_orbit, grid, std::move(meta));
}

std::vector<Plateau> stability_region(const SweepTable& table, int window, double eps)
{
    if (window < 2) throw domain_error("stability_region: window must be >= 2");
    // means grouped by u
    std::vector<int> us;
    std::vector<std::vector<double>> means;
    for (const auto& row : table.rows) {
        if (us.empty() || us.back() != row.u) {
            if (!us.empty() && row.u < us.back()) throw domain_error("stability_region: table not sorted by u");
            us.push_back(row.u);
            means.emplace_back();
        }
        means.back().push_back(row.mean_theta);
    }
    std::vector<Plateau> out;
    std::size_t w = static_cast<std::size_t>(window);
    long long open_end = -1; // last index covered by the current plateau
    std::size_t open_start = 0;
    auto close = [&] {
        if (open_end < 0) return;
        std::vector<double> all;
        for (std::size_t i = open_start; i <= static_cast<std::size_t>(open_end); ++i)
            all.insert(all.end(), means[i].begin(), means[i].end());
        std::sort(all.begin(), all.end());
        out.push_back({us[open_start], us[open_end], pairwise_sum(all) / static_cast<double>(all.size())});
        open_end = -1;
    };
    for (std::size_t s = 0; s + w <= us.size(); ++s) {
        bool stable = us[s + w - 1] - us[s] == window - 1;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = s; stable && i < s + w; ++i)
            for (double m : means[i]) {
                if (std::isnan(m)) {
                    stable = false;
                    break;
                }
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
        if (stable && hi - lo >= eps) stable = false;
        if (!stable) continue;
        if (open_end >= 0 && static_cast<long long>(s) > open_end) close();
        if (open_end < 0) open_start = s;
        open_end = static_cast<long long>(s + w - 1);
    }
    close();
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table, bool with_header)
{
    const auto& m = table.meta;
    if (with_header) out << "map,observable,n,ell,seed,u,q,mean_theta,sd_theta,defined_count\n";
    for (const auto& r : table.rows)
        out << m.map_id << ',' << m.observable << ',' << m.n << ',' << m.ell << ',' << m.seed << ',' << r.u << ','
            << r.q << ',' << format_real(r.mean_theta) << ',' << format_real(r.sd_theta) << ',' << r.defined_count
            << '\n';
}

} // namespace cantor_ei
