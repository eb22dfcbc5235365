#include "cantor_ei/substitution_matrix.hpp"

#include "cantor_ei/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace cantor_ei {

SubstitutionMatrix SubstitutionMatrix::from_entries(std::size_t dim, std::vector<Entry> entries,
                                                    std::vector<AffineVertex> labels)
{
    if (!labels.empty() && labels.size() != dim)
        throw domain_error("substitution matrix: label count does not match dimension");
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    SubstitutionMatrix m;
    m.dim_ = dim;
    m.labels_ = std::move(labels);
    m.row_start_.assign(dim + 1, 0);
    std::size_t last_row = dim;
    for (const auto& e : entries) {
        if (e.row >= dim || e.col >= dim) throw domain_error("substitution matrix: entry out of range");
        if (e.value < 0) throw domain_error("substitution matrix: negative entry");
        if (e.value == 0) continue;
        if (last_row == e.row && m.cols_.back() == e.col) {
            m.values_.back() += e.value;
            continue;
        }
        m.cols_.push_back(e.col);
        m.values_.push_back(e.value);
        ++m.row_start_[e.row + 1];
        last_row = e.row;
    }
    for (std::size_t i = 1; i <= dim; ++i) m.row_start_[i] += m.row_start_[i - 1];
    return m;
}

std::span<const std::size_t> SubstitutionMatrix::row_cols(std::size_t i) const
{
    return {cols_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

std::span<const int> SubstitutionMatrix::row_values(std::size_t i) const
{
    return {values_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

int SubstitutionMatrix::at(std::size_t i, std::size_t j) const
{
    auto cols = row_cols(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0;
    return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

long long SubstitutionMatrix::row_sum(std::size_t i) const
{
    long long s = 0;
    for (int v : row_values(i)) s += v;
    return s;
}

std::vector<SubstitutionMatrix::Entry> SubstitutionMatrix::entries() const
{
    std::vector<Entry> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < dim_; ++i) {
        auto cols = row_cols(i);
        auto vals = row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) out.push_back({i, cols[k], vals[k]});
    }
    return out;
}

std::map<long long, std::size_t> SubstitutionMatrix::row_sum_histogram() const
{
    std::map<long long, std::size_t> hist;
    for (std::size_t i = 0; i < dim_; ++i) ++hist[row_sum(i)];
    return hist;
}

bool SubstitutionMatrix::is_zero_one() const
{
    return std::all_of(values_.begin(), values_.end(), [](int v) { return v == 1; });
}

void SubstitutionMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0;
        for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) acc += values_[k] * x[cols_[k]];
        y[i] = acc;
    }
}

SubstitutionMatrix SubstitutionMatrix::principal_submatrix(std::span<const std::size_t> indices) const
{
    constexpr auto absent = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> position(dim_, absent);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= dim_) throw domain_error("principal_submatrix: index out of range");
        position[indices[k]] = k;
    }
    std::vector<Entry> entries;
    std::vector<AffineVertex> labels;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        std::size_t i = indices[k];
        if (!labels_.empty()) labels.push_back(labels_[i]);
        auto cols = row_cols(i);
        auto vals = row_values(i);
        for (std::size_t t = 0; t < cols.size(); ++t)
            if (position[cols[t]] != absent) entries.push_back({k, position[cols[t]], vals[t]});
    }
    return from_entries(indices.size(), std::move(entries), std::move(labels));
}

std::vector<std::vector<std::size_t>> SubstitutionMatrix::strong_components() const
{
    // Iterative Tarjan.
    constexpr auto unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(dim_, unvisited), low(dim_, 0);
    std::vector<char> on_stack(dim_, 0);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call; // (vertex, next edge offset)
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < dim_; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, row_start_[root]});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge < row_start_[v + 1]) {
                std::size_t w = cols_[edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, row_start_[w]});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            std::size_t finished = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
            if (low[finished] == index[finished]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != finished);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
        }
    }
    return components;
}

namespace {

double component_radius(const SubstitutionMatrix& block, double tol, int max_iterations)
{
    const std::size_t n = block.dim();
    if (n == 1) return block.at(0, 0);
    if (block.nnz() == 0) return 0.0;

    std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
    double previous = std::numeric_limits<double>::quiet_NaN();
    double estimate = previous;
    for (int it = 0; it < max_iterations; ++it) {
        block.multiply(x, y);
        double lower = std::numeric_limits<double>::infinity(), upper = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += x[i]; // shift by the identity
            double ratio = y[i] / x[i];
            lower = std::min(lower, ratio);
            upper = std::max(upper, ratio);
            total += y[i];
        }
        previous = estimate;
        estimate = 0.5 * (lower + upper) - 1.0;
        if (upper - lower <= tol * upper) return estimate;
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / total;
    }
    throw convergence_error("spectral_radius: no convergence within " + std::to_string(max_iterations) +
                                " iterations",
                            estimate, previous);
}

} // namespace

double spectral_radius(const SubstitutionMatrix& m, double tol, int max_iterations)
{
    double rho = 0.0;
    for (const auto& comp : m.strong_components()) {
        if (comp.size() == 1) {
            rho = std::max(rho, static_cast<double>(m.at(comp[0], comp[0])));
            continue;
        }
        rho = std::max(rho, component_radius(m.principal_submatrix(comp), tol, max_iterations));
    }
    return rho;
}

} // namespace cantor_ei
