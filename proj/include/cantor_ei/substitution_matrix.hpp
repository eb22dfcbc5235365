#pragma once

#include "cantor_ei/rational.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace cantor_ei {

/// The similarity x -> x/m^q + offset/m^q labelling a Digraph IFS vertex.
struct AffineVertex {
    Rational ratio;
    long long offset = 0;

    Rational shift() const { return ratio * static_cast<long>(offset); }
    friend bool operator==(const AffineVertex&, const AffineVertex&) = default;
};

/// Sparse nonnegative integer matrix in row-compressed form, with one
/// AffineVertex label per row/column.
class SubstitutionMatrix {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        int value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    SubstitutionMatrix() = default;

    /// Repeated (row, col) pairs accumulate. Labels may be empty or have size dim.
    static SubstitutionMatrix from_entries(std::size_t dim, std::vector<Entry> entries,
                                           std::vector<AffineVertex> labels = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return cols_.size(); }
    const std::vector<AffineVertex>& labels() const noexcept { return labels_; }

    std::span<const std::size_t> row_cols(std::size_t i) const;
    std::span<const int> row_values(std::size_t i) const;
    int at(std::size_t i, std::size_t j) const;
    long long row_sum(std::size_t i) const;
    std::vector<Entry> entries() const;

    /// row sum -> number of rows with that sum
    std::map<long long, std::size_t> row_sum_histogram() const;
    bool is_zero_one() const;

    /// y = M x
    void multiply(std::span<const double> x, std::span<double> y) const;

    /// Rows and columns restricted to `indices` (kept in the given order).
    SubstitutionMatrix principal_submatrix(std::span<const std::size_t> indices) const;

    /// Strongly connected components of the adjacency graph, each sorted.
    std::vector<std::vector<std::size_t>> strong_components() const;

    friend bool operator==(const SubstitutionMatrix&, const SubstitutionMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<std::size_t> row_start_{0};
    std::vector<std::size_t> cols_;
    std::vector<int> values_;
    std::vector<AffineVertex> labels_;
};

/// Spectral radius of a nonnegative matrix. Each strongly connected
/// component is handled by power iteration on (block + I), stopping when the
/// Collatz-Wielandt bounds agree to a relative `tol`; the result is the
/// largest component radius. convergence_error after `max_iterations`.
double spectral_radius(const SubstitutionMatrix& m, double tol = 1e-10, int max_iterations = 100000);

} // namespace cantor_ei
