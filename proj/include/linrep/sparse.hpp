#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "linrep/types.hpp"

namespace linrep {

/// Compressed-row matrix with explicit column indices. Entries below 1e-15 in
/// magnitude are dropped at construction so row occupancy is itself meaningful.
class SparseMatrix {
public:
    static constexpr double kDropTolerance = 1e-15;

    struct Triplet {
        std::size_t row, col;
        double value;
    };

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return val_.size(); }

    void apply(std::span<const double> x, std::span<double> y) const;
    void apply_transpose(std::span<const double> x, std::span<double> y) const;

    rvec apply(std::span<const double> x) const;

    /// Sum of entries per column (signed).
    rvec column_sums() const;
    /// Sum of entries per row (signed).
    rvec row_sums() const;
    /// Sum of absolute entries per column; max is the induced l1 norm.
    double norm_l1() const;
    double min_entry() const;

    std::size_t max_row_nnz() const;

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& col_index() const { return col_; }
    const rvec& values() const { return val_; }

    /// Plain-text coordinate export: header "rows cols nnz", one "row col value"
    /// triplet per line.
    void export_triplets(std::ostream& os) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_;
    rvec val_;
};

} // namespace linrep
