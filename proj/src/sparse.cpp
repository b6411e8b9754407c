#include "linrep/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "linrep/errors.hpp"

namespace linrep {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
    std::erase_if(entries, [](const Triplet& t) {
        return std::abs(t.value) < kDropTolerance;
    });
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    row_ptr_.assign(rows_ + 1, 0);
    col_.reserve(entries.size());
    val_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Triplet& t = entries[i];
        if (t.row >= rows_ || t.col >= cols_)
            throw IndexError("sparse entry out of bounds");
        if (!col_.empty() && i > 0 && entries[i - 1].row == t.row &&
            entries[i - 1].col == t.col) {
            val_.back() += t.value;  // merge duplicates
            continue;
        }
        col_.push_back(t.col);
        val_.push_back(t.value);
        ++row_ptr_[t.row + 1];
    }
    for (std::size_t r = 0; r < rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_)
        throw ValidationError("sparse apply size mismatch");
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += val_[k] * x[col_[k]];
        y[r] = acc;
    }
}

void SparseMatrix::apply_transpose(std::span<const double> x, std::span<double> y) const {
    if (x.size() != rows_ || y.size() != cols_)
        throw ValidationError("sparse transpose apply size mismatch");
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            y[col_[k]] += val_[k] * x[r];
}

rvec SparseMatrix::apply(std::span<const double> x) const {
    rvec y(rows_);
    apply(x, y);
    return y;
}

rvec SparseMatrix::column_sums() const {
    rvec sums(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            sums[col_[k]] += val_[k];
    return sums;
}

rvec SparseMatrix::row_sums() const {
    rvec sums(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            sums[r] += val_[k];
    return sums;
}

double SparseMatrix::norm_l1() const {
    rvec sums(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            sums[col_[k]] += std::abs(val_[k]);
    double m = 0.0;
    for (double s : sums) m = std::max(m, s);
    return m;
}

double SparseMatrix::min_entry() const {
    double m = 0.0;
    for (double v : val_) m = std::min(m, v);
    return m;
}

std::size_t SparseMatrix::max_row_nnz() const {
    std::size_t m = 0;
    for (std::size_t r = 0; r < rows_; ++r)
        m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
    return m;
}

void SparseMatrix::export_triplets(std::ostream& os) const {
    os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
    char buf[64];
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", val_[k]);
            os << r << ' ' << col_[k] << ' ' << buf << '\n';
        }
}

} // namespace linrep
