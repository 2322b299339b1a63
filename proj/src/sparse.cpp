#include "hellvec/sparse.hpp"

#include <string>

#include "hellvec/errors.hpp"

namespace hellvec {

SparseMatrix::SparseMatrix(std::size_t rows, std::uint32_t cols)
    : row_ptr_(rows + 1, 0), n_cols_(cols) {}

SparseMatrix SparseMatrix::from_rows(std::span<const SparseVector> rows, std::uint32_t cols) {
    SparseMatrix m(rows.size(), cols);
    std::size_t total = 0;
    for (const auto& r : rows) total += r.nnz();
    m.col_idx_.reserve(total);
    m.vals_.reserve(total);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m.col_idx_.insert(m.col_idx_.end(), rows[i].cols.begin(), rows[i].cols.end());
        m.vals_.insert(m.vals_.end(), rows[i].vals.begin(), rows[i].vals.end());
        m.row_ptr_[i + 1] = m.col_idx_.size();
    }
    m.validate();
    return m;
}

SparseMatrix SparseMatrix::from_sorted_keys(std::span<const std::uint64_t> keys,
                                            std::span<const double> vals,
                                            std::size_t rows,
                                            std::uint32_t cols) {
    SparseMatrix m(rows, cols);
    std::size_t i = 0;
    while (i < keys.size()) {
        const auto key = keys[i];
        double sum = 0.0;
        while (i < keys.size() && keys[i] == key) sum += vals[i++];
        if (sum == 0.0) continue;
        const auto r = static_cast<std::size_t>(key >> 32);
        m.col_idx_.push_back(static_cast<std::uint32_t>(key & 0xFFFFFFFFu));
        m.vals_.push_back(sum);
        ++m.row_ptr_[r + 1];
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

SparseMatrix SparseMatrix::with_values(std::vector<double> values) const {
    if (values.size() != vals_.size()) throw DataError("with_values: wrong number of values");
    SparseMatrix m = *this;
    m.vals_ = std::move(values);
    return m;
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other) const {
    if (rows() != other.rows() || cols() != other.cols()) {
        throw DataError("sparse matrix shape mismatch in sum");
    }
    SparseMatrix out(rows(), cols());
    out.col_idx_.reserve(nnz() + other.nnz());
    out.vals_.reserve(nnz() + other.nnz());
    for (std::size_t r = 0; r < rows(); ++r) {
        const auto a = row(r);
        const auto b = other.row(r);
        std::size_t i = 0, j = 0;
        while (i < a.nnz() || j < b.nnz()) {
            std::uint32_t c;
            double v;
            if (j == b.nnz() || (i < a.nnz() && a.cols[i] < b.cols[j])) {
                c = a.cols[i];
                v = a.vals[i++];
            } else if (i == a.nnz() || b.cols[j] < a.cols[i]) {
                c = b.cols[j];
                v = b.vals[j++];
            } else {
                c = a.cols[i];
                v = a.vals[i++] + b.vals[j++];
            }
            if (v == 0.0) continue;
            out.col_idx_.push_back(c);
            out.vals_.push_back(v);
        }
        out.row_ptr_[r + 1] = out.col_idx_.size();
    }
    return out;
}

void SparseMatrix::validate() const {
    if (row_ptr_.empty() || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
        col_idx_.size() != vals_.size()) {
        throw DataError("sparse matrix: inconsistent storage");
    }
    for (std::size_t r = 0; r < rows(); ++r) {
        if (row_ptr_[r + 1] < row_ptr_[r]) throw DataError("sparse matrix: row pointers decrease");
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] >= n_cols_) {
                throw DataError("sparse matrix: column out of range in row " + std::to_string(r));
            }
            if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
                throw DataError("sparse matrix: columns not strictly increasing in row " +
                                std::to_string(r));
            }
            if (vals_[k] == 0.0) {
                throw DataError("sparse matrix: stored zero in row " + std::to_string(r));
            }
        }
    }
}

}  // namespace hellvec
