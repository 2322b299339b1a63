#ifndef HELLVEC_SPARSE_HPP
#define HELLVEC_SPARSE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hellvec {

/// Read-only view of one sparse row: parallel arrays of strictly increasing
/// column ids and their values.
struct SparseRowView {
    std::span<const std::uint32_t> cols;
    std::span<const double> vals;

    std::size_t nnz() const { return cols.size(); }
    bool empty() const { return cols.empty(); }
};

/// Owning sparse vector with the same layout as a matrix row.
struct SparseVector {
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;

    SparseRowView view() const { return {cols, vals}; }
    std::size_t nnz() const { return cols.size(); }
    bool empty() const { return cols.empty(); }
    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Compressed sparse row matrix. Zeros are never stored and column ids are
/// strictly increasing within a row.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::uint32_t cols);

    /// Builds from per-row vectors. Each row must already be sorted and
    /// free of zeros and duplicates.
    static SparseMatrix from_rows(std::span<const SparseVector> rows, std::uint32_t cols);

    /// Builds from (row << 32 | col) keys sorted ascending, with a value per
    /// key. Duplicate keys are summed; zero sums are dropped.
    static SparseMatrix from_sorted_keys(std::span<const std::uint64_t> keys,
                                         std::span<const double> vals,
                                         std::size_t rows,
                                         std::uint32_t cols);

    std::size_t rows() const { return row_ptr_.size() - 1; }
    std::uint32_t cols() const { return n_cols_; }
    std::size_t nnz() const { return col_idx_.size(); }

    SparseRowView row(std::size_t r) const {
        const auto b = row_ptr_[r];
        const auto e = row_ptr_[r + 1];
        return {std::span(col_idx_).subspan(b, e - b), std::span(vals_).subspan(b, e - b)};
    }

    /// Same sparsity structure with new values (one per stored entry).
    SparseMatrix with_values(std::vector<double> values) const;

    /// Elementwise sum. Shapes must match.
    SparseMatrix plus(const SparseMatrix& other) const;

    /// Throws DataError when the structural invariants do not hold.
    void validate() const;

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::uint32_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return vals_; }

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> vals_;
    std::uint32_t n_cols_ = 0;
};

}  // namespace hellvec

#endif
