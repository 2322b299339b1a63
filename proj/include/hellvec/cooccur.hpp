#ifndef HELLVEC_COOCCUR_HPP
#define HELLVEC_COOCCUR_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hellvec/corpus.hpp"
#include "hellvec/fingerprint.hpp"
#include "hellvec/sparse.hpp"

namespace hellvec {

/// Raw counts n(c, w): one row per vocabulary word, one column per context word.
struct CooccurrenceMatrix {
    SparseMatrix counts;
    WindowSpec window;
    ContextScenario scenario;
    Fingerprint fingerprint;

    std::size_t rows() const { return counts.rows(); }
    std::uint32_t cols() const { return counts.cols(); }
};

/// Rows are sqrt(p(c | w)); every non-empty row has unit l2 norm.
struct DistributionMatrix {
    SparseMatrix values;
    /// Sorted ids of words with no counted context.
    std::vector<std::uint32_t> zero_rows;
    WindowSpec window;
    ContextScenario scenario;
    Fingerprint fingerprint;

    std::size_t rows() const { return values.rows(); }
    std::uint32_t cols() const { return values.cols(); }
    SparseRowView row(std::size_t r) const { return values.row(r); }
    bool is_zero_row(std::uint32_t id) const { return values.row(id).empty(); }
};

/// A document as vocabulary ids; -1 marks out-of-vocabulary tokens, which
/// still occupy window positions.
using TokenIds = std::vector<std::int32_t>;

TokenIds to_ids(std::span<const std::string> document, const Vocabulary& vocab);

struct CountOptions {
    /// Centers per parallel work item. Short documents share a block and long
    /// ones are split; windows still see the whole document.
    std::size_t block_size = std::size_t{1} << 20;
};

/// Windowed counting, parallel over blocks of center positions with an
/// ordered merge. Windows clip at document boundaries.
CooccurrenceMatrix count_cooccurrences(std::span<const TokenIds> documents,
                                       const ContextDictionary& ctx,
                                       const WindowSpec& window,
                                       const CountOptions& options = {});

CooccurrenceMatrix count_cooccurrences(std::span<const std::vector<std::string>> documents,
                                       const Vocabulary& vocab,
                                       const ContextDictionary& ctx,
                                       const WindowSpec& window,
                                       const CountOptions& options = {});

namespace reference {

/// Single-threaded counting with per-row ordered maps.
CooccurrenceMatrix count_cooccurrences(std::span<const TokenIds> documents,
                                       const ContextDictionary& ctx,
                                       const WindowSpec& window);

}  // namespace reference

/// Elementwise sum of matrices sharing shape, window and scenario.
CooccurrenceMatrix merge(std::span<const CooccurrenceMatrix> parts);

/// sqrt(n / rowsum) per entry; empty for an empty or all-zero row.
SparseVector sqrt_distribution(SparseRowView counts);

DistributionMatrix normalize_rows(const CooccurrenceMatrix& counts);

/// Mean number of stored entries per row; 0 for a matrix without rows.
double avg_nonzero_contexts(const SparseMatrix& m);
inline double avg_nonzero_contexts(const CooccurrenceMatrix& m) { return avg_nonzero_contexts(m.counts); }

// ---------------------------------------------------------------------------
// Binary container (HCOOC1)

enum class MatrixKind : std::uint8_t { Counts = 0, SqrtProbabilities = 1 };

struct CooccurrenceFile {
    SparseMatrix matrix;
    WindowSpec window;
    MatrixKind kind = MatrixKind::Counts;
};

/// Little-endian: "HCOOC1", u32 rows, u32 cols, u32 window size,
/// u8 symmetric, u8 kind, then per row u32 id, u32 nnz, nnz x (u32 col, f64 value).
void write_cooccurrence(std::ostream& out, const SparseMatrix& m, const WindowSpec& window, MatrixKind kind);
CooccurrenceFile read_cooccurrence(std::istream& in);

}  // namespace hellvec

#endif
