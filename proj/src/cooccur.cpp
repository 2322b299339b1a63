#include "hellvec/cooccur.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>

#include <omp.h>

#include "hellvec/errors.hpp"
#include "binary_io.hpp"

namespace hellvec {

namespace {

using namespace binary;
constexpr const char* kFormat = "HCOOC1";

struct Segment {
    std::size_t doc;
    std::size_t begin;
    std::size_t end;
};

// Consecutive segments holding about block_size centers; short documents share a block.
using Block = std::vector<Segment>;

std::vector<Block> make_blocks(std::span<const TokenIds> documents, std::size_t block_size) {
    std::vector<Block> blocks;
    Block current;
    std::size_t filled = 0;
    for (std::size_t d = 0; d < documents.size(); ++d) {
        std::size_t b = 0;
        while (b < documents[d].size()) {
            const std::size_t e = std::min(documents[d].size(), b + (block_size - filled));
            current.push_back({d, b, e});
            filled += e - b;
            b = e;
            if (filled == block_size) {
                blocks.push_back(std::move(current));
                current.clear();
                filled = 0;
            }
        }
    }
    if (!current.empty()) blocks.push_back(std::move(current));
    return blocks;
}

// Emits (word << 32 | column) for every counted pair with a center in [begin, end).
template <typename Emit>
void scan_centers(const TokenIds& ids,
                  std::size_t begin,
                  std::size_t end,
                  const std::vector<std::int32_t>& column_of,
                  const WindowSpec& window,
                  Emit&& emit) {
    const std::size_t n = ids.size();
    const std::size_t w = window.size;
    for (std::size_t i = begin; i < end; ++i) {
        const auto center = ids[i];
        if (center < 0) continue;
        const std::size_t lo = window.symmetric ? (i >= w ? i - w : 0) : i + 1;
        const std::size_t hi = std::min(n, i + w + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (j == i) continue;
            const auto t = ids[j];
            if (t < 0) continue;
            const auto col = column_of[static_cast<std::size_t>(t)];
            if (col < 0) continue;
            emit(static_cast<std::uint32_t>(center), static_cast<std::uint32_t>(col));
        }
    }
}

SparseMatrix count_block(std::span<const TokenIds> documents,
                         const Block& block,
                         const std::vector<std::int32_t>& column_of,
                         const WindowSpec& window,
                         std::size_t rows,
                         std::uint32_t cols) {
    std::size_t centers = 0;
    for (const auto& seg : block) centers += seg.end - seg.begin;
    std::vector<std::uint64_t> keys;
    keys.reserve(centers * window.size * (window.symmetric ? 2 : 1));
    for (const auto& seg : block) {
        scan_centers(documents[seg.doc], seg.begin, seg.end, column_of, window, [&](std::uint32_t w, std::uint32_t c) {
            keys.push_back(static_cast<std::uint64_t>(w) << 32 | c);
        });
    }
    std::sort(keys.begin(), keys.end());
    const std::vector<double> ones(keys.size(), 1.0);
    return SparseMatrix::from_sorted_keys(keys, ones, rows, cols);
}

// Pairwise tree reduction in a fixed order, so results never depend on scheduling.
SparseMatrix tree_sum(std::vector<SparseMatrix> parts) {
    while (parts.size() > 1) {
        const std::size_t half = (parts.size() + 1) / 2;
        std::vector<SparseMatrix> next(half);
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < half; ++i) {
            const auto a = 2 * i;
            next[i] = a + 1 < parts.size() ? parts[a].plus(parts[a + 1]) : std::move(parts[a]);
        }
        parts = std::move(next);
    }
    return std::move(parts.front());
}

constexpr char kMagic[6] = {'H', 'C', 'O', 'O', 'C', '1'};

}  // namespace

TokenIds to_ids(std::span<const std::string> document, const Vocabulary& vocab) {
    TokenIds ids(document.size());
    for (std::size_t i = 0; i < document.size(); ++i) {
        const auto id = vocab.find(document[i]);
        ids[i] = id ? static_cast<std::int32_t>(*id) : -1;
    }
    return ids;
}

CooccurrenceMatrix count_cooccurrences(std::span<const TokenIds> documents,
                                       const ContextDictionary& ctx,
                                       const WindowSpec& window,
                                       const CountOptions& options) {
    window.validate();
    const auto& column_of = ctx.column_table();
    const std::size_t rows = column_of.size();
    const auto cols = static_cast<std::uint32_t>(ctx.size());
    const std::size_t block_size = std::max<std::size_t>(1, options.block_size);

    const auto blocks = make_blocks(documents, block_size);

    // Blocks are processed in waves to bound the memory held by partial matrices.
    const std::size_t wave = static_cast<std::size_t>(std::max(2, 2 * omp_get_max_threads()));
    SparseMatrix total(rows, cols);
    for (std::size_t start = 0; start < blocks.size(); start += wave) {
        const std::size_t stop = std::min(blocks.size(), start + wave);
        std::vector<SparseMatrix> partial(stop - start);
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = start; i < stop; ++i) {
            partial[i - start] = count_block(documents, blocks[i], column_of, window, rows, cols);
        }
        total = total.plus(tree_sum(std::move(partial)));
    }
    return {std::move(total), window, ctx.scenario(), context_fingerprint(ctx, window)};
}

CooccurrenceMatrix count_cooccurrences(std::span<const std::vector<std::string>> documents,
                                       const Vocabulary& vocab,
                                       const ContextDictionary& ctx,
                                       const WindowSpec& window,
                                       const CountOptions& options) {
    std::vector<TokenIds> ids(documents.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < documents.size(); ++i) ids[i] = to_ids(documents[i], vocab);
    return count_cooccurrences(ids, ctx, window, options);
}

namespace reference {

CooccurrenceMatrix count_cooccurrences(std::span<const TokenIds> documents,
                                       const ContextDictionary& ctx,
                                       const WindowSpec& window) {
    window.validate();
    const auto& column_of = ctx.column_table();
    std::vector<std::map<std::uint32_t, double>> acc(column_of.size());
    for (const auto& doc : documents) {
        scan_centers(doc, 0, doc.size(), column_of, window,
                     [&](std::uint32_t w, std::uint32_t c) { acc[w][c] += 1.0; });
    }
    std::vector<SparseVector> rows(acc.size());
    for (std::size_t r = 0; r < acc.size(); ++r) {
        for (const auto& [c, v] : acc[r]) {
            rows[r].cols.push_back(c);
            rows[r].vals.push_back(v);
        }
    }
    return {SparseMatrix::from_rows(rows, static_cast<std::uint32_t>(ctx.size())), window, ctx.scenario(),
            context_fingerprint(ctx, window)};
}

}  // namespace reference

CooccurrenceMatrix merge(std::span<const CooccurrenceMatrix> parts) {
    if (parts.empty()) throw UsageError("merge needs at least one matrix");
    const auto& first = parts.front();
    std::vector<SparseMatrix> matrices;
    matrices.reserve(parts.size());
    for (const auto& p : parts) {
        if (p.rows() != first.rows() || p.cols() != first.cols()) {
            throw DataError("merge: matrix dimensions differ");
        }
        if (!(p.window == first.window) || !(p.scenario == first.scenario) ||
            !(p.fingerprint == first.fingerprint)) {
            throw DataError("merge: matrices were counted under different configurations");
        }
        matrices.push_back(p.counts);
    }
    return {tree_sum(std::move(matrices)), first.window, first.scenario, first.fingerprint};
}

SparseVector sqrt_distribution(SparseRowView counts) {
    double sum = 0.0;
    for (const double v : counts.vals) sum += v;
    SparseVector out;
    if (!(sum > 0.0)) return out;
    out.cols.assign(counts.cols.begin(), counts.cols.end());
    out.vals.resize(counts.nnz());
    for (std::size_t k = 0; k < counts.nnz(); ++k) out.vals[k] = std::sqrt(counts.vals[k] / sum);
    return out;
}

DistributionMatrix normalize_rows(const CooccurrenceMatrix& counts) {
    const auto& m = counts.counts;
    std::vector<double> values(m.nnz());
    const auto& ptr = m.row_ptr();
    const auto n = static_cast<std::int64_t>(m.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
        const auto row = sqrt_distribution(m.row(static_cast<std::size_t>(r)));
        std::copy(row.vals.begin(), row.vals.end(), values.begin() + static_cast<std::ptrdiff_t>(ptr[static_cast<std::size_t>(r)]));
    }
    DistributionMatrix out;
    out.values = m.with_values(std::move(values));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (m.row(r).empty()) out.zero_rows.push_back(static_cast<std::uint32_t>(r));
    }
    out.window = counts.window;
    out.scenario = counts.scenario;
    out.fingerprint = counts.fingerprint;
    return out;
}

double avg_nonzero_contexts(const SparseMatrix& m) {
    if (m.rows() == 0) return 0.0;
    return static_cast<double>(m.nnz()) / static_cast<double>(m.rows());
}

void write_cooccurrence(std::ostream& out, const SparseMatrix& m, const WindowSpec& window, MatrixKind kind) {
    put_bytes(out, kMagic, sizeof kMagic);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, m.cols());
    put_u32(out, window.size);
    put_u8(out, window.symmetric ? 1 : 0);
    put_u8(out, static_cast<std::uint8_t>(kind));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        put_u32(out, static_cast<std::uint32_t>(r));
        put_u32(out, static_cast<std::uint32_t>(row.nnz()));
        for (std::size_t i = 0; i < row.nnz(); ++i) {
            put_u32(out, row.cols[i]);
            put_f64(out, row.vals[i]);
        }
    }
    if (!out) throw DataError("HCOOC1: write failed");
}

CooccurrenceFile read_cooccurrence(std::istream& in) {
    char magic[sizeof kMagic];
    if (!get_bytes(in, magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw DataError("not an HCOOC1 file");
    }
    CooccurrenceFile file;
    const auto rows = get_u32(in, kFormat);
    const auto cols = get_u32(in, kFormat);
    file.window.size = get_u32(in, kFormat);
    const auto sym = get_u8(in, kFormat);
    const auto kind = get_u8(in, kFormat);
    if (sym > 1 || kind > 1) throw DataError("HCOOC1: bad header flags");
    file.window.symmetric = sym == 1;
    file.kind = static_cast<MatrixKind>(kind);

    std::vector<SparseVector> data(rows);
    std::int64_t last = -1;
    while (in.peek() != std::char_traits<char>::eof()) {
        const auto id = get_u32(in, kFormat);
        if (id >= rows || static_cast<std::int64_t>(id) <= last) throw DataError("HCOOC1: bad row id");
        last = id;
        const auto nnz = get_u32(in, kFormat);
        if (nnz > cols) throw DataError("HCOOC1: row longer than column count");
        auto& row = data[id];
        row.cols.resize(nnz);
        row.vals.resize(nnz);
        for (std::uint32_t i = 0; i < nnz; ++i) {
            row.cols[i] = get_u32(in, kFormat);
            row.vals[i] = get_f64(in, kFormat);
        }
    }
    file.matrix = SparseMatrix::from_rows(data, cols);
    return file;
}

}  // namespace hellvec
