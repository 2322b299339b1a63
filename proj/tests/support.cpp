#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/SVD>

namespace hellvec::test {

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

SparseVector random_sqrt_row(Rng& rng, std::uint32_t dim, std::size_t nnz) {
    nnz = std::min<std::size_t>(std::max<std::size_t>(nnz, 1), dim);
    std::vector<std::uint32_t> cols;
    if (nnz * 4 >= dim) {
        cols.resize(dim);
        std::iota(cols.begin(), cols.end(), 0u);
        std::shuffle(cols.begin(), cols.end(), rng);
        cols.resize(nnz);
    } else {
        std::map<std::uint32_t, bool> seen;
        while (seen.size() < nnz) seen[static_cast<std::uint32_t>(uniform_index(rng, 0, dim - 1))] = true;
        for (const auto& [c, _] : seen) cols.push_back(c);
    }
    std::sort(cols.begin(), cols.end());
    std::vector<double> p(nnz);
    double sum = 0.0;
    for (auto& v : p) sum += v = uniform_real(rng, 0.01, 1.0);
    SparseVector row;
    row.cols = std::move(cols);
    for (const double v : p) row.vals.push_back(std::sqrt(v / sum));
    return row;
}

DistributionMatrix random_distributions(Rng& rng, std::size_t rows, std::uint32_t cols, double density,
                                        double empty_fraction) {
    std::vector<SparseVector> data(rows);
    for (auto& row : data) {
        if (uniform_real(rng, 0.0, 1.0) < empty_fraction) continue;
        for (std::uint32_t c = 0; c < cols; ++c) {
            if (uniform_real(rng, 0.0, 1.0) < density) {
                row.cols.push_back(c);
                row.vals.push_back(static_cast<double>(uniform_index(rng, 1, 20)));
            }
        }
        if (row.empty()) {
            row.cols.push_back(static_cast<std::uint32_t>(uniform_index(rng, 0, cols - 1)));
            row.vals.push_back(1.0);
        }
    }
    CooccurrenceMatrix counts{SparseMatrix::from_rows(data, cols), {1, true}, ContextScenario::all(),
                              Fingerprint::of("random")};
    return normalize_rows(counts);
}

RowMatrix dense(const SparseMatrix& m) {
    RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(m.rows()), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t k = 0; k < row.nnz(); ++k) out(static_cast<Eigen::Index>(r), row.cols[k]) = row.vals[k];
    }
    return out;
}

SparseMatrix sparse(const RowMatrix& m) {
    std::vector<SparseVector> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c) != 0.0) {
                rows[static_cast<std::size_t>(r)].cols.push_back(static_cast<std::uint32_t>(c));
                rows[static_cast<std::size_t>(r)].vals.push_back(m(r, c));
            }
        }
    }
    return SparseMatrix::from_rows(rows, static_cast<std::uint32_t>(m.cols()));
}

DistributionMatrix as_distributions(const RowMatrix& sqrt_rows) {
    DistributionMatrix d;
    d.values = sparse(sqrt_rows);
    for (std::size_t r = 0; r < d.values.rows(); ++r) {
        if (d.values.row(r).empty()) d.zero_rows.push_back(static_cast<std::uint32_t>(r));
    }
    d.scenario = ContextScenario::all();
    d.fingerprint = Fingerprint::of("dense");
    return d;
}

RowMatrix random_rank_r(Rng& rng, std::size_t rows, std::size_t cols, std::size_t r) {
    RowMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(r));
    RowMatrix b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = uniform_real(rng, 0.0, 1.0);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = uniform_real(rng, 0.0, 1.0);
    RowMatrix x = a * b;
    for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i) /= x.row(i).norm();
    return x;
}

double optimal_rank_error(const RowMatrix& x, std::size_t d) {
    const Eigen::MatrixXd m = x;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    double err = 0.0;
    for (Eigen::Index i = static_cast<Eigen::Index>(d); i < s.size(); ++i) err += s[i] * s[i];
    return err;
}

double dense_projection_error(const RowMatrix& x, const RowMatrix& U) {
    const RowMatrix residual = x * U * U.transpose() - x;
    double err = 0.0;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        if (x.row(r).squaredNorm() > 0.0) err += residual.row(r).squaredNorm();
    }
    return err;
}

std::string letter_word(std::size_t i) {
    std::string w = "t";
    do {
        w.push_back(static_cast<char>('a' + i % 26));
        i /= 26;
    } while (i > 0);
    return w;
}

Vocabulary synthetic_vocab(std::size_t words) {
    std::vector<VocabEntry> entries;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < words; ++i) {
        entries.push_back({letter_word(i), static_cast<std::uint64_t>(2 * (words - i))});
        total += entries.back().count;
    }
    // Ids follow descending count with lexicographic ties; counts here are distinct.
    return Vocabulary::from_entries(std::move(entries), total);
}

std::vector<TokenIds> random_corpus(Rng& rng, std::size_t vocab_size, std::size_t max_tokens, double oov_rate) {
    std::vector<TokenIds> docs;
    const std::size_t total = uniform_index(rng, 1, max_tokens);
    std::size_t made = 0;
    while (made < total) {
        const std::size_t len = std::min(total - made, uniform_index(rng, 1, 60));
        TokenIds doc(len);
        for (auto& t : doc) {
            t = uniform_real(rng, 0.0, 1.0) < oov_rate ? -1
                                                        : static_cast<std::int32_t>(uniform_index(rng, 0, vocab_size - 1));
        }
        docs.push_back(std::move(doc));
        made += len;
    }
    return docs;
}

std::vector<std::vector<std::string>> as_words(const std::vector<TokenIds>& docs, const Vocabulary& vocab) {
    std::vector<std::vector<std::string>> out;
    for (const auto& d : docs) {
        std::vector<std::string> words;
        for (const auto id : d) words.push_back(id < 0 ? "oov" : vocab.word(static_cast<std::uint32_t>(id)));
        out.push_back(std::move(words));
    }
    return out;
}

SparseMatrix oracle_counts(const std::vector<TokenIds>& docs, const ContextDictionary& ctx, const WindowSpec& window) {
    RowMatrix counts = RowMatrix::Zero(static_cast<Eigen::Index>(ctx.column_table().size()),
                                       static_cast<Eigen::Index>(ctx.size()));
    auto add = [&](std::int32_t center, std::int32_t context) {
        if (center < 0 || context < 0) return;
        const auto col = ctx.column(static_cast<std::uint32_t>(context));
        if (col >= 0) counts(center, col) += 1.0;
    };
    for (const auto& doc : docs) {
        for (std::size_t o = 1; o <= window.size; ++o) {
            for (std::size_t i = 0; i + o < doc.size(); ++i) {
                add(doc[i], doc[i + o]);
                if (window.symmetric) add(doc[i + o], doc[i]);
            }
        }
    }
    return sparse(counts);
}

double dense_hellinger(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return (a - b).norm() / std::sqrt(2.0);
}

}  // namespace hellvec::test
