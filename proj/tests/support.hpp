#ifndef HELLVEC_TESTS_SUPPORT_HPP
#define HELLVEC_TESTS_SUPPORT_HPP

// Seeded generators and independent oracles shared by the unit and
// acceptance tests. Oracles work on dense copies and never call the code
// they check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hellvec/cooccur.hpp"
#include "hellvec/corpus.hpp"
#include "hellvec/reduce.hpp"

namespace hellvec::test {

using Rng = std::mt19937_64;

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);
double uniform_real(Rng& rng, double lo, double hi);

/// Unit-norm, strictly positive sparse row with `nnz` distinct columns below `dim`.
SparseVector random_sqrt_row(Rng& rng, std::uint32_t dim, std::size_t nnz);

/// Random counts normalized into square-root distributions; roughly
/// `empty_fraction` of the rows are left without context.
DistributionMatrix random_distributions(Rng& rng, std::size_t rows, std::uint32_t cols, double density,
                                        double empty_fraction = 0.0);

RowMatrix dense(const SparseMatrix& m);
SparseMatrix sparse(const RowMatrix& m);
DistributionMatrix as_distributions(const RowMatrix& sqrt_rows);

/// Nonnegative matrix of exact rank r with unit-norm rows, so each row is a
/// valid square-root distribution.
RowMatrix random_rank_r(Rng& rng, std::size_t rows, std::size_t cols, std::size_t r);

/// Smallest possible sum of squared residuals of a rank-d approximation,
/// from a full SVD.
double optimal_rank_error(const RowMatrix& x, std::size_t d);

/// Sum over nonzero rows of ||x U U^T - x||^2, computed densely.
double dense_projection_error(const RowMatrix& x, const RowMatrix& U);

/// "ta", "tb", ..., "tz", "tab", ...: letters only, so normalize_token keeps it.
std::string letter_word(std::size_t i);

/// Vocabulary of letter_word(0), letter_word(1), ... with strictly decreasing counts.
Vocabulary synthetic_vocab(std::size_t words);

/// Documents of vocabulary ids (and some -1 placeholders for OOV tokens).
std::vector<TokenIds> random_corpus(Rng& rng, std::size_t vocab_size, std::size_t max_tokens, double oov_rate = 0.05);

std::vector<std::vector<std::string>> as_words(const std::vector<TokenIds>& docs, const Vocabulary& vocab);

/// Brute-force counting by offset: every ordered pair (i, i + o) with
/// 1 <= o <= size inside one document, both directions when symmetric.
SparseMatrix oracle_counts(const std::vector<TokenIds>& docs, const ContextDictionary& ctx, const WindowSpec& window);

/// Hellinger distance of two dense sqrt rows.
double dense_hellinger(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b);

}  // namespace hellvec::test

#endif
