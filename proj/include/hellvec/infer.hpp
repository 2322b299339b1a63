#ifndef HELLVEC_INFER_HPP
#define HELLVEC_INFER_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "hellvec/corpus.hpp"
#include "hellvec/hellinger.hpp"
#include "hellvec/reduce.hpp"
#include "hellvec/sparse.hpp"

namespace hellvec {

/// A contiguous token sequence treated as one unit. Tokens are normalized.
struct PhraseQuery {
    std::vector<std::string> tokens;

    /// Whitespace split, then normalize_token. Throws UsageError when empty.
    static PhraseQuery parse(std::string_view text);
    std::string text() const;
};

struct PhraseCounts {
    /// Context counts over the context dictionary's columns.
    SparseVector counts;
    std::size_t occurrences = 0;
};

/// Counts the contexts of several phrases in one pass over the corpus. Each
/// occurrence contributes the tokens within `window` before its first token
/// (symmetric windows only) and after its last token; tokens inside the
/// occurrence never count.
class PhraseCounter {
public:
    PhraseCounter(std::vector<PhraseQuery> phrases, const Vocabulary& vocab, const ContextDictionary& ctx,
                  WindowSpec window);

    void add_document(std::span<const std::string> document);
    /// Parallel over documents; the result equals sequential add_document calls.
    void add_documents(std::span<const std::vector<std::string>> documents);
    /// Adds the counts of a counter built for the same phrases.
    void merge(const PhraseCounter& other);

    const std::vector<PhraseQuery>& phrases() const { return phrases_; }
    std::vector<PhraseCounts> results() const;

private:
    using Accumulator = std::vector<std::map<std::uint32_t, std::uint64_t>>;
    void scan(std::span<const std::string> document, Accumulator& acc, std::vector<std::size_t>& hits) const;

    std::vector<PhraseQuery> phrases_;
    const Vocabulary& vocab_;
    const ContextDictionary& ctx_;
    WindowSpec window_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
    Accumulator counts_;
    std::vector<std::size_t> occurrences_;
};

/// Single-phrase convenience over in-memory documents. Throws
/// UnseenInCorpusError when the phrase never occurs.
SparseVector count_phrase_contexts(std::span<const std::vector<std::string>> documents,
                                   const PhraseQuery& phrase,
                                   const Vocabulary& vocab,
                                   const ContextDictionary& ctx,
                                   const WindowSpec& window);

/// U^T sqrt(P) for counted contexts. `source` is the fingerprint of the
/// context dictionary and window used for counting. Throws
/// NoDistributionError when no context was counted.
Eigen::VectorXd infer_vector(const SparseVector& counts, const Encoder& encoder, const Fingerprint& source);

Eigen::VectorXd infer_vector(std::span<const std::vector<std::string>> documents,
                             const PhraseQuery& phrase,
                             const Encoder& encoder,
                             const Vocabulary& vocab,
                             const ContextDictionary& ctx,
                             const WindowSpec& window);

/// k nearest rows by cosine distance max(0, 1 - cos), ties by ascending id. All-zero
/// rows are never returned. Throws NumericError for a zero query vector.
NeighborList neighbors_of_vector(const Eigen::VectorXd& v, const RowMatrix& embeddings, std::size_t k);

}  // namespace hellvec

#endif
