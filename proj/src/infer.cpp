#include "hellvec/infer.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "hellvec/cooccur.hpp"
#include "hellvec/errors.hpp"

namespace hellvec {

PhraseQuery PhraseQuery::parse(std::string_view text) {
    PhraseQuery q;
    for (const auto& t : split_whitespace(text)) q.tokens.push_back(normalize_token(t));
    if (q.tokens.empty()) throw UsageError("empty phrase");
    return q;
}

std::string PhraseQuery::text() const {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

PhraseCounter::PhraseCounter(std::vector<PhraseQuery> phrases, const Vocabulary& vocab, const ContextDictionary& ctx,
                             WindowSpec window)
    : phrases_(std::move(phrases)),
      vocab_(vocab),
      ctx_(ctx),
      window_(window),
      counts_(phrases_.size()),
      occurrences_(phrases_.size(), 0) {
    window_.validate();
    for (std::size_t p = 0; p < phrases_.size(); ++p) {
        if (phrases_[p].tokens.empty()) throw UsageError("empty phrase");
        by_first_[phrases_[p].tokens.front()].push_back(p);
    }
}

void PhraseCounter::scan(std::span<const std::string> doc, Accumulator& acc, std::vector<std::size_t>& hits) const {
    const std::size_t n = doc.size();
    const std::size_t w = window_.size;
    auto count = [&](std::size_t p, std::size_t j) {
        const auto id = vocab_.find(doc[j]);
        if (!id) return;
        const auto col = ctx_.column(*id);
        if (col >= 0) ++acc[p][static_cast<std::uint32_t>(col)];
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = by_first_.find(doc[i]);
        if (it == by_first_.end()) continue;
        for (const auto p : it->second) {
            const auto& tokens = phrases_[p].tokens;
            const std::size_t len = tokens.size();
            if (i + len > n || !std::equal(tokens.begin(), tokens.end(), doc.begin() + static_cast<std::ptrdiff_t>(i))) {
                continue;
            }
            ++hits[p];
            if (window_.symmetric) {
                for (std::size_t j = i >= w ? i - w : 0; j < i; ++j) count(p, j);
            }
            for (std::size_t j = i + len; j < std::min(n, i + len + w); ++j) count(p, j);
        }
    }
}

void PhraseCounter::add_document(std::span<const std::string> document) { scan(document, counts_, occurrences_); }

void PhraseCounter::add_documents(std::span<const std::vector<std::string>> documents) {
    const int threads = omp_get_max_threads();
    std::vector<Accumulator> acc(static_cast<std::size_t>(threads), Accumulator(phrases_.size()));
    std::vector<std::vector<std::size_t>> hits(static_cast<std::size_t>(threads),
                                               std::vector<std::size_t>(phrases_.size(), 0));
    const auto n = static_cast<std::int64_t>(documents.size());
#pragma omp parallel num_threads(threads)
    {
        const auto t = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t d = 0; d < n; ++d) scan(documents[static_cast<std::size_t>(d)], acc[t], hits[t]);
    }
    // Integer counts, so the merge order cannot change the result.
    for (std::size_t t = 0; t < acc.size(); ++t) {
        for (std::size_t p = 0; p < phrases_.size(); ++p) {
            for (const auto& [c, v] : acc[t][p]) counts_[p][c] += v;
            occurrences_[p] += hits[t][p];
        }
    }
}

void PhraseCounter::merge(const PhraseCounter& other) {
    if (other.phrases_.size() != phrases_.size()) throw UsageError("merging counters built for different phrases");
    for (std::size_t p = 0; p < phrases_.size(); ++p) {
        if (other.phrases_[p].tokens != phrases_[p].tokens) {
            throw UsageError("merging counters built for different phrases");
        }
        for (const auto& [c, v] : other.counts_[p]) counts_[p][c] += v;
        occurrences_[p] += other.occurrences_[p];
    }
}

std::vector<PhraseCounts> PhraseCounter::results() const {
    std::vector<PhraseCounts> out(phrases_.size());
    for (std::size_t p = 0; p < phrases_.size(); ++p) {
        for (const auto& [c, v] : counts_[p]) {
            out[p].counts.cols.push_back(c);
            out[p].counts.vals.push_back(static_cast<double>(v));
        }
        out[p].occurrences = occurrences_[p];
    }
    return out;
}

SparseVector count_phrase_contexts(std::span<const std::vector<std::string>> documents,
                                   const PhraseQuery& phrase,
                                   const Vocabulary& vocab,
                                   const ContextDictionary& ctx,
                                   const WindowSpec& window) {
    PhraseCounter counter({phrase}, vocab, ctx, window);
    counter.add_documents(documents);
    auto result = counter.results().front();
    if (result.occurrences == 0) throw UnseenInCorpusError("\"" + phrase.text() + "\" does not occur in the corpus");
    return std::move(result.counts);
}

Eigen::VectorXd infer_vector(const SparseVector& counts, const Encoder& encoder, const Fingerprint& source) {
    const auto dist = sqrt_distribution(counts.view());
    if (dist.empty()) throw NoDistributionError("no context word was counted");
    return encode(encoder, dist.view(), source);
}

Eigen::VectorXd infer_vector(std::span<const std::vector<std::string>> documents,
                             const PhraseQuery& phrase,
                             const Encoder& encoder,
                             const Vocabulary& vocab,
                             const ContextDictionary& ctx,
                             const WindowSpec& window) {
    const auto source = context_fingerprint(ctx, window);
    if (!(source == encoder.context_fingerprint)) {
        throw FingerprintMismatchError("encoder was trained under context configuration " +
                                       encoder.context_fingerprint.hex() + ", counting would use " + source.hex());
    }
    return infer_vector(count_phrase_contexts(documents, phrase, vocab, ctx, window), encoder, source);
}

NeighborList neighbors_of_vector(const Eigen::VectorXd& v, const RowMatrix& embeddings, std::size_t k) {
    if (v.size() != embeddings.cols()) throw UsageError("query vector and embeddings differ in dimension");
    const double vnorm = v.norm();
    if (!(vnorm > 0.0)) throw NumericError("query vector is zero; cosine distance is undefined");

    const auto n = static_cast<std::int64_t>(embeddings.rows());
    std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
    std::vector<char> valid(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
        const double norm = embeddings.row(r).norm();
        if (!(norm > 0.0)) continue;
        dist[static_cast<std::size_t>(r)] = std::max(0.0, 1.0 - embeddings.row(r).dot(v) / (norm * vnorm));
        valid[static_cast<std::size_t>(r)] = 1;
    }

    std::vector<Neighbor> all;
    for (std::uint32_t r = 0; r < static_cast<std::uint32_t>(n); ++r) {
        if (valid[r]) all.push_back({r, dist[r]});
    }
    const auto by_distance = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    };
    const std::size_t keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), by_distance);
    all.resize(keep);
    return {NeighborList::kNoQuery, std::move(all)};
}

}  // namespace hellvec
