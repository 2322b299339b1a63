#ifndef HELLVEC_CORPUS_HPP
#define HELLVEC_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hellvec/fingerprint.hpp"

namespace hellvec {

// ---------------------------------------------------------------------------
// Tokens

/// Lowercases `raw` and replaces every maximal run of decimal digits with the
/// literal "NUMBER". An existing "NUMBER" placeholder is kept verbatim, which
/// makes the function idempotent. Bytes outside ASCII pass through untouched.
std::string normalize_token(std::string_view raw);

/// Whitespace split plus treebank-style punctuation splitting: punctuation
/// becomes its own token, except hyphens and apostrophes inside words and
/// '.' or ',' between digits.
std::vector<std::string> tokenize_basic(std::string_view text);

/// Plain whitespace split, the canonical path for pre-tokenized input.
std::vector<std::string> split_whitespace(std::string_view text);

// ---------------------------------------------------------------------------
// Vocabulary

struct VocabEntry {
    std::string word;
    std::uint64_t count = 0;
    friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

/// Word dictionary. Ids are contiguous and follow descending count, ties
/// broken lexicographically. total_tokens counts every corpus token,
/// including words below the count threshold.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Keeps words with count >= min_count. min_count must be positive.
    static Vocabulary from_counts(const std::unordered_map<std::string, std::uint64_t>& counts,
                                  std::uint64_t total_tokens,
                                  std::uint64_t min_count);
    /// Entries must already be in id order (descending count, lexicographic ties).
    static Vocabulary from_entries(std::vector<VocabEntry> entries, std::uint64_t total_tokens);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<VocabEntry>& entries() const { return entries_; }
    const std::string& word(std::uint32_t id) const { return entries_[id].word; }
    std::uint64_t count(std::uint32_t id) const { return entries_[id].count; }
    std::uint64_t total_tokens() const { return total_tokens_; }
    std::optional<std::uint32_t> find(std::string_view word) const;
    double relative_frequency(std::uint32_t id) const;

    /// SHA-256 over entries and total_tokens.
    const std::string& digest() const { return digest_; }

    /// `word<TAB>count` per line, id order.
    void write(std::ostream& out) const;
    static Vocabulary read(std::istream& in, std::uint64_t total_tokens);

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.entries_ == b.entries_ && a.total_tokens_ == b.total_tokens_;
    }

private:
    void build_index();

    std::vector<VocabEntry> entries_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::uint64_t total_tokens_ = 0;
    std::string digest_;
};

/// Token frequency accumulator; merging shards equals counting sequentially.
class TokenCounter {
public:
    void add(std::string_view token);
    void add_all(std::span<const std::string> tokens);
    void merge(const TokenCounter& other);
    std::uint64_t total() const { return total_; }
    const std::unordered_map<std::string, std::uint64_t>& counts() const { return counts_; }
    Vocabulary finish(std::uint64_t min_count) const;

private:
    std::unordered_map<std::string, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

Vocabulary build_vocabulary(std::span<const std::string> tokens, std::uint64_t min_count);

/// Counts documents in parallel shards and merges the per-shard maps.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> documents,
                            std::uint64_t min_count);

// ---------------------------------------------------------------------------
// Context dictionary

/// Which vocabulary words serve as context columns. Thresholds are relative
/// frequencies (count / total_tokens) and comparisons are strict.
struct ContextScenario {
    enum class Kind { TopK, All, FreqBelow, FreqBand, FreqAbove };

    Kind kind = Kind::All;
    std::size_t k = 0;
    double lo = 0.0;
    double hi = 0.0;

    static ContextScenario top_k(std::size_t k);
    static ContextScenario all();
    static ContextScenario freq_below(double hi);
    static ContextScenario freq_band(double lo, double hi);
    static ContextScenario freq_above(double lo);

    /// "top:K", "all", "below:HI", "band:LO:HI", "above:LO".
    static ContextScenario parse(std::string_view text);
    std::string canonical() const;
    void validate() const;

    friend bool operator==(const ContextScenario&, const ContextScenario&) = default;
};

struct WindowSpec {
    std::uint32_t size = 1;
    bool symmetric = true;

    void validate() const;
    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

class ContextDictionary {
public:
    ContextDictionary() = default;
    ContextDictionary(std::vector<std::uint32_t> words,
                      std::size_t vocab_size,
                      ContextScenario scenario,
                      std::string vocab_digest);

    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    /// Vocabulary id of context column `col`.
    std::uint32_t word(std::uint32_t col) const { return words_[col]; }
    const std::vector<std::uint32_t>& words() const { return words_; }
    /// Column of vocabulary word `id`, or -1 when it is not a context word.
    std::int32_t column(std::uint32_t id) const {
        return id < column_of_.size() ? column_of_[id] : -1;
    }
    /// Lookup table indexed by vocabulary id.
    const std::vector<std::int32_t>& column_table() const { return column_of_; }
    const ContextScenario& scenario() const { return scenario_; }
    const std::string& vocab_digest() const { return vocab_digest_; }

private:
    std::vector<std::uint32_t> words_;
    std::vector<std::int32_t> column_of_;
    ContextScenario scenario_;
    std::string vocab_digest_;
};

ContextDictionary select_context_dictionary(const Vocabulary& vocab, const ContextScenario& scenario);

/// Binds an encoder or matrix to (vocabulary, scenario, window).
Fingerprint context_fingerprint(const ContextDictionary& ctx, const WindowSpec& window);

// ---------------------------------------------------------------------------
// Corpus input

enum class CorpusMode { Line, Document };

struct CorpusOptions {
    CorpusMode mode = CorpusMode::Line;
    bool normalize = true;
    bool tokenize = false;
};

/// Streams documents from files and directories (directories expand to their
/// regular files in sorted order). Line mode yields one document per line;
/// document mode one per file.
class CorpusReader {
public:
    CorpusReader(std::vector<std::filesystem::path> paths, CorpusOptions options);

    const std::vector<std::filesystem::path>& files() const { return files_; }
    const CorpusOptions& options() const { return options_; }

    /// Empty documents are skipped.
    void for_each_document(const std::function<void(std::vector<std::string>&)>& fn) const;

    std::vector<std::string> split(std::string_view text) const;

private:
    std::vector<std::filesystem::path> files_;
    CorpusOptions options_;
};

}  // namespace hellvec

#endif
