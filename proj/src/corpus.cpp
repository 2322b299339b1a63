#include "hellvec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "hellvec/errors.hpp"
#include "hellvec/log.hpp"

namespace hellvec {

namespace {

constexpr std::string_view kNumber = "NUMBER";

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_ascii_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw UsageError("invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return v;
}

bool id_order(const VocabEntry& a, const VocabEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tokens

std::string normalize_token(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw.substr(i, kNumber.size()) == kNumber) {
            out.append(kNumber);
            i += kNumber.size();
        } else if (is_digit(raw[i])) {
            while (i < raw.size() && is_digit(raw[i])) ++i;
            out.append(kNumber);
        } else {
            const char c = raw[i++];
            out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
        }
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        const auto start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

std::vector<std::string> tokenize_basic(std::string_view text) {
    std::vector<std::string> tokens;
    for (const auto& chunk : split_whitespace(text)) {
        std::string current;
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const char c = chunk[i];
            if (!is_ascii_punct(c)) {
                current.push_back(c);
                continue;
            }
            const bool inside = !current.empty() && i + 1 < chunk.size() && !is_ascii_punct(chunk[i + 1]);
            const bool joins_word = (c == '-' || c == '\'') && inside;
            const bool joins_number = (c == '.' || c == ',') && inside && is_digit(current.back()) &&
                                      is_digit(chunk[i + 1]);
            if (joins_word || joins_number) {
                current.push_back(c);
                continue;
            }
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
            tokens.emplace_back(1, c);
        }
        if (!current.empty()) tokens.push_back(std::move(current));
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary Vocabulary::from_counts(const std::unordered_map<std::string, std::uint64_t>& counts,
                                   std::uint64_t total_tokens,
                                   std::uint64_t min_count) {
    if (min_count == 0) throw UsageError("min_count must be positive");
    Vocabulary v;
    for (const auto& [word, count] : counts) {
        if (count >= min_count) v.entries_.push_back({word, count});
    }
    std::sort(v.entries_.begin(), v.entries_.end(), id_order);
    v.total_tokens_ = total_tokens;
    v.build_index();
    return v;
}

Vocabulary Vocabulary::from_entries(std::vector<VocabEntry> entries, std::uint64_t total_tokens) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].count == 0) throw DataError("vocabulary: zero count for '" + entries[i].word + "'");
        if (i > 0 && !id_order(entries[i - 1], entries[i])) {
            throw DataError("vocabulary: entries out of order at id " + std::to_string(i));
        }
        sum += entries[i].count;
    }
    if (sum > total_tokens) throw DataError("vocabulary: counts exceed total_tokens");
    Vocabulary v;
    v.entries_ = std::move(entries);
    v.total_tokens_ = total_tokens;
    v.build_index();
    return v;
}

void Vocabulary::build_index() {
    index_.clear();
    index_.reserve(entries_.size());
    std::ostringstream canon;
    for (std::uint32_t i = 0; i < entries_.size(); ++i) {
        if (!index_.emplace(entries_[i].word, i).second) {
            throw DataError("vocabulary: duplicate word '" + entries_[i].word + "'");
        }
        canon << entries_[i].word << '\t' << entries_[i].count << '\n';
    }
    canon << "total_tokens=" << total_tokens_ << '\n';
    digest_ = sha256_hex(canon.str());
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double Vocabulary::relative_frequency(std::uint32_t id) const {
    if (total_tokens_ == 0) return 0.0;
    return static_cast<double>(entries_[id].count) / static_cast<double>(total_tokens_);
}

void Vocabulary::write(std::ostream& out) const {
    for (const auto& e : entries_) out << e.word << '\t' << e.count << '\n';
}

Vocabulary Vocabulary::read(std::istream& in, std::uint64_t total_tokens) {
    std::vector<VocabEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos || tab == 0) {
            throw DataError("vocabulary line " + std::to_string(lineno) + ": expected word<TAB>count");
        }
        std::uint64_t count = 0;
        const auto* first = line.data() + tab + 1;
        const auto* last = line.data() + line.size();
        const auto res = std::from_chars(first, last, count);
        if (res.ec != std::errc() || res.ptr != last) {
            throw DataError("vocabulary line " + std::to_string(lineno) + ": bad count");
        }
        entries.push_back({line.substr(0, tab), count});
    }
    return from_entries(std::move(entries), total_tokens);
}

void TokenCounter::add(std::string_view token) {
    ++counts_[std::string(token)];
    ++total_;
}

void TokenCounter::add_all(std::span<const std::string> tokens) {
    for (const auto& t : tokens) ++counts_[t];
    total_ += tokens.size();
}

void TokenCounter::merge(const TokenCounter& other) {
    for (const auto& [word, count] : other.counts_) counts_[word] += count;
    total_ += other.total_;
}

Vocabulary TokenCounter::finish(std::uint64_t min_count) const {
    return Vocabulary::from_counts(counts_, total_, min_count);
}

Vocabulary build_vocabulary(std::span<const std::string> tokens, std::uint64_t min_count) {
    TokenCounter counter;
    counter.add_all(tokens);
    return counter.finish(min_count);
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> documents,
                            std::uint64_t min_count) {
    const int shards = std::max(1, omp_get_max_threads());
    std::vector<TokenCounter> partial(static_cast<std::size_t>(shards));
#pragma omp parallel num_threads(shards)
    {
        auto& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::size_t i = 0; i < documents.size(); ++i) mine.add_all(documents[i]);
    }
    TokenCounter total;
    for (const auto& p : partial) total.merge(p);
    return total.finish(min_count);
}

// ---------------------------------------------------------------------------
// Context dictionary

ContextScenario ContextScenario::top_k(std::size_t k) {
    ContextScenario s{Kind::TopK, k, 0.0, 0.0};
    s.validate();
    return s;
}
ContextScenario ContextScenario::all() { return {Kind::All, 0, 0.0, 0.0}; }
ContextScenario ContextScenario::freq_below(double hi) {
    ContextScenario s{Kind::FreqBelow, 0, 0.0, hi};
    s.validate();
    return s;
}
ContextScenario ContextScenario::freq_band(double lo, double hi) {
    ContextScenario s{Kind::FreqBand, 0, lo, hi};
    s.validate();
    return s;
}
ContextScenario ContextScenario::freq_above(double lo) {
    ContextScenario s{Kind::FreqAbove, 0, lo, 0.0};
    s.validate();
    return s;
}

void ContextScenario::validate() const {
    switch (kind) {
    case Kind::TopK:
        if (k < 1) throw UsageError("context scenario top:K needs K >= 1");
        break;
    case Kind::All:
        break;
    case Kind::FreqBelow:
        if (!(hi > 0.0) || !std::isfinite(hi)) throw UsageError("context threshold must be positive");
        break;
    case Kind::FreqAbove:
        if (!(lo >= 0.0) || !std::isfinite(lo)) throw UsageError("context threshold must be non-negative");
        break;
    case Kind::FreqBand:
        if (!(lo >= 0.0) || !std::isfinite(hi) || !(lo < hi)) {
            throw UsageError("context band needs 0 <= lo < hi");
        }
        break;
    }
}

ContextScenario ContextScenario::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    const auto& name = parts[0];
    if (name == "all" && parts.size() == 1) return all();
    if (name == "top" && parts.size() == 2) {
        std::size_t k = 0;
        const auto res = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), k);
        if (res.ec != std::errc() || res.ptr != parts[1].data() + parts[1].size()) {
            throw UsageError("invalid K in context scenario '" + std::string(text) + "'");
        }
        return top_k(k);
    }
    if (name == "below" && parts.size() == 2) return freq_below(parse_double(parts[1], "below"));
    if (name == "above" && parts.size() == 2) return freq_above(parse_double(parts[1], "above"));
    if (name == "band" && parts.size() == 3) {
        return freq_band(parse_double(parts[1], "band"), parse_double(parts[2], "band"));
    }
    throw UsageError("unknown context scenario '" + std::string(text) +
                     "' (expected top:K, all, below:HI, band:LO:HI or above:LO)");
}

std::string ContextScenario::canonical() const {
    switch (kind) {
    case Kind::TopK: return "top:" + std::to_string(k);
    case Kind::All: return "all";
    case Kind::FreqBelow: return "below:" + format_double(hi);
    case Kind::FreqBand: return "band:" + format_double(lo) + ":" + format_double(hi);
    case Kind::FreqAbove: return "above:" + format_double(lo);
    }
    return {};
}

void WindowSpec::validate() const {
    if (size < 1) throw UsageError("window size must be >= 1");
}

ContextDictionary::ContextDictionary(std::vector<std::uint32_t> words,
                                     std::size_t vocab_size,
                                     ContextScenario scenario,
                                     std::string vocab_digest)
    : words_(std::move(words)),
      column_of_(vocab_size, -1),
      scenario_(scenario),
      vocab_digest_(std::move(vocab_digest)) {
    for (std::uint32_t c = 0; c < words_.size(); ++c) {
        if (words_[c] >= vocab_size) throw DataError("context word outside the vocabulary");
        if (c > 0 && words_[c] <= words_[c - 1]) throw DataError("context words must follow id order");
        column_of_[words_[c]] = static_cast<std::int32_t>(c);
    }
}

ContextDictionary select_context_dictionary(const Vocabulary& vocab, const ContextScenario& scenario) {
    scenario.validate();
    if (vocab.empty()) throw UsageError("cannot select a context dictionary from an empty vocabulary");
    std::vector<std::uint32_t> words;
    const auto n = static_cast<std::uint32_t>(vocab.size());
    switch (scenario.kind) {
    case ContextScenario::Kind::TopK: {
        auto k = scenario.k;
        if (k > n) {
            log::warning("top:" + std::to_string(k) + " exceeds the vocabulary size " + std::to_string(n) +
                         "; using all words");
            k = n;
        }
        for (std::uint32_t id = 0; id < k; ++id) words.push_back(id);
        break;
    }
    case ContextScenario::Kind::All:
        for (std::uint32_t id = 0; id < n; ++id) words.push_back(id);
        break;
    case ContextScenario::Kind::FreqBelow:
        for (std::uint32_t id = 0; id < n; ++id) {
            if (vocab.relative_frequency(id) < scenario.hi) words.push_back(id);
        }
        break;
    case ContextScenario::Kind::FreqAbove:
        for (std::uint32_t id = 0; id < n; ++id) {
            if (vocab.relative_frequency(id) > scenario.lo) words.push_back(id);
        }
        break;
    case ContextScenario::Kind::FreqBand:
        for (std::uint32_t id = 0; id < n; ++id) {
            const double f = vocab.relative_frequency(id);
            if (f > scenario.lo && f < scenario.hi) words.push_back(id);
        }
        break;
    }
    return ContextDictionary(std::move(words), vocab.size(), scenario, vocab.digest());
}

Fingerprint context_fingerprint(const ContextDictionary& ctx, const WindowSpec& window) {
    std::ostringstream s;
    s << "vocab=" << ctx.vocab_digest() << ";scenario=" << ctx.scenario().canonical()
      << ";window=" << window.size << ";symmetric=" << (window.symmetric ? 1 : 0);
    return Fingerprint::of(s.str());
}

// ---------------------------------------------------------------------------
// Corpus input

CorpusReader::CorpusReader(std::vector<std::filesystem::path> paths, CorpusOptions options)
    : options_(options) {
    namespace fs = std::filesystem;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::recursive_directory_iterator(p)) {
                if (entry.is_regular_file()) found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            files_.insert(files_.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(p)) {
            files_.push_back(p);
        } else {
            throw DataError("corpus path not found: " + p.string());
        }
    }
}

std::vector<std::string> CorpusReader::split(std::string_view text) const {
    auto tokens = options_.tokenize ? tokenize_basic(text) : split_whitespace(text);
    if (options_.normalize) {
        for (auto& t : tokens) t = normalize_token(t);
    }
    return tokens;
}

void CorpusReader::for_each_document(const std::function<void(std::vector<std::string>&)>& fn) const {
    for (const auto& path : files_) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("cannot open corpus file " + path.string());
        if (options_.mode == CorpusMode::Document) {
            std::ostringstream buf;
            buf << in.rdbuf();
            auto doc = split(buf.str());
            if (!doc.empty()) fn(doc);
        } else {
            std::string line;
            while (std::getline(in, line)) {
                auto doc = split(line);
                if (!doc.empty()) fn(doc);
            }
        }
    }
}

}  // namespace hellvec
