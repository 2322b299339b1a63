#ifndef HELLVEC_EVALSUITE_HPP
#define HELLVEC_EVALSUITE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hellvec/cooccur.hpp"
#include "hellvec/reduce.hpp"

namespace hellvec {

// ---------------------------------------------------------------------------
// Datasets

struct SimilarityPair {
    std::string word1;
    std::string word2;
    double human_score = 0.0;
    friend bool operator==(const SimilarityPair&, const SimilarityPair&) = default;
};

struct SimilarityDataset {
    std::vector<SimilarityPair> pairs;
};

enum class SimilarityFormat { Auto, Tab, Comma };

/// One pair per line, "word1<sep>word2<sep>score[<sep>...]". Blank lines and
/// lines starting with '#' are ignored; a first line whose score field is not
/// a number is taken as a header. Words go through normalize_token.
SimilarityDataset parse_similarity(std::istream& in, SimilarityFormat format = SimilarityFormat::Auto);
SimilarityDataset load_similarity(const std::filesystem::path& path, SimilarityFormat format = SimilarityFormat::Auto);

enum class AnalogySection { Semantic, Syntactic };

struct AnalogyQuestion {
    std::string a;
    std::string b;
    std::string c;
    std::string expected;
    AnalogySection section = AnalogySection::Semantic;
};

struct AnalogyDataset {
    std::vector<AnalogyQuestion> questions;
};

/// Lines of four space-separated words; ": name" lines open a section, which
/// is syntactic when its name contains "gram".
AnalogyDataset parse_analogy(std::istream& in);
AnalogyDataset load_analogy(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Statistics

/// Spearman rank correlation with average ranks for ties. nullopt when either
/// input is constant. Throws UsageError on empty or unequal-length input.
std::optional<double> spearman(std::span<const double> model_scores, std::span<const double> human_scores);

// ---------------------------------------------------------------------------
// Representations

/// Word lookup plus the two similarity functions evaluation needs. A word is
/// representable when it is in the vocabulary and its row is not a zero row.
class Representation {
public:
    explicit Representation(std::vector<std::string> words);
    virtual ~Representation() = default;

    std::size_t size() const { return words_.size(); }
    const std::string& word(std::uint32_t id) const { return words_[id]; }
    std::optional<std::uint32_t> find(std::string_view word) const;
    /// find() restricted to representable words.
    std::optional<std::uint32_t> lookup(std::string_view word) const;

    virtual bool representable(std::uint32_t id) const = 0;
    /// Negated Hellinger distance or cosine similarity.
    virtual double similarity(std::uint32_t a, std::uint32_t b) const = 0;
    /// Similarity mapped to [0, 1] for the multiplicative analogy objective.
    virtual double affinity(std::uint32_t a, std::uint32_t b) const = 0;
    /// affinity(id, x) for every x; entries of unrepresentable words are unspecified.
    std::vector<double> affinities(std::uint32_t id) const;

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Square-rooted distributions: similarity -H, affinity 1 - H. Keeps a
/// reference to the matrix.
class RawRepresentation : public Representation {
public:
    RawRepresentation(std::vector<std::string> words, const DistributionMatrix& m);

    bool representable(std::uint32_t id) const override;
    double similarity(std::uint32_t a, std::uint32_t b) const override;
    double affinity(std::uint32_t a, std::uint32_t b) const override;

private:
    const DistributionMatrix& m_;
};

/// Dense vectors: similarity cos, affinity (cos + 1) / 2. All-zero rows are
/// not representable.
class DenseRepresentation : public Representation {
public:
    DenseRepresentation(std::vector<std::string> words, const RowMatrix& vectors);

    bool representable(std::uint32_t id) const override;
    double similarity(std::uint32_t a, std::uint32_t b) const override;
    double affinity(std::uint32_t a, std::uint32_t b) const override;

private:
    double cosine(std::uint32_t a, std::uint32_t b) const;

    RowMatrix unit_;
    std::vector<bool> nonzero_;
};

// ---------------------------------------------------------------------------
// Scoring

/// nullopt ("skip") when either word is not representable.
std::optional<double> similarity_score(const Representation& repr, std::string_view w1, std::string_view w2);

constexpr double kAnalogyEpsilon = 0.001;

/// argmax over representable x not in {a, b, c} of
/// s(x, b) s(x, c) / (s(x, a) + epsilon); ties go to the lowest id.
/// nullopt when a question word is unrepresentable or no candidate remains.
std::optional<std::uint32_t> answer_analogy_3cosmul(const Representation& repr, std::uint32_t a, std::uint32_t b,
                                                    std::uint32_t c, double epsilon = kAnalogyEpsilon);
std::optional<std::uint32_t> answer_analogy_3cosmul(const Representation& repr, std::string_view a,
                                                    std::string_view b, std::string_view c,
                                                    double epsilon = kAnalogyEpsilon);

struct EvalReport {
    std::string task;
    /// nullopt when nothing was evaluated or the correlation is undefined.
    std::optional<double> score;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

/// Spearman over pairs with both words representable. Throws DataError when
/// every pair is skipped.
EvalReport evaluate_similarity(const Representation& repr, const SimilarityDataset& ds, std::string task = "similarity");

struct AnalogyReport {
    EvalReport semantic;
    EvalReport syntactic;
    EvalReport total;
};

/// Exact-match accuracy; questions with an unrepresentable word (expected
/// answer included) are skipped and left out of the denominator.
AnalogyReport evaluate_analogy(const Representation& repr, const AnalogyDataset& ds, double epsilon = kAnalogyEpsilon);

/// "task score evaluated skipped" with the score to 4 decimals, "n/a" if undefined.
std::string format_report(const EvalReport& report);

}  // namespace hellvec

#endif
