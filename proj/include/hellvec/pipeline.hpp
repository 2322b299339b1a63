#ifndef HELLVEC_PIPELINE_HPP
#define HELLVEC_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hellvec/cooccur.hpp"
#include "hellvec/corpus.hpp"
#include "hellvec/evalsuite.hpp"
#include "hellvec/hellinger.hpp"
#include "hellvec/infer.hpp"
#include "hellvec/reduce.hpp"

namespace hellvec {

enum class Reducer { Pca, Slra, None };

std::string_view to_string(Reducer r);
Reducer parse_reducer(std::string_view text);

struct PipelineConfig {
    std::vector<std::filesystem::path> corpus;
    CorpusOptions corpus_options;
    std::uint64_t min_count = 100;
    ContextScenario scenario = ContextScenario::top_k(10000);
    WindowSpec window{5, true};
    Reducer reducer = Reducer::Pca;
    std::size_t dim = 100;
    GramPrecision precision = GramPrecision::Float64;
    SlraHyperparams slra;
    std::uint64_t seed = 1;
    bool deterministic = false;
    std::filesystem::path out_dir = "hellvec-out";

    /// Applies one key=value setting; unknown keys and bad values throw UsageError.
    void set(std::string_view key, std::string_view value);
    /// Plain-text "key = value" lines; '#' starts a comment.
    void load_file(const std::filesystem::path& path);
    void validate() const;
};

// ---------------------------------------------------------------------------
// Artifacts

namespace artifact {
inline constexpr const char* kVocab = "vocab.txt";
inline constexpr const char* kCooc = "cooc.bin";
inline constexpr const char* kEncoder = "encoder.bin";
inline constexpr const char* kEmbeddings = "embeddings.txt";
}  // namespace artifact

/// Sidecar "<artifact>.meta": sorted key=value lines.
using Meta = std::map<std::string, std::string>;
std::filesystem::path meta_path(const std::filesystem::path& artifact);
void write_meta(const std::filesystem::path& artifact, const Meta& meta);
Meta read_meta(const std::filesystem::path& artifact);

/// Writes through a temporary file and renames, so readers never see a partial artifact.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill, bool binary);

Vocabulary load_vocabulary(const std::filesystem::path& dir);

/// Counts plus everything needed to interpret them.
struct CountedCorpus {
    Vocabulary vocab;
    ContextDictionary ctx;
    CooccurrenceMatrix counts;
};

/// Loads a cooc.bin (or the one inside a directory) with the vocab.txt beside
/// it and checks that the matrix was counted under that vocabulary's context
/// dictionary.
CountedCorpus load_counts(const std::filesystem::path& path);

struct LoadedEmbeddings {
    std::vector<std::string> words;
    RowMatrix vectors;
    Fingerprint fingerprint;
};
LoadedEmbeddings load_embeddings(const std::filesystem::path& path);

EncoderFile load_encoder(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Stages

/// Reads every document of the configured corpus, batching for parallel work.
void for_each_batch(const PipelineConfig& config,
                    const std::function<void(std::span<const std::vector<std::string>>)>& fn,
                    std::size_t batch_tokens = std::size_t{1} << 22);

Vocabulary run_vocab(const PipelineConfig& config);
CooccurrenceMatrix run_cooc(const PipelineConfig& config);

struct EmbedSummary {
    Reducer reducer = Reducer::None;
    std::size_t words = 0;
    std::size_t contexts = 0;
    std::size_t dim = 0;
    std::size_t zero_rows = 0;
    std::optional<double> reconstruction_error;
};
EmbedSummary run_embed(const PipelineConfig& config);

/// Dense representation from an embeddings file, or raw distributions from a
/// counts directory. Holds whatever the representation refers to.
class LoadedRepresentation {
public:
    static LoadedRepresentation dense(const std::filesystem::path& embeddings);
    static LoadedRepresentation raw(const std::filesystem::path& counts);
    /// embeddings.txt unless the embed stage ran with reducer none.
    static LoadedRepresentation from_output(const std::filesystem::path& dir);

    const Representation& representation() const { return *repr_; }
    bool is_raw() const { return raw_ != nullptr; }
    const DistributionMatrix& distributions() const { return *raw_; }
    const RowMatrix& vectors() const { return *dense_; }

private:
    std::unique_ptr<DistributionMatrix> raw_;
    std::unique_ptr<RowMatrix> dense_;
    std::unique_ptr<Representation> repr_;
};

enum class TaskKind { Similarity, Analogy };
TaskKind task_kind(std::string_view task);

/// One report for similarity tasks; semantic, syntactic and total for analogy.
std::vector<EvalReport> run_eval(const Representation& repr, std::string_view task, const std::filesystem::path& data);

/// Hellinger neighbors for raw distributions, cosine neighbors for embeddings.
NeighborList run_neighbors(const LoadedRepresentation& loaded, std::string_view word, std::size_t k);

struct InferResult {
    PhraseQuery phrase;
    std::size_t occurrences = 0;
    std::optional<Eigen::VectorXd> vector;
    NeighborList neighbors;
    /// Why no vector was produced.
    std::string error;
};

/// Counts all phrases in one corpus pass. Vocabulary, scenario and window come
/// from the artifacts next to the encoder; neighbors from embeddings.txt there.
std::vector<InferResult> run_infer(const PipelineConfig& config,
                                   const std::filesystem::path& encoder_path,
                                   const std::vector<std::string>& phrases,
                                   std::size_t k);

struct GridSpec {
    std::vector<ContextScenario> scenarios;
    std::vector<std::uint32_t> windows;
    std::vector<bool> symmetry;
    /// (task, dataset path)
    std::vector<std::pair<std::string, std::filesystem::path>> tasks;
};

/// One CSV row per (scenario, window, symmetry) cell. A failing cell is
/// recorded with its error and the grid continues. Returns the failed cell count.
std::size_t run_grid(const PipelineConfig& config, const GridSpec& grid, std::ostream& csv);

}  // namespace hellvec

#endif
